use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::formats::{from_json, to_json};
use crate::error::{Error, Result};
use crate::qcore::Pauli;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Ubqc,
    ClientMeasuring,
    TwoServer,
    Childs,
    ChildsHidden,
}

impl Protocol {
    fn takes_circuit_only(self) -> bool {
        matches!(self, Protocol::Childs | Protocol::ChildsHidden)
    }
}

/// The deviating server for a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum AdversarySpec {
    #[default]
    None,
    /// Complements every reported bit.
    FlipReports,
    /// X, Y or Z on a uniformly chosen vertex before the first measurement.
    RandomPauli,
    PauliAt {
        vertex: usize,
        pauli: Pauli,
    },
    /// Measuring-client server that streams `|+>` qubits without entangling.
    ProductResource,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExecSpec {
    #[default]
    Monolithic,
    Streamed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditKind {
    Exact,
    Sampled,
}

/// Blindness audit of the run's pattern against another pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSpec {
    pub against: PathBuf,
    pub mode: AuditKind,
    #[serde(default = "default_audit_trials")]
    pub trials: usize,
}

fn default_audit_trials() -> usize {
    100_000
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

/// One experiment. Relative paths are resolved against the config file's
/// directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<PathBuf>,
    pub seed: u64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "is_default")]
    pub adversary: AdversarySpec,
    #[serde(default, skip_serializing_if = "is_default")]
    pub exec: ExecSpec,
    /// Traps hidden in every session (ubqc only).
    #[serde(default, skip_serializing_if = "is_default")]
    pub traps: usize,
    /// Minimum number of gate cycles (childs-hidden only).
    #[serde(default, skip_serializing_if = "is_default")]
    pub min_cycles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSpec>,
    /// Include the first session's transcript in the report.
    #[serde(default, skip_serializing_if = "is_default")]
    pub transcript: bool,
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{name}: {msg}"))
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: ExperimentConfig = from_json(text, origin)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn validate(&self) -> Result<()> {
        use Protocol::*;
        if self.trials == 0 {
            return Err(field("trials", "must be at least 1"));
        }
        match (self.protocol.takes_circuit_only(), &self.pattern, &self.circuit) {
            (true, Some(_), _) => {
                return Err(field("pattern", format!("{:?} runs circuits, not patterns", self.protocol)))
            }
            (true, None, None) => return Err(field("circuit", "required")),
            (false, Some(_), Some(_)) => return Err(field("pattern", "give either a pattern or a circuit, not both")),
            (false, None, None) => return Err(field("pattern", "a pattern or a circuit is required")),
            _ => {}
        }
        let adversary_ok = match self.adversary {
            AdversarySpec::None => true,
            AdversarySpec::FlipReports | AdversarySpec::RandomPauli | AdversarySpec::PauliAt { .. } => {
                self.protocol == Ubqc
            }
            AdversarySpec::ProductResource => self.protocol == ClientMeasuring,
        };
        if !adversary_ok {
            return Err(field("adversary", format!("{:?} does not apply to {:?}", self.adversary, self.protocol)));
        }
        if self.traps > 0 && self.protocol != Ubqc {
            return Err(field("traps", "only ubqc sessions carry traps"));
        }
        if self.exec == ExecSpec::Streamed && self.protocol != Ubqc {
            return Err(field("exec", "only ubqc has a monolithic/streamed choice"));
        }
        if self.min_cycles > 0 && self.protocol != ChildsHidden {
            return Err(field("min_cycles", "only childs-hidden pads to a cycle count"));
        }
        if let Some(a) = &self.audit {
            if !matches!(self.protocol, Ubqc | TwoServer) {
                return Err(field("audit", "blindness audits cover ubqc and two-server sessions"));
            }
            if a.mode == AuditKind::Sampled && a.trials == 0 {
                return Err(field("audit.trials", "must be at least 1"));
            }
        }
        Ok(())
    }

    /// `path` resolved against `base`.
    pub fn resolve(base: &Path, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            base.join(path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(text, "cfg").unwrap()
    }

    fn err(text: &str) -> String {
        match ExperimentConfig::parse(text, "cfg") {
            Err(Error::Config(m)) => m,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimal_configs() {
        let c = ok(r#"{"protocol": "ubqc", "pattern": "p.json", "seed": 1, "trials": 10}"#);
        assert_eq!(c.adversary, AdversarySpec::None);
        let c = ok(r#"{"protocol": "childs-hidden", "circuit": "c.json", "seed": 1, "trials": 1, "min_cycles": 3}"#);
        assert_eq!(c.min_cycles, 3);
        let c = ok(r#"{"protocol": "ubqc", "circuit": "c.json", "seed": 1, "trials": 1,
                      "adversary": {"pauli-at": {"vertex": 2, "pauli": "Z"}}, "traps": 1}"#);
        assert_eq!(c.adversary, AdversarySpec::PauliAt { vertex: 2, pauli: Pauli::Z });
    }

    #[test]
    fn round_trip() {
        let c = ok(r#"{"protocol": "two-server", "pattern": "p.json", "seed": 7, "trials": 3,
                      "audit": {"against": "q.json", "mode": "sampled"}, "transcript": true}"#);
        assert_eq!(ExperimentConfig::parse(&c.to_json().unwrap(), "again").unwrap(), c);
    }

    #[test]
    fn validation_errors_name_the_field() {
        assert!(err(r#"{"protocol": "ubqc", "pattern": "p", "seed": 1, "trials": 0}"#).starts_with("trials"));
        assert!(err(r#"{"protocol": "childs", "pattern": "p", "seed": 1, "trials": 1}"#).starts_with("pattern"));
        assert!(err(r#"{"protocol": "two-server", "pattern": "p", "seed": 1, "trials": 1, "traps": 2}"#)
            .starts_with("traps"));
        assert!(err(r#"{"protocol": "childs", "circuit": "c", "seed": 1, "trials": 1, "adversary": "flip-reports"}"#)
            .starts_with("adversary"));
        let m = err("{\"protocol\": \"ubqc\",\n\"pattern\": \"p\", \"seed\": 1, \"trials\": 1, \"trails\": 2}");
        assert!(m.contains("trails") && m.contains("line 2"), "{m}");
        assert!(err(r#"{"protocol": "qkd", "pattern": "p", "seed": 1, "trials": 1}"#).contains("qkd"));
    }
}
