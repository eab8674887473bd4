use rand::RngCore;

use super::adversary::Adversary;
use super::client::{client_decode, client_delta, ClientKeys, ClientState, DeltaSign, Payload};
use super::server::ServerState;
use crate::error::{Error, Result};
use crate::harness::{Channel, Endpoint, Message, QuantumRegistry, SessionMeta, Topology, Transcript};
use crate::mbqc::{MeasurementPattern, Register};
use crate::qcore::{OutcomeSource, StateVector};

/// How the server holds the resource.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecMode {
    /// All payloads first, then the whole graph is entangled.
    #[default]
    Monolithic,
    /// Payloads arrive column by column; the server holds at most `rows + 1` qubits.
    Streamed,
}

#[derive(Clone, Debug, Default)]
pub struct UbqcOptions {
    /// Logical input (default `|+>` on every row).
    pub input: Option<StateVector>,
    pub mode: ExecMode,
    pub sign: DeltaSign,
    /// Fixed client keys instead of sampling them.
    pub keys: Option<ClientKeys>,
    /// Recorded in the transcript metadata.
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct UbqcRun {
    pub transcript: Transcript,
    pub output: StateVector,
    pub client: ClientState,
    /// Largest number of qubits the server held at once.
    pub peak_server_qubits: usize,
}

pub(super) struct Session<'a, A: ?Sized> {
    pub(super) ch: Channel,
    pub(super) registry: QuantumRegistry<Register>,
    pub(super) server: ServerState,
    pub(super) adversary: Option<&'a mut A>,
    pub(super) peak: usize,
}

impl<A: Adversary + ?Sized> Session<'_, A> {
    fn deliver(&mut self, payload: Payload, streamed: bool) -> Result<()> {
        let vertices = payload.vertices.iter().map(|&v| v as u32).collect();
        let reference = self.registry.deposit(payload.into_register()?);
        self.ch.send(Endpoint::Client, Endpoint::Server, Message::QubitPayload { vertices, reference })?;
        let Message::QubitPayload { reference, .. } = self.ch.recv(Endpoint::Server)?.1 else {
            return Err(Error::Protocol("server expected a qubit payload".into()));
        };
        let reg = self.registry.resolve(reference)?;
        if streamed {
            self.server.receive_streamed(reg)?;
        } else {
            self.server.receive(reg)?;
        }
        self.peak = self.peak.max(self.server.held_qubits());
        Ok(())
    }

    pub(super) fn round<S: OutcomeSource + ?Sized>(
        &mut self,
        client: &mut ClientState,
        v: usize,
        nature: &mut S,
    ) -> Result<()> {
        let delta = client_delta(client, v)?;
        self.ch.send(Endpoint::Client, Endpoint::Server, Message::AngleMsg { vertex: v as u32, delta })?;
        let Message::AngleMsg { delta, .. } = self.ch.recv(Endpoint::Server)?.1 else {
            return Err(Error::Protocol("server expected an angle".into()));
        };
        self.server.record_delta(v, delta);
        let mut used = delta;
        if let Some(adv) = self.adversary.as_deref_mut() {
            let paulis = adv.before_measure(self.server.view(), v);
            self.server.deviate(paulis)?;
            used = adv.alter_delta(self.server.view(), v, delta);
        }
        let mut b = self.server.measure(v, used, nature)?.bit();
        if let Some(adv) = self.adversary.as_deref_mut() {
            b = adv.alter_report(self.server.view(), v, b) & 1;
        }
        self.server.record_report(v, b);
        self.ch.send(Endpoint::Server, Endpoint::Client, Message::OutcomeMsg { vertex: v as u32, bit: b })?;
        let Message::OutcomeMsg { bit, .. } = self.ch.recv(Endpoint::Client)?.1 else {
            return Err(Error::Protocol("client expected an outcome".into()));
        };
        client_decode(client, v, bit)?;
        Ok(())
    }
}

/// Runs one honest-client session with default options.
pub fn run_ubqc<R, S>(
    pattern: &MeasurementPattern,
    adversary: Option<&mut dyn Adversary>,
    rng: &mut R,
    nature: &mut S,
) -> Result<UbqcRun>
where
    R: RngCore + ?Sized,
    S: OutcomeSource + ?Sized,
{
    run_ubqc_with(pattern, &UbqcOptions::default(), adversary, rng, nature)
}

/// Runs one session: key sampling uses `rng`, the server's measurement
/// outcomes come from `nature`.
pub fn run_ubqc_with<R, S, A>(
    pattern: &MeasurementPattern,
    opts: &UbqcOptions,
    adversary: Option<&mut A>,
    rng: &mut R,
    nature: &mut S,
) -> Result<UbqcRun>
where
    R: RngCore + ?Sized,
    S: OutcomeSource + ?Sized,
    A: Adversary + ?Sized,
{
    let keys = match &opts.keys {
        Some(k) => k.clone(),
        None => ClientKeys::sample(pattern, rng),
    };
    let mut client = ClientState::new(pattern.clone(), keys, opts.sign)?;
    let payloads = client.payloads(opts.input.as_ref())?;
    let g = pattern.graph();
    let meta = SessionMeta { protocol: "ubqc".into(), rows: g.rows() as u32, cols: g.cols() as u32, seed: opts.seed };
    let mut s = Session {
        ch: Channel::new(Topology::SingleServer, meta),
        registry: QuantumRegistry::new(),
        server: ServerState::new(g.clone()),
        adversary,
        peak: 0,
    };
    s.ch.expect_order(pattern.order().iter().map(|&v| v as u32).collect());
    s.ch.send(Endpoint::Client, Endpoint::Server, Message::GraphDecl { rows: g.rows() as u32, cols: g.cols() as u32 })?;
    s.ch.recv(Endpoint::Server)?;

    let streamed = opts.mode == ExecMode::Streamed;
    let mut pending: Vec<Option<Payload>> = vec![None; pattern.n_vertices()];
    let mut first = None;
    for pl in payloads {
        if pl.vertices.len() == 1 && g.vertex(pl.vertices[0]).col > 0 {
            let v = pl.vertices[0];
            pending[v] = Some(pl);
        } else if first.is_none() {
            first = Some(pl);
        } else {
            // Column-0 padding vertices.
            let v = pl.vertices[0];
            pending[v] = Some(pl);
        }
    }
    s.deliver(first.ok_or(Error::EmptyRegister)?, streamed)?;
    if streamed {
        for r in 0..g.rows() {
            let v = g.index(crate::mbqc::Vertex::new(r, 0));
            if let Some(pl) = pending[v].take() {
                s.deliver(pl, true)?;
            }
        }
    } else {
        for pl in pending.iter_mut().filter_map(Option::take) {
            s.deliver(pl, false)?;
        }
        s.server.entangle()?;
    }
    for &v in pattern.order() {
        if streamed {
            if let Some(pl) = pending.get_mut(v + 1).and_then(Option::take) {
                s.deliver(pl, true)?;
            }
        }
        s.round(&mut client, v, nature)?;
        if streamed {
            s.server.discard(v)?;
        }
    }
    if pending.iter().any(Option::is_some) {
        return Err(Error::Protocol("some payloads were never sent".into()));
    }
    let out = s.server.release_unmeasured()?;
    let vertices = out.labels().iter().map(|&v| v as u32).collect();
    let reference = s.registry.deposit(out);
    s.ch.send(Endpoint::Server, Endpoint::Client, Message::QubitPayload { vertices, reference })?;
    let Message::QubitPayload { reference, .. } = s.ch.recv(Endpoint::Client)?.1 else {
        return Err(Error::Protocol("client expected the output qubits".into()));
    };
    let returned = s.registry.resolve(reference)?;
    let output = client.output(returned)?;
    s.registry.close()?;
    Ok(UbqcRun { transcript: s.ch.into_transcript(), output, client, peak_server_qubits: s.peak })
}
