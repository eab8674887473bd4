use num_complex::Complex64 as C64;

use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::qcore::{Gate, Mat2};

pub type Mat4 = [[C64; 4]; 4];

const O: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[O; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut r = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    r
}

fn adjoint4(a: &Mat4) -> Mat4 {
    let mut r = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[j][i].conj();
        }
    }
    r
}

/// `top (x) bottom` with the top row on the low bit.
fn kron(top: &Mat2, bottom: &Mat2) -> Mat4 {
    let mut r = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = top[i & 1][j & 1] * bottom[i >> 1][j >> 1];
        }
    }
    r
}

fn cz4() -> Mat4 {
    let mut r = [[O; 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = if i == 3 { -ONE } else { ONE };
    }
    r
}

fn cnot4(control_top: bool) -> Mat4 {
    let mut r = [[O; 4]; 4];
    let (c, t) = if control_top { (0, 1) } else { (1, 0) };
    // CNOT is its own inverse, so row `new` has its one at column `cnot(new)`.
    for (new, row) in r.iter_mut().enumerate() {
        let old = if (new >> c) & 1 == 1 { new ^ (1 << t) } else { new };
        row[old] = ONE;
    }
    r
}

fn h() -> Mat2 {
    Gate::H(0).matrix_1q().expect("single-qubit")
}

fn rz(a: Angle8) -> Mat2 {
    crate::qcore::rz(a)
}

/// Unitary carried along a row by measuring vertices at `angles` in turn:
/// each step contributes `H Rz(-a)`.
pub fn chain_unitary(angles: &[Angle8]) -> Mat2 {
    let h = h();
    angles.iter().fold([[ONE, O], [O, ONE]], |acc, &a| mul2(&mul2(&h, &rz(-a)), &acc))
}

/// Unitary of one brick: `angles[0..4]` on the top row, `angles[4..8]` on the bottom row.
pub fn brick_unitary(angles: &[Angle8; 8]) -> Mat4 {
    let first = kron(&chain_unitary(&angles[0..2]), &chain_unitary(&angles[4..6]));
    let second = kron(&chain_unitary(&angles[2..4]), &chain_unitary(&angles[6..8]));
    let cz = cz4();
    mul4(&cz, &mul4(&second, &mul4(&cz, &first)))
}

/// `|Tr(a^dag b)| / d`; equals 1 exactly when `a` and `b` agree up to a global phase.
fn overlap2(a: &Mat2, b: &Mat2) -> f64 {
    let t: C64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[i][j].conj() * b[i][j]).sum();
    t.norm() / 2.0
}

fn overlap4(a: &Mat4, b: &Mat4) -> f64 {
    let t: C64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| a[i][j].conj() * b[i][j]).sum();
    t.norm() / 4.0
}

const MATCH_TOL: f64 = 1e-9;

pub fn same_up_to_phase2(a: &Mat2, b: &Mat2) -> bool {
    overlap2(a, b) > 1.0 - MATCH_TOL
}

pub fn same_up_to_phase4(a: &Mat4, b: &Mat4) -> bool {
    overlap4(a, b) > 1.0 - MATCH_TOL
}

/// Exhaustive search over the 8^4 angle choices of a single-row cell.
pub fn search_single(target: &Mat2) -> Option<[Angle8; 4]> {
    let all: Vec<Angle8> = Angle8::all().collect();
    for &a in &all {
        for &b in &all {
            for &c in &all {
                for &d in &all {
                    let cand = [a, b, c, d];
                    if same_up_to_phase2(&chain_unitary(&cand), target) {
                        return Some(cand);
                    }
                }
            }
        }
    }
    None
}

/// Exhaustive search over the 8^8 angle choices of a brick.
pub fn search_brick(target: &Mat4) -> Option<[Angle8; 8]> {
    let pairs: Vec<[Angle8; 2]> = Angle8::all().flat_map(|a| Angle8::all().map(move |b| [a, b])).collect();
    let p: Vec<Mat2> = pairs.iter().map(|ab| chain_unitary(ab)).collect();
    let cz = cz4();
    // U = CZ K2 CZ K1, so Tr(T^dag U) = sum_{ab} (T^dag CZ K2 CZ)_{ab} (K1)_{ba}.
    let tdag = adjoint4(target);
    let lefts: Vec<(usize, usize, Mat4)> = (0..64)
        .flat_map(|t| (0..64).map(move |b| (t, b)))
        .map(|(t, b)| (t, b, mul4(&tdag, &mul4(&cz, &mul4(&kron(&p[t], &p[b]), &cz)))))
        .collect();
    for t1 in 0..64 {
        for b1 in 0..64 {
            let k1 = kron(&p[t1], &p[b1]);
            for (t2, b2, l) in &lefts {
                let mut tr = O;
                for i in 0..4 {
                    for j in 0..4 {
                        tr += l[i][j] * k1[j][i];
                    }
                }
                if tr.norm() / 4.0 > 1.0 - MATCH_TOL {
                    let (top1, bot1, top2, bot2) = (pairs[t1], pairs[b1], pairs[*t2], pairs[*b2]);
                    return Some([top1[0], top1[1], top2[0], top2[1], bot1[0], bot1[1], bot2[0], bot2[1]]);
                }
            }
        }
    }
    None
}

/// Table key for a single-qubit gate: `H`, `X`, `Y`, or `RZ<k>`.
pub fn single_key(g: &Gate) -> Result<String> {
    Ok(match g {
        Gate::H(_) => "H".into(),
        Gate::X(_) => "X".into(),
        Gate::Y(_) => "Y".into(),
        Gate::Z(_) => "RZ4".into(),
        Gate::S(_) => "RZ2".into(),
        Gate::T(_) => "RZ1".into(),
        Gate::Rz(_, a) => format!("RZ{}", a.k()),
        other => return Err(Error::InvalidCircuit(format!("{other} is not a single-qubit gate"))),
    })
}

/// Target unitary of a single-qubit table key.
pub fn single_target(key: &str) -> Result<Mat2> {
    let g = match key {
        "H" => Gate::H(0),
        "X" => Gate::X(0),
        "Y" => Gate::Y(0),
        k => {
            let n: u8 = k
                .strip_prefix("RZ")
                .and_then(|s| s.parse().ok())
                .filter(|&n| n < 8)
                .ok_or_else(|| Error::Unrepresentable(k.to_string()))?;
            Gate::Rz(0, Angle8::new(n as i64))
        }
    };
    Ok(g.matrix_1q().expect("single-qubit"))
}

/// Target unitary of a brick table key: `CNOT_DOWN`, `CNOT_UP`, `TOP_<key>` or `BOTTOM_<key>`.
pub fn brick_target(key: &str) -> Result<Mat4> {
    let id = [[ONE, O], [O, ONE]];
    match key {
        "CNOT_DOWN" => Ok(cnot4(true)),
        "CNOT_UP" => Ok(cnot4(false)),
        k => {
            if let Some(s) = k.strip_prefix("TOP_") {
                Ok(kron(&single_target(s)?, &id))
            } else if let Some(s) = k.strip_prefix("BOTTOM_") {
                Ok(kron(&id, &single_target(s)?))
            } else {
                Err(Error::Unrepresentable(k.to_string()))
            }
        }
    }
}

/// Angles (in units of pi/4) realising each single-row cell, found by [`search_single`].
pub const SINGLE_TABLE: &[(&str, [u8; 4])] = &[
    ("H", [0, 2, 2, 2]),
    ("X", [0, 0, 0, 4]),
    ("Y", [0, 0, 4, 4]),
    ("RZ0", [0, 0, 0, 0]),
    ("RZ1", [0, 0, 7, 0]),
    ("RZ2", [0, 0, 6, 0]),
    ("RZ3", [0, 0, 5, 0]),
    ("RZ4", [0, 0, 4, 0]),
    ("RZ5", [0, 0, 3, 0]),
    ("RZ6", [0, 0, 2, 0]),
    ("RZ7", [0, 0, 1, 0]),
];

/// Angles realising each brick, found by [`search_brick`].
pub const BRICK_TABLE: &[(&str, [u8; 8])] = &[
    ("CNOT_DOWN", [0, 0, 2, 0, 0, 2, 0, 6]),
    ("CNOT_UP", [0, 2, 0, 6, 0, 0, 2, 0]),
    ("TOP_H", [2, 2, 2, 0, 0, 0, 0, 0]),
    ("BOTTOM_H", [0, 0, 0, 0, 2, 2, 2, 0]),
    ("TOP_X", [0, 0, 0, 4, 0, 0, 4, 0]),
    ("BOTTOM_X", [0, 0, 4, 0, 0, 0, 0, 4]),
    ("TOP_Y", [0, 0, 4, 4, 0, 0, 4, 0]),
    ("BOTTOM_Y", [0, 0, 4, 0, 0, 0, 4, 4]),
    ("TOP_RZ0", [0, 0, 0, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ0", [0, 0, 0, 0, 0, 0, 0, 0]),
    ("TOP_RZ1", [0, 0, 7, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ1", [0, 0, 0, 0, 0, 0, 7, 0]),
    ("TOP_RZ2", [0, 0, 6, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ2", [0, 0, 0, 0, 0, 0, 6, 0]),
    ("TOP_RZ3", [0, 0, 5, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ3", [0, 0, 0, 0, 0, 0, 5, 0]),
    ("TOP_RZ4", [0, 0, 4, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ4", [0, 0, 0, 0, 0, 0, 4, 0]),
    ("TOP_RZ5", [0, 0, 3, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ5", [0, 0, 0, 0, 0, 0, 3, 0]),
    ("TOP_RZ6", [0, 0, 2, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ6", [0, 0, 0, 0, 0, 0, 2, 0]),
    ("TOP_RZ7", [0, 0, 1, 0, 0, 0, 0, 0]),
    ("BOTTOM_RZ7", [0, 0, 0, 0, 0, 0, 1, 0]),
];

pub(crate) fn single_cell(key: &str) -> Result<[Angle8; 4]> {
    SINGLE_TABLE
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, a)| a.map(|k| Angle8::new(k as i64)))
        .ok_or_else(|| Error::Unrepresentable(key.to_string()))
}

pub(crate) fn brick_cell(key: &str) -> Result<[Angle8; 8]> {
    BRICK_TABLE
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, a)| a.map(|k| Angle8::new(k as i64)))
        .ok_or_else(|| Error::Unrepresentable(key.to_string()))
}

pub const SINGLE_KEYS: [&str; 11] = ["H", "X", "Y", "RZ0", "RZ1", "RZ2", "RZ3", "RZ4", "RZ5", "RZ6", "RZ7"];

#[cfg(test)]
mod tests {
    use super::*;

    fn ang<const N: usize>(a: [u8; N]) -> [Angle8; N] {
        a.map(|k| Angle8::new(k as i64))
    }

    #[test]
    fn single_table_entries_realise_their_gates() {
        assert_eq!(SINGLE_TABLE.len(), SINGLE_KEYS.len());
        for (k, a) in SINGLE_TABLE {
            assert!(same_up_to_phase2(&chain_unitary(&ang(*a)), &single_target(k).unwrap()), "{k}");
        }
    }

    #[test]
    fn brick_table_entries_realise_their_gates() {
        assert_eq!(BRICK_TABLE.len(), 2 + 2 * SINGLE_KEYS.len());
        for (k, a) in BRICK_TABLE {
            assert!(same_up_to_phase4(&brick_unitary(&ang(*a)), &brick_target(k).unwrap()), "{k}");
        }
    }

    #[test]
    fn search_recovers_a_valid_cell() {
        let t = single_target("H").unwrap();
        assert!(same_up_to_phase2(&chain_unitary(&search_single(&t).unwrap()), &t));
        let t = brick_target("CNOT_UP").unwrap();
        assert!(same_up_to_phase4(&brick_unitary(&search_brick(&t).unwrap()), &t));
    }

    #[test]
    fn cz_is_not_a_single_brick() {
        assert!(search_brick(&cz4()).is_none());
    }

    #[test]
    fn chain_step_is_h_after_rz() {
        let u = chain_unitary(&[Angle8::PI_4]);
        let want = mul2(&h(), &rz(-Angle8::PI_4));
        assert!(same_up_to_phase2(&u, &want));
        assert!(single_target("RZ9").is_err());
        assert!(brick_target("SWAP").is_err());
    }
}
