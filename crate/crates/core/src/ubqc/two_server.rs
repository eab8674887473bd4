use rand::RngCore;

use super::adversary::Adversary;
use super::client::{ClientKeys, ClientState, DeltaSign};
use super::rsp::{bell_pair, rsp_measure, RSP_PAIR};
use super::server::ServerState;
use super::session::Session;
use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::harness::{Channel, Endpoint, Message, QuantumRegistry, SessionMeta, Topology, Transcript};
use crate::mbqc::{MeasurementPattern, Register, Role};
use crate::qcore::OutcomeSource;

#[derive(Clone, Debug, Default)]
pub struct TwoServerOptions {
    /// Fixed remote-preparation angles (one per vertex) instead of random ones.
    pub alphas: Option<Vec<Angle8>>,
    pub sign: DeltaSign,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct TwoServerRun {
    pub transcript: Transcript,
    /// Z-basis readout of the logical outputs, decoded, in row order.
    pub output_bits: Vec<u8>,
    pub client: ClientState,
}

/// Classical client driving two non-communicating servers that share one
/// entangled pair per vertex.
///
/// The client asks the second server to measure its half of pair `v` at a
/// random angle `alpha`; the first server's half is then `Z^o |+_alpha>`, which
/// plays the role of a prepared qubit with keys `theta = -alpha`, `r = o`.
/// The first server then runs the ordinary protocol and finally reads out the
/// output qubits in the computational basis.
pub fn run_two_server<R, S>(
    pattern: &MeasurementPattern,
    opts: &TwoServerOptions,
    rng: &mut R,
    nature: &mut S,
) -> Result<TwoServerRun>
where
    R: RngCore + ?Sized,
    S: OutcomeSource + ?Sized,
{
    if pattern.roles().iter().any(|r| !matches!(r, Role::Compute | Role::Output)) {
        return Err(Error::Protocol("two-server mode handles computation and output vertices only".into()));
    }
    let n = pattern.n_vertices();
    if let Some(a) = &opts.alphas {
        if a.len() != n {
            return Err(Error::Protocol(format!("{} preparation angles for {n} pairs", a.len())));
        }
    }
    let g = pattern.graph();
    let meta =
        SessionMeta { protocol: "two-server".into(), rows: g.rows() as u32, cols: g.cols() as u32, seed: opts.seed };
    let mut s: Session<'_, dyn Adversary> = Session {
        ch: Channel::new(Topology::TwoServer, meta),
        registry: QuantumRegistry::new(),
        server: ServerState::new(g.clone()),
        adversary: None,
        peak: 0,
    };
    s.ch.expect_order(pattern.order().iter().map(|&v| v as u32).collect());
    s.ch.send(Endpoint::Client, Endpoint::Server, Message::GraphDecl { rows: g.rows() as u32, cols: g.cols() as u32 })?;
    s.ch.recv(Endpoint::Server)?;

    let mut keys = ClientKeys {
        r: vec![0; n],
        theta: vec![Angle8::ZERO; n],
        decoy: vec![Angle8::ZERO; n],
        input_x: vec![0; pattern.logical_rows()],
    };
    for v in 0..n {
        let alpha = match (&opts.alphas, pattern.roles()[v]) {
            (_, Role::Output) => Angle8::ZERO,
            (Some(a), _) => a[v],
            (None, _) => Angle8::random(rng),
        };
        s.ch.send(Endpoint::Client, Endpoint::Server2, Message::RspRequest { pair: v as u32, angle: alpha })?;
        let Message::RspRequest { pair, angle } = s.ch.recv(Endpoint::Server2)?.1 else {
            return Err(Error::Protocol("second server expected a preparation request".into()));
        };
        let (o, half) = rsp_measure(&bell_pair(RSP_PAIR), angle, nature)?;
        s.ch.send(Endpoint::Server2, Endpoint::Client, Message::RspOutcome { pair, bit: o.bit() })?;
        let Message::RspOutcome { bit, .. } = s.ch.recv(Endpoint::Client)?.1 else {
            return Err(Error::Protocol("client expected a preparation outcome".into()));
        };
        keys.r[v] = bit;
        keys.theta[v] = -alpha;
        // The first server's half has been in its custody since setup.
        let mut held = Register::new();
        held.add(v, &half)?;
        s.server.receive(held)?;
    }
    let mut client = ClientState::new(pattern.clone(), keys, opts.sign)?;
    s.server.entangle()?;
    for &v in pattern.order() {
        s.round(&mut client, v, nature)?;
    }
    let mut readout = Vec::new();
    for v in s.server.unmeasured() {
        let bit = s.server.measure_z(v, nature)?.bit();
        s.ch.send(Endpoint::Server, Endpoint::Client, Message::OutputMeasured { vertex: v as u32, bit })?;
        let Message::OutputMeasured { vertex, bit } = s.ch.recv(Endpoint::Client)?.1 else {
            return Err(Error::Protocol("client expected an output readout".into()));
        };
        readout.push((vertex as usize, bit));
    }
    let output_bits = client.classical_output(&readout)?;
    s.registry.close()?;
    Ok(TwoServerRun { transcript: s.ch.into_transcript(), output_bits, client })
}
