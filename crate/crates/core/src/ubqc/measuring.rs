use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::harness::{Channel, Endpoint, Message, QuantumRegistry, SessionMeta, Topology, Transcript};
use crate::mbqc::{BrickworkGraph, MeasurementPattern, Register, Role, Vertex};
use crate::qcore::{Outcome, OutcomeSource, StateVector};

/// What the resource-preparing server actually builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ResourceServer {
    /// The brickwork graph state.
    #[default]
    Honest,
    /// Unentangled `|+>` qubits: right marginals, wrong correlations.
    ProductCheater,
}

#[derive(Clone, Debug)]
pub struct MeasuringRun {
    pub transcript: Transcript,
    pub outcomes: Vec<Option<u8>>,
    pub output: StateVector,
}

/// Server-to-client qubit stream.
///
/// The joint state lives in one register; what crosses the channel is the
/// custody reference for each vertex. The server creates a vertex's right
/// neighbour before releasing it, so it never holds more than `rows + 1`
/// qubits, and it never touches a qubit once released.
struct Stream {
    graph: BrickworkGraph,
    kind: ResourceServer,
    world: Register,
    ch: Channel,
    registry: QuantumRegistry<usize>,
    order: Vec<usize>,
    sent: usize,
}

impl Stream {
    fn open(graph: &BrickworkGraph, kind: ResourceServer, protocol: &str) -> Result<Self> {
        let meta =
            SessionMeta { protocol: protocol.into(), rows: graph.rows() as u32, cols: graph.cols() as u32, seed: 0 };
        let mut ch = Channel::new(Topology::SingleServer, meta);
        ch.send(
            Endpoint::Client,
            Endpoint::Server,
            Message::GraphDecl { rows: graph.rows() as u32, cols: graph.cols() as u32 },
        )?;
        ch.recv(Endpoint::Server)?;
        let order = (0..graph.cols())
            .flat_map(|c| (0..graph.rows()).map(move |r| (r, c)))
            .map(|(r, c)| graph.index(Vertex::new(r, c)))
            .collect();
        let mut s = Stream {
            graph: graph.clone(),
            kind,
            world: Register::new(),
            ch,
            registry: QuantumRegistry::new(),
            order,
            sent: 0,
        };
        for r in 0..graph.rows() {
            s.create(graph.index(Vertex::new(r, 0)))?;
        }
        Ok(s)
    }

    fn create(&mut self, v: usize) -> Result<()> {
        self.world.add(v, &StateVector::plus(1)?)?;
        if self.kind == ResourceServer::Honest {
            for &u in self.graph.neighbors(v) {
                if self.world.contains(u) {
                    self.world.cz(v, u)?;
                }
            }
        }
        Ok(())
    }

    /// Releases the next qubit; returns the vertex the client now holds.
    fn next(&mut self) -> Result<Option<usize>> {
        let Some(&v) = self.order.get(self.sent) else {
            return Ok(None);
        };
        self.sent += 1;
        if self.graph.vertex(v).col + 1 < self.graph.cols() {
            self.create(v + 1)?;
        }
        let reference = self.registry.deposit(v);
        self.ch.send(
            Endpoint::Server,
            Endpoint::Client,
            Message::QubitPayload { vertices: vec![v as u32], reference },
        )?;
        let Message::QubitPayload { reference, .. } = self.ch.recv(Endpoint::Client)?.1 else {
            return Err(Error::Protocol("client expected a qubit".into()));
        };
        let got = self.registry.resolve(reference)?;
        if got != v {
            return Err(Error::Ordering(format!("stream delivered {got}, expected {v}")));
        }
        Ok(Some(v))
    }

    fn close(self) -> Result<(Register, Transcript)> {
        if self.sent != self.order.len() {
            return Err(Error::Protocol("stream closed early".into()));
        }
        self.registry.close()?;
        Ok((self.world, self.ch.into_transcript()))
    }
}

/// Measuring-client session: the server streams the resource one qubit at a
/// time and the client measures each at its adapted angle. Nothing flows from
/// client to server after the graph declaration.
pub fn run_client_measuring<S: OutcomeSource + ?Sized>(
    pattern: &MeasurementPattern,
    server: ResourceServer,
    nature: &mut S,
) -> Result<MeasuringRun> {
    if pattern.roles().iter().any(|r| !matches!(r, Role::Compute | Role::Output)) {
        return Err(Error::Protocol("a measuring client has no use for dummy or trap vertices".into()));
    }
    let g = pattern.graph();
    let mut stream = Stream::open(g, server, "client-measuring")?;
    let measured: Vec<usize> = stream.order.iter().copied().filter(|&v| pattern.roles()[v] != Role::Output).collect();
    if measured != pattern.order() {
        return Err(Error::Ordering("the stream follows the column-major order".into()));
    }
    let mut outcomes = vec![None; pattern.n_vertices()];
    while let Some(v) = stream.next()? {
        if pattern.roles()[v] == Role::Output {
            continue;
        }
        let phi = pattern.adapted_angle(v, &outcomes)?;
        outcomes[v] = Some(stream.world.measure_xy(v, phi, nature)?.bit());
        stream.world.remove(v)?;
    }
    let (world, transcript) = stream.close()?;
    let outs = pattern.logical_outputs();
    let mut output = world.extract(&outs)?;
    for (i, &v) in outs.iter().enumerate() {
        let (sx, sz) = pattern.signals(v, &outcomes)?;
        output.apply_xz(i, sx, sz)?;
    }
    Ok(MeasuringRun { transcript, outcomes, output })
}

/// One stabiliser test round: the client measures `v` in the X basis and its
/// neighbours in the Z basis as they stream past. `Zero` means the parity
/// matched the `+1` eigenvalue of `K_v`.
pub fn stabilizer_round<S: OutcomeSource + ?Sized>(
    graph: &BrickworkGraph,
    server: ResourceServer,
    v: usize,
    nature: &mut S,
) -> Result<Outcome> {
    if v >= graph.n_vertices() {
        return Err(Error::Protocol(format!("vertex {v} is not in the graph")));
    }
    let mut stream = Stream::open(graph, server, "stabilizer-test")?;
    let mut parity = 0u8;
    while let Some(u) = stream.next()? {
        let bit = if u == v {
            stream.world.measure_xy(u, Angle8::ZERO, nature)?.bit()
        } else {
            let b = stream.world.measure_z(u, nature)?.bit();
            if graph.neighbors(v).contains(&u) {
                b
            } else {
                0
            }
        };
        parity ^= bit;
        stream.world.remove(u)?;
    }
    stream.close()?;
    Ok(Outcome::from_bit(parity))
}
