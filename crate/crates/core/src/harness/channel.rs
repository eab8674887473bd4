use std::collections::VecDeque;

use super::message::{Endpoint, Message};
use super::transcript::{SessionMeta, Transcript};
use crate::error::{Error, Result};

/// Which parties may talk to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Client and one server.
    SingleServer,
    /// Client and two servers that must never talk to each other.
    TwoServer,
}

/// One session's simulated channel.
///
/// Every send is appended to the transcript. The measurement phase is
/// checked for strict alternation: an angle for vertex `v` must be answered by
/// an outcome for `v` before the next angle, and angles follow the declared
/// order when one is set.
#[derive(Debug)]
pub struct Channel {
    topology: Topology,
    transcript: Transcript,
    inbox: [VecDeque<(Endpoint, Message)>; 3],
    awaiting: Option<u32>,
    order: Option<Vec<u32>>,
    next: usize,
}

impl Channel {
    pub fn new(topology: Topology, meta: SessionMeta) -> Self {
        Channel {
            topology,
            transcript: Transcript::new(meta),
            inbox: Default::default(),
            awaiting: None,
            order: None,
            next: 0,
        }
    }

    /// Fixes the vertex order in which angles must be sent.
    pub fn expect_order(&mut self, order: Vec<u32>) {
        self.order = Some(order);
        self.next = 0;
    }

    fn check_route(&self, from: Endpoint, to: Endpoint) -> Result<()> {
        use Endpoint::*;
        match (self.topology, from, to) {
            (_, a, b) if a == b => Err(Error::Topology(format!("{a:?} cannot send to itself"))),
            (Topology::TwoServer, Server, Server2) | (Topology::TwoServer, Server2, Server) => {
                Err(Error::Topology("servers are not allowed to communicate".into()))
            }
            (Topology::SingleServer, Server2, _) | (Topology::SingleServer, _, Server2) => {
                Err(Error::Topology("no second server in this session".into()))
            }
            _ => Ok(()),
        }
    }

    fn check_order(&mut self, msg: &Message) -> Result<()> {
        match *msg {
            Message::AngleMsg { vertex, .. } => {
                if let Some(w) = self.awaiting {
                    return Err(Error::Ordering(format!("angle for {vertex} sent while outcome for {w} pending")));
                }
                if let Some(order) = &self.order {
                    match order.get(self.next) {
                        Some(&want) if want == vertex => {}
                        want => return Err(Error::Ordering(format!("angle for {vertex} sent, expected {want:?}"))),
                    }
                }
                self.awaiting = Some(vertex);
            }
            Message::OutcomeMsg { vertex, .. } => {
                if self.awaiting != Some(vertex) {
                    return Err(Error::Ordering(format!("outcome for {vertex} without a pending angle")));
                }
                self.awaiting = None;
                self.next += 1;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn send(&mut self, from: Endpoint, to: Endpoint, msg: Message) -> Result<()> {
        self.check_route(from, to)?;
        self.check_order(&msg)?;
        self.transcript.push(from, to, msg.clone());
        self.inbox[to as usize].push_back((from, msg));
        Ok(())
    }

    /// Next message waiting for `at`, with its sender.
    pub fn recv(&mut self, at: Endpoint) -> Result<(Endpoint, Message)> {
        self.inbox[at as usize].pop_front().ok_or_else(|| Error::Protocol(format!("{at:?} has no pending message")))
    }

    pub fn pending(&self, at: Endpoint) -> usize {
        self.inbox[at as usize].len()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }
}
