use std::sync::Arc;

use super::connectivity::ConnectivityMaker;
use super::View;
use crate::decompose::{extract_bipartite_core, BipartiteCore};
use crate::engine::{BoardKind, Forfeit, GameSpec, Player, Position, Strategy};
use crate::graph::Graph;
use crate::rational::{format_rational, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Main1Options {
    /// Skip the `χ(G) > 32/δ` hypothesis check.
    pub force: bool,
}

/// Maker for the edge odd-cycle game on dense graphs of large chromatic
/// number.
///
/// Stage I claims the witness edge inside `A` of a bipartite core; Stage II
/// builds a connected spanning subgraph of the core `H` with
/// [`ConnectivityMaker`]. A path in the bipartite `H` between the ends of
/// the witness edge has even length, so together with the edge it closes an
/// odd cycle.
#[derive(Clone, Debug)]
pub struct Main1Maker {
    delta: Rational,
    force: bool,
    core: Arc<BipartiteCore>,
    witness: usize,
    connect: ConnectivityMaker,
    stage: usize,
    turn_stage: usize,
}

impl Main1Maker {
    pub fn new(g: &Graph, delta: Rational, opts: Main1Options) -> Result<Self> {
        let core = extract_bipartite_core(g, delta, opts.force)?;
        let (u, v) = core.witness_edge.ok_or_else(|| Error::Internal("core without witness edge".into()))?;
        let witness = g.edge_id(u, v).ok_or_else(|| Error::Internal("witness edge not in host".into()))?;
        let h_edges: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(x, y))| (core.a.contains(x) && core.b.contains(y)) || (core.b.contains(x) && core.a.contains(y)))
            .map(|(i, _)| i)
            .collect();
        let connect = ConnectivityMaker::new(g, Some(&h_edges), Some(&core.vertices()), 1);
        Ok(Main1Maker { delta, force: opts.force, core: Arc::new(core), witness, connect, stage: 0, turn_stage: 0 })
    }

    pub fn core(&self) -> &BipartiteCore {
        &self.core
    }

    pub fn witness_edge(&self) -> usize {
        self.witness
    }
}

impl Strategy for Main1Maker {
    fn id(&self) -> String {
        format!("main1(delta={},force={})", format_rational(&self.delta), self.force)
    }

    fn begin(&mut self, _spec: &GameSpec, _seed: u64) {
        self.stage = 0;
    }

    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        if spec.board != BoardKind::Edge {
            return Err(Forfeit::new("main1 needs an edge board"));
        }
        self.turn_stage = self.stage;
        let mut view = View::new(pos);
        let mut picks = Vec::with_capacity(count);
        for _ in 0..count {
            if self.stage == 0 {
                if view.is_free(self.witness) {
                    view.take(self.witness, Player::Maker);
                    picks.push(self.witness);
                    self.stage = 1;
                    continue;
                }
                if !view.is_maker(self.witness) {
                    return Err(Forfeit::new("witness edge already claimed by Breaker"));
                }
                self.stage = 1;
            }
            let e = self
                .connect
                .next_claim(&spec.host, &view)
                .or_else(|| view.first_free())
                .ok_or_else(|| Forfeit::new("no unclaimed edge"))?;
            view.take(e, Player::Maker);
            picks.push(e);
        }
        Ok(picks)
    }

    fn note(&self) -> Option<String> {
        Some(if self.turn_stage == 0 { "stage=I" } else { "stage=II" }.into())
    }

    fn stage(&self) -> usize {
        self.stage
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
