use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{embed_eterm, redexes, step, ReduceError, ReductionStep};
use crate::syntax::{canonical, ETerm, Seq, Term};

/// The full reduction graph of a term, nodes identified up to alpha.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    nodes: Vec<Term>,
    edges: Vec<Vec<(ReductionStep, usize)>>,
    longest: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub eta: usize,
    pub normal_forms: usize,
}

/// Explores every reduct of `root`, expanding at most `fuel` nodes.
///
/// Fails with `FuelExhausted` if the graph is larger than that and with
/// `Cycle` if some term reduces to itself.
pub fn build_graph(root: &Term, fuel: usize) -> Result<ReductionGraph, ReduceError> {
    build_graph_bounded(root, fuel, usize::MAX)
}

/// Like [`build_graph`], but also gives up as soon as some reduct has
/// more than `max_size` nodes. Used where memory matters more than a
/// definite answer.
pub fn build_graph_bounded(root: &Term, fuel: usize, max_size: usize) -> Result<ReductionGraph, ReduceError> {
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut nodes = vec![root.clone()];
    let mut edges: Vec<Vec<(ReductionStep, usize)>> = vec![Vec::new()];
    index.insert(canonical(root), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0;
    while let Some(id) = queue.pop_front() {
        if expanded == fuel {
            return Err(ReduceError::FuelExhausted(fuel));
        }
        expanded += 1;
        let t = nodes[id].clone();
        for s in redexes(&t) {
            let r = step(&t, &s).expect("redexes yields valid steps");
            let key = canonical(&r);
            let target = match index.get(&key) {
                Some(&j) => j,
                None => {
                    // every queued node will be expanded, so the fuel
                    // cannot last once the queue outgrows it
                    if nodes.len() >= fuel || r.size() > max_size {
                        return Err(ReduceError::FuelExhausted(fuel));
                    }
                    let j = nodes.len();
                    index.insert(key, j);
                    nodes.push(r);
                    edges.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            edges[id].push((s, target));
        }
    }
    let longest = longest_paths(&edges)?;
    Ok(ReductionGraph { nodes, edges, longest })
}

/// Longest path length from every node; errors on a cycle.
fn longest_paths(edges: &[Vec<(ReductionStep, usize)>]) -> Result<Vec<usize>, ReduceError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = edges.len();
    let mut mark = vec![Mark::New; n];
    let mut longest = vec![0usize; n];
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        mark[start] = Mark::Open;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if let Some((_, w)) = edges[v].get(top.1) {
                top.1 += 1;
                let w = *w;
                match mark[w] {
                    Mark::Open => return Err(ReduceError::Cycle),
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                longest[v] = edges[v].iter().map(|(_, w)| longest[*w] + 1).max().unwrap_or(0);
                mark[v] = Mark::Done;
                stack.pop();
            }
        }
    }
    Ok(longest)
}

impl ReductionGraph {
    pub fn root(&self) -> &Term {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[Term] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Vec<(ReductionStep, usize)>] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Length of the longest reduction sequence from the root.
    pub fn eta(&self) -> usize {
        self.longest[0]
    }

    /// Longest reduction sequence from node `i`.
    pub fn eta_of(&self, i: usize) -> usize {
        self.longest[i]
    }

    /// Indices of the nodes without reducts.
    pub fn normal_form_ids(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.edges[i].is_empty()).collect()
    }

    pub fn normal_forms(&self) -> Vec<&Term> {
        self.normal_form_ids().into_iter().map(|i| &self.nodes[i]).collect()
    }

    /// Index of the node alpha-equal to `t`, if reachable.
    pub fn find(&self, t: &Term) -> Option<usize> {
        let key = canonical(t);
        self.nodes.iter().position(|n| canonical(n) == key)
    }

    /// How many edges use each of the five rule schemata.
    pub fn schema_counts(&self) -> [usize; 5] {
        let mut counts = [0; 5];
        for (s, _) in self.edges.iter().flatten() {
            counts[s.kind.schema()] += 1;
        }
        counts
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            nodes: self.node_count(),
            edges: self.edge_count(),
            eta: self.eta(),
            normal_forms: self.normal_form_ids().len(),
        }
    }
}

/// Outcome of a strong-normalization check. `Unknown` is returned when
/// the graph could not be completed; it is never a false `Sn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SnVerdict {
    Sn { graph_size: usize, eta: usize },
    Unknown,
}

impl SnVerdict {
    pub fn is_sn(self) -> bool {
        matches!(self, SnVerdict::Sn { .. })
    }
}

pub fn is_sn(t: &Term, fuel: usize) -> SnVerdict {
    match build_graph(t, fuel) {
        Ok(g) => SnVerdict::Sn { graph_size: g.node_count(), eta: g.eta() },
        Err(_) => SnVerdict::Unknown,
    }
}

/// [`is_sn`] with a bound on the size of every reduct.
pub fn is_sn_bounded(t: &Term, fuel: usize, max_size: usize) -> SnVerdict {
    match build_graph_bounded(t, fuel, max_size) {
        Ok(g) => SnVerdict::Sn { graph_size: g.node_count(), eta: g.eta() },
        Err(_) => SnVerdict::Unknown,
    }
}

pub fn is_sn_eterm(e: &ETerm, fuel: usize) -> SnVerdict {
    match e {
        ETerm::Arg(t) => is_sn(t, fuel),
        _ => is_sn(&embed_eterm(e), fuel),
    }
}

/// `η(t)`: the length of the longest reduction sequence from `t`.
pub fn eta(t: &Term, fuel: usize) -> Result<usize, ReduceError> {
    Ok(build_graph(t, fuel)?.eta())
}

/// `η` on E-terms; projections have none, a case sums its branches.
pub fn eta_eterm(e: &ETerm, fuel: usize) -> Result<usize, ReduceError> {
    match e {
        ETerm::Arg(t) => eta(t, fuel),
        _ => eta(&embed_eterm(e), fuel),
    }
}

/// `η(w̄) = Σ η(wᵢ)`.
pub fn eta_seq(seq: &Seq, fuel: usize) -> Result<usize, ReduceError> {
    seq.iter().map(|w| eta_eterm(w, fuel)).sum()
}
