use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_graph, redexes, step, ReduceError, ReductionStep};
use crate::syntax::{alpha_eq, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    /// Uniformly random redex at each step, reproducible from the seed.
    Random(u64),
    /// Builds the whole reduction graph and insists on a single normal
    /// form; the trace is the leftmost-outermost path.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: ReductionStep,
    pub result: Term,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub term: Term,
    pub trace: Vec<TraceStep>,
}

/// Reduces `t` to normal form. `fuel` bounds the number of steps for the
/// single-path strategies and the number of node expansions for
/// `Exhaustive`.
pub fn normalize(t: &Term, strategy: Strategy, fuel: usize) -> Result<Normalized, ReduceError> {
    match strategy {
        Strategy::LeftmostOutermost => follow(t, fuel, |steps| steps.into_iter().next()),
        Strategy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            follow(t, fuel, move |steps| steps.choose(&mut rng).cloned())
        }
        Strategy::Exhaustive => {
            let graph = build_graph(t, fuel)?;
            let nfs = graph.normal_forms();
            if nfs.len() != 1 {
                return Err(ReduceError::NotConfluent(nfs.into_iter().cloned().collect()));
            }
            // the graph is finite, so the leftmost-outermost path ends
            let out = follow(t, graph.eta() + 1, |steps| steps.into_iter().next())?;
            debug_assert!(alpha_eq(&out.term, nfs[0]));
            Ok(out)
        }
    }
}

fn follow(
    t: &Term,
    fuel: usize,
    mut choose: impl FnMut(Vec<ReductionStep>) -> Option<ReductionStep>,
) -> Result<Normalized, ReduceError> {
    let mut current = t.clone();
    let mut trace = Vec::new();
    loop {
        let Some(s) = choose(redexes(&current)) else {
            return Ok(Normalized { term: current, trace });
        };
        if trace.len() == fuel {
            return Err(ReduceError::FuelExhausted(fuel));
        }
        current = step(&current, &s)?;
        trace.push(TraceStep { step: s, result: current.clone() });
    }
}

/// One line per step: `<path> <kind> : <term after the step>`.
pub fn format_trace(trace: &[TraceStep]) -> String {
    trace.iter().map(|t| format!("{} : {}\n", t.step, t.result)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::RedexKind;
    use crate::syntax::parse_term;

    fn tm(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn identity_application() {
        let n = normalize(&tm("(\\x:P.x) y"), Strategy::LeftmostOutermost, 10).unwrap();
        assert_eq!(n.term, tm("y"));
        assert_eq!(n.trace.len(), 1);
        assert_eq!(n.trace[0].step, ReductionStep { path: vec![], kind: RedexKind::Beta });
    }

    #[test]
    fn peirce_applied() {
        let t = tm("(\\x:(P->Q)->P. mu a:P. [a](x (\\y:P. mu b:Q. [a] y))) f");
        let expected = tm("mu a:P. [a](f (\\y:P. mu b:Q. [a] y))");
        for s in [Strategy::LeftmostOutermost, Strategy::Random(7), Strategy::Exhaustive] {
            assert!(alpha_eq(&normalize(&t, s, 1000).unwrap().term, &expected));
        }
    }

    #[test]
    fn permutation_then_normal() {
        let n = normalize(&tm("(z case[P/\\Q]{x. x | y. y}) p1"), Strategy::Exhaustive, 100).unwrap();
        assert_eq!(n.term, tm("z case[P]{x. x p1 | y. y p1}"));
        assert_eq!(n.trace.len(), 1);
    }

    #[test]
    fn trace_format() {
        let n = normalize(&tm("(mu a:P->P. [a] f) y"), Strategy::LeftmostOutermost, 10).unwrap();
        assert_eq!(format_trace(&n.trace), "root classical : mu a:P. [a] (f y)\n");
        let n = normalize(&tm("<(\\x:P.x) y, z> p1"), Strategy::LeftmostOutermost, 10).unwrap();
        assert_eq!(format_trace(&n.trace), "root proj1 : (\\x:P. x) y\nroot beta : y\n");
    }

    #[test]
    fn divergence_runs_out_of_fuel() {
        let omega = tm("(\\x:P. x x) (\\x:P. x x)");
        assert_eq!(
            normalize(&omega, Strategy::LeftmostOutermost, 50).unwrap_err(),
            ReduceError::FuelExhausted(50)
        );
        assert!(normalize(&omega, Strategy::Exhaustive, 50).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let t = tm("<(\\x:P.x) ((\\x:P.x) y), (\\x:P.x) z>");
        let a = normalize(&t, Strategy::Random(3), 10).unwrap();
        let b = normalize(&t, Strategy::Random(3), 10).unwrap();
        assert_eq!(a.trace, b.trace);
    }
}
