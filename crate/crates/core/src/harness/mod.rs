//! Term generation and the property suites.

mod corpus;
mod gen;
mod suites;

use serde::{Deserialize, Serialize};

use crate::syntax::Type;

pub use corpus::{read_corpus, write_corpus, CorpusError, CorpusLine, Expect};
pub use gen::{context_scheme, enumerate_typed, sample_typed, Enumerator, GenError, Sampler};
pub use suites::{
    run_suite, run_suite_on, run_suites, shrink, Corpus, CorpusSummary, Coverage, Failure, RunReport, SuiteName,
    SuiteReport, UnknownSuite,
};

/// Generation and checking parameters shared by all suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub max_size: usize,
    pub seed: u64,
    pub sample_count: usize,
    /// Upper size bound for randomly sampled terms.
    pub sample_max_size: usize,
    pub type_pool: Vec<Type>,
    pub depth: usize,
    pub fuel: usize,
    /// Instances per run of the int and delta lemma suites, spread evenly
    /// over the corpus.
    pub lemma_cases: usize,
    /// Sampled judgements checked by the adequation suite, on top of the
    /// whole exhaustive corpus.
    pub adequation_samples: usize,
}

pub const MAX_DEPTH: usize = 3;

pub fn default_type_pool() -> Vec<Type> {
    let p = Type::var("P");
    let q = Type::var("Q");
    vec![
        p.clone(),
        q.clone(),
        Type::Bottom,
        Type::arrow(p.clone(), q.clone()),
        Type::and(p.clone(), q.clone()),
        Type::or(p.clone(), q),
        Type::arrow(Type::negation(Type::negation(p.clone())), p),
    ]
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_size: 8,
            seed: 42,
            sample_count: 10_000,
            sample_max_size: 20,
            type_pool: default_type_pool(),
            depth: 2,
            fuel: crate::reduction::DEFAULT_FUEL,
            lemma_cases: 4_000,
            adequation_samples: 500,
        }
    }
}
