//! Missing-digit inference for partially observed 4-digit PINs.
//!
//! A [`TrainedModel`] is a joint histogram of training PINs plus add-α
//! smoothing settings. Given an [`Observation`] (a PIN with one to three
//! digits hidden) it produces a [`CompletionDistribution`] over every way of
//! filling the hidden digits. The [`baselines`] module provides bigram,
//! Markov-chain and naive Bayes scorers over the same counts, and [`eval`]
//! measures any [`Scorer`] across the fourteen masking scenarios.
//!
//! ```
//! use pinlab_core::{predict, Corpus, ModelConfig, Observation, Pin, TrainedModel};
//!
//! let corpus: Corpus = ["1234", "1234", "1235", "9876"]
//!     .iter()
//!     .map(|s| s.parse::<Pin>().unwrap())
//!     .collect();
//! let model = TrainedModel::train(&corpus, ModelConfig::default());
//! let obs: Observation = "?234".parse().unwrap();
//! assert_eq!(predict(&model, &obs).to_string(), "1");
//! ```

pub mod baselines;
pub mod corpus;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod inference;
pub mod mask;
pub mod metrics;
pub mod model;

pub use baselines::{BigramModel, MarkovChainModel, NaiveBayesModel, PositionalCounts, ScorerKind};
pub use corpus::{
    extract_from_reader, extract_pins, load_corpus, save_corpus, split_corpus, Corpus, ExtractStats, Extraction, Pin,
    SplitConfig, TrainFraction,
};
pub use distribution::{CompletionDistribution, EstimationPath};
pub use error::{PinlabError, Result};
pub use eval::{evaluate_scenario, tau_sensitivity, ScenarioResult, TauResult};
pub use inference::{predict, rank_completions, true_rank, RankedCompletions, Scorer, UniformScorer};
pub use mask::{Candidate, MaskPattern, Observation};
pub use metrics::{expected_guess_rank, macro_metrics, topk_success, wald_interval, ConfusionTally, MacroMetrics};
pub use model::{deserialize_model, serialize_model, ModelConfig, PinHistogram, TrainedModel};
