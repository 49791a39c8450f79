//! LLM classification of startup x occupation pairs.
//!
//! A [`Classifier`] renders the prompt for a [`PromptVariant`], looks the pair
//! up in the [`VerdictCache`], and on a miss queries a [`Backend`] with
//! retries, rate limiting and write-through caching. [`run_classification`]
//! fans this out over every pair with bounded concurrency and produces a
//! [`VerdictMatrix`] whose content does not depend on scheduling.
//!
//! [`MockBackend`] is a deterministic word-overlap classifier used as an
//! offline test fixture. It does not attempt to reproduce an LLM.

mod backend;
mod cache;
mod classify;
mod error;
mod matrix;
mod mock;
mod prompt;
mod ratelimit;
mod verdict;

pub use backend::{Backend, BackendError, ChatMessage, ChatRequest, HttpBackend, HttpConfig};
pub use cache::{cache_key, CacheEntry, VerdictCache};
pub use classify::{run_classification, ClassificationStats, Classifier, ClassifierConfig};
pub use error::GatewayError;
pub use matrix::VerdictMatrix;
pub use mock::{content_words, jaccard, MockBackend, DEFAULT_THRESHOLD};
pub use prompt::{render_prompt, Prompt, PromptVariant, SYSTEM_PROMPT};
pub use ratelimit::TokenBucket;
pub use verdict::{parse_verdict, Answer, Verdict};

pub type Result<T, E = GatewayError> = std::result::Result<T, E>;
