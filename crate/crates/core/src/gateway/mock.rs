use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::prompt::split_user_text;
use super::{Backend, BackendError, ChatRequest};

pub const DEFAULT_THRESHOLD: f64 = 0.05;

const STOP_WORDS: &[&str] = &[
    "a", "about", "across", "all", "also", "an", "and", "any", "are", "as", "at", "be", "been",
    "being", "both", "but", "by", "can", "could", "did", "do", "does", "each", "for", "from", "had",
    "has", "have", "he", "her", "his", "how", "i", "if", "in", "into", "is", "it", "its", "may",
    "more", "most", "my", "of", "on", "or", "other", "our", "out", "over", "she", "should", "so",
    "some", "such", "than", "that", "the", "their", "them", "then", "there", "these", "they",
    "this", "those", "through", "to", "up", "us", "was", "we", "were", "what", "when", "where",
    "which", "while", "who", "will", "with", "would", "you", "your",
];

/// Lower-cased alphanumeric words of `text`, minus stop words.
pub fn content_words(text: &str) -> BTreeSet<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty() && !STOP_WORDS.contains(w))
        .map(str::to_string)
        .collect()
}

/// Jaccard similarity of the content-word sets; 0 when both are empty.
pub fn jaccard(a: &str, b: &str) -> f64 {
    let (a, b) = (content_words(a), content_words(b));
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Deterministic offline backend: answers "yes" when the word-overlap
/// (Jaccard) between the startup and job descriptions reaches the threshold.
///
/// A test fixture for exercising the pipeline end to end. It says nothing
/// about how a language model would answer.
#[derive(Debug)]
pub struct MockBackend {
    threshold: f64,
    calls: AtomicUsize,
}

impl MockBackend {
    pub fn new(threshold: f64) -> Self {
        MockBackend {
            threshold,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Number of `complete` calls served so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Default for MockBackend {
    fn default() -> Self {
        MockBackend::new(DEFAULT_THRESHOLD)
    }
}

impl Backend for MockBackend {
    fn complete(&self, request: &ChatRequest) -> Result<String, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let user = request
            .user_content()
            .ok_or_else(|| BackendError::Protocol("no user message".into()))?;
        let (startup, job) = split_user_text(user)
            .ok_or_else(|| BackendError::Protocol("unrecognized prompt layout".into()))?;
        let reply = if jaccard(startup, job) >= self.threshold {
            "yes"
        } else {
            "no"
        };
        Ok(reply.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::super::prompt::{user_text, PromptVariant};
    use super::*;

    const FIXTURE_STARTUP: &str =
        "Acme builds software that turns raw sales data into automated weekly reports for finance teams.";
    const FIXTURE_JOB: &str = "Compile data, prepare reports, and maintain records of medical histories, \
        laboratory results, patient billing, insurance claims, appointment schedules, supply inventories \
        and hospital correspondence.";

    fn ask(backend: &MockBackend, startup: &str, job: &str) -> String {
        let req = ChatRequest::new(
            "mock",
            "sys",
            &user_text(PromptVariant::ReplaceDetailed, startup, job),
            4,
        );
        backend.complete(&req).unwrap()
    }

    #[test]
    fn identical_texts_say_yes() {
        let b = MockBackend::default();
        assert_eq!(ask(&b, "Automated invoice processing", "Automated invoice processing"), "yes");
    }

    #[test]
    fn disjoint_texts_say_no() {
        let b = MockBackend::default();
        assert_eq!(ask(&b, "Robotic lawn mowers", "Teach children arithmetic"), "no");
        assert_eq!(b.calls(), 1);
    }

    #[test]
    fn fixture_pair_overlap() {
        // Hand-counted word sets: 12 startup words, 20 job words, shared {data, reports}.
        let startup: BTreeSet<String> = [
            "acme", "builds", "software", "turns", "raw", "sales", "data", "automated", "weekly",
            "reports", "finance", "teams",
        ]
        .map(String::from)
        .into();
        let job: BTreeSet<String> = [
            "compile", "data", "prepare", "reports", "maintain", "records", "medical", "histories",
            "laboratory", "results", "patient", "billing", "insurance", "claims", "appointment",
            "schedules", "supply", "inventories", "hospital", "correspondence",
        ]
        .map(String::from)
        .into();
        assert_eq!(content_words(FIXTURE_STARTUP), startup);
        assert_eq!(content_words(FIXTURE_JOB), job);

        let j = jaccard(FIXTURE_STARTUP, FIXTURE_JOB);
        assert_eq!(j, 2.0 / 30.0);
        assert!((j - 0.0667).abs() < 1e-4);
        assert_eq!(ask(&MockBackend::new(0.05), FIXTURE_STARTUP, FIXTURE_JOB), "yes");
        assert_eq!(ask(&MockBackend::new(0.07), FIXTURE_STARTUP, FIXTURE_JOB), "no");
    }

    #[test]
    fn foreign_prompt_is_protocol_error() {
        let b = MockBackend::default();
        let req = ChatRequest::new("mock", "sys", "hello", 4);
        assert!(matches!(b.complete(&req), Err(BackendError::Protocol(_))));
    }
}
