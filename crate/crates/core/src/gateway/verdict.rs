use std::fmt;

use serde::{Deserialize, Serialize};

use super::PromptVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unparseable,
}

impl Answer {
    pub fn is_definitive(self) -> bool {
        !matches!(self, Answer::Unparseable)
    }

    /// One-letter code used in serialized matrices.
    pub fn code(self) -> char {
        match self {
            Answer::Yes => 'y',
            Answer::No => 'n',
            Answer::Unparseable => 'u',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'y' => Some(Answer::Yes),
            'n' => Some(Answer::No),
            'u' => Some(Answer::Unparseable),
            _ => None,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unparseable => "unparseable",
        })
    }
}

/// One classified (occupation, startup) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub soc_code: String,
    pub startup_id: String,
    pub variant: PromptVariant,
    pub answer: Answer,
    pub raw_response: String,
    pub model_id: String,
    pub retrieved_from_cache: bool,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// Maps a model reply to yes, no or unparseable.
///
/// A leading "yes"/"no" word decides. Otherwise the reply is accepted only
/// if exactly one of the two words occurs anywhere in it.
pub fn parse_verdict(raw: &str) -> Answer {
    let lower = raw.to_lowercase();
    let mut words = lower
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty());
    match words.next() {
        Some("yes") => return Answer::Yes,
        Some("no") => return Answer::No,
        None => return Answer::Unparseable,
        Some(_) => {}
    }
    let (mut yes, mut no) = (false, false);
    for w in words {
        yes |= w == "yes";
        no |= w == "no";
    }
    match (yes, no) {
        (true, false) => Answer::Yes,
        (false, true) => Answer::No,
        _ => Answer::Unparseable,
    }
}
