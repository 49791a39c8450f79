use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GatewayError;
use crate::corpus::{Occupation, Startup};

pub const SYSTEM_PROMPT: &str = "You are an AI specialist.";

const STARTUP_PREFIX: &str = "Given the following startup description: ";
const JOB_INFIX: &str = " and given the following job description: ";

const REPLACE_QUESTION: &str = "can the product or service developed by the startup directly \
replace humans to perform some of the described job's tasks? Use only the information provided \
by the two descriptions. Reply only yes or no.";

const DESIGNED_QUESTION: &str = "Is the product or service developed by the startup designed to \
directly replace humans to perform some of the described job's tasks? Use only the information \
provided in the two descriptions. Reply only with yes or no.";

/// Question wording and startup description field of a classification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptVariant {
    /// "can ... directly replace" over the detailed description.
    ReplaceDetailed,
    /// "can ... directly replace" over the one-line description.
    ReplaceShort,
    /// "is ... designed to directly replace" over the detailed description.
    DesignedDetailed,
}

impl PromptVariant {
    pub const ALL: [PromptVariant; 3] = [
        PromptVariant::ReplaceDetailed,
        PromptVariant::ReplaceShort,
        PromptVariant::DesignedDetailed,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PromptVariant::ReplaceDetailed => "replace_detailed",
            PromptVariant::ReplaceShort => "replace_short",
            PromptVariant::DesignedDetailed => "designed_detailed",
        }
    }

    pub fn question(self) -> &'static str {
        match self {
            PromptVariant::ReplaceDetailed | PromptVariant::ReplaceShort => REPLACE_QUESTION,
            PromptVariant::DesignedDetailed => DESIGNED_QUESTION,
        }
    }

    /// The startup description this variant feeds to the model.
    pub fn startup_description(self, startup: &Startup) -> &str {
        match self {
            PromptVariant::ReplaceShort => &startup.short_desc,
            PromptVariant::ReplaceDetailed | PromptVariant::DesignedDetailed => &startup.long_desc,
        }
    }
}

impl fmt::Display for PromptVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PromptVariant {
    type Err = GatewayError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptVariant::ALL
            .into_iter()
            .find(|v| v.id() == s.trim())
            .ok_or_else(|| GatewayError::UnknownVariant(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    pub system: String,
    pub user: String,
}

/// Assembles the user message from its fragments with single-space joins.
pub(crate) fn user_text(variant: PromptVariant, startup_desc: &str, job_desc: &str) -> String {
    let question = variant.question();
    let mut s = String::with_capacity(
        STARTUP_PREFIX.len() + startup_desc.len() + JOB_INFIX.len() + job_desc.len() + question.len() + 1,
    );
    s.push_str(STARTUP_PREFIX);
    s.push_str(startup_desc);
    s.push_str(JOB_INFIX);
    s.push_str(job_desc);
    s.push(' ');
    s.push_str(question);
    s
}

/// Recovers `(startup description, job description)` from a rendered user
/// message.
pub(crate) fn split_user_text(user: &str) -> Option<(&str, &str)> {
    let rest = user.strip_prefix(STARTUP_PREFIX)?;
    let (startup, rest) = rest.split_once(JOB_INFIX)?;
    let job = [REPLACE_QUESTION, DESIGNED_QUESTION]
        .iter()
        .find_map(|q| rest.strip_suffix(q).and_then(|r| r.strip_suffix(' ')))?;
    Some((startup, job))
}

pub fn render_prompt(
    variant: PromptVariant,
    startup: &Startup,
    occupation: &Occupation,
) -> Result<Prompt, GatewayError> {
    let startup_desc = variant.startup_description(startup);
    if startup_desc.trim().is_empty() {
        return Err(GatewayError::EmptyDescription {
            what: format!("startup {}", startup.startup_id),
            variant: variant.id().into(),
        });
    }
    if occupation.description.trim().is_empty() {
        return Err(GatewayError::EmptyDescription {
            what: format!("occupation {}", occupation.soc_code),
            variant: variant.id().into(),
        });
    }
    Ok(Prompt {
        system: SYSTEM_PROMPT.to_string(),
        user: user_text(variant, startup_desc, &occupation.description),
    })
}
