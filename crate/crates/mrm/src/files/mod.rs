//! JSON documents read and written by the tool.
//!
//! Every document carries a `format` tag. Rationals are strings `"p/q"`;
//! plain integers and decimals are accepted on input. Output is pretty JSON
//! with sorted keys, so equal values give equal bytes.

use std::fmt;

use mrm_core::rational::{self, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

mod advice;
mod instance;
mod lp;
mod scenario;
mod solution;

pub use advice::{
    advice_doc, check_advice, parse_advice, write_advice, AdviceDoc, RemovalDoc, ADVICE_FORMAT,
};
pub use instance::{parse_instance, write_instance, INSTANCE_FORMAT};
pub use lp::{check_lp, LpSummary};
pub use scenario::{parse_scenario, write_scenario, SCENARIO_FORMAT};
pub use solution::{
    check_solution, parse_solution, solution_doc, write_solution, SolutionDoc, Summary,
    SOLUTION_FORMAT,
};

/// A problem in an input document, located by a field path such as
/// `agents[2].rho`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct FileError {
    pub path: String,
    pub message: String,
}

impl FileError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// Exact rational in a document.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::to_pq(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(t) => t,
            Raw::Int(i) => i.to_string(),
        };
        rational::parse(&text)
            .map(Q)
            .map_err(serde::de::Error::custom)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub(crate) fn to_canonical<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

/// Deserializes with the failing field's path in the error.
pub(crate) fn from_text<T: DeserializeOwned>(text: &str) -> Result<T, FileError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        FileError::new(
            if path == "." {
                String::from("(document)")
            } else {
                path
            },
            e.into_inner(),
        )
    })?;
    de.end().map_err(|e| FileError::new("(document)", e))?;
    Ok(value)
}

pub(crate) fn check_format(found: &str, expected: &str) -> Result<(), FileError> {
    if found == expected {
        Ok(())
    } else {
        Err(FileError::new(
            "format",
            format!("expected {expected:?}, found {found:?}"),
        ))
    }
}

/// The `format` tag of a JSON document, if it has one.
pub fn format_tag(text: &str) -> Option<String> {
    #[derive(Deserialize)]
    struct Tag {
        format: String,
    }
    serde_json::from_str::<Tag>(text).ok().map(|t| t.format)
}
