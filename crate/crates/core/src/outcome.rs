use std::fmt;

use serde::{Deserialize, Serialize};

/// Result of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    NotFound,
    BudgetExhausted,
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_ref(&self) -> Outcome<&T> {
        match self {
            Outcome::Found(t) => Outcome::Found(t),
            Outcome::NotFound => Outcome::NotFound,
            Outcome::BudgetExhausted => Outcome::BudgetExhausted,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::NotFound => Outcome::NotFound,
            Outcome::BudgetExhausted => Outcome::BudgetExhausted,
        }
    }

    /// `Some(true)` for Found, `Some(false)` for NotFound, `None` otherwise.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            Outcome::Found(_) => Some(true),
            Outcome::NotFound => Some(false),
            Outcome::BudgetExhausted => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::NotFound => "not-found",
            Outcome::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// Why a checker rejected a tree. `location` is the path of child indices
/// from the root to the offending node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub location: Vec<usize>,
    pub reason: String,
}

impl Rejection {
    pub fn at(location: &[usize], reason: impl Into<String>) -> Rejection {
        Rejection {
            location: location.to_vec(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.location.is_empty() {
            write!(f, "at root: {}", self.reason)
        } else {
            let path: Vec<String> = self.location.iter().map(|i| i.to_string()).collect();
            write!(f, "at {}: {}", path.join("."), self.reason)
        }
    }
}

impl std::error::Error for Rejection {}

/// `Ok(())` is Accept.
pub type CheckResult = Result<(), Rejection>;
