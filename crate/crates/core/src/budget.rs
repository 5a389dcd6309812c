use serde::{Deserialize, Serialize};

/// Whether a run's parameters are required to satisfy a lemma's stated
/// thresholds (`Guaranteed`: every precondition is checked and any failed
/// step is a defect) or not (`BestEffort`: output validity is still
/// enforced but shortfalls are reported instead of raised).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Guaranteed,
    BestEffort,
}

impl Mode {
    pub fn is_guaranteed(self) -> bool {
        matches!(self, Mode::Guaranteed)
    }
}

/// Search-tree node cap plus wall-clock cap for exponential searches.
///
/// The wall-clock cap is only enforced with the `std` feature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 50_000_000,
            max_seconds: 3600.0,
        }
    }
}

impl OracleBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        OracleBudget {
            max_nodes,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.max_nodes == 0 || self.max_seconds.is_nan() || self.max_seconds <= 0.0 {
            return Err(crate::error::invalid!(
                "budget caps must be positive (nodes={}, seconds={})",
                self.max_nodes,
                self.max_seconds
            ));
        }
        Ok(())
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter::new(*self)
    }
}

/// Result of an exhaustive search. `Exhausted` is never a proof: it carries
/// the best object found before the budget ran out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "value", rename_all = "snake_case")]
pub enum Search<T> {
    Exact(T),
    Exhausted(T),
}

impl<T> Search<T> {
    pub fn value(&self) -> &T {
        match self {
            Search::Exact(v) | Search::Exhausted(v) => v,
        }
    }

    pub fn into_value(self) -> T {
        match self {
            Search::Exact(v) | Search::Exhausted(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Search::Exact(_))
    }
}

pub(crate) struct Meter {
    used: u64,
    max_nodes: u64,
    exhausted: bool,
    #[cfg(feature = "std")]
    deadline: Option<std::time::Instant>,
}

impl Meter {
    fn new(budget: OracleBudget) -> Self {
        Meter {
            used: 0,
            max_nodes: budget.max_nodes,
            exhausted: false,
            #[cfg(feature = "std")]
            deadline: core::time::Duration::try_from_secs_f64(budget.max_seconds)
                .ok()
                .and_then(|d| std::time::Instant::now().checked_add(d)),
        }
    }

    /// Counts one search node; returns false once the budget is spent.
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.used += 1;
        if self.used > self.max_nodes {
            self.exhausted = true;
            return false;
        }
        #[cfg(feature = "std")]
        if self.used.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if std::time::Instant::now() >= deadline {
                    self.exhausted = true;
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }
}
