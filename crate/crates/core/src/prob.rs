//! Probability results that carry their own numerical health.

use serde::{Deserialize, Serialize};

/// Slack allowed outside `[0, 1]` before a value is declared broken.
pub const RANGE_TOL: f64 = 1e-9;

/// Why a [`ProbValue`] is flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnostic {
    /// The value itself is NaN or infinite.
    NotFinite,
    /// The value lies outside `[-RANGE_TOL, 1 + RANGE_TOL]`.
    OutOfRange,
    /// An intermediate this value depends on was already flagged.
    Inherited,
    /// A geometric bound was requested for `C_* >= 1`.
    Saturated,
    /// Valid, but an upper bound above 1 carries no information.
    Vacuous,
}

/// A probability as computed, never clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbValue {
    pub value: f64,
    pub valid: bool,
    pub diagnostic: Option<Diagnostic>,
}

impl ProbValue {
    /// Wraps `value`, flagging it if it is not a plausible probability.
    pub fn checked(value: f64) -> Self {
        if !value.is_finite() {
            Self::flagged(value, Diagnostic::NotFinite)
        } else if !in_range(value) {
            Self::flagged(value, Diagnostic::OutOfRange)
        } else {
            Self { value, valid: true, diagnostic: None }
        }
    }

    /// Like [`ProbValue::checked`], but also invalid when `inputs_valid` is false.
    pub fn derived(value: f64, inputs_valid: bool) -> Self {
        let v = Self::checked(value);
        if v.valid && !inputs_valid {
            Self::flagged(value, Diagnostic::Inherited)
        } else {
            v
        }
    }

    pub fn exact(value: f64) -> Self {
        Self { value, valid: true, diagnostic: None }
    }

    pub fn flagged(value: f64, diagnostic: Diagnostic) -> Self {
        Self { value, valid: false, diagnostic: Some(diagnostic) }
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    pub fn one() -> Self {
        Self::exact(1.0)
    }
}

pub(crate) fn in_range(x: f64) -> bool {
    (-RANGE_TOL..=1.0 + RANGE_TOL).contains(&x)
}
