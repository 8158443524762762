use std::fmt;

use ramify::filtration::FiltrationError;
use ramify::herbrand::HerbrandError;
use ramify::pc::PcError;
use ramify::planner::PlanError;
use serde::Serialize;
use serde_json::Value;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exit {
    Ok = 0,
    Malformed = 1,
    Infeasible = 2,
    Inconsistent = 3,
    CapExceeded = 4,
}

/// Error report written to stderr as one JSON line.
#[derive(Debug, Serialize)]
pub struct CliError {
    #[serde(skip)]
    pub exit: Exit,
    /// Machine-readable reason.
    pub code: &'static str,
    pub message: String,
    /// Offending file, flag or index.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CliError {
    pub fn malformed(
        code: &'static str,
        message: impl Into<String>,
        location: impl Into<String>,
    ) -> Self {
        CliError {
            exit: Exit::Malformed,
            code,
            message: message.into(),
            location: Some(location.into()),
            detail: None,
        }
    }

    pub fn at(mut self, location: impl Into<String>) -> Self {
        if self.location.is_none() {
            self.location = Some(location.into());
        }
        self
    }

    pub fn report(&self) -> String {
        serde_json::json!({ "error": self, "exit": self.exit as i32 }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<PcError> for CliError {
    fn from(e: PcError) -> Self {
        let message = e.to_string();
        let (exit, code, location, detail) = match &e {
            PcError::Inconsistent(w) => (
                Exit::Inconsistent,
                "inconsistent",
                None,
                serde_json::to_value(w).ok(),
            ),
            PcError::CapExceeded { .. } => (
                Exit::CapExceeded,
                "cap-exceeded",
                Some("RAMIFY_CAP".to_string()),
                None,
            ),
            PcError::NotPrime(_) => (Exit::Malformed, "not-prime", Some("p".into()), None),
            PcError::IndexOutOfRange { index, .. } => (
                Exit::Malformed,
                "index-out-of-range",
                Some(format!("generator {}", index + 1)),
                None,
            ),
            PcError::NotLaterGenerator { relation, .. } => (
                Exit::Malformed,
                "not-later-generator",
                Some(relation.clone()),
                None,
            ),
            PcError::CommutatorOrder { j, i } => (
                Exit::Malformed,
                "commutator-order",
                Some(format!("comm j={} i={}", j + 1, i + 1)),
                None,
            ),
            PcError::ExponentOutOfRange { .. } => {
                (Exit::Malformed, "exponent-out-of-range", None, None)
            }
            PcError::DimensionMismatch { .. } => {
                (Exit::Malformed, "dimension-mismatch", None, None)
            }
            PcError::NotNormal(_) => (Exit::Malformed, "not-normal", None, None),
            PcError::TowerRelation(_) => (Exit::Malformed, "tower-relation", None, None),
            PcError::DepthTooSmall { .. } => (
                Exit::Malformed,
                "depth-too-small",
                Some("depth".into()),
                None,
            ),
            PcError::Malformed(_) => (Exit::Malformed, "malformed-presentation", None, None),
        };
        CliError {
            exit,
            code,
            message,
            location,
            detail,
        }
    }
}

impl From<HerbrandError> for CliError {
    fn from(e: HerbrandError) -> Self {
        let (exit, code, location) = match &e {
            HerbrandError::NonPositiveBreak(_) => (
                Exit::Malformed,
                "non-positive-break",
                Some("break".to_string()),
            ),
            HerbrandError::NotPrime(_) => (Exit::Malformed, "not-prime", Some("p".into())),
            HerbrandError::NegativeArgument(x) => {
                (Exit::Malformed, "negative-argument", Some(x.clone()))
            }
            HerbrandError::NonIncreasingFiltration { index, .. } => (
                Exit::Infeasible,
                "non-increasing-filtration",
                Some(format!("step {index}")),
            ),
            HerbrandError::EmptyTower => (Exit::Malformed, "empty-tower", Some("breaks".into())),
            HerbrandError::Malformed(_) => (Exit::Malformed, "malformed-function", None),
        };
        CliError {
            exit,
            code,
            message: e.to_string(),
            location,
            detail: None,
        }
    }
}

impl From<FiltrationError> for CliError {
    fn from(e: FiltrationError) -> Self {
        let message = e.to_string();
        let (code, location, detail) = match e {
            FiltrationError::Group(g) => return g.into(),
            FiltrationError::ZeroValue(x) => ("zero-value", Some(x.to_string()), None),
            FiltrationError::IdentityAssigned(_) => ("identity-assigned", Some("1".into()), None),
            FiltrationError::Duplicate(x) => ("duplicate-element", Some(x.to_string()), None),
            FiltrationError::Missing(x) => ("missing-value", Some(x.to_string()), None),
            FiltrationError::Invalid(f) => (
                "not-a-filtration",
                Some(format!("G_{}", f.level)),
                serde_json::to_value(&*f).ok(),
            ),
            FiltrationError::NegativeUpper(u) => ("negative-upper", Some(u), None),
            FiltrationError::NonIntegralBreak { element, .. } => {
                ("non-integral-break", Some(element.to_string()), None)
            }
        };
        CliError {
            exit: Exit::Malformed,
            code,
            message,
            location,
            detail,
        }
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        let message = e.to_string();
        if let PlanError::Herbrand(h) = e {
            let mut c = CliError::from(h);
            c.exit = Exit::Infeasible;
            return c;
        }
        let (code, location) = match &e {
            PlanError::NotPrime(_) => ("not-prime", Some("p".to_string())),
            PlanError::Inadmissible { n, .. } => ("inadmissible", Some(format!("n={n}"))),
            PlanError::BelowStepBreak { n, depth, .. } => {
                ("below-step-break", Some(format!("n={n} depth={depth}")))
            }
            PlanError::NonIntegralBound { .. } => ("non-integral-bound", Some("p".into())),
            PlanError::MissingEps(d) => ("missing-eps", Some(format!("eps[{d}]"))),
            PlanError::NonIncreasing { n, .. } => ("non-increasing", Some(format!("n={n}"))),
            PlanError::HorizonMismatch(..) => ("horizon-mismatch", None),
            PlanError::Malformed(_) => ("malformed-plan", None),
            PlanError::Herbrand(_) => unreachable!(),
        };
        let exit = if e.is_infeasible() {
            Exit::Infeasible
        } else {
            Exit::Malformed
        };
        CliError {
            exit,
            code,
            message,
            location,
            detail: None,
        }
    }
}
