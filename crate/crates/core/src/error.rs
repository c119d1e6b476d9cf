use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rate `{name}` must be positive (got {value})")]
    NonPositiveRate { name: &'static str, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("feedback overdrive: zeta = {zeta} >= kappa = {kappa}")]
    FeedbackOverdrive { zeta: f64, kappa: f64 },

    #[error("feedback reduction zeta = {zeta} needs eta > 0 and kappa1 > 0")]
    UnreachableFeedback { zeta: f64 },

    #[error("cooperativity must be non-negative (got {0})")]
    NegativeCooperativity(f64),

    #[error("linear system singular at omega = {omega} (condition estimate {condition:e})")]
    SingularAtFrequency { omega: f64, condition: f64 },

    #[error("mechanical response vanishes at omega = {omega}")]
    ZeroResponse { omega: f64 },

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,

    #[error("stability classification does not change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("mechanical response never drops below half maximum within the search window")]
    NoHalfCrossing,

    #[error("parameters are dynamically unstable")]
    Unstable,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Coarse classification used for exit codes and per-cell error records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parameter,
    Numerical,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::NonPositiveRate { .. }
            | Error::InvalidParameter { .. }
            | Error::FeedbackOverdrive { .. }
            | Error::UnreachableFeedback { .. }
            | Error::NegativeCooperativity(_)
            | Error::InvalidGrid(_) => ErrorCategory::Parameter,
            Error::SingularAtFrequency { .. }
            | Error::ZeroResponse { .. }
            | Error::EigenFailure
            | Error::NoSignChange { .. }
            | Error::NoHalfCrossing
            | Error::Unstable => ErrorCategory::Numerical,
        }
    }

    /// Short machine-readable tag, e.g. `singular_at_frequency`.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::NonPositiveRate { .. } => "non_positive_rate",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::FeedbackOverdrive { .. } => "feedback_overdrive",
            Error::UnreachableFeedback { .. } => "unreachable_feedback",
            Error::NegativeCooperativity(_) => "negative_cooperativity",
            Error::SingularAtFrequency { .. } => "singular_at_frequency",
            Error::ZeroResponse { .. } => "zero_response",
            Error::EigenFailure => "eigen_failure",
            Error::NoSignChange { .. } => "no_sign_change",
            Error::NoHalfCrossing => "no_half_crossing",
            Error::Unstable => "unstable",
            Error::InvalidGrid(_) => "invalid_grid",
        }
    }
}

/// Category of an error recorded only by its [`Error::tag`], as in scan rows.
pub fn category_of_tag(tag: &str) -> Option<ErrorCategory> {
    match tag {
        "non_positive_rate" | "invalid_parameter" | "feedback_overdrive" | "unreachable_feedback"
        | "negative_cooperativity" | "invalid_grid" => Some(ErrorCategory::Parameter),
        "singular_at_frequency" | "zero_response" | "eigen_failure" | "no_sign_change"
        | "no_half_crossing" | "unstable" => Some(ErrorCategory::Numerical),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_map_back_to_categories() {
        let all = [
            Error::NonPositiveRate { name: "gamma", value: 0.0 },
            Error::InvalidParameter { name: "eta", reason: String::new() },
            Error::FeedbackOverdrive { zeta: 1.0, kappa: 1.0 },
            Error::UnreachableFeedback { zeta: 1.0 },
            Error::NegativeCooperativity(-1.0),
            Error::SingularAtFrequency { omega: 0.0, condition: 1e20 },
            Error::ZeroResponse { omega: 0.0 },
            Error::EigenFailure,
            Error::NoSignChange { lo: 0.0, hi: 1.0 },
            Error::NoHalfCrossing,
            Error::Unstable,
            Error::InvalidGrid(String::new()),
        ];
        for e in all {
            assert_eq!(category_of_tag(e.tag()), Some(e.category()), "{}", e.tag());
        }
        assert_eq!(category_of_tag("io"), None);
    }
}
