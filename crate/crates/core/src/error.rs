use thiserror::Error;

pub type Result<T> = std::result::Result<T, HopfError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HopfError {
    /// An input violates a mathematical precondition (zero quaternion,
    /// non-unit point, singular gauge formula, too few samples, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Stereographic projection requested at or next to its pole.
    #[error("pole error: {0}")]
    Pole(String),

    /// Two curves or base points are too close for a well-conditioned answer.
    #[error("proximity error: {0}")]
    Proximity(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Neither the line nor the circle model explains the point set.
    #[error("ambiguous fit: line residual {line_residual:e}, circle residual {circle_residual:e}")]
    Fit {
        line_residual: f64,
        circle_residual: f64,
    },

    /// A computed result contradicts a structural guarantee.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

impl HopfError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HopfError::Domain(msg.into())
    }

    pub(crate) fn pole(msg: impl Into<String>) -> Self {
        HopfError::Pole(msg.into())
    }

    /// Prefixes the message with extra context, keeping the variant.
    pub fn context(self, ctx: &str) -> Self {
        match self {
            HopfError::Domain(m) => HopfError::Domain(format!("{ctx}: {m}")),
            HopfError::Pole(m) => HopfError::Pole(format!("{ctx}: {m}")),
            HopfError::Proximity(m) => HopfError::Proximity(format!("{ctx}: {m}")),
            HopfError::Parse(m) => HopfError::Parse(format!("{ctx}: {m}")),
            HopfError::Consistency(m) => HopfError::Consistency(format!("{ctx}: {m}")),
            fit @ HopfError::Fit { .. } => fit,
        }
    }
}
