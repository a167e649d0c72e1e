use thiserror::Error;

/// Errors raised while parsing or validating descriptors.
///
/// Every variant except [`DescriptorError::Json`] carries the JSON path of the
/// offending field (e.g. `params.inverse`, `qdts[0].width`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("semantics error at `{path}`: {message}")]
    Semantics { path: String, message: String },
    #[error("rational parse error at `{path}`: {message}")]
    Rational { path: String, message: String },
    #[error("unresolved reference at `{path}`: {message}")]
    UnresolvedReference { path: String, message: String },
    #[error("parameter error at `{path}`: {message}")]
    Param { path: String, message: String },
}

/// Selects which [`DescriptorError`] variant a field-level problem maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Schema,
    Semantics,
    Rational,
    UnresolvedReference,
    Param,
}

impl DescriptorError {
    pub fn new(kind: ErrorKind, path: impl Into<String>, message: impl Into<String>) -> Self {
        let path = path.into();
        let message = message.into();
        match kind {
            ErrorKind::Schema => Self::Schema { path, message },
            ErrorKind::Semantics => Self::Semantics { path, message },
            ErrorKind::Rational => Self::Rational { path, message },
            ErrorKind::UnresolvedReference => Self::UnresolvedReference { path, message },
            ErrorKind::Param => Self::Param { path, message },
        }
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Schema, path, message)
    }

    pub fn param(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Param, path, message)
    }

    pub fn semantics(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Semantics, path, message)
    }

    /// `None` for [`DescriptorError::Json`].
    pub fn kind(&self) -> Option<ErrorKind> {
        match self {
            Self::Json(_) => None,
            Self::Schema { .. } => Some(ErrorKind::Schema),
            Self::Semantics { .. } => Some(ErrorKind::Semantics),
            Self::Rational { .. } => Some(ErrorKind::Rational),
            Self::UnresolvedReference { .. } => Some(ErrorKind::UnresolvedReference),
            Self::Param { .. } => Some(ErrorKind::Param),
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            Self::Json(_) => None,
            Self::Schema { path, .. }
            | Self::Semantics { path, .. }
            | Self::Rational { path, .. }
            | Self::UnresolvedReference { path, .. }
            | Self::Param { path, .. } => Some(path),
        }
    }

    /// Re-roots the error path under `prefix`, used when a descriptor is
    /// parsed as part of a bundle.
    pub(crate) fn under(self, prefix: &str) -> Self {
        let join = |path: String| {
            if path.is_empty() {
                prefix.to_string()
            } else {
                format!("{prefix}.{path}")
            }
        };
        match self {
            Self::Json(m) => Self::Json(m),
            Self::Schema { path, message } => Self::Schema { path: join(path), message },
            Self::Semantics { path, message } => Self::Semantics { path: join(path), message },
            Self::Rational { path, message } => Self::Rational { path: join(path), message },
            Self::UnresolvedReference { path, message } => {
                Self::UnresolvedReference { path: join(path), message }
            }
            Self::Param { path, message } => Self::Param { path: join(path), message },
        }
    }
}

pub type Result<T, E = DescriptorError> = std::result::Result<T, E>;
