//! The three descriptor families (data types, operators, contexts) and the
//! job bundle that combines them.
//!
//! Every type parses from and serializes to the JSON layout used on disk.
//! Serialization is canonical: keys sorted, fixed float formatting, and
//! rationals rendered as `"p/q"` strings.

mod bundle;
mod context;
mod operator;
mod qdt;

pub use bundle::{parse_bundle, JobBundle, Provenance, JOB_SCHEMA};
pub use context::{
    parse_context, AnnealSettings, ContextDescriptor, EngineKind, ExecPolicy, QecPolicy, Target,
    CTX_SCHEMA, DEFAULT_BETA_RANGE, DEFAULT_NUM_SWEEPS, KNOWN_BASIS_GATES,
};
pub use operator::{
    parse_operator, parse_operator_detached, CostHint, IsingParams, OperatorDescriptor, OperatorParams,
    QftParams, RepKind, ResultSchema, QOD_SCHEMA,
};
pub use qdt::{parse_qdt, BitOrder, EncodingKind, MeasurementSemantics, QdtSet, QuantumDataType, QDT_SCHEMA};

use serde_json::Value;

/// Implemented by every descriptor so generic code can emit canonical JSON.
pub trait Descriptor {
    fn to_json(&self) -> Value;

    /// Canonical text form. Pure: equal inputs give byte-identical output.
    fn serialize(&self) -> String {
        crate::json::to_canonical_string(&self.to_json())
    }
}

/// Defines a fieldless enum whose JSON form is a fixed upper-case token.
macro_rules! token_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $token:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];
            pub const TOKENS: &'static [&'static str] = &[$($token),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $token),+
                }
            }

            pub fn from_token(s: &str) -> Option<Self> {
                match s {
                    $($token => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}
pub(crate) use token_enum;

/// Reads a token enum field, reporting the allowed set on mismatch.
macro_rules! token_field {
    ($fields:expr, $key:expr, $ty:ty) => {{
        let s = $fields.req_str($key)?;
        <$ty>::from_token(s).ok_or_else(|| {
            $fields.err($key, format!("unknown value {s:?}; expected one of {:?}", <$ty>::TOKENS))
        })
    }};
}
pub(crate) use token_field;
