//! RankSign: hash-and-sign signatures from augmented LRPC codes in the rank
//! metric, with the finite-field and subspace machinery they need, exact
//! counting bounds, attack-cost estimates and a byte format.

pub mod bounds;
pub mod error;
pub mod field;
pub mod lrpc;
pub mod matrix;
pub mod params;
mod poly;
pub mod rank_metric;
pub mod ranksign;
pub mod security;
pub mod subspace;
pub mod wire;

pub use error::{Error, FailureFlags, Result};
pub use field::{BaseField, ExtElem, Field, FieldContext};
pub use lrpc::LrpcCode;
pub use matrix::{MatExt, MatGFq, Matrix};
pub use params::{CodeParams, Preset};
pub use ranksign::{PublicKey, RankSign, SecretKey, Signature};
pub use security::SecurityReport;
pub use subspace::Subspace;
