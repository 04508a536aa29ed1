//! Exact arithmetic for finite fields, local fields F_q((t)), characters,
//! cyclotomic values and Haar-measure bookkeeping.

pub mod characters;
pub mod cyclo;
pub mod fq;
pub mod gauss;
pub mod laurent;
pub mod measure;
pub mod scalar;

pub use characters::{AdditiveCharacter, AtUniformizer, CharValue, MultiplicativeCharacter};
pub use cyclo::{CycloValue, Q};
pub use fq::FqField;
pub use gauss::{gauss_sum, gauss_sum_bruteforce, GaussSum};
pub use laurent::{laurent_arith, shell_representatives, ArithOp, LocalElem, Valuation};
pub use measure::{ExtShape, MeasureContext};
pub use scalar::{LogValue, Mono, XiPoly};
