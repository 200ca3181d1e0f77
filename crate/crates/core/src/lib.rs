//! Exact divisor-class arithmetic, intersection pairings and Reid–Tai ages for moduli of
//! pointed rational curves and hyperelliptic curves.

pub mod error;
pub mod exact;
pub mod pic_genus0;
pub mod curves_genus0;
pub mod report;
pub mod hyp_pic;
pub mod reidtai;

pub use error::{Error, Result};
