//! Fitzpatrick and Penot representatives for monotone operators on `Rⁿ × Rⁿ`,
//! maximality certificates, and the sum and chain rules with their
//! qualification constraints on polyhedral data.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod lpkernel;
pub mod operators;
pub mod oracle;
pub mod pairing;
pub mod qualification;
pub mod report;
pub mod representatives;

pub use error::{Error, Result};
pub use pairing::{dual_product, pairing_p, vector, ExtReal, PairedPoint, Vector};
pub use report::{CheckReport, Verdict, Witness};
