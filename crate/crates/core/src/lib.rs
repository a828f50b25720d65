//! Exact minus class numbers `h_n^-` and (S,{2})-refined minus class numbers
//! `h_{n,2}^-` of the cyclotomic fields Q(mu_{p^(n+1)}), their p-adic
//! valuations, and exact checks of the identities relating them.

pub mod chars;
pub mod classnum;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod exactnum;
pub mod growth;
pub mod multorder;
mod par;
pub mod prodval;
pub mod report;

pub use error::{Error, Result};
