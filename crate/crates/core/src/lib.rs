//! Exact character theory for small finite reductive groups: finite field
//! towers, cyclotomic arithmetic, matrix groups over `F_q`, Weyl group and
//! parabolic combinatorics, class functions with Harish-Chandra induction,
//! character tables, and Deligne-Lusztig characters computed from Lefschetz
//! numbers.

pub mod error;
pub mod cyclo;
pub mod fields;
pub mod groups;
pub mod weyl;
pub mod classfun;
pub mod chartab;
pub mod dl;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
