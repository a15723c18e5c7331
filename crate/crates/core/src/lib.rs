//! Exact q-series toolkit for vertex algebra characters: truncated formal
//! series over the rationals, classical modular forms, modular linear
//! differential equations, Appell-Lerch and indefinite theta sums, and the
//! identity checks tying them together.

pub mod appell;
pub mod bijet;
pub mod cftlevels;
pub mod cli;
pub mod linalg;
pub mod mlde;
pub mod modforms;
pub mod qser;
pub mod rational;
pub mod vachar;

pub use qser::{euler_product, product_expand, Coeff, QSeries, SeriesError, Verdict};
pub use rational::Rat;
