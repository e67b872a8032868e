pub mod cli;
pub mod counting;
pub mod error;
pub mod formula;
pub mod interp;
pub mod lexrep;
pub mod linalg;
pub mod orderanalysis;
pub mod qelim;
pub mod semilinear;
