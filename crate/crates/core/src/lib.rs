pub mod analytic;
pub mod cli;
pub mod ensemble;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod optimizer;
pub mod tolerances;
