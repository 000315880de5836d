pub mod cli;
pub mod fem;
pub mod linalg;
pub mod models;
pub mod riccati;
pub mod study;
