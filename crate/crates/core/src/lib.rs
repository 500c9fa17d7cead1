pub mod algebra;
pub mod classify;
pub mod cli;
pub mod parser;
pub mod puiseux;
pub mod series;
pub mod vectorfield;
pub mod witness;
