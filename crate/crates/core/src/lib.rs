//! Certified finite-depth computations for liminf sets of shrinking targets
//! `{x : |q_j x - theta| < q_j^(-tau)}` on the torus.

pub mod cantor_measure;
pub mod cli;
pub mod dimension_bounds;
pub mod level_sets;
pub mod multiplicative;
pub mod numerics;
pub mod sequences;
