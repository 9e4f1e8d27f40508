//! Combinatorial primitives behind the reduced degree distributions.

mod binomial;
mod quadrature;
mod sampling;
mod wallenius;

pub use binomial::{
    avoid_probability, hypergeom_pmf, hypergeom_row, hypergeom_support, log_binomial, HypergeomRow,
};
pub use quadrature::integrate;
pub use sampling::weighted_sample_without_replacement;
pub use wallenius::{wallenius_pmf, wallenius_univariate_pmf, WalleniusParams};
