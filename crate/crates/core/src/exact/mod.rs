//! Exact scalar, vector and dense matrix algebra over the rationals.

mod matrix;
mod poly;
mod rational;

pub use matrix::{null_space, rref, solve_affine, AffineSolution, Rref, SquareMatrix};
pub use poly::Polynomial;
pub use rational::{q, Rational};

/// Dense vector of rationals.
pub type Vector = Vec<Rational>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, k: usize) -> Vector {
    let mut v = zero_vector(n);
    v[k] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}
