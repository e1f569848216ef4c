//! Sparse multivariate polynomials with rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// `Σ c_e · x^e`, keyed by exponent vector; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The variable `x_i`.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&d| d == 0))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(c.clone(), |acc, (&d, xi)| {
                    acc * num_traits::pow(xi.clone(), d as usize)
                })
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn square_of_binomial() {
        // (1 - x)^2 = 1 - 2x + x^2
        let one_minus_x = &Polynomial::constant(1, q(1)) + &Polynomial::var(1, 0).scale(&q(-1));
        let sq = &one_minus_x * &one_minus_x;
        assert_eq!(sq.coefficient(&[0]), q(1));
        assert_eq!(sq.coefficient(&[1]), q(-2));
        assert_eq!(sq.coefficient(&[2]), q(1));
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::var(2, 0);
        let sum = &x + &x.scale(&q(-1));
        assert_eq!(sum.terms().count(), 0);
        assert!(sum.is_constant());
    }

    #[test]
    fn evaluation() {
        let p = &(&Polynomial::var(2, 0) * &Polynomial::var(2, 1)) + &Polynomial::constant(2, q(3));
        assert_eq!(p.eval(&[q(2), q(5)]), q(13));
    }
}
