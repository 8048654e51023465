use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{RatMatrix, Rational};

/// Sparse multivariate polynomial with rational coefficients.
///
/// Monomials are exponent vectors of a fixed length (the number of variables).
/// Zero coefficients are never stored, so structural equality is polynomial
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ coeffs[i] * x_i`
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// The quadratic form `xᵀ M x`.
    pub fn quadratic_form(m: &RatMatrix) -> Self {
        let n = m.rows();
        let mut p = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = &m[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous polynomial, or the maximum total degree otherwise.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            total += t;
        }
        total
    }

    /// Embeds into a ring with `nvars` variables, sending variable `i` to
    /// variable `map[i]`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Symmetric matrix `M` with `self = xᵀ M x`, for a homogeneous quadratic.
    pub fn quadratic_matrix(&self) -> Option<RatMatrix> {
        if !self.terms.is_empty() && (!self.is_homogeneous() || self.degree() != 2) {
            return None;
        }
        let n = self.nvars;
        let mut m = RatMatrix::zeros(n, n);
        let half = Rational::new(1.into(), 2.into());
        for (e, c) in &self.terms {
            let idx: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[(i, i)] = c.clone();
            } else {
                m[(i, j)] = c * &half;
                m[(j, i)] = c * &half;
            }
        }
        Some(m)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

/// Terms in decreasing lexicographic order of exponents, variables `z0, z1, …`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let constant = exps.iter().all(|&e| e == 0);
            let mut first = true;
            if !a.is_one() || constant {
                write!(f, "{}", super::format_rational(&a))?;
                first = false;
            }
            for (v, &e) in exps.iter().enumerate().filter(|(_, &e)| e > 0) {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "z{v}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_vec, ratio};

    #[test]
    fn square_of_sum() {
        let l = Polynomial::linear(&rat_vec(&[1, 1, 1]));
        let sq = l.pow(2);
        assert_eq!(sq.coefficient(&[2, 0, 0]), rat(1));
        assert_eq!(sq.coefficient(&[1, 1, 0]), rat(2));
        let m = sq.quadratic_matrix().unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| m[(i, j)] == rat(1))));
        assert_eq!(Polynomial::quadratic_form(&m), sq);
        assert_eq!(sq.eval(&rat_vec(&[1, 2, 3])), rat(36));
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::variable(2, 0);
        assert!((&x - &x).is_zero());
        let y = Polynomial::variable(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.coefficient(&[1, 1]), rat(0));
        assert_eq!(p.terms().count(), 2);
    }

    #[test]
    fn display() {
        let x = Polynomial::variable(2, 0);
        let y = Polynomial::variable(2, 1);
        let p = &(&x * &x) - &(&Polynomial::constant(2, ratio(3, 2)) * &y);
        assert_eq!(p.to_string(), "z0^2 - 3/2*z1");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert_eq!(Polynomial::constant(1, rat(-2)).to_string(), "-2");
    }
}
