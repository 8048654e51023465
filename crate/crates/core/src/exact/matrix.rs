use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{RatVector, Rational};
use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(super::format_rational)
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[RatVector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[RatVector]) -> Result<Self> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| super::dot(self.row(i), v)).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] -= factor * row[src]`
    fn sub_row(&mut self, dst: usize, src: usize, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = factor * s;
                self.data[dst * self.cols + j] -= v;
            }
        }
    }

    /// Reduced row echelon form, returning the pivot columns.
    ///
    /// Only the first `limit` columns are used as pivot candidates, which lets
    /// callers reduce an augmented matrix without pivoting on the right-hand side.
    pub fn rref_limited(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in 0..self.cols {
                let v = &self.data[r * self.cols + j] * &inv;
                self.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i != r {
                    let f = self[(i, c)].clone();
                    self.sub_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_limited(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                let f = &m[(i, c)] / &piv;
                m.sub_row(i, c, &f);
            }
        }
        Ok(det)
    }

    /// Basis of the right null space `{x : Mx = 0}`.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `Ax = b` exactly. Returns `None` when the system is inconsistent;
/// otherwise the solution with all free variables set to zero.
pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Result<Option<RatVector>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let mut aug = RatMatrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = aug.rref_limited(n);
    if (pivots.len()..aug.rows()).any(|i| !aug[(i, n)].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[(r, n)].clone();
    }
    Ok(Some(x))
}

/// Characteristic polynomial `det(λI - S)` as ascending coefficients
/// `[c_0, ..., c_n]` with `c_n = 1`.
///
/// Reduces to upper Hessenberg form by rational similarity transforms and then
/// expands the determinant with the usual three-term recurrence.
pub fn char_poly(s: &RatMatrix) -> Result<RatVector> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let n = s.rows();
    let mut h = s.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(p) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
            continue;
        };
        if p != m {
            h.swap_rows(p, m);
            for i in 0..n {
                h.data.swap(i * n + p, i * n + m);
            }
        }
        let piv = h[(m, m - 1)].clone();
        for j in m + 1..n {
            if h[(j, m - 1)].is_zero() {
                continue;
            }
            let t = &h[(j, m - 1)] / &piv;
            h.sub_row(j, m, &t);
            for i in 0..n {
                let v = &t * &h[(i, j)];
                if !v.is_zero() {
                    h[(i, m)] += v;
                }
            }
        }
    }

    // polys[k] = characteristic polynomial of the leading k x k block.
    let mut polys: Vec<RatVector> = vec![vec![Rational::one()]];
    for k in 1..=n {
        let hk = &h[(k - 1, k - 1)];
        let prev = &polys[k - 1];
        let mut p = vec![Rational::zero(); k + 1];
        for (i, c) in prev.iter().enumerate() {
            p[i + 1] += c;
            p[i] -= hk * c;
        }
        let mut sub = Rational::one();
        for i in (1..k).rev() {
            sub *= &h[(i, i - 1)];
            if sub.is_zero() {
                break;
            }
            let coeff = &sub * &h[(i - 1, k - 1)];
            if coeff.is_zero() {
                continue;
            }
            for (j, c) in polys[i - 1].iter().enumerate() {
                p[j] -= &coeff * c;
            }
        }
        polys.push(p);
    }
    Ok(polys.pop().unwrap())
}

/// Signature of a symmetric form: counts of positive, negative and zero
/// eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl Inertia {
    pub fn new(p: usize, q: usize, r: usize) -> Self {
        Inertia { p, q, r }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q + self.r
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// Exact inertia of a symmetric rational matrix.
///
/// The characteristic polynomial of a real symmetric matrix has only real
/// roots, so Descartes' rule of signs counts its positive roots exactly.
pub fn inertia(s: &RatMatrix) -> Result<Inertia> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = s.rows();
    let coeffs = char_poly(s)?;
    let r = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut p = 0;
    let mut last = 0i8;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        let sg = if c.is_positive() { 1 } else { -1 };
        if last != 0 && sg != last {
            p += 1;
        }
        last = sg;
    }
    Ok(Inertia::new(p, n - p - r, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_vec, ratio};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        RatMatrix::from_rows(cols, &rows.iter().map(|r| rat_vec(r)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn solve_identity() {
        let x = solve_linear(&RatMatrix::identity(2), &rat_vec(&[3, 5])).unwrap();
        assert_eq!(x, Some(rat_vec(&[3, 5])));
    }

    #[test]
    fn solve_homogeneous_underdetermined() {
        let x = solve_linear(&m(&[&[1, 1]]), &rat_vec(&[0])).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], rat(0));
    }

    #[test]
    fn solve_inconsistent() {
        let x = solve_linear(&m(&[&[1, 2], &[2, 4]]), &rat_vec(&[1, 3])).unwrap();
        assert_eq!(x, None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        assert!(solve_linear(&RatMatrix::identity(2), &rat_vec(&[1])).is_err());
    }

    #[test]
    fn char_poly_examples() {
        let d = RatMatrix::diagonal(&rat_vec(&[2, -3]));
        assert_eq!(char_poly(&d).unwrap(), rat_vec(&[-6, 1, 1]));
        assert_eq!(char_poly(&RatMatrix::zeros(2, 2)).unwrap(), rat_vec(&[0, 0, 1]));
        assert_eq!(char_poly(&m(&[&[0, 1], &[1, 0]])).unwrap(), rat_vec(&[-1, 0, 1]));
        assert!(char_poly(&RatMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn char_poly_dense() {
        // det(λI - A) for A = [[2,1,0],[1,3,1],[0,1,4]]: λ³ - 9λ² + 24λ - 18
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(char_poly(&a).unwrap(), rat_vec(&[-18, 24, -9, 1]));
        // non-symmetric with a zero subdiagonal pivot
        let b = m(&[&[1, 2, 3], &[0, 4, 5], &[1, 0, 6]]);
        // trace 11; det = 1*24 - 2*(0-5) + 3*(0-4) = 22; sum of 2x2 minors = 4 + 3 + 24 = 31
        assert_eq!(char_poly(&b).unwrap(), rat_vec(&[-22, 31, -11, 1]));
    }

    #[test]
    fn inertia_examples() {
        let d = RatMatrix::diagonal(&rat_vec(&[2, -3, 0]));
        assert_eq!(inertia(&d).unwrap(), Inertia::new(1, 1, 1));
        let twos = m(&[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]);
        assert_eq!(inertia(&twos).unwrap(), Inertia::new(1, 0, 2));
        let hyp = m(&[&[2, 0], &[0, -2]]);
        assert_eq!(inertia(&hyp).unwrap(), Inertia::new(1, 1, 0));
        assert!(matches!(inertia(&m(&[&[0, 1], &[0, 0]])), Err(Error::NotSymmetric)));
    }

    #[test]
    fn determinant_and_nullspace() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.determinant().unwrap(), rat(-2));
        let s = m(&[&[1, 1, 1], &[1, 2, 3]]);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(m(&[&[2, 4], &[1, 2]]).rank(), 1);
        let half = RatMatrix::diagonal(&[ratio(1, 2), rat(4)]);
        assert_eq!(half.determinant().unwrap(), rat(2));
    }
}
