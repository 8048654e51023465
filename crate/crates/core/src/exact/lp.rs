//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both the entering and leaving variable, so
//! the method terminates on degenerate problems. Intended for the small
//! feasibility problems that come out of convexity tests, not for large LPs.

use num_traits::{One, Signed, Zero};

use super::{dot, RatVector, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: RatVector, value: Rational },
    Infeasible,
    Unbounded,
}

/// `maximize c·x` subject to linear rows; variables are free unless marked
/// nonnegative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    nvars: usize,
    objective: RatVector,
    rows: Vec<(RatVector, Relation, Rational)>,
    nonneg: Vec<bool>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            objective: vec![Rational::zero(); nvars],
            rows: Vec::new(),
            nonneg: vec![false; nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn maximize(&mut self, objective: RatVector) -> Result<()> {
        self.check_len(&objective)?;
        self.objective = objective;
        Ok(())
    }

    pub fn set_nonnegative(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: RatVector, rel: Relation, rhs: Rational) -> Result<()> {
        self.check_len(&coeffs)?;
        self.rows.push((coeffs, rel, rhs));
        Ok(())
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a program with {} variables",
                v.len(),
                self.nvars
            )));
        }
        Ok(())
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: one column per nonnegative variable, two (x+, x-)
        // per free variable, then one slack per inequality, then artificials.
        let mut col_of = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for &nn in &self.nonneg {
            col_of.push(ncols);
            ncols += if nn { 1 } else { 2 };
        }
        let nstruct = ncols;
        let nslack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let m = self.rows.len();

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut basis: Vec<Option<usize>> = Vec::with_capacity(m);
        let mut slack = nstruct;
        for (coeffs, rel, rhs) in &self.rows {
            let mut row = vec![Rational::zero(); nstruct + nslack + 1];
            for (v, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                row[col_of[v]] = c.clone();
                if !self.nonneg[v] {
                    row[col_of[v] + 1] = -c.clone();
                }
            }
            let mut slack_col = None;
            match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack_col = Some(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack_col = Some(slack);
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[nstruct + nslack] = rhs.clone();
            if row[nstruct + nslack].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            // a slack with coefficient +1 after sign normalisation is a valid
            // starting basic variable
            let basic = slack_col.filter(|&s| row[s].is_positive());
            rows.push(row);
            basis.push(basic);
        }

        // Artificials for rows without a basic slack.
        let need: Vec<usize> = (0..m).filter(|&i| basis[i].is_none()).collect();
        let nart = need.len();
        let width = nstruct + nslack + nart;
        for row in rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.resize(width, Rational::zero());
            row.push(rhs);
        }
        for (k, &i) in need.iter().enumerate() {
            rows[i][nstruct + nslack + k] = Rational::one();
            basis[i] = Some(nstruct + nslack + k);
        }
        let mut t = Tableau {
            rows,
            basis: basis.into_iter().map(Option::unwrap).collect(),
            obj: Vec::new(),
            width,
        };

        if nart > 0 {
            let mut c1 = vec![Rational::zero(); width];
            for k in 0..nart {
                c1[nstruct + nslack + k] = -Rational::one();
            }
            t.set_objective(&c1);
            // Phase one is bounded above by zero.
            let _ = t.optimize(width);
            if t.objective_value().is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining artificials (at level zero) out of the basis.
            let first_art = nstruct + nslack;
            let mut i = 0;
            while i < t.rows.len() {
                if t.basis[i] >= first_art {
                    match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                        Some(j) => t.pivot(i, j),
                        None => {
                            t.rows.remove(i);
                            t.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
            for row in t.rows.iter_mut() {
                let rhs = row.pop().unwrap();
                row.truncate(first_art);
                row.push(rhs);
            }
            t.width = first_art;
        }

        let mut c2 = vec![Rational::zero(); t.width];
        for (v, c) in self.objective.iter().enumerate() {
            c2[col_of[v]] = c.clone();
            if !self.nonneg[v] {
                c2[col_of[v] + 1] = -c.clone();
            }
        }
        t.set_objective(&c2);
        if t.optimize(t.width).is_err() {
            return LpOutcome::Unbounded;
        }

        let mut cols = vec![Rational::zero(); t.width];
        for (i, &b) in t.basis.iter().enumerate() {
            cols[b] = t.rows[i][t.width].clone();
        }
        let x: RatVector = (0..self.nvars)
            .map(|v| {
                let c = col_of[v];
                if self.nonneg[v] {
                    cols[c].clone()
                } else {
                    &cols[c] - &cols[c + 1]
                }
            })
            .collect();
        let value = dot(&self.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs `c_B B⁻¹ A_j - c_j`; the last entry is the objective value.
    obj: Vec<Rational>,
    width: usize,
}

struct Unbounded;

impl Tableau {
    fn set_objective(&mut self, c: &[Rational]) {
        let mut obj: Vec<Rational> = c.iter().map(|x| -x.clone()).collect();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *o += cb * a;
                }
            }
        }
        self.obj = obj;
    }

    fn objective_value(&self) -> &Rational {
        &self.obj[self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let pivot_row: Vec<Rational> = self.rows[r].iter().map(|x| x * &inv).collect();
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let v = &f * &pivot_row[j];
                row[j] -= v;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                let v = &f * &pivot_row[j];
                self.obj[j] -= v;
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Maximises over the first `allowed` columns. Entering columns follow the
    /// most negative reduced cost until a run of degenerate pivots, then
    /// Bland's rule, which cannot cycle.
    fn optimize(&mut self, allowed: usize) -> std::result::Result<(), Unbounded> {
        const STALL_LIMIT: usize = 50;
        let mut stalled = 0;
        loop {
            let entering = if stalled < STALL_LIMIT {
                (0..allowed)
                    .filter(|&j| self.obj[j].is_negative())
                    .min_by(|&a, &b| self.obj[a].cmp(&self.obj[b]).then(a.cmp(&b)))
            } else {
                (0..allowed).find(|&j| self.obj[j].is_negative())
            };
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Err(Unbounded),
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        stalled += 1;
                    } else {
                        stalled = 0;
                    }
                    self.pivot(r, c)
                }
            }
        }
    }
}

fn check_rows(dim: usize, rows: &[(RatVector, Rational)]) -> Result<()> {
    for (a, _) in rows {
        if a.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "constraint of length {} in dimension {dim}",
                a.len()
            )));
        }
    }
    Ok(())
}

/// Finds `x` with `a·x = b` on `equalities`, `a·x ≤ b` on `weak` and `a·x < b`
/// on `strict`, or returns `None` when no such point exists.
///
/// Strict rows are handled by the max-slack program `max t` subject to
/// `a·x + t ≤ b`, `t ≤ 1`; the system is feasible iff the optimum is positive,
/// and the returned witness is the optimal `x`.
pub fn feasible(
    dim: usize,
    equalities: &[(RatVector, Rational)],
    weak: &[(RatVector, Rational)],
    strict: &[(RatVector, Rational)],
) -> Result<Option<RatVector>> {
    check_rows(dim, equalities)?;
    check_rows(dim, weak)?;
    check_rows(dim, strict)?;
    let with_slack = !strict.is_empty();
    let nvars = dim + usize::from(with_slack);
    let mut lp = LinearProgram::new(nvars);
    let extend = |a: &RatVector, t: Rational| {
        let mut row = a.clone();
        if with_slack {
            row.push(t);
        }
        row
    };
    for (a, b) in equalities {
        lp.add(extend(a, Rational::zero()), Relation::Eq, b.clone())?;
    }
    for (a, b) in weak {
        lp.add(extend(a, Rational::zero()), Relation::Le, b.clone())?;
    }
    for (a, b) in strict {
        lp.add(extend(a, Rational::one()), Relation::Le, b.clone())?;
    }
    if with_slack {
        let mut unit = vec![Rational::zero(); nvars];
        unit[dim] = Rational::one();
        lp.add(unit.clone(), Relation::Le, Rational::one())?;
        lp.maximize(unit)?;
    }
    match lp.solve() {
        LpOutcome::Optimal { mut x, value } => {
            if with_slack && !value.is_positive() {
                return Ok(None);
            }
            x.truncate(dim);
            Ok(Some(x))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal("bounded max-slack LP reported unbounded".into())),
    }
}

/// `feasible` with only equalities and strict inequalities.
pub fn strict_feasible(
    dim: usize,
    equalities: &[(RatVector, Rational)],
    strict: &[(RatVector, Rational)],
) -> Result<Option<RatVector>> {
    feasible(dim, equalities, &[], strict)
}

/// Dual witness that a system of equalities, weak and strict inequalities has
/// no solution (Motzkin transposition).
///
/// With multipliers `λ` (free), `y ≥ 0`, `s ≥ 0` such that
/// `Σλc + Σya + Σsa' = 0`, either `Σs > 0` and `Σλd + Σyb + Σsb' ≤ 0`, or
/// `s = 0` and `Σλd + Σyb < 0`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FarkasCertificate {
    #[serde(with = "crate::io::rational_vec")]
    pub equality: RatVector,
    #[serde(with = "crate::io::rational_vec")]
    pub weak: RatVector,
    #[serde(with = "crate::io::rational_vec")]
    pub strict: RatVector,
}

impl FarkasCertificate {
    pub fn verify(
        &self,
        dim: usize,
        equalities: &[(RatVector, Rational)],
        weak: &[(RatVector, Rational)],
        strict: &[(RatVector, Rational)],
    ) -> bool {
        if self.equality.len() != equalities.len()
            || self.weak.len() != weak.len()
            || self.strict.len() != strict.len()
            || self.weak.iter().chain(&self.strict).any(Signed::is_negative)
        {
            return false;
        }
        let mut combo = vec![Rational::zero(); dim];
        let mut rhs = Rational::zero();
        let groups = [
            (&self.equality, equalities),
            (&self.weak, weak),
            (&self.strict, strict),
        ];
        for (mult, rows) in groups {
            for (m, (a, b)) in mult.iter().zip(rows) {
                super::add_scaled(&mut combo, m, a);
                rhs += m * b;
            }
        }
        if !super::is_zero_vec(&combo) {
            return false;
        }
        let strict_mass: Rational = self.strict.iter().sum();
        if strict_mass.is_positive() {
            !rhs.is_positive()
        } else {
            rhs.is_negative()
        }
    }
}

/// Searches for a [`FarkasCertificate`]; `None` means the system is feasible.
pub fn infeasibility_certificate(
    dim: usize,
    equalities: &[(RatVector, Rational)],
    weak: &[(RatVector, Rational)],
    strict: &[(RatVector, Rational)],
) -> Result<Option<FarkasCertificate>> {
    check_rows(dim, equalities)?;
    check_rows(dim, weak)?;
    check_rows(dim, strict)?;
    let (ne, nw, ns) = (equalities.len(), weak.len(), strict.len());

    for use_strict in [true, false] {
        if use_strict && ns == 0 {
            continue;
        }
        let nvars = ne + nw + if use_strict { ns } else { 0 };
        let mut lp = LinearProgram::new(nvars);
        for v in ne..nvars {
            lp.set_nonnegative(v);
        }
        let all_rows = equalities.iter().chain(weak).chain(strict.iter().take(if use_strict { ns } else { 0 }));
        let rows: Vec<&(RatVector, Rational)> = all_rows.collect();
        for k in 0..dim {
            let coeffs: RatVector = rows.iter().map(|(a, _)| a[k].clone()).collect();
            lp.add(coeffs, Relation::Eq, Rational::zero())?;
        }
        let rhs: RatVector = rows.iter().map(|(_, b)| b.clone()).collect();
        if use_strict {
            let mut mass = vec![Rational::zero(); nvars];
            for m in mass.iter_mut().skip(ne + nw) {
                *m = Rational::one();
            }
            lp.add(mass, Relation::Eq, Rational::one())?;
            lp.add(rhs, Relation::Le, Rational::zero())?;
        } else {
            lp.add(rhs, Relation::Eq, -Rational::one())?;
        }
        if let LpOutcome::Optimal { x, .. } = lp.solve() {
            let mut strict_mult = vec![Rational::zero(); ns];
            if use_strict {
                strict_mult.clone_from_slice(&x[ne + nw..]);
            }
            return Ok(Some(FarkasCertificate {
                equality: x[..ne].to_vec(),
                weak: x[ne..ne + nw].to_vec(),
                strict: strict_mult,
            }));
        }
    }
    Ok(None)
}
