use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::Cone;
use crate::exact::{LinearProgram, LpOutcome, RatMatrix, RatVector, Rational, Relation};

/// Outcome of checking the fan axioms on raw fan data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Malformed input: bad indices, wrong mark lengths, zero marks.
    pub structure: Vec<String>,
    /// Maximal cones whose marks are linearly dependent.
    pub not_simplicial: Vec<Cone>,
    /// Maximal cones whose size differs from the fan dimension.
    pub not_pure: Vec<Cone>,
    /// Rays not contained in any maximal cone.
    pub unused_rays: Vec<usize>,
    /// Pairs of maximal cones whose intersection is larger than the cone on
    /// their shared rays.
    pub bad_intersections: Vec<(Cone, Cone)>,
    /// Whether the pairwise intersection check ran.
    pub fan_condition_checked: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.structure.is_empty()
            && self.not_simplicial.is_empty()
            && self.not_pure.is_empty()
            && self.unused_rays.is_empty()
            && self.bad_intersections.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.not_simplicial.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.not_pure.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts = self.structure.clone();
        if !self.not_simplicial.is_empty() {
            parts.push(format!("non-simplicial cones {:?}", self.not_simplicial));
        }
        if !self.not_pure.is_empty() {
            parts.push(format!("cones of the wrong dimension {:?}", self.not_pure));
        }
        if !self.unused_rays.is_empty() {
            parts.push(format!("rays in no maximal cone {:?}", self.unused_rays));
        }
        if !self.bad_intersections.is_empty() {
            parts.push(format!("improper intersections {:?}", self.bad_intersections));
        }
        if parts.is_empty() {
            "valid".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Everything except the pairwise fan condition.
pub(crate) fn structural(ambient_dim: usize, rays: &[RatVector], cones: &[Cone]) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for (i, u) in rays.iter().enumerate() {
        if u.len() != ambient_dim {
            rep.structure
                .push(format!("ray {i} has {} coordinates, expected {ambient_dim}", u.len()));
        } else if u.iter().all(Zero::is_zero) {
            rep.structure.push(format!("ray {i} is zero"));
        }
    }
    if cones.is_empty() {
        rep.structure.push("no maximal cones".into());
    }
    for c in cones {
        if let Some(&bad) = c.iter().find(|&&r| r >= rays.len()) {
            rep.structure.push(format!("cone {c:?} refers to missing ray {bad}"));
        }
        let distinct: BTreeSet<_> = c.iter().collect();
        if distinct.len() != c.len() {
            rep.structure.push(format!("cone {c:?} repeats a ray"));
        }
    }
    if !rep.structure.is_empty() {
        return rep;
    }

    let d = cones.iter().map(Vec::len).max().unwrap_or(0);
    let mut used = vec![false; rays.len()];
    for c in cones {
        let mut sorted = c.clone();
        sorted.sort_unstable();
        for &r in c {
            used[r] = true;
        }
        if c.len() != d {
            rep.not_pure.push(sorted.clone());
        }
        let rows: Vec<RatVector> = c.iter().map(|&r| rays[r].clone()).collect();
        let m = RatMatrix::from_rows(ambient_dim, &rows).expect("lengths checked");
        if m.rank() != c.len() {
            rep.not_simplicial.push(sorted);
        }
    }
    rep.unused_rays = (0..rays.len()).filter(|&i| !used[i]).collect();
    rep
}

/// Checks simpliciality, purity and the fan condition exactly.
///
/// For each pair of maximal cones, an LP looks for a point of both cones that
/// has a positive coordinate on a non-shared ray; such a point lies in the
/// intersection but outside the cone on the shared rays.
pub fn validate(ambient_dim: usize, rays: &[RatVector], cones: &[Cone]) -> ValidationReport {
    let mut rep = structural(ambient_dim, rays, cones);
    if !rep.structure.is_empty() || !rep.not_simplicial.is_empty() {
        return rep;
    }
    let sorted: Vec<Cone> = cones
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pairs: Vec<(usize, usize)> = (0..sorted.len())
        .flat_map(|i| (i + 1..sorted.len()).map(move |j| (i, j)))
        .collect();
    rep.bad_intersections = pairs
        .par_iter()
        .filter(|&&(i, j)| !meets_properly(ambient_dim, rays, &sorted[i], &sorted[j]))
        .map(|&(i, j)| (sorted[i].clone(), sorted[j].clone()))
        .collect();
    rep.fan_condition_checked = true;
    rep
}

fn meets_properly(n: usize, rays: &[RatVector], a: &Cone, b: &Cone) -> bool {
    let (na, nb) = (a.len(), b.len());
    let mut lp = LinearProgram::new(na + nb);
    for v in 0..na + nb {
        lp.set_nonnegative(v);
    }
    for k in 0..n {
        let mut row = Vec::with_capacity(na + nb);
        row.extend(a.iter().map(|&r| rays[r][k].clone()));
        row.extend(b.iter().map(|&r| -rays[r][k].clone()));
        lp.add(row, Relation::Eq, Rational::zero()).unwrap();
    }
    let outside: RatVector = a
        .iter()
        .map(|r| b.binary_search(r).is_err())
        .chain(b.iter().map(|r| a.binary_search(r).is_err()))
        .map(|o| if o { Rational::one() } else { Rational::zero() })
        .collect();
    if outside.iter().all(Zero::is_zero) {
        return true;
    }
    lp.add(outside.clone(), Relation::Le, Rational::one()).unwrap();
    lp.maximize(outside).unwrap();
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value.is_zero(),
        _ => false,
    }
}
