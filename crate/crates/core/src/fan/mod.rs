//! Simplicial marked fans.
//!
//! A fan is stored as a list of marks (one nonzero vector per ray) and a list
//! of maximal cones given as sorted ray-index sets. Since every cone is
//! simplicial, faces are exactly the subsets of maximal cones.

mod star;
mod stellar;
mod validate;

pub use star::StarData;
pub use stellar::Subdivision;
pub use validate::{validate, ValidationReport};

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, RatVector, Rational};

/// A cone, as the sorted set of its ray indices. The empty cone is the origin.
pub type Cone = Vec<usize>;

/// Pure simplicial `d`-fan in `ℚⁿ` with a fixed marking.
#[derive(Clone, Debug)]
pub struct MarkedFan {
    ambient_dim: usize,
    rays: Vec<RatVector>,
    maximal: Vec<Cone>,
    dim: usize,
    faces: Vec<Vec<Cone>>,
    face_index: Vec<HashMap<Cone, usize>>,
    // cofaces[k][i]: indices into faces[k + 1] of the cones covering faces[k][i]
    cofaces: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for MarkedFan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.rays == other.rays
            && self.maximal == other.maximal
    }
}

impl Eq for MarkedFan {}

impl MarkedFan {
    /// Builds a fan after the cheap structural checks: index ranges, mark
    /// lengths, nonzero marks, simpliciality, purity, and that every ray is
    /// used. The pairwise fan condition is not checked here; see
    /// [`MarkedFan::validate`].
    pub fn new(ambient_dim: usize, rays: Vec<RatVector>, maximal_cones: Vec<Cone>) -> Result<Self> {
        let report = validate::structural(ambient_dim, &rays, &maximal_cones);
        if !report.is_valid() {
            return Err(Error::InvalidFan(report.summary()));
        }
        Ok(Self::new_unchecked(ambient_dim, rays, maximal_cones))
    }

    pub(crate) fn new_unchecked(
        ambient_dim: usize,
        rays: Vec<RatVector>,
        maximal_cones: Vec<Cone>,
    ) -> Self {
        let maximal: Vec<Cone> = maximal_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let dim = maximal.first().map_or(0, Vec::len);

        let mut faces: Vec<Vec<Cone>> = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let set: BTreeSet<Cone> = maximal
                .iter()
                .flat_map(|m| m.iter().copied().combinations(k))
                .collect();
            faces.push(set.into_iter().collect());
        }
        let face_index: Vec<HashMap<Cone, usize>> = faces
            .iter()
            .map(|fs| fs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let mut cofaces: Vec<Vec<Vec<usize>>> =
            faces.iter().map(|fs| vec![Vec::new(); fs.len()]).collect();
        for k in 0..dim {
            for (j, big) in faces[k + 1].iter().enumerate() {
                for drop in 0..big.len() {
                    let mut f = big.clone();
                    f.remove(drop);
                    cofaces[k][face_index[k][&f]].push(j);
                }
            }
        }
        MarkedFan {
            ambient_dim,
            rays,
            maximal,
            dim,
            faces,
            face_index,
            cofaces,
        }
    }

    /// The fan `{0}` in `ℚⁿ`.
    pub fn point(ambient_dim: usize) -> Self {
        Self::new_unchecked(ambient_dim, Vec::new(), vec![Vec::new()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[RatVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &RatVector {
        &self.rays[i]
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// Index of a maximal cone in [`MarkedFan::maximal_cones`].
    pub fn maximal_index(&self, cone: &[usize]) -> Option<usize> {
        self.maximal.binary_search_by(|c| c.as_slice().cmp(cone)).ok()
    }

    /// All `k`-dimensional cones, sorted.
    pub fn cones(&self, k: usize) -> Result<&[Cone]> {
        if k > self.dim {
            return Err(Error::OutOfRange { k, d: self.dim });
        }
        Ok(&self.faces[k])
    }

    /// All cones of every dimension, the origin first.
    pub fn all_cones(&self) -> impl Iterator<Item = &Cone> {
        self.faces.iter().flatten()
    }

    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        cone.len() <= self.dim && self.face_index[cone.len()].contains_key(cone)
    }

    pub(crate) fn cone_position(&self, cone: &[usize]) -> Option<usize> {
        self.face_index.get(cone.len())?.get(cone).copied()
    }

    /// Cones of dimension `|τ| + 1` containing `τ`.
    pub fn cofaces(&self, tau: &[usize]) -> Result<Vec<&Cone>> {
        let k = tau.len();
        let i = self
            .cone_position(tau)
            .ok_or_else(|| Error::NotACone(tau.to_vec()))?;
        if k == self.dim {
            return Ok(Vec::new());
        }
        Ok(self.cofaces[k][i].iter().map(|&j| &self.faces[k + 1][j]).collect())
    }

    /// Maximal cones containing `τ`.
    pub fn maximal_containing<'a>(&'a self, tau: &'a [usize]) -> impl Iterator<Item = &'a Cone> + 'a {
        self.maximal.iter().filter(move |m| is_subset(tau, m))
    }

    /// Rays of the neighbourhood `N_τΣ` not in `τ`, sorted.
    pub fn link_rays(&self, tau: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .maximal_containing(tau)
            .flatten()
            .copied()
            .filter(|r| !tau.contains(r))
            .collect();
        set.into_iter().collect()
    }

    /// Matrix with the marks of `cone` as columns.
    pub fn mark_matrix(&self, cone: &[usize]) -> RatMatrix {
        let cols: Vec<RatVector> = cone.iter().map(|&r| self.rays[r].clone()).collect();
        RatMatrix::from_columns(self.ambient_dim, &cols).expect("marks have ambient length")
    }

    /// Coordinates of `v` in the basis of marks of `cone`, if `v` lies in
    /// their span.
    pub fn span_coordinates(&self, cone: &[usize], v: &[Rational]) -> Option<RatVector> {
        exact::solve_linear(&self.mark_matrix(cone), v).ok().flatten()
    }

    /// Finds a maximal cone containing `v` and the (nonnegative) coordinates of
    /// `v` in its marks.
    pub fn locate(&self, v: &[Rational]) -> Result<Option<(usize, RatVector)>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        for (i, m) in self.maximal.iter().enumerate() {
            if let Some(c) = self.span_coordinates(m, v) {
                if c.iter().all(|x| !x.is_negative()) {
                    return Ok(Some((i, c)));
                }
            }
        }
        Ok(None)
    }

    pub fn contains_point(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.locate(v)?.is_some())
    }

    /// The unique cone containing `v` in its relative interior.
    pub fn carrier(&self, v: &[Rational]) -> Result<Option<Cone>> {
        Ok(self.locate(v)?.map(|(i, c)| {
            self.maximal[i]
                .iter()
                .zip(&c)
                .filter(|(_, x)| x.is_positive())
                .map(|(&r, _)| r)
                .collect()
        }))
    }

    /// Value at `v` of the piecewise linear function taking values `z` on the
    /// marks.
    pub fn evaluate(&self, z: &[Rational], v: &[Rational]) -> Result<Rational> {
        let (i, c) = self.locate(v)?.ok_or(Error::OutsideSupport)?;
        Ok(self.maximal[i]
            .iter()
            .zip(&c)
            .fold(Rational::zero(), |acc, (&r, x)| acc + x * &z[r]))
    }

    /// Values `φ(u_ρ)` of a linear functional on all marks.
    pub fn linear_values(&self, phi: &[Rational]) -> RatVector {
        self.rays.iter().map(|u| exact::dot(phi, u)).collect()
    }

    /// Full validation including the pairwise fan condition.
    pub fn validate(&self) -> ValidationReport {
        validate(self.ambient_dim, &self.rays, &self.maximal)
    }

    /// Star fan at `τ`.
    pub fn star(&self, tau: &[usize]) -> Result<StarData> {
        StarData::new(self, tau)
    }

    /// Cones `τ` of dimension at most `d - 2` at which the fan is pinched.
    ///
    /// At each such `τ`, maximal cones containing `τ` are joined when they
    /// share a ray outside `τ`; the star is connected away from the origin
    /// exactly when this graph is connected.
    pub fn pinched_cones(&self) -> Vec<Cone> {
        if self.dim < 2 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for k in 0..=self.dim - 2 {
            for tau in &self.faces[k] {
                let around: Vec<&Cone> = self.maximal_containing(tau).collect();
                if !is_connected(&around, tau.len()) {
                    out.push(tau.clone());
                }
            }
        }
        out
    }

    pub fn is_unpinched(&self) -> bool {
        self.pinched_cones().is_empty()
    }

    /// Stellar subdivision at a nonzero point `v` of the support.
    pub fn stellar_subdivide(&self, v: &[Rational]) -> Result<Subdivision> {
        stellar::subdivide(self, v)
    }

    /// Product fan in `ℚ^{n₁+n₂}`; rays of `other` are shifted past ours.
    pub fn product(&self, other: &MarkedFan) -> MarkedFan {
        let n = self.ambient_dim + other.ambient_dim;
        let mut rays = Vec::with_capacity(self.rays.len() + other.rays.len());
        for u in &self.rays {
            let mut v = u.clone();
            v.resize(n, Rational::zero());
            rays.push(v);
        }
        for u in &other.rays {
            let mut v = vec![Rational::zero(); self.ambient_dim];
            v.extend(u.iter().cloned());
            rays.push(v);
        }
        let shift = self.rays.len();
        let cones = self
            .maximal
            .iter()
            .cartesian_product(&other.maximal)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&r| r + shift)).collect())
            .collect();
        MarkedFan::new_unchecked(n, rays, cones)
    }

    /// The fan with the same cones and marks `λ_ρ u_ρ`.
    pub fn rescaled(&self, lambda: &[Rational]) -> Result<MarkedFan> {
        if lambda.len() != self.rays.len() {
            return Err(Error::Arity {
                expected: self.rays.len(),
                got: lambda.len(),
            });
        }
        if lambda.iter().any(|l| !l.is_positive()) {
            return Err(Error::Precondition("rescaling factors must be positive".into()));
        }
        let rays = self
            .rays
            .iter()
            .zip(lambda)
            .map(|(u, l)| u.iter().map(|x| x * l).collect())
            .collect();
        Ok(MarkedFan::new_unchecked(self.ambient_dim, rays, self.maximal.clone()))
    }

    /// Subfan of all cones of dimension at most `k`, with unused rays dropped.
    /// Returns the fan and the map from new ray indices to old ones.
    pub fn skeleton(&self, k: usize) -> Result<(MarkedFan, Vec<usize>)> {
        let cones = self.cones(k)?.to_vec();
        let used: BTreeSet<usize> = cones.iter().flatten().copied().collect();
        let old: Vec<usize> = used.into_iter().collect();
        let new_of: HashMap<usize, usize> = old.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let rays = old.iter().map(|&o| self.rays[o].clone()).collect();
        let cones = cones
            .iter()
            .map(|c| c.iter().map(|r| new_of[r]).collect())
            .collect();
        Ok((MarkedFan::new_unchecked(self.ambient_dim, rays, cones), old))
    }

    /// Linearly independent subset of rays spanning the span of all marks,
    /// chosen greedily in index order.
    pub fn spanning_rays(&self) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut rows: Vec<RatVector> = Vec::new();
        for (i, u) in self.rays.iter().enumerate() {
            rows.push(u.clone());
            let m = RatMatrix::from_rows(self.ambient_dim, &rows).unwrap();
            if m.rank() == rows.len() {
                chosen.push(i);
            } else {
                rows.pop();
            }
        }
        chosen
    }
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

fn is_connected(cones: &[&Cone], apex_len: usize) -> bool {
    if cones.len() <= 1 {
        return true;
    }
    let n = cones.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let shared = cones[i].iter().filter(|r| cones[j].binary_search(r).is_ok()).count();
            if shared > apex_len {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..n).all(|i| find(&mut parent, i) == root)
}
