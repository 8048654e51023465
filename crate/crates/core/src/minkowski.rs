//! Minkowski weights on marked fans and the action of divisors on them.
//!
//! A Minkowski `k`-weight assigns a rational number to each `k`-cone such
//! that at every `(k-1)`-cone `τ` the weighted sum of the marks of the rays
//! leaving `τ` lies in the span of `τ`. Divisors (ray-value vectors) lower the
//! degree by one; applying `d` of them to a top-degree weight and reading off
//! the value at the origin gives their mixed degree.

use std::collections::BTreeMap;
use std::ops::Deref;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, RatVector, Rational};
use crate::fan::{Cone, MarkedFan, StarData};

/// Ray values of a piecewise linear function, one per ray of a fixed fan.
/// Two divisors differing by the values of a global linear function represent
/// the same class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    #[serde(with = "crate::io::rational_vec")]
    pub values: RatVector,
}

impl Divisor {
    pub fn new(values: RatVector) -> Self {
        Divisor { values }
    }

    /// Indicator divisor `D_ρ`: one at ray `rho`, zero elsewhere.
    pub fn indicator(num_rays: usize, rho: usize) -> Self {
        let mut values = exact::zero_vec(num_rays);
        values[rho] = Rational::one();
        Divisor { values }
    }
}

impl Deref for Divisor {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.values
    }
}

impl From<RatVector> for Divisor {
    fn from(values: RatVector) -> Self {
        Divisor { values }
    }
}

/// Values on the `k`-cones of a fan, keyed by sorted ray-index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiWeight {
    degree: usize,
    values: BTreeMap<Cone, Rational>,
}

impl MinkowskiWeight {
    pub fn new(degree: usize, values: BTreeMap<Cone, Rational>) -> Self {
        MinkowskiWeight { degree, values }
    }

    /// The constant weight on all `k`-cones.
    pub fn uniform(fan: &MarkedFan, k: usize, value: Rational) -> Self {
        let values = fan
            .cones(k)
            .map(|cs| cs.iter().map(|c| (c.clone(), value.clone())).collect())
            .unwrap_or_default();
        MinkowskiWeight { degree: k, values }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, cone: &[usize]) -> Option<&Rational> {
        self.values.get(cone)
    }

    pub fn values(&self) -> &BTreeMap<Cone, Rational> {
        &self.values
    }

    pub fn is_positive(&self) -> bool {
        self.values.values().all(Signed::is_positive)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.values().all(|v| !v.is_negative())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MinkowskiWeight {
            degree: self.degree,
            values: self.values.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    fn value(&self, cone: &[usize]) -> Result<&Rational> {
        self.values
            .get(cone)
            .ok_or_else(|| Error::MissingWeight(cone.to_vec()))
    }
}

/// A simplicial marked `d`-fan with a positive, balanced top-degree weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalFan {
    fan: MarkedFan,
    weight: MinkowskiWeight,
}

impl TropicalFan {
    pub fn new(fan: MarkedFan, weight: MinkowskiWeight) -> Result<Self> {
        if weight.degree() != fan.dim() {
            return Err(Error::Precondition(format!(
                "weight of degree {} on a {}-fan",
                weight.degree(),
                fan.dim()
            )));
        }
        for cone in fan.maximal_cones() {
            if !weight.value(cone)?.is_positive() {
                return Err(Error::NonPositiveWeight(cone.clone()));
            }
        }
        let bad = check_balancing(&fan, &weight)?;
        if !bad.is_empty() {
            return Err(Error::Unbalanced(bad));
        }
        Ok(TropicalFan { fan, weight })
    }

    pub fn fan(&self) -> &MarkedFan {
        &self.fan
    }

    pub fn weight(&self) -> &MinkowskiWeight {
        &self.weight
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn into_parts(self) -> (MarkedFan, MinkowskiWeight) {
        (self.fan, self.weight)
    }

    /// Mixed degree `deg(D₁⋯D_d)` of `d` divisors.
    pub fn degree(&self, divisors: &[&[Rational]]) -> Result<Rational> {
        mixed_degree(&self.fan, &self.weight, divisors)
    }

    /// `deg(D^d)`, the volume polynomial evaluated at `z`.
    pub fn volume(&self, z: &[Rational]) -> Result<Rational> {
        let args = vec![z; self.dim()];
        self.degree(&args)
    }
}

/// Weighted sum `Σ_{σ ⊃ τ} ω(σ) u_{σ∖τ}` and the matching sum of ray values.
fn outgoing_sum(
    fan: &MarkedFan,
    omega: &MinkowskiWeight,
    tau: &[usize],
    z: Option<&[Rational]>,
) -> Result<(RatVector, Rational)> {
    let mut b = exact::zero_vec(fan.ambient_dim());
    let mut zsum = Rational::zero();
    for sigma in fan.cofaces(tau)? {
        let w = omega.value(sigma)?;
        let rho = *sigma
            .iter()
            .find(|r| tau.binary_search(r).is_err())
            .expect("coface has one extra ray");
        exact::add_scaled(&mut b, w, fan.ray(rho));
        if let Some(z) = z {
            zsum += w * &z[rho];
        }
    }
    Ok((b, zsum))
}

/// Cones `τ ∈ Σ(k-1)` at which the balancing condition fails.
pub fn check_balancing(fan: &MarkedFan, omega: &MinkowskiWeight) -> Result<Vec<Cone>> {
    let k = omega.degree();
    if k > fan.dim() {
        return Err(Error::OutOfRange { k, d: fan.dim() });
    }
    for sigma in fan.cones(k)? {
        omega.value(sigma)?;
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut bad = Vec::new();
    for tau in fan.cones(k - 1)? {
        let (b, _) = outgoing_sum(fan, omega, tau, None)?;
        if fan.span_coordinates(tau, &b).is_none() {
            bad.push(tau.clone());
        }
    }
    Ok(bad)
}

/// The action `D·ω` of a divisor on a balanced weight of degree `k ≥ 1`:
///
/// `(D·ω)(τ) = Σ_{σ⊃τ} ω(σ) z_{σ∖τ} − φ_τ(b)`, where `b` is the weighted sum
/// of outgoing marks and `φ_τ` is the linear function on the span of `τ`
/// agreeing with `z` on the marks of `τ`.
pub fn divisor_action(fan: &MarkedFan, omega: &MinkowskiWeight, z: &[Rational]) -> Result<MinkowskiWeight> {
    let k = omega.degree();
    if k == 0 {
        return Err(Error::Precondition("cannot act on a weight of degree 0".into()));
    }
    if z.len() != fan.num_rays() {
        return Err(Error::Arity {
            expected: fan.num_rays(),
            got: z.len(),
        });
    }
    let mut values = BTreeMap::new();
    for tau in fan.cones(k - 1)? {
        let (b, zsum) = outgoing_sum(fan, omega, tau, Some(z))?;
        let coords = fan
            .span_coordinates(tau, &b)
            .ok_or_else(|| Error::Unbalanced(vec![tau.clone()]))?;
        let linear = tau
            .iter()
            .zip(&coords)
            .fold(Rational::zero(), |acc, (&r, c)| acc + c * &z[r]);
        values.insert(tau.clone(), zsum - linear);
    }
    Ok(MinkowskiWeight::new(k - 1, values))
}

/// `deg(D₁⋯D_k)` with respect to a `k`-weight: the iterated action evaluated
/// at the origin.
pub fn mixed_degree(fan: &MarkedFan, omega: &MinkowskiWeight, divisors: &[&[Rational]]) -> Result<Rational> {
    if divisors.len() != omega.degree() {
        return Err(Error::Arity {
            expected: omega.degree(),
            got: divisors.len(),
        });
    }
    let mut w = omega.clone();
    for z in divisors {
        w = divisor_action(fan, &w, z)?;
    }
    Ok(w.get(&[]).cloned().unwrap_or_else(Rational::zero))
}

/// The star of a tropical fan at `τ`, with `ω^τ(σ̄) = ω(σ̂)`.
pub fn star_weight(tf: &TropicalFan, tau: &[usize]) -> Result<(StarData, TropicalFan)> {
    let star = tf.fan().star(tau)?;
    let values = star
        .fan
        .maximal_cones()
        .iter()
        .zip(&star.cone_lift)
        .map(|(c, &p)| {
            let parent = &tf.fan().maximal_cones()[p];
            (c.clone(), tf.weight().value(parent).cloned())
        })
        .map(|(c, v)| v.map(|v| (c, v)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let w = MinkowskiWeight::new(star.fan.dim(), values);
    let stf = TropicalFan::new(star.fan.clone(), w)?;
    Ok((star, stf))
}

/// Equivalent representative with marks `λ_ρ u_ρ` and weights
/// `(Π_{ρ∈σ} λ_ρ⁻¹) ω(σ)`.
pub fn rescale_marking(tf: &TropicalFan, lambda: &[Rational]) -> Result<TropicalFan> {
    let fan = tf.fan().rescaled(lambda)?;
    let values = tf
        .weight()
        .values()
        .iter()
        .map(|(c, v)| {
            let factor = c.iter().fold(Rational::one(), |acc, &r| acc * lambda[r].recip());
            (c.clone(), v * factor)
        })
        .collect();
    TropicalFan::new(fan, MinkowskiWeight::new(tf.weight().degree(), values))
}

/// Carries a top-degree weight to a refinement: `ω'(σ') = ω(σ) / |det M|`,
/// where `M` writes the marks of `σ'` in the marks of the coarse cone `σ`.
///
/// When `containment` is `None` it is recomputed by locating the sum of the
/// marks of each fine cone in the coarse fan.
pub fn transport_weight(
    coarse: &TropicalFan,
    fine: &MarkedFan,
    containment: Option<&[usize]>,
) -> Result<TropicalFan> {
    let cfan = coarse.fan();
    if fine.dim() != cfan.dim() || fine.ambient_dim() != cfan.ambient_dim() {
        return Err(Error::Precondition("refinement must have the same dimensions".into()));
    }
    let mut values = BTreeMap::new();
    for (i, sigma_f) in fine.maximal_cones().iter().enumerate() {
        let parent = match containment {
            Some(map) => *map.get(i).ok_or_else(|| {
                Error::Precondition(format!("no containment entry for fine cone {sigma_f:?}"))
            })?,
            None => {
                let mut bary = exact::zero_vec(fine.ambient_dim());
                for &r in sigma_f {
                    exact::add_scaled(&mut bary, &Rational::one(), fine.ray(r));
                }
                cfan.locate(&bary)?
                    .ok_or_else(|| {
                        Error::Precondition(format!("fine cone {sigma_f:?} is outside the coarse support"))
                    })?
                    .0
            }
        };
        let sigma_c = &cfan.maximal_cones()[parent];
        let basis = cfan.mark_matrix(sigma_c);
        let mut cols = Vec::with_capacity(sigma_f.len());
        for &r in sigma_f {
            let c = exact::solve_linear(&basis, fine.ray(r))?
                .filter(|c| c.iter().all(|x| !x.is_negative()))
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "fine cone {sigma_f:?} is not contained in coarse cone {sigma_c:?}"
                    ))
                })?;
            cols.push(c);
        }
        let m = RatMatrix::from_columns(sigma_c.len(), &cols)?;
        let ratio = m.determinant()?.abs();
        values.insert(sigma_f.clone(), coarse.weight().value(sigma_c)? / ratio);
    }
    TropicalFan::new(fine.clone(), MinkowskiWeight::new(fine.dim(), values))
}

/// Values on the rays of a refinement of the piecewise linear function with
/// ray values `z` on `coarse`.
pub fn pullback_divisor(coarse: &MarkedFan, z: &[Rational], fine: &MarkedFan) -> Result<RatVector> {
    fine.rays().iter().map(|u| coarse.evaluate(z, u)).collect()
}
