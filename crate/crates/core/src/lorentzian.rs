//! Volume polynomials and the Lorentzian property.
//!
//! A quasiprojective tropical fan is Lorentzian exactly when it is unpinched
//! and the quadratic volume form of every 2-dimensional star has one positive
//! eigenvalue. [`is_lorentzian`] decides this; [`definition_sample_check`]
//! tests the definition directly on random strictly convex divisors.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::convexity::{self, Convexity};
use crate::error::{Error, Result};
use crate::exact::{self, format_rational, inertia, Inertia, Polynomial, RatMatrix, RatVector, Rational};
use crate::fan::{Cone, MarkedFan};
use crate::io::cone_key;
use crate::minkowski::{divisor_action, mixed_degree, star_weight, Divisor, MinkowskiWeight, TropicalFan};

/// Largest fan dimension accepted by [`volume_polynomial`].
pub const MAX_VOLUME_DIM: usize = 4;

/// `Vol(z) = zᵀ M z` on the rays of a 2-fan, or of a star of a larger fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticVolumeForm {
    pub matrix: RatMatrix,
    /// Cone whose star produced the form; empty for the fan itself.
    pub apex: Cone,
    /// Parent ray index for each row.
    pub rays: Vec<usize>,
}

impl QuadraticVolumeForm {
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::quadratic_form(&self.matrix)
    }

    /// Hessian `2M` of the volume polynomial.
    pub fn hessian(&self) -> RatMatrix {
        let two = Rational::from_integer(2.into());
        let n = self.matrix.rows();
        let mut h = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = &self.matrix[(i, j)] * &two;
            }
        }
        h
    }

    pub fn inertia(&self) -> Inertia {
        inertia(&self.matrix).expect("volume form is symmetric")
    }
}

/// The bilinear form `(D_ρ, D_η) ↦ deg(D_ρ D_η)` of a 2-weight on the ray
/// basis: `ω(σ)` when `{ρ, η}` spans a 2-cone `σ`, and `-a_ρ` on the
/// diagonal, where `Σ_{σ∋ρ} ω(σ) u_{σ∖ρ} = a_ρ u_ρ`.
pub fn degree_form(fan: &MarkedFan, omega: &MinkowskiWeight) -> Result<RatMatrix> {
    if omega.degree() != 2 {
        return Err(Error::Precondition(format!(
            "degree form needs a 2-weight, got degree {}",
            omega.degree()
        )));
    }
    let m = fan.num_rays();
    let mut mat = RatMatrix::zeros(m, m);
    for sigma in fan.cones(2)? {
        let w = omega.get(sigma).ok_or_else(|| Error::MissingWeight(sigma.clone()))?;
        mat[(sigma[0], sigma[1])] = w.clone();
        mat[(sigma[1], sigma[0])] = w.clone();
    }
    for rho in 0..m {
        let mut b = exact::zero_vec(fan.ambient_dim());
        for sigma in fan.cofaces(&[rho])? {
            let other = if sigma[0] == rho { sigma[1] } else { sigma[0] };
            exact::add_scaled(&mut b, omega.get(sigma).expect("checked above"), fan.ray(other));
        }
        let a = fan
            .span_coordinates(&[rho], &b)
            .ok_or_else(|| Error::Unbalanced(vec![vec![rho]]))?;
        mat[(rho, rho)] = -a[0].clone();
    }
    Ok(mat)
}

/// Quadratic volume form of a tropical 2-fan.
pub fn volume_poly_2d(tf: &TropicalFan) -> Result<QuadraticVolumeForm> {
    if tf.dim() != 2 {
        return Err(Error::Precondition(format!("expected a 2-fan, got dimension {}", tf.dim())));
    }
    Ok(QuadraticVolumeForm {
        matrix: degree_form(tf.fan(), tf.weight())?,
        apex: Vec::new(),
        rays: (0..tf.fan().num_rays()).collect(),
    })
}

/// `Vol(z) = deg(D(z)^d)` as a polynomial in the ray values, for `d ≤ 4`.
///
/// The coefficient of `z^α` is `d!/α! · deg(Π D_ρ^{α_ρ})`; the mixed degrees
/// are computed by applying indicator divisors in nondecreasing ray order.
pub fn volume_polynomial(tf: &TropicalFan) -> Result<Polynomial> {
    let d = tf.dim();
    if d > MAX_VOLUME_DIM {
        return Err(Error::Precondition(format!(
            "volume polynomial is limited to dimension {MAX_VOLUME_DIM}, got {d}"
        )));
    }
    let m = tf.fan().num_rays();
    let mut poly = Polynomial::zero(m);
    let mut exps = vec![0u32; m];
    expand(tf.fan(), tf.weight(), 0, &mut exps, &mut poly)?;
    Ok(poly)
}

fn expand(fan: &MarkedFan, omega: &MinkowskiWeight, from: usize, exps: &mut Vec<u32>, poly: &mut Polynomial) -> Result<()> {
    if omega.degree() == 0 {
        let deg = omega.get(&[]).cloned().unwrap_or_else(Rational::zero);
        if !deg.is_zero() {
            poly.add_term(exps.clone(), deg * multinomial(exps));
        }
        return Ok(());
    }
    for rho in from..fan.num_rays() {
        let next = divisor_action(fan, omega, &Divisor::indicator(fan.num_rays(), rho))?;
        if next.values().values().all(Zero::is_zero) {
            continue;
        }
        exps[rho] += 1;
        expand(fan, &next, rho, exps, poly)?;
        exps[rho] -= 1;
    }
    Ok(())
}

fn multinomial(exps: &[u32]) -> Rational {
    let fact = |k: u32| (1..=k as i64).product::<i64>();
    let total: u32 = exps.iter().sum();
    let denom: i64 = exps.iter().map(|&e| fact(e)).product();
    Rational::from_integer((fact(total) / denom).into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(if self.is_yes() { "yes" } else { "no" })
    }
}

/// Inertia of the volume form of one codimension-2 star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarRecord {
    pub cone: Cone,
    pub inertia: Inertia,
    /// Parent rays indexing the rows of the form.
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzianCertificate {
    pub verdict: Verdict,
    /// Strictly convex divisor, when the fan is quasiprojective.
    pub witness: Option<Divisor>,
    /// Cones of dimension at most `d - 2` whose star is disconnected away
    /// from the origin.
    pub pinched: Vec<Cone>,
    pub stars: Vec<StarRecord>,
    /// Marks the certificate refers to.
    pub marking: Vec<RatVector>,
}

impl LorentzianCertificate {
    pub fn quasiprojective(&self) -> bool {
        self.witness.is_some()
    }

    /// Cones whose star form has a positive index other than one.
    pub fn failing_stars(&self) -> Vec<&Cone> {
        self.stars.iter().filter(|s| s.inertia.p != 1).map(|s| &s.cone).collect()
    }
}

impl Serialize for LorentzianCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let stars: BTreeMap<String, &StarRecord> = self.stars.iter().map(|r| (cone_key(&r.cone), r)).collect();
        let marking: Vec<Vec<String>> = self
            .marking
            .iter()
            .map(|u| u.iter().map(format_rational).collect())
            .collect();
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("verdict", &self.verdict)?;
        map.serialize_entry("quasiprojective", &self.quasiprojective())?;
        map.serialize_entry("witness", &self.witness)?;
        map.serialize_entry("pinched", &self.pinched)?;
        map.serialize_entry("stars", &stars)?;
        map.serialize_entry("marking", &marking)?;
        map.end()
    }
}

/// Decides whether a tropical fan is Lorentzian: quasiprojective, unpinched
/// and every codimension-2 star form has exactly one positive eigenvalue.
pub fn is_lorentzian(tf: &TropicalFan) -> Result<LorentzianCertificate> {
    let fan = tf.fan();
    let witness = convexity::find_strictly_convex(fan)?;
    let pinched = fan.pinched_cones();
    let d = tf.dim();
    let stars = if d >= 2 {
        fan.cones(d - 2)?
            .par_iter()
            .map(|tau| {
                let (star, stf) = star_weight(tf, tau)?;
                let form = volume_poly_2d(&stf)?;
                Ok(StarRecord {
                    cone: tau.clone(),
                    inertia: form.inertia(),
                    rays: star.ray_lift,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let ok = witness.is_some() && pinched.is_empty() && stars.iter().all(|s| s.inertia.p == 1);
    Ok(LorentzianCertificate {
        verdict: Verdict::from_bool(ok),
        witness,
        pinched,
        stars,
        marking: fan.rays().to_vec(),
    })
}

/// Random strictly convex divisors: a fixed strictly convex witness, scaled,
/// plus random nonnegative multiples of ray indicators and a random linear
/// function. Each sample is re-certified; perturbations that break strict
/// convexity are halved until they do not.
pub struct ConvexSampler<'a> {
    fan: &'a MarkedFan,
    witness: RatVector,
    rng: ChaCha8Rng,
}

impl<'a> ConvexSampler<'a> {
    pub fn new(fan: &'a MarkedFan, witness: &[Rational], seed: u64) -> Result<Self> {
        if !convexity::is_strictly_convex(fan, witness)? {
            return Err(Error::Precondition("sampler witness is not strictly convex".into()));
        }
        Ok(ConvexSampler {
            fan,
            witness: witness.to_vec(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Builds a sampler from a witness found by linear programming.
    pub fn for_fan(fan: &'a MarkedFan, seed: u64) -> Result<Self> {
        let w = convexity::find_strictly_convex(fan)?
            .ok_or_else(|| Error::Precondition("fan is not quasiprojective".into()))?;
        Self::new(fan, &w, seed)
    }

    fn small(&mut self, max: i64) -> Rational {
        Rational::new(self.rng.gen_range(0..=max).into(), self.rng.gen_range(1..=4i64).into())
    }

    pub fn sample(&mut self) -> Result<Divisor> {
        let scale = Rational::from_integer(self.rng.gen_range(1..=3i64).into());
        let base: RatVector = self.witness.iter().map(|w| w * &scale).collect();
        let mut bump: RatVector = (0..self.fan.num_rays()).map(|_| self.small(3)).collect();
        let phi: RatVector = (0..self.fan.ambient_dim())
            .map(|_| Rational::from_integer(self.rng.gen_range(-2..=2i64).into()))
            .collect();
        let lin = self.fan.linear_values(&phi);
        for _ in 0..64 {
            let z: RatVector = base
                .iter()
                .zip(&bump)
                .zip(&lin)
                .map(|((b, e), l)| b + e + l)
                .collect();
            if convexity::is_strictly_convex(self.fan, &z)? {
                return Ok(Divisor::new(z));
            }
            let half = Rational::new(1.into(), 2.into());
            bump.iter_mut().for_each(|e| *e *= &half);
        }
        let z: RatVector = base.iter().zip(&lin).map(|(b, l)| b + l).collect();
        if convexity::is_strictly_convex(self.fan, &z)? {
            Ok(Divisor::new(z))
        } else {
            Err(Error::Internal("sampled divisor is not strictly convex".into()))
        }
    }
}

/// Per-star outcome of the sampling check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarSample {
    pub cone: Cone,
    pub star_dim: usize,
    pub inertias: Vec<Inertia>,
    /// Smallest sampled degree `deg(D₁⋯D_d)` of strictly convex divisors.
    #[serde(serialize_with = "ser_rational")]
    pub min_degree: Rational,
}

fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub samples: usize,
    pub stars: Vec<StarSample>,
    /// Every sampled form had exactly one positive eigenvalue.
    pub hodge_riemann: bool,
    /// Every sampled top degree was positive.
    pub positivity: bool,
}

/// Checks the definition of a Lorentzian fan on random data: for every star
/// of dimension at least 2 and each sample, the form
/// `(D₁, D₂) ↦ deg(D₁ D₂ D₃⋯)` with random strictly convex `D₃, …` must have
/// one positive eigenvalue, and degrees of strictly convex divisors must be
/// positive. A necessary condition only.
pub fn definition_sample_check(tf: &TropicalFan, samples: usize, seed: u64) -> Result<SampleReport> {
    let fan = tf.fan();
    let d = tf.dim();
    let mut sampler = ConvexSampler::for_fan(fan, seed)?;
    let taus: Vec<Cone> = if d >= 2 {
        (0..=d - 2).flat_map(|k| fan.cones(k).expect("k ≤ d").to_vec()).collect()
    } else {
        Vec::new()
    };
    // Draw all parent divisors up front so the report does not depend on the
    // thread schedule.
    let mut draws: Vec<Vec<Divisor>> = Vec::with_capacity(taus.len());
    for _ in &taus {
        let mut per_tau = Vec::new();
        for _ in 0..samples * d {
            per_tau.push(sampler.sample()?);
        }
        draws.push(per_tau);
    }
    let stars = taus
        .par_iter()
        .zip(&draws)
        .map(|(tau, parent_divs)| sample_star(tf, tau, parent_divs, samples))
        .collect::<Result<Vec<_>>>()?;
    let hodge_riemann = stars.iter().all(|s| s.inertias.iter().all(|i| i.p == 1));
    let positivity = stars.iter().all(|s| s.min_degree.is_positive());
    Ok(SampleReport {
        seed,
        samples,
        stars,
        hodge_riemann,
        positivity,
    })
}

fn sample_star(tf: &TropicalFan, tau: &Cone, parent_divs: &[Divisor], samples: usize) -> Result<StarSample> {
    let (star, stf) = star_weight(tf, tau)?;
    let sd = stf.dim();
    let mut pushed = parent_divs.iter().map(|z| star.push_divisor(tf.fan(), z));
    let mut inertias = Vec::with_capacity(samples);
    let mut min_degree: Option<Rational> = None;
    for _ in 0..samples {
        let divs: Vec<RatVector> = (0..sd).map(|_| pushed.next().expect("enough draws")).collect();
        let mut omega = stf.weight().clone();
        for z in &divs[2..] {
            omega = divisor_action(stf.fan(), &omega, z)?;
        }
        inertias.push(inertia(&degree_form(stf.fan(), &omega)?)?);
        let args: Vec<&[Rational]> = divs.iter().map(Vec::as_slice).collect();
        let deg = mixed_degree(stf.fan(), stf.weight(), &args)?;
        min_degree = Some(match min_degree {
            Some(m) if m < deg => m,
            _ => deg,
        });
    }
    Ok(StarSample {
        cone: tau.clone(),
        star_dim: sd,
        inertias,
        min_degree: min_degree.unwrap_or_else(Rational::one),
    })
}

/// Alexandrov–Fenchel data for a pair of convex divisors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AFReport {
    pub d1: Divisor,
    pub d2: Divisor,
    pub aux: Vec<Divisor>,
    /// `deg(D₁D₂·aux)² - deg(D₁²·aux)·deg(D₂²·aux)`.
    #[serde(serialize_with = "ser_rational")]
    pub gap: Rational,
    /// `deg(D₁^k D₂^{d-k})` for `k = 0, …, d`.
    #[serde(with = "crate::io::rational_vec")]
    pub sequence: RatVector,
    pub log_concave: bool,
    pub unimodal: bool,
}

pub fn is_log_concave(a: &[Rational]) -> bool {
    (1..a.len().saturating_sub(1)).all(|k| &a[k] * &a[k] >= &a[k - 1] * &a[k + 1])
}

/// Nondecreasing up to some index and nonincreasing after it.
pub fn is_unimodal(a: &[Rational]) -> bool {
    let mut k = 0;
    while k + 1 < a.len() && a[k] <= a[k + 1] {
        k += 1;
    }
    while k + 1 < a.len() && a[k] >= a[k + 1] {
        k += 1;
    }
    k + 1 >= a.len()
}

pub fn af_report(tf: &TropicalFan, d1: &Divisor, d2: &Divisor, aux: &[Divisor]) -> Result<AFReport> {
    let d = tf.dim();
    if d < 2 || aux.len() != d - 2 {
        return Err(Error::Arity {
            expected: d.saturating_sub(2),
            got: aux.len(),
        });
    }
    let fan = tf.fan();
    for (index, z) in [d1, d2].into_iter().chain(aux).enumerate() {
        let cert = convexity::classify_convexity(fan, z, false)?;
        if cert.verdict < Convexity::Convex {
            return Err(Error::NotConvex {
                index,
                certificate: Box::new(cert),
            });
        }
    }
    let with_aux = |a: &Divisor, b: &Divisor| -> Result<Rational> {
        let args: Vec<&[Rational]> = [a, b].into_iter().chain(aux).map(|z| &z[..]).collect();
        tf.degree(&args)
    };
    let mixed = with_aux(d1, d2)?;
    let gap = &mixed * &mixed - with_aux(d1, d1)? * with_aux(d2, d2)?;
    let sequence = (0..=d)
        .map(|k| {
            let args: Vec<&[Rational]> = (0..d).map(|i| if i < k { &d1[..] } else { &d2[..] }).collect();
            tf.degree(&args)
        })
        .collect::<Result<RatVector>>()?;
    Ok(AFReport {
        d1: d1.clone(),
        d2: d2.clone(),
        aux: aux.to_vec(),
        gap,
        log_concave: is_log_concave(&sequence),
        unimodal: is_unimodal(&sequence),
        sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_vec};
    use crate::fixtures;

    #[test]
    fn triangle_form_is_rank_one() {
        let tf = fixtures::unit(fixtures::projective_plane());
        let form = volume_poly_2d(&tf).unwrap();
        let ones = RatMatrix::from_rows(3, &vec![rat_vec(&[1, 1, 1]); 3]).unwrap();
        assert_eq!(form.matrix, ones);
        assert_eq!(form.inertia(), Inertia::new(1, 0, 2));
        let z = rat_vec(&[1, 2, 3]);
        assert_eq!(form.polynomial().eval(&z), rat(36));
        assert_eq!(form.polynomial(), volume_polynomial(&tf).unwrap());
    }

    #[test]
    fn coordinate_skeleton_form() {
        let tf = TropicalFan::new(fixtures::coordinate_skeleton(), fixtures::coordinate_skeleton_weight(1, 1, 1)).unwrap();
        let form = volume_poly_2d(&tf).unwrap();
        assert_eq!(inertia(&form.hessian()).unwrap(), Inertia::new(1, 2, 3));
        assert!(is_lorentzian(&tf).unwrap().verdict.is_yes());
    }

    #[test]
    fn spindle_has_one_negative_direction() {
        for m in 2..6 {
            let tf = fixtures::unit(fixtures::spindle(m));
            assert_eq!(volume_poly_2d(&tf).unwrap().inertia(), Inertia::new(1, 1, m));
        }
    }

    #[test]
    fn volume_polynomial_factors_on_a_product() {
        let tf = fixtures::unit(fixtures::plane_times_line());
        let vol = volume_polynomial(&tf).unwrap();
        assert!(vol.is_homogeneous());
        assert_eq!(vol.degree(), 3);
        // rays 0..3 come from the plane, 3..5 from the line
        let tri = Polynomial::linear(&rat_vec(&[1, 1, 1, 0, 0])).pow(2);
        let line = Polynomial::linear(&rat_vec(&[0, 0, 0, 1, 1]));
        assert_eq!(vol, &(&tri * &line) * &Polynomial::constant(5, rat(3)));
        let lin = tf.fan().linear_values(&rat_vec(&[1, -2, 5]));
        assert_eq!(vol.eval(&lin), rat(0));
    }

    #[test]
    fn two_triangles_are_pinched() {
        let tf = fixtures::unit(fixtures::two_triangles());
        let cert = is_lorentzian(&tf).unwrap();
        assert_eq!(cert.verdict, Verdict::No);
        assert!(cert.quasiprojective());
        assert_eq!(cert.pinched, vec![Vec::<usize>::new()]);
        let form = &cert.stars[0];
        assert_eq!(form.inertia.p, 2);

        let d1 = Divisor::new(rat_vec(&[1, 1, 1, 0, 0, 0]));
        let d2 = Divisor::new(rat_vec(&[0, 0, 0, 1, 1, 1]));
        let rep = af_report(&tf, &d1, &d2, &[]).unwrap();
        assert_eq!(rep.sequence, rat_vec(&[9, 0, 9]));
        assert!(!rep.unimodal);
        assert!(!rep.log_concave);
    }

    #[test]
    fn af_on_the_plane() {
        let tf = fixtures::unit(fixtures::projective_plane());
        let ones = Divisor::new(rat_vec(&[1, 1, 1]));
        let rep = af_report(&tf, &ones, &ones, &[]).unwrap();
        assert_eq!(rep.gap, rat(0));
        assert_eq!(rep.sequence, rat_vec(&[9, 9, 9]));
        assert!(rep.log_concave && rep.unimodal);

        let bad = Divisor::new(rat_vec(&[-1, 0, 0]));
        assert!(matches!(af_report(&tf, &ones, &bad, &[]), Err(Error::NotConvex { index: 1, .. })));
        assert!(matches!(af_report(&tf, &ones, &ones, std::slice::from_ref(&ones)), Err(Error::Arity { .. })));
    }

    #[test]
    fn sequence_shapes() {
        assert!(is_unimodal(&rat_vec(&[1, 3, 3, 2])));
        assert!(!is_unimodal(&rat_vec(&[2, 1, 2])));
        assert!(is_unimodal(&[]));
        assert!(is_log_concave(&rat_vec(&[1, 2, 4])));
        assert!(!is_log_concave(&rat_vec(&[1, 2, 5])));
    }

    #[test]
    fn sampling_agrees_on_lorentzian_fixtures() {
        let f3 = TropicalFan::new(fixtures::coordinate_skeleton(), fixtures::coordinate_skeleton_weight(1, 2, 3)).unwrap();
        for tf in [fixtures::unit(fixtures::projective_plane()), fixtures::unit(fixtures::plane_times_line()), f3] {
            let rep = definition_sample_check(&tf, 3, 7).unwrap();
            assert!(rep.hodge_riemann && rep.positivity, "{rep:?}");
            assert_eq!(rep, definition_sample_check(&tf, 3, 7).unwrap());
        }
    }

    #[test]
    fn sample_form_on_a_2_fan_is_the_volume_form() {
        let tf = fixtures::unit(fixtures::projective_plane());
        let rep = definition_sample_check(&tf, 2, 1).unwrap();
        assert_eq!(rep.stars.len(), 1);
        assert_eq!(rep.stars[0].inertias, vec![Inertia::new(1, 0, 2); 2]);
    }

    #[test]
    fn low_dimensional_fans() {
        let tf = fixtures::unit(fixtures::line());
        let cert = is_lorentzian(&tf).unwrap();
        assert!(cert.verdict.is_yes());
        assert!(cert.stars.is_empty());
        assert!(matches!(volume_poly_2d(&tf), Err(Error::Precondition(_))));
        let vol = volume_polynomial(&tf).unwrap();
        assert_eq!(vol, Polynomial::linear(&rat_vec(&[1, 1])));
    }
}
