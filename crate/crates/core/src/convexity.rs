//! Convexity and strict convexity of divisors.
//!
//! A divisor `z` is convex at `τ` when some linear functional `φ` agrees with
//! `z` on the marks of `τ` and satisfies `φ(u_η) ≤ z_η` on every other ray of
//! the neighborhood of `τ`; strictly convex when the inequalities can be made
//! strict. A divisor is (strictly) convex when this holds at every cone.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, infeasibility_certificate, FarkasCertificate, RatVector, Rational};
use crate::fan::{Cone, MarkedFan};
use crate::minkowski::Divisor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convexity {
    None,
    Convex,
    StrictlyConvex,
}

/// Outcome at a single cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeWitness {
    pub cone: Cone,
    /// Functional matching `z` on the cone, if one with the weak inequalities
    /// exists.
    #[serde(serialize_with = "ser_opt_vec")]
    pub witness: Option<RatVector>,
    /// Whether `witness` satisfies the inequalities strictly.
    pub strict: bool,
    /// Neighborhood rays other than those of the cone.
    pub neighbors: Vec<usize>,
}

fn ser_opt_vec<S: serde::Serializer>(v: &Option<RatVector>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_seq(v.iter().map(exact::format_rational)),
        None => s.serialize_none(),
    }
}

/// Infeasibility proof for the system at one cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityFailure {
    pub cone: Cone,
    /// Whether the failing system used strict inequalities.
    pub strict: bool,
    pub farkas: FarkasCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityCertificate {
    pub verdict: Convexity,
    #[serde(with = "crate::io::rational_vec")]
    pub divisor: RatVector,
    pub cones: Vec<ConeWitness>,
    /// Present whenever the verdict is below what was asked for.
    pub failure: Option<ConvexityFailure>,
}

type Rows = Vec<(RatVector, Rational)>;

fn local_system(fan: &MarkedFan, z: &[Rational], tau: &[usize]) -> (Rows, Rows, Vec<usize>) {
    let eqs = tau.iter().map(|&r| (fan.ray(r).clone(), z[r].clone())).collect();
    let neighbors = fan.link_rays(tau);
    let ineqs = neighbors.iter().map(|&r| (fan.ray(r).clone(), z[r].clone())).collect();
    (eqs, ineqs, neighbors)
}

fn cone_witness(fan: &MarkedFan, z: &[Rational], tau: &Cone, strict: bool) -> Result<ConeWitness> {
    let n = fan.ambient_dim();
    let (eqs, ineqs, neighbors) = local_system(fan, z, tau);
    if strict {
        if let Some(w) = exact::strict_feasible(n, &eqs, &ineqs)? {
            return Ok(ConeWitness {
                cone: tau.clone(),
                witness: Some(w),
                strict: true,
                neighbors,
            });
        }
    }
    let witness = exact::feasible(n, &eqs, &ineqs, &[])?;
    // With no neighbors the weak witness is also strict.
    let strict = witness.is_some() && neighbors.is_empty();
    Ok(ConeWitness {
        cone: tau.clone(),
        witness,
        strict,
        neighbors,
    })
}

/// Decides convexity of `z` at every cone of `fan`, including the origin.
///
/// With `strict` unset only weak convexity is examined, so the verdict is at
/// most [`Convexity::Convex`].
pub fn classify_convexity(fan: &MarkedFan, z: &[Rational], strict: bool) -> Result<ConvexityCertificate> {
    if z.len() != fan.num_rays() {
        return Err(Error::Arity {
            expected: fan.num_rays(),
            got: z.len(),
        });
    }
    let cones: Vec<&Cone> = fan.all_cones().collect();
    let cones = cones
        .par_iter()
        .map(|tau| cone_witness(fan, z, tau, strict))
        .collect::<Result<Vec<_>>>()?;

    let weak_fail = cones.iter().find(|c| c.witness.is_none());
    let strict_fail = cones.iter().find(|c| !c.strict);
    let (verdict, failing, failing_strict) = match (weak_fail, strict_fail) {
        (Some(c), _) => (Convexity::None, Some(c), false),
        (None, Some(c)) if strict => (Convexity::Convex, Some(c), true),
        (None, Some(_)) => (Convexity::Convex, None, false),
        (None, None) => (
            if strict { Convexity::StrictlyConvex } else { Convexity::Convex },
            None,
            false,
        ),
    };
    let failure = match failing {
        None => None,
        Some(c) => {
            let (eqs, ineqs, _) = local_system(fan, z, &c.cone);
            let farkas = if failing_strict {
                infeasibility_certificate(fan.ambient_dim(), &eqs, &[], &ineqs)?
            } else {
                infeasibility_certificate(fan.ambient_dim(), &eqs, &ineqs, &[])?
            }
            .ok_or_else(|| Error::Internal(format!("no infeasibility proof at cone {:?}", c.cone)))?;
            Some(ConvexityFailure {
                cone: c.cone.clone(),
                strict: failing_strict,
                farkas,
            })
        }
    };
    Ok(ConvexityCertificate {
        verdict,
        divisor: z.to_vec(),
        cones,
        failure,
    })
}

impl ConvexityCertificate {
    /// Re-checks every witness and the failure proof by substitution.
    pub fn verify(&self, fan: &MarkedFan) -> bool {
        let z = &self.divisor;
        if z.len() != fan.num_rays() || self.cones.len() != fan.all_cones().count() {
            return false;
        }
        for c in &self.cones {
            let Some(phi) = &c.witness else { continue };
            if phi.len() != fan.ambient_dim() {
                return false;
            }
            let on_cone = c.cone.iter().all(|&r| exact::dot(phi, fan.ray(r)) == z[r]);
            let off_cone = c.neighbors.iter().all(|&r| {
                let v = exact::dot(phi, fan.ray(r));
                if c.strict {
                    v < z[r]
                } else {
                    v <= z[r]
                }
            });
            if !on_cone || !off_cone || c.neighbors != fan.link_rays(&c.cone) {
                return false;
            }
        }
        let all_weak = self.cones.iter().all(|c| c.witness.is_some());
        let all_strict = self.cones.iter().all(|c| c.strict);
        let failure_ok = |strict: bool| {
            self.failure.as_ref().is_some_and(|f| {
                let (eqs, ineqs, _) = local_system(fan, z, &f.cone);
                f.strict == strict
                    && if strict {
                        f.farkas.verify(fan.ambient_dim(), &eqs, &[], &ineqs)
                    } else {
                        f.farkas.verify(fan.ambient_dim(), &eqs, &ineqs, &[])
                    }
            })
        };
        match self.verdict {
            Convexity::StrictlyConvex => all_strict,
            Convexity::Convex => all_weak && (self.failure.is_none() || failure_ok(true)),
            Convexity::None => failure_ok(false),
        }
    }
}

pub fn is_convex(fan: &MarkedFan, z: &[Rational]) -> Result<bool> {
    Ok(classify_convexity(fan, z, false)?.verdict >= Convexity::Convex)
}

pub fn is_strictly_convex(fan: &MarkedFan, z: &[Rational]) -> Result<bool> {
    Ok(classify_convexity(fan, z, true)?.verdict == Convexity::StrictlyConvex)
}

/// Searches for a strictly convex divisor by cutting planes.
///
/// Each round solves one max-slack LP over `z` and a functional `φ_τ` for
/// every active cone, then certifies the candidate on all cones and activates
/// the cones where it fails. Infeasibility on a subset of cones is already
/// conclusive. `z` is pinned to zero on [`MarkedFan::spanning_rays`], which
/// removes the linear functions and keeps the program bounded.
pub fn find_strictly_convex(fan: &MarkedFan) -> Result<Option<Divisor>> {
    // Cones inside a single maximal cone are strictly convex for every z.
    let mut active: Vec<Cone> = fan
        .all_cones()
        .filter(|t| t.is_empty() && !fan.maximal_cones().is_empty())
        .cloned()
        .collect();
    loop {
        let Some(z) = solve_on(fan, &active)? else {
            return Ok(None);
        };
        let cert = classify_convexity(fan, &z, true)?;
        if cert.verdict == Convexity::StrictlyConvex {
            return Ok(Some(Divisor::new(z)));
        }
        let before = active.len();
        for c in cert.cones.iter().filter(|c| !c.strict) {
            if !active.contains(&c.cone) {
                active.push(c.cone.clone());
            }
        }
        if active.len() == before {
            return Err(Error::Internal("convexity LP returned a divisor failing its own cones".into()));
        }
    }
}

/// Joint max-slack LP over `z` and one functional per cone, written in the
/// quotient coordinates of the star: `ψ_τ(ū_η) < z̄_η` on every neighbor.
fn solve_on(fan: &MarkedFan, cones: &[Cone]) -> Result<Option<RatVector>> {
    let m = fan.num_rays();
    let pinned = fan.spanning_rays();
    let mut zcol = vec![None; m];
    let mut nvars = 0;
    for (r, col) in zcol.iter_mut().enumerate() {
        if !pinned.contains(&r) {
            *col = Some(nvars);
            nvars += 1;
        }
    }
    let stars = cones.iter().map(|t| fan.star(t)).collect::<Result<Vec<_>>>()?;
    let width = nvars + stars.iter().map(|s| s.fan.ambient_dim()).sum::<usize>();
    let mut strict: Rows = Vec::new();
    let mut offset = nvars;
    for star in &stars {
        let q = star.fan.ambient_dim();
        // z̄_η = z_η + Σ_ρ z_ρ · (pushed indicator of ρ)_η
        let pushed: Vec<(usize, RatVector)> = star
            .apex
            .iter()
            .map(|&r| (r, star.push_divisor(fan, &Divisor::indicator(m, r))))
            .collect();
        for (local, &eta) in star.ray_lift.iter().enumerate() {
            let mut row = exact::zero_vec(width);
            row[offset..offset + q].clone_from_slice(star.fan.ray(local));
            if let Some(c) = zcol[eta] {
                row[c] -= Rational::from_integer(1.into());
            }
            for (r, p) in &pushed {
                if let Some(c) = zcol[*r] {
                    row[c] -= &p[local];
                }
            }
            strict.push((row, Rational::zero()));
        }
        offset += q;
    }
    let Some(x) = exact::strict_feasible(width, &[], &strict)? else {
        return Ok(None);
    };
    Ok(Some(zcol.iter().map(|c| c.map_or_else(Rational::zero, |c| x[c].clone())).collect()))
}

/// Whether `z` agrees on the rays with a global linear function.
pub fn is_linear(fan: &MarkedFan, z: &[Rational]) -> Result<bool> {
    let eqs: Rows = (0..fan.num_rays()).map(|r| (fan.ray(r).clone(), z[r].clone())).collect();
    Ok(exact::feasible(fan.ambient_dim(), &eqs, &[], &[])?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;
    use crate::fixtures;

    #[test]
    fn plane_examples() {
        let f2 = fixtures::projective_plane();
        let c = classify_convexity(&f2, &rat_vec(&[1, 1, 1]), true).unwrap();
        assert_eq!(c.verdict, Convexity::StrictlyConvex);
        assert!(c.verify(&f2));

        let c = classify_convexity(&f2, &rat_vec(&[-1, 0, 0]), true).unwrap();
        assert_eq!(c.verdict, Convexity::None);
        assert!(c.verify(&f2));
        assert!(c.failure.is_some());

        let lin = f2.linear_values(&rat_vec(&[2, -3]));
        let c = classify_convexity(&f2, &lin, true).unwrap();
        assert_eq!(c.verdict, Convexity::Convex);
        assert!(c.verify(&f2));
        assert!(c.failure.as_ref().unwrap().strict);
    }

    #[test]
    fn weak_only_mode() {
        let f2 = fixtures::projective_plane();
        let c = classify_convexity(&f2, &rat_vec(&[1, 1, 1]), false).unwrap();
        assert_eq!(c.verdict, Convexity::Convex);
        assert!(c.failure.is_none());
        assert!(c.verify(&f2));
    }

    #[test]
    fn tampered_certificate_fails() {
        let f2 = fixtures::projective_plane();
        let mut c = classify_convexity(&f2, &rat_vec(&[1, 1, 1]), true).unwrap();
        c.cones[0].witness = Some(rat_vec(&[5, 5]));
        assert!(!c.verify(&f2));
    }

    #[test]
    fn linear_shift_keeps_verdict() {
        let f2 = fixtures::projective_plane();
        let lin = f2.linear_values(&rat_vec(&[7, -2]));
        for z in [rat_vec(&[1, 1, 1]), rat_vec(&[-1, 0, 0]), rat_vec(&[0, 0, 0])] {
            let shifted: RatVector = z.iter().zip(&lin).map(|(a, b)| a + b).collect();
            assert_eq!(
                classify_convexity(&f2, &z, true).unwrap().verdict,
                classify_convexity(&f2, &shifted, true).unwrap().verdict
            );
        }
    }

    #[test]
    fn quasiprojective_fixtures() {
        for fan in [
            fixtures::projective_plane(),
            fixtures::coordinate_skeleton(),
            fixtures::two_triangles(),
            fixtures::plane_times_line(),
            fixtures::spindle(3),
        ] {
            let z = find_strictly_convex(&fan).unwrap().expect("witness");
            assert!(is_strictly_convex(&fan, &z).unwrap());
        }
    }

    #[test]
    fn arity_is_checked() {
        let f2 = fixtures::projective_plane();
        assert!(matches!(
            classify_convexity(&f2, &rat_vec(&[1]), true),
            Err(Error::Arity { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn is_linear_detects_linear_functions() {
        let f2 = fixtures::projective_plane();
        assert!(is_linear(&f2, &f2.linear_values(&rat_vec(&[1, 4]))).unwrap());
        assert!(!is_linear(&f2, &rat_vec(&[1, 1, 1])).unwrap());
    }
}
