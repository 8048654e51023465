use num_traits::Zero;

use super::{Cone, MarkedFan};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Result of a stellar subdivision.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub fan: MarkedFan,
    /// For each maximal cone of the new fan, the index of the parent maximal
    /// cone containing it.
    pub containment: Vec<usize>,
    /// Index of the new ray, or `None` when `v` was already on a ray.
    pub new_ray: Option<usize>,
    /// Cone of the parent fan containing `v` in its relative interior.
    pub carrier: Cone,
}

pub(super) fn subdivide(fan: &MarkedFan, v: &[Rational]) -> Result<Subdivision> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("cannot subdivide at the origin".into()));
    }
    let carrier = fan.carrier(v)?.ok_or(Error::OutsideSupport)?;
    if carrier.len() == 1 {
        return Ok(Subdivision {
            fan: fan.clone(),
            containment: (0..fan.maximal_cones().len()).collect(),
            new_ray: None,
            carrier,
        });
    }
    let m = fan.num_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(v.to_vec());
    let mut cones: Vec<(Cone, usize)> = Vec::new();
    for (i, sigma) in fan.maximal_cones().iter().enumerate() {
        if !super::is_subset(&carrier, sigma) {
            cones.push((sigma.clone(), i));
            continue;
        }
        for rho in &carrier {
            let mut c: Cone = sigma.iter().copied().filter(|r| r != rho).collect();
            c.push(m);
            cones.push((c, i));
        }
    }
    let sub = MarkedFan::new_unchecked(
        fan.ambient_dim(),
        rays,
        cones.iter().map(|(c, _)| c.clone()).collect(),
    );
    let containment = sub
        .maximal_cones()
        .iter()
        .map(|c| {
            cones
                .iter()
                .find(|(k, _)| {
                    let mut k = k.clone();
                    k.sort_unstable();
                    &k == c
                })
                .map(|(_, i)| *i)
                .expect("every new cone was generated")
        })
        .collect();
    Ok(Subdivision {
        fan: sub,
        containment,
        new_ray: Some(m),
        carrier,
    })
}
