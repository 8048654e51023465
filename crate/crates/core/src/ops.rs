//! Constructions producing new tropical fans: products, divisor-action
//! skeleta, tropical modifications, and degrees of polytopes.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::convexity::{classify_convexity, Convexity};
use crate::error::{Error, Result};
use crate::exact::{RatVector, Rational};
use crate::fan::{Cone, MarkedFan};
use crate::minkowski::{divisor_action, mixed_degree, MinkowskiWeight, TropicalFan};

/// Product fan with `(ω₁×ω₂)(σ₁×σ₂) = ω₁(σ₁)ω₂(σ₂)`.
pub fn product_tropical(tf1: &TropicalFan, tf2: &TropicalFan) -> Result<TropicalFan> {
    let fan = tf1.fan().product(tf2.fan());
    let shift = tf1.fan().num_rays();
    let values = fan
        .maximal_cones()
        .iter()
        .map(|c| {
            let (a, b): (Cone, Cone) = c.iter().partition(|&&r| r < shift);
            let b: Cone = b.iter().map(|r| r - shift).collect();
            let w1 = tf1.weight().get(&a).ok_or_else(|| Error::MissingWeight(a.clone()))?;
            let w2 = tf2.weight().get(&b).ok_or_else(|| Error::MissingWeight(b.clone()))?;
            Ok((c.clone(), w1 * w2))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    TropicalFan::new(fan, MinkowskiWeight::new(tf1.dim() + tf2.dim(), values))
}

fn require_strictly_convex(fan: &MarkedFan, z: &[Rational]) -> Result<()> {
    let cert = classify_convexity(fan, z, true)?;
    if cert.verdict == Convexity::StrictlyConvex {
        Ok(())
    } else {
        Err(Error::NotConvex {
            index: 0,
            certificate: Box::new(cert),
        })
    }
}

/// `D·Σ`: the `(d-1)`-skeleton carrying the weight `D·ω`, for strictly
/// convex `D`. Rays not on any `(d-1)`-cone are dropped; the second value
/// maps new ray indices to old ones.
pub fn act_divisor_fan(tf: &TropicalFan, z: &[Rational]) -> Result<(TropicalFan, Vec<usize>)> {
    if tf.dim() == 0 {
        return Err(Error::Precondition("cannot act on a 0-dimensional fan".into()));
    }
    require_strictly_convex(tf.fan(), z)?;
    let w = divisor_action(tf.fan(), tf.weight(), z)?;
    let (skel, old) = tf.fan().skeleton(tf.dim() - 1)?;
    let new_of: BTreeMap<usize, usize> = old.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let values = w
        .values()
        .iter()
        .map(|(c, v)| {
            let mut c: Cone = c.iter().map(|r| new_of[r]).collect();
            c.sort_unstable();
            (c, v.clone())
        })
        .collect();
    let out = TropicalFan::new(skel, MinkowskiWeight::new(tf.dim() - 1, values))?;
    Ok((out, old))
}

/// Tropical modification along the piecewise linear function with ray
/// values `z` (strictly convex): graph cones with marks `(u_ρ, z_ρ)` keep
/// their weight, and each `(d-1)`-cone `τ` gets a downward cone `τ ∪ {new}`
/// with new ray `(0, -1)` and weight `(D·ω)(τ)`. The new ray is the last.
pub fn tropical_modification(tf: &TropicalFan, z: &[Rational]) -> Result<TropicalFan> {
    let fan = tf.fan();
    if tf.dim() == 0 {
        return Err(Error::Precondition("cannot modify a 0-dimensional fan".into()));
    }
    require_strictly_convex(fan, z)?;
    let action = divisor_action(fan, tf.weight(), z)?;
    let m = fan.num_rays();
    let mut rays: Vec<RatVector> = fan
        .rays()
        .iter()
        .zip(z)
        .map(|(u, h)| {
            let mut v = u.clone();
            v.push(h.clone());
            v
        })
        .collect();
    let mut down = vec![Rational::zero(); fan.ambient_dim()];
    down.push(-Rational::one());
    rays.push(down);

    let mut cones: Vec<Cone> = fan.maximal_cones().to_vec();
    let mut values: BTreeMap<Cone, Rational> = tf.weight().values().clone();
    for tau in fan.cones(tf.dim() - 1)? {
        let mut c = tau.clone();
        c.push(m);
        values.insert(c.clone(), action.get(tau).cloned().unwrap_or_else(Rational::zero));
        cones.push(c);
    }
    let out = MarkedFan::new(fan.ambient_dim() + 1, rays, cones)?;
    TropicalFan::new(out, MinkowskiWeight::new(tf.dim(), values))
}

/// Pure full-dimensional fan in which every codimension-1 cone lies in
/// exactly two maximal cones and maximal cones are connected through them.
/// For a valid simplicial fan this means the support is the whole space.
pub fn is_complete(fan: &MarkedFan) -> bool {
    let n = fan.ambient_dim();
    if fan.dim() != n || fan.maximal_cones().iter().any(|c| c.len() != n) {
        return false;
    }
    if n == 0 {
        return true;
    }
    let Ok(walls) = fan.cones(n - 1) else { return false };
    let mut parent: Vec<usize> = (0..fan.maximal_cones().len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for w in walls {
        let around: Vec<usize> = fan
            .maximal_containing(w)
            .map(|c| fan.maximal_index(c).expect("maximal"))
            .collect();
        if around.len() != 2 {
            return false;
        }
        let (a, b) = (root(&mut parent, around[0]), root(&mut parent, around[1]));
        parent[a] = b;
    }
    let r0 = root(&mut parent, 0);
    (0..parent.len()).all(|i| root(&mut parent, i) == r0)
}

/// Weight on a complete simplicial fan making degrees of polytope divisors
/// proportional to Euclidean volume: `ω(σ) = 1/|det(u_σ)|`.
pub fn euclidean_weight(fan: &MarkedFan) -> Result<TropicalFan> {
    if !is_complete(fan) {
        return Err(Error::Precondition("fan is not complete".into()));
    }
    let values = fan
        .maximal_cones()
        .iter()
        .map(|c| Ok((c.clone(), fan.mark_matrix(c).determinant()?.abs().recip())))
        .collect::<Result<BTreeMap<_, _>>>()?;
    TropicalFan::new(fan.clone(), MinkowskiWeight::new(fan.dim(), values))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub dim: usize,
    /// `deg(D_{P₁}⋯D_{P_n})`.
    #[serde(serialize_with = "ser_rational")]
    pub degree: Rational,
    /// `deg / n!`, the mixed volume.
    #[serde(serialize_with = "ser_rational")]
    pub mixed_volume: Rational,
    pub normalization: String,
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact::format_rational(x))
}

/// Mixed degree and mixed volume of polytopes `P_i = {x : ⟨u_ρ, x⟩ ≤ a_ρ}`
/// whose right-hand sides `a` are convex divisors on the complete fan. A
/// single right-hand side is repeated `n` times, giving the volume of `P`.
pub fn polytope_bridge(fan: &MarkedFan, rhs: &[RatVector]) -> Result<BridgeReport> {
    let n = fan.ambient_dim();
    let tf = euclidean_weight(fan)?;
    let args: Vec<&[Rational]> = match rhs.len() {
        1 => vec![&rhs[0][..]; n],
        k if k == n => rhs.iter().map(Vec::as_slice).collect(),
        k => return Err(Error::Arity { expected: n, got: k }),
    };
    for (index, a) in rhs.iter().enumerate() {
        let cert = classify_convexity(fan, a, false)?;
        if cert.verdict < Convexity::Convex {
            return Err(Error::NotConvex {
                index,
                certificate: Box::new(cert),
            });
        }
    }
    let degree = mixed_degree(tf.fan(), tf.weight(), &args)?;
    let factorial: i64 = (1..=n as i64).product();
    Ok(BridgeReport {
        dim: n,
        mixed_volume: &degree / Rational::from_integer(factorial.into()),
        degree,
        normalization: "vol = deg / n!".into(),
    })
}
