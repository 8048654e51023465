#![allow(dead_code)]

use lorentzian_fans::exact::{rat, RatVector, Rational};
use lorentzian_fans::fan::MarkedFan;
use lorentzian_fans::fixtures;
use lorentzian_fans::matroid::{bergman_fan, Matroid};
use lorentzian_fans::minkowski::TropicalFan;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    r(rng.gen_range(lo * den..=hi * den), den)
}

pub fn random_vector<R: Rng>(rng: &mut R, len: usize, lo: i64, hi: i64) -> RatVector {
    (0..len)
        .map(|_| {
            let den = rng.gen_range(1..=3);
            random_rational(rng, lo, hi, den)
        })
        .collect()
}

fn det2(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Point `((1-t²)/(1+t²), 2t/(1+t²))` on the unit circle.
pub fn circle_point(t: &Rational) -> RatVector {
    let one = rat(1);
    let denom = &one + t * t;
    vec![(&one - t * t) / &denom, (t + t) / &denom]
}

/// A complete simplicial fan of the plane whose marks are rational points of
/// the unit circle, so that the all-ones divisor is strictly convex. Rays
/// come back in counterclockwise order; cone `i` is `{i, i+1 mod k}`.
pub fn random_circle_fan<R: Rng>(rng: &mut R, k: usize) -> MarkedFan {
    loop {
        let mut ts: Vec<Rational> = (0..k)
            .map(|_| r(rng.gen_range(-40..=40), rng.gen_range(1..=8)))
            .collect();
        ts.sort();
        ts.dedup();
        if ts.len() != k {
            continue;
        }
        // t = tan(θ/2) increases with θ on (-π, π)
        let rays: Vec<RatVector> = ts.iter().map(circle_point).collect();
        let turns_left = (0..k).all(|i| det2(&rays[i], &rays[(i + 1) % k]).is_positive());
        if !turns_left {
            continue;
        }
        let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
        return MarkedFan::new(2, rays, cones).expect("valid planar fan");
    }
}

/// Vertices of `{x : ⟨u_i, x⟩ ≤ a_i}` for a planar fan in counterclockwise
/// ray order, by intersecting consecutive edge lines.
pub fn polygon_vertices(rays: &[RatVector], a: &[Rational]) -> Vec<RatVector> {
    let k = rays.len();
    (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            let (u, v) = (&rays[i], &rays[j]);
            let d = det2(u, v);
            vec![
                (&a[i] * &v[1] - &a[j] * &u[1]) / &d,
                (&u[0] * &a[j] - &v[0] * &a[i]) / &d,
            ]
        })
        .collect()
}

/// Shoelace area of a polygon with vertices in cyclic order.
pub fn shoelace(vertices: &[RatVector]) -> Rational {
    let k = vertices.len();
    let twice: Rational = (0..k)
        .map(|i| det2(&vertices[i], &vertices[(i + 1) % k]))
        .fold(Rational::zero(), |acc, x| acc + x);
    twice.abs() / rat(2)
}

/// Lorentzian fixtures shipped with the crate, by name.
pub fn lorentzian_fixtures() -> Vec<(&'static str, TropicalFan)> {
    let f3 = TropicalFan::new(
        fixtures::coordinate_skeleton(),
        fixtures::coordinate_skeleton_weight(1, 1, 1),
    )
    .unwrap();
    vec![
        ("F2", fixtures::unit(fixtures::projective_plane())),
        ("F3", f3),
        ("F5", fixtures::unit(fixtures::plane_times_line())),
        ("spindle3", fixtures::unit(fixtures::spindle(3))),
        ("P3", fixtures::unit(fixtures::simplex_fan(3))),
        ("U24", bergman_fan(&Matroid::uniform(2, 4).unwrap()).unwrap()),
        ("U34", bergman_fan(&Matroid::uniform(3, 4).unwrap()).unwrap()),
        ("K4", bergman_fan(&Matroid::complete_graph(4).unwrap()).unwrap()),
    ]
}
