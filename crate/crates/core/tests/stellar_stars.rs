//! Stars of a stellar subdivision at cones of codimension two fall into five
//! shapes, depending on how the cone meets the subdivided cone.

use std::collections::{BTreeMap, BTreeSet};

use lorentzian_fans::exact::{RatVector, Rational};
use lorentzian_fans::fan::{Cone, MarkedFan, StarData};
use lorentzian_fans::fixtures;
use lorentzian_fans::lorentzian::volume_poly_2d;
use lorentzian_fans::matroid::{bergman_fan, Matroid};
use lorentzian_fans::minkowski::{star_weight, transport_weight, TropicalFan};
use lorentzian_fans::ops::is_complete;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Case {
    Unchanged,
    Subdivided,
    Shifted,
    Spindle,
    Triangle,
}

/// Ray direction scaled so that its first nonzero entry is ±1.
fn direction(u: &[Rational]) -> RatVector {
    let lead = u.iter().find(|x| !x.is_zero()).expect("nonzero mark").abs();
    u.iter().map(|x| x / &lead).collect()
}

fn shape(fan: &MarkedFan) -> BTreeSet<BTreeSet<RatVector>> {
    fan.maximal_cones()
        .iter()
        .map(|c| c.iter().map(|&r| direction(fan.ray(r))).collect())
        .collect()
}

fn parent_cones(star: &StarData) -> BTreeSet<BTreeSet<usize>> {
    star.fan
        .maximal_cones()
        .iter()
        .map(|c| c.iter().map(|&i| star.ray_lift[i]).collect())
        .collect()
}

fn union(a: &[usize], b: &[usize]) -> Cone {
    let s: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

fn positive_count(tf: &TropicalFan) -> usize {
    volume_poly_2d(tf).unwrap().inertia().p
}

fn check(coarse: &TropicalFan, v: &[Rational], seen: &mut BTreeMap<Case, usize>) {
    let fan = coarse.fan();
    let d = fan.dim();
    let sub = fan.stellar_subdivide(v).unwrap();
    let Some(eta) = sub.new_ray else { return };
    let fine = transport_weight(coarse, &sub.fan, Some(&sub.containment)).unwrap();
    let pi = &sub.carrier;
    let k = pi.len();

    for tau in sub.fan.cones(d - 2).unwrap() {
        let new = sub.fan.star(tau).unwrap();
        let case = if !tau.contains(&eta) {
            let old = fan.star(tau).unwrap();
            if fan.contains_cone(&union(tau, pi)) {
                let w = old.projection.mul_vec(v).unwrap();
                let expected = old.fan.stellar_subdivide(&w).unwrap();
                let mut expected_shape = shape(&expected.fan);
                if expected.new_ray.is_none() {
                    // v lands on a ray of the old star; the new mark replaces it
                    expected_shape = shape(&old.fan);
                }
                assert_eq!(shape(&new.fan), expected_shape, "subdivided star at {tau:?}");
                Case::Subdivided
            } else {
                assert_eq!(shape(&new.fan), shape(&old.fan), "unchanged star at {tau:?}");
                Case::Unchanged
            }
        } else {
            let rest: Cone = tau.iter().copied().filter(|&r| r != eta).collect();
            let shared = rest.iter().filter(|r| pi.contains(r)).count();
            let outside: Vec<usize> = pi.iter().copied().filter(|r| !rest.contains(r)).collect();
            assert!(shared + 3 >= k, "{tau:?} meets {pi:?} in {shared} rays");
            if shared + 1 == k {
                let apex = union(&rest, pi);
                let old = fan.star(&apex).unwrap();
                assert_eq!(parent_cones(&new), parent_cones(&old), "star at {tau:?} vs {apex:?}");
                let (_, a) = star_weight(&fine, tau).unwrap();
                let (_, b) = star_weight(coarse, &apex).unwrap();
                assert_eq!(positive_count(&a), positive_count(&b));
                Case::Shifted
            } else if shared + 2 == k {
                let local: Vec<usize> = outside
                    .iter()
                    .map(|r| new.ray_lift.iter().position(|x| x == r).expect("pole is a star ray"))
                    .collect();
                let (p, q) = (new.fan.ray(local[0]), new.fan.ray(local[1]));
                let neg: RatVector = q.iter().map(|x| -x).collect();
                assert_eq!(direction(p), direction(&neg), "poles are opposite at {tau:?}");
                for c in new.fan.maximal_cones() {
                    assert_eq!(c.iter().filter(|i| local.contains(i)).count(), 1, "spindle cone {c:?}");
                }
                assert_eq!(new.fan.num_rays(), 2 + new.fan.maximal_cones().len() / 2);
                let (_, a) = star_weight(&fine, tau).unwrap();
                assert!(positive_count(&a) <= 1);
                Case::Spindle
            } else {
                let rays: BTreeSet<usize> = new.ray_lift.iter().copied().collect();
                assert_eq!(rays, outside.iter().copied().collect::<BTreeSet<_>>());
                assert_eq!(new.fan.maximal_cones().len(), 3);
                assert!(is_complete(&new.fan));
                let (_, a) = star_weight(&fine, tau).unwrap();
                assert_eq!(positive_count(&a), 1);
                Case::Triangle
            }
        };
        *seen.entry(case).or_default() += 1;
    }
}

fn barycenter(fan: &MarkedFan, cone: &[usize]) -> RatVector {
    let mut v = vec![Rational::zero(); fan.ambient_dim()];
    for &r in cone {
        for (x, u) in v.iter_mut().zip(fan.ray(r)) {
            *x += u;
        }
    }
    v
}

#[test]
fn five_shapes_of_stars() {
    let plane = fixtures::unit(fixtures::projective_plane());
    let fans = vec![
        fixtures::unit(fixtures::plane_times_line()),
        fixtures::unit(fixtures::simplex_fan(3)),
        fixtures::unit(fixtures::simplex_fan(4)),
        lorentzian_fans::ops::product_tropical(&plane, &plane).unwrap(),
        bergman_fan(&Matroid::complete_graph(4).unwrap()).unwrap(),
    ];
    let mut seen = BTreeMap::new();
    for tf in &fans {
        let cones: Vec<Cone> = tf.fan().all_cones().filter(|c| c.len() >= 2).cloned().collect();
        for c in cones {
            check(tf, &barycenter(tf.fan(), &c), &mut seen);
        }
    }
    for case in [Case::Unchanged, Case::Subdivided, Case::Shifted, Case::Spindle, Case::Triangle] {
        assert!(seen.get(&case).copied().unwrap_or(0) > 0, "{case:?} never occurred: {seen:?}");
    }
}
