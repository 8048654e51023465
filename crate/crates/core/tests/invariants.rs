mod common;

use common::{lorentzian_fixtures, r, random_circle_fan, random_vector};
use lorentzian_fans::convexity::{classify_convexity, find_strictly_convex, is_convex, is_strictly_convex, Convexity};
use lorentzian_fans::exact::{rat, RatVector, Rational};
use lorentzian_fans::fixtures;
use lorentzian_fans::io::FanJson;
use lorentzian_fans::lorentzian::{is_lorentzian, ConvexSampler};
use lorentzian_fans::matroid::{bergman_fan, Matroid};
use lorentzian_fans::minkowski::{
    mixed_degree, pullback_divisor, rescale_marking, transport_weight, Divisor, TropicalFan,
};
use lorentzian_fans::ops::{act_divisor_fan, product_tropical};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn deg(tf: &TropicalFan, zs: &[RatVector]) -> Rational {
    let refs: Vec<&[Rational]> = zs.iter().map(Vec::as_slice).collect();
    tf.degree(&refs).unwrap()
}

fn add(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: &Rational, a: &[Rational]) -> RatVector {
    a.iter().map(|x| c * x).collect()
}

fn small_fixtures() -> Vec<(&'static str, TropicalFan)> {
    lorentzian_fixtures().into_iter().filter(|(n, _)| *n != "K4").collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mixed_degree_symmetric_and_multilinear(seed in any::<u64>(), which in 0usize..7, c in -4i64..5) {
        let (_, tf) = small_fixtures().swap_remove(which % 7);
        let mut g = rng(seed);
        let m = tf.fan().num_rays();
        let zs: Vec<RatVector> = (0..tf.dim()).map(|_| random_vector(&mut g, m, -3, 3)).collect();
        let base = deg(&tf, &zs);
        let mut rev = zs.clone();
        rev.reverse();
        prop_assert_eq!(deg(&tf, &rev), base.clone());

        let extra = random_vector(&mut g, m, -3, 3);
        let mut mixed = zs.clone();
        mixed[0] = add(&zs[0], &scale(&rat(c), &extra));
        let mut other = zs.clone();
        other[0] = extra;
        prop_assert_eq!(deg(&tf, &mixed), base + rat(c) * deg(&tf, &other));
    }

    #[test]
    fn linear_divisors_have_zero_degree(seed in any::<u64>(), which in 0usize..7) {
        let (_, tf) = small_fixtures().swap_remove(which % 7);
        let mut g = rng(seed);
        let phi = random_vector(&mut g, tf.fan().ambient_dim(), -3, 3);
        let mut zs: Vec<RatVector> = (0..tf.dim()).map(|_| random_vector(&mut g, tf.fan().num_rays(), -3, 3)).collect();
        zs[0] = tf.fan().linear_values(&phi);
        prop_assert!(deg(&tf, &zs).is_zero());
    }

    #[test]
    fn convexity_ignores_linear_shifts(seed in any::<u64>(), which in 0usize..7) {
        let (_, tf) = small_fixtures().swap_remove(which % 7);
        let fan = tf.fan();
        let mut g = rng(seed);
        let z = random_vector(&mut g, fan.num_rays(), -2, 2);
        let shift = fan.linear_values(&random_vector(&mut g, fan.ambient_dim(), -5, 5));
        let a = classify_convexity(fan, &z, true).unwrap();
        let b = classify_convexity(fan, &add(&z, &shift), true).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!(a.verify(fan) && b.verify(fan));
    }

    #[test]
    fn convex_divisors_have_nonnegative_degrees(seed in any::<u64>(), which in 0usize..7) {
        let (_, tf) = small_fixtures().swap_remove(which % 7);
        let mut sampler = ConvexSampler::for_fan(tf.fan(), seed).unwrap();
        let zs: Vec<RatVector> = (0..tf.dim()).map(|_| sampler.sample().unwrap().values).collect();
        prop_assert!(deg(&tf, &zs).is_positive());
    }

    #[test]
    fn rescaling_the_marking_changes_nothing(seed in any::<u64>(), which in 0usize..7) {
        let (_, tf) = small_fixtures().swap_remove(which % 7);
        let mut g = rng(seed);
        let m = tf.fan().num_rays();
        let lambda: RatVector = (0..m).map(|i| r(1 + (seed as i64 + i as i64).rem_euclid(5), 1 + (i as i64 % 3))).collect();
        let re = rescale_marking(&tf, &lambda).unwrap();
        let z = random_vector(&mut g, m, -3, 3);
        let zl: RatVector = z.iter().zip(&lambda).map(|(a, b)| a * b).collect();
        prop_assert_eq!(re.volume(&zl).unwrap(), tf.volume(&z).unwrap());
        prop_assert_eq!(is_convex(re.fan(), &zl).unwrap(), is_convex(tf.fan(), &z).unwrap());
        prop_assert_eq!(is_lorentzian(&re).unwrap().verdict, is_lorentzian(&tf).unwrap().verdict);
    }

    #[test]
    fn transport_preserves_degrees(seed in any::<u64>(), k in 3usize..7) {
        let mut g = rng(seed);
        let tf = fixtures::unit(fixtures::projective_plane());
        let fan = random_circle_fan(&mut g, k);
        // the common refinement of a random circle fan and F2 refines F2
        let mut fine = tf.clone();
        for u in fan.rays() {
            let sub = fine.fan().stellar_subdivide(u).unwrap();
            fine = transport_weight(&fine, &sub.fan, Some(&sub.containment)).unwrap();
        }
        let zs: Vec<RatVector> = (0..2).map(|_| random_vector(&mut g, 3, -3, 3)).collect();
        let pulled: Vec<RatVector> = zs.iter().map(|z| pullback_divisor(tf.fan(), z, fine.fan()).unwrap()).collect();
        prop_assert_eq!(deg(&fine, &pulled), deg(&tf, &zs));
        let recomputed = transport_weight(&tf, fine.fan(), None).unwrap();
        prop_assert_eq!(recomputed.weight(), fine.weight());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), k in 3usize..8) {
        let fan = random_circle_fan(&mut rng(seed), k);
        let tf = lorentzian_fans::ops::euclidean_weight(&fan).unwrap();
        let text = serde_json::to_string(&FanJson::from_tropical(&tf)).unwrap();
        let back = lorentzian_fans::io::parse_fan(&text).unwrap().to_tropical().unwrap();
        prop_assert_eq!(back, tf);
    }
}

#[test]
fn sums_of_convex_divisors() {
    for (name, tf) in small_fixtures() {
        let fan = tf.fan();
        let mut sampler = ConvexSampler::for_fan(fan, 11).unwrap();
        let a = sampler.sample().unwrap();
        let b = sampler.sample().unwrap();
        assert!(is_strictly_convex(fan, &add(&a, &b)).unwrap(), "{name}");
        // convex but not strictly: a linear function
        let lin = fan.linear_values(&vec![rat(1); fan.ambient_dim()]);
        assert_eq!(classify_convexity(fan, &lin, true).unwrap().verdict, Convexity::Convex, "{name}");
        assert!(is_strictly_convex(fan, &add(&a, &lin)).unwrap(), "{name}");
    }
}

#[test]
fn negative_divisors_are_not_convex_on_complete_fans() {
    let fan = fixtures::projective_plane();
    let z = Divisor::indicator(3, 0);
    let neg: RatVector = z.iter().map(|x| -x).collect();
    let cert = classify_convexity(&fan, &neg, true).unwrap();
    assert_eq!(cert.verdict, Convexity::None);
    assert!(cert.failure.is_some());
    assert!(cert.verify(&fan));
}

#[test]
fn effective_strictly_convex_divisors_on_complete_fans() {
    // on a complete fan a convex divisor is bounded below by a linear function
    // and its support polytope contains the origin when z ≥ 0
    let fan = fixtures::simplex_fan(3);
    let mut sampler = ConvexSampler::for_fan(&fan, 3).unwrap();
    for _ in 0..10 {
        let z = sampler.sample().unwrap();
        let phi = z.values[..3].to_vec();
        let shifted: RatVector = z.iter().zip(fan.linear_values(&phi)).map(|(a, b)| a - b).collect();
        assert!(shifted[..3].iter().all(Zero::is_zero));
        assert!(shifted[3].is_positive());
        assert!(is_strictly_convex(&fan, &shifted).unwrap());
    }
}

#[test]
fn stellar_subdivision_keeps_strict_convexity() {
    let mut g = rng(5);
    for (name, tf) in lorentzian_fixtures() {
        let fan = tf.fan();
        let Some(z) = find_strictly_convex(fan).unwrap() else { continue };
        for cone in fan.maximal_cones().iter().take(3) {
            let mut v = vec![rat(0); fan.ambient_dim()];
            for &rho in cone {
                let c = common::random_rational(&mut g, 1, 2, 3);
                v = add(&v, &scale(&c, fan.ray(rho)));
            }
            let sub = fan.stellar_subdivide(&v).unwrap();
            let Some(eta) = sub.new_ray else { continue };
            let pulled = pullback_divisor(fan, &z, &sub.fan).unwrap();
            assert!(is_convex(&sub.fan, &pulled).unwrap());
            assert!(!is_strictly_convex(&sub.fan, &pulled).unwrap(), "{name}");
            let mut eps = rat(1);
            let found = (0..30).any(|_| {
                let mut w = pulled.clone();
                w[eta] -= &eps;
                eps = &eps / rat(2);
                is_strictly_convex(&sub.fan, &w).unwrap()
            });
            assert!(found, "{name}: no ε works");
        }
    }
}

#[test]
fn product_volume_law() {
    let mut g = rng(9);
    let right = [
        ("line", fixtures::unit(fixtures::line())),
        ("F2", fixtures::unit(fixtures::projective_plane())),
        ("two triangles", fixtures::unit(fixtures::two_triangles())),
    ];
    for (n1, a) in &small_fixtures() {
        for (n2, b) in &right {
            if a.dim() + b.dim() > 4 {
                continue;
            }
            let p = product_tropical(a, b).unwrap();
            let z1 = random_vector(&mut g, a.fan().num_rays(), -2, 2);
            let z2 = random_vector(&mut g, b.fan().num_rays(), -2, 2);
            let (d1, d2) = (a.dim(), b.dim());
            let binom = (1..=d2).fold(rat(1), |acc, i| acc * rat((d1 + i) as i64) / rat(i as i64));
            let expected = binom * a.volume(&z1).unwrap() * b.volume(&z2).unwrap();
            let mut z = z1.clone();
            z.extend(z2);
            assert_eq!(p.volume(&z).unwrap(), expected, "{n1} x {n2}");
            let both = is_lorentzian(a).unwrap().verdict.is_yes() && is_lorentzian(b).unwrap().verdict.is_yes();
            assert_eq!(is_lorentzian(&p).unwrap().verdict.is_yes(), both, "{n1} x {n2}");
        }
    }
}

#[test]
fn acting_by_strictly_convex_divisors_keeps_lorentzian() {
    for (name, tf) in lorentzian_fixtures() {
        if tf.dim() < 2 {
            continue;
        }
        let z = find_strictly_convex(tf.fan()).unwrap().unwrap();
        let (acted, _) = act_divisor_fan(&tf, &z).unwrap();
        assert_eq!(acted.dim(), tf.dim() - 1);
        assert!(acted.weight().is_positive(), "{name}");
        assert!(is_lorentzian(&acted).unwrap().verdict.is_yes(), "{name}");
        // deg on the acted fan is deg(D · …) on the original
        let mut sampler = ConvexSampler::for_fan(tf.fan(), 2).unwrap();
        let zs: Vec<RatVector> = (0..tf.dim() - 1).map(|_| sampler.sample().unwrap().values).collect();
        let refs: Vec<&[Rational]> = std::iter::once(z.values.as_slice()).chain(zs.iter().map(Vec::as_slice)).collect();
        let direct = mixed_degree(tf.fan(), tf.weight(), &refs).unwrap();
        assert_eq!(deg(&acted, &zs), direct, "{name}");
    }
}

#[test]
fn bergman_fans_are_lorentzian() {
    let matroids = [
        ("U23", Matroid::uniform(2, 3).unwrap()),
        ("U24", Matroid::uniform(2, 4).unwrap()),
        ("U34", Matroid::uniform(3, 4).unwrap()),
        ("K4", Matroid::complete_graph(4).unwrap()),
        ("Fano", Matroid::fano()),
    ];
    for (name, m) in matroids {
        let tf = bergman_fan(&m).unwrap();
        assert_eq!(tf.dim(), m.rank() - 1, "{name}");
        let cert = is_lorentzian(&tf).unwrap();
        assert!(cert.verdict.is_yes(), "{name}");
        assert!(cert.quasiprojective(), "{name}");
    }
}
