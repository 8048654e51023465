//! Small fans used throughout the tests, examples and the CLI.

use crate::exact::{rat, rat_vec, RatVector};
use crate::fan::MarkedFan;
use crate::minkowski::{MinkowskiWeight, TropicalFan};

fn unit_vector(n: usize, i: usize, sign: i64) -> RatVector {
    let mut v = vec![rat(0); n];
    v[i] = rat(sign);
    v
}

/// Complete fan of `ℚⁿ` on `e₁,…,eₙ` and `-(e₁+…+eₙ)` (ray `n`), with
/// maximal cones all `n`-subsets.
pub fn simplex_fan(n: usize) -> MarkedFan {
    let mut rays: Vec<RatVector> = (0..n).map(|i| unit_vector(n, i, 1)).collect();
    rays.push(vec![rat(-1); n]);
    let cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    MarkedFan::new_unchecked(n, rays, cones)
}

/// The complete fan of the projective plane: rays `e₁, e₂, -e₁-e₂`.
pub fn projective_plane() -> MarkedFan {
    simplex_fan(2)
}

/// The complete fan of `ℚ¹`: rays `e₁` and `-e₁`.
pub fn line() -> MarkedFan {
    simplex_fan(1)
}

/// The 2-skeleton of the coordinate subspaces of `ℚ³`, marked by
/// `+e₁, -e₁, +e₂, -e₂, +e₃, -e₃` (in that ray order), with 12 quadrant cones.
pub fn coordinate_skeleton() -> MarkedFan {
    let rays: Vec<RatVector> = (0..3)
        .flat_map(|i| [unit_vector(3, i, 1), unit_vector(3, i, -1)])
        .collect();
    let mut cones = Vec::new();
    for a in 0..3 {
        for b in a + 1..3 {
            for sa in 0..2 {
                for sb in 0..2 {
                    cones.push(vec![2 * a + sa, 2 * b + sb]);
                }
            }
        }
    }
    MarkedFan::new_unchecked(3, rays, cones)
}

/// The weight `ω_{a,b,c}` on [`coordinate_skeleton`]: `ab` on the `(1,2)`
/// plane, `ac` on `(1,3)` and `bc` on `(2,3)`.
pub fn coordinate_skeleton_weight(a: i64, b: i64, c: i64) -> MinkowskiWeight {
    let fan = coordinate_skeleton();
    let values = fan
        .maximal_cones()
        .iter()
        .map(|cone| {
            let axes = (cone[0] / 2, cone[1] / 2);
            let v = match axes {
                (0, 1) => a * b,
                (0, 2) => a * c,
                _ => b * c,
            };
            (cone.clone(), rat(v))
        })
        .collect();
    MinkowskiWeight::new(2, values)
}

/// Two copies of [`projective_plane`] in complementary planes of `ℚ⁴`,
/// meeting only at the origin. Rays `0..3` span the first plane.
pub fn two_triangles() -> MarkedFan {
    let p = projective_plane();
    let mut rays = Vec::new();
    for u in p.rays() {
        rays.push(vec![u[0].clone(), u[1].clone(), rat(0), rat(0)]);
    }
    for u in p.rays() {
        rays.push(vec![rat(0), rat(0), u[0].clone(), u[1].clone()]);
    }
    let mut cones: Vec<Vec<usize>> = p.maximal_cones().to_vec();
    cones.extend(p.maximal_cones().iter().map(|c| c.iter().map(|r| r + 3).collect()));
    MarkedFan::new_unchecked(4, rays, cones)
}

/// `projective_plane() × line()` in `ℚ³`; rays 3 and 4 are `±e₃`.
pub fn plane_times_line() -> MarkedFan {
    projective_plane().product(&line())
}

/// A 2-fan in `ℚᵐ` (`m ≥ 2`) with two opposite rays `±e₁` (indices 0, 1)
/// and `m` legs (indices `2..m+2`) summing to zero in the complementary
/// coordinates; each leg spans a cone with each of `±e₁`.
pub fn spindle(m: usize) -> MarkedFan {
    assert!(m >= 2);
    let n = m;
    let mut rays = vec![unit_vector(n, 0, 1), unit_vector(n, 0, -1)];
    for i in 1..m {
        rays.push(unit_vector(n, i, 1));
    }
    let mut last = vec![rat(-1); n];
    last[0] = rat(0);
    rays.push(last);
    let mut cones = Vec::new();
    for leg in 2..m + 2 {
        cones.push(vec![0, leg]);
        cones.push(vec![1, leg]);
    }
    MarkedFan::new_unchecked(n, rays, cones)
}

/// Tropical fan with weight one on every maximal cone.
///
/// Panics if the unit weight is not balanced.
pub fn unit(fan: MarkedFan) -> TropicalFan {
    let w = MinkowskiWeight::uniform(&fan, fan.dim(), rat(1));
    TropicalFan::new(fan, w).expect("unit weight is balanced on fixture")
}

/// The all-ones divisor.
pub fn ones(fan: &MarkedFan) -> RatVector {
    rat_vec(&vec![1; fan.num_rays()])
}
