use num_traits::{One, Zero};

use super::{Cone, MarkedFan};
use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, RatVector, Rational};

/// The star `Σ^τ` of a fan at a cone, realised in `V/V_τ`.
///
/// Quotient coordinates are the non-pivot coordinates of the reduced row
/// echelon form of the marks of `τ`, so the construction is deterministic.
#[derive(Clone, Debug)]
pub struct StarData {
    pub apex: Cone,
    pub fan: MarkedFan,
    /// Star ray index to parent ray index.
    pub ray_lift: Vec<usize>,
    /// Star maximal cone index to parent maximal cone index.
    pub cone_lift: Vec<usize>,
    /// `(n - k) x n` matrix of the quotient map `V → V/V_τ`.
    pub projection: RatMatrix,
    /// Pivot coordinates eliminated by the quotient.
    pub pivots: Vec<usize>,
}

impl StarData {
    pub(super) fn new(parent: &MarkedFan, tau: &[usize]) -> Result<StarData> {
        if !parent.contains_cone(tau) {
            return Err(Error::NotACone(tau.to_vec()));
        }
        let n = parent.ambient_dim();
        let rows: Vec<RatVector> = tau.iter().map(|&r| parent.ray(r).clone()).collect();
        let mut basis = RatMatrix::from_rows(n, &rows)?;
        let pivots = basis.rref();
        let kept: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();

        // w_j = v_j - Σ_i v_{p_i} (r_i)_j for each kept coordinate j.
        let mut projection = RatMatrix::zeros(kept.len(), n);
        for (row, &j) in kept.iter().enumerate() {
            projection[(row, j)] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                let c = &basis[(i, j)];
                if !c.is_zero() {
                    projection[(row, p)] = -c.clone();
                }
            }
        }

        let ray_lift = parent.link_rays(tau);
        let rays: Vec<RatVector> = ray_lift
            .iter()
            .map(|&r| projection.mul_vec(parent.ray(r)).expect("mark length"))
            .collect();
        let local: std::collections::HashMap<usize, usize> =
            ray_lift.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cones: Vec<Cone> = parent
            .maximal_containing(tau)
            .map(|m| {
                m.iter()
                    .filter(|r| !tau.contains(r))
                    .map(|r| local[r])
                    .collect()
            })
            .collect();
        let fan = MarkedFan::new_unchecked(kept.len(), rays, cones);
        let cone_lift = fan
            .maximal_cones()
            .iter()
            .map(|c| {
                let mut full: Cone = c.iter().map(|&i| ray_lift[i]).chain(tau.iter().copied()).collect();
                full.sort_unstable();
                parent.maximal_index(&full).expect("lift of a star cone is maximal")
            })
            .collect();
        Ok(StarData {
            apex: tau.to_vec(),
            fan,
            ray_lift,
            cone_lift,
            projection,
            pivots,
        })
    }

    /// The linear functional supported on the pivot coordinates taking the
    /// values `z_ρ` on the marks of the apex.
    pub fn apex_functional(&self, parent: &MarkedFan, z: &[Rational]) -> RatVector {
        let n = parent.ambient_dim();
        let k = self.apex.len();
        let mut phi = vec![Rational::zero(); n];
        if k == 0 {
            return phi;
        }
        // Square system: marks of τ restricted to the pivot coordinates.
        let mut m = RatMatrix::zeros(k, k);
        for (i, &r) in self.apex.iter().enumerate() {
            for (j, &p) in self.pivots.iter().enumerate() {
                m[(i, j)] = parent.ray(r)[p].clone();
            }
        }
        let rhs: RatVector = self.apex.iter().map(|&r| z[r].clone()).collect();
        let coeffs = exact::solve_linear(&m, &rhs)
            .expect("square system")
            .expect("marks of a simplicial cone are independent on the pivots");
        for (j, &p) in self.pivots.iter().enumerate() {
            phi[p] = coeffs[j].clone();
        }
        phi
    }

    /// Image `z̄` on the star of ray values `z` on the parent: subtract the
    /// canonical linear function matching `z` on the apex and restrict.
    pub fn push_divisor(&self, parent: &MarkedFan, z: &[Rational]) -> RatVector {
        let phi = self.apex_functional(parent, z);
        self.ray_lift
            .iter()
            .map(|&r| &z[r] - exact::dot(&phi, parent.ray(r)))
            .collect()
    }

    /// Parent cone `τ ∪ lift(π)` for a cone `π` of the star.
    pub fn lift_cone(&self, pi: &[usize]) -> Cone {
        let mut c: Cone = pi.iter().map(|&i| self.ray_lift[i]).chain(self.apex.iter().copied()).collect();
        c.sort_unstable();
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_vec};
    use crate::fixtures;

    #[test]
    fn star_of_a_ray_in_the_plane() {
        let f2 = fixtures::projective_plane();
        let st = f2.star(&[0]).unwrap();
        assert_eq!(st.fan.ambient_dim(), 1);
        assert_eq!(st.fan.dim(), 1);
        assert_eq!(st.ray_lift, vec![1, 2]);
        // e1 is eliminated; e2 ↦ 1 and -e1-e2 ↦ -1
        assert_eq!(st.fan.rays(), &[rat_vec(&[1]), rat_vec(&[-1])]);
        assert_eq!(st.fan.maximal_cones().len(), 2);
        assert!(st.fan.validate().is_valid());
    }

    #[test]
    fn star_at_origin_is_identity() {
        let f3 = fixtures::coordinate_skeleton();
        let st = f3.star(&[]).unwrap();
        assert_eq!(st.fan, f3);
        assert_eq!(st.projection, RatMatrix::identity(3));
    }

    #[test]
    fn star_of_a_coordinate_axis() {
        let f3 = fixtures::coordinate_skeleton();
        // ray index 4 is +e3 in the fixture ordering (+e1,-e1,+e2,-e2,+e3,-e3)
        let st = f3.star(&[4]).unwrap();
        assert_eq!(st.fan.ambient_dim(), 2);
        assert_eq!(st.fan.num_rays(), 4);
        let mut rays = st.fan.rays().to_vec();
        rays.sort();
        let mut expect = vec![rat_vec(&[1, 0]), rat_vec(&[-1, 0]), rat_vec(&[0, 1]), rat_vec(&[0, -1])];
        expect.sort();
        assert_eq!(rays, expect);
        assert_eq!(st.fan.dim(), 1);
    }

    #[test]
    fn not_a_cone() {
        let f2 = fixtures::projective_plane();
        assert!(matches!(f2.star(&[0, 1, 2]), Err(Error::NotACone(_))));
    }

    #[test]
    fn pushed_divisor_vanishes_on_apex_functional() {
        let f2 = fixtures::projective_plane();
        let st = f2.star(&[0]).unwrap();
        let z = rat_vec(&[5, 1, 2]);
        let phi = st.apex_functional(&f2, &z);
        assert_eq!(crate::exact::dot(&phi, f2.ray(0)), rat(5));
        // z̄ = z - φ(u): φ = 5 e1*, so e2 ↦ 1, -e1-e2 ↦ 2 + 5
        assert_eq!(st.push_divisor(&f2, &z), rat_vec(&[1, 7]));
    }
}
