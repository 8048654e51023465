//! Matroids given by their bases, and their Bergman fans.
//!
//! Subsets of the ground set are stored as `u64` bitmasks, which bounds the
//! ground set at 64 elements; everything here is exhaustive and meant for
//! small matroids.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exact::{RatVector, Rational};
use crate::fan::MarkedFan;
use crate::io::MatroidJson;
use crate::minkowski::{MinkowskiWeight, TropicalFan};

type Set = u64;

fn to_mask(elems: &[usize]) -> Set {
    elems.iter().fold(0, |m, &e| m | (1 << e))
}

fn to_elems(mask: Set) -> Vec<usize> {
    (0..64).filter(|&e| mask >> e & 1 == 1).collect()
}

/// Increasing sequence of proper nonempty flats, each strictly inside the next.
pub type FlatChain = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Set>,
}

impl Matroid {
    /// Validates the basis exchange axiom exhaustively.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Matroid> {
        if n > 64 {
            return Err(Error::InvalidMatroid(format!("ground set of size {n} exceeds 64")));
        }
        if bases.is_empty() {
            return Err(Error::InvalidMatroid("no bases".into()));
        }
        let mut set = BTreeSet::new();
        for b in bases {
            if let Some(&e) = b.iter().find(|&&e| e >= n) {
                return Err(Error::InvalidMatroid(format!("element {e} outside ground set of size {n}")));
            }
            let mask = to_mask(b);
            if mask.count_ones() as usize != b.len() {
                return Err(Error::InvalidMatroid(format!("basis {b:?} repeats an element")));
            }
            set.insert(mask);
        }
        let rank = bases[0].len();
        if let Some(b) = bases.iter().find(|b| b.len() != rank) {
            return Err(Error::InvalidMatroid(format!(
                "basis {b:?} has size {} but the first basis has size {rank}",
                b.len()
            )));
        }
        for (&b1, &b2) in set.iter().cartesian_product(set.iter()) {
            for x in to_elems(b1 & !b2) {
                let ok = to_elems(b2 & !b1)
                    .into_iter()
                    .any(|y| set.contains(&((b1 & !(1 << x)) | (1 << y))));
                if !ok {
                    return Err(Error::InvalidMatroid(format!(
                        "exchange fails for {:?}, {:?} at element {x}",
                        to_elems(b1),
                        to_elems(b2)
                    )));
                }
            }
        }
        Ok(Matroid {
            n,
            rank,
            bases: set.into_iter().collect(),
        })
    }

    pub fn from_json(m: &MatroidJson) -> Result<Matroid> {
        Self::from_bases(m.n, &m.bases)
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson {
            n: self.n,
            bases: self.bases(),
        }
    }

    /// Uniform matroid `U_{r,n}`.
    pub fn uniform(r: usize, n: usize) -> Result<Matroid> {
        let bases: Vec<Vec<usize>> = (0..n).combinations(r).collect();
        Self::from_bases(n, &bases)
    }

    /// Cycle matroid of a graph on `vertices` vertices: bases are spanning
    /// forests.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Matroid> {
        let forest_size = vertices - components(vertices, edges.iter().copied());
        let bases: Vec<Vec<usize>> = (0..edges.len())
            .combinations(forest_size)
            .filter(|s| components(vertices, s.iter().map(|&i| edges[i])) == vertices - forest_size)
            .collect();
        Self::from_bases(edges.len(), &bases)
    }

    /// Cycle matroid of the complete graph `K_k`.
    pub fn complete_graph(k: usize) -> Result<Matroid> {
        let edges: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
        Self::graphic(k, &edges)
    }

    /// The Fano plane: rank 3 on 7 points, dependent triples are its lines.
    pub fn fano() -> Matroid {
        let lines = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        let bases: Vec<Vec<usize>> = (0..7)
            .combinations(3)
            .filter(|t| !lines.iter().any(|l| l[..] == t[..]))
            .collect();
        Self::from_bases(7, &bases).expect("Fano plane is a matroid")
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> Vec<Vec<usize>> {
        self.bases.iter().map(|&b| to_elems(b)).collect()
    }

    fn rank_mask(&self, s: Set) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones()).max().unwrap_or(0) as usize
    }

    fn closure_mask(&self, s: Set) -> Set {
        let r = self.rank_mask(s);
        (0..self.n).fold(s, |acc, e| {
            if self.rank_mask(s | (1 << e)) == r {
                acc | (1 << e)
            } else {
                acc
            }
        })
    }

    pub fn rank_of(&self, s: &[usize]) -> usize {
        self.rank_mask(to_mask(s))
    }

    pub fn closure(&self, s: &[usize]) -> Vec<usize> {
        to_elems(self.closure_mask(to_mask(s)))
    }

    /// Elements contained in no basis.
    pub fn loops(&self) -> Vec<usize> {
        let covered = self.bases.iter().fold(0, |m, b| m | b);
        (0..self.n).filter(|&e| covered >> e & 1 == 0).collect()
    }

    fn flats_by_rank(&self) -> Vec<BTreeSet<Set>> {
        let mut levels = vec![BTreeSet::from([self.closure_mask(0)])];
        for _ in 0..self.rank {
            let next: BTreeSet<Set> = levels
                .last()
                .expect("nonempty")
                .iter()
                .flat_map(|&f| {
                    (0..self.n)
                        .filter(move |&e| f >> e & 1 == 0)
                        .map(move |e| self.closure_mask(f | (1 << e)))
                })
                .collect();
            levels.push(next);
        }
        levels
    }

    /// Flats grouped by rank.
    pub fn flats(&self) -> Vec<Vec<Vec<usize>>> {
        self.flats_by_rank()
            .into_iter()
            .map(|level| level.into_iter().map(to_elems).collect())
            .collect()
    }

    /// Proper nonempty flats ordered by rank, then by bitmask. This is the
    /// ray order of [`bergman_fan`].
    pub fn proper_flats(&self) -> Vec<Vec<usize>> {
        self.proper_flat_masks().into_iter().map(to_elems).collect()
    }

    fn proper_flat_masks(&self) -> Vec<Set> {
        let levels = self.flats_by_rank();
        let top = self.rank;
        levels
            .into_iter()
            .enumerate()
            .filter(|&(r, _)| r > 0 && r < top)
            .flat_map(|(_, level)| level)
            .filter(|&f| f != 0)
            .collect()
    }

    /// Maximal chains of proper nonempty flats.
    pub fn maximal_chains(&self) -> Vec<FlatChain> {
        let flats = self.proper_flat_masks();
        chains(self, &flats)
            .into_iter()
            .map(|c| c.into_iter().map(|i| to_elems(flats[i])).collect())
            .collect()
    }
}

fn components(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut count = vertices;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Maximal chains as index lists into `flats` (ordered by rank).
fn chains(m: &Matroid, flats: &[Set]) -> Vec<Vec<usize>> {
    let rank: Vec<usize> = flats.iter().map(|&f| m.rank_mask(f)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..flats.len()).filter(|&i| rank[i] == 1).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty chain");
        if rank[last] + 1 == m.rank {
            out.push(chain);
            continue;
        }
        for j in 0..flats.len() {
            if rank[j] == rank[last] + 1 && flats[last] & !flats[j] == 0 {
                let mut c = chain.clone();
                c.push(j);
                stack.push(c);
            }
        }
    }
    out.sort();
    out
}

/// The Bergman fan of a loopless matroid of rank `r ≥ 1` in `ℚⁿ/ℚ·1`,
/// identified with `ℚ^{n-1}` by `x ↦ (x_i - x_0)_{i ≥ 1}`.
///
/// Ray `i` is marked by the image of the indicator vector of
/// `m.proper_flats()[i]`; maximal cones are maximal chains of flats; every
/// maximal cone has weight one.
pub fn bergman_fan(m: &Matroid) -> Result<TropicalFan> {
    if m.rank() == 0 {
        return Err(Error::InvalidMatroid("rank 0 matroid has no Bergman fan".into()));
    }
    let loops = m.loops();
    if !loops.is_empty() {
        return Err(Error::InvalidMatroid(format!("matroid has loops {loops:?}")));
    }
    let n = m.ground_size();
    let flats = m.proper_flat_masks();
    let rays: Vec<RatVector> = flats
        .iter()
        .map(|&f| {
            let x0 = (f & 1) as i64;
            (1..n)
                .map(|i| Rational::from_integer(((f >> i & 1) as i64 - x0).into()))
                .collect()
        })
        .collect();
    let fan = if flats.is_empty() {
        MarkedFan::point(n - 1)
    } else {
        MarkedFan::new(n - 1, rays, chains(m, &flats))?
    };
    let w = MinkowskiWeight::uniform(&fan, fan.dim(), Rational::from_integer(1.into()));
    TropicalFan::new(fan, w)
}

/// Flat counts by rank, as a quick summary.
pub fn flat_profile(m: &Matroid) -> BTreeMap<usize, usize> {
    m.flats().iter().enumerate().map(|(r, l)| (r, l.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;

    #[test]
    fn uniform_rank_two() {
        let m = Matroid::uniform(2, 3).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.flats()[1], vec![vec![0], vec![1], vec![2]]);
        let tf = bergman_fan(&m).unwrap();
        assert_eq!(tf.dim(), 1);
        assert_eq!(
            tf.fan().rays(),
            &[rat_vec(&[-1, -1]), rat_vec(&[1, 0]), rat_vec(&[0, 1])]
        );
    }

    #[test]
    fn k4() {
        let m = Matroid::complete_graph(4).unwrap();
        assert_eq!(m.bases().len(), 16);
        assert_eq!(m.rank(), 3);
        assert_eq!(flat_profile(&m), BTreeMap::from([(0, 1), (1, 6), (2, 7), (3, 1)]));
        let tf = bergman_fan(&m).unwrap();
        assert_eq!(tf.dim(), 2);
        assert_eq!(tf.fan().num_rays(), 13);
        assert_eq!(tf.fan().maximal_cones().len(), 18);
    }

    #[test]
    fn exchange_violation() {
        let err = Matroid::from_bases(4, &[vec![0, 1], vec![2, 3]]).unwrap_err();
        assert!(matches!(err, Error::InvalidMatroid(_)));
        assert!(Matroid::from_bases(3, &[vec![0, 1], vec![2]]).is_err());
        assert!(Matroid::from_bases(3, &[]).is_err());
        assert!(Matroid::from_bases(2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn loops_are_rejected_by_the_fan() {
        let m = Matroid::from_bases(3, &[vec![0, 1]]).unwrap();
        assert_eq!(m.loops(), vec![2]);
        assert!(bergman_fan(&m).is_err());
    }

    #[test]
    fn rank_one_gives_the_origin() {
        let m = Matroid::uniform(1, 2).unwrap();
        let tf = bergman_fan(&m).unwrap();
        assert_eq!(tf.dim(), 0);
        assert_eq!(tf.fan().num_rays(), 0);
        assert!(bergman_fan(&Matroid::uniform(0, 2).unwrap()).is_err());
    }

    #[test]
    fn closure_and_rank() {
        let m = Matroid::complete_graph(4).unwrap();
        // edges of K4 in order 01,02,03,12,13,23; {01,02} spans the triangle 012
        assert_eq!(m.closure(&[0, 1]), vec![0, 1, 3]);
        assert_eq!(m.rank_of(&[0, 1, 3]), 2);
        assert_eq!(m.rank_of(&[]), 0);
    }

    #[test]
    fn fano_flats() {
        let m = Matroid::fano();
        assert_eq!(flat_profile(&m), BTreeMap::from([(0, 1), (1, 7), (2, 7), (3, 1)]));
        assert_eq!(m.maximal_chains().len(), 21);
    }
}
