//! Critical group computation: invariant factors of the reduced
//! Laplacian, the divisor-to-coordinate map, element orders, and
//! canonicalization of factor lists.
//!
//! The critical group of a connected multigraph is the torsion part of
//! the cokernel of its Laplacian; its order is the number of spanning
//! trees. Deleting one vertex (always vertex 0 here) removes the
//! single zero invariant factor, and the Smith form of the reduced
//! Laplacian presents the group as a direct sum of cyclic factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::snf::smith_normal_form;

/// A finite abelian group presented by its invariant factors
/// `d_1 | d_2 | ... | d_m`, all at least 2. The trivial group is the
/// empty sequence with order 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<BigInt>,
    order: BigInt,
}

impl AbelianGroupStructure {
    /// Wraps a factor sequence that is already a divisibility chain
    /// with all entries >= 2.
    pub fn from_chain(factors: Vec<BigInt>) -> Result<Self> {
        for (i, f) in factors.iter().enumerate() {
            if *f < BigInt::from(2) {
                return Err(Error::Parse(format!("invariant factor {f} below 2")));
            }
            if i + 1 < factors.len() && !factors[i + 1].mod_floor(f).is_zero() {
                return Err(Error::Parse(format!(
                    "broken divisibility chain at position {i}"
                )));
            }
        }
        let order = factors.iter().fold(BigInt::one(), |a, b| a * b);
        Ok(AbelianGroupStructure {
            invariant_factors: factors,
            order,
        })
    }

    pub fn trivial() -> Self {
        AbelianGroupStructure {
            invariant_factors: Vec::new(),
            order: BigInt::one(),
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Number of cyclic factors in the canonical decomposition.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Coordinates of a group element in the invariant-factor
/// decomposition; entry `i` lies in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElementCoords {
    coords: Vec<BigInt>,
}

impl GroupElementCoords {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }
}

/// Order of a coordinate tuple: lcm over factors of
/// `d_i / gcd(d_i, c_i)`.
pub fn element_order(
    structure: &AbelianGroupStructure,
    coords: &GroupElementCoords,
) -> Result<BigInt> {
    if coords.coords.len() != structure.invariant_factors.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coords for {} factors",
            coords.coords.len(),
            structure.invariant_factors.len()
        )));
    }
    let mut ord = BigInt::one();
    for (d, c) in structure.invariant_factors.iter().zip(&coords.coords) {
        let g = d.gcd(c);
        ord = ord.lcm(&(d / g));
    }
    Ok(ord)
}

/// Finite abelian groups are isomorphic iff their canonical invariant
/// factors agree.
pub fn groups_isomorphic(a: &AbelianGroupStructure, b: &AbelianGroupStructure) -> bool {
    a.invariant_factors == b.invariant_factors
}

/// Canonicalizes an arbitrary list of cyclic-factor moduli (all
/// positive) into the invariant-factor chain of their direct sum,
/// dropping unit factors. Works by repeated gcd/lcm exchanges, which
/// preserve the product and the group.
pub fn normalize_factors(raw: &[BigInt]) -> Result<AbelianGroupStructure> {
    if raw.iter().any(|x| x < &BigInt::one()) {
        return Err(Error::NonPositiveArgument);
    }
    let mut f: Vec<BigInt> = raw.iter().filter(|x| **x > BigInt::one()).cloned().collect();
    f.sort();
    loop {
        let mut changed = false;
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                if f[j].mod_floor(&f[i]).is_zero() {
                    continue;
                }
                let g = f[i].gcd(&f[j]);
                let l = f[i].lcm(&f[j]);
                f[i] = g;
                f[j] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        f.sort();
    }
    f.retain(|x| *x > BigInt::one());
    AbelianGroupStructure::from_chain(f)
}

/// The map from degree-0 divisors to cokernel coordinates of the
/// reduced Laplacian (vertex 0 deleted). Caches the Smith transform so
/// sweeps over many divisors of one graph pay for the reduction once.
pub struct CriticalGroupMap {
    n_vertices: usize,
    structure: AbelianGroupStructure,
    /// Rows of U matching the non-unit invariant factors.
    u_rows: Vec<Vec<BigInt>>,
}

impl CriticalGroupMap {
    pub fn new(g: &Multigraph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let reduced = g.laplacian().delete_row_col(0)?;
        let snf = smith_normal_form(&reduced);
        let all = snf.invariant_factors();
        debug_assert_eq!(all.len(), reduced.rows(), "reduced Laplacian is nonsingular");
        let mut factors = Vec::new();
        let mut u_rows = Vec::new();
        for (i, f) in all.iter().enumerate() {
            if *f > BigInt::one() {
                factors.push(f.clone());
                u_rows.push((0..snf.u.cols()).map(|j| snf.u[(i, j)].clone()).collect());
            }
        }
        Ok(CriticalGroupMap {
            n_vertices: g.n_vertices(),
            structure: AbelianGroupStructure::from_chain(factors)?,
            u_rows,
        })
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        &self.structure
    }

    /// Coordinates of the class of `d`; requires degree 0.
    pub fn coords(&self, d: &Divisor) -> Result<GroupElementCoords> {
        if d.len() != self.n_vertices {
            return Err(Error::DivisorLengthMismatch {
                got: d.len(),
                expected: self.n_vertices,
            });
        }
        let deg = d.degree();
        if deg != 0 {
            return Err(Error::NonzeroDegree(deg));
        }
        let tail: Vec<BigInt> = d.values()[1..].iter().map(|&x| BigInt::from(x)).collect();
        let coords = self
            .u_rows
            .iter()
            .zip(self.structure.invariant_factors())
            .map(|(row, f)| {
                let mut acc = BigInt::zero();
                for (a, b) in row.iter().zip(&tail) {
                    acc += a * b;
                }
                acc.mod_floor(f)
            })
            .collect();
        Ok(GroupElementCoords { coords })
    }

    pub fn order_of(&self, d: &Divisor) -> Result<BigInt> {
        let c = self.coords(d)?;
        element_order(&self.structure, &c)
    }
}

/// Invariant factors of the critical group of a connected multigraph.
pub fn critical_group(g: &Multigraph) -> Result<AbelianGroupStructure> {
    Ok(CriticalGroupMap::new(g)?.structure().clone())
}

/// Order of the critical group: the determinant of the reduced
/// Laplacian, which counts spanning trees.
pub fn group_order(g: &Multigraph) -> Result<BigInt> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    g.laplacian().delete_row_col(0)?.determinant()
}

/// Coordinates of a degree-0 divisor in the invariant-factor
/// decomposition of the critical group of `g`.
pub fn divisor_to_coords(g: &Multigraph, d: &Divisor) -> Result<GroupElementCoords> {
    CriticalGroupMap::new(g)?.coords(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{divisor_order, make_delta, make_epsilon, make_eta};
    use crate::graph::{build_hinge, build_thick_cycle, hinge_dual, triangle, HingeSpec};
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn factors(s: &AbelianGroupStructure) -> Vec<i64> {
        s.invariant_factors()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn cycle_group_is_cyclic() {
        for k in 3..=8u64 {
            let g = build_thick_cycle(&vec![1; k as usize]).unwrap();
            let s = critical_group(&g).unwrap();
            assert_eq!(factors(&s), vec![k as i64]);
        }
    }

    #[test]
    fn hinge_5_3_structure() {
        let (g, _) = build_hinge(&HingeSpec::new(vec![5, 5, 5]).unwrap()).unwrap();
        let s = critical_group(&g).unwrap();
        assert_eq!(factors(&s), vec![4, 28]);
        assert_eq!(s.order(), &BigInt::from(112));
    }

    #[test]
    fn two_triangles_cyclic_of_order_eight() {
        let (g, _) = build_hinge(&HingeSpec::new(vec![3, 3]).unwrap()).unwrap();
        let s = critical_group(&g).unwrap();
        assert_eq!(factors(&s), vec![8]);
    }

    #[test]
    fn three_triangles_structure() {
        let (g, _) = build_hinge(&HingeSpec::new(vec![3, 3, 3]).unwrap()).unwrap();
        let s = critical_group(&g).unwrap();
        assert_eq!(factors(&s), vec![2, 10]);
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(&triangle()).unwrap(), BigInt::from(3));
        let (g, _) = build_hinge(&HingeSpec::new(vec![3, 4, 5]).unwrap()).unwrap();
        assert_eq!(group_order(&g).unwrap(), BigInt::from(50));
    }

    #[test]
    fn group_order_rejects_disconnected() {
        let g = Multigraph::new(3);
        assert!(matches!(group_order(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn single_vertex_graph() {
        let g = Multigraph::new(1);
        assert_eq!(group_order(&g).unwrap(), BigInt::one());
        assert_eq!(critical_group(&g).unwrap(), AbelianGroupStructure::trivial());
        let c = divisor_to_coords(&g, &Divisor::zero(1)).unwrap();
        assert!(c.coords().is_empty());
    }

    #[test]
    fn tree_has_trivial_group() {
        let mut g = Multigraph::new(4);
        for i in 0..3 {
            g.add_edge(i, i + 1, 1).unwrap();
        }
        let s = critical_group(&g).unwrap();
        assert_eq!(s, AbelianGroupStructure::trivial());
        assert_eq!(s.order(), &BigInt::one());
    }

    #[test]
    fn zero_divisor_maps_to_zero_coords() {
        let (g, _) = build_hinge(&HingeSpec::new(vec![5, 5, 5]).unwrap()).unwrap();
        let c = divisor_to_coords(&g, &Divisor::zero(g.n_vertices())).unwrap();
        assert!(c.coords().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn coords_are_additive() {
        let (g, layout) = build_hinge(&HingeSpec::new(vec![4, 5]).unwrap()).unwrap();
        let map = CriticalGroupMap::new(&g).unwrap();
        let a = make_delta(&layout);
        let b = make_epsilon(&layout, 1).unwrap();
        let ca = map.coords(&a).unwrap();
        let cb = map.coords(&b).unwrap();
        let csum = map.coords(&(&a + &b)).unwrap();
        let manual: Vec<BigInt> = ca
            .coords()
            .iter()
            .zip(cb.coords())
            .zip(map.structure().invariant_factors())
            .map(|((x, y), f)| (x + y).mod_floor(f))
            .collect();
        assert_eq!(csum.coords(), &manual[..]);
    }

    #[test]
    fn element_orders_in_4_28() {
        let s = AbelianGroupStructure::from_chain(big(&[4, 28])).unwrap();
        let zero = GroupElementCoords { coords: big(&[0, 0]) };
        assert_eq!(element_order(&s, &zero).unwrap(), BigInt::one());
        let a = GroupElementCoords { coords: big(&[1, 0]) };
        assert_eq!(element_order(&s, &a).unwrap(), BigInt::from(4));
        let b = GroupElementCoords { coords: big(&[0, 1]) };
        assert_eq!(element_order(&s, &b).unwrap(), BigInt::from(28));
    }

    #[test]
    fn coordinate_orders_match_named_divisors() {
        let (g, layout) = build_hinge(&HingeSpec::new(vec![5, 5, 5]).unwrap()).unwrap();
        let map = CriticalGroupMap::new(&g).unwrap();
        let eta = make_eta(&layout, 0, 1).unwrap();
        let delta = make_delta(&layout);
        let eps = make_epsilon(&layout, 0).unwrap();
        assert_eq!(map.order_of(&eta).unwrap(), BigInt::from(4));
        assert_eq!(map.order_of(&delta).unwrap(), BigInt::from(7));
        assert_eq!(map.order_of(&eps).unwrap(), BigInt::from(28));
        assert_eq!(map.order_of(&delta).unwrap(), divisor_order(&g, &delta).unwrap());
    }

    #[test]
    fn isomorphism_is_factor_equality() {
        let a = AbelianGroupStructure::from_chain(big(&[2, 10])).unwrap();
        let b = AbelianGroupStructure::from_chain(big(&[2, 10])).unwrap();
        let c = AbelianGroupStructure::from_chain(big(&[20])).unwrap();
        assert!(groups_isomorphic(&a, &b));
        assert!(!groups_isomorphic(&a, &c));
    }

    #[test]
    fn duality_example() {
        let spec = HingeSpec::new(vec![3, 4, 5]).unwrap();
        let (h, _) = build_hinge(&spec).unwrap();
        let d = hinge_dual(&spec).unwrap();
        assert!(groups_isomorphic(
            &critical_group(&h).unwrap(),
            &critical_group(&d).unwrap()
        ));
    }

    #[test]
    fn thick_cycle_matches_two_pentagons() {
        let g1 = build_thick_cycle(&[4, 4, 1]).unwrap();
        let (g2, _) = build_hinge(&HingeSpec::new(vec![5, 5]).unwrap()).unwrap();
        assert!(groups_isomorphic(
            &critical_group(&g1).unwrap(),
            &critical_group(&g2).unwrap()
        ));
    }

    #[test]
    fn normalize_factor_lists() {
        let s = normalize_factors(&big(&[2, 10])).unwrap();
        assert_eq!(factors(&s), vec![2, 10]);
        let s = normalize_factors(&big(&[4, 6])).unwrap();
        assert_eq!(factors(&s), vec![2, 12]);
        // Chain for 4, 4, 28 stays put; unit factors drop.
        let s = normalize_factors(&big(&[1, 4, 4, 28])).unwrap();
        assert_eq!(factors(&s), vec![4, 4, 28]);
        assert!(normalize_factors(&big(&[0, 2])).is_err());
    }

    proptest! {
        // normalize_factors preserves the product and yields a chain.
        #[test]
        fn normalization_preserves_order(raw in proptest::collection::vec(1i64..=30, 1..=5)) {
            let raw = big(&raw);
            let s = normalize_factors(&raw).unwrap();
            let want: BigInt = raw.iter().fold(BigInt::one(), |a, b| a * b);
            prop_assert_eq!(s.order(), &want);
            let f = s.invariant_factors();
            for i in 1..f.len() {
                prop_assert!(f[i].mod_floor(&f[i - 1]).is_zero());
            }
        }
    }
}
