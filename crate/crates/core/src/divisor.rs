//! Divisors (chip configurations) and the chip-firing calculus:
//! firing, linear equivalence, divisor order, q-reduction, and the
//! named degree-0 divisors delta / epsilon / eta on hinge layouts.

use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{build_hinge, HingeLayout, Multigraph};
use crate::group::{group_order, CriticalGroupMap};
use crate::solve::{solve_rational_affine, IntegralSolver};

/// Integer label per vertex. The order of a degree-0 divisor is the
/// least positive multiple linearly equivalent to the zero divisor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor {
    values: Vec<i64>,
}

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Divisor { values }
    }

    pub fn zero(n: usize) -> Self {
        Divisor { values: vec![0; n] }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn scale(&self, z: i64) -> Divisor {
        Divisor {
            values: self.values.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.values.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_len(&self, g: &Multigraph) -> Result<()> {
        if self.values.len() != g.n_vertices() {
            return Err(Error::DivisorLengthMismatch {
                got: self.values.len(),
                expected: g.n_vertices(),
            });
        }
        Ok(())
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, other: &Divisor) -> Divisor {
        assert_eq!(self.values.len(), other.values.len(), "divisor lengths differ");
        Divisor {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.scale(-1)
    }
}

/// Fires vertex `v` once: `v` loses its valence in chips, each
/// neighbor gains the edge multiplicity. Degree is preserved.
pub fn fire(g: &Multigraph, d: &Divisor, v: usize) -> Result<Divisor> {
    d.check_len(g)?;
    if v >= g.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n_vertices: g.n_vertices(),
        });
    }
    let mut out = d.clone();
    out.values[v] -= g.valence(v) as i64;
    for (u, m) in g.neighbors(v) {
        out.values[u] += m as i64;
    }
    Ok(out)
}

/// Applies a firing script: vertex `i` fires `r[i]` times (negative
/// entries borrow). Equals `d - L*r` for the Laplacian `L = D - A`.
pub fn fire_script(g: &Multigraph, d: &Divisor, r: &[i64]) -> Result<Divisor> {
    d.check_len(g)?;
    if r.len() != g.n_vertices() {
        return Err(Error::DivisorLengthMismatch {
            got: r.len(),
            expected: g.n_vertices(),
        });
    }
    let mut out = d.clone();
    for (v, &rv) in r.iter().enumerate() {
        out.values[v] -= g.valence(v) as i64 * rv;
    }
    for (u, v, m) in g.edges() {
        let m = m as i64;
        out.values[u] += m * r[v];
        out.values[v] += m * r[u];
    }
    Ok(out)
}

/// Two divisors are linearly equivalent iff their difference is an
/// integer combination of Laplacian columns (a firing script).
pub fn is_linearly_equivalent(g: &Multigraph, a: &Divisor, b: &Divisor) -> Result<bool> {
    a.check_len(g)?;
    b.check_len(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let diff: Vec<BigInt> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| BigInt::from(x - y))
        .collect();
    Ok(IntegralSolver::new(&g.laplacian()).solve(&diff)?.is_some())
}

/// Order of the class of `d` in the critical group, computed through
/// cokernel coordinates. Requires degree 0.
pub fn divisor_order(g: &Multigraph, d: &Divisor) -> Result<BigInt> {
    let map = CriticalGroupMap::new(g)?;
    map.order_of(d)
}

/// Order of `d` from the rational firing-count solution of `L r = d`:
/// the least positive `z` such that `z * r` can be shifted by a
/// multiple of the all-ones kernel vector into an integer script,
/// which is the least common multiple of the denominators of the
/// differences `r_i - r_0`.
pub fn divisor_order_via_gcd(g: &Multigraph, d: &Divisor) -> Result<BigInt> {
    d.check_len(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let deg = d.degree();
    if deg != 0 {
        return Err(Error::NonzeroDegree(deg));
    }
    let sol = solve_rational_affine(&g.laplacian(), &d.to_bigint())?
        .expect("degree-0 divisor on a connected graph is rationally solvable");
    let r = &sol.particular;
    let mut z = BigInt::from(1);
    for x in r.iter().skip(1) {
        let diff = x - &r[0];
        z = z.lcm(diff.denom());
    }
    Ok(z)
}

fn bfs_layers(g: &Multigraph, q: usize) -> Vec<usize> {
    let n = g.n_vertices();
    let mut dist = vec![usize::MAX; n];
    dist[q] = 0;
    let mut frontier = vec![q];
    let mut next = Vec::new();
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        for &v in &frontier {
            for (u, _) in g.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = level;
                    next.push(u);
                }
            }
        }
        frontier = std::mem::take(&mut next);
    }
    dist
}

/// Dhar burning pass: starting from `q`, a vertex burns once its chip
/// count is strictly below its edge count into the burnt region.
/// Returns the burnt set; everything burnt means no subset of
/// `V \ {q}` can fire without going negative.
fn burn_from(g: &Multigraph, values: &[i64], q: usize) -> Vec<bool> {
    let n = g.n_vertices();
    let mut burnt = vec![false; n];
    burnt[q] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if burnt[v] {
                continue;
            }
            let into_burnt: i64 = g
                .neighbors(v)
                .iter()
                .filter(|(u, _)| burnt[*u])
                .map(|(_, m)| *m as i64)
                .sum();
            if into_burnt > 0 && values[v] < into_burnt {
                burnt[v] = true;
                changed = true;
            }
        }
    }
    burnt
}

/// True iff `d` is the canonical q-reduced representative: nonnegative
/// away from `q`, and no nonempty subset of `V \ {q}` can fire with
/// all members staying nonnegative (decided by the burning pass).
pub fn is_q_reduced(g: &Multigraph, d: &Divisor, q: usize) -> Result<bool> {
    d.check_len(g)?;
    if q >= g.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: q,
            n_vertices: g.n_vertices(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if (0..g.n_vertices()).any(|v| v != q && d.values[v] < 0) {
        return Ok(false);
    }
    Ok(burn_from(g, &d.values, q).iter().all(|&b| b))
}

/// The unique q-reduced divisor linearly equivalent to `d`.
///
/// Phase 1 clears debt away from `q` by borrowing on whole BFS
/// distance-layers, outermost first: borrowing the set of vertices at
/// distance >= j raises every layer-j vertex by its edge count toward
/// layer j-1 (at least 1) and touches nothing farther out, so each
/// layer is settled in finitely many steps. Phase 2 is the standard
/// Dhar loop: fire the full unburnt set until the burn covers the
/// graph.
pub fn q_reduce(g: &Multigraph, d: &Divisor, q: usize) -> Result<Divisor> {
    d.check_len(g)?;
    if q >= g.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: q,
            n_vertices: g.n_vertices(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n_vertices();
    let mut c = d.values.clone();
    let dist = bfs_layers(g, q);
    let max_layer = dist.iter().copied().max().unwrap_or(0);

    // Phase 1: outermost layer first, borrow until nonnegative.
    for j in (1..=max_layer).rev() {
        loop {
            // Rise per borrow for each layer-j vertex: edges to layer j-1.
            let mut rounds: i64 = 0;
            for v in 0..n {
                if dist[v] != j || c[v] >= 0 {
                    continue;
                }
                let up: i64 = g
                    .neighbors(v)
                    .iter()
                    .filter(|(u, _)| dist[*u] == j - 1)
                    .map(|(_, m)| *m as i64)
                    .sum();
                debug_assert!(up >= 1, "BFS layer vertex has an inward edge");
                rounds = rounds.max((-c[v] + up - 1) / up);
            }
            if rounds == 0 {
                break;
            }
            // Borrow the set {dist >= j} `rounds` times: only edges on
            // the (j-1, j) boundary move chips.
            for (u, v, m) in g.edges() {
                let m = m as i64 * rounds;
                let (inner, outer) = if dist[u] >= j && dist[v] < j {
                    (u, v)
                } else if dist[v] >= j && dist[u] < j {
                    (v, u)
                } else {
                    continue;
                };
                c[inner] += m;
                c[outer] -= m;
            }
        }
    }

    // Phase 2: Dhar loop. Firing the unburnt set keeps its members
    // nonnegative by the burning criterion; batch as many rounds as
    // the chip counts allow.
    loop {
        let burnt = burn_from(g, &c, q);
        if burnt.iter().all(|&b| b) {
            break;
        }
        let mut rounds = i64::MAX;
        for v in 0..n {
            if burnt[v] {
                continue;
            }
            let boundary: i64 = g
                .neighbors(v)
                .iter()
                .filter(|(u, _)| burnt[*u])
                .map(|(_, m)| *m as i64)
                .sum();
            if boundary > 0 {
                rounds = rounds.min(c[v] / boundary);
            }
        }
        debug_assert!((1..i64::MAX).contains(&rounds));
        for (u, v, m) in g.edges() {
            if burnt[u] == burnt[v] {
                continue;
            }
            let m = m as i64 * rounds;
            let (unburnt, b) = if burnt[u] { (v, u) } else { (u, v) };
            c[unburnt] -= m;
            c[b] += m;
        }
    }

    Ok(Divisor::new(c))
}

/// +1 and -1 on the shared vertex pair of a hinge layout.
pub fn make_delta(layout: &HingeLayout) -> Divisor {
    let mut values = vec![0i64; layout.n_vertices()];
    values[layout.shared.0] = 1;
    values[layout.shared.1] = -1;
    Divisor::new(values)
}

/// +1 on the first path vertex of cycle `i` (0-based), -1 on the
/// adjacent shared vertex.
pub fn make_epsilon(layout: &HingeLayout, i: usize) -> Result<Divisor> {
    let p = layout.first_path_vertex(i)?;
    let mut values = vec![0i64; layout.n_vertices()];
    values[p] = 1;
    values[layout.shared.0] = -1;
    Ok(Divisor::new(values))
}

/// +1 and -1 on the first path vertices of two distinct cycles
/// (0-based indices), both adjacent to shared vertex 0.
pub fn make_eta(layout: &HingeLayout, i: usize, j: usize) -> Result<Divisor> {
    if i == j {
        return Err(Error::EqualCycleIndices);
    }
    let pi = layout.first_path_vertex(i)?;
    let pj = layout.first_path_vertex(j)?;
    let mut values = vec![0i64; layout.n_vertices()];
    values[pi] = 1;
    values[pj] = -1;
    Ok(Divisor::new(values))
}

/// Divisibility relations between the critical group of `g`, the
/// subgroup generated by the two-vertex divisor on `{x, y}`, and the
/// critical group of the edge-toggled graph.
#[derive(Clone, Debug)]
pub struct SubgroupIndexReport {
    pub order_g: BigInt,
    pub order_g_prime: BigInt,
    pub delta_order: BigInt,
    pub index: BigInt,
    pub divides_gcd: bool,
    pub gcd_divides_index_sq: bool,
    pub is_generator: bool,
}

pub fn subgroup_index_report(g: &Multigraph, x: usize, y: usize) -> Result<SubgroupIndexReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let g_prime = g.toggle_edge(x, y)?;
    if !g_prime.is_connected() {
        return Err(Error::ToggleDisconnects(x, y));
    }
    let order_g = group_order(g)?;
    let order_g_prime = group_order(&g_prime)?;
    let mut values = vec![0i64; g.n_vertices()];
    values[x] = 1;
    values[y] = -1;
    let delta_order = divisor_order(g, &Divisor::new(values))?;
    let (index, rem) = order_g.div_rem(&delta_order);
    debug_assert!(rem.is_zero(), "subgroup order divides group order");
    let gcd = order_g.gcd(&order_g_prime);
    let divides_gcd = gcd.mod_floor(&index).is_zero();
    let gcd_divides_index_sq = (&index * &index).mod_floor(&gcd).is_zero();
    let is_generator = delta_order == order_g;
    Ok(SubgroupIndexReport {
        order_g,
        order_g_prime,
        delta_order,
        index,
        divides_gcd,
        gcd_divides_index_sq,
        is_generator,
    })
}

/// Exhaustively checks that no nontrivial combination
/// `sum a_i * eta_{i,i+1}` with `0 <= a_i <= k-2` is linearly
/// equivalent to zero. Adjacent-pair chaining makes the negative value
/// of one divisor the positive value of the next, so the combination
/// collapses to one entry per cycle.
pub fn eta_independence_check(layout: &HingeLayout) -> Result<bool> {
    let sizes = &layout.spec.cycle_sizes;
    let n = sizes.len();
    if n < 2 {
        return Err(Error::InvalidHingeSpec(
            "eta independence needs at least two cycles".into(),
        ));
    }
    let k = sizes[0];
    if sizes.iter().any(|&s| s != k) {
        return Err(Error::MixedCycleSizes(format!("{sizes:?}")));
    }
    let (g, _) = build_hinge(&layout.spec)?;
    let solver = IntegralSolver::new(&g.laplacian());
    let radix = (k - 1) as u64;
    let mut coeffs = vec![0u64; n - 1];
    loop {
        // Increment the mixed-radix counter; the all-zero vector is skipped.
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                return Ok(true);
            }
            coeffs[pos] += 1;
            if coeffs[pos] < radix {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
        let mut combo = vec![BigInt::zero(); g.n_vertices()];
        for (i, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = BigInt::from(a);
            combo[layout.first_path_vertex(i)?] += &a;
            combo[layout.first_path_vertex(i + 1)?] -= &a;
        }
        if solver.solve(&combo)?.is_some() {
            return Ok(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{triangle, HingeSpec};

    fn hinge(sizes: &[u32]) -> (Multigraph, HingeLayout) {
        build_hinge(&HingeSpec::new(sizes.to_vec()).unwrap()).unwrap()
    }

    fn two_vertex_triple_edge() -> Multigraph {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1, 3).unwrap();
        g
    }

    #[test]
    fn degree_sums_entries() {
        assert_eq!(Divisor::new(vec![0, 0, 0]).degree(), 0);
        assert_eq!(Divisor::new(vec![1, -1, 0]).degree(), 0);
        assert_eq!(Divisor::new(vec![3, 2, -1]).degree(), 4);
    }

    #[test]
    fn fire_triangle_vertex() {
        let g = triangle();
        let d = fire(&g, &Divisor::zero(3), 0).unwrap();
        assert_eq!(d.values(), &[-2, 1, 1]);
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn fire_respects_multiplicity() {
        let g = two_vertex_triple_edge();
        let d = fire(&g, &Divisor::zero(2), 0).unwrap();
        assert_eq!(d.values(), &[-3, 3]);
    }

    #[test]
    fn firing_every_vertex_once_is_identity() {
        let (g, _) = hinge(&[4, 5]);
        let d = Divisor::new(vec![2, -1, 0, 3, -4, 1, -1]);
        let mut fired = d.clone();
        for v in 0..g.n_vertices() {
            fired = fire(&g, &fired, v).unwrap();
        }
        assert_eq!(fired, d);
    }

    #[test]
    fn fire_script_zero_and_ones() {
        let (g, _) = hinge(&[5, 5, 5]);
        let d = Divisor::new((0..g.n_vertices() as i64).collect());
        assert_eq!(fire_script(&g, &d, &vec![0; g.n_vertices()]).unwrap(), d);
        assert_eq!(fire_script(&g, &d, &vec![1; g.n_vertices()]).unwrap(), d);
    }

    #[test]
    fn fire_script_chain_pattern() {
        // Path on 7 vertices, interior vertices fired once: the chips
        // shift by (1, -1, 0, ..., 0, -1, 1).
        let mut g = Multigraph::new(7);
        for i in 0..6 {
            g.add_edge(i, i + 1, 1).unwrap();
        }
        let r = vec![0, 1, 1, 1, 1, 1, 0];
        let d = fire_script(&g, &Divisor::zero(7), &r).unwrap();
        assert_eq!(d.values(), &[1, -1, 0, 0, 0, -1, 1]);
    }

    #[test]
    fn linear_equivalence_on_triangle() {
        let g = triangle();
        let zero = Divisor::zero(3);
        let d = Divisor::new(vec![1, -1, 0]);
        assert!(is_linearly_equivalent(&g, &d, &d).unwrap());
        assert!(!is_linearly_equivalent(&g, &d, &zero).unwrap());
        assert!(is_linearly_equivalent(&g, &d.scale(3), &zero).unwrap());
    }

    #[test]
    fn linear_equivalence_needs_connected() {
        let g = Multigraph::new(2);
        let d = Divisor::zero(2);
        assert!(matches!(
            is_linearly_equivalent(&g, &d, &d),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn order_of_zero_divisor() {
        let g = triangle();
        assert_eq!(divisor_order(&g, &Divisor::zero(3)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn delta_orders_on_hinges() {
        // Same shapes: k + n - 1.
        let (g, layout) = hinge(&[5, 5, 5]);
        assert_eq!(divisor_order(&g, &make_delta(&layout)).unwrap(), BigInt::from(7));
        // Mixed shapes, sizes (3,4,5): order 25.
        let (g, layout) = hinge(&[3, 4, 5]);
        assert_eq!(divisor_order(&g, &make_delta(&layout)).unwrap(), BigInt::from(25));
    }

    #[test]
    fn gcd_method_matches_coordinate_method() {
        for sizes in [vec![3, 3], vec![3, 4, 5], vec![5, 5, 5], vec![4, 6]] {
            let (g, layout) = hinge(&sizes);
            let delta = make_delta(&layout);
            assert_eq!(
                divisor_order_via_gcd(&g, &delta).unwrap(),
                divisor_order(&g, &delta).unwrap(),
                "sizes {sizes:?}"
            );
        }
    }

    #[test]
    fn order_rejects_nonzero_degree() {
        let g = triangle();
        let d = Divisor::new(vec![1, 0, 0]);
        assert!(matches!(
            divisor_order(&g, &d),
            Err(Error::NonzeroDegree(1))
        ));
    }

    #[test]
    fn order_is_sign_symmetric() {
        let (g, layout) = hinge(&[3, 4, 5]);
        let d = make_delta(&layout);
        assert_eq!(
            divisor_order(&g, &d).unwrap(),
            divisor_order(&g, &(-&d)).unwrap()
        );
    }

    #[test]
    fn named_divisors_on_two_triangles() {
        let (_, layout) = hinge(&[3, 3]);
        assert_eq!(make_delta(&layout).values(), &[1, -1, 0, 0]);
        assert_eq!(make_epsilon(&layout, 0).unwrap().values(), &[-1, 0, 1, 0]);
        assert_eq!(make_eta(&layout, 0, 1).unwrap().values(), &[0, 0, 1, -1]);
        assert!(make_eta(&layout, 0, 0).is_err());
        assert!(make_epsilon(&layout, 2).is_err());
    }

    #[test]
    fn epsilon_and_eta_orders_on_h55() {
        let (g, layout) = hinge(&[5, 5, 5]);
        for i in 0..3 {
            let eps = make_epsilon(&layout, i).unwrap();
            assert_eq!(divisor_order(&g, &eps).unwrap(), BigInt::from(28));
        }
        let eta = make_eta(&layout, 0, 1).unwrap();
        assert_eq!(divisor_order(&g, &eta).unwrap(), BigInt::from(4));
    }

    #[test]
    fn epsilon_generates_cyclic_group_of_two_triangles() {
        let (g, layout) = hinge(&[3, 3]);
        let eps = make_epsilon(&layout, 0).unwrap();
        assert_eq!(divisor_order(&g, &eps).unwrap(), BigInt::from(8));
    }

    #[test]
    fn eta_order_two_on_triangle_hinges() {
        let (g, layout) = hinge(&[3, 3, 3]);
        let eta = make_eta(&layout, 0, 1).unwrap();
        assert_eq!(divisor_order(&g, &eta).unwrap(), BigInt::from(2));
    }

    #[test]
    fn q_reduce_known_triangle_class() {
        let g = triangle();
        let d = Divisor::new(vec![0, 1, -1]);
        let r = q_reduce(&g, &d, 0).unwrap();
        assert_eq!(r.values(), &[-1, 0, 1]);
        // Idempotent.
        assert_eq!(q_reduce(&g, &r, 0).unwrap(), r);
        // Same class.
        assert!(is_linearly_equivalent(&g, &d, &r).unwrap());
    }

    #[test]
    fn q_reduce_is_class_invariant() {
        let (g, _) = hinge(&[4, 4]);
        let d = Divisor::new(vec![3, -5, 1, 0, 1, 0]);
        let shifted = fire_script(&g, &d, &[2, -1, 0, 4, -3, 1]).unwrap();
        assert_eq!(
            q_reduce(&g, &d, 0).unwrap(),
            q_reduce(&g, &shifted, 0).unwrap()
        );
    }

    #[test]
    fn is_q_reduced_examples() {
        let g = triangle();
        assert!(is_q_reduced(&g, &Divisor::new(vec![-1, 0, 1]), 0).unwrap());
        // Firing {1, 2} on (-2, 1, 1) lands on (0, 0, 0): not reduced.
        assert!(!is_q_reduced(&g, &Divisor::new(vec![-2, 1, 1]), 0).unwrap());
        // Negative entry away from q.
        assert!(!is_q_reduced(&g, &Divisor::new(vec![0, -1, 1]), 0).unwrap());
    }

    #[test]
    fn subgroup_index_on_two_triangles() {
        let (g, layout) = hinge(&[3, 3]);
        let rep = subgroup_index_report(&g, layout.shared.0, layout.shared.1).unwrap();
        assert_eq!(rep.order_g, BigInt::from(8));
        assert_eq!(rep.order_g_prime, BigInt::from(4)); // toggled graph is the 4-cycle
        assert_eq!(rep.delta_order, BigInt::from(4));
        assert_eq!(rep.index, BigInt::from(2));
        assert!(rep.divides_gcd);
        assert!(rep.gcd_divides_index_sq);
        assert!(!rep.is_generator);
    }

    #[test]
    fn eta_independence_small_grid() {
        for (k, n) in [(3u32, 2usize), (5, 3), (4, 4)] {
            let (_, layout) = hinge(&vec![k; n]);
            assert!(eta_independence_check(&layout).unwrap(), "k={k} n={n}");
        }
    }

    #[test]
    fn eta_independence_rejects_mixed_sizes() {
        let (_, layout) = hinge(&[3, 4]);
        assert!(matches!(
            eta_independence_check(&layout),
            Err(Error::MixedCycleSizes(_))
        ));
    }
}
