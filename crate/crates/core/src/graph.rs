//! Multigraphs, hinge graphs, and thick cycles.
//!
//! A hinge graph glues `n` cycles ("base shapes") along one shared
//! edge and its two endpoints. Its planar dual is a thick cycle: a
//! cycle graph whose edges carry multiplicities. Both constructions
//! live here, together with the Laplacian and the canonical on-disk
//! graph format.
//!
//! Canonical hinge labeling: the shared vertices are 0 and 1, then the
//! non-shared path of cycle 1 takes 2 .. k1-1 in order from vertex 0
//! to vertex 1, cycle 2 continues from there, and so on. Deterministic
//! labels keep divisors and reports reproducible.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Undirected multigraph without loops: a vertex count plus a map from
/// unordered vertex pairs `(u, v)` with `u < v` to edge multiplicity.
#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    n_vertices: usize,
    edges: BTreeMap<(usize, usize), u64>,
}

impl Multigraph {
    pub fn new(n_vertices: usize) -> Self {
        Multigraph {
            n_vertices,
            edges: BTreeMap::new(),
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n_vertices {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n_vertices: self.n_vertices,
            });
        }
        Ok(())
    }

    /// Adds `mult` parallel edges between `u` and `v`, accumulating
    /// with any existing multiplicity.
    pub fn add_edge(&mut self, u: usize, v: usize, mult: u64) -> Result<()> {
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if mult == 0 {
            return Err(Error::NonPositiveMultiplicity);
        }
        let key = (u.min(v), u.max(v));
        // Valences must stay representable as i64 chip counts.
        let total = self
            .edges
            .get(&key)
            .copied()
            .unwrap_or(0)
            .checked_add(mult)
            .filter(|&t| t <= i64::MAX as u64)
            .ok_or(Error::MultiplicityOverflow)?;
        self.edges.insert(key, total);
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        if u == v {
            return 0;
        }
        let key = (u.min(v), u.max(v));
        self.edges.get(&key).copied().unwrap_or(0)
    }

    /// Edge classes as `(u, v, multiplicity)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    /// Total edge count, multiplicities included.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn valence(&self, v: usize) -> u64 {
        self.edges()
            .filter_map(|(a, b, m)| (a == v || b == v).then_some(m))
            .sum()
    }

    pub fn neighbors(&self, v: usize) -> Vec<(usize, u64)> {
        self.edges()
            .filter_map(|(a, b, m)| {
                if a == v {
                    Some((b, m))
                } else if b == v {
                    Some((a, m))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (u, v, _) in self.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n_vertices
    }

    /// Adds a single edge `{u, v}` when absent, otherwise removes one
    /// parallel copy (full deletion when the multiplicity was 1).
    pub fn toggle_edge(&self, u: usize, v: usize) -> Result<Multigraph> {
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        let key = (u.min(v), u.max(v));
        match g.edges.get_mut(&key) {
            None => {
                g.edges.insert(key, 1);
            }
            Some(m) if *m == 1 => {
                g.edges.remove(&key);
            }
            Some(m) => {
                *m -= 1;
            }
        }
        Ok(g)
    }

    /// Graph Laplacian `D - A`: valence diagonal minus adjacency with
    /// multiplicities. Symmetric, zero row sums, positive semidefinite.
    pub fn laplacian(&self) -> IntegerMatrix {
        let n = self.n_vertices;
        let mut l = IntegerMatrix::zeros(n, n);
        for (u, v, m) in self.edges() {
            let m = i64::try_from(m).expect("multiplicity fits i64");
            l[(u, u)] += m;
            l[(v, v)] += m;
            l[(u, v)] -= m;
            l[(v, u)] -= m;
        }
        l
    }

    /// Canonical byte-stable text form: JSON with one sorted
    /// `[u, v, multiplicity]` triple per line.
    pub fn to_canonical_string(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str(&format!("  \"n_vertices\": {},\n", self.n_vertices));
        s.push_str("  \"edges\": [");
        let mut first = true;
        for (u, v, m) in self.edges() {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(&format!("\n    [{u}, {v}, {m}]"));
        }
        if !first {
            s.push_str("\n  ");
        }
        s.push_str("]\n}\n");
        s
    }

    pub fn parse(input: &str) -> Result<Multigraph> {
        let file: GraphFile =
            serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        let mut g = Multigraph::new(file.n_vertices);
        for [u, v, m] in file.edges {
            let u = usize::try_from(u).map_err(|_| Error::Parse("vertex overflow".into()))?;
            let v = usize::try_from(v).map_err(|_| Error::Parse("vertex overflow".into()))?;
            if g.multiplicity(u, v) != 0 {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.add_edge(u, v, m)?;
        }
        Ok(g)
    }
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, edges={:?})", self.n_vertices, self.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n_vertices: usize,
    edges: Vec<[u64; 3]>,
}

/// Cycle sizes of a hinge graph; `cycle_sizes[i]` counts the vertices
/// of base shape `i` including the two shared vertices, so each entry
/// is at least 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HingeSpec {
    pub cycle_sizes: Vec<u32>,
}

impl HingeSpec {
    pub fn new(cycle_sizes: Vec<u32>) -> Result<Self> {
        if cycle_sizes.is_empty() {
            return Err(Error::InvalidHingeSpec("need at least one cycle".into()));
        }
        if let Some(&k) = cycle_sizes.iter().find(|&&k| k < 3) {
            return Err(Error::InvalidHingeSpec(format!(
                "cycle size {k} is below the minimum of 3"
            )));
        }
        Ok(HingeSpec { cycle_sizes })
    }

    pub fn n_cycles(&self) -> usize {
        self.cycle_sizes.len()
    }

    pub fn n_vertices(&self) -> usize {
        2 + self
            .cycle_sizes
            .iter()
            .map(|&k| k as usize - 2)
            .sum::<usize>()
    }

    pub fn n_edges(&self) -> u64 {
        1 + self.cycle_sizes.iter().map(|&k| k as u64 - 1).sum::<u64>()
    }
}

/// Concrete vertex roles of a hinge graph built from a [`HingeSpec`]:
/// the shared pair and, per cycle, the non-shared path from shared
/// vertex 0 to shared vertex 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HingeLayout {
    pub spec: HingeSpec,
    pub shared: (usize, usize),
    pub cycle_paths: Vec<Vec<usize>>,
}

impl HingeLayout {
    /// First path vertex of cycle `i` (0-based), the one adjacent to
    /// shared vertex 0.
    pub fn first_path_vertex(&self, i: usize) -> Result<usize> {
        self.cycle_paths
            .get(i)
            .and_then(|p| p.first().copied())
            .ok_or(Error::CycleIndexOutOfRange(i))
    }

    pub fn n_vertices(&self) -> usize {
        self.spec.n_vertices()
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("layout serializes");
        s.push('\n');
        s
    }

    pub fn parse(input: &str) -> Result<HingeLayout> {
        let layout: HingeLayout =
            serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        layout.validate()?;
        Ok(layout)
    }

    /// Enforces the canonical labeling: shared pair (0, 1), cycle i
    /// holding the k_i - 2 path vertices in order, all path vertices
    /// together partitioning 2..n.
    fn validate(&self) -> Result<()> {
        let spec = HingeSpec::new(self.spec.cycle_sizes.clone())?;
        if self.shared != (0, 1) {
            return Err(Error::Parse("shared vertices must be (0, 1)".into()));
        }
        if self.cycle_paths.len() != spec.n_cycles() {
            return Err(Error::Parse("one path per cycle required".into()));
        }
        let mut expected = 2usize;
        for (path, &k) in self.cycle_paths.iter().zip(&spec.cycle_sizes) {
            if path.len() != k as usize - 2 {
                return Err(Error::Parse(format!(
                    "cycle of size {k} must list {} path vertices",
                    k - 2
                )));
            }
            for &v in path {
                if v != expected {
                    return Err(Error::Parse(format!(
                        "path vertices must run consecutively; expected {expected}, got {v}"
                    )));
                }
                expected += 1;
            }
        }
        if expected != spec.n_vertices() {
            return Err(Error::Parse("paths do not cover all vertices".into()));
        }
        Ok(())
    }
}

/// Builds the hinge graph of `spec` under the canonical labeling and
/// returns it together with its layout.
pub fn build_hinge(spec: &HingeSpec) -> Result<(Multigraph, HingeLayout)> {
    let spec = HingeSpec::new(spec.cycle_sizes.clone())?;
    let (s0, s1) = (0usize, 1usize);
    let mut g = Multigraph::new(spec.n_vertices());
    g.add_edge(s0, s1, 1)?;
    let mut next = 2usize;
    let mut cycle_paths = Vec::with_capacity(spec.n_cycles());
    for &k in &spec.cycle_sizes {
        let path: Vec<usize> = (next..next + (k as usize - 2)).collect();
        next += k as usize - 2;
        g.add_edge(s0, path[0], 1)?;
        for w in path.windows(2) {
            g.add_edge(w[0], w[1], 1)?;
        }
        g.add_edge(*path.last().expect("k >= 3 gives a nonempty path"), s1, 1)?;
        cycle_paths.push(path);
    }
    let layout = HingeLayout {
        spec,
        shared: (s0, s1),
        cycle_paths,
    };
    Ok((g, layout))
}

/// Cycle on `multiplicities.len()` vertices where edge `{i, i+1 mod m}`
/// carries the given multiplicity. With `m = 2` the two segments merge
/// into one doubled edge class between the two vertices.
pub fn build_thick_cycle(multiplicities: &[u64]) -> Result<Multigraph> {
    let m = multiplicities.len();
    if m < 2 {
        return Err(Error::ThickCycleTooShort(m));
    }
    if multiplicities.contains(&0) {
        return Err(Error::NonPositiveMultiplicity);
    }
    let mut g = Multigraph::new(m);
    for (i, &mult) in multiplicities.iter().enumerate() {
        g.add_edge(i, (i + 1) % m, mult)?;
    }
    Ok(g)
}

/// Planar dual of the hinge graph of `spec` under the nested-arc
/// embedding: the thick cycle `[k_1 - 1, ..., k_n - 1, 1]`, where the
/// final segment of multiplicity 1 is dual to the shared edge.
pub fn hinge_dual(spec: &HingeSpec) -> Result<Multigraph> {
    let spec = HingeSpec::new(spec.cycle_sizes.clone())?;
    let mut mults: Vec<u64> = spec.cycle_sizes.iter().map(|&k| k as u64 - 1).collect();
    mults.push(1);
    build_thick_cycle(&mults)
}

/// Triangle; the smallest hinge graph and a convenient fixture.
pub fn triangle() -> Multigraph {
    build_thick_cycle(&[1, 1, 1]).expect("triangle is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn hinge_single_triangle() {
        let spec = HingeSpec::new(vec![3]).unwrap();
        let (g, layout) = build_hinge(&spec).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(layout.cycle_paths, vec![vec![2]]);
    }

    #[test]
    fn hinge_two_triangles_is_k4_minus_edge() {
        let spec = HingeSpec::new(vec![3, 3]).unwrap();
        let (g, _) = build_hinge(&spec).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.edge_count(), 5);
        // The missing edge of K4 is between the two non-shared vertices.
        assert_eq!(g.multiplicity(2, 3), 0);
    }

    #[test]
    fn hinge_5_3_counts() {
        let spec = HingeSpec::new(vec![5, 5, 5]).unwrap();
        let (g, layout) = build_hinge(&spec).unwrap();
        assert_eq!(g.n_vertices(), 11);
        assert_eq!(g.edge_count(), 13);
        assert!(g.is_connected());
        assert_eq!(layout.cycle_paths[0], vec![2, 3, 4]);
        assert_eq!(layout.cycle_paths[2], vec![8, 9, 10]);
    }

    #[test]
    fn hinge_valences() {
        let spec = HingeSpec::new(vec![4, 5, 6]).unwrap();
        let (g, layout) = build_hinge(&spec).unwrap();
        let n = spec.n_cycles() as u64;
        assert_eq!(g.valence(layout.shared.0), n + 1);
        assert_eq!(g.valence(layout.shared.1), n + 1);
        for v in 2..g.n_vertices() {
            assert_eq!(g.valence(v), 2, "path vertex {v}");
        }
    }

    #[test]
    fn hinge_rejects_bad_specs() {
        assert!(HingeSpec::new(vec![]).is_err());
        assert!(HingeSpec::new(vec![3, 2]).is_err());
    }

    #[test]
    fn thick_cycle_triangle() {
        let g = build_thick_cycle(&[1, 1, 1]).unwrap();
        assert_eq!(g, triangle());
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn thick_cycle_total_multiplicity() {
        let g = build_thick_cycle(&[2, 3, 4, 1]).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn thick_cycle_two_vertices_merges_segments() {
        let g = build_thick_cycle(&[2, 1]).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.multiplicity(0, 1), 3);
    }

    #[test]
    fn thick_cycle_rejections() {
        assert!(build_thick_cycle(&[5]).is_err());
        assert!(build_thick_cycle(&[1, 0, 2]).is_err());
    }

    #[test]
    fn dual_formula_and_edge_count() {
        let spec = HingeSpec::new(vec![3, 3]).unwrap();
        let d = hinge_dual(&spec).unwrap();
        assert_eq!(d, build_thick_cycle(&[2, 2, 1]).unwrap());

        let spec = HingeSpec::new(vec![5, 5, 5]).unwrap();
        let d = hinge_dual(&spec).unwrap();
        assert_eq!(d, build_thick_cycle(&[4, 4, 4, 1]).unwrap());
        let (h, _) = build_hinge(&spec).unwrap();
        assert_eq!(d.edge_count(), h.edge_count());
    }

    #[test]
    fn laplacian_triangle() {
        let l = triangle().laplacian();
        let want =
            IntegerMatrix::from_rows(&[vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        assert_eq!(l, want);
    }

    #[test]
    fn laplacian_multiedge() {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1, 3).unwrap();
        let want = IntegerMatrix::from_rows(&[vec![3, -3], vec![-3, 3]]);
        assert_eq!(g.laplacian(), want);
    }

    #[test]
    fn laplacian_row_sums_zero() {
        let (g, _) = build_hinge(&HingeSpec::new(vec![5, 5, 5]).unwrap()).unwrap();
        let l = g.laplacian();
        for i in 0..l.rows() {
            let mut sum = BigInt::zero();
            for j in 0..l.cols() {
                sum += l[(i, j)].clone();
            }
            assert!(sum.is_zero(), "row {i}");
        }
    }

    #[test]
    fn connectivity() {
        assert!(triangle().is_connected());
        assert!(!Multigraph::new(2).is_connected());
        assert!(Multigraph::new(0).is_connected());
        let (g, _) = build_hinge(&HingeSpec::new(vec![3, 4, 7]).unwrap()).unwrap();
        assert!(g.is_connected());
    }

    #[test]
    fn toggle_deletes_and_adds() {
        let t = triangle();
        let path = t.toggle_edge(0, 1).unwrap();
        assert_eq!(path.edge_count(), 2);
        assert_eq!(path.multiplicity(0, 1), 0);
        let back = path.toggle_edge(1, 0).unwrap();
        assert_eq!(back, t);
        assert!(t.toggle_edge(1, 1).is_err());
    }

    #[test]
    fn toggle_decrements_multiplicity() {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1, 3).unwrap();
        let g2 = g.toggle_edge(0, 1).unwrap();
        assert_eq!(g2.multiplicity(0, 1), 2);
    }

    #[test]
    fn layout_parse_rejects_inconsistent_sidecars() {
        let good = build_hinge(&HingeSpec::new(vec![3, 4]).unwrap()).unwrap().1;
        let round = HingeLayout::parse(&good.to_canonical_string()).unwrap();
        assert_eq!(round, good);
        let bad_shared = r#"{"spec":{"cycle_sizes":[3,4]},"shared":[1,2],"cycle_paths":[[2],[3,4]]}"#;
        assert!(HingeLayout::parse(bad_shared).is_err());
        let bad_path = r#"{"spec":{"cycle_sizes":[3,4]},"shared":[0,1],"cycle_paths":[[2],[3]]}"#;
        assert!(HingeLayout::parse(bad_path).is_err());
        let bad_order = r#"{"spec":{"cycle_sizes":[3,4]},"shared":[0,1],"cycle_paths":[[3],[2,4]]}"#;
        assert!(HingeLayout::parse(bad_order).is_err());
    }

    #[test]
    fn parse_rejections() {
        let loops = r#"{"n_vertices": 2, "edges": [[0, 0, 1]]}"#;
        assert!(matches!(Multigraph::parse(loops), Err(Error::LoopEdge(0))));
        let range = r#"{"n_vertices": 2, "edges": [[0, 2, 1]]}"#;
        assert!(matches!(
            Multigraph::parse(range),
            Err(Error::VertexOutOfRange { .. })
        ));
        let mult = r#"{"n_vertices": 2, "edges": [[0, 1, 0]]}"#;
        assert!(matches!(
            Multigraph::parse(mult),
            Err(Error::NonPositiveMultiplicity)
        ));
        let dup = r#"{"n_vertices": 2, "edges": [[0, 1, 1], [1, 0, 2]]}"#;
        assert!(matches!(
            Multigraph::parse(dup),
            Err(Error::DuplicateEdge(0, 1))
        ));
    }

    fn arb_multigraph() -> impl Strategy<Value = Multigraph> {
        (2usize..=7, proptest::collection::vec((0usize..7, 0usize..7, 1u64..=3), 0..10)).prop_map(
            |(n, raw)| {
                let mut g = Multigraph::new(n);
                for (u, v, m) in raw {
                    let (u, v) = (u % n, v % n);
                    if u != v {
                        g.add_edge(u, v, m).unwrap();
                    }
                }
                g
            },
        )
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(g in arb_multigraph()) {
            let s = g.to_canonical_string();
            let back = Multigraph::parse(&s).unwrap();
            prop_assert_eq!(&back, &g);
            // Canonical form is byte-stable.
            prop_assert_eq!(back.to_canonical_string(), s);
        }

        #[test]
        fn toggle_twice_is_identity_on_simple_graphs(n in 3usize..=6, u in 0usize..6, v in 0usize..6) {
            prop_assume!(u < n && v < n && u != v);
            // Simple connected-ish fixture: a path 0-1-...-(n-1).
            let mut g = Multigraph::new(n);
            for i in 0..n - 1 {
                g.add_edge(i, i + 1, 1).unwrap();
            }
            let twice = g.toggle_edge(u, v).unwrap().toggle_edge(u, v).unwrap();
            prop_assert_eq!(twice, g);
        }
    }
}
