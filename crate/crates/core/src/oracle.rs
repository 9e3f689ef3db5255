//! Brute-force reference implementations. These exist to catch bugs in
//! the fast paths, not to be fast themselves: spanning trees by
//! subset enumeration, divisor order by walking multiples through
//! q-reduction, the critical group by coset closure, and the
//! q-reduced predicate by literal evaluation over all vertex subsets.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::divisor::{q_reduce, Divisor};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::group::{group_order, AbelianGroupStructure};

/// Explicit caps for the exhaustive searches; budgets are always
/// passed in so test behavior stays reproducible.
#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_edges: u64,
    pub max_group_order: u64,
    pub max_multiple: u64,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    /// Returns false when x and y were already joined.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

/// Counts spanning trees by enumerating edge subsets of size |V| - 1,
/// with parallel edges distinguishable; that is what matches the
/// reduced-Laplacian determinant on multigraphs.
pub fn spanning_trees_bruteforce(g: &Multigraph, budget: &OracleBudget) -> Result<u64> {
    let total_edges = g.edge_count();
    if total_edges > budget.max_edges {
        return Err(Error::BudgetExceeded(format!(
            "{total_edges} edges exceeds cap {}",
            budget.max_edges
        )));
    }
    let n = g.n_vertices();
    if n == 0 {
        return Ok(0);
    }
    let mut flat: Vec<(usize, usize)> = Vec::with_capacity(total_edges as usize);
    for (u, v, m) in g.edges() {
        for _ in 0..m {
            flat.push((u, v));
        }
    }
    let need = n - 1;
    if flat.len() < need {
        return Ok(0);
    }
    let mut count = 0u64;
    let mut chosen = Vec::with_capacity(need);
    fn recurse(
        flat: &[(usize, usize)],
        start: usize,
        need: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        count: &mut u64,
    ) {
        if chosen.len() == need {
            let mut dsu = Dsu::new(n);
            if chosen.iter().all(|&i| dsu.union(flat[i].0, flat[i].1)) {
                *count += 1; // n-1 acyclic edges on n vertices form a tree
            }
            return;
        }
        let remaining = need - chosen.len();
        for i in start..=flat.len().saturating_sub(remaining) {
            chosen.push(i);
            recurse(flat, i + 1, need, n, chosen, count);
            chosen.pop();
        }
    }
    recurse(&flat, 0, need, n, &mut chosen, &mut count);
    Ok(count)
}

/// Smallest z >= 1 with q_reduce(z * d) equal to the zero class,
/// independent of the Smith-form path.
pub fn divisor_order_bruteforce(
    g: &Multigraph,
    d: &Divisor,
    q: usize,
    budget: &OracleBudget,
) -> Result<u64> {
    let deg = d.degree();
    if deg != 0 {
        return Err(Error::NonzeroDegree(deg));
    }
    let order = group_order(g)?;
    if order > BigInt::from(budget.max_group_order) {
        return Err(Error::BudgetExceeded(format!(
            "group order {order} exceeds cap {}",
            budget.max_group_order
        )));
    }
    let zero = q_reduce(g, &Divisor::zero(g.n_vertices()), q)?;
    for z in 1..=budget.max_multiple {
        let reduced = q_reduce(g, &d.scale(z as i64), q)?;
        if reduced == zero {
            return Ok(z);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no multiple up to {} reached the zero class",
        budget.max_multiple
    )))
}

/// Critical group by breadth-first coset closure: classes are
/// represented by their 0-reduced divisors, generated by unit
/// divisors `e_v - e_0`, and the invariant factors are reconstructed
/// from the element orders.
pub fn coset_enumeration(g: &Multigraph, budget: &OracleBudget) -> Result<AbelianGroupStructure> {
    let order = group_order(g)?;
    if order > BigInt::from(budget.max_group_order) {
        return Err(Error::BudgetExceeded(format!(
            "group order {order} exceeds cap {}",
            budget.max_group_order
        )));
    }
    let n = g.n_vertices();
    let q = 0usize;
    let zero = q_reduce(g, &Divisor::zero(n), q)?;
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    seen.insert(zero.values().to_vec(), ());
    let mut queue = VecDeque::new();
    queue.push_back(zero.clone());
    let mut elements = vec![zero.clone()];
    while let Some(rep) = queue.pop_front() {
        for v in 1..n {
            let mut gen = vec![0i64; n];
            gen[v] = 1;
            gen[q] -= 1;
            let next = q_reduce(g, &(&rep + &Divisor::new(gen)), q)?;
            if !seen.contains_key(next.values()) {
                seen.insert(next.values().to_vec(), ());
                queue.push_back(next.clone());
                elements.push(next);
            }
        }
    }
    let count = elements.len() as u64;

    // Order of each element: the least divisor z of the group order
    // with z * rep in the zero class.
    let divisors_of = |x: u64| {
        let mut ds = Vec::new();
        let mut i = 1;
        while i * i <= x {
            if x.is_multiple_of(i) {
                ds.push(i);
                if i != x / i {
                    ds.push(x / i);
                }
            }
            i += 1;
        }
        ds.sort_unstable();
        ds
    };
    let group_divisors = divisors_of(count);
    let mut element_orders = Vec::with_capacity(elements.len());
    for rep in &elements {
        let mut found = None;
        for &z in &group_divisors {
            if q_reduce(g, &rep.scale(z as i64), q)? == zero {
                found = Some(z);
                break;
            }
        }
        element_orders.push(found.expect("element order divides the group order"));
    }

    // Among all invariant-factor chains with the right product and
    // exponent, exactly one matches the order statistics
    // #{x : order(x) | m} = prod_i gcd(d_i, m).
    let exponent = *element_orders.iter().max().expect("group is nonempty");
    let mut chains: Vec<Vec<u64>> = Vec::new();
    // Chains are built largest factor first; each new factor divides
    // the previous one (`cap`) and the leftover product.
    fn build_chains(remaining: u64, cap: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 1 {
            out.push(acc.clone());
            return;
        }
        for d in 2..=remaining {
            if remaining.is_multiple_of(d) && cap.is_multiple_of(d) {
                acc.push(d);
                build_chains(remaining / d, d, acc, out);
                acc.pop();
            }
        }
    }
    if count == 1 {
        return Ok(AbelianGroupStructure::trivial());
    }
    let mut acc = vec![exponent];
    build_chains(count / exponent, exponent, &mut acc, &mut chains);
    for chain in chains {
        let matches = group_divisors.iter().all(|&m| {
            let predicted: u64 = chain.iter().map(|&d| d.gcd(&m)).product();
            let actual = element_orders.iter().filter(|&&o| m % o == 0).count() as u64;
            predicted == actual
        });
        if matches {
            let mut ascending: Vec<BigInt> = chain.iter().rev().map(|&d| BigInt::from(d)).collect();
            ascending.retain(|d| *d > BigInt::from(1));
            return AbelianGroupStructure::from_chain(ascending);
        }
    }
    unreachable!("some invariant-factor chain matches the order statistics");
}

/// Literal evaluation of the q-reduced conditions over every nonempty
/// subset of `V \ {q}`; exponential, capped at 8 vertices.
pub fn q_reduced_predicate_bruteforce(g: &Multigraph, d: &Divisor, q: usize) -> Result<bool> {
    let n = g.n_vertices();
    if n > 8 {
        return Err(Error::BudgetExceeded(format!(
            "{n} vertices is past the 2^(n-1) subset cap of 8"
        )));
    }
    if d.values().len() != n {
        return Err(Error::DivisorLengthMismatch {
            got: d.values().len(),
            expected: n,
        });
    }
    if q >= n {
        return Err(Error::VertexOutOfRange {
            vertex: q,
            n_vertices: n,
        });
    }
    if (0..n).any(|v| v != q && d.values()[v] < 0) {
        return Ok(false);
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    for mask in 1u32..(1 << others.len()) {
        let in_set = |v: usize| {
            others
                .iter()
                .position(|&w| w == v)
                .is_some_and(|i| mask & (1 << i) != 0)
        };
        // Fire every vertex of the subset at once; some member must go
        // negative for d to be q-reduced.
        let mut survives = true;
        for (i, &v) in others.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let out_edges: i64 = g
                .neighbors(v)
                .iter()
                .filter(|(u, _)| !in_set(*u))
                .map(|(_, m)| *m as i64)
                .sum();
            if d.values()[v] - out_edges < 0 {
                survives = false;
                break;
            }
        }
        if survives {
            return Ok(false);
        }
    }
    Ok(true)
}
