//! Cross-module invariants on randomized inputs: equivalence-relation
//! laws, group addition through q-reduction, order minimality, kernel
//! rank, coordinate surjectivity, and divisibility of the closed-form
//! predictions.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critgroup::*;

fn random_connected_multigraph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Multigraph {
    let n = rng.gen_range(2..=max_vertices);
    let mut g = Multigraph::new(n);
    for v in 1..n {
        g.add_edge(rng.gen_range(0..v), v, rng.gen_range(1..=2)).unwrap();
    }
    for _ in 0..rng.gen_range(0..=n) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.add_edge(u, v, rng.gen_range(1..=2)).unwrap();
        }
    }
    g
}

fn random_degree_zero(rng: &mut ChaCha8Rng, n: usize) -> Divisor {
    let mut values: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
    let tail: i64 = values.iter().sum();
    values.push(-tail);
    Divisor::new(values)
}

#[test]
fn fire_and_scripts_preserve_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let g = random_connected_multigraph(&mut rng, 8);
        let n = g.n_vertices();
        let d = Divisor::new((0..n).map(|_| rng.gen_range(-5..=5)).collect());
        let v = rng.gen_range(0..n);
        assert_eq!(fire(&g, &d, v).unwrap().degree(), d.degree());
        let r: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        assert_eq!(fire_script(&g, &d, &r).unwrap().degree(), d.degree());
    }
}

#[test]
fn linear_equivalence_is_an_equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let g = random_connected_multigraph(&mut rng, 6);
        let n = g.n_vertices();
        let a = random_degree_zero(&mut rng, n);
        // Reflexive.
        assert!(is_linearly_equivalent(&g, &a, &a).unwrap());
        // Symmetric on a shifted pair.
        let r: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let b = fire_script(&g, &a, &r).unwrap();
        assert!(is_linearly_equivalent(&g, &a, &b).unwrap());
        assert!(is_linearly_equivalent(&g, &b, &a).unwrap());
        // Transitive through another shift.
        let s: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let c = fire_script(&g, &b, &s).unwrap();
        assert!(is_linearly_equivalent(&g, &a, &c).unwrap());
        // Refines equal degree.
        let d = Divisor::new((0..n).map(|_| rng.gen_range(-3..=3)).collect());
        if d.degree() != a.degree() {
            assert!(!is_linearly_equivalent(&g, &a, &d).unwrap());
        }
    }
}

#[test]
fn divisor_sum_descends_to_group_addition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..80 {
        let g = random_connected_multigraph(&mut rng, 8);
        let n = g.n_vertices();
        let a = Divisor::new((0..n).map(|_| rng.gen_range(-3..=3)).collect());
        let b = Divisor::new((0..n).map(|_| rng.gen_range(-3..=3)).collect());
        let q = rng.gen_range(0..n);
        let direct = q_reduce(&g, &(&a + &b), q).unwrap();
        let through_reps = q_reduce(
            &g,
            &(&q_reduce(&g, &a, q).unwrap() + &q_reduce(&g, &b, q).unwrap()),
            q,
        )
        .unwrap();
        assert_eq!(direct, through_reps);
    }
}

#[test]
fn divisor_order_is_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let zero_of = |n: usize| Divisor::zero(n);
    for _ in 0..60 {
        let g = random_connected_multigraph(&mut rng, 7);
        let n = g.n_vertices();
        let d = random_degree_zero(&mut rng, n);
        let ord = divisor_order(&g, &d).unwrap();
        let ord_i64 = i64::try_from(&ord).expect("small test groups");
        assert!(is_linearly_equivalent(&g, &d.scale(ord_i64), &zero_of(n)).unwrap());
        if ord_i64 > 1 {
            assert!(!is_linearly_equivalent(&g, &d.scale(ord_i64 - 1), &zero_of(n)).unwrap());
        }
        // Sign symmetry.
        assert_eq!(divisor_order(&g, &(-&d)).unwrap(), ord);
    }
}

#[test]
fn integral_solvability_matches_gcd_route() {
    // For a degree-0 divisor d on connected g, the system L x = d has
    // an integral solution exactly when the rational firing counts can
    // be shifted integral, i.e. when the gcd-route order is 1.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..80 {
        let g = random_connected_multigraph(&mut rng, 7);
        let d = random_degree_zero(&mut rng, g.n_vertices());
        let solvable = solve_integral(&g.laplacian(), &d.to_bigint())
            .unwrap()
            .is_some();
        let order_one = divisor_order_via_gcd(&g, &d).unwrap().is_one();
        assert_eq!(solvable, order_one, "{g:?} {d:?}");
    }
}

#[test]
fn connected_laplacian_has_one_zero_invariant_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let g = random_connected_multigraph(&mut rng, 8);
        let snf = smith_normal_form(&g.laplacian());
        let diag = snf.diagonal();
        let zeros = diag.iter().filter(|x| x.is_zero()).count();
        assert_eq!(zeros, 1, "{g:?}");
        // Rank n - 1: all other factors nonzero.
        assert_eq!(snf.rank(), g.n_vertices() - 1);
    }
}

#[test]
fn kernel_of_connected_laplacian_is_all_ones() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let g = random_connected_multigraph(&mut rng, 8);
        let zero = vec![BigInt::zero(); g.n_vertices()];
        let sol = solve_rational_affine(&g.laplacian(), &zero).unwrap().unwrap();
        assert_eq!(sol.kernel_basis.len(), 1);
        assert!(sol.kernel_basis[0].iter().all(|x| x.is_one()), "{g:?}");
    }
}

#[test]
fn coordinates_cover_the_whole_group() {
    // Closing the unit-pair divisors under addition must hit every
    // coordinate tuple, i.e. as many tuples as the group order.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..25 {
        let g = random_connected_multigraph(&mut rng, 6);
        let n = g.n_vertices();
        let map = CriticalGroupMap::new(&g).unwrap();
        let order = u64::try_from(map.structure().order()).expect("small test groups");
        let factors = map.structure().invariant_factors().to_vec();
        let add = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            a.iter()
                .zip(b)
                .zip(&factors)
                .map(|((x, y), f)| (x + y).mod_floor(f))
                .collect()
        };
        let generators: Vec<Vec<BigInt>> = (1..n)
            .map(|v| {
                let mut values = vec![0i64; n];
                values[v] = 1;
                values[0] = -1;
                map.coords(&Divisor::new(values)).unwrap().coords().to_vec()
            })
            .collect();
        let start = vec![BigInt::zero(); factors.len()];
        let mut seen: HashSet<Vec<BigInt>> = HashSet::from([start.clone()]);
        let mut frontier = vec![start];
        while let Some(cur) = frontier.pop() {
            for gen in &generators {
                let next = add(&cur, gen);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        assert_eq!(seen.len() as u64, order, "{g:?}");
    }
}

#[test]
fn closed_form_orders_divide_the_group_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let ks: Vec<u32> = (0..n).map(|_| rng.gen_range(3..=9)).collect();
        let total = order_general(&ks).unwrap();
        let delta = delta_order_general(&ks).unwrap();
        assert!(total.mod_floor(&delta).is_zero(), "{ks:?}");
        if n >= 3 {
            for p in generating_set_orders(&ks).unwrap() {
                assert!(total.mod_floor(&p).is_zero(), "{ks:?} order {p}");
            }
        }
    }
}
