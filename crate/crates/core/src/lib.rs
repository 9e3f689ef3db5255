//! Critical (sandpile) groups of connected multigraphs by exact
//! integer linear algebra.
//!
//! The crate builds hinge graphs (cycles glued along one shared edge)
//! and their thick-cycle planar duals, computes critical groups
//! through Smith normal forms of reduced Laplacians, implements the
//! chip-firing divisor calculus (firing, linear equivalence, divisor
//! order, q-reduction), and evaluates closed-form predictions for the
//! orders and structures these graphs realize. Brute-force oracle
//! paths back every fast path. All arithmetic is exact; there is no
//! floating point anywhere.

pub mod divisor;
pub mod error;
pub mod graph;
pub mod group;
pub mod hinge;
pub mod matrix;
pub mod oracle;
pub mod snf;
pub mod solve;

pub use divisor::{
    divisor_order, divisor_order_via_gcd, eta_independence_check, fire, fire_script,
    is_linearly_equivalent, is_q_reduced, make_delta, make_epsilon, make_eta, q_reduce,
    subgroup_index_report, Divisor, SubgroupIndexReport,
};
pub use error::{Error, Result};
pub use graph::{
    build_hinge, build_thick_cycle, hinge_dual, triangle, HingeLayout, HingeSpec, Multigraph,
};
pub use group::{
    critical_group, divisor_to_coords, element_order, group_order, groups_isomorphic,
    normalize_factors, AbelianGroupStructure, CriticalGroupMap, GroupElementCoords,
};
pub use hinge::{
    claim45_check, consecutive_multiple_witness, delta_order_general, divisor_orders_same,
    epsilon_order_general, generating_set_orders, lcm_via_tuple_gcd, order_general, order_same,
    quotient_gcd, structure_same, Claim45Report, PairGcdCandidate,
};
pub use matrix::IntegerMatrix;
pub use oracle::{
    coset_enumeration, divisor_order_bruteforce, q_reduced_predicate_bruteforce,
    spanning_trees_bruteforce, OracleBudget,
};
pub use snf::{smith_normal_form, SmithDecomposition};
pub use solve::{
    solve_integral, solve_rational_affine, IntegralSolver, RationalAffineSolution, RationalVector,
};
