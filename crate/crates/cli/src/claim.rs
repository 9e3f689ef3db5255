//! The `claim45` subcommand: runs the open-claim consistency checker
//! over a spec grid and emits a finding report. Inconsistencies are
//! findings with full diagnostics, never process failures.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use critgroup::{claim45_check, Claim45Report};

use crate::grid::{self, SpecSelector};
use crate::report::{self, SCHEMA_VERSION};
use crate::{CliError, Convention};

#[derive(Serialize)]
struct SpecRecord {
    cycle_sizes: Vec<u32>,
    group_order: String,
    delta_order: String,
    quotient: String,
    bullet1_lcm: String,
    bullet2_product: String,
    bullet2_candidates: Vec<CandidateRecord>,
    bullet3_orders: Vec<String>,
    predicted_quotient: String,
    predicted_largest_factor: String,
    invariant_factors: Vec<String>,
    consistent: bool,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct CandidateRecord {
    /// 1-based cycle indices of the pair.
    pair: [usize; 2],
    gcd: u64,
    kept: bool,
    reason: String,
}

#[derive(Serialize)]
struct ClaimDocument {
    schema: u32,
    convention: &'static str,
    grid: String,
    specs: Vec<SpecRecord>,
    consistent: usize,
    inconsistent: usize,
}

fn record(report: &Claim45Report) -> SpecRecord {
    SpecRecord {
        cycle_sizes: report.cycle_sizes.clone(),
        group_order: report.group_order.to_string(),
        delta_order: report.delta_order.to_string(),
        quotient: report.quotient.to_string(),
        bullet1_lcm: report.bullet1_lcm.to_string(),
        bullet2_product: report.bullet2_product.to_string(),
        bullet2_candidates: report
            .bullet2_candidates
            .iter()
            .map(|c| CandidateRecord {
                pair: [c.pair.0 + 1, c.pair.1 + 1],
                gcd: c.gcd,
                kept: c.kept,
                reason: c.reason.clone(),
            })
            .collect(),
        bullet3_orders: report.bullet3_orders.iter().map(|x| x.to_string()).collect(),
        predicted_quotient: report.predicted_quotient.to_string(),
        predicted_largest_factor: report.predicted_largest_factor.to_string(),
        invariant_factors: report
            .snf_structure
            .invariant_factors()
            .iter()
            .map(|x| x.to_string())
            .collect(),
        consistent: report.consistent,
        notes: report.notes.clone(),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    specs: &str,
    max_n: usize,
    max_k: u32,
    convention: Convention,
    seed: u64,
    json: bool,
    out: Option<&Path>,
    jobs: Option<usize>,
) -> Result<u8, CliError> {
    let selector = grid::parse_spec_selector(specs).map_err(CliError::usage)?;
    let (mut spec_list, grid_desc) = match selector {
        SpecSelector::All => (
            grid::exhaustive_specs(2, max_n.max(2), max_k.max(3)),
            format!("specs=all, n=2..{max_n}, k=3..{max_k}"),
        ),
        SpecSelector::Random(count) => (
            grid::random_specs(count, 2, max_n.max(2), max_k.max(3), seed),
            format!("specs=random:{count}, n=2..{max_n}, k=3..{max_k}, seed={seed}"),
        ),
    };
    let convention_name = match convention {
        Convention::Vertices => "vertices",
        Convention::Km1 => "km1",
    };
    if convention == Convention::Km1 {
        // Listed values are k_i - 1; shift to vertex counts.
        for ks in &mut spec_list {
            for k in ks.iter_mut() {
                *k += 1;
            }
        }
    }

    let evaluate = |ks: &Vec<u32>| claim45_check(ks).map(|r| record(&r));
    let results: Result<Vec<SpecRecord>, critgroup::Error> = match jobs {
        Some(1) => spec_list.iter().map(evaluate).collect(),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::usage(e.to_string()))?;
            pool.install(|| spec_list.par_iter().map(evaluate).collect())
        }
        None => spec_list.par_iter().map(evaluate).collect(),
    };
    let records = results?;
    let consistent = records.iter().filter(|r| r.consistent).count();
    let doc = ClaimDocument {
        schema: SCHEMA_VERSION,
        convention: convention_name,
        grid: grid_desc,
        inconsistent: records.len() - consistent,
        consistent,
        specs: records,
    };

    let content = if json {
        let mut s = serde_json::to_string_pretty(&doc).expect("claim document serializes");
        s.push('\n');
        s
    } else {
        render_human(&doc)
    };
    report::emit(out, &content)?;
    Ok(0)
}

fn render_human(doc: &ClaimDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "claim45 checker  grid: {}  convention: {}\n",
        doc.grid, doc.convention
    ));
    for spec in &doc.specs {
        let sizes: Vec<String> = spec.cycle_sizes.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!(
            "  ks=[{}]  |K|={} |delta|={} quotient={}  bullets: {} * {} * [{}]  factors=[{}]  {}\n",
            sizes.join(","),
            spec.group_order,
            spec.delta_order,
            spec.quotient,
            spec.bullet1_lcm,
            spec.bullet2_product,
            spec.bullet3_orders.join(","),
            spec.invariant_factors.join(","),
            if spec.consistent { "consistent" } else { "INCONSISTENT" }
        ));
        for c in spec.bullet2_candidates.iter().filter(|c| c.gcd > 1) {
            out.push_str(&format!(
                "      pair ({},{}) gcd {}: {}\n",
                c.pair[0], c.pair[1], c.gcd, c.reason
            ));
        }
        if !spec.consistent {
            for note in &spec.notes {
                out.push_str(&format!("      note: {note}\n"));
            }
        }
    }
    out.push_str(&format!(
        "summary: {} consistent, {} inconsistent\n",
        doc.consistent, doc.inconsistent
    ));
    out
}
