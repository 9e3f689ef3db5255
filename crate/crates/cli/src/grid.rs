//! Grid-flag parsing: ranges (`3..7`, inclusive), lists (`3,5,7`), and
//! spec selectors (`all`, `random:<count>`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn parse_values(s: &str) -> Result<Vec<u32>, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|part| part.trim().parse().map_err(|_| format!("bad value {part:?} in {s:?}")))
        .collect()
}

#[derive(Clone, Debug)]
pub enum SpecSelector {
    All,
    Random(usize),
}

pub fn parse_spec_selector(s: &str) -> Result<SpecSelector, String> {
    if s == "all" {
        return Ok(SpecSelector::All);
    }
    if let Some(count) = s.strip_prefix("random:") {
        let count: usize = count
            .parse()
            .map_err(|_| format!("bad sample count in {s:?}"))?;
        return Ok(SpecSelector::Random(count));
    }
    Err(format!("spec selector must be `all` or `random:<count>`, got {s:?}"))
}

/// Non-decreasing cycle-size multisets with `n` in `[min_n, max_n]`
/// and sizes in `[3, max_k]`, in lexicographic order.
pub fn exhaustive_specs(min_n: usize, max_n: usize, max_k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn extend(cur: &mut Vec<u32>, n: usize, max_k: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(3);
        for k in lo..=max_k {
            cur.push(k);
            extend(cur, n, max_k, out);
            cur.pop();
        }
    }
    for n in min_n..=max_n {
        extend(&mut Vec::new(), n, max_k, &mut out);
    }
    out
}

pub fn random_specs(
    count: usize,
    min_n: usize,
    max_n: usize,
    max_k: u32,
    seed: u64,
) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(min_n..=max_n);
            (0..n).map(|_| rng.gen_range(3..=max_k)).collect()
        })
        .collect()
}

pub fn format_spec(ks: &[u32]) -> String {
    let parts: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
    format!("ks=[{}]", parts.join(","))
}
