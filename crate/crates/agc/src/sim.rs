//! Monte-Carlo decoding trials with exact-weight error patterns.
//!
//! Each trial draws a uniform random message, injects an error of exactly
//! the configured weight (uniform positions, uniform nonzero values),
//! decodes, and compares against the transmitted codeword. Trial t uses its
//! own stream seeded with seed + t, so runs are reproducible and trials
//! could be executed in any order.

use crate::agcode::{CodeParams, Word};
use crate::decoder::majority_decode;
use crate::error::{Error, Result};
use crate::paritygen::OrthogonalCheckSet;
use crate::rng::Xorshift64Star;

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    /// Exact number of corrupted coordinates per trial.
    pub error_weight: u64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimRecord {
    pub trial: u64,
    pub weight: u64,
    pub success: bool,
    /// Coordinates where the decoded estimate differs from the transmitted
    /// codeword; success iff this is 0.
    pub mismatched: u64,
}

pub fn simulate(
    params: &CodeParams,
    set0: &OrthogonalCheckSet,
    cfg: &SimConfig,
) -> Result<Vec<SimRecord>> {
    if cfg.trials < 1 {
        return Err(Error::Parse("trials must be at least 1".into()));
    }
    if cfg.error_weight > params.n() {
        return Err(Error::TooLarge {
            what: "error weight",
            size: cfg.error_weight as u128,
            limit: params.n() as u128,
        });
    }
    let spec = params.spec().clone();
    let q = params.q();
    let mut records = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let mut rng = Xorshift64Star::new(cfg.seed.wrapping_add(trial));
        let message: Vec<_> = (0..params.k())
            .map(|_| spec.element(rng.gen_range(q)).expect("index < q"))
            .collect();
        let sent = params.encode(&message)?;

        let mut received = sent.clone();
        for pos in rng.sample_distinct(params.n(), cfg.error_weight) {
            let value = spec.element(1 + rng.gen_range(q - 1))?;
            let slot = &mut received.coords[pos as usize];
            *slot = spec.add(*slot, value);
        }

        let result = majority_decode(params, &received, set0)?;
        let mismatched = count_mismatches(&result.estimate, &sent);
        records.push(SimRecord {
            trial,
            weight: cfg.error_weight,
            success: mismatched == 0,
            mismatched,
        });
    }
    Ok(records)
}

fn count_mismatches(a: &Word, b: &Word) -> u64 {
    a.coords
        .iter()
        .zip(&b.coords)
        .filter(|(x, y)| x != y)
        .count() as u64
}

/// `trial,weight,success,mismatched` with success as 0/1; integer-only, so
/// the bytes are identical across platforms for a fixed seed.
pub fn to_csv(records: &[SimRecord]) -> String {
    let mut out = String::from("trial,weight,success,mismatched\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.trial,
            r.weight,
            u8::from(r.success),
            r.mismatched
        ));
    }
    out
}

pub fn success_rate(records: &[SimRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.success).count() as f64 / records.len() as f64
}
