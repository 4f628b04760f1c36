//! Randomized search for cones that are facially exposed but not nice.
//!
//! Trial `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so the
//! trials run in parallel and are merged in index order; equal seeds give
//! byte-identical reports. A cone certified nice but not facially exposed
//! would contradict a proved theorem and raises an alarm.

use std::str::FromStr;

use nicecone::certify::{poly, structured};
use nicecone::linalg::{int, Metric, QVec};
use nicecone::structured::{example1, example2};
use nicecone::PolyCone;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::format::Space;
use crate::report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Polyhedral { dim: usize, max_gens: usize, bound: i64 },
    /// Draws among the structured cones with shipped inventories.
    Structured,
}

impl Default for Family {
    fn default() -> Self {
        Family::Polyhedral {
            dim: 5,
            max_gens: 8,
            bound: 5,
        }
    }
}

impl FromStr for Family {
    type Err = CliError;

    /// `polyhedral`, `polyhedral:DIM:GENS:BOUND` or `structured`.
    fn from_str(s: &str) -> CliResult<Family> {
        let bad = || CliError::invalid("--family", format!("unknown family {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["structured"] => Ok(Family::Structured),
            ["polyhedral"] => Ok(Family::default()),
            ["polyhedral", d, g, b] => {
                let dim: usize = d.parse().map_err(|_| bad())?;
                let max_gens: usize = g.parse().map_err(|_| bad())?;
                let bound: i64 = b.parse().map_err(|_| bad())?;
                if dim < 1 || max_gens < 1 || bound < 1 {
                    return Err(bad());
                }
                Ok(Family::Polyhedral { dim, max_gens, bound })
            }
            _ => Err(bad()),
        }
    }
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Polyhedral { dim, max_gens, bound } => format!("polyhedral:{dim}:{max_gens}:{bound}"),
            Family::Structured => "structured".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub trials: usize,
    pub seed: u64,
    pub family: Family,
}

/// Random polyhedral cone: dimension in `2..=dim`, up to `max_gens`
/// generators with integer entries in `[-bound, bound]`, zero and duplicate
/// generators rejected.
pub fn random_polyhedral(rng: &mut ChaCha8Rng, dim: usize, max_gens: usize, bound: i64) -> PolyCone {
    let d = rng.gen_range(2.min(dim)..=dim);
    let k = rng.gen_range(1..=max_gens);
    let mut gens: Vec<QVec> = vec![];
    while gens.len() < k {
        let v = QVec::new((0..d).map(|_| int(rng.gen_range(-bound..=bound))).collect());
        if !v.is_zero() && !gens.contains(&v) {
            gens.push(v);
        }
    }
    PolyCone::from_generators(&Metric::euclidean(d), &gens, &[]).expect("consistent dimensions")
}

pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Debug)]
enum Outcome {
    Done {
        cone: Value,
        exposed: Option<bool>,
        nice: Option<bool>,
    },
    Skipped(String),
}

fn run_trial(cfg: &SearchConfig, index: usize) -> CliResult<Outcome> {
    let mut rng = trial_rng(cfg.seed, index);
    match &cfg.family {
        Family::Polyhedral { dim, max_gens, bound } => {
            let k = random_polyhedral(&mut rng, *dim, *max_gens, *bound);
            let space = Space::Vec { d: k.ambient_dim() };
            let desc = json!({ "generators": report::vectors(&space, k.generators()) });
            let exposed = match poly::is_facially_exposed(&k) {
                Ok(c) => c.exposed,
                Err(nicecone::Error::CapExceeded(m)) => return Ok(Outcome::Skipped(m)),
                Err(e) => return Err(e.into()),
            };
            let nice = match poly::is_nice(&k) {
                Ok(c) => c.nice,
                Err(nicecone::Error::CapExceeded(m)) => return Ok(Outcome::Skipped(m)),
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome::Done {
                cone: desc,
                exposed,
                nice,
            })
        }
        Family::Structured => {
            let cone = if rng.gen_bool(0.5) { example1()?.cone } else { example2()?.cone };
            let exposed = structured::is_facially_exposed(&cone)?.exposed;
            let nice = structured::is_nice(&cone)?.nice;
            Ok(Outcome::Done {
                cone: json!({ "recipe": cone.name }),
                exposed,
                nice,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub json: Value,
    pub alarms: usize,
    pub candidates: usize,
}

pub fn run(cfg: &SearchConfig) -> CliResult<SearchReport> {
    let outcomes: Vec<CliResult<Outcome>> = (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect();
    let mut counts = [0usize; 5];
    let mut skipped = vec![];
    let mut candidates = vec![];
    let mut alarms = vec![];
    for (i, o) in outcomes.into_iter().enumerate() {
        match o? {
            Outcome::Skipped(reason) => skipped.push(json!({ "trial": i, "reason": reason })),
            Outcome::Done { cone, exposed, nice } => {
                let entry = || json!({ "trial": i, "cone": cone.clone(), "exposed": report::verdict(exposed), "nice": report::verdict(nice) });
                match (exposed, nice) {
                    (Some(true), Some(true)) => counts[0] += 1,
                    (Some(true), Some(false)) => {
                        counts[1] += 1;
                        candidates.push(entry());
                    }
                    (Some(false), Some(true)) => {
                        counts[2] += 1;
                        alarms.push(entry());
                    }
                    (Some(false), Some(false)) => counts[3] += 1,
                    _ => counts[4] += 1,
                }
            }
        }
    }
    let json = json!({
        "command": "search",
        "family": cfg.family.label(),
        "seed": cfg.seed,
        "trials": cfg.trials,
        "completed": cfg.trials - skipped.len(),
        "counts": {
            "exposed_and_nice": counts[0],
            "exposed_not_nice": counts[1],
            "nice_not_exposed": counts[2],
            "neither": counts[3],
            "undecided": counts[4],
        },
        "candidates": candidates,
        "alarms": alarms,
        "skipped": skipped,
    });
    Ok(SearchReport {
        alarms: alarms.len(),
        candidates: candidates.len(),
        json,
    })
}
