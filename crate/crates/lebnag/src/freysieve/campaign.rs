//! Campaign driver: run the elimination pipeline over every (E, d, n)
//! triple, with per-(d, n) shared caches, a work queue over rayon, an
//! append-only JSON-lines checkpoint owned by a single writer thread,
//! and a deterministic final report independent of worker count.

use super::eigen::exponent_bound_b;
use super::hk::{hk_test, ord_disc_frey_mod, HkVerdict};
use super::intersect::{psi_preimage_intersect, IntersectOutcome};
use super::kraus::{kraus_search, SieveCache};
use super::{vector_conductor_consistent, ExponentVector, SieveError};
use crate::arith::is_prime;
use crate::ecurve::CurveRecord;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::mpsc;

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub d_set: Vec<u64>,
    pub n_min: u64,
    pub n_max: u64,
    pub k_max: u64,
    pub prime_budget: usize,
    /// inert auxiliary primes above this are skipped in the refined
    /// sieve (cost control; weakening is sound)
    pub inert_cost_cap: Option<u64>,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// eigenvalue bound cutoff (the gcd over ell < this)
    pub eigen_ell_max: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            d_set: vec![7, 15, 55, 231],
            n_min: 13,
            n_max: 2000,
            k_max: 1000,
            prime_budget: 200,
            inert_cost_cap: Some(100_000),
            workers: 0, // rayon default
            checkpoint: None,
            eigen_ell_max: 500,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "status")]
pub enum TripleStatus {
    /// the nonzero eigenvalue gcd for (E, d) rules out this n
    #[serde(rename = "eigen")]
    EigenEliminated,
    #[serde(rename = "kraus")]
    KrausEliminated { witness_q: u64 },
    #[serde(rename = "sieve-empty")]
    SieveEmpty { primes_used: usize },
    #[serde(rename = "conductor")]
    ConductorEliminated { vectors_seen: usize },
    #[serde(rename = "hk")]
    HkEliminated { q1: u64, q2: u64 },
    #[serde(rename = "survivor")]
    Survivor { intersection: Vec<ExponentVector> },
    #[serde(rename = "unresolved")]
    Unresolved { reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleOutcome {
    pub label: String,
    pub d: u64,
    pub n: u64,
    #[serde(flatten)]
    pub status: TripleStatus,
}

#[derive(Debug)]
pub struct CampaignReport {
    pub outcomes: Vec<TripleOutcome>,
}

impl CampaignReport {
    pub fn survivors(&self) -> Vec<&TripleOutcome> {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, TripleStatus::Survivor { .. } | TripleStatus::Unresolved { .. }))
            .collect()
    }

    /// Deterministic CSV summary, sorted by (d, label, n).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("d,label,n,status,detail\n");
        for o in &self.outcomes {
            let (st, detail) = match &o.status {
                TripleStatus::EigenEliminated => ("eigen", String::new()),
                TripleStatus::KrausEliminated { witness_q } => ("kraus", format!("q={witness_q}")),
                TripleStatus::SieveEmpty { primes_used } => ("sieve-empty", format!("primes={primes_used}")),
                TripleStatus::ConductorEliminated { vectors_seen } => {
                    ("conductor", format!("vectors={vectors_seen}"))
                }
                TripleStatus::HkEliminated { q1, q2 } => ("hk", format!("q1={q1};q2={q2}")),
                TripleStatus::Survivor { intersection } => {
                    let v: Vec<String> = intersection
                        .iter()
                        .map(|b| format!("({} {} {} {})", b[0], b[1], b[2], b[3]))
                        .collect();
                    ("survivor", v.join(";"))
                }
                TripleStatus::Unresolved { reason } => ("unresolved", reason.clone()),
            };
            s.push_str(&format!("{},{},{},{},{}\n", o.d, o.label, o.n, st, detail));
        }
        s
    }
}

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// The full pipeline for the triples of one (d, n) cell, sharing caches.
fn run_cell(
    curves: &[(usize, &CurveRecord)],
    d: u64,
    n: u64,
    cfg: &CampaignConfig,
) -> Result<Vec<TripleOutcome>, SieveError> {
    let mut cache = SieveCache::new();
    let mut out = Vec::new();
    for &(_, e) in curves {
        let status = run_triple(e, d, n, cfg, &mut cache)?;
        out.push(TripleOutcome { label: e.label.clone(), d, n, status });
    }
    Ok(out)
}

fn run_triple(
    e: &CurveRecord,
    d: u64,
    n: u64,
    cfg: &CampaignConfig,
    cache: &mut SieveCache,
) -> Result<TripleStatus, SieveError> {
    if let (Some(q), _) = kraus_search(e, d, n, cfg.k_max, cache)? {
        return Ok(TripleStatus::KrausEliminated { witness_q: q });
    }
    let outcome = psi_preimage_intersect(e, d, n, cfg.prime_budget, cfg.inert_cost_cap, cache)?;
    let (vectors, primes_used) = match outcome {
        IntersectOutcome::Empty { primes_used } => {
            return Ok(TripleStatus::SieveEmpty { primes_used })
        }
        IntersectOutcome::Unresolved { primes_used } => {
            return Ok(TripleStatus::Unresolved {
                reason: format!("no independent constraint system after {primes_used} primes"),
            })
        }
        IntersectOutcome::Vectors { vectors, primes_used } => (vectors, primes_used),
    };
    let _ = primes_used;
    let seen = vectors.len();
    let survivors: Vec<ExponentVector> = vectors
        .into_iter()
        .filter(|b| vector_conductor_consistent(b, d, n, e.conductor))
        .collect();
    if survivors.is_empty() {
        return Ok(TripleStatus::ConductorEliminated { vectors_seen: seen });
    }
    // symplectic criterion over all usable prime pairs, per vector
    let mut alive = Vec::new();
    let mut witness: Option<(u64, u64)> = None;
    'vectors: for beta in survivors {
        for (i, &q1) in [2u64, 3, 5, 7, 11].iter().enumerate() {
            for &q2 in &[2u64, 3, 5, 7, 11][i + 1..] {
                if q1 == n || q2 == n {
                    continue;
                }
                if !e.has_multiplicative_reduction(q1) || !e.has_multiplicative_reduction(q2) {
                    continue;
                }
                let of = (
                    ord_disc_frey_mod(&beta, d, n, q1),
                    ord_disc_frey_mod(&beta, d, n, q2),
                );
                if of.0 == 0
                    || of.1 == 0
                    || e.ord_disc(q1) as u64 % n == 0
                    || e.ord_disc(q2) as u64 % n == 0
                {
                    continue;
                }
                if hk_test(of, e, n, q1, q2)? == HkVerdict::Eliminated {
                    witness = Some((q1, q2));
                    continue 'vectors;
                }
            }
        }
        alive.push(beta);
    }
    if alive.is_empty() {
        let (q1, q2) = witness.expect("elimination recorded a witness");
        return Ok(TripleStatus::HkEliminated { q1, q2 });
    }
    Ok(TripleStatus::Survivor { intersection: alive })
}

/// Run the campaign over `curves` x d_set x primes in [n_min, n_max].
/// Completed triples recorded in the checkpoint file are not recomputed;
/// the report always covers every triple, in (d, label, n) order.
pub fn run_campaign(
    curves: &[CurveRecord],
    cfg: &CampaignConfig,
) -> Result<CampaignReport, SieveError> {
    let ns = primes_in(cfg.n_min.max(13), cfg.n_max);
    // eigenvalue bound per (curve, d), computed once
    let mut pair_bound: BTreeMap<(usize, u64), BigInt> = BTreeMap::new();
    for (i, e) in curves.iter().enumerate() {
        for &d in &cfg.d_set {
            pair_bound.insert((i, d), exponent_bound_b(e, d, cfg.eigen_ell_max)?);
        }
    }
    // resume support
    let mut done: HashSet<(String, u64, u64)> = HashSet::new();
    let mut resumed: Vec<TripleOutcome> = Vec::new();
    if let Some(path) = &cfg.checkpoint {
        if path.exists() {
            let mut offset = 0u64;
            let file = std::fs::File::open(path)?;
            for line in std::io::BufReader::new(file).lines() {
                let line = line?;
                let len = line.len() as u64 + 1;
                if !line.trim().is_empty() {
                    let o: TripleOutcome =
                        serde_json::from_str(&line).map_err(|e| SieveError::Checkpoint {
                            offset,
                            msg: e.to_string(),
                        })?;
                    done.insert((o.label.clone(), o.d, o.n));
                    resumed.push(o);
                }
                offset += len;
            }
        }
    }
    // single writer thread owns the checkpoint file
    let (tx, rx) = mpsc::channel::<TripleOutcome>();
    let writer = match cfg.checkpoint.clone() {
        Some(path) => Some(std::thread::spawn(move || -> std::io::Result<()> {
            let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
            for o in rx {
                let line = serde_json::to_string(&o).expect("serialize outcome");
                writeln!(f, "{line}")?;
            }
            f.flush()
        })),
        None => {
            drop(rx);
            None
        }
    };

    // cells: one (d, n) task each, holding the curves still in the game
    let mut cells: Vec<(u64, u64, Vec<usize>)> = Vec::new();
    let mut eigen_outcomes: Vec<TripleOutcome> = Vec::new();
    for &d in &cfg.d_set {
        for &n in &ns {
            let mut active = Vec::new();
            for (i, e) in curves.iter().enumerate() {
                if done.contains(&(e.label.clone(), d, n)) {
                    continue;
                }
                let b = &pair_bound[&(i, d)];
                if !b.is_zero() && !(b % BigInt::from(n)).is_zero() {
                    eigen_outcomes.push(TripleOutcome {
                        label: e.label.clone(),
                        d,
                        n,
                        status: TripleStatus::EigenEliminated,
                    });
                } else {
                    active.push(i);
                }
            }
            if !active.is_empty() {
                cells.push((d, n, active));
            }
        }
    }
    for o in &eigen_outcomes {
        let _ = tx.send(o.clone());
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .expect("thread pool");
    let results: Result<Vec<Vec<TripleOutcome>>, SieveError> = pool.install(|| {
        cells
            .par_iter()
            .map(|(d, n, active)| {
                let cs: Vec<(usize, &CurveRecord)> =
                    active.iter().map(|&i| (i, &curves[i])).collect();
                let outs = run_cell(&cs, *d, *n, cfg)?;
                for o in &outs {
                    let _ = tx.send(o.clone());
                }
                Ok(outs)
            })
            .collect()
    });
    drop(tx);
    if let Some(w) = writer {
        w.join().expect("writer thread").map_err(SieveError::Io)?;
    }
    let mut outcomes = resumed;
    outcomes.extend(eigen_outcomes);
    for block in results? {
        outcomes.extend(block);
    }
    outcomes.sort_by(|a, b| (a.d, &a.label, a.n).cmp(&(b.d, &b.label, b.n)));
    outcomes.dedup_by(|a, b| (a.d, &a.label, a.n) == (b.d, &b.label, b.n));
    Ok(CampaignReport { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecurve::ingest_curves_str;

    #[test]
    fn empty_range_gives_empty_report() {
        let curves = ingest_curves_str(
            "2310o1 2310 [1,-2036,0,1048576,0] -1 [[2,40],[3,3],[5,1],[7,2],[11,2]]",
        )
        .unwrap();
        let cfg = CampaignConfig { n_min: 14, n_max: 14, ..Default::default() };
        let rep = run_campaign(&curves, &cfg).unwrap();
        assert!(rep.outcomes.is_empty());
    }

    #[test]
    fn status_serialization_roundtrip() {
        let o = TripleOutcome {
            label: "2310o1".into(),
            d: 15,
            n: 13,
            status: TripleStatus::Survivor { intersection: vec![[1, 0, 1, 1]] },
        };
        let s = serde_json::to_string(&o).unwrap();
        let back: TripleOutcome = serde_json::from_str(&s).unwrap();
        assert_eq!(back.status, o.status);
        assert_eq!(back.label, "2310o1");
    }
}
