//! Local search for monotone clause sets with few models. Candidates keep a
//! fixed occurrence profile and clause widths; a move swaps one literal
//! between two clauses of the same polarity.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{occurrence_profile, Clause, CnfFormula, Dialect, Occurrences, Polarity, Var};
use crate::generate::{fill, seeded_rng, FillRules, GenerateError, Pool};
use crate::sat::count_models;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinerError {
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("could not build a random candidate: {0}")]
    Generate(#[from] GenerateError),
    #[error("starting formula does not match the configuration: {0}")]
    InvalidStart(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinerConfig {
    pub n_vars: u32,
    /// Required (unnegated, negated) counts, indexed by variable.
    pub profile: Vec<Occurrences>,
    pub pos_widths: Vec<usize>,
    pub neg_widths: Vec<usize>,
    /// Random candidates drawn per (re)start; the one with fewest models wins.
    pub population: usize,
    pub max_iters: usize,
    /// Non-improving iterations before a restart.
    pub stall_window: usize,
    /// Probability of accepting a move that keeps the model count.
    pub sideways_prob: f64,
    /// Model counting stops here for the first evaluation of a candidate.
    pub count_cap: u64,
    pub seed: u64,
}

impl MinerConfig {
    fn with_shape(
        n_vars: u32,
        profile: Vec<Occurrences>,
        pos_widths: Vec<usize>,
        neg_widths: Vec<usize>,
    ) -> MinerConfig {
        MinerConfig {
            n_vars,
            profile,
            pos_widths,
            neg_widths,
            population: 8,
            max_iters: 500,
            stall_window: 60,
            sideways_prob: 0.3,
            count_cap: 1 << 20,
            seed: 0,
        }
    }

    /// Every variable (2,2), `n_clauses` 3-clauses split evenly by polarity.
    pub fn uniform(n_vars: u32, n_clauses: usize) -> Result<MinerConfig, MinerError> {
        let occurrences = 4 * n_vars as usize;
        if occurrences != 3 * n_clauses || !n_clauses.is_multiple_of(2) {
            return Err(MinerError::Infeasible(format!(
                "{n_vars} variables need {occurrences} literal slots; {n_clauses} clauses offer {}",
                3 * n_clauses
            )));
        }
        let half = n_clauses / 2;
        Ok(MinerConfig::with_shape(
            n_vars,
            vec![Occurrences::new(2, 2); n_vars as usize],
            vec![3; half],
            vec![3; half],
        ))
    }

    /// The profile and clause widths of a monotone template.
    pub fn from_template(f: &CnfFormula) -> Result<MinerConfig, MinerError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for c in f.clauses() {
            match c.polarity() {
                Some(Polarity::Positive) => pos.push(c.width()),
                Some(Polarity::Negative) => neg.push(c.width()),
                None => {
                    return Err(MinerError::Infeasible(format!(
                        "template clause {c} is mixed"
                    )))
                }
            }
        }
        let profile = occurrence_profile(f).iter().map(|(_, o)| o).collect();
        Ok(MinerConfig::with_shape(f.n_vars(), profile, pos, neg))
    }

    pub fn n_clauses(&self) -> usize {
        self.pos_widths.len() + self.neg_widths.len()
    }

    fn check_budget(&self) -> Result<(), MinerError> {
        let pos: u32 = self.profile.iter().map(|o| o.pos).sum();
        let neg: u32 = self.profile.iter().map(|o| o.neg).sum();
        let pos_w: usize = self.pos_widths.iter().sum();
        let neg_w: usize = self.neg_widths.iter().sum();
        if self.profile.len() != self.n_vars as usize
            || pos as usize != pos_w
            || neg as usize != neg_w
        {
            return Err(MinerError::Infeasible(format!(
                "profile supplies ({pos}, {neg}) literal slots, widths need ({pos_w}, {neg_w})"
            )));
        }
        Ok(())
    }

    /// Monotone, distinct variables, unique clauses, and the configured
    /// profile and widths.
    pub fn admits(&self, f: &CnfFormula) -> Result<(), String> {
        if f.n_vars() != self.n_vars {
            return Err(format!(
                "{} variables, expected {}",
                f.n_vars(),
                self.n_vars
            ));
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut seen = HashSet::new();
        for c in f.clauses() {
            if c.has_repeated_var() {
                return Err(format!("{c} repeats a variable"));
            }
            if !seen.insert(c) {
                return Err(format!("{c} appears twice"));
            }
            match c.polarity() {
                Some(Polarity::Positive) => pos.push(c.width()),
                Some(Polarity::Negative) => neg.push(c.width()),
                None => return Err(format!("{c} is mixed")),
            }
        }
        let sorted = |v: &[usize]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        if sorted(&pos) != sorted(&self.pos_widths) || sorted(&neg) != sorted(&self.neg_widths) {
            return Err("clause widths differ from the configuration".into());
        }
        let profile = occurrence_profile(f);
        if let Some((v, o)) = profile
            .iter()
            .zip(&self.profile)
            .find(|((_, o), want)| o != *want)
            .map(|(p, _)| p)
        {
            return Err(format!("variable {v} appears ({}, {})", o.pos, o.neg));
        }
        Ok(())
    }
}

pub fn random_candidate(cfg: &MinerConfig, rng: &mut ChaCha8Rng) -> Result<CnfFormula, MinerError> {
    cfg.check_budget()?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, o) in cfg.profile.iter().enumerate() {
        let v = Var::from_index(i);
        pos.extend(std::iter::repeat_n(v.positive(), o.pos as usize));
        neg.extend(std::iter::repeat_n(v.negative(), o.neg as usize));
    }
    let pools = [
        Pool {
            slots: pos,
            widths: cfg.pos_widths.clone(),
        },
        Pool {
            slots: neg,
            widths: cfg.neg_widths.clone(),
        },
    ];
    let rules = FillRules {
        distinct: true,
        unique: true,
    };
    let clauses = fill(rng, &pools, rules)?;
    Ok(CnfFormula::new(cfg.n_vars, clauses, Dialect::Strict).expect("generated in range"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwapOutcome {
    Applied(CnfFormula),
    NoMove,
}

/// Exchanges literal `i` of clause `a` with literal `j` of clause `b`.
/// `None` when the clauses differ in polarity or the result would repeat a
/// variable within a clause or duplicate a clause.
pub fn swap_literals(f: &CnfFormula, a: usize, i: usize, b: usize, j: usize) -> Option<CnfFormula> {
    let clauses = f.clauses();
    let (ca, cb) = (&clauses[a], &clauses[b]);
    if a == b || ca.polarity().is_none() || ca.polarity() != cb.polarity() {
        return None;
    }
    let mut la = ca.lits().to_vec();
    let mut lb = cb.lits().to_vec();
    std::mem::swap(&mut la[i], &mut lb[j]);
    let (na, nb) = (Clause::new(la), Clause::new(lb));
    if na.has_repeated_var() || nb.has_repeated_var() || na == nb {
        return None;
    }
    if clauses
        .iter()
        .enumerate()
        .any(|(k, c)| k != a && k != b && (*c == na || *c == nb))
    {
        return None;
    }
    let mut out = clauses.to_vec();
    out[a] = na;
    out[b] = nb;
    Some(f.with_clauses(out).expect("same variables").canonicalize())
}

/// One random equal-polarity swap.
pub fn swap_move(f: &CnfFormula, rng: &mut ChaCha8Rng) -> SwapOutcome {
    let clauses = f.clauses();
    if clauses.len() < 2 {
        return SwapOutcome::NoMove;
    }
    let a = rng.gen_range(0..clauses.len());
    let mates: Vec<usize> = (0..clauses.len())
        .filter(|&b| {
            b != a
                && clauses[b].polarity().is_some()
                && clauses[b].polarity() == clauses[a].polarity()
        })
        .collect();
    if mates.is_empty() || clauses[a].is_empty() {
        return SwapOutcome::NoMove;
    }
    let b = mates[rng.gen_range(0..mates.len())];
    if clauses[b].is_empty() {
        return SwapOutcome::NoMove;
    }
    let i = rng.gen_range(0..clauses[a].width());
    let j = rng.gen_range(0..clauses[b].width());
    match swap_literals(f, a, i, b, j) {
        Some(g) => SwapOutcome::Applied(g),
        None => SwapOutcome::NoMove,
    }
}

pub fn candidate_hash(f: &CnfFormula) -> u64 {
    let mut h = DefaultHasher::new();
    f.clauses().hash(&mut h);
    h.finish()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub hash: u64,
    /// Exact unless `capped`, in which case a lower bound.
    pub count: u64,
    pub capped: bool,
    pub accepted: bool,
    pub restart: bool,
    /// Fewest models seen so far.
    pub best: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTrace {
    pub entries: Vec<TraceEntry>,
    pub best: CnfFormula,
    pub best_count: u64,
}

impl SearchTrace {
    pub fn incumbent_non_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].best <= w[0].best)
    }
}

struct Search<'a> {
    cfg: &'a MinerConfig,
    rng: ChaCha8Rng,
    trace: SearchTrace,
}

impl Search<'_> {
    fn evaluate(&self, f: &CnfFormula, cap: u64) -> (u64, bool) {
        assert!(
            self.cfg.admits(f).is_ok(),
            "invalid candidate: {:?}",
            self.cfg.admits(f)
        );
        let m = count_models(f, cap);
        (m.count, m.capped)
    }

    fn record(
        &mut self,
        iteration: usize,
        f: &CnfFormula,
        count: u64,
        capped: bool,
        accepted: bool,
        restart: bool,
    ) {
        if accepted && !capped && count < self.trace.best_count {
            self.trace.best = f.clone();
            self.trace.best_count = count;
        }
        self.trace.entries.push(TraceEntry {
            iteration,
            hash: candidate_hash(f),
            count,
            capped,
            accepted,
            restart,
            best: self.trace.best_count,
        });
    }

    fn fresh_start(&mut self) -> Result<(CnfFormula, u64, bool), MinerError> {
        let mut best: Option<(CnfFormula, u64, bool)> = None;
        for _ in 0..self.cfg.population.max(1) {
            let f = random_candidate(self.cfg, &mut self.rng)?;
            let (count, capped) = self.evaluate(&f, self.cfg.count_cap);
            if best.as_ref().is_none_or(|b| count < b.1) {
                best = Some((f, count, capped));
            }
        }
        Ok(best.expect("population is at least one"))
    }

    fn run(mut self, start: Option<CnfFormula>) -> Result<SearchTrace, MinerError> {
        let (mut current, mut count, capped) = match start {
            Some(f) => {
                let (c, capped) = self.evaluate(&f, self.cfg.count_cap);
                (f, c, capped)
            }
            None => self.fresh_start()?,
        };
        self.record(0, &current, count, capped, true, true);
        let mut stall = 0;
        for it in 1..=self.cfg.max_iters {
            if count == 0 {
                break;
            }
            if stall >= self.cfg.stall_window {
                let (f, c, capped) = self.fresh_start()?;
                current = f;
                count = c;
                stall = 0;
                self.record(it, &current, count, capped, true, true);
                continue;
            }
            let next = match swap_move(&current, &mut self.rng) {
                SwapOutcome::Applied(g) => g,
                SwapOutcome::NoMove => {
                    stall += 1;
                    continue;
                }
            };
            let (c, capped) = self.evaluate(&next, count.saturating_add(1));
            let accepted =
                c < count || (c == count && !capped && self.rng.gen_bool(self.cfg.sideways_prob));
            stall = if c < count { 0 } else { stall + 1 };
            self.record(it, &next, c, capped, accepted, false);
            if accepted {
                current = next;
                count = c;
            }
        }
        Ok(self.trace)
    }
}

fn search(cfg: &MinerConfig) -> Result<Search<'_>, MinerError> {
    cfg.check_budget()?;
    Ok(Search {
        cfg,
        rng: seeded_rng(cfg.seed),
        trace: SearchTrace {
            entries: Vec::new(),
            best: CnfFormula::empty(cfg.n_vars),
            best_count: u64::MAX,
        },
    })
}

/// Hill climbing from the best of a random population.
pub fn mine(cfg: &MinerConfig) -> Result<SearchTrace, MinerError> {
    search(cfg)?.run(None)
}

/// Hill climbing from a given candidate.
pub fn mine_from(cfg: &MinerConfig, start: CnfFormula) -> Result<SearchTrace, MinerError> {
    cfg.admits(&start).map_err(MinerError::InvalidStart)?;
    search(cfg)?.run(Some(start))
}
