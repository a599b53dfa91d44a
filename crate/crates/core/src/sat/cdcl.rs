//! Conflict-driven clause learning with two watched literals, 1UIP learning,
//! VSIDS branching and Luby restarts.

use crate::formula::{Assignment, Clause, CnfFormula, Lit};

use super::rup::{ProofStep, RupProof};

const NO_REASON: u32 = u32::MAX;
const RESTART_UNIT: u64 = 100;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub(crate) enum Outcome {
    Sat,
    Unsat,
    Budget,
}

/// Single-threaded solver state. Clauses may be added between calls to
/// [`Solver::solve`]; the crate uses this for blocking-clause enumeration.
pub(crate) struct Solver {
    n_vars: usize,
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<u32>>,
    /// Per literal code: 1 true, -1 false, 0 unassigned.
    lit_value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    heap: VarHeap,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    proof: Option<Vec<ProofStep>>,
    conflicts: u64,
}

impl Solver {
    pub(crate) fn new(n_vars: u32, trace: bool) -> Solver {
        let n = n_vars as usize;
        Solver {
            n_vars: n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            lit_value: vec![0; 2 * n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            heap: VarHeap::new(n),
            var_inc: 1.0,
            phase: vec![false; n],
            seen: vec![false; n],
            ok: true,
            proof: trace.then(Vec::new),
            conflicts: 0,
        }
    }

    pub(crate) fn from_formula(formula: &CnfFormula, trace: bool) -> Solver {
        let mut solver = Solver::new(formula.n_vars(), trace);
        for clause in formula.clauses() {
            solver.add_clause(clause.lits());
        }
        solver
    }

    fn value(&self, code: u32) -> i8 {
        self.lit_value[code as usize]
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause at decision level 0. Duplicate literals collapse and
    /// tautologies are dropped.
    pub(crate) fn add_clause(&mut self, lits: &[Lit]) {
        if !self.ok {
            return;
        }
        self.backtrack(0);
        let mut codes: Vec<u32> = lits.iter().map(|l| l.code() as u32).collect();
        codes.sort_unstable();
        codes.dedup();
        if codes.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        // Non-false literals first so the watches sit on them.
        codes.sort_by_key(|&c| self.value(c) == -1);
        let free = codes.iter().take_while(|&&c| self.value(c) != -1).count();
        match free {
            0 => {
                self.ok = false;
            }
            _ if codes.len() == 1 => {
                if self.value(codes[0]) == 0 {
                    self.enqueue(codes[0], NO_REASON);
                }
            }
            _ => {
                let idx = self.clauses.len() as u32;
                self.watches[codes[0] as usize].push(idx);
                self.watches[codes[1] as usize].push(idx);
                let implied = free == 1 && self.value(codes[0]) == 0;
                let first = codes[0];
                self.clauses.push(codes);
                if implied {
                    self.enqueue(first, idx);
                }
            }
        }
    }

    fn enqueue(&mut self, code: u32, reason: u32) {
        let var = (code >> 1) as usize;
        self.lit_value[code as usize] = 1;
        self.lit_value[(code ^ 1) as usize] = -1;
        self.level[var] = self.decision_level();
        self.reason[var] = reason;
        self.trail.push(code);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let mut watchers = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < watchers.len() {
                let ci = watchers[i];
                i += 1;
                let clause = &mut self.clauses[ci as usize];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.lit_value[first as usize] == 1 {
                    watchers[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    if self.lit_value[clause[k] as usize] != -1 {
                        clause.swap(1, k);
                        self.watches[clause[1] as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                watchers[j] = ci;
                j += 1;
                if self.lit_value[first as usize] == -1 {
                    conflict = Some(ci);
                    while i < watchers.len() {
                        watchers[j] = watchers[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, ci);
                }
            }
            watchers.truncate(j);
            self.watches[false_lit as usize] = watchers;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn analyze(&mut self, mut conflict: u32) -> (Vec<u32>, u32) {
        let mut learnt: Vec<u32> = vec![0];
        let mut pending = 0usize;
        let mut p: Option<u32> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();

        loop {
            let lits = self.clauses[conflict as usize].clone();
            for q in lits {
                if Some(q) == p {
                    continue;
                }
                let v = (q >> 1) as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                self.bump(v);
                if self.level[v] == current {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            loop {
                idx -= 1;
                if self.seen[(self.trail[idx] >> 1) as usize] {
                    break;
                }
            }
            let lit = self.trail[idx];
            let v = (lit >> 1) as usize;
            self.seen[v] = false;
            pending -= 1;
            p = Some(lit);
            if pending == 0 {
                break;
            }
            conflict = self.reason[v];
        }
        learnt[0] = p.expect("conflict at a positive level has a UIP") ^ 1;
        for &q in &learnt[1..] {
            self.seen[(q >> 1) as usize] = false;
        }

        let mut back_level = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[(learnt[i] >> 1) as usize] > self.level[(learnt[max_i] >> 1) as usize]
                {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            back_level = self.level[(learnt[1] >> 1) as usize];
        }
        (learnt, back_level)
    }

    fn bump(&mut self, var: usize) {
        self.heap.activity[var] += self.var_inc;
        if self.heap.activity[var] > 1e100 {
            for a in self.heap.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(var);
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for i in (keep..self.trail.len()).rev() {
            let code = self.trail[i];
            let var = (code >> 1) as usize;
            self.lit_value[code as usize] = 0;
            self.lit_value[(code ^ 1) as usize] = 0;
            self.reason[var] = NO_REASON;
            self.phase[var] = code & 1 == 0;
            self.heap.insert(var);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    fn pick_branch(&mut self) -> Option<u32> {
        while let Some(var) = self.heap.pop() {
            if self.lit_value[2 * var] == 0 {
                let code = 2 * var as u32 + u32::from(!self.phase[var]);
                return Some(code);
            }
        }
        None
    }

    fn log(&mut self, lits: &[u32]) {
        if let Some(proof) = self.proof.as_mut() {
            let clause = Clause::new(lits.iter().map(|&c| Lit::from_code(c as usize)).collect());
            proof.push(ProofStep::Add(clause));
        }
    }

    /// Runs until SAT, UNSAT, or until `budget` further conflicts have been spent.
    pub(crate) fn solve(&mut self, budget: u64) -> Outcome {
        if !self.ok {
            self.log(&[]);
            return Outcome::Unsat;
        }
        self.backtrack(0);
        let start = self.conflicts;
        let mut restart_index = 0u64;
        let mut next_restart = self.conflicts + luby(restart_index) * RESTART_UNIT;

        loop {
            if let Some(conflict) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    self.log(&[]);
                    return Outcome::Unsat;
                }
                let (learnt, back_level) = self.analyze(conflict);
                self.log(&learnt);
                self.backtrack(back_level);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let idx = self.clauses.len() as u32;
                    self.watches[learnt[0] as usize].push(idx);
                    self.watches[learnt[1] as usize].push(idx);
                    let first = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(first, idx);
                }
                self.var_inc /= 0.95;
                if self.conflicts - start >= budget {
                    self.backtrack(0);
                    return Outcome::Budget;
                }
            } else {
                if self.conflicts >= next_restart {
                    restart_index += 1;
                    next_restart = self.conflicts + luby(restart_index) * RESTART_UNIT;
                    self.backtrack(0);
                    continue;
                }
                match self.pick_branch() {
                    None => return Outcome::Sat,
                    Some(code) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(code, NO_REASON);
                    }
                }
            }
        }
    }

    /// The current total assignment; valid right after `solve` returned `Sat`.
    pub(crate) fn model(&self) -> Assignment {
        Assignment::total(
            (0..self.n_vars)
                .map(|v| self.lit_value[2 * v] == 1)
                .collect(),
        )
    }

    pub(crate) fn take_proof(&mut self) -> Option<RupProof> {
        self.proof.take().map(RupProof::new)
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ... indexed from 0.
fn luby(mut i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

/// Max-heap of variables keyed by activity.
struct VarHeap {
    activity: Vec<f64>,
    heap: Vec<usize>,
    /// Position in `heap`, `usize::MAX` when absent.
    pos: Vec<usize>,
}

impl VarHeap {
    fn new(n: usize) -> VarHeap {
        VarHeap {
            activity: vec![0.0; n],
            heap: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn better(&self, a: usize, b: usize) -> bool {
        let (x, y) = (self.activity[a], self.activity[b]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut i: usize) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.better(v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn sift_down(&mut self, mut i: usize) {
        let v = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && self.better(self.heap[right], self.heap[left])
            {
                right
            } else {
                left
            };
            if !self.better(self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn increased(&mut self, var: usize) {
        if self.pos[var] != usize::MAX {
            self.sift_up(self.pos[var]);
        }
    }

    fn insert(&mut self, var: usize) {
        if self.pos[var] != usize::MAX {
            return;
        }
        self.heap.push(var);
        let i = self.heap.len() - 1;
        self.pos[var] = i;
        self.sift_up(i);
    }

    fn pop(&mut self) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = usize::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.sift_down(0);
        }
        Some(top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn heap_orders_by_activity() {
        let mut h = VarHeap::new(4);
        h.activity[2] = 3.0;
        h.increased(2);
        h.activity[0] = 1.0;
        h.increased(0);
        assert_eq!(h.pop(), Some(2));
        assert_eq!(h.pop(), Some(0));
        assert_eq!(h.pop(), Some(1));
        h.insert(2);
        assert_eq!(h.pop(), Some(2));
        assert_eq!(h.pop(), Some(3));
        assert_eq!(h.pop(), None);
    }
}
