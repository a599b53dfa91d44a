use crate::formula::{Clause, CnfFormula, Lit, Var};
use crate::qbf::Qbf2Formula;

use super::FreshVarAllocator;

/// A quantified gadget: clauses together with the prefix role of each of
/// its fresh variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifiedBlock {
    pub tag: String,
    pub universals: Vec<Var>,
    pub existentials: Vec<Var>,
    pub clauses: Vec<Clause>,
}

impl QuantifiedBlock {
    /// Standalone ∀∃ formula; the block's variables must be exactly
    /// `1..=n` for some n.
    pub fn into_qbf(self) -> Qbf2Formula {
        let n = self.universals.len() + self.existentials.len();
        let matrix =
            CnfFormula::from_clauses(n as u32, self.clauses).expect("block variables are 1..=n");
        Qbf2Formula::new(self.universals, self.existentials, matrix)
            .expect("standalone block prefix")
    }
}

/// Clauses of Q³ over universals u,v,w,q,r and existentials a,b.
fn q3_clauses(u: Var, v: Var, w: Var, q: Var, r: Var, a: Var, b: Var) -> Vec<Clause> {
    let p = |x: Var| Lit::new(x, true);
    let n = |x: Var| Lit::new(x, false);
    vec![
        Clause::new(vec![p(u), p(r), p(a)]),
        Clause::new(vec![n(u), n(b), n(a)]),
        Clause::new(vec![p(v), p(q), p(b)]),
        Clause::new(vec![n(v), n(r), n(a)]),
        Clause::new(vec![p(w), p(a), p(b)]),
        Clause::new(vec![n(w), n(q), n(b)]),
    ]
}

/// Q³: five universals occurring (1,1), two existentials occurring (2,2),
/// and a yes-instance.
pub fn build_q3(alloc: &mut FreshVarAllocator) -> QuantifiedBlock {
    let tag = format!("Q3@{}", alloc.high_water() + 1);
    let univ = alloc.fresh(format!("{tag}.forall"), 5);
    let ex = alloc.fresh(format!("{tag}.exists"), 2);
    let clauses = q3_clauses(univ[0], univ[1], univ[2], univ[3], univ[4], ex[0], ex[1]);
    QuantifiedBlock {
        tag,
        universals: univ,
        existentials: ex,
        clauses,
    }
}

/// Q¹_mon: two copies of Q³ sharing universals, so every variable occurs
/// (2,2); five universals against four existentials.
pub fn build_q1mon(alloc: &mut FreshVarAllocator) -> QuantifiedBlock {
    let tag = format!("Q1mon@{}", alloc.high_water() + 1);
    let univ = alloc.fresh(format!("{tag}.forall"), 5);
    let ex = alloc.fresh(format!("{tag}.exists"), 4);
    let mut clauses = q3_clauses(univ[0], univ[1], univ[2], univ[3], univ[4], ex[0], ex[1]);
    clauses.extend(q3_clauses(
        univ[0], univ[1], univ[2], univ[3], univ[4], ex[2], ex[3],
    ));
    QuantifiedBlock {
        tag,
        universals: univ,
        existentials: ex,
        clauses,
    }
}

/// Q³ on ids 1..=7 (u,v,w,q,r,a,b).
pub fn q3() -> Qbf2Formula {
    build_q3(&mut FreshVarAllocator::new()).into_qbf()
}

/// Q¹_mon on ids 1..=9 (u,v,w,q,r,a,b,c,d).
pub fn q1mon() -> Qbf2Formula {
    build_q1mon(&mut FreshVarAllocator::new()).into_qbf()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{occurrence_profile, Occurrences};

    #[test]
    fn q3_profile() {
        let q = q3();
        let profile = occurrence_profile(q.matrix());
        for v in q.universals() {
            assert_eq!(profile.get(*v), Occurrences::new(1, 1));
        }
        for v in q.existentials() {
            assert_eq!(profile.get(*v), Occurrences::new(2, 2));
        }
        assert_eq!(q.matrix().len(), 6);
    }

    #[test]
    fn q1mon_profile() {
        let q = q1mon();
        assert_eq!(q.universals().len(), 5);
        assert_eq!(q.existentials().len(), 4);
        assert_eq!(q.matrix().len(), 12);
        assert!(q.matrix().is_monotone());
        let profile = occurrence_profile(q.matrix());
        assert!(profile.iter().all(|(_, o)| o == Occurrences::new(2, 2)));
    }

    #[test]
    fn blocks_take_fresh_ids() {
        let mut alloc = FreshVarAllocator::after(100);
        let a = build_q3(&mut alloc);
        let b = build_q1mon(&mut alloc);
        assert_eq!(a.universals[0], Var::new(101));
        assert_eq!(b.universals[0], Var::new(108));
        alloc.audit().unwrap();
    }
}
