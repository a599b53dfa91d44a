use std::collections::BTreeMap;

use crate::formula::{Clause, CnfFormula, Dialect, Var};

use super::templates::{template_symbol, DEFICIT_VARS};
use super::{build_m_enforcer, build_mbar_enforcer, FreshVarAllocator, GadgetInstantiation};

/// Ids of a..f in 𝓤.
pub const U_PORTS: [u32; 6] = [193, 194, 195, 196, 197, 198];

/// The eight clauses over a..f (ids 1..6) that stay unsatisfiable with
/// duplicated literals.
pub fn build_core8() -> CnfFormula {
    let (a, b, c, d, e, f) = (1, 2, 3, 4, 5, 6);
    let clauses: [[i32; 3]; 8] = [
        [-a, -d, -f],
        [b, d, e],
        [e, -b, -b],
        [d, -f, -c],
        [a, -c, -e],
        [-e, c, c],
        [-d, a, b],
        [-a, f, f],
    ];
    let symbols = ["a", "b", "c", "d", "e", "f"]
        .iter()
        .enumerate()
        .map(|(i, s)| (Var::from_index(i), s.to_string()))
        .collect();
    CnfFormula::new(
        6,
        clauses.iter().map(|c| Clause::from_dimacs(c)).collect(),
        Dialect::Star,
    )
    .expect("ids 1..=6")
    .with_symbols(symbols)
}

/// The unsatisfiable Monotone 3-SAT-(2,2) instance on 198 variables and
/// 264 clauses. Copy i of the template occupies ids 32(i−1)+1..32i and
/// a..f are 193..198.
pub fn build_u() -> CnfFormula {
    let mut alloc = FreshVarAllocator::new();
    let ports = alloc
        .reserve("a..f", U_PORTS[0], 6)
        .expect("empty allocator");
    let [a, b, c, d, e, f]: [Var; 6] = ports.try_into().expect("six ports");

    let mut clauses = vec![
        Clause::new(vec![a.negative(), d.negative(), f.negative()]),
        Clause::new(vec![b.positive(), d.positive(), e.positive()]),
    ];
    let built: Vec<GadgetInstantiation> = [
        build_m_enforcer(&mut alloc, 1, e, b, b),
        build_m_enforcer(&mut alloc, 2, d, c, f),
        build_m_enforcer(&mut alloc, 3, a, c, e),
        build_mbar_enforcer(&mut alloc, 4, e, c, c),
        build_mbar_enforcer(&mut alloc, 5, d, a, b),
        build_mbar_enforcer(&mut alloc, 6, a, f, f),
    ]
    .into_iter()
    .map(|g| g.expect("port triples are collision-free"))
    .collect();
    for g in &built {
        clauses.extend(g.clauses().iter().cloned());
    }
    for &id in &DEFICIT_VARS {
        let sym = template_symbol(id);
        let copy = |k: usize| built[k].fresh(&sym).expect("template symbol");
        clauses.push(Clause::new((0..3).map(|k| copy(k).positive()).collect()));
        clauses.push(Clause::new((3..6).map(|k| copy(k).negative()).collect()));
    }
    alloc.audit().expect("disjoint blocks");

    let mut symbols: BTreeMap<Var, String> = BTreeMap::new();
    for (k, g) in built.iter().enumerate() {
        for (s, v) in &g.fresh_vars {
            symbols.insert(*v, format!("{s}^{}", k + 1));
        }
    }
    for (name, v) in ["a", "b", "c", "d", "e", "f"]
        .iter()
        .zip([a, b, c, d, e, f])
    {
        symbols.insert(v, name.to_string());
    }
    CnfFormula::new(alloc.high_water(), clauses, Dialect::Strict)
        .expect("distinct variables per clause")
        .with_symbols(symbols)
}

/// Seven unnegated clauses on x₁..x₇ whose variable graph is K₇.
pub fn build_u_nae() -> CnfFormula {
    CnfFormula::from_dimacs(&[
        &[1, 2, 7],
        &[1, 3, 6],
        &[1, 4, 5],
        &[2, 3, 4],
        &[2, 5, 6],
        &[3, 5, 7],
        &[4, 6, 7],
    ])
}
