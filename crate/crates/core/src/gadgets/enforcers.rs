use std::collections::BTreeMap;

use crate::formula::{Clause, Lit, Polarity, Var};

use super::templates::{h_in_m_order, template_id, template_symbol, F3, G, TEMPLATE_VARS};
use super::{instantiate, FreshVarAllocator, GadgetError, GadgetInstantiation, Port};

fn port(name: &str, lit: Lit) -> Port {
    Port {
        name: name.to_string(),
        lit,
    }
}

/// 𝓕₃ ∪ 𝓖 ∪ 𝓗 over one copy of the template variables.
fn body(base: &[Var]) -> Vec<Clause> {
    let mut clauses = instantiate(&F3, base);
    clauses.extend(instantiate(&G, base));
    clauses.extend(instantiate(&h_in_m_order(), base));
    clauses
}

fn template_map(base: &[Var], suffix: &str) -> BTreeMap<String, Var> {
    (1..=TEMPLATE_VARS)
        .map(|id| {
            (
                format!("{}{suffix}", template_symbol(id)),
                base[id as usize - 1],
            )
        })
        .collect()
}

fn tvar(base: &[Var], symbol: &str) -> Var {
    base[template_id(symbol).expect("known template symbol") as usize - 1]
}

fn negate_all(clauses: Vec<Clause>) -> Vec<Clause> {
    clauses.iter().map(Clause::negated).collect()
}

fn m_clauses(base: &[Var], u1: Var, u2: Var, u3: Var) -> Vec<Clause> {
    let x = |k: &str| tvar(base, k);
    let mut clauses = vec![
        Clause::new(vec![x("x1").positive(), x("x2").positive(), u1.positive()]),
        Clause::new(vec![x("x2").negative(), x("x3").negative(), u2.negative()]),
        Clause::new(vec![x("x2").negative(), x("x4").negative(), u3.negative()]),
    ];
    clauses.extend(body(base));
    clauses
}

fn check_ports(u1: Var, u2: Var, u3: Var) -> Result<(), GadgetError> {
    if u1 == u2 || u1 == u3 {
        return Err(GadgetError::PortCollision { positive: u1.id() });
    }
    Ok(())
}

/// 𝓜⁽ⁱ⁾(u₁, ¬u₂, ¬u₃): satisfiable exactly when the clause {u₁, ¬u₂, ¬u₃} is.
/// `u2 == u3` is allowed.
pub fn build_m_enforcer(
    alloc: &mut FreshVarAllocator,
    index: usize,
    u1: Var,
    u2: Var,
    u3: Var,
) -> Result<GadgetInstantiation, GadgetError> {
    check_ports(u1, u2, u3)?;
    let tag = format!("M({index})");
    let base = alloc.fresh(tag.clone(), TEMPLATE_VARS);
    let ports = vec![
        port("u1", u1.positive()),
        port("u2", u2.negative()),
        port("u3", u3.negative()),
    ];
    let simulated = Clause::new(ports.iter().map(|p| p.lit).collect());
    Ok(GadgetInstantiation::assemble(
        tag,
        m_clauses(&base, u1, u2, u3),
        ports,
        template_map(&base, ""),
        vec![simulated],
    ))
}

/// 𝓜̄⁽ⁱ⁾(¬u₁, u₂, u₃), the literal-wise negation of 𝓜⁽ⁱ⁾.
pub fn build_mbar_enforcer(
    alloc: &mut FreshVarAllocator,
    index: usize,
    u1: Var,
    u2: Var,
    u3: Var,
) -> Result<GadgetInstantiation, GadgetError> {
    check_ports(u1, u2, u3)?;
    let tag = format!("Mbar({index})");
    let base = alloc.fresh(tag.clone(), TEMPLATE_VARS);
    let ports = vec![
        port("u1", u1.negative()),
        port("u2", u2.positive()),
        port("u3", u3.positive()),
    ];
    let simulated = Clause::new(ports.iter().map(|p| p.lit).collect());
    Ok(GadgetInstantiation::assemble(
        tag,
        negate_all(m_clauses(&base, u1, u2, u3)),
        ports,
        template_map(&base, ""),
        vec![simulated],
    ))
}

/// The two clauses of 𝓝 that carry ¬u, followed by 𝓕₃ ∪ 𝓖 ∪ 𝓗.
fn n_tail(base: &[Var], u: Var) -> Vec<Clause> {
    let x = |k: &str| tvar(base, k);
    let mut clauses = vec![
        Clause::new(vec![x("x2").negative(), x("x3").negative(), u.negative()]),
        Clause::new(vec![x("x2").negative(), x("x4").negative(), u.negative()]),
    ];
    clauses.extend(body(base));
    clauses
}

/// 𝓝⁽ⁱ⁾(¬u, ¬u): satisfiable exactly when u is false. Contains the single
/// 2-clause {x₁ⁱ, x₂ⁱ}.
pub fn build_n(alloc: &mut FreshVarAllocator, index: usize, u: Var) -> GadgetInstantiation {
    let tag = format!("N({index})");
    let base = alloc.fresh(tag.clone(), TEMPLATE_VARS);
    let mut clauses = vec![Clause::new(vec![
        tvar(&base, "x1").positive(),
        tvar(&base, "x2").positive(),
    ])];
    clauses.extend(n_tail(&base, u));
    GadgetInstantiation::assemble(
        tag,
        clauses,
        vec![port("u", u.negative())],
        template_map(&base, ""),
        vec![Clause::new(vec![u.negative()])],
    )
}

/// 𝓢(v₁, v₂, v₃) (or 𝓢̄ for `Polarity::Negative`): 99 fresh variables, 133
/// monotone 3-clauses, satisfiable exactly when some port literal is true.
/// Ports may coincide.
pub fn build_s(
    alloc: &mut FreshVarAllocator,
    v: [Var; 3],
    polarity: Polarity,
) -> GadgetInstantiation {
    let first = alloc.high_water() + 1;
    let tag = match polarity {
        Polarity::Positive => format!("S@{first}"),
        Polarity::Negative => format!("Sbar@{first}"),
    };
    let bases: Vec<Vec<Var>> = (1..=3)
        .map(|k| alloc.fresh(format!("{tag}.{k}"), TEMPLATE_VARS))
        .collect();
    let u = alloc.fresh(format!("{tag}.u"), 3);
    let x = |k: usize, s: &str| tvar(&bases[k], s);

    let mut clauses: Vec<Clause> = (0..3)
        .map(|k| {
            Clause::new(vec![
                x(k, "x1").positive(),
                x(k, "x2").positive(),
                v[k].positive(),
            ])
        })
        .collect();
    for (base, &w) in bases.iter().zip(&u) {
        clauses.extend(n_tail(base, w));
    }
    clauses.push(Clause::new(u.iter().map(|w| w.positive()).collect()));
    for s in ["x1", "x5", "x6"] {
        clauses.push(Clause::new((0..3).map(|k| x(k, s).positive()).collect()));
    }
    for (k, w) in u.iter().enumerate() {
        clauses.push(Clause::new(vec![
            x(k, "y6").positive(),
            x(k, "z15").positive(),
            w.positive(),
        ]));
    }

    let mut fresh_vars = BTreeMap::new();
    for (k, base) in bases.iter().enumerate() {
        fresh_vars.extend(template_map(base, &format!("^{}", k + 1)));
    }
    for (k, w) in u.iter().enumerate() {
        fresh_vars.insert(format!("u{}", k + 1), *w);
    }

    let sign = polarity == Polarity::Positive;
    let ports = (0..3)
        .map(|k| port(&format!("v{}", k + 1), Lit::new(v[k], sign)))
        .collect::<Vec<_>>();
    let simulated = Clause::new(ports.iter().map(|p| p.lit).collect());
    if !sign {
        clauses = negate_all(clauses);
    }
    GadgetInstantiation::assemble(tag, clauses, ports, fresh_vars, vec![simulated])
}

/// Splits a width-3 clause with exactly one literal of sign `lone` into
/// (lone var, other two vars).
fn split_mixed(index: usize, clause: &Clause, lone: bool) -> Result<(Var, Var, Var), GadgetError> {
    let expected = if lone {
        "one unnegated and two negated literals"
    } else {
        "one negated and two unnegated literals"
    };
    let shape_err = || GadgetError::ClauseShape {
        index,
        clause: clause.to_string(),
        expected,
    };
    if clause.width() != 3 {
        return Err(shape_err());
    }
    let (single, pair): (Vec<Lit>, Vec<Lit>) =
        clause.lits().iter().partition(|l| l.is_positive() == lone);
    match (single.as_slice(), pair.as_slice()) {
        ([a], [b, c]) => Ok((a.var(), b.var(), c.var())),
        _ => Err(shape_err()),
    }
}

const LINKS: [[(usize, &str); 3]; 5] = [
    [(0, "x1"), (0, "x5"), (0, "x6")],
    [(0, "y6"), (0, "z15"), (1, "x1")],
    [(1, "x5"), (1, "x6"), (1, "y6")],
    [(1, "z15"), (2, "x1"), (2, "x5")],
    [(2, "x6"), (2, "y6"), (2, "z15")],
];

fn frak(
    alloc: &mut FreshVarAllocator,
    j: usize,
    triple: &[Clause; 3],
    negated: bool,
) -> Result<GadgetInstantiation, GadgetError> {
    let lone = !negated;
    let parts = triple
        .iter()
        .enumerate()
        .map(|(k, c)| split_mixed(k, c, lone))
        .collect::<Result<Vec<_>, _>>()?;
    for &(u1, u2, u3) in &parts {
        check_ports(u1, u2, u3)?;
    }

    let tag = if negated {
        format!("frakMbar({j})")
    } else {
        format!("frakM({j})")
    };
    let mut clauses = Vec::with_capacity(131);
    let mut fresh_vars = BTreeMap::new();
    let mut bases = Vec::new();
    let mut ports = Vec::new();
    for (k, &(u1, u2, u3)) in parts.iter().enumerate() {
        let i = 3 * j + k;
        let base = alloc.fresh(format!("{tag}.M({i})"), TEMPLATE_VARS);
        clauses.extend(m_clauses(&base, u1, u2, u3));
        fresh_vars.extend(template_map(&base, &format!("^{i}")));
        ports.push(port(&format!("u{}", 3 * k + 1), Lit::new(u1, lone)));
        ports.push(port(&format!("u{}", 3 * k + 2), Lit::new(u2, !lone)));
        ports.push(port(&format!("u{}", 3 * k + 3), Lit::new(u3, !lone)));
        bases.push(base);
    }
    for link in LINKS {
        clauses.push(Clause::new(
            link.iter()
                .map(|&(k, s)| tvar(&bases[k], s).positive())
                .collect(),
        ));
    }
    if negated {
        clauses = negate_all(clauses);
    }
    Ok(GadgetInstantiation::assemble(
        tag,
        clauses,
        ports,
        fresh_vars,
        triple.to_vec(),
    ))
}

/// 𝔐ⱼ: three 𝓜 copies plus five linking clauses replacing three clauses of
/// shape {u, ¬v, ¬w}. Every fresh variable ends up (2,2).
pub fn build_frak_m(
    alloc: &mut FreshVarAllocator,
    j: usize,
    triple: &[Clause; 3],
) -> Result<GadgetInstantiation, GadgetError> {
    frak(alloc, j, triple, false)
}

/// 𝔐̄ⱼ, the negation of 𝔐ⱼ, for three clauses of shape {¬u, v, w}.
pub fn build_frak_mbar(
    alloc: &mut FreshVarAllocator,
    j: usize,
    triple: &[Clause; 3],
) -> Result<GadgetInstantiation, GadgetError> {
    frak(alloc, j, triple, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{occurrence_profile, Assignment, Occurrences};

    fn v(id: u32) -> Var {
        Var::new(id)
    }

    fn external(pairs: &[(u32, bool)]) -> Assignment {
        let mut a = Assignment::new(0);
        for &(id, b) in pairs {
            a.set(v(id), b);
        }
        a
    }

    #[test]
    fn m_enforcer_shape() {
        let mut alloc = FreshVarAllocator::after(3);
        let g = build_m_enforcer(&mut alloc, 1, v(1), v(2), v(3)).unwrap();
        assert_eq!(g.clauses().len(), 42);
        assert_eq!(g.fresh_vars.len(), 32);
        assert!(g.formula.is_monotone());
        let profile = occurrence_profile(&g.formula);
        assert_eq!(profile.get(v(1)), Occurrences::new(1, 0));
        assert_eq!(profile.get(v(2)), Occurrences::new(0, 1));
        assert_eq!(profile.get(v(3)), Occurrences::new(0, 1));
    }

    #[test]
    fn m_enforcer_falsified_port_clause() {
        let mut alloc = FreshVarAllocator::after(3);
        let g = build_m_enforcer(&mut alloc, 1, v(1), v(2), v(3)).unwrap();
        assert!(!g.satisfiable_under(&external(&[(1, false), (2, true), (3, true)])));
        assert!(g.satisfiable_under(&external(&[(1, true), (2, true), (3, true)])));
    }

    #[test]
    fn m_enforcer_rejects_positive_negative_collision() {
        let mut alloc = FreshVarAllocator::after(3);
        assert_eq!(
            build_m_enforcer(&mut alloc, 1, v(1), v(1), v(2)),
            Err(GadgetError::PortCollision { positive: 1 })
        );
    }

    #[test]
    fn m_enforcer_duplicate_negative_port() {
        let mut alloc = FreshVarAllocator::after(2);
        let g = build_m_enforcer(&mut alloc, 1, v(1), v(2), v(2)).unwrap();
        assert_eq!(
            occurrence_profile(&g.formula).get(v(2)),
            Occurrences::new(0, 2)
        );
        assert!(g.truth_table_deviations().is_empty());
    }

    #[test]
    fn n_has_single_two_clause() {
        let mut alloc = FreshVarAllocator::after(1);
        let g = build_n(&mut alloc, 1, v(1));
        let short: Vec<&Clause> = g.clauses().iter().filter(|c| c.width() == 2).collect();
        assert_eq!(short.len(), 1);
        assert_eq!(
            *short[0],
            Clause::new(vec![
                g.fresh("x1").unwrap().positive(),
                g.fresh("x2").unwrap().positive()
            ])
        );
        assert_eq!(g.clauses().len(), 42);
    }

    #[test]
    fn s_sizes_and_balance() {
        let mut alloc = FreshVarAllocator::after(2);
        let g = build_s(&mut alloc, [v(1), v(1), v(2)], Polarity::Positive);
        assert_eq!(g.fresh_vars.len(), 99);
        assert_eq!(g.clauses().len(), 133);
        assert!(g
            .clauses()
            .iter()
            .all(|c| c.width() == 3 && c.is_monotone()));
        let profile = occurrence_profile(&g.formula);
        for w in g.fresh_var_set() {
            assert_eq!(profile.get(w), Occurrences::new(2, 2), "{w}");
        }
        assert_eq!(profile.get(v(1)), Occurrences::new(2, 0));
        assert_eq!(profile.get(v(2)), Occurrences::new(1, 0));
    }

    #[test]
    fn sbar_is_negation() {
        let mut a1 = FreshVarAllocator::after(3);
        let mut a2 = FreshVarAllocator::after(3);
        let s = build_s(&mut a1, [v(1), v(2), v(3)], Polarity::Positive);
        let sb = build_s(&mut a2, [v(1), v(2), v(3)], Polarity::Negative);
        let negated: Vec<Clause> = s.clauses().iter().map(Clause::negated).collect();
        assert_eq!(sb.clauses(), negated.as_slice());
        assert!(sb.ports.iter().all(|p| p.lit.is_negative()));
    }

    #[test]
    fn frak_m_sizes() {
        let mut alloc = FreshVarAllocator::after(9);
        let triple = [
            Clause::from_dimacs(&[1, -2, -3]),
            Clause::from_dimacs(&[4, -5, -6]),
            Clause::from_dimacs(&[7, -8, -9]),
        ];
        let g = build_frak_m(&mut alloc, 0, &triple).unwrap();
        assert_eq!(g.fresh_vars.len(), 96);
        assert_eq!(g.clauses().len(), 131);
        assert!(g.formula.is_monotone());
        let profile = occurrence_profile(&g.formula);
        for w in g.fresh_var_set() {
            assert_eq!(profile.get(w), Occurrences::new(2, 2));
        }
        assert_eq!(g.fresh("x1^0"), Some(v(10)));
        assert_eq!(g.fresh("z15^2"), Some(v(9 + 96)));
    }

    #[test]
    fn frak_m_rejects_wrong_shape() {
        let mut alloc = FreshVarAllocator::after(9);
        let triple = [
            Clause::from_dimacs(&[1, 2, -3]),
            Clause::from_dimacs(&[4, -5, -6]),
            Clause::from_dimacs(&[7, -8, -9]),
        ];
        assert!(matches!(
            build_frak_m(&mut alloc, 0, &triple),
            Err(GadgetError::ClauseShape { index: 0, .. })
        ));
        assert!(build_frak_mbar(&mut alloc, 0, &triple).is_err());
    }
}
