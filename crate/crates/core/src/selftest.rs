//! Replays the published facts about every gadget and instance and reports
//! each as a pass/fail row.

use std::fmt;
use std::time::{Duration, Instant};

use crate::formula::{
    occurrence_profile, simplify_under, validate_class, write_clause_list, Assignment, Clause,
    CnfFormula, Occurrences, Polarity, ProblemClass, Rule, Var,
};
use crate::gadgets::{
    build_core8, build_f2, build_f3, build_frak_m, build_g, build_h, build_m, build_m_enforcer,
    build_n, build_s, build_u, build_u_nae, build_y_core, build_z_core, q1mon, q3, template_id,
    template_symbol, FreshVarAllocator, GadgetInstantiation, DEFICIT_VARS,
};
use crate::generate::{random_3sat22, random_balanced_qbf, random_star22, seeded_rng};
use crate::golden;
use crate::nae::{complete_component_check, is_nae_satisfied, strip_trivial_pairs, variable_graph};
use crate::qbf::{
    monotonize, pad_to_balance, qbf_truth, transform_1122, transform_2222, triple_copy,
    validate_balanced, BalanceSpec, PadVariant, Qbf2Formula,
};
use crate::reduction::{reduce_3sat22_to_mono22, reduce_star22_to_mono22, Provenance, SourceRef};
use crate::sat::{count_models, is_satisfiable, verify_rup};

#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub claim: &'static str,
    pub outcome: Result<(), String>,
    pub elapsed: Duration,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self.elapsed.as_secs_f64() * 1e3;
        match &self.outcome {
            Ok(()) => write!(f, "PASS  {:<64} {ms:>9.1} ms", self.claim),
            Err(why) => write!(f, "FAIL  {:<64} {ms:>9.1} ms  ({why})", self.claim),
        }
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn unsat(f: &CnfFormula) -> Check {
    match is_satisfiable(f) {
        Some(false) => Ok(()),
        Some(true) => Err("solver found a model".into()),
        None => Err("solver ran out of budget".into()),
    }
}

fn same_clauses(a: &CnfFormula, b: &CnfFormula) -> Check {
    let (a, b) = (a.canonicalize(), b.canonicalize());
    ensure(a.n_vars() == b.n_vars(), || {
        format!("{} vs {} variables", a.n_vars(), b.n_vars())
    })?;
    ensure(a.len() == b.len(), || {
        format!("{} vs {} clauses", a.len(), b.len())
    })?;
    match a
        .clauses()
        .iter()
        .zip(b.clauses())
        .position(|(x, y)| x != y)
    {
        None => Ok(()),
        Some(i) => Err(format!(
            "clause {i}: {} vs {}",
            a.clauses()[i],
            b.clauses()[i]
        )),
    }
}

fn sorted_clauses(f: &CnfFormula) -> Vec<Clause> {
    let mut v = f.canonicalize().clauses().to_vec();
    v.sort();
    v
}

fn v(symbol: &str) -> Var {
    Var::new(template_id(symbol).expect("template symbol"))
}

fn deviations(g: &GadgetInstantiation) -> Check {
    let d = g.truth_table_deviations();
    ensure(d.is_empty(), || {
        format!("{} port assignments disagree", d.len())
    })
}

fn profile_is(f: &CnfFormula, vars: impl IntoIterator<Item = Var>, want: Occurrences) -> Check {
    let p = occurrence_profile(f);
    for x in vars {
        let got = p.get(x);
        ensure(got == want, || {
            format!("variable {x} appears ({}, {})", got.pos, got.neg)
        })?;
    }
    Ok(())
}

fn external(pairs: &[(Var, bool)]) -> Assignment {
    let mut a = Assignment::new(0);
    for &(x, b) in pairs {
        a.set(x, b);
    }
    a
}

fn m_shape() -> Check {
    let m = build_m();
    ensure(m.len() == 42 && m.n_vars() == 32, || {
        format!("{} clauses, {} variables", m.len(), m.n_vars())
    })
}

fn m_deficit() -> Check {
    let m = build_m();
    let deficit: Vec<Var> = DEFICIT_VARS.iter().map(|&i| Var::new(i)).collect();
    let names: Vec<String> = deficit.iter().map(|x| template_symbol(x.id())).collect();
    ensure(names == ["x1", "x5", "x6", "y6", "z15"], || {
        format!("deficit set {names:?}")
    })?;
    profile_is(&m, deficit.iter().copied(), Occurrences::new(1, 2))?;
    profile_is(
        &m,
        (1..=32).map(Var::new).filter(|x| !deficit.contains(x)),
        Occurrences::new(2, 2),
    )
}

fn m_invalid_class() -> Check {
    let r = validate_class(&build_m(), ProblemClass::Mono3Sat22);
    ensure(r.has(Rule::Width) && r.has(Rule::Balance), || {
        format!("report: {r}")
    })
}

fn f2_items() -> Check {
    let want = CnfFormula::from_dimacs(&[&[1, 2], &[-2, -3], &[-2, -4]]);
    same_clauses(&build_f2(), &want.with_n_vars(32).expect("widening"))
}

fn f_propagation() -> Check {
    let mut clauses = build_f2().clauses().to_vec();
    clauses.extend(build_f3().clauses().iter().cloned());
    let f = CnfFormula::from_clauses(32, clauses).expect("template range");
    let s = simplify_under(&f, &external(&[(v("x1"), false)]));
    ensure(!s.conflict, || "conflict".into())?;
    let got = [v("x2"), v("x3"), v("x4")].map(|x| s.assignment.get(x));
    ensure(got == [Some(true), Some(false), Some(false)], || {
        format!("forced {got:?}")
    })
}

fn g_first_item() -> Check {
    let g = build_g();
    let first = Clause::new(vec![
        v("x3").positive(),
        v("y1").positive(),
        v("y2").positive(),
    ]);
    ensure(g.len() == 13 && g.clauses()[0] == first, || {
        format!("{} clauses, first {}", g.len(), g.clauses()[0])
    })
}

fn h_last_item() -> Check {
    let h = build_h();
    let last = Clause::new(vec![
        v("z12").negative(),
        v("z13").negative(),
        v("z15").negative(),
    ]);
    let got = h.clauses().last().cloned().unwrap_or_else(Clause::empty);
    ensure(h.len() == 18 && got == last, || {
        format!("{} clauses, last {got}", h.len())
    })
}

fn g_restricts_to_y_core() -> Check {
    let g = build_g();
    let s = simplify_under(&g, &external(&[(v("x3"), false), (v("x4"), false)]));
    let renamed: Vec<Clause> = s
        .formula
        .clauses()
        .iter()
        .map(|c| c.map_vars(|x| Var::new(x.id() - 8)))
        .collect();
    let renamed = CnfFormula::from_clauses(9, renamed).map_err(|e| e.to_string())?;
    ensure(
        sorted_clauses(&renamed) == sorted_clauses(&golden::y_core()),
        || format!("restriction gives {}", write_clause_list(&renamed)),
    )
}

fn unsat_core_claim(
    f: CnfFormula,
    built: CnfFormula,
    proof: crate::sat::RupProof,
    vars: u32,
    clauses: usize,
) -> Check {
    ensure(f.n_vars() == vars && f.len() == clauses, || {
        format!("{} clauses over {}", f.len(), f.n_vars())
    })?;
    same_clauses(&built, &f)?;
    unsat(&f)?;
    let models = count_models(&f, 1);
    ensure(models.count == 0, || format!("{} models", models.count))?;
    let check = verify_rup(&f, &proof);
    ensure(check.is_verified(), || format!("{check:?}"))
}

fn m_enforcer_table() -> Check {
    let mut alloc = FreshVarAllocator::after(3);
    let g = build_m_enforcer(&mut alloc, 1, Var::new(1), Var::new(2), Var::new(3))
        .map_err(|e| e.to_string())?;
    deviations(&g)?;
    let falsified = external(&[
        (Var::new(1), false),
        (Var::new(2), true),
        (Var::new(3), true),
    ]);
    ensure(!g.satisfiable_under(&falsified), || {
        "(F,T,T) is satisfiable".into()
    })?;
    let fresh = g.formula.clone();
    let p = occurrence_profile(&fresh);
    let mut short: Vec<&str> = g
        .fresh_vars
        .iter()
        .filter(|(_, &x)| p.get(x) == Occurrences::new(1, 2))
        .map(|(s, _)| s.as_str())
        .collect();
    short.sort();
    ensure(short == ["x1", "x5", "x6", "y6", "z15"], || {
        format!("(1,2) variables {short:?}")
    })
}

fn n_enforcer() -> Check {
    let u = Var::new(1);
    let g = build_n(&mut FreshVarAllocator::after(1), 1, u);
    deviations(&g)?;
    ensure(!g.satisfiable_under(&external(&[(u, true)])), || {
        "u = T is satisfiable".into()
    })?;
    let short: Vec<&Clause> = g.clauses().iter().filter(|c| c.width() == 2).collect();
    let want = Clause::new(vec![
        g.fresh("x1").expect("x1").positive(),
        g.fresh("x2").expect("x2").positive(),
    ]);
    ensure(short == [&want], || format!("2-clauses {short:?}"))
}

fn s_enforcer() -> Check {
    let ports = [Var::new(1), Var::new(2), Var::new(3)];
    let g = build_s(&mut FreshVarAllocator::after(3), ports, Polarity::Positive);
    ensure(g.fresh_vars.len() == 99 && g.clauses().len() == 133, || {
        format!(
            "{} fresh variables, {} clauses",
            g.fresh_vars.len(),
            g.clauses().len()
        )
    })?;
    deviations(&g)?;
    let all_false = external(&[(ports[0], false), (ports[1], false), (ports[2], false)]);
    ensure(!g.satisfiable_under(&all_false), || {
        "all-false ports satisfiable".into()
    })?;
    let one_true = external(&[(ports[0], true), (ports[1], false), (ports[2], false)]);
    ensure(g.satisfiable_under(&one_true), || {
        "v1 = T unsatisfiable".into()
    })
}

fn frak_m_enforcer() -> Check {
    let triple = [
        Clause::from_dimacs(&[1, -2, -3]),
        Clause::from_dimacs(&[4, -5, -6]),
        Clause::from_dimacs(&[7, -8, -9]),
    ];
    let g =
        build_frak_m(&mut FreshVarAllocator::after(9), 0, &triple).map_err(|e| e.to_string())?;
    ensure(g.fresh_vars.len() == 96, || {
        format!("{} fresh variables", g.fresh_vars.len())
    })?;
    profile_is(&g.formula, g.fresh_var_set(), Occurrences::new(2, 2))?;
    let falsify_first = external(&[
        (Var::new(1), false),
        (Var::new(2), true),
        (Var::new(3), true),
    ]);
    ensure(!g.satisfiable_under(&falsify_first), || {
        "falsified triple satisfiable".into()
    })?;
    deviations(&g)
}

fn core8() -> Check {
    let f = build_core8();
    let third = Clause::from_dimacs(&[5, -2, -2]);
    ensure(f.len() == 8 && f.n_vars() == 6, || {
        format!("{} clauses, {} variables", f.len(), f.n_vars())
    })?;
    ensure(f.clauses()[2] == third, || {
        format!("third clause {}", f.clauses()[2])
    })?;
    let models = count_models(&f, u64::MAX);
    ensure(models.count == 0, || format!("{} models", models.count))
}

fn u_instance() -> Check {
    let u = build_u();
    ensure(u.n_vars() == 198 && u.len() == 264, || {
        format!("{} variables, {} clauses", u.n_vars(), u.len())
    })?;
    let r = validate_class(&u, ProblemClass::Mono3Sat22);
    ensure(r.verdict(), || format!("{r}"))?;
    same_clauses(&u, &golden::u_instance())?;
    ensure(
        golden::same_list_text(&write_clause_list(&u), golden::U_LIST),
        || "list text differs from the reference".into(),
    )?;
    unsat(&u)
}

fn m_golden() -> Check {
    same_clauses(&build_m(), &golden::m_template())?;
    unsat(&build_m())
}

fn u_nae() -> Check {
    let f = build_u_nae();
    let g = variable_graph(&f);
    ensure(complete_component_check(&g, 7).len() == 1, || {
        "variable graph is not K7".into()
    })?;
    profile_is(&f, (1..=7).map(Var::new), Occurrences::new(3, 0))?;
    for bits in 0..1u64 << 7 {
        let a = Assignment::from_bits(7, bits);
        ensure(
            !is_nae_satisfied(&f, &a).map_err(|e| e.to_string())?,
            || format!("nae-model {bits:07b}"),
        )?;
    }
    Ok(())
}

fn strip_pair() -> Check {
    let f = CnfFormula::from_dimacs(&[&[1, 2, 3], &[1, 2, 3]]);
    let s = strip_trivial_pairs(&f);
    ensure(s.formula.is_empty() && s.pairs.len() == 1, || {
        format!("{} left, {} pairs", s.formula.len(), s.pairs.len())
    })
}

fn quantified(q: Qbf2Formula) -> Check {
    let t = qbf_truth(&q).map_err(|e| e.to_string())?;
    ensure(t.is_yes(), || format!("{t:?}"))
}

fn q1mon_counts() -> Check {
    let q = q1mon();
    let occ = validate_balanced(&q, BalanceSpec::B2222.without_equal_counts().monotone());
    ensure(occ.verdict(), || format!("{occ}"))?;
    let with = validate_balanced(&q, BalanceSpec::B2222);
    ensure(with.has(Rule::Quantifiers), || {
        "equal counts unexpectedly hold".into()
    })?;
    ensure(
        q.universals().len() == 5 && q.existentials().len() == 4,
        || {
            format!(
                "{} universals, {} existentials",
                q.universals().len(),
                q.existentials().len()
            )
        },
    )
}

fn star_reduction_block() -> Check {
    let f = random_star22(6, &mut seeded_rng(3)).map_err(|e| e.to_string())?;
    let repeated = f.clauses().iter().filter(|c| c.has_repeated_var()).count();
    ensure(repeated > 0, || "sample has no repeated variable".into())?;
    let out = reduce_star22_to_mono22(&f).map_err(|e| e.to_string())?;
    ensure(
        out.formula.len() == f.len() - repeated + 133 * repeated,
        || {
            format!(
                "{} output clauses for {repeated} replaced",
                out.formula.len()
            )
        },
    )?;
    ensure(out.stats.vars_added as usize == 99 * repeated, || {
        format!("{} variables added", out.stats.vars_added)
    })?;
    let r = validate_class(&out.formula, ProblemClass::Mono3Sat22);
    ensure(r.verdict(), || format!("{r}"))
}

fn tripled_reduction_matching() -> Check {
    let f = random_3sat22(6, &mut seeded_rng(5)).map_err(|e| e.to_string())?;
    let mixed: Vec<usize> = (0..f.len())
        .filter(|&i| !f.clauses()[i].is_monotone())
        .collect();
    let out = reduce_3sat22_to_mono22(&f).map_err(|e| e.to_string())?;
    ensure(out.stats.enforcers_used == mixed.len(), || {
        format!("{} enforcers", out.stats.enforcers_used)
    })?;
    for p in &out.provenance {
        if let Provenance::Gadget { replaces, .. } = p {
            let same_source = replaces.len() == 3
                && replaces.iter().zip(0..).all(|(r, c)| {
                    *r == SourceRef {
                        clause: replaces[0].clause,
                        copy: c,
                    }
                });
            ensure(same_source, || format!("gadget replaces {replaces:?}"))?;
        }
    }
    let r = validate_class(&out.formula, ProblemClass::Mono3Sat22);
    ensure(r.verdict(), || format!("{r}"))
}

fn one_mixed_qbf() -> Qbf2Formula {
    let m = CnfFormula::from_dimacs(&[&[1, -2, -3], &[4, 5, 6]]);
    let vars = |ids: &[u32]| ids.iter().map(|&i| Var::new(i)).collect::<Vec<_>>();
    Qbf2Formula::new(vars(&[1, 4, 5]), vars(&[2, 3, 6]), m).expect("partition")
}

fn qbf_monotonize_triple() -> Check {
    let t = triple_copy(&one_mixed_qbf());
    let mixed = t
        .matrix()
        .clauses()
        .iter()
        .filter(|c| !c.is_monotone())
        .count();
    ensure(mixed % 3 == 0, || format!("{mixed} mixed clauses"))?;
    let m = monotonize(&t).map_err(|e| e.to_string())?;
    ensure(m.matrix().is_monotone(), || "matrix still mixed".into())?;
    ensure(
        m.existentials().len() == t.existentials().len() + 96,
        || format!("{} existentials", m.existentials().len()),
    )
}

fn qbf_padding() -> Check {
    let m = monotonize(&triple_copy(&one_mixed_qbf())).map_err(|e| e.to_string())?;
    let surplus = m.existentials().len() - m.universals().len();
    ensure(surplus == 96, || format!("surplus {surplus}"))?;
    let padded = pad_to_balance(&m, PadVariant::Q3).map_err(|e| e.to_string())?;
    let blocks = (padded.matrix().len() - m.matrix().len()) / 6;
    ensure(blocks == 32, || format!("{blocks} Q3 blocks"))?;
    ensure(
        padded.universals().len() == padded.existentials().len(),
        || "unequal blocks".into(),
    )?;

    let vars = |ids: &[u32]| ids.iter().map(|&i| Var::new(i)).collect::<Vec<_>>();
    let q = Qbf2Formula::new(
        vars(&[1]),
        vars(&[2, 3]),
        CnfFormula::from_dimacs(&[&[1, 2], &[3]]),
    )
    .expect("partition");
    let padded = pad_to_balance(&q, PadVariant::Q1mon).map_err(|e| e.to_string())?;
    ensure(
        padded.matrix().len() == q.matrix().len() + q1mon().matrix().len(),
        || "expected one Q1mon".into(),
    )
}

fn transforms() -> Check {
    let mut rng = seeded_rng(9);
    let q = random_balanced_qbf(2, BalanceSpec::B1122, &mut rng).map_err(|e| e.to_string())?;
    let out = transform_1122(&q).map_err(|e| e.to_string())?;
    let r = validate_balanced(&out, BalanceSpec::B1122.monotone());
    ensure(r.verdict(), || format!("{r}"))?;
    let q = random_balanced_qbf(3, BalanceSpec::B2222, &mut rng).map_err(|e| e.to_string())?;
    let out = transform_2222(&q).map_err(|e| e.to_string())?;
    let r = validate_balanced(&out, BalanceSpec::B2222.monotone());
    ensure(r.verdict(), || format!("{r}"))
}

type Claim = (&'static str, fn() -> Check);

const CLAIMS: &[Claim] = &[
    ("F2 is {x1,x2},{-x2,-x3},{-x2,-x4}", f2_items),
    (
        "F2 and F3 with x1 = F force x2 = T, x3 = F, x4 = F",
        f_propagation,
    ),
    ("G has 13 clauses, the first {x3,y1,y2}", g_first_item),
    ("H has 18 clauses, the last {-z12,-z13,-z15}", h_last_item),
    (
        "G with x3 = x4 = F is the 13-clause set over Y1..Y9",
        g_restricts_to_y_core,
    ),
    (
        "Y1..Y9 set: unsatisfiable, 0 models, stored RUP proof checks",
        || {
            unsat_core_claim(
                golden::y_core(),
                build_y_core(),
                golden::y_core_proof(),
                9,
                13,
            )
        },
    ),
    (
        "Z1..Z15 set: unsatisfiable, 0 models, stored RUP proof checks",
        || {
            unsat_core_claim(
                golden::z_core(),
                build_z_core(),
                golden::z_core_proof(),
                15,
                20,
            )
        },
    ),
    ("M has 42 clauses over 32 variables", m_shape),
    (
        "M matches the reference list and is unsatisfiable",
        m_golden,
    ),
    (
        "M: exactly x1, x5, x6, y6, z15 appear (1,2), the rest (2,2)",
        m_deficit,
    ),
    ("M is not Monotone 3-SAT-(2,2)", m_invalid_class),
    (
        "M(i) enforces {u1,-u2,-u3}; its (1,2) variables are the five",
        m_enforcer_table,
    ),
    (
        "N(i) enforces -u and has the single 2-clause {x1,x2}",
        n_enforcer,
    ),
    (
        "S has 99 new variables and 133 clauses and enforces {v1,v2,v3}",
        s_enforcer,
    ),
    (
        "frak-M has 96 new (2,2) variables and enforces its three clauses",
        frak_m_enforcer,
    ),
    (
        "core8: 8 clauses, 6 variables, third (e,-b,-b), 0 models",
        core8,
    ),
    (
        "U: 198 variables, 264 clauses, (2,2), matches list, unsatisfiable",
        u_instance,
    ),
    ("U_NAE: K7 variable graph, thrice each, no nae-model", u_nae),
    ("NAE: a duplicated clause pair is stripped", strip_pair),
    ("Q3 is a yes-instance", || quantified(q3())),
    ("Q1mon is a yes-instance", || quantified(q1mon())),
    (
        "Q1mon: all (2,2), 5 universals against 4 existentials",
        q1mon_counts,
    ),
    (
        "star reduction replaces (p,p,q) by a 99-var, 133-clause block",
        star_reduction_block,
    ),
    (
        "3-SAT-(2,2) reduction: one frak-M per mixed clause and its copies",
        tripled_reduction_matching,
    ),
    (
        "tripled mixed clauses divide by 3 and monotonize adds 96 each",
        qbf_monotonize_triple,
    ),
    (
        "padding: surplus 96 takes 32 Q3 blocks, surplus 1 one Q1mon",
        qbf_padding,
    ),
    (
        "(1,1,2,2) and (2,2,2,2) transforms give monotone balanced output",
        transforms,
    ),
];

pub fn run_selftest() -> Vec<ClaimResult> {
    CLAIMS
        .iter()
        .map(|&(claim, check)| {
            let start = Instant::now();
            let outcome = check();
            ClaimResult {
                claim,
                outcome,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_claim_passes() {
        let failed: Vec<String> = run_selftest()
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.to_string())
            .collect();
        assert!(failed.is_empty(), "{}", failed.join("\n"));
    }
}
