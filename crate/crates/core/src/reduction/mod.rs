//! Reductions into Monotone 3-SAT-(2,2): from the `*` dialect by replacing
//! clauses with a duplicated variable by 𝓢 / 𝓢̄, and from 3-SAT-(2,2) by
//! tripling the instance and replacing mixed clauses three at a time with
//! 𝔐ⱼ / 𝔐̄ⱼ.

use serde::Serialize;
use thiserror::Error;

use crate::formula::{validate_class, Clause, CnfFormula, ProblemClass, ValidationReport, Var};
use crate::gadgets::{
    build_frak_m, build_frak_mbar, build_s, FreshVarAllocator, GadgetError, GadgetInstantiation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("input is not in the source class:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("{count} mixed clauses with {shape}; need a multiple of 3")]
    Indivisible { shape: &'static str, count: usize },
    #[error("gadget: {0}")]
    Gadget(#[from] GadgetError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SourceClass {
    Star22,
    ThreeSat22,
}

impl std::str::FromStr for SourceClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "star22" | "mono3satstar22" => Ok(SourceClass::Star22),
            "3sat22" | "threesat22" => Ok(SourceClass::ThreeSat22),
            other => Err(format!("unknown source class `{other}`")),
        }
    }
}

/// A clause of the input, in one of the copies (always 0 for `*` inputs).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceRef {
    pub clause: usize,
    pub copy: u32,
}

/// Where an output clause came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Source(SourceRef),
    Gadget {
        tag: String,
        replaces: Vec<SourceRef>,
    },
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionStats {
    pub vars_added: u32,
    pub clauses_added: i64,
    pub enforcers_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutput {
    pub formula: CnfFormula,
    /// One entry per output clause, in order.
    pub provenance: Vec<Provenance>,
    pub stats: ReductionStats,
}

impl ReductionOutput {
    fn finish(
        input: &CnfFormula,
        n_vars: u32,
        parts: Vec<(Clause, Provenance)>,
        enforcers: usize,
    ) -> ReductionOutput {
        let (clauses, provenance): (Vec<Clause>, Vec<Provenance>) = parts.into_iter().unzip();
        let formula =
            CnfFormula::from_clauses(n_vars, clauses).expect("output variables are allocated");
        let stats = ReductionStats {
            vars_added: n_vars - input.n_vars(),
            clauses_added: formula.len() as i64 - input.len() as i64,
            enforcers_used: enforcers,
        };
        ReductionOutput {
            formula,
            provenance,
            stats,
        }
    }
}

fn require(f: &CnfFormula, class: ProblemClass) -> Result<(), ReductionError> {
    let report = validate_class(f, class);
    if report.verdict() {
        Ok(())
    } else {
        Err(ReductionError::InvalidInput(report))
    }
}

/// Replaces each clause that repeats a variable, (p ∨ p ∨ q) or its negated
/// form, by a fresh 𝓢(p, p, q) or 𝓢̄(¬p, ¬p, ¬q). Other clauses come first,
/// unchanged.
pub fn reduce_star22_to_mono22(f: &CnfFormula) -> Result<ReductionOutput, ReductionError> {
    require(f, ProblemClass::Mono3SatStar22)?;
    let mut alloc = FreshVarAllocator::after(f.n_vars());
    let mut parts = Vec::new();
    let mut gadgets = Vec::new();
    for (i, clause) in f.clauses().iter().enumerate() {
        let src = SourceRef { clause: i, copy: 0 };
        if !clause.has_repeated_var() {
            parts.push((clause.clone(), Provenance::Source(src)));
            continue;
        }
        let vars = clause.lits().iter().map(|l| l.var()).collect::<Vec<_>>();
        let polarity = clause.polarity().expect("validated monotone");
        let g = build_s(&mut alloc, [vars[0], vars[1], vars[2]], polarity);
        gadgets.push((g, src));
    }
    let enforcers = gadgets.len();
    for (g, src) in gadgets {
        let prov = Provenance::Gadget {
            tag: g.tag.clone(),
            replaces: vec![src],
        };
        parts.extend(g.clauses().iter().map(|c| (c.clone(), prov.clone())));
    }
    let out = ReductionOutput::finish(f, alloc.high_water(), parts, enforcers);
    debug_assert!(validate_class(&out.formula, ProblemClass::Mono3Sat22).verdict());
    Ok(out)
}

/// Takes three variable-disjoint copies (copy c maps v to c·n + v), keeps
/// the monotone clauses and replaces the mixed ones, three copies of the
/// same source clause at a time, by 𝔐ⱼ or 𝔐̄ⱼ.
pub fn reduce_3sat22_to_mono22(f: &CnfFormula) -> Result<ReductionOutput, ReductionError> {
    require(f, ProblemClass::ThreeSat22)?;
    let n = f.n_vars();
    let m = f.len();
    let mut tripled = Vec::with_capacity(3 * m);
    for c in 0..3u32 {
        tripled.extend(
            f.clauses()
                .iter()
                .map(|cl| cl.map_vars(|v| Var::new(c * n + v.id()))),
        );
    }
    let src = |i: usize| SourceRef {
        clause: i % m,
        copy: (i / m) as u32,
    };

    let mut alloc = FreshVarAllocator::after(3 * n);
    let plan = place_mixed_triples(&tripled, &mut alloc).map_err(PlacementError::into_reduction)?;
    let mut parts: Vec<(Clause, Provenance)> = plan
        .passthrough
        .iter()
        .map(|&i| (tripled[i].clone(), Provenance::Source(src(i))))
        .collect();
    let enforcers = plan.gadgets.len();
    for placed in plan.gadgets {
        let prov = Provenance::Gadget {
            tag: placed.gadget.tag.clone(),
            replaces: placed.sources.iter().map(|&i| src(i)).collect(),
        };
        parts.extend(
            placed
                .gadget
                .clauses()
                .iter()
                .map(|c| (c.clone(), prov.clone())),
        );
    }
    let out = ReductionOutput::finish(f, alloc.high_water(), parts, enforcers);
    debug_assert!(validate_class(&out.formula, ProblemClass::Mono3Sat22).verdict());
    Ok(out)
}

pub(crate) const SHAPE_ONE_POSITIVE: &str = "one unnegated and two negated literals";
pub(crate) const SHAPE_ONE_NEGATIVE: &str = "one negated and two unnegated literals";

#[derive(Debug)]
pub(crate) enum PlacementError {
    Indivisible { shape: &'static str, count: usize },
    Gadget(GadgetError),
}

impl PlacementError {
    fn into_reduction(self) -> ReductionError {
        match self {
            PlacementError::Indivisible { shape, count } => {
                ReductionError::Indivisible { shape, count }
            }
            PlacementError::Gadget(g) => ReductionError::Gadget(g),
        }
    }
}

pub(crate) struct PlacedGadget {
    /// Indices of the replaced clauses.
    pub sources: [usize; 3],
    pub gadget: GadgetInstantiation,
}

pub(crate) struct Placement {
    /// Indices of monotone clauses, in order.
    pub passthrough: Vec<usize>,
    /// Gadgets ordered by their first replaced clause.
    pub gadgets: Vec<PlacedGadget>,
}

/// Splits `clauses` into monotone ones and triples of mixed ones. Each
/// shape's list is cut into thirds and the k-th members of the thirds form
/// a triple; after tripling an instance these are the three copies of one
/// source clause.
pub(crate) fn place_mixed_triples(
    clauses: &[Clause],
    alloc: &mut FreshVarAllocator,
) -> Result<Placement, PlacementError> {
    let mut passthrough = Vec::new();
    let mut one_pos = Vec::new();
    let mut one_neg = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        if c.polarity().is_some() {
            passthrough.push(i);
        } else if c.positive_count() == 1 {
            one_pos.push(i);
        } else if c.negative_count() == 1 {
            one_neg.push(i);
        } else {
            return Err(PlacementError::Gadget(GadgetError::ClauseShape {
                index: i,
                clause: c.to_string(),
                expected: "a mixed 3-clause",
            }));
        }
    }

    let mut triples: Vec<([usize; 3], bool)> = Vec::new();
    for (list, shape, negated) in [
        (&one_pos, SHAPE_ONE_POSITIVE, false),
        (&one_neg, SHAPE_ONE_NEGATIVE, true),
    ] {
        if list.len() % 3 != 0 {
            return Err(PlacementError::Indivisible {
                shape,
                count: list.len(),
            });
        }
        let k = list.len() / 3;
        triples.extend((0..k).map(|t| ([list[t], list[t + k], list[t + 2 * k]], negated)));
    }
    triples.sort_by_key(|(idx, _)| idx[0]);

    let mut gadgets = Vec::with_capacity(triples.len());
    for (j, (idx, negated)) in triples.into_iter().enumerate() {
        let triple = [
            clauses[idx[0]].clone(),
            clauses[idx[1]].clone(),
            clauses[idx[2]].clone(),
        ];
        let gadget = if negated {
            build_frak_mbar(alloc, j, &triple)
        } else {
            build_frak_m(alloc, j, &triple)
        }
        .map_err(PlacementError::Gadget)?;
        gadgets.push(PlacedGadget {
            sources: idx,
            gadget,
        });
    }
    Ok(Placement {
        passthrough,
        gadgets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Dialect, Rule};

    fn mono_instance() -> CnfFormula {
        CnfFormula::from_dimacs(&[
            &[1, 2, 3],
            &[1, 4, 5],
            &[2, 4, 6],
            &[3, 5, 6],
            &[-1, -2, -3],
            &[-1, -4, -5],
            &[-2, -4, -6],
            &[-3, -5, -6],
        ])
    }

    #[test]
    fn star_without_duplicates_is_identity() {
        let f = mono_instance();
        let out = reduce_star22_to_mono22(&f).unwrap();
        assert_eq!(out.formula, f);
        assert_eq!(out.stats.enforcers_used, 0);
    }

    #[test]
    fn star_duplicate_becomes_s_block() {
        let f = CnfFormula::new(
            3,
            vec![
                Clause::from_dimacs(&[1, 1, 2]),
                Clause::from_dimacs(&[-1, -1, -2]),
                Clause::from_dimacs(&[2, 3, 3]),
                Clause::from_dimacs(&[-2, -3, -3]),
            ],
            Dialect::Star,
        )
        .unwrap();
        let out = reduce_star22_to_mono22(&f).unwrap();
        assert_eq!(out.stats.enforcers_used, 4);
        assert_eq!(out.stats.vars_added, 4 * 99);
        assert_eq!(out.formula.len(), 4 * 133);
        assert_eq!(out.provenance.len(), out.formula.len());
        let report = validate_class(&out.formula, ProblemClass::Mono3Sat22);
        assert!(report.verdict(), "{report}");
    }

    #[test]
    fn monotone_3sat22_is_tripled() {
        let f = mono_instance();
        let out = reduce_3sat22_to_mono22(&f).unwrap();
        assert_eq!(out.formula.n_vars(), 18);
        assert_eq!(out.formula.len(), 24);
        assert_eq!(out.stats.enforcers_used, 0);
        assert_eq!(
            out.provenance[8],
            Provenance::Source(SourceRef { clause: 0, copy: 1 })
        );
    }

    #[test]
    fn invalid_input_rejected() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3]]);
        match reduce_3sat22_to_mono22(&f) {
            Err(ReductionError::InvalidInput(r)) => assert!(r.has(Rule::Balance)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixed_clause_triple_replaced() {
        // (2,2)-balanced with one mixed clause of each shape.
        let f = CnfFormula::from_dimacs(&[
            &[1, -2, -3],
            &[-1, 2, 3],
            &[1, 4, 5],
            &[-1, -4, -5],
            &[2, 4, 6],
            &[-2, -4, -6],
            &[3, 5, 6],
            &[-3, -5, -6],
        ]);
        assert!(validate_class(&f, ProblemClass::ThreeSat22).verdict());
        let out = reduce_3sat22_to_mono22(&f).unwrap();
        assert_eq!(out.stats.enforcers_used, 2);
        assert_eq!(out.stats.vars_added, 2 * 96 + 12);
        let report = validate_class(&out.formula, ProblemClass::Mono3Sat22);
        assert!(report.verdict(), "{report}");
        match &out.provenance[out.formula.len() - 1] {
            Provenance::Gadget { tag, replaces } => {
                assert_eq!(tag, "frakMbar(1)");
                assert_eq!(
                    replaces.iter().map(|s| s.copy).collect::<Vec<_>>(),
                    vec![0, 1, 2]
                );
                assert!(replaces.iter().all(|s| s.clause == 1));
            }
            other => panic!("{other:?}"),
        }
    }
}
