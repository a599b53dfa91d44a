use crate::formula::{Clause, CnfFormula, ValidationReport, Var};
use crate::gadgets::{build_q1mon, build_q3, FreshVarAllocator, QuantifiedBlock};
use crate::reduction::{place_mixed_triples, PlacementError};

use super::{validate_balanced, BalanceSpec, Qbf2Formula, QbfError};

fn placement_error(e: PlacementError) -> QbfError {
    match e {
        PlacementError::Indivisible { shape, count } => QbfError::Indivisible { shape, count },
        PlacementError::Gadget(g) => QbfError::Gadget(g),
    }
}

fn rebuild(
    universals: Vec<Var>,
    existentials: Vec<Var>,
    n_vars: u32,
    clauses: Vec<Clause>,
) -> Qbf2Formula {
    let matrix =
        CnfFormula::from_clauses(n_vars, clauses).expect("transform keeps variables in range");
    Qbf2Formula::new(universals, existentials, matrix)
        .expect("transform keeps the prefix a partition")
}

/// Three variable-disjoint copies; copy c renames v to c·n + v. Universals
/// and existentials are listed copy by copy.
pub fn triple_copy(q: &Qbf2Formula) -> Qbf2Formula {
    let n = q.n_vars();
    let shift = |c: u32| move |v: Var| Var::new(c * n + v.id());
    let mut universals = Vec::new();
    let mut existentials = Vec::new();
    let mut clauses = Vec::new();
    for c in 0..3 {
        universals.extend(q.universals().iter().map(|&v| shift(c)(v)));
        existentials.extend(q.existentials().iter().map(|&v| shift(c)(v)));
        clauses.extend(q.matrix().clauses().iter().map(|cl| cl.map_vars(shift(c))));
    }
    rebuild(universals, existentials, 3 * n, clauses)
}

/// Replaces mixed clauses in triples by 𝔐ⱼ / 𝔐̄ⱼ. All gadget variables are
/// existential.
pub fn monotonize(q: &Qbf2Formula) -> Result<Qbf2Formula, QbfError> {
    let mut alloc = FreshVarAllocator::after(q.n_vars());
    let clauses = q.matrix().clauses();
    let plan = place_mixed_triples(clauses, &mut alloc).map_err(placement_error)?;
    let mut out: Vec<Clause> = plan
        .passthrough
        .iter()
        .map(|&i| clauses[i].clone())
        .collect();
    let mut existentials = q.existentials().to_vec();
    for placed in &plan.gadgets {
        out.extend(placed.gadget.clauses().iter().cloned());
        existentials.extend(placed.gadget.fresh_var_set());
    }
    Ok(rebuild(
        q.universals().to_vec(),
        existentials,
        alloc.high_water(),
        out,
    ))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PadVariant {
    /// Each block nets three extra universals.
    Q3,
    /// Each block nets one extra universal.
    Q1mon,
}

impl PadVariant {
    fn name(self) -> &'static str {
        match self {
            PadVariant::Q3 => "Q3",
            PadVariant::Q1mon => "Q1mon",
        }
    }
}

/// Appends fresh quantified enforcers until |∀| = |∃|.
pub fn pad_to_balance(q: &Qbf2Formula, variant: PadVariant) -> Result<Qbf2Formula, QbfError> {
    let surplus = q.existentials().len() as i64 - q.universals().len() as i64;
    let blocks = match variant {
        PadVariant::Q3 if surplus >= 0 && surplus % 3 == 0 => surplus / 3,
        PadVariant::Q1mon if surplus >= 0 => surplus,
        _ => {
            return Err(QbfError::Surplus {
                surplus,
                variant: variant.name(),
            })
        }
    };
    let mut alloc = FreshVarAllocator::after(q.n_vars());
    let mut universals = q.universals().to_vec();
    let mut existentials = q.existentials().to_vec();
    let mut clauses = q.matrix().clauses().to_vec();
    for _ in 0..blocks {
        let block: QuantifiedBlock = match variant {
            PadVariant::Q3 => build_q3(&mut alloc),
            PadVariant::Q1mon => build_q1mon(&mut alloc),
        };
        universals.extend(block.universals);
        existentials.extend(block.existentials);
        clauses.extend(block.clauses);
    }
    Ok(rebuild(
        universals,
        existentials,
        alloc.high_water(),
        clauses,
    ))
}

/// One named intermediate result of a pipeline.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: &'static str,
    pub formula: Qbf2Formula,
}

fn require(q: &Qbf2Formula, spec: BalanceSpec) -> Result<(), QbfError> {
    let report: ValidationReport = validate_balanced(q, spec);
    if report.verdict() {
        Ok(())
    } else {
        Err(QbfError::Unbalanced(report))
    }
}

fn pipeline(
    q: &Qbf2Formula,
    spec: BalanceSpec,
    variant: PadVariant,
) -> Result<Vec<Stage>, QbfError> {
    require(q, spec)?;
    let tripled = triple_copy(q);
    let mono = monotonize(&tripled)?;
    let padded = pad_to_balance(&mono, variant)?;
    Ok(vec![
        Stage {
            name: "input",
            formula: q.clone(),
        },
        Stage {
            name: "triple-copy",
            formula: tripled,
        },
        Stage {
            name: "monotonize",
            formula: mono,
        },
        Stage {
            name: "pad",
            formula: padded,
        },
    ])
}

/// Balanced (1,1,2,2) to monotone balanced (1,1,2,2), with every stage.
pub fn transform_1122_stages(q: &Qbf2Formula) -> Result<Vec<Stage>, QbfError> {
    pipeline(q, BalanceSpec::B1122, PadVariant::Q3)
}

/// Balanced (2,2,2,2) to monotone balanced (2,2,2,2), with every stage.
pub fn transform_2222_stages(q: &Qbf2Formula) -> Result<Vec<Stage>, QbfError> {
    pipeline(q, BalanceSpec::B2222, PadVariant::Q1mon)
}

pub fn transform_1122(q: &Qbf2Formula) -> Result<Qbf2Formula, QbfError> {
    Ok(transform_1122_stages(q)?
        .pop()
        .expect("non-empty pipeline")
        .formula)
}

pub fn transform_2222(q: &Qbf2Formula) -> Result<Qbf2Formula, QbfError> {
    Ok(transform_2222_stages(q)?
        .pop()
        .expect("non-empty pipeline")
        .formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;
    use crate::gadgets::q3;

    fn vars(ids: &[u32]) -> Vec<Var> {
        ids.iter().map(|&i| Var::new(i)).collect()
    }

    #[test]
    fn triple_copy_sizes() {
        let q = q3();
        let t = triple_copy(&q);
        assert_eq!(t.n_vars(), 21);
        assert_eq!(t.universals().len(), 15);
        assert_eq!(t.existentials().len(), 6);
        assert_eq!(t.matrix().len(), 18);
        assert_eq!(t.universals()[5], Var::new(8));
    }

    #[test]
    fn monotone_matrix_unchanged() {
        let q = q3();
        assert_eq!(monotonize(&q).unwrap(), q);
    }

    #[test]
    fn single_mixed_clause_needs_tripling() {
        let m = CnfFormula::new(
            3,
            vec![Clause::from_dimacs(&[1, -2, -3])],
            Default::default(),
        )
        .unwrap();
        let q = Qbf2Formula::new(vars(&[1]), vars(&[2, 3]), m).unwrap();
        assert_eq!(
            monotonize(&q),
            Err(QbfError::Indivisible {
                shape: "one unnegated and two negated literals",
                count: 1
            })
        );
        let mono = monotonize(&triple_copy(&q)).unwrap();
        assert!(mono.matrix().is_monotone());
        assert_eq!(mono.matrix().len(), 131);
        assert_eq!(mono.existentials().len(), 6 + 96);
    }

    #[test]
    fn padding_arithmetic() {
        let m = CnfFormula::from_dimacs(&[&[1, 2, 3], &[-1, -2, -3], &[4]]);
        let q = Qbf2Formula::new(vars(&[1]), vars(&[2, 3, 4]), m.clone()).unwrap();
        let p3 = pad_to_balance(&q, PadVariant::Q3);
        assert!(p3.is_err());
        let p1 = pad_to_balance(&q, PadVariant::Q1mon).unwrap();
        assert_eq!(p1.universals().len(), 1 + 10);
        assert_eq!(p1.existentials().len(), 3 + 8);

        let m = CnfFormula::from_dimacs(&[&[1, 2, 3]]);
        let q = Qbf2Formula::new(vec![], vars(&[1, 2, 3]), m).unwrap();
        let p = pad_to_balance(&q, PadVariant::Q3).unwrap();
        assert_eq!(p.universals().len(), 5);
        assert_eq!(p.existentials().len(), 5);
        assert_eq!(p.matrix().len(), 7);
    }
}
