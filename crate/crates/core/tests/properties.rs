use monoforge::formula::{
    read_clause_list, read_dimacs, validate_class, write_clause_list, write_dimacs, CnfFormula,
    ProblemClass,
};
use monoforge::generate::{random_3sat22, random_mono22, random_nae_e2, seeded_rng};
use monoforge::nae::{is_nae_satisfied, nae_solve_e2};
use monoforge::reduction::reduce_3sat22_to_mono22;
use monoforge::sat::{count_models, solve, verify_rup, RupCheck, RupProof, SolveResult};
use proptest::prelude::*;

fn brute_count(f: &CnfFormula) -> u64 {
    let clauses = f.to_dimacs();
    (0..1u64 << f.n_vars())
        .filter(|bits| {
            clauses.iter().all(|c| {
                c.iter()
                    .any(|&l| ((bits >> (l.unsigned_abs() - 1)) & 1 == 1) == (l > 0))
            })
        })
        .count() as u64
}

fn small_cnf() -> impl Strategy<Value = CnfFormula> {
    (3u32..=10).prop_flat_map(|n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        prop::collection::vec(prop::collection::vec(lit, 1..=3), 1..=5 * n as usize).prop_map(
            move |clauses| {
                let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
                CnfFormula::from_dimacs(&refs).with_n_vars(n).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_agrees_with_enumeration(f in small_cnf()) {
        let truth = brute_count(&f);
        match solve(&f, true).unwrap() {
            SolveResult::Sat(model) => {
                prop_assert!(truth > 0);
                prop_assert!(f.is_satisfied_by(&model));
            }
            SolveResult::Unsat(trace) => {
                prop_assert_eq!(truth, 0);
                let proof = RupProof::parse(&trace.unwrap().to_drup()).unwrap();
                prop_assert_eq!(verify_rup(&f, &proof), RupCheck::Verified);
            }
        }
        prop_assert_eq!(count_models(&f, u64::MAX).count, truth);
    }

    #[test]
    fn text_formats_round_trip(f in small_cnf()) {
        let from_dimacs = read_dimacs(&write_dimacs(&f)).unwrap();
        prop_assert_eq!(from_dimacs.clauses(), f.clauses());
        let from_list = read_clause_list(&write_clause_list(&f)).unwrap();
        prop_assert_eq!(from_list.clauses(), f.clauses());
    }

    #[test]
    fn reduction_preserves_satisfiability(seed in 0u64..500, k in 1u32..=3) {
        let src = random_3sat22(3 * k, &mut seeded_rng(seed)).unwrap();
        let out = reduce_3sat22_to_mono22(&src).unwrap();
        prop_assert!(validate_class(&out.formula, ProblemClass::Mono3Sat22).verdict());
        prop_assert_eq!(out.provenance.len(), out.formula.len());
        prop_assert_eq!(solve(&out.formula, false).unwrap().is_sat(), brute_count(&src) > 0);
    }

    #[test]
    fn nae_solver_is_sound(seed in any::<u64>(), k in 1u32..=30) {
        let f = random_nae_e2(3 * k, &mut seeded_rng(seed)).unwrap();
        let a = nae_solve_e2(&f).unwrap();
        prop_assert!(is_nae_satisfied(&f, &a).unwrap());
    }

    #[test]
    fn generated_mono22_is_valid(seed in any::<u64>(), k in 2u32..=12) {
        let f = random_mono22(3 * k, &mut seeded_rng(seed)).unwrap();
        prop_assert!(validate_class(&f, ProblemClass::Mono3Sat22).verdict());
        prop_assert_eq!(f.len() as u32, 4 * k);
    }
}
