//! The fixed clause groups behind the 𝓜 enforcer, numbered
//! x₁..x₈ → 1..8, y₁..y₉ → 9..17, z₁..z₁₅ → 18..32.

use std::collections::BTreeMap;

use crate::formula::{Clause, CnfFormula, Var};

pub const TEMPLATE_VARS: u32 = 32;

/// x₁, x₅, x₆, y₆, z₁₅: the template variables that occur once unnegated and
/// twice negated in 𝓜.
pub const DEFICIT_VARS: [u32; 5] = [1, 5, 6, 14, 32];

pub(crate) const F2: [&[i32]; 3] = [&[1, 2], &[-2, -3], &[-2, -4]];

pub(crate) const F3: [&[i32]; 8] = [
    &[-3, -5, -6],
    &[-4, -5, -6],
    &[5, 7, 8],
    &[6, 7, 8],
    &[-7, -18, -19],
    &[-7, -20, -21],
    &[-8, -18, -19],
    &[-8, -20, -21],
];

pub(crate) const G: [&[i32]; 13] = [
    &[3, 9, 10],
    &[3, 11, 12],
    &[4, 13, 14],
    &[4, 15, 16],
    &[9, 12, 15],
    &[10, 13, 17],
    &[11, 16, 17],
    &[-9, -13, -16],
    &[-9, -14, -17],
    &[-10, -11, -14],
    &[-10, -12, -16],
    &[-11, -13, -15],
    &[-12, -15, -17],
];

/// Numbered order: the two clauses on ¬x₁, then {x₂,z₇,z₁₅}, then the rest.
pub(crate) const H: [&[i32]; 18] = [
    &[-1, -22, -23],
    &[-1, -24, -25],
    &[2, 24, 32],
    &[18, 23, 25],
    &[18, 28, 29],
    &[19, 23, 25],
    &[19, 28, 29],
    &[20, 22, 26],
    &[20, 30, 31],
    &[21, 22, 31],
    &[21, 26, 27],
    &[24, 27, 30],
    &[-22, -25, -32],
    &[-23, -24, -26],
    &[-26, -28, -30],
    &[-27, -28, -31],
    &[-27, -29, -31],
    &[-29, -30, -32],
];

/// Order in which 𝓗 is listed inside 𝓜: unnegated clauses first.
pub(crate) const H_ORDER_IN_M: [usize; 18] =
    [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 0, 1, 12, 13, 14, 15, 16, 17];

/// `x3`, `y6`, `z15` and so on.
pub fn template_symbol(id: u32) -> String {
    match id {
        1..=8 => format!("x{id}"),
        9..=17 => format!("y{}", id - 8),
        18..=32 => format!("z{}", id - 17),
        _ => panic!("template id {id} out of range"),
    }
}

/// Inverse of [`template_symbol`].
pub fn template_id(symbol: &str) -> Option<u32> {
    let (head, tail) = symbol.split_at(symbol.char_indices().nth(1)?.0);
    let k: u32 = tail.parse().ok()?;
    match (head, k) {
        ("x", 1..=8) => Some(k),
        ("y", 1..=9) => Some(k + 8),
        ("z", 1..=15) => Some(k + 17),
        _ => None,
    }
}

fn template_symbols() -> BTreeMap<Var, String> {
    (1..=TEMPLATE_VARS)
        .map(|id| (Var::new(id), template_symbol(id)))
        .collect()
}

fn template_formula(groups: &[&[&[i32]]]) -> CnfFormula {
    let clauses = groups
        .iter()
        .flat_map(|g| g.iter())
        .map(|c| Clause::from_dimacs(c))
        .collect();
    CnfFormula::from_clauses(TEMPLATE_VARS, clauses)
        .expect("template ids are within range")
        .with_symbols(template_symbols())
}

pub(crate) fn h_in_m_order() -> Vec<&'static [i32]> {
    H_ORDER_IN_M.iter().map(|&i| H[i]).collect()
}

pub fn build_f2() -> CnfFormula {
    template_formula(&[&F2])
}

pub fn build_f3() -> CnfFormula {
    template_formula(&[&F3])
}

pub fn build_g() -> CnfFormula {
    template_formula(&[&G])
}

pub fn build_h() -> CnfFormula {
    template_formula(&[&H])
}

/// The unsatisfiable 42-clause set 𝓜 = 𝓕₂ ∪ 𝓕₃ ∪ 𝓖 ∪ 𝓗.
pub fn build_m() -> CnfFormula {
    template_formula(&[&F2, &F3, &G, &h_in_m_order()])
}

/// 𝓖 with x₃ = x₄ = F and y_k renamed to k: thirteen clauses over nine
/// variables, unsatisfiable.
pub fn build_y_core() -> CnfFormula {
    let clauses: Vec<Clause> = G
        .iter()
        .map(|c| {
            c.iter()
                .filter(|&&l| l.abs() > 4)
                .map(|&l| l.signum() * (l.abs() - 8))
                .collect::<Vec<i32>>()
        })
        .map(|c| Clause::from_dimacs(&c))
        .collect();
    CnfFormula::from_clauses(9, clauses).expect("y ids are 1..=9")
}

/// The 2-clauses forced on z by the first two gadgets together with the
/// rest of 𝓗, z_k renamed to k: twenty clauses, unsatisfiable.
pub fn build_z_core() -> CnfFormula {
    let inferred: [&[i32]; 5] = [&[-1, -2], &[-3, -4], &[-5, -6], &[-7, -8], &[7, 15]];
    let rest = H[3..].iter().map(|c| {
        c.iter()
            .map(|&l| l.signum() * (l.abs() - 17))
            .collect::<Vec<i32>>()
    });
    let clauses: Vec<Clause> = inferred
        .iter()
        .map(|c| c.to_vec())
        .chain(rest)
        .map(|c| Clause::from_dimacs(&c))
        .collect();
    CnfFormula::from_clauses(15, clauses).expect("z ids are 1..=15")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{occurrence_profile, Occurrences};

    #[test]
    fn group_sizes() {
        assert_eq!(build_f2().len(), 3);
        assert_eq!(build_f3().len(), 8);
        assert_eq!(build_g().len(), 13);
        assert_eq!(build_h().len(), 18);
        assert_eq!(build_m().len(), 42);
    }

    #[test]
    fn first_and_last_items() {
        assert_eq!(
            build_f2().to_dimacs(),
            vec![vec![1, 2], vec![-2, -3], vec![-2, -4]]
        );
        assert_eq!(build_g().clauses()[0], Clause::from_dimacs(&[3, 9, 10]));
        assert_eq!(
            build_h().clauses()[17],
            Clause::from_dimacs(&[-29, -30, -32])
        );
        assert_eq!(template_symbol(32), "z15");
        assert_eq!(template_symbol(14), "y6");
    }

    #[test]
    fn symbol_roundtrip() {
        for id in 1..=TEMPLATE_VARS {
            assert_eq!(template_id(&template_symbol(id)), Some(id));
        }
        assert_eq!(template_id("x9"), None);
        assert_eq!(template_id("w1"), None);
        assert_eq!(template_id("x"), None);
    }

    #[test]
    fn deficit_variables_of_m() {
        let profile = occurrence_profile(&build_m());
        let short: Vec<u32> = profile
            .iter()
            .filter(|&(_, o)| o != Occurrences::new(2, 2))
            .map(|(v, o)| {
                assert_eq!(o, Occurrences::new(1, 2));
                v.id()
            })
            .collect();
        assert_eq!(short, DEFICIT_VARS.to_vec());
    }

    #[test]
    fn every_literal_at_most_twice() {
        let profile = occurrence_profile(&build_m());
        assert!(profile.iter().all(|(_, o)| o.pos <= 2 && o.neg <= 2));
    }
}
