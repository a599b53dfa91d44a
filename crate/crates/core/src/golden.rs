//! Reference clause lists and proofs, stored verbatim in the list form.

use crate::formula::{read_clause_list, CnfFormula};
use crate::sat::RupProof;

pub const M_LIST: &str = include_str!("../data/m_template.txt");
pub const U_LIST: &str = include_str!("../data/u_instance.txt");
pub const Y_CORE_LIST: &str = include_str!("../data/y_core.txt");
pub const Z_CORE_LIST: &str = include_str!("../data/z_core.txt");
pub const Y_CORE_PROOF: &str = include_str!("../data/y_core_proof.txt");
pub const Z_CORE_PROOF: &str = include_str!("../data/z_core_proof.txt");

fn parse(text: &str) -> CnfFormula {
    read_clause_list(text).expect("stored clause lists parse")
}

fn proof(text: &str) -> RupProof {
    RupProof::parse(text).expect("stored proofs parse")
}

/// 𝓜 as a 42-clause list over 32 variables.
pub fn m_template() -> CnfFormula {
    parse(M_LIST)
}

/// 𝓤 as a 264-clause list over 198 variables.
pub fn u_instance() -> CnfFormula {
    parse(U_LIST)
}

pub fn y_core() -> CnfFormula {
    parse(Y_CORE_LIST)
}

pub fn z_core() -> CnfFormula {
    parse(Z_CORE_LIST)
}

pub fn y_core_proof() -> RupProof {
    proof(Y_CORE_PROOF)
}

pub fn z_core_proof() -> RupProof {
    proof(Z_CORE_PROOF)
}

/// Clause lists equal up to whitespace.
pub fn same_list_text(a: &str, b: &str) -> bool {
    let squash = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    squash(a) == squash(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!((m_template().n_vars(), m_template().len()), (32, 42));
        assert_eq!((u_instance().n_vars(), u_instance().len()), (198, 264));
        assert_eq!((y_core().n_vars(), y_core().len()), (9, 13));
        assert_eq!((z_core().n_vars(), z_core().len()), (15, 20));
        assert!(y_core_proof().ends_in_empty_clause());
        assert!(z_core_proof().ends_in_empty_clause());
    }

    #[test]
    fn whitespace_insensitive() {
        assert!(same_list_text("[[1, 2], [-3]]", "[[1,2],\n[-3]]"));
        assert!(!same_list_text("[[1, 2]]", "[[2, 1]]"));
    }
}
