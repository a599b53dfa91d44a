//! Constructors for the named clause sets: the 𝓜 template and its parts,
//! the enforcers built from it, the unsatisfiable instance 𝓤, and the small
//! fixed sets used alongside them.

mod alloc;
mod enforcers;
mod instances;
mod quantified;
mod templates;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Assignment, Clause, CnfFormula, Lit, Var};
use crate::sat;

pub use alloc::{AllocatedBlock, FreshVarAllocator};
pub use enforcers::{
    build_frak_m, build_frak_mbar, build_m_enforcer, build_mbar_enforcer, build_n, build_s,
};
pub use instances::{build_core8, build_u, build_u_nae, U_PORTS};
pub use quantified::{build_q1mon, build_q3, q1mon, q3, QuantifiedBlock};
pub use templates::{
    build_f2, build_f3, build_g, build_h, build_m, build_y_core, build_z_core, template_id,
    template_symbol, DEFICIT_VARS, TEMPLATE_VARS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("port {positive} occurs both unnegated and negated")]
    PortCollision { positive: u32 },
    #[error("clause {index} ({clause}) is not of the shape {expected}")]
    ClauseShape {
        index: usize,
        clause: String,
        expected: &'static str,
    },
    #[error("block `{tag}` at {first}..+{len} overlaps `{other}`")]
    RangeOverlap {
        tag: String,
        first: u32,
        len: u32,
        other: String,
    },
}

/// A named external literal of a gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Port {
    pub name: String,
    pub lit: Lit,
}

/// One placed copy of a gadget: its clauses over fresh variables and ports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstantiation {
    pub formula: CnfFormula,
    pub ports: Vec<Port>,
    pub fresh_vars: BTreeMap<String, Var>,
    pub tag: String,
    /// The clauses over port literals this gadget stands in for.
    pub simulates: Vec<Clause>,
}

impl GadgetInstantiation {
    pub(crate) fn assemble(
        tag: String,
        clauses: Vec<Clause>,
        ports: Vec<Port>,
        fresh_vars: BTreeMap<String, Var>,
        simulates: Vec<Clause>,
    ) -> GadgetInstantiation {
        let n_vars = clauses
            .iter()
            .flat_map(Clause::lits)
            .map(|l| l.var().id())
            .chain(ports.iter().map(|p| p.lit.var().id()))
            .max()
            .unwrap_or(0);
        let symbols = fresh_vars.iter().map(|(s, v)| (*v, s.clone())).collect();
        let formula = CnfFormula::from_clauses(n_vars, clauses)
            .expect("gadget clauses stay within their own variables")
            .with_symbols(symbols);
        GadgetInstantiation {
            formula,
            ports,
            fresh_vars,
            tag,
            simulates,
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        self.formula.clauses()
    }

    pub fn fresh(&self, symbol: &str) -> Option<Var> {
        self.fresh_vars.get(symbol).copied()
    }

    pub fn fresh_var_set(&self) -> BTreeSet<Var> {
        self.fresh_vars.values().copied().collect()
    }

    pub fn port_vars(&self) -> BTreeSet<Var> {
        self.ports.iter().map(|p| p.lit.var()).collect()
    }

    /// Whether the gadget has a model extending the given values of its
    /// port variables.
    pub fn satisfiable_under(&self, external: &Assignment) -> bool {
        let pinned = self.formula.with_units(external);
        sat::is_satisfiable(&pinned).expect("gadget instances are far below the conflict budget")
    }

    /// Whether `external` satisfies every simulated clause.
    pub fn simulated_holds(&self, external: &Assignment) -> bool {
        self.simulates
            .iter()
            .all(|c| c.eval(external) == Some(true))
    }

    /// Port assignments on which satisfiability of the gadget and of the
    /// simulated clauses disagree. Empty for a faithful enforcer.
    pub fn truth_table_deviations(&self) -> Vec<Assignment> {
        let ports: Vec<Var> = self.port_vars().into_iter().collect();
        let mut deviations = Vec::new();
        for bits in 0..1u64 << ports.len() {
            let mut external = Assignment::new(self.formula.n_vars());
            for (k, &v) in ports.iter().enumerate() {
                external.set(v, bits >> k & 1 == 1);
            }
            if self.satisfiable_under(&external) != self.simulated_holds(&external) {
                deviations.push(external);
            }
        }
        deviations
    }
}

/// Maps template ids (1-based) onto `base` and keeps literal signs.
pub(crate) fn instantiate(template: &[&[i32]], base: &[Var]) -> Vec<Clause> {
    template
        .iter()
        .map(|c| {
            c.iter()
                .map(|&l| Lit::new(base[l.unsigned_abs() as usize - 1], l > 0))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instantiate_maps_ids() {
        let base = [Var::new(10), Var::new(20), Var::new(30)];
        let out = instantiate(&[&[1, -3], &[-2]], &base);
        assert_eq!(
            out,
            vec![Clause::from_dimacs(&[10, -30]), Clause::from_dimacs(&[-20])]
        );
    }
}
