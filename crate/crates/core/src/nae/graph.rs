use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::formula::{CnfFormula, Var};

use super::NaeError;

/// Co-occurrence graph on the variables that appear in a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableGraph {
    adj: BTreeMap<Var, BTreeSet<Var>>,
}

impl VariableGraph {
    pub fn new() -> VariableGraph {
        VariableGraph::default()
    }

    pub fn add_vertex(&mut self, v: Var) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: Var, v: Var) {
        if u == v {
            self.add_vertex(u);
            return;
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn vertices(&self) -> impl Iterator<Item = Var> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Var) -> impl Iterator<Item = Var> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: Var) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Var, v: Var) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    /// Edges with the smaller endpoint first, in order.
    pub fn edges(&self) -> Vec<(Var, Var)> {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    /// One `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Var>> {
        self.components_avoiding(&BTreeSet::new())
    }

    fn components_avoiding(&self, removed: &BTreeSet<Var>) -> Vec<Vec<Var>> {
        let mut seen: BTreeSet<Var> = removed.clone();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.insert(v) {
                let mut comp = vec![v];
                let mut queue = VecDeque::from([v]);
                while let Some(u) = queue.pop_front() {
                    for w in self.neighbors(u) {
                        if seen.insert(w) {
                            comp.push(w);
                            queue.push_back(w);
                        }
                    }
                }
                comp.sort();
                out.push(comp);
            }
        }
        out
    }

    fn induced(&self, vertices: &[Var]) -> VariableGraph {
        let keep: BTreeSet<Var> = vertices.iter().copied().collect();
        let mut g = VariableGraph::new();
        for &v in vertices {
            g.add_vertex(v);
            for w in self.neighbors(v).filter(|w| keep.contains(w)) {
                g.add_edge(v, w);
            }
        }
        g
    }

    fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.adj.values().all(|s| s.len() + 1 == n)
    }
}

pub fn variable_graph(f: &CnfFormula) -> VariableGraph {
    let mut g = VariableGraph::new();
    for clause in f.clauses() {
        let vars = clause.vars();
        for (i, &u) in vars.iter().enumerate() {
            g.add_vertex(u);
            for &v in &vars[i + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Components isomorphic to K_k.
pub fn complete_component_check(g: &VariableGraph, k: usize) -> Vec<Vec<Var>> {
    g.components()
        .into_iter()
        .filter(|c| c.len() == k && c.iter().all(|&v| g.degree(v) + 1 == k))
        .collect()
}

/// A colour in 0..4 for every vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coloring {
    colors: BTreeMap<Var, u8>,
}

impl Coloring {
    pub fn get(&self, v: Var) -> Option<u8> {
        self.colors.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u8)> + '_ {
        self.colors.iter().map(|(&v, &c)| (v, c))
    }

    pub fn colors_used(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    /// Every vertex coloured and no edge monochromatic.
    pub fn is_proper(&self, g: &VariableGraph) -> bool {
        g.vertices().all(|v| self.colors.contains_key(&v))
            && g.edges()
                .iter()
                .all(|&(u, v)| self.colors[&u] != self.colors[&v])
    }
}

const COLORS: u8 = 4;

/// Proper colouring with at most four colours of a graph with maximum
/// degree at most 4 and no K5 component.
pub fn four_coloring(g: &VariableGraph) -> Result<Coloring, NaeError> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) > COLORS as usize) {
        return Err(NaeError::DegreeTooHigh {
            var: v.id(),
            degree: g.degree(v),
        });
    }
    let mut coloring = Coloring::default();
    for comp in g.components() {
        let sub = g.induced(&comp);
        if comp.len() > COLORS as usize && sub.is_complete() {
            return Err(NaeError::CompleteComponent {
                vertices: comp.iter().map(|v| v.id()).collect(),
            });
        }
        color_component(&sub, &mut coloring.colors)?;
    }
    Ok(coloring)
}

fn color_component(g: &VariableGraph, colors: &mut BTreeMap<Var, u8>) -> Result<(), NaeError> {
    if let Some(root) = g.vertices().find(|&v| g.degree(v) < COLORS as usize) {
        return greedy_from(g, root, &BTreeSet::new(), colors);
    }
    // 4-regular from here on.
    if let Some(cut) = g
        .vertices()
        .find(|&c| g.components_avoiding(&BTreeSet::from([c])).len() > 1)
    {
        let removed = BTreeSet::from([cut]);
        for part in g.components_avoiding(&removed) {
            let mut vertices = part;
            vertices.push(cut);
            let piece = g.induced(&vertices);
            let mut local = BTreeMap::new();
            greedy_from(&piece, cut, &BTreeSet::new(), &mut local)?;
            let shift = local[&cut];
            for (v, c) in local {
                colors.insert(v, (c + COLORS - shift) % COLORS);
            }
        }
        return Ok(());
    }
    let (v, a, b) = brooks_triple(g).ok_or_else(|| {
        NaeError::ColoringFailed(format!(
            "no Brooks vertex in the 4-regular component containing {}",
            g.vertices().next().map_or(0, Var::id)
        ))
    })?;
    colors.insert(a, 0);
    colors.insert(b, 0);
    greedy_from(g, v, &BTreeSet::from([a, b]), colors)
}

/// A vertex with two non-adjacent neighbours whose removal leaves the graph
/// connected.
fn brooks_triple(g: &VariableGraph) -> Option<(Var, Var, Var)> {
    for v in g.vertices() {
        let ns: Vec<Var> = g.neighbors(v).collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !g.has_edge(a, b) && g.components_avoiding(&BTreeSet::from([a, b])).len() == 1 {
                    return Some((v, a, b));
                }
            }
        }
    }
    None
}

/// Colours the vertices reachable from `root` outside `skip`, farthest
/// from the root first, so each vertex but the root still has an
/// uncoloured neighbour when its turn comes.
fn greedy_from(
    g: &VariableGraph,
    root: Var,
    skip: &BTreeSet<Var>,
    colors: &mut BTreeMap<Var, u8>,
) -> Result<(), NaeError> {
    let mut order = vec![root];
    let mut seen: BTreeSet<Var> = skip.clone();
    seen.insert(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for w in g.neighbors(u) {
            if seen.insert(w) {
                order.push(w);
            }
        }
    }
    for &v in order.iter().rev() {
        let used: BTreeSet<u8> = g
            .neighbors(v)
            .filter_map(|w| colors.get(&w).copied())
            .collect();
        let c = (0..COLORS).find(|c| !used.contains(c)).ok_or_else(|| {
            NaeError::ColoringFailed(format!("vertex {v} sees all {COLORS} colours"))
        })?;
        colors.insert(v, c);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(edges: &[(u32, u32)]) -> VariableGraph {
        let mut g = VariableGraph::new();
        for &(u, v) in edges {
            g.add_edge(Var::new(u), Var::new(v));
        }
        g
    }

    fn cycle(n: u32) -> VariableGraph {
        graph(&(1..=n).map(|i| (i, i % n + 1)).collect::<Vec<_>>())
    }

    fn complete(n: u32) -> VariableGraph {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                edges.push((u, v));
            }
        }
        graph(&edges)
    }

    #[test]
    fn triangle_from_one_clause() {
        let g = variable_graph(&CnfFormula::from_dimacs(&[&[1, 2, 3]]));
        assert_eq!(g.edge_count(), 3);
        assert_eq!(complete_component_check(&g, 3).len(), 1);
    }

    #[test]
    fn disjoint_clauses_give_two_triangles() {
        let g = variable_graph(&CnfFormula::from_dimacs(&[&[1, 2, 3], &[4, 5, 6]]));
        assert_eq!(g.components().len(), 2);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn six_cycle_two_colors() {
        let g = cycle(6);
        let c = four_coloring(&g).unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(c.colors_used(), 2);
        assert!(complete_component_check(&g, 7).is_empty());
    }

    #[test]
    fn triangle_three_colors() {
        let g = complete(3);
        let c = four_coloring(&g).unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(c.colors_used(), 3);
    }

    #[test]
    fn k5_rejected() {
        assert!(matches!(
            four_coloring(&complete(5)),
            Err(NaeError::CompleteComponent { .. })
        ));
    }

    #[test]
    fn high_degree_rejected() {
        let g = graph(&[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]);
        assert!(matches!(
            four_coloring(&g),
            Err(NaeError::DegreeTooHigh { var: 1, degree: 5 })
        ));
    }

    #[test]
    fn four_regular_cases() {
        // Square of an 8-cycle: 4-regular, 3-connected.
        let mut edges = Vec::new();
        for i in 0..8u32 {
            edges.push((i + 1, (i + 1) % 8 + 1));
            edges.push((i + 1, (i + 2) % 8 + 1));
        }
        let g = graph(&edges);
        assert!(g.vertices().all(|v| g.degree(v) == 4));
        let c = four_coloring(&g).unwrap();
        assert!(c.is_proper(&g));

        // Two copies of K5 minus an edge, both endpoints of the missing
        // edge joined to vertex 1: 4-regular with 1 as a cut vertex.
        let mut edges = Vec::new();
        for block in [[2u32, 3, 4, 5, 6], [7, 8, 9, 10, 11]] {
            for (i, &u) in block.iter().enumerate() {
                for &v in &block[i + 1..] {
                    if (u, v) != (block[0], block[1]) {
                        edges.push((u, v));
                    }
                }
            }
            edges.push((1, block[0]));
            edges.push((1, block[1]));
        }
        let g = graph(&edges);
        let c = four_coloring(&g).unwrap();
        assert!(c.is_proper(&g));
    }

    fn random_graph(n: u32, pairs: &[(u32, u32)]) -> VariableGraph {
        let mut g = VariableGraph::new();
        for v in 1..=n {
            g.add_vertex(Var::new(v));
        }
        for &(a, b) in pairs {
            let (u, v) = (Var::new(a % n + 1), Var::new(b % n + 1));
            if u != v && g.degree(u) < 4 && g.degree(v) < 4 {
                g.add_edge(u, v);
            }
        }
        g
    }

    proptest! {
        #[test]
        fn bounded_degree_graphs_get_proper_colorings(
            n in 2u32..30,
            pairs in prop::collection::vec((0u32..30, 0u32..30), 0..80),
        ) {
            let g = random_graph(n, &pairs);
            match four_coloring(&g) {
                Ok(c) => prop_assert!(c.is_proper(&g)),
                Err(NaeError::CompleteComponent { vertices }) => prop_assert_eq!(vertices.len(), 5),
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }
}
