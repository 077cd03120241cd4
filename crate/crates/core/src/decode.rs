//! Greedy decoding and repair. One fixed code path shared by every strategy.

use crate::graph::{Graph, NodeId};

/// Identifies the decode/repair rules; stamped into every run record.
pub const OPERATOR_VERSION: &str = "greedy-desc-x/repair-max-degree/v1";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeSet {
    members: Vec<NodeId>,
}

impl NodeSet {
    pub fn from_members(mut members: Vec<NodeId>) -> Self {
        members.sort_unstable();
        members.dedup();
        NodeSet { members }
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    fn indicator(&self, n: usize) -> Vec<bool> {
        let mut ind = vec![false; n];
        for &v in &self.members {
            ind[v] = true;
        }
        ind
    }
}

/// True when no edge has both endpoints in `set`; scans every edge.
pub fn is_independent(set: &NodeSet, graph: &Graph) -> bool {
    let ind = set.indicator(graph.node_count());
    graph.edges().iter().all(|&(i, j)| !(ind[i] && ind[j]))
}

/// Visit nodes by descending `x` (ties: lower index first) and keep each node
/// that has no kept neighbor.
pub fn greedy_decode(x: &[f64], graph: &Graph) -> NodeSet {
    let mut order: Vec<NodeId> = (0..graph.node_count()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
    let mut taken = vec![false; graph.node_count()];
    let mut blocked = vec![false; graph.node_count()];
    for v in order {
        if blocked[v] {
            continue;
        }
        taken[v] = true;
        for &w in graph.neighbors(v) {
            blocked[w] = true;
        }
    }
    NodeSet {
        members: (0..graph.node_count()).filter(|&v| taken[v]).collect(),
    }
}

/// Scans edges in id order; for each edge still fully inside the set, drops the
/// endpoint of higher degree (ties: higher index).
pub fn repair_and_validate(set: &NodeSet, graph: &Graph) -> NodeSet {
    let mut ind = set.indicator(graph.node_count());
    for &(i, j) in graph.edges() {
        if ind[i] && ind[j] {
            let victim = if graph.degree(i) > graph.degree(j) { i } else { j };
            ind[victim] = false;
        }
    }
    let out = NodeSet {
        members: set.members.iter().copied().filter(|&v| ind[v]).collect(),
    };
    debug_assert!(is_independent(&out, graph));
    out
}

/// Anytime legal set: decode a copy of `x`, then repair.
pub fn legal_set(x: &[f64], graph: &Graph) -> NodeSet {
    repair_and_validate(&greedy_decode(x, graph), graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn decode_triangle() {
        assert_eq!(greedy_decode(&[0.9, 0.8, 0.1], &triangle()).members(), &[0]);
    }

    #[test]
    fn decode_edgeless_takes_all() {
        let g = Graph::empty(5);
        assert_eq!(greedy_decode(&[0.1, 0.0, 0.3, 0.9, 0.2], &g).size(), 5);
    }

    #[test]
    fn decode_is_score_driven_not_optimal() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(greedy_decode(&[0.9, 0.95, 0.9], &g).members(), &[1]);
    }

    #[test]
    fn decode_ties_prefer_lower_index() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(greedy_decode(&[0.5, 0.5], &g).members(), &[0]);
    }

    #[test]
    fn repair_is_noop_on_independent_sets() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = NodeSet::from_members(vec![0, 2]);
        assert_eq!(repair_and_validate(&s, &g), s);
    }

    #[test]
    fn repair_tie_removes_higher_index() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let out = repair_and_validate(&NodeSet::from_members(vec![0, 1]), &g);
        assert_eq!(out.members(), &[0]);
    }

    #[test]
    fn repair_prefers_dropping_high_degree() {
        // star: center 0 has degree 3
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let out = repair_and_validate(&NodeSet::from_members(vec![0, 1, 2, 3]), &g);
        assert_eq!(out.members(), &[1, 2, 3]);
    }

    #[test]
    fn repair_full_triangle_leaves_singleton() {
        let g = triangle();
        let out = repair_and_validate(&NodeSet::from_members(vec![0, 1, 2]), &g);
        assert_eq!(out.size(), 1);
        assert!(is_independent(&out, &g));
    }
}
