//! Naive oracle: every connected bipartite graph of a given order and
//! maximum degree, generated by unconstrained vertex augmentation with
//! canonical deduplication per level. Deliberately free of the prunes and
//! acceptance rules the optimized strategies rely on.

use crate::canon::{canonical_key, Dense};
use crate::graph::BipartiteGraph;
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
struct State {
    n: usize,
    edges: Vec<(usize, usize)>,
    parts: Vec<u8>,
    degs: Vec<u8>,
}

impl State {
    fn dense(&self) -> Dense {
        let mut d = Dense::empty(self.n);
        for &(u, v) in &self.edges {
            d.add_edge(u, v);
        }
        d
    }

    fn key(&self) -> Vec<u8> {
        // Abstract canonical key: the bipartition is a property of the
        // graph, not an extra coloring.
        canonical_key(&self.dense(), &vec![0u32; self.n]).0
    }
}

/// All connected bipartite graphs with exactly `order` vertices and
/// maximum degree at most `delta`, up to isomorphism.
pub(crate) fn all_connected_bipartite(order: usize, delta: usize) -> Vec<BipartiteGraph> {
    let k1 = State {
        n: 1,
        edges: Vec::new(),
        parts: vec![0],
        degs: vec![0],
    };
    if order == 0 {
        return Vec::new();
    }
    let mut level: Vec<State> = vec![k1];
    for _ in 1..order {
        let maps: Vec<BTreeMap<Vec<u8>, State>> = level
            .par_iter()
            .map(|state| {
                let mut local = BTreeMap::new();
                for child in children(state, delta) {
                    local.entry(child.key()).or_insert(child);
                }
                local
            })
            .collect();
        let mut merged: BTreeMap<Vec<u8>, State> = BTreeMap::new();
        for map in maps {
            for (key, state) in map {
                merged.entry(key).or_insert(state);
            }
        }
        level = merged.into_values().collect();
    }
    level
        .iter()
        .map(|s| BipartiteGraph::from_edges(s.n, &s.edges).expect("states stay connected"))
        .collect()
}

/// Every way of attaching one new vertex to a nonempty same-part subset
/// of spare-degree vertices.
fn children(state: &State, delta: usize) -> Vec<State> {
    let mut out = Vec::new();
    for part in 0u8..=1 {
        let eligible: Vec<usize> = (0..state.n)
            .filter(|&v| state.parts[v] == part && (state.degs[v] as usize) < delta)
            .collect();
        let mut subset = Vec::new();
        subsets(&eligible, 0, delta, &mut subset, &mut |chosen| {
            let mut child = state.clone();
            let new = child.n;
            child.n += 1;
            child.parts.push(1 - part);
            child.degs.push(chosen.len() as u8);
            for &v in chosen {
                child.edges.push((v, new));
                child.degs[v] += 1;
            }
            out.push(child);
        });
    }
    out
}

fn subsets(
    eligible: &[usize],
    start: usize,
    max_size: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if !current.is_empty() {
        visit(current);
    }
    if current.len() == max_size {
        return;
    }
    for i in start..eligible.len() {
        current.push(eligible[i]);
        subsets(eligible, i + 1, max_size, current, visit);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts_match_hand_enumeration() {
        // Connected bipartite graphs on 3 vertices with max degree 2:
        // only the path P_3.
        assert_eq!(all_connected_bipartite(3, 2).len(), 1);
        // On 4 vertices with max degree 3: P_4, the claw, the paw-free
        // C_4, and the triangle-free "T" (star with one edge subdivided)
        // is P_4 itself... total: P_4, K_{1,3}, C_4.
        assert_eq!(all_connected_bipartite(4, 3).len(), 3);
        // Max degree 2 on 4 vertices: P_4 and C_4.
        assert_eq!(all_connected_bipartite(4, 2).len(), 2);
    }

    #[test]
    fn five_vertex_trees_and_cycles() {
        // Connected bipartite on 5 vertices, max degree 4: trees (3) plus
        // C_4 with a pendant (1) = ... enumerate and check against a
        // direct edge-set filter.
        let got = all_connected_bipartite(5, 4).len();
        let expected = naive_by_edge_sets(5, 4);
        assert_eq!(got, expected);
        let got6 = all_connected_bipartite(6, 3).len();
        assert_eq!(got6, naive_by_edge_sets(6, 3));
    }

    /// Ground truth by filtering all labeled graphs on n vertices.
    fn naive_by_edge_sets(n: usize, delta: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let mut forms = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let Ok(g) = BipartiteGraph::from_edges(n, &edges) else {
                continue;
            };
            if g.vertices().any(|v| g.degree(v) > delta) {
                continue;
            }
            forms.insert(crate::canon::canonical_form(&g));
        }
        forms.len()
    }
}
