//! Shared state and pruning rules for both generation strategies.
//!
//! A partial state is a set of "points" (the part laid out first) plus a
//! list of completed "columns": vertices of the other part, each stored as
//! a bitmask of its point neighborhood. Column neighborhoods never change
//! after insertion, which is what makes the prunes below exact.

use super::SearchOptions;
use crate::metrics::GraphSpec;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

pub(crate) struct SearchContext {
    pub spec: GraphSpec,
    pub regular: bool,
    pub girth_floor: usize,
    budget: AtomicU64,
    exhausted: AtomicBool,
}

impl SearchContext {
    pub fn new(opts: &SearchOptions, _order: usize, forced: bool) -> Self {
        // Regular hosts of defect < 2Δ cannot carry a cycle shorter than
        // 2D-2 (the Moore-style count would push the defect to 2Δ or
        // more), so bound the girth from below during generation.
        let theorem_floor = if forced && opts.spec.defect < 2 * opts.spec.delta {
            2 * opts.spec.diameter - 2
        } else {
            4
        };
        let girth_floor = theorem_floor.max(opts.girth_floor.unwrap_or(0));
        SearchContext {
            spec: opts.spec,
            regular: forced,
            girth_floor,
            budget: AtomicU64::new(opts.budget),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Burns one unit of budget; false once the cap is hit.
    pub fn spend(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let prev = self.budget.fetch_sub(1, Ordering::Relaxed);
        if prev == 0 || prev == 1 {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }
}

/// A partially built split: `a` points, columns added so far.
#[derive(Debug, Clone)]
pub(crate) struct Partial {
    pub a: usize,
    pub b: usize,
    pub columns: Vec<u64>,
    pub point_deg: Vec<u8>,
    /// For each point, the bitmask of columns containing it.
    pub point_cols: Vec<u64>,
}

impl Partial {
    pub fn root(a: usize, b: usize) -> Self {
        Partial {
            a,
            b,
            columns: Vec::with_capacity(b),
            point_deg: vec![0; a],
            point_cols: vec![0; a],
        }
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn n(&self) -> usize {
        self.a + self.columns.len()
    }

    pub fn push(&self, mask: u64) -> Partial {
        let mut next = self.clone();
        let j = next.columns.len();
        next.columns.push(mask);
        let mut m = mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            next.point_deg[p] += 1;
            next.point_cols[p] |= 1 << j;
        }
        next
    }

    pub fn edge_count(&self) -> usize {
        self.columns.iter().map(|c| c.count_ones() as usize).sum()
    }

    /// Pairwise distances among the current vertices (points first, then
    /// columns), usize::MAX when unreachable.
    pub fn distances(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut dist = vec![vec![usize::MAX; n]; n];
        for start in 0..n {
            let d = &mut dist[start];
            d[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        dist
    }

    fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if u < self.a {
            let mut cols = self.point_cols[u];
            while cols != 0 {
                let j = cols.trailing_zeros() as usize;
                cols &= cols - 1;
                out.push(self.a + j);
            }
        } else {
            let mut pts = self.columns[u - self.a];
            while pts != 0 {
                let p = pts.trailing_zeros() as usize;
                pts &= pts - 1;
                out.push(p);
            }
        }
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (j, &mask) in self.columns.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                m &= m - 1;
                out.push((p, self.a + j));
            }
        }
        out
    }
}

/// All valid next columns for a state, before isomorph rejection. The
/// mask is grown one point (one edge) at a time in ascending order, with
/// the exact girth rule applied incrementally.
pub(crate) fn candidate_columns(ctx: &SearchContext, partial: &Partial) -> Vec<u64> {
    let delta = ctx.spec.delta;
    let a = partial.a;
    // Point-to-point distances in the current graph: a new column through
    // p and q closes a cycle of length dist(p, q) + 2.
    let dist = partial.distances();
    let (min_size, max_size) = if ctx.regular {
        (delta, delta)
    } else {
        (1, delta)
    };
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u64, usize)> = Vec::new(); // (next point, mask, size)
    stack.push((0, 0, 0));
    while let Some((start, mask, size)) = stack.pop() {
        if size >= min_size {
            out.push(mask);
        }
        if size == max_size {
            continue;
        }
        for p in start..a {
            if partial.point_deg[p] as usize >= delta {
                continue;
            }
            // Exact girth maintenance: any new cycle goes through two
            // points of the new column.
            let mut ok = true;
            let mut m = mask;
            while m != 0 {
                let q = m.trailing_zeros() as usize;
                m &= m - 1;
                if dist[p][q].saturating_add(2) < ctx.girth_floor {
                    ok = false;
                    break;
                }
            }
            if ok {
                stack.push((p + 1, mask | (1 << p), size + 1));
            }
        }
    }
    out.retain(|&mask| mask != 0 && column_compatible(ctx, partial, mask));
    out.sort_unstable();
    out
}

/// Fast per-candidate checks that do not need the child graph.
fn column_compatible(ctx: &SearchContext, partial: &Partial, mask: u64) -> bool {
    // Same-part vertices must sit at distance exactly 2 when D <= 3, and
    // column neighborhoods are final: disjoint columns can never be fixed.
    if ctx.spec.diameter <= 3 {
        if partial.columns.iter().any(|&c| c & mask == 0) {
            return false;
        }
    }
    true
}

/// Prunes evaluated on the child state as a whole. All of them are
/// preserved under deleting any single column, which the canonical-path
/// strategy relies on.
pub(crate) fn child_viable(ctx: &SearchContext, child: &Partial) -> bool {
    let delta = ctx.spec.delta;
    let diameter = ctx.spec.diameter;
    let remaining = child.b - child.k();

    // Each future column raises a point degree by at most one.
    if ctx.regular {
        if child
            .point_deg
            .iter()
            .any(|&d| (delta - d as usize) > remaining)
        {
            return false;
        }
        if remaining == 0 && child.point_deg.iter().any(|&d| (d as usize) != delta) {
            return false;
        }
    }

    // Connectivity capacity: every future column contributes at most Δ edges.
    let final_order = child.a + child.b;
    if child.edge_count() + remaining * delta < final_order - 1 {
        return false;
    }

    // Distance-2 coverage for D <= 3: uncovered point pairs each need a
    // future column, and one column covers at most C(Δ,2) pairs.
    if diameter <= 3 {
        let mut uncovered = 0usize;
        for p in 0..child.a {
            for q in p + 1..child.a {
                if child.point_cols[p] & child.point_cols[q] == 0 {
                    uncovered += 1;
                }
            }
        }
        if uncovered > remaining * (delta * (delta - 1) / 2) {
            return false;
        }
    }

    // Optimistic-distance prune: future columns can only shorten distances
    // by joining two points that both still have spare degree. If even
    // with free weight-2 shortcuts between all such pairs some pair sits
    // beyond D, no completion exists. This check is the expensive one, so
    // it runs in the later two thirds of the tree where it can fire.
    if 3 * child.k() >= child.b || remaining == 0 {
        if !optimistic_diameter_ok(ctx, child, remaining) {
            return false;
        }
    }
    true
}

fn optimistic_diameter_ok(ctx: &SearchContext, child: &Partial, remaining: usize) -> bool {
    let n = child.n();
    let delta = ctx.spec.delta;
    let spare: Vec<bool> = (0..child.a)
        .map(|p| (child.point_deg[p] as usize) < delta)
        .collect();
    let shortcuts = remaining > 0;
    // Dijkstra with weights 1 and 2; n is tiny, linear scans suffice.
    for source in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut done = vec![false; n];
        dist[source] = 0;
        loop {
            let mut u = usize::MAX;
            let mut best = usize::MAX;
            for v in 0..n {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for v in neighbors_of(child, u) {
                let nd = dist[u] + 1;
                if nd < dist[v] {
                    dist[v] = nd;
                }
            }
            if shortcuts && u < child.a && spare[u] {
                for v in 0..child.a {
                    if v != u && spare[v] {
                        let nd = dist[u] + 2;
                        if nd < dist[v] {
                            dist[v] = nd;
                        }
                    }
                }
            }
        }
        if dist.iter().any(|&d| d > ctx.spec.diameter) {
            return false;
        }
    }
    true
}

fn neighbors_of(partial: &Partial, u: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if u < partial.a {
        let mut cols = partial.point_cols[u];
        while cols != 0 {
            let j = cols.trailing_zeros() as usize;
            cols &= cols - 1;
            out.push(partial.a + j);
        }
    } else {
        let mut pts = partial.columns[u - partial.a];
        while pts != 0 {
            let p = pts.trailing_zeros() as usize;
            pts &= pts - 1;
            out.push(p);
        }
    }
    out
}

/// Builds the certified graph for a completed state, if it is connected.
pub(crate) fn realize(partial: &Partial) -> Option<crate::graph::BipartiteGraph> {
    crate::graph::BipartiteGraph::from_edges(partial.n(), &partial.edges()).ok()
}
