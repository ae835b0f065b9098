//! Canonical-construction-path vertex augmentation (the default strategy).
//!
//! States are labeled partial graphs; children are generated one per
//! Aut(parent)-orbit of candidate columns, and a child survives only when
//! the column just added lies in the automorphism orbit of the child's
//! canonical deletion column. Each isomorphism class of reachable states
//! is therefore visited exactly once, with no global seen-set.

use super::context::{candidate_columns, child_viable, realize, Partial, SearchContext};
use super::io::CheckpointHandle;
use super::{SearchError, SearchOptions};
use crate::canon::{canonize, orbits, Dense};
use crate::graph::BipartiteGraph;
use crate::graph6;
use crate::metrics::check_spec;
use rayon::prelude::*;

pub(crate) fn run_split(
    ctx: &SearchContext,
    opts: &SearchOptions,
    a: usize,
    b: usize,
) -> Result<Vec<BipartiteGraph>, SearchError> {
    let root = Partial::root(a, b);
    let root_gens = state_generators(&root);

    // Expand a shallow frontier sequentially, then fan the subtrees out to
    // the worker pool. Results merge in frontier order, so the member
    // multiset is independent of the job count.
    let depth = frontier_depth(b);
    let mut frontier: Vec<(Partial, Vec<Vec<usize>>)> = vec![(root, root_gens)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (state, gens) in &frontier {
            if state.k() == state.b {
                next.push((state.clone(), gens.clone()));
                continue;
            }
            expand_accepted(ctx, state, gens, &mut |child, child_gens| {
                next.push((child, child_gens));
            });
        }
        frontier = next;
    }

    let checkpoint = match &opts.checkpoint_path {
        Some(path) => Some(CheckpointHandle::load_or_new(path, &opts.options_hash())?),
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| SearchError::InvalidOptions(format!("worker pool: {e}")))?;

    let subtree_results: Vec<Vec<BipartiteGraph>> = pool.install(|| {
        frontier
            .par_iter()
            .enumerate()
            .map(|(idx, (state, gens))| {
                let key = format!("a={a},b={b},root={idx}");
                if let Some(handle) = &checkpoint {
                    if let Some(lines) = handle.completed(&key) {
                        return lines
                            .iter()
                            .map(|l| graph6::parse_graph6(l.as_bytes()).expect("checkpoint line"))
                            .collect();
                    }
                }
                let mut out = Vec::new();
                dfs(ctx, state, gens, &mut out);
                if let Some(handle) = &checkpoint {
                    if !ctx.exhausted() {
                        let lines: Vec<String> = out
                            .iter()
                            .map(|g| crate::canon::canonical_form(g).as_str().to_string())
                            .collect();
                        let _ = handle.mark_done(&key, &lines);
                    }
                }
                out
            })
            .collect()
    });

    Ok(subtree_results.into_iter().flatten().collect())
}

fn frontier_depth(b: usize) -> usize {
    match b {
        0..=2 => 0,
        _ => 2,
    }
}

fn dfs(ctx: &SearchContext, state: &Partial, gens: &[Vec<usize>], out: &mut Vec<BipartiteGraph>) {
    if state.k() == state.b {
        if let Some(g) = realize(state) {
            if check_spec(&g, ctx.spec).ok {
                out.push(g);
            }
        }
        return;
    }
    expand_accepted(ctx, state, gens, &mut |child, child_gens| {
        dfs(ctx, &child, &child_gens, out);
    });
}

/// Generates the accepted children of an accepted state.
fn expand_accepted(
    ctx: &SearchContext,
    state: &Partial,
    gens: &[Vec<usize>],
    visit: &mut dyn FnMut(Partial, Vec<Vec<usize>>),
) {
    let a = state.a;
    let candidates = orbit_minima(candidate_columns(ctx, state), gens, a);
    for mask in candidates {
        let child = state.push(mask);
        if !child_viable(ctx, &child) {
            continue;
        }
        if !ctx.spend() {
            return;
        }
        let n = child.n();
        let dense = Dense::from_columns(a, &child.columns);
        let colors = state_colors(a, child.k());
        let result = canonize(&dense, &colors);
        // Canonical deletion rule: the column vertex holding the last
        // canonical position. The child survives iff the vertex we just
        // added is in the same automorphism orbit.
        let designated = result
            .labeling
            .iter()
            .position(|&p| p == n - 1)
            .expect("labeling is a permutation");
        let added = n - 1; // the appended column vertex has the top index
        let mut orbit = orbits(n, &result.generators);
        if orbit.same(designated, added) {
            visit(child, result.generators);
        }
    }
}

/// One representative (the minimal mask) per Aut(state)-orbit of
/// candidate columns.
fn orbit_minima(candidates: Vec<u64>, gens: &[Vec<usize>], a: usize) -> Vec<u64> {
    if gens.is_empty() {
        return candidates;
    }
    candidates
        .iter()
        .copied()
        .filter(|&mask| mask == orbit_min(mask, gens, a))
        .collect()
}

fn orbit_min(mask: u64, gens: &[Vec<usize>], a: usize) -> u64 {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![mask];
    seen.insert(mask);
    let mut min = mask;
    while let Some(m) = stack.pop() {
        for gen in gens {
            let image = apply_to_mask(m, gen, a);
            if seen.insert(image) {
                min = min.min(image);
                stack.push(image);
            }
        }
    }
    min
}

fn apply_to_mask(mask: u64, gen: &[usize], a: usize) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        m &= m - 1;
        debug_assert!(gen[p] < a, "generators must preserve the point class");
        out |= 1 << gen[p];
    }
    out
}

pub(crate) fn state_colors(a: usize, k: usize) -> Vec<u32> {
    let mut colors = vec![0u32; a + k];
    for c in colors.iter_mut().skip(a) {
        *c = 1;
    }
    colors
}

/// Automorphism generators of a state (color-aware).
pub(crate) fn state_generators(state: &Partial) -> Vec<Vec<usize>> {
    let dense = Dense::from_columns(state.a, &state.columns);
    canonize(&dense, &state_colors(state.a, state.k())).generators
}
