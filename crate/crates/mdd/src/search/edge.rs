//! Edge-augmentation strategy: the open column gains one edge at a time
//! (ascending point order, which is exactly how `candidate_columns`
//! builds masks), and every time a column closes the state is interned by
//! its canonical form. Independent of the canonical-path machinery, so
//! agreement between the two strategies is a meaningful cross-check.

use super::context::{candidate_columns, child_viable, realize, Partial, SearchContext};
use super::{SearchError, SearchOptions};
use crate::canon::{canonical_key, Dense};
use crate::graph::BipartiteGraph;
use crate::metrics::check_spec;
use rayon::prelude::*;
use std::collections::BTreeMap;

pub(crate) fn run_split(
    ctx: &SearchContext,
    opts: &SearchOptions,
    a: usize,
    b: usize,
) -> Result<Vec<BipartiteGraph>, SearchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| SearchError::InvalidOptions(format!("worker pool: {e}")))?;

    let mut level: Vec<Partial> = vec![Partial::root(a, b)];
    for _ in 0..b {
        let maps: Vec<BTreeMap<Vec<u8>, Partial>> = pool.install(|| {
            level
                .par_iter()
                .map(|state| {
                    let mut local: BTreeMap<Vec<u8>, Partial> = BTreeMap::new();
                    for mask in candidate_columns(ctx, state) {
                        let child = state.push(mask);
                        if !child_viable(ctx, &child) {
                            continue;
                        }
                        if !ctx.spend() {
                            break;
                        }
                        let dense = Dense::from_columns(a, &child.columns);
                        let colors = super::augment::state_colors(a, child.k());
                        let (key, result) = canonical_key(&dense, &colors);
                        local
                            .entry(key)
                            .or_insert_with(|| relabel_state(&child, &result.labeling));
                    }
                    local
                })
                .collect()
        });
        let mut merged: BTreeMap<Vec<u8>, Partial> = BTreeMap::new();
        for map in maps {
            // Values are canonically relabeled, so duplicate keys carry
            // identical states and overwriting is harmless.
            merged.extend(map);
        }
        level = merged.into_values().collect();
        if level.is_empty() {
            break;
        }
    }

    Ok(level
        .iter()
        .filter_map(realize)
        .filter(|g| check_spec(g, ctx.spec).ok)
        .collect())
}

/// Rewrites a state into its canonical labeling so that states with equal
/// keys are bit-identical.
fn relabel_state(state: &Partial, labeling: &[usize]) -> Partial {
    let a = state.a;
    let mut columns = vec![0u64; state.k()];
    for (j, &mask) in state.columns.iter().enumerate() {
        let mut new_mask = 0u64;
        let mut m = mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            new_mask |= 1 << labeling[p];
        }
        // Column vertex j sits at canonical position labeling[a + j].
        columns[labeling[a + j] - a] = new_mask;
    }
    let mut relabeled = Partial::root(a, state.b);
    for mask in columns {
        relabeled = relabeled.push(mask);
    }
    relabeled
}
