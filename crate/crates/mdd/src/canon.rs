//! Canonical labeling by iterative color refinement plus backtracking with
//! automorphism pruning. All target graphs are desk-scale (tens of
//! vertices), so the emphasis is on determinism and platform stability
//! rather than asymptotics.

use crate::graph::BipartiteGraph;
use crate::graph6;

/// A total-order key with the property that two graphs compare equal iff
/// they are isomorphic as abstract graphs (the bipartition labeling is
/// ignored). The bytes are the graph6 encoding of the canonically
/// relabeled graph, so the key doubles as an interchange record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The canonical graph6 record (printable ASCII).
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bytes).expect("graph6 is ASCII")
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Canonical form of `g` as an abstract graph: invariant under every
/// vertex relabeling, deterministic across runs and platforms.
pub fn canonical_form(g: &BipartiteGraph) -> CanonicalForm {
    let dense = Dense::from_graph(g);
    let result = canonize(&dense, &vec![0u32; g.order()]);
    let inv = invert(&result.labeling);
    let bytes = graph6::encode_graph6(g.order(), |u, v| dense.has_edge(inv[u], inv[v]));
    CanonicalForm {
        bytes: bytes.into_bytes(),
    }
}

/// True iff `a` and `b` are isomorphic as abstract graphs.
pub fn is_isomorphic(a: &BipartiteGraph, b: &BipartiteGraph) -> bool {
    a.order() == b.order()
        && a.num_edges() == b.num_edges()
        && canonical_form(a) == canonical_form(b)
}

/// Vertex permutation `v -> canonical position` realizing [`canonical_form`].
pub fn canonical_relabeling(g: &BipartiteGraph) -> Vec<usize> {
    let dense = Dense::from_graph(g);
    canonize(&dense, &vec![0u32; g.order()]).labeling
}

/// Generators of the automorphism group of `g` (as an abstract graph).
pub fn automorphism_generators(g: &BipartiteGraph) -> Vec<Vec<usize>> {
    let dense = Dense::from_graph(g);
    canonize(&dense, &vec![0u32; g.order()]).generators
}

// ---------------------------------------------------------------------------
// Dense bitset adjacency
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub n: usize,
    w: usize,
    rows: Vec<u64>,
}

impl Dense {
    pub fn from_graph(g: &BipartiteGraph) -> Self {
        let mut d = Dense::empty(g.order());
        for (u, v) in g.edges() {
            d.add_edge(u, v);
        }
        d
    }

    /// Search states: `a` points followed by one vertex per column mask.
    pub fn from_columns(a: usize, columns: &[u64]) -> Self {
        let n = a + columns.len();
        debug_assert!(a <= 64);
        let mut d = Dense::empty(n);
        for (j, &mask) in columns.iter().enumerate() {
            let mut m = mask;
            while m != 0 {
                let p = m.trailing_zeros() as usize;
                m &= m - 1;
                d.add_edge(p, a + j);
            }
        }
        d
    }

    pub fn empty(n: usize) -> Self {
        let w = n.div_ceil(64).max(1);
        Dense {
            n,
            w,
            rows: vec![0; n * w],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.w + v / 64] |= 1 << (v % 64);
        self.rows[v * self.w + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.w + v / 64] >> (v % 64) & 1 == 1
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.rows[v * self.w..(v + 1) * self.w];
        row.iter().enumerate().flat_map(|(word, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(word * 64 + b)
                }
            })
        })
    }
}

// ---------------------------------------------------------------------------
// Refinement + individualization search
// ---------------------------------------------------------------------------

pub(crate) struct CanonResult {
    /// vertex -> canonical position; positions respect initial colors.
    pub labeling: Vec<usize>,
    /// Automorphism generators discovered during the search. They respect
    /// the initial coloring and generate the full (color-preserving)
    /// automorphism group.
    pub generators: Vec<Vec<usize>>,
}

/// Runs the canonical labeling search with the given initial coloring.
/// Color ids must be dense starting at 0 but need not be sorted by class.
pub(crate) fn canonize(d: &Dense, init_colors: &[u32]) -> CanonResult {
    let mut search = Search {
        d,
        base: Vec::new(),
        generators: Vec::new(),
        best: None,
        first: None,
    };
    let mut colors = init_colors.to_vec();
    refine(d, &mut colors);
    search.node(&colors);
    let best = search.best.expect("at least one leaf");
    CanonResult {
        labeling: best.perm,
        generators: search.generators,
    }
}

/// Canonical key for a colored graph: class sizes followed by the packed
/// adjacency of the canonical labeling.
pub(crate) fn canonical_key(d: &Dense, init_colors: &[u32]) -> (Vec<u8>, CanonResult) {
    let result = canonize(d, init_colors);
    let inv = invert(&result.labeling);
    let mut bytes = Vec::new();
    let ncolors = init_colors.iter().copied().max().map_or(0, |m| m + 1);
    bytes.extend_from_slice(&(d.n as u32).to_be_bytes());
    for c in 0..ncolors {
        let size = init_colors.iter().filter(|&&x| x == c).count() as u32;
        bytes.extend_from_slice(&size.to_be_bytes());
    }
    bytes.extend_from_slice(&pack_bits(d, &inv));
    (bytes, result)
}

struct Leaf {
    bits: Vec<u64>,
    perm: Vec<usize>, // vertex -> position
}

struct Search<'a> {
    d: &'a Dense,
    base: Vec<usize>,
    generators: Vec<Vec<usize>>,
    best: Option<Leaf>,
    first: Option<Leaf>,
}

impl Search<'_> {
    fn node(&mut self, colors: &[u32]) {
        let cell = match target_cell(colors) {
            None => {
                self.leaf(colors);
                return;
            }
            Some(cell) => cell,
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if self.in_explored_orbit(v, &explored) {
                continue;
            }
            explored.push(v);
            let mut child = individualize(colors, v);
            refine(self.d, &mut child);
            self.base.push(v);
            self.node(&child);
            self.base.pop();
        }
    }

    /// Orbit pruning: skip `v` when an automorphism fixing the current
    /// base pointwise maps it into an already-explored branch.
    fn in_explored_orbit(&self, v: usize, explored: &[usize]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.d.n);
        for gen in &self.generators {
            if self.base.iter().all(|&b| gen[b] == b) {
                for x in 0..self.d.n {
                    uf.union(x, gen[x]);
                }
            }
        }
        explored.iter().any(|&u| uf.find(u) == uf.find(v))
    }

    fn leaf(&mut self, colors: &[u32]) {
        let mut perm = vec![0usize; self.d.n];
        for (v, &c) in colors.iter().enumerate() {
            perm[v] = c as usize;
        }
        let inv = invert(&perm);
        let bits = pack_bits_words(self.d, &inv);

        if let Some(first) = &self.first {
            if first.bits == bits {
                self.record_automorphism(&first.perm.clone(), &perm);
            }
        }
        match &self.best {
            None => {
                let leaf = Leaf { bits, perm };
                self.best = Some(Leaf {
                    bits: leaf.bits.clone(),
                    perm: leaf.perm.clone(),
                });
                self.first = Some(leaf);
            }
            Some(best) => {
                if bits == best.bits {
                    self.record_automorphism(&best.perm.clone(), &perm);
                } else if bits < best.bits {
                    self.best = Some(Leaf { bits, perm });
                }
            }
        }
    }

    fn record_automorphism(&mut self, perm_a: &[usize], perm_b: &[usize]) {
        // Both labelings yield the same string, so pos_a^-1 . pos_b is an
        // automorphism.
        let inv_a = invert(perm_a);
        let sigma: Vec<usize> = perm_b.iter().map(|&p| inv_a[p]).collect();
        if sigma.iter().enumerate().all(|(i, &s)| i == s) {
            return;
        }
        debug_assert!(self.is_automorphism(&sigma));
        if !self.generators.contains(&sigma) {
            self.generators.push(sigma);
        }
    }

    #[cfg(debug_assertions)]
    fn is_automorphism(&self, sigma: &[usize]) -> bool {
        (0..self.d.n).all(|u| {
            self.d
                .neighbors(u)
                .all(|v| self.d.has_edge(sigma[u], sigma[v]))
        })
    }

    #[cfg(not(debug_assertions))]
    fn is_automorphism(&self, _sigma: &[usize]) -> bool {
        true
    }
}

/// First smallest non-singleton color class, vertices in ascending order;
/// `None` when the partition is discrete.
fn target_cell(colors: &[u32]) -> Option<Vec<usize>> {
    let ncolors = colors.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; ncolors as usize];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    let target = (0..ncolors as usize)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))?;
    Some(
        (0..colors.len())
            .filter(|&v| colors[v] as usize == target)
            .collect(),
    )
}

/// Splits `v` off as a new class ordered immediately before the rest of
/// its old class, keeping color ids dense.
fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let c = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(u, &cu)| {
            if cu < c || (cu == c && u == v) {
                cu
            } else if cu == c {
                cu + 1
            } else {
                cu + 1
            }
        })
        .collect()
}

/// Iterated color refinement: vertices are re-ranked by (old color,
/// multiset of neighbor colors) until stable. The re-ranking is purely
/// combinatorial, so it is invariant under vertex relabeling.
fn refine(d: &Dense, colors: &mut Vec<u32>) {
    let n = d.n;
    if n == 0 {
        return;
    }
    loop {
        let ncolors = colors.iter().copied().max().unwrap() as usize + 1;
        // signature: counts of neighbor colors
        let mut sigs: Vec<Vec<u32>> = vec![Vec::new(); n];
        for v in 0..n {
            let mut counts = vec![0u32; ncolors];
            for u in d.neighbors(v) {
                counts[colors[u] as usize] += 1;
            }
            sigs[v] = counts;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| colors[a].cmp(&colors[b]).then_with(|| sigs[a].cmp(&sigs[b])));
        let mut new_colors = vec![0u32; n];
        let mut next = 0u32;
        for i in 0..n {
            if i > 0 {
                let (a, b) = (order[i - 1], order[i]);
                if colors[a] != colors[b] || sigs[a] != sigs[b] {
                    next += 1;
                }
            }
            new_colors[order[i]] = next;
        }
        let stable = next as usize + 1 == ncolors;
        *colors = new_colors;
        if stable {
            return;
        }
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    inv
}

/// Upper-triangle bits of the relabeled adjacency, packed into words.
fn pack_bits_words(d: &Dense, inv: &[usize]) -> Vec<u64> {
    let n = d.n;
    let nbits = n * (n - 1) / 2;
    let mut words = vec![0u64; nbits.div_ceil(64)];
    let mut idx = 0usize;
    for col in 1..n {
        for row in 0..col {
            if d.has_edge(inv[row], inv[col]) {
                words[idx / 64] |= 1 << (63 - idx % 64);
            }
            idx += 1;
        }
    }
    words
}

fn pack_bits(d: &Dense, inv: &[usize]) -> Vec<u8> {
    pack_bits_words(d, inv)
        .iter()
        .flat_map(|w| w.to_be_bytes())
        .collect()
}

/// Orbits of the vertex set under a list of permutations.
pub(crate) fn orbits(n: usize, generators: &[Vec<usize>]) -> UnionFind {
    let mut uf = UnionFind::new(n);
    for gen in generators {
        for v in 0..n {
            uf.union(v, gen[v]);
        }
    }
    uf
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BipartiteGraph;

    fn cycle(n: usize) -> BipartiteGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        BipartiteGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn relabeling_c6_preserves_the_key() {
        let g = cycle(6);
        let perm = vec![3, 5, 1, 0, 4, 2];
        let h = g.relabel(&perm);
        assert_eq!(canonical_form(&g), canonical_form(&h));
        assert!(is_isomorphic(&g, &h));
    }

    #[test]
    fn claw_and_p4_differ() {
        let claw = BipartiteGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p4 = BipartiteGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_ne!(canonical_form(&claw), canonical_form(&p4));
    }

    #[test]
    fn c6_and_k33_differ() {
        let k33 = BipartiteGraph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(!is_isomorphic(&cycle(6), &k33));
    }

    #[test]
    fn canonical_relabeling_realizes_the_form() {
        let g = cycle(8);
        let perm = canonical_relabeling(&g);
        let h = g.relabel(&perm);
        assert_eq!(
            crate::graph6::write_graph6(&h),
            canonical_form(&g).as_str()
        );
    }

    #[test]
    fn k33_automorphisms_act_transitively() {
        let k33 = BipartiteGraph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        let gens = automorphism_generators(&k33);
        let mut uf = orbits(6, &gens);
        // K_{3,3} is vertex-transitive (parts can swap).
        for v in 1..6 {
            assert!(uf.same(0, v), "vertex {v} not in orbit of 0");
        }
    }
}
