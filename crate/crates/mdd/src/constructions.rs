//! Builders for the named extremal graphs and the elementary parameterized
//! families used as fixtures.

use crate::graph::{BipartiteGraph, GraphError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("offset {0} is even; only odd offsets keep the parity bipartition")]
    OffsetParity(usize),
    #[error("offsets {0} and {1} describe the same connection")]
    DuplicateEdge(usize, usize),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Identifier for every construction this module can build.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstructionId {
    Cycle(usize),
    Path(usize),
    CompleteBipartite(usize, usize),
    CirculantHalved { n: usize, offsets: Vec<usize> },
    Pg2Incidence(usize),
    Named(&'static str),
}

impl std::fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructionId::Cycle(k) => write!(f, "cycle:{k}"),
            ConstructionId::Path(k) => write!(f, "path:{k}"),
            ConstructionId::CompleteBipartite(a, b) => write!(f, "complete-bipartite:{a},{b}"),
            ConstructionId::CirculantHalved { n, offsets } => {
                let list: Vec<String> = offsets.iter().map(|o| o.to_string()).collect();
                write!(f, "circulant:{n}:{}", list.join(","))
            }
            ConstructionId::Pg2Incidence(q) => write!(f, "pg2:{q}"),
            ConstructionId::Named(name) => write!(f, "{name}"),
        }
    }
}

/// Circulant-style construction on Z/nZ: for each even x and each odd
/// offset o, the edge {x, x+o}. Even/odd classes form the bipartition.
pub fn circulant_halved(n: usize, offsets: &[usize]) -> Result<BipartiteGraph, ConstructionError> {
    if n < 2 || n % 2 != 0 {
        return Err(ConstructionError::DomainError(format!(
            "vertex count must be even and positive, got {n}"
        )));
    }
    let mut seen = std::collections::HashSet::new();
    let mut normalized = Vec::new();
    for (i, &o) in offsets.iter().enumerate() {
        let o = o % n;
        if o % 2 == 0 {
            return Err(ConstructionError::OffsetParity(offsets[i]));
        }
        if !seen.insert(o) {
            let j = offsets.iter().position(|&p| p % n == o).unwrap();
            return Err(ConstructionError::DuplicateEdge(offsets[j], offsets[i]));
        }
        normalized.push(o);
    }
    let mut edges = Vec::new();
    for x in (0..n).step_by(2) {
        for &o in &normalized {
            edges.push((x, (x + o) % n));
        }
    }
    Ok(BipartiteGraph::from_edges(n, &edges)?)
}

/// Point-line incidence graph of the projective plane PG(2, q), q prime:
/// 2(q^2+q+1) vertices, (q+1)-regular, girth 6, diameter 3.
pub fn pg2_incidence(q: usize) -> Result<BipartiteGraph, ConstructionError> {
    if !is_prime(q) {
        return Err(ConstructionError::NotPrime(q));
    }
    // Homogeneous coordinates over Z/qZ, canonical representative: first
    // nonzero coordinate equal to 1.
    let mut reps: Vec<[usize; 3]> = Vec::new();
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let v = [x, y, z];
                if v == [0, 0, 0] {
                    continue;
                }
                let first = v.iter().find(|&&c| c != 0).unwrap();
                if *first == 1 {
                    reps.push(v);
                }
            }
        }
    }
    let m = reps.len();
    debug_assert_eq!(m, q * q + q + 1);
    let mut edges = Vec::new();
    for (p, point) in reps.iter().enumerate() {
        for (l, line) in reps.iter().enumerate() {
            let dot: usize = point.iter().zip(line).map(|(a, b)| a * b).sum();
            if dot % q == 0 {
                edges.push((p, m + l));
            }
        }
    }
    Ok(BipartiteGraph::from_edges(2 * m, &edges)?)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2usize;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryKind {
    /// Even cycle on k vertices, k >= 4.
    Cycle(usize),
    /// Path with k edges (k+1 vertices), k >= 1.
    Path(usize),
    /// Complete bipartite K_{a,b}, a >= b >= 1.
    CompleteBipartite(usize, usize),
}

pub fn elementary(kind: ElementaryKind) -> Result<BipartiteGraph, ConstructionError> {
    match kind {
        ElementaryKind::Cycle(k) => {
            if k < 4 || k % 2 != 0 {
                return Err(ConstructionError::DomainError(format!(
                    "cycle length must be even and >= 4, got {k}"
                )));
            }
            let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
            Ok(BipartiteGraph::from_edges(k, &edges)?)
        }
        ElementaryKind::Path(k) => {
            if k < 1 {
                return Err(ConstructionError::DomainError(
                    "path length must be >= 1".into(),
                ));
            }
            let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
            Ok(BipartiteGraph::from_edges(k + 1, &edges)?)
        }
        ElementaryKind::CompleteBipartite(a, b) => {
            if b < 1 || a < b {
                return Err(ConstructionError::DomainError(format!(
                    "complete bipartite needs a >= b >= 1, got ({a}, {b})"
                )));
            }
            let edges: Vec<(usize, usize)> = (0..a)
                .flat_map(|i| (0..b).map(move |j| (i, a + j)))
                .collect();
            Ok(BipartiteGraph::from_edges(a + b, &edges)?)
        }
    }
}

pub const DELORME_22_OFFSETS: [usize; 4] = [1, 21, 7, 11];
pub const DELORME_38_OFFSETS: [usize; 5] = [37, 1, 5, 13, 23];

/// All named constructions, each buildable and verified in tests against
/// its claimed class.
pub fn known_catalog() -> Vec<(ConstructionId, BipartiteGraph)> {
    vec![
        (
            ConstructionId::Named("delorme-22"),
            circulant_halved(22, &DELORME_22_OFFSETS).expect("delorme-22 is valid"),
        ),
        (
            ConstructionId::Named("delorme-38"),
            circulant_halved(38, &DELORME_38_OFFSETS).expect("delorme-38 is valid"),
        ),
        (
            ConstructionId::Named("heawood"),
            pg2_incidence(2).expect("heawood is valid"),
        ),
        (
            ConstructionId::Named("claw"),
            elementary(ElementaryKind::CompleteBipartite(3, 1)).expect("claw is valid"),
        ),
    ]
}

/// Builds a construction by its CLI name. Accepted forms:
/// `delorme-22`, `delorme-38`, `heawood`, `claw`, `cycle:K`, `path:K`,
/// `kab:A,B`, `circulant:N:O1,O2,...`, `pg2:Q`.
pub fn build_by_name(name: &str) -> Result<BipartiteGraph, ConstructionError> {
    match name {
        "delorme-22" => circulant_halved(22, &DELORME_22_OFFSETS),
        "delorme-38" => circulant_halved(38, &DELORME_38_OFFSETS),
        "heawood" => pg2_incidence(2),
        "claw" => elementary(ElementaryKind::CompleteBipartite(3, 1)),
        other => {
            let mut parts = other.splitn(3, ':');
            let kind = parts.next().unwrap_or_default();
            let rest: Vec<&str> = parts.collect();
            let parse_num = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| ConstructionError::DomainError(format!("bad number '{s}'")))
            };
            match (kind, rest.as_slice()) {
                ("cycle", [k]) => elementary(ElementaryKind::Cycle(parse_num(k)?)),
                ("path", [k]) => elementary(ElementaryKind::Path(parse_num(k)?)),
                ("kab", [ab]) => {
                    let nums: Vec<&str> = ab.split(',').collect();
                    if nums.len() != 2 {
                        return Err(ConstructionError::DomainError(
                            "kab needs two sizes, e.g. kab:4,2".into(),
                        ));
                    }
                    elementary(ElementaryKind::CompleteBipartite(
                        parse_num(nums[0])?,
                        parse_num(nums[1])?,
                    ))
                }
                ("pg2", [q]) => pg2_incidence(parse_num(q)?),
                ("circulant", [n, offsets]) => {
                    let n = parse_num(n)?;
                    let offsets: Result<Vec<usize>, _> =
                        offsets.split(',').map(parse_num).collect();
                    circulant_halved(n, &offsets?)
                }
                _ => Err(ConstructionError::DomainError(format!(
                    "unknown construction '{other}'"
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{canonical_form, is_isomorphic};
    use crate::metrics::{self, check_spec, GraphSpec, Girth};

    #[test]
    fn delorme_22_matches_its_class() {
        let g = circulant_halved(22, &DELORME_22_OFFSETS).unwrap();
        assert_eq!(g.order(), 22);
        assert_eq!(metrics::degree_profile(&g), (4, 4, true));
        assert_eq!(metrics::diameter(&g), 3);
        assert_eq!(metrics::girth(&g), Girth::Finite(4));
        assert!(check_spec(&g, GraphSpec::new(4, 3, 4).unwrap()).ok);
    }

    #[test]
    fn delorme_38_matches_its_class() {
        let g = circulant_halved(38, &DELORME_38_OFFSETS).unwrap();
        assert_eq!(g.order(), 38);
        assert_eq!(metrics::degree_profile(&g), (5, 5, true));
        assert_eq!(metrics::diameter(&g), 3);
        assert_eq!(metrics::girth(&g), Girth::Finite(4));
        assert!(check_spec(&g, GraphSpec::new(5, 3, 4).unwrap()).ok);
    }

    #[test]
    fn circulants_are_shift_transitive() {
        for (n, offsets) in [
            (22usize, DELORME_22_OFFSETS.to_vec()),
            (38, DELORME_38_OFFSETS.to_vec()),
        ] {
            let g = circulant_halved(n, &offsets).unwrap();
            let shift: Vec<usize> = (0..n).map(|v| (v + 2) % n).collect();
            let h = g.relabel(&shift);
            assert_eq!(g.edges(), h.edges(), "x -> x+2 is an automorphism");
            assert_eq!(canonical_form(&g), canonical_form(&h));
        }
    }

    #[test]
    fn circulant_parity_and_duplicate_gates() {
        assert!(matches!(
            circulant_halved(10, &[2]),
            Err(ConstructionError::OffsetParity(2))
        ));
        assert!(matches!(
            circulant_halved(10, &[3, 13]),
            Err(ConstructionError::DuplicateEdge(3, 13))
        ));
    }

    #[test]
    fn small_circulant_is_k33() {
        let g = circulant_halved(6, &[1, 5, 3]).unwrap();
        let k33 = elementary(ElementaryKind::CompleteBipartite(3, 3)).unwrap();
        assert!(is_isomorphic(&g, &k33));
    }

    #[test]
    fn heawood_is_the_defect_zero_witness() {
        let g = pg2_incidence(2).unwrap();
        assert_eq!(g.order(), 14);
        assert_eq!(metrics::degree_profile(&g), (3, 3, true));
        assert_eq!(metrics::girth(&g), Girth::Finite(6));
        assert_eq!(metrics::diameter(&g), 3);
        assert!(check_spec(&g, GraphSpec::new(3, 3, 0).unwrap()).ok);
    }

    #[test]
    fn pg2_three_has_plane_parameters() {
        let g = pg2_incidence(3).unwrap();
        assert_eq!(g.order(), 26);
        assert_eq!(metrics::degree_profile(&g), (4, 4, true));
        assert_eq!(metrics::girth(&g), Girth::Finite(6));
        assert_eq!(g.num_edges(), 13 * 4);
        assert!(check_spec(&g, GraphSpec::new(4, 3, 0).unwrap()).ok);
    }

    #[test]
    fn pg2_rejects_non_primes() {
        assert!(matches!(pg2_incidence(4), Err(ConstructionError::NotPrime(4))));
        assert!(matches!(pg2_incidence(1), Err(ConstructionError::NotPrime(1))));
    }

    #[test]
    fn elementary_anchors() {
        let c10 = elementary(ElementaryKind::Cycle(10)).unwrap();
        assert!(check_spec(&c10, GraphSpec::new(2, 5, 0).unwrap()).ok);
        let k42 = elementary(ElementaryKind::CompleteBipartite(4, 2)).unwrap();
        assert!(check_spec(&k42, GraphSpec::new(4, 2, 2).unwrap()).ok);
        let p5 = elementary(ElementaryKind::Path(5)).unwrap();
        assert!(check_spec(&p5, GraphSpec::new(2, 5, 4).unwrap()).ok);
        assert!(elementary(ElementaryKind::Cycle(5)).is_err());
        assert!(elementary(ElementaryKind::CompleteBipartite(2, 3)).is_err());
    }

    #[test]
    fn known_catalog_entries_pass_their_specs() {
        let specs = [
            ("delorme-22", GraphSpec::new(4, 3, 4).unwrap()),
            ("delorme-38", GraphSpec::new(5, 3, 4).unwrap()),
            ("heawood", GraphSpec::new(3, 3, 0).unwrap()),
            ("claw", GraphSpec::new(3, 2, 2).unwrap()),
        ];
        let catalog = known_catalog();
        assert_eq!(catalog.len(), specs.len());
        for (name, spec) in specs {
            let (_, g) = catalog
                .iter()
                .find(|(id, _)| id.to_string() == name)
                .unwrap_or_else(|| panic!("{name} missing"));
            assert!(check_spec(g, spec).ok, "{name} fails {spec}");
        }
    }

    #[test]
    fn build_by_name_roundtrips() {
        for name in ["delorme-22", "delorme-38", "heawood", "claw"] {
            assert!(build_by_name(name).is_ok());
        }
        assert!(build_by_name("cycle:10").is_ok());
        assert!(build_by_name("kab:4,2").is_ok());
        assert!(build_by_name("circulant:22:1,21,7,11").is_ok());
        assert!(build_by_name("pg2:3").is_ok());
        assert!(build_by_name("nonsense").is_err());
    }
}
