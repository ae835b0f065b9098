//! Moore-bound arithmetic and the statistics that define membership in a
//! (Δ, D, -ε) class: degree profile, diameter, girth and defect.

use crate::graph::BipartiteGraph;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("order {order} exceeds the Moore bound {bound}; upstream invariant broken")]
    DefectNegative { order: usize, bound: String },
}

/// A target class of bipartite (Δ, D, -ε) graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GraphSpec {
    pub delta: usize,
    pub diameter: usize,
    pub defect: usize,
}

impl GraphSpec {
    pub fn new(delta: usize, diameter: usize, defect: usize) -> Result<Self, MetricsError> {
        if delta < 2 || diameter < 2 {
            return Err(MetricsError::DomainError(format!(
                "spec requires delta >= 2 and diameter >= 2, got ({delta}, {diameter})"
            )));
        }
        Ok(GraphSpec {
            delta,
            diameter,
            defect,
        })
    }

    /// Target order M^b(Δ, D) - ε, when non-negative.
    pub fn target_order(&self) -> Option<usize> {
        let moore = moore_bound(self.delta, self.diameter).ok()?.into_inner();
        let defect = BigUint::from(self.defect);
        if defect > moore {
            return None;
        }
        usize::try_from(moore - defect).ok()
    }
}

impl std::fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},-{})", self.delta, self.diameter, self.defect)
    }
}

/// Exact Moore bipartite bound value (arbitrary precision).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MooreValue(BigUint);

impl MooreValue {
    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_decimal(&self) -> String {
        self.0.to_str_radix(10)
    }
}

/// M^b(Δ, D) = 2(1 + (Δ-1) + ... + (Δ-1)^(D-1)), exactly.
pub fn moore_bound(delta: usize, diameter: usize) -> Result<MooreValue, MetricsError> {
    if delta < 2 || diameter < 2 {
        return Err(MetricsError::DomainError(format!(
            "Moore bipartite bound needs delta >= 2 and diameter >= 2, got ({delta}, {diameter})"
        )));
    }
    let q = BigUint::from(delta - 1);
    let mut sum = BigUint::zero();
    let mut power = BigUint::one();
    for _ in 0..diameter {
        sum += &power;
        power *= &q;
    }
    Ok(MooreValue(sum * 2u32))
}

/// Maximum eccentricity over all vertices (graphs are connected by type).
pub fn diameter(g: &BipartiteGraph) -> usize {
    g.vertices()
        .map(|v| {
            g.bfs_distances(v)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Finite(usize),
    Acyclic,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(k) => Some(k),
            Girth::Acyclic => None,
        }
    }
}

/// Length of a shortest cycle, computed exactly as the minimum over all
/// edges of (shortest u-v path avoiding the edge) + 1.
pub fn girth(g: &BipartiteGraph) -> Girth {
    let mut best = usize::MAX;
    for (u, v) in g.edges() {
        if let Some(d) = distance_avoiding_edge(g, u, v) {
            best = best.min(d + 1);
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Finite(best)
    }
}

fn distance_avoiding_edge(g: &BipartiteGraph, source: usize, target: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.order()];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if (x == source && y == target) || (x == target && y == source) {
                continue;
            }
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                if y == target {
                    return Some(dist[y]);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

/// (min degree, max degree, regular?).
pub fn degree_profile(g: &BipartiteGraph) -> (usize, usize, bool) {
    let degrees: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let min = degrees.iter().copied().min().unwrap_or(0);
    let max = degrees.iter().copied().max().unwrap_or(0);
    (min, max, min == max)
}

/// Defect statistics of a graph measured against its own maximum degree
/// and diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectAnalysis {
    pub delta: usize,
    pub diameter: usize,
    pub order: usize,
    pub defect: BigUint,
}

pub fn defect_analysis(g: &BipartiteGraph) -> Result<DefectAnalysis, MetricsError> {
    let (_, delta, _) = degree_profile(g);
    let diam = diameter(g);
    let moore = moore_bound(delta, diam)?.into_inner();
    let order = BigUint::from(g.order());
    if order > moore {
        return Err(MetricsError::DefectNegative {
            order: g.order(),
            bound: moore.to_str_radix(10),
        });
    }
    Ok(DefectAnalysis {
        delta,
        diameter: diam,
        order: g.order(),
        defect: moore - order,
    })
}

/// One clause of a spec-membership check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub ok: bool,
    pub detail: String,
}

/// Result of [`check_spec`]: overall verdict plus per-clause report.
#[derive(Debug, Clone, Serialize)]
pub struct SpecCheck {
    pub ok: bool,
    pub clauses: Vec<ClauseResult>,
}

/// Membership predicate for a (Δ, D, -ε) class: maximum degree exactly Δ,
/// order exactly M^b(Δ, D) - ε, diameter exactly D. (Bipartiteness,
/// simplicity and connectivity are already certified by the graph type.)
pub fn check_spec(g: &BipartiteGraph, spec: GraphSpec) -> SpecCheck {
    let (_, max_deg, _) = degree_profile(g);
    let diam = diameter(g);
    let moore = moore_bound(spec.delta, spec.diameter)
        .expect("GraphSpec domain is validated at construction")
        .into_inner();
    let target = BigUint::from(spec.defect);
    let order_ok = moore >= target && moore.clone() - &target == BigUint::from(g.order());
    let clauses = vec![
        ClauseResult {
            clause: "degree",
            ok: max_deg == spec.delta,
            detail: format!("max degree {} (want {})", max_deg, spec.delta),
        },
        ClauseResult {
            clause: "order",
            ok: order_ok,
            detail: format!(
                "order {} (want {} - {})",
                g.order(),
                moore.to_str_radix(10),
                spec.defect
            ),
        },
        ClauseResult {
            clause: "diameter",
            ok: diam == spec.diameter,
            detail: format!("diameter {} (want {})", diam, spec.diameter),
        },
    ];
    SpecCheck {
        ok: clauses.iter().all(|c| c.ok),
        clauses,
    }
}

/// JSON-facing summary of a single graph. Numeric values are rendered as
/// decimal strings so that arbitrary-precision defects survive transport.
#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub delta: String,
    pub diameter: String,
    pub order: String,
    pub defect: String,
    pub regular: bool,
    pub girth: Option<String>,
}

pub fn graph_report(g: &BipartiteGraph) -> Result<GraphReport, MetricsError> {
    let analysis = defect_analysis(g)?;
    let (_, _, regular) = degree_profile(g);
    Ok(GraphReport {
        delta: analysis.delta.to_string(),
        diameter: analysis.diameter.to_string(),
        order: analysis.order.to_string(),
        defect: analysis.defect.to_str_radix(10),
        regular,
        girth: girth(g).finite().map(|k| k.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BipartiteGraph;

    fn cycle(n: usize) -> BipartiteGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        BipartiteGraph::from_edges(n, &edges).unwrap()
    }

    fn path_edges(len: usize) -> BipartiteGraph {
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, i + 1)).collect();
        BipartiteGraph::from_edges(len + 1, &edges).unwrap()
    }

    fn k33() -> BipartiteGraph {
        BipartiteGraph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap()
    }

    #[test]
    fn moore_bound_anchors() {
        assert_eq!(moore_bound(3, 3).unwrap().to_decimal(), "14");
        for d in 2..30 {
            assert_eq!(
                moore_bound(2, d).unwrap().into_inner(),
                BigUint::from(2 * d)
            );
        }
        let big = moore_bound(3, 187).unwrap().into_inner();
        let expected = (BigUint::from(1u32) << 188) - BigUint::from(2u32);
        assert_eq!(big, expected);
        assert!(moore_bound(1, 3).is_err());
        assert!(moore_bound(3, 1).is_err());
    }

    #[test]
    fn diameter_anchors() {
        assert_eq!(diameter(&cycle(10)), 5);
        assert_eq!(diameter(&k33()), 2);
    }

    #[test]
    fn girth_anchors() {
        assert_eq!(girth(&cycle(10)), Girth::Finite(10));
        assert_eq!(girth(&path_edges(5)), Girth::Acyclic);
        assert_eq!(girth(&k33()), Girth::Finite(4));
    }

    #[test]
    fn degree_profile_anchors() {
        let claw = BipartiteGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(degree_profile(&claw), (1, 3, false));
        let k44 = BipartiteGraph::from_edges(
            8,
            &(0..4)
                .flat_map(|i| (4..8).map(move |j| (i, j)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(degree_profile(&k44), (4, 4, true));
    }

    #[test]
    fn defect_anchors() {
        let claw = BipartiteGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let a = defect_analysis(&claw).unwrap();
        assert_eq!((a.delta, a.diameter, a.order), (3, 2, 4));
        assert_eq!(a.defect, BigUint::from(2u32));

        let p = defect_analysis(&path_edges(5)).unwrap();
        assert_eq!((p.delta, p.diameter, p.order), (2, 5, 6));
        assert_eq!(p.defect, BigUint::from(4u32));

        for d in 2..6 {
            let c = defect_analysis(&cycle(2 * d)).unwrap();
            assert_eq!(c.defect, BigUint::zero());
        }
    }

    #[test]
    fn check_spec_uses_exact_degree() {
        let spec = GraphSpec::new(3, 2, 0).unwrap();
        assert!(check_spec(&k33(), spec).ok);
        // C_6 misses (3,3,-8) on the degree clause alone.
        let c6 = cycle(6);
        let res = check_spec(&c6, GraphSpec::new(3, 3, 8).unwrap());
        assert!(!res.ok);
        let degree_clause = res.clauses.iter().find(|c| c.clause == "degree").unwrap();
        assert!(!degree_clause.ok);
        assert!(res.clauses.iter().filter(|c| c.clause != "degree").all(|c| c.ok));
    }

    #[test]
    fn same_part_distances_are_even() {
        for g in [cycle(10), k33(), path_edges(6)] {
            for u in g.vertices() {
                let dist = g.bfs_distances(u);
                for v in g.vertices() {
                    let parity = (dist[v] % 2) as u8;
                    let same_part = g.part(u) == g.part(v);
                    assert_eq!(same_part, parity == 0);
                }
            }
        }
    }
}
