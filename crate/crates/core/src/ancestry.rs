//! Ancestry pairs and the finite ancestry condition.
//!
//! An ancestry pair for (v, w) is two paths with ranges v and w and a
//! common source. It is minimal when no nontrivial common suffix can be
//! stripped, which happens exactly when a side is trivial or the last
//! edges differ. Finite ancestry asks that every vertex pair admit only
//! finitely many minimal pairs in which neither path repeats a vertex.
//!
//! On a window the decision is exact: a minimal cycle-free pair touching
//! a pumpable edge spawns an infinite family by reindexing bundle copies
//! or deepening a tail detour by whole pump periods, and every infinite
//! family projects onto such a pair. The window is deep enough that two
//! full pump periods are visible, which the completeness argument needs,
//! and the quantification runs over all window vertices because a tail
//! fed by its own attach vertex shows its divergence only at queries
//! anchored on tail positions. Bratteli diagrams go through the
//! synchronized-descent automaton instead.

use std::collections::BTreeMap;

use crate::automaton;
use crate::error::AnalysisError;
use crate::graph::GraphPresentation;
use crate::path::Path;
use crate::verdict::{Answer, Certificate, Verdict};
use crate::window::Window;

/// Two paths with a common source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct APair {
    pub lambda: Path,
    pub mu: Path,
}

impl APair {
    pub fn display(&self, w: &Window) -> [String; 2] {
        [self.lambda.display(w), self.mu.display(w)]
    }

    pub fn touches_pumpable(&self, w: &Window) -> bool {
        self.lambda
            .edges
            .iter()
            .chain(self.mu.edges.iter())
            .any(|&e| w.edges[e].pumpable)
    }

    pub fn cycle_free(&self, w: &Window) -> bool {
        self.lambda.is_cycle_free(w) && self.mu.is_cycle_free(w)
    }
}

/// Is (lambda, mu) an ancestry pair for the query (v, u)?
pub fn is_ancestry_pair(w: &Window, pair: &APair, v: usize, u: usize) -> bool {
    pair.lambda.range == v && pair.mu.range == u && pair.lambda.source(w) == pair.mu.source(w)
}

/// A pair is minimal when a side is trivial or the last edges differ.
pub fn is_minimal(pair: &APair) -> bool {
    match (pair.lambda.edges.last(), pair.mu.edges.last()) {
        (Some(a), Some(b)) => a != b,
        _ => true,
    }
}

/// Strip the longest common suffix; the result is the unique minimal
/// pair under the original one.
pub fn strip_to_minimal(pair: &APair) -> APair {
    let mut out = pair.clone();
    while let (Some(&a), Some(&b)) = (out.lambda.edges.last(), out.mu.edges.last()) {
        if a != b {
            break;
        }
        out.lambda.edges.pop();
        out.mu.edges.pop();
    }
    out
}

fn sort_pairs(w: &Window, pairs: &mut [APair]) {
    pairs.sort_by(|a, b| {
        let ka = (a.lambda.len(), a.mu.len(), a.lambda.display(w), a.mu.display(w));
        let kb = (b.lambda.len(), b.mu.len(), b.lambda.display(w), b.mu.display(w));
        ka.cmp(&kb)
    });
}

/// All minimal cycle-free ancestry pairs for (v, u) visible in the window.
pub fn minimal_cycle_free_pairs_window(w: &Window, v: usize, u: usize) -> Vec<APair> {
    let into_v = w.paths_into(v, None, true);
    let into_u = w.paths_into(u, None, true);
    pair_up(w, &into_v, &into_u)
}

fn pair_up(w: &Window, into_v: &[Path], into_u: &[Path]) -> Vec<APair> {
    let mut by_source: BTreeMap<usize, Vec<&Path>> = BTreeMap::new();
    for p in into_u {
        by_source.entry(p.source(w)).or_default().push(p);
    }
    let mut out = Vec::new();
    for lam in into_v {
        let Some(mus) = by_source.get(&lam.source(w)) else {
            continue;
        };
        for &mu in mus {
            let pair = APair { lambda: lam.clone(), mu: mu.clone() };
            if is_minimal(&pair) {
                out.push(pair);
            }
        }
    }
    sort_pairs(w, &mut out);
    out
}

/// Result of a pair query: either the full finite list or evidence of an
/// infinite family.
#[derive(Debug, Clone)]
pub enum PairsResult {
    Finite(Vec<APair>),
    Infinite { representative: APair, pumpable: Vec<String>, rule: String },
}

const PUMP_RULE: &str = "reindex the pumpable edges: a bundle copy ranges over all its \
     siblings and a tail detour deepens by whole pump periods";

fn classify(w: &Window, pairs: Vec<APair>) -> PairsResult {
    match pairs.iter().find(|p| p.touches_pumpable(w)) {
        Some(found) => {
            let mut pumpable: Vec<String> = found
                .lambda
                .edges
                .iter()
                .chain(found.mu.edges.iter())
                .filter(|&&e| w.edges[e].pumpable)
                .map(|&e| w.edges[e].name.clone())
                .collect();
            pumpable.dedup();
            PairsResult::Infinite {
                representative: found.clone(),
                pumpable,
                rule: PUMP_RULE.to_string(),
            }
        }
        None => PairsResult::Finite(pairs),
    }
}

/// Minimal cycle-free ancestry pairs for the named query. Exact: a
/// finite list is complete, and an infinite answer carries a
/// representative of the family.
pub fn minimal_cycle_free_pairs(
    g: &GraphPresentation,
    v: &str,
    u: &str,
) -> Result<(Window, PairsResult), AnalysisError> {
    if let Some(b) = &g.bratteli {
        let a = b
            .vertex_lookup(v)
            .ok_or_else(|| AnalysisError::UnknownVertex(v.to_string()))?;
        let c = b
            .vertex_lookup(u)
            .ok_or_else(|| AnalysisError::UnknownVertex(u.to_string()))?;
        let deep = a.0.max(c.0);
        let w = Window::build(g, automaton::sufficient_depth(b, deep));
        let vi = w.vertex_index(v).expect("window reaches the query level");
        let ui = w.vertex_index(u).expect("window reaches the query level");
        let pairs = minimal_cycle_free_pairs_window(&w, vi, ui);
        if automaton::query_divergent(b, a, c) {
            let representative = pairs
                .last()
                .cloned()
                .expect("a divergent query has pairs at template depth");
            let result = PairsResult::Infinite {
                representative,
                pumpable: Vec::new(),
                rule: "the synchronized walk reaches a template state that lies on a \
                       cycle and still reaches an accepting move; pairs recur at \
                       every further level"
                    .to_string(),
            };
            return Ok((w, result));
        }
        return Ok((w, PairsResult::Finite(pairs)));
    }
    let w = Window::build(g, 0);
    let vi = w
        .vertex_index(v)
        .ok_or_else(|| AnalysisError::UnknownVertex(v.to_string()))?;
    let ui = w
        .vertex_index(u)
        .ok_or_else(|| AnalysisError::UnknownVertex(u.to_string()))?;
    let pairs = minimal_cycle_free_pairs_window(&w, vi, ui);
    let result = classify(&w, pairs);
    Ok((w, result))
}

/// Does every vertex pair admit only finitely many minimal cycle-free
/// ancestry pairs? Exact for every presentation.
pub fn finite_ancestry(g: &GraphPresentation) -> Verdict {
    if let Some(b) = &g.bratteli {
        return automaton::finite_ancestry_bratteli(b);
    }
    let w = Window::build(g, 0);
    let mut cached: Vec<Option<Vec<Path>>> = vec![None; w.vertex_count()];
    let mut largest = 0usize;
    for v in 0..w.vertex_count() {
        if cached[v].is_none() {
            cached[v] = Some(w.paths_into(v, None, true));
        }
        for u in 0..w.vertex_count() {
            if cached[u].is_none() {
                cached[u] = Some(w.paths_into(u, None, true));
            }
            let pairs = pair_up(
                &w,
                cached[v].as_ref().expect("filled above"),
                cached[u].as_ref().expect("filled above"),
            );
            largest = largest.max(pairs.len());
            if let PairsResult::Infinite { representative, pumpable, rule } =
                classify(&w, pairs)
            {
                let cert = Certificate::InfiniteFamily {
                    query: [w.vertices[v].name.clone(), w.vertices[u].name.clone()],
                    representative: representative.display(&w),
                    pumpable,
                    rule,
                };
                return Verdict::exact(Answer::No, cert);
            }
        }
    }
    let text = format!(
        "all {} window vertex pair queries have finite families; the largest \
         has {largest} pairs and none touches a pumpable edge",
        w.vertex_count() * w.vertex_count()
    );
    Verdict::exact(Answer::Yes, Certificate::Note { text })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;
    use crate::verdict::Depth;

    fn shown(w: &Window, pairs: &[APair]) -> Vec<[String; 2]> {
        pairs.iter().map(|p| p.display(w)).collect()
    }

    #[test]
    fn loop_query_has_the_trivial_pair_only() {
        let g = parse_graph("graph loop\nvertex v\nedge e : v -> v\nend\n").unwrap();
        let (w, r) = minimal_cycle_free_pairs(&g, "v", "v").unwrap();
        match r {
            PairsResult::Finite(pairs) => {
                assert_eq!(shown(&w, &pairs), vec![["v".to_string(), "v".to_string()]]);
            }
            _ => panic!("expected a finite list"),
        }
    }

    #[test]
    fn single_edge_gives_one_mixed_pair() {
        let g = parse_graph("graph a\nvertex u\nvertex v\nedge a : u -> v\nend\n").unwrap();
        let (w, r) = minimal_cycle_free_pairs(&g, "v", "u").unwrap();
        match r {
            PairsResult::Finite(pairs) => {
                assert_eq!(shown(&w, &pairs), vec![["a".to_string(), "u".to_string()]]);
            }
            _ => panic!("expected a finite list"),
        }
    }

    #[test]
    fn minimality_and_stripping() {
        let g = parse_graph("graph loop\nvertex v\nedge e : v -> v\nend\n").unwrap();
        let w = Window::build(&g, 2);
        let v = w.vertex_index("v").unwrap();
        let e = w.edge_index("e").unwrap();
        let trivial = Path { range: v, edges: vec![] };
        let one = Path { range: v, edges: vec![e] };
        let two = Path { range: v, edges: vec![e, e] };
        assert!(is_minimal(&APair { lambda: one.clone(), mu: trivial.clone() }));
        assert!(is_minimal(&APair { lambda: trivial.clone(), mu: trivial.clone() }));
        assert!(!is_minimal(&APair { lambda: two.clone(), mu: one.clone() }));
        let stripped = strip_to_minimal(&APair { lambda: two, mu: one });
        assert_eq!(stripped.lambda.edges.len(), 1);
        assert!(stripped.mu.is_empty());
    }

    #[test]
    fn bundle_queries_are_infinite() {
        let g = parse_graph("graph omega\nvertex u\nvertex v\nbundle b : u => v\nend\n").unwrap();
        let (w, r) = minimal_cycle_free_pairs(&g, "v", "v").unwrap();
        match r {
            PairsResult::Infinite { representative, pumpable, .. } => {
                assert_eq!(representative.display(&w), ["b.1", "b.2"]);
                assert_eq!(pumpable, vec!["b.1", "b.2"]);
            }
            _ => panic!("expected an infinite family"),
        }
        let (w, r) = minimal_cycle_free_pairs(&g, "v", "u").unwrap();
        match r {
            PairsResult::Infinite { representative, .. } => {
                assert_eq!(representative.display(&w), ["b.1", "u"]);
            }
            _ => panic!("expected an infinite family"),
        }
        let verdict = finite_ancestry(&g);
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.depth, Depth::Exact);
    }

    #[test]
    fn line_diagram_is_finite_everywhere() {
        let g = parse_graph("bratteli line\nprefix []\nrepeat [[1]]\nend\n").unwrap();
        let (w, r) = minimal_cycle_free_pairs(&g, "v1", "v1").unwrap();
        match r {
            PairsResult::Finite(pairs) => {
                assert_eq!(shown(&w, &pairs), vec![["v1".to_string(), "v1".to_string()]]);
            }
            _ => panic!("expected a finite list"),
        }
        let (_, r) = minimal_cycle_free_pairs(&g, "v1", "v3").unwrap();
        match r {
            PairsResult::Finite(pairs) => assert_eq!(pairs.len(), 1),
            _ => panic!("expected a finite list"),
        }
        assert_eq!(finite_ancestry(&g).answer, Answer::Yes);
    }

    #[test]
    fn uhf_diagram_fails_finite_ancestry_with_a_pump() {
        let g = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        let v = finite_ancestry(&g);
        assert_eq!(v.answer, Answer::No);
        assert!(matches!(v.certificate, Certificate::Pumping { .. }));
        let (_, r) = minimal_cycle_free_pairs(&g, "v1", "v2").unwrap();
        assert!(matches!(r, PairsResult::Infinite { .. }));
    }

    #[test]
    fn bare_tail_stays_finite() {
        let g = parse_graph("graph s\nvertex w\ntail w\nend\n").unwrap();
        let v = finite_ancestry(&g);
        assert_eq!(v.answer, Answer::Yes);
    }

    #[test]
    fn pumped_tail_from_another_vertex_is_infinite() {
        let g = parse_graph(
            "graph d\nvertex u\nvertex v\ntail v\npump v : u\nend\n",
        )
        .unwrap();
        let v = finite_ancestry(&g);
        assert_eq!(v.answer, Answer::No);
        match v.certificate {
            Certificate::InfiniteFamily { query, representative, .. } => {
                assert_eq!(query, ["u".to_string(), "v".to_string()]);
                assert_eq!(representative, ["u".to_string(), "v.p0".to_string()]);
            }
            c => panic!("unexpected certificate {c:?}"),
        }
    }

    #[test]
    fn truncated_uhf_pair_count_matches_the_automaton_closed_form() {
        let g = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        let w = Window::build(&g, 8);
        let v1 = w.vertex_index("v1").unwrap();
        let pairs = minimal_cycle_free_pairs_window(&w, v1, v1);
        let expected = 1 + (1..=8u32).map(|t| 2 * 4u64.pow(t - 1)).sum::<u64>();
        assert_eq!(pairs.len() as u64, expected);
    }
}
