//! Simple cycles and the entrance condition.
//!
//! A cycle is a nontrivial path whose range and source coincide; it is
//! simple when no vertex repeats. An entrance to a cycle is an edge that
//! lands on a cycle vertex without being the cycle edge landing there.
//! Existence of an entrance to any cycle reduces to existence of an
//! entrance to a simple one: follow a non-simple cycle to its first
//! repeated vertex and the edge rejoining the inner loop from outside is
//! an entrance, so only simple cycles need checking.
//!
//! Everything runs on the window. A cycle through a tail position entered
//! at depth p has a twin entered one pump period lower, so cycles and
//! entrances beyond the window are always mirrored inside it.

use crate::graph::GraphPresentation;
use crate::path::Path;
use crate::verdict::{Answer, Certificate, Depth, Verdict};
use crate::window::Window;

/// All simple cycles of the window, each listed once, anchored at its
/// smallest vertex. Sorted by length, then display name.
pub fn simple_cycles(w: &Window) -> Vec<Path> {
    let n = w.vertex_count();
    let mut out = Vec::new();
    for s in 0..n {
        let mut edges = Vec::new();
        let mut visited = vec![false; n];
        visited[s] = true;
        cycle_dfs(w, s, s, &mut edges, &mut visited, &mut out);
    }
    out.sort_by(|a, b| (a.len(), a.display(w)).cmp(&(b.len(), b.display(w))));
    out
}

fn cycle_dfs(
    w: &Window,
    s: usize,
    at: usize,
    edges: &mut Vec<usize>,
    visited: &mut Vec<bool>,
    out: &mut Vec<Path>,
) {
    for &e in &w.into[at] {
        let next = w.edges[e].src;
        if next == s {
            edges.push(e);
            out.push(Path { range: s, edges: edges.clone() });
            edges.pop();
        } else if next > s && !visited[next] {
            visited[next] = true;
            edges.push(e);
            cycle_dfs(w, s, next, edges, visited, out);
            edges.pop();
            visited[next] = false;
        }
    }
}

/// The entrance to `cycle` with the smallest edge name, if any.
pub fn find_entrance(w: &Window, cycle: &Path) -> Option<usize> {
    let mut landing = vec![None; w.vertex_count()];
    for &e in &cycle.edges {
        landing[w.edges[e].rng] = Some(e);
    }
    (0..w.edges.len())
        .filter(|&f| landing[w.edges[f].rng].is_some_and(|e| e != f))
        .min_by(|&a, &b| w.edges[a].name.cmp(&w.edges[b].name))
}

/// Does every cycle lack an entrance? Exact both ways.
pub fn no_cycle_has_entrance(g: &GraphPresentation) -> Verdict {
    let w = Window::build(g, 1);
    let cycles = simple_cycles(&w);
    for c in &cycles {
        if let Some(f) = find_entrance(&w, c) {
            let cert = Certificate::CycleEntrance {
                cycle: c.edges.iter().map(|&e| w.edges[e].name.clone()).collect(),
                entrance: w.edges[f].name.clone(),
            };
            return Verdict::exact(Answer::No, cert);
        }
    }
    let listed = cycles
        .iter()
        .map(|c| c.edges.iter().map(|&e| w.edges[e].name.clone()).collect())
        .collect();
    Verdict::exact(Answer::Yes, Certificate::EntranceFree { simple_cycles: listed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;

    fn cycles_of(text: &str) -> (Window, Vec<String>) {
        let g = parse_graph(text).unwrap();
        let w = Window::build(&g, 1);
        let shown = simple_cycles(&w).iter().map(|c| c.display(&w)).collect();
        (w, shown)
    }

    #[test]
    fn loop_has_one_cycle_and_no_entrance() {
        let g = parse_graph("graph loop\nvertex v\nedge e : v -> v\nend\n").unwrap();
        let (_, shown) = cycles_of("graph loop\nvertex v\nedge e : v -> v\nend\n");
        assert_eq!(shown, vec!["e"]);
        let v = no_cycle_has_entrance(&g);
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.depth, Depth::Exact);
    }

    #[test]
    fn two_cycle_is_one_simple_cycle() {
        let (_, shown) =
            cycles_of("graph c2\nvertex u\nvertex v\nedge a : u -> v\nedge b : v -> u\nend\n");
        assert_eq!(shown, vec!["b a"]);
    }

    #[test]
    fn entrance_is_detected() {
        let g = parse_graph(
            "graph t\nvertex u\nvertex v\nedge e : v -> v\nedge g : u -> v\nend\n",
        )
        .unwrap();
        let v = no_cycle_has_entrance(&g);
        assert_eq!(v.answer, Answer::No);
        match v.certificate {
            Certificate::CycleEntrance { cycle, entrance } => {
                assert_eq!(cycle, vec!["e"]);
                assert_eq!(entrance, "g");
            }
            c => panic!("unexpected certificate {c:?}"),
        }
    }

    #[test]
    fn bratteli_diagrams_are_acyclic() {
        let g = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        let v = no_cycle_has_entrance(&g);
        assert_eq!(v.answer, Answer::Yes);
        assert!(matches!(
            v.certificate,
            Certificate::EntranceFree { ref simple_cycles } if simple_cycles.is_empty()
        ));
    }

    #[test]
    fn loop_bundle_copies_are_entrances_to_each_other() {
        let g = parse_graph("graph lb\nvertex v\nbundle b : v => v\nend\n").unwrap();
        let v = no_cycle_has_entrance(&g);
        assert_eq!(v.answer, Answer::No);
        match v.certificate {
            Certificate::CycleEntrance { cycle, entrance } => {
                assert_eq!(cycle, vec!["b.1"]);
                assert_eq!(entrance, "b.2");
            }
            c => panic!("unexpected certificate {c:?}"),
        }
    }

    #[test]
    fn tail_edge_is_an_entrance_to_an_attach_cycle() {
        let g = parse_graph(
            "graph t\nvertex u\nvertex v\nedge e : v -> v\nedge x : v -> u\ntail v\n\
             pump v : u\nend\n",
        )
        .unwrap();
        let v = no_cycle_has_entrance(&g);
        assert_eq!(v.answer, Answer::No);
        match v.certificate {
            Certificate::CycleEntrance { cycle, entrance } => {
                assert_eq!(cycle, vec!["e"]);
                assert_eq!(entrance, "v.f1");
            }
            c => panic!("unexpected certificate {c:?}"),
        }
    }

    #[test]
    fn detour_cycles_through_the_tail_have_entrances() {
        let g = parse_graph(
            "graph d\nvertex u\nvertex v\nedge x : v -> u\ntail v\npump v : u\nend\n",
        )
        .unwrap();
        let v = no_cycle_has_entrance(&g);
        assert_eq!(v.answer, Answer::No, "u -> v.p -> ... -> v -> u closes up");
    }
}
