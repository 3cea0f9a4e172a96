//! Finite materializations of possibly infinite presentations.
//!
//! All path-level computation happens on a `Window`: a finite graph holding
//! the core vertices and edges verbatim, two representative copies of every
//! bundle, and every tail cut off at a depth that covers the explicit
//! redirect zone plus two full pump periods. Edges arising from a bundle or
//! from the pump zone of a tail are marked pumpable: a minimal cycle-free
//! ancestry pair that touches a pumpable edge generates an infinite family
//! by varying the copy index or the detour depth, and conversely every
//! infinite family projects onto a pair visible in the window with these
//! markings, which is what makes the finiteness decisions exact.
//!
//! Bratteli diagrams materialize level by level; the deepest level is a
//! boundary, counted as live because the real diagram continues below it.

use std::collections::BTreeMap;

use crate::error::AnalysisError;
use crate::graph::GraphPresentation;
use crate::path::Path;

#[derive(Debug, Clone)]
pub struct WVertex {
    pub name: String,
    /// True when the real graph continues past this vertex outside the
    /// window, so it must be treated as live regardless of in-window edges.
    pub boundary: bool,
    /// The presentation vertex this window vertex mirrors, if any.
    pub core: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct WEdge {
    pub name: String,
    pub src: usize,
    pub rng: usize,
    /// True for bundle copies and pump-zone tail edges: the edge stands for
    /// an infinite supply of siblings.
    pub pumpable: bool,
}

#[derive(Debug, Clone)]
pub struct Window {
    pub vertices: Vec<WVertex>,
    pub edges: Vec<WEdge>,
    vertex_names: BTreeMap<String, usize>,
    edge_names: BTreeMap<String, usize>,
    /// Edges with range v, sorted by edge name.
    pub into: Vec<Vec<usize>>,
    /// Vertices from which an infinite path can be extended forever.
    pub live: Vec<bool>,
}

impl Window {
    /// Materialize `g` far enough that paths of length `min_len` are
    /// represented wherever they exist.
    pub fn build(g: &GraphPresentation, min_len: usize) -> Window {
        let mut w = Window {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_names: BTreeMap::new(),
            edge_names: BTreeMap::new(),
            into: Vec::new(),
            live: Vec::new(),
        };
        if let Some(b) = &g.bratteli {
            let levels = (min_len + 1).max(2);
            let mut level_vertex = Vec::with_capacity(levels + 1);
            level_vertex.push(Vec::new());
            for n in 1..=levels {
                let mut row = Vec::new();
                for i in 0..b.level_size(n) {
                    row.push(w.add_vertex(b.vertex_name(n, i), n == levels, None));
                }
                level_vertex.push(row);
            }
            for n in 1..levels {
                let m = b.matrix_for_level(n);
                for i in 0..b.level_size(n) {
                    for j in 0..b.level_size(n + 1) {
                        for c in 0..m[i][j] {
                            w.add_edge(
                                b.edge_name(n, i, j, c),
                                level_vertex[n + 1][j],
                                level_vertex[n][i],
                                false,
                            );
                        }
                    }
                }
            }
        } else {
            for (i, v) in g.vertices.iter().enumerate() {
                w.add_vertex(v.clone(), false, Some(i));
            }
            for e in &g.edges {
                w.add_edge(e.name.clone(), e.src, e.rng, false);
            }
            for b in &g.bundles {
                w.add_edge(format!("{}.1", b.name), b.src, b.rng, true);
                w.add_edge(format!("{}.2", b.name), b.src, b.rng, true);
            }
            for t in &g.tails {
                let attach = &g.vertices[t.attach];
                let base = t.pump_base();
                let period = t.pump.len().max(1) as u64;
                let depth = (base + 2 * period + 2).max(min_len as u64 + 1);
                let mut below = t.attach;
                for i in 1..=depth {
                    let vi = w.add_vertex(format!("{attach}.{i}"), i == depth, None);
                    w.add_edge(format!("{attach}.f{i}"), vi, below, false);
                    below = vi;
                }
                for r in &t.redirects {
                    let rng = w.tail_position(g, t.attach, r.pos);
                    w.add_edge(r.name.clone(), r.src, rng, false);
                }
                if !t.pump.is_empty() {
                    for pos in base..=depth {
                        let src = t.pump[((pos - base) % t.pump.len() as u64) as usize];
                        let rng = w.tail_position(g, t.attach, pos);
                        w.add_edge(format!("{attach}.p{pos}"), src, rng, true);
                    }
                }
            }
        }
        for list in &mut w.into {
            let edges = &w.edges;
            list.sort_by(|&a, &b| edges[a].name.cmp(&edges[b].name));
        }
        w.live = w.compute_live();
        w
    }

    fn add_vertex(&mut self, name: String, boundary: bool, core: Option<usize>) -> usize {
        let idx = self.vertices.len();
        let prev = self.vertex_names.insert(name.clone(), idx);
        debug_assert!(prev.is_none(), "window vertex name collision: {name}");
        self.vertices.push(WVertex { name, boundary, core });
        self.into.push(Vec::new());
        idx
    }

    fn add_edge(&mut self, name: String, src: usize, rng: usize, pumpable: bool) -> usize {
        let idx = self.edges.len();
        let prev = self.edge_names.insert(name.clone(), idx);
        debug_assert!(prev.is_none(), "window edge name collision: {name}");
        self.edges.push(WEdge { name, src, rng, pumpable });
        self.into[rng].push(idx);
        idx
    }

    /// Window vertex sitting at `pos` on the tail below `attach`;
    /// position 0 is the attach vertex itself.
    fn tail_position(&self, g: &GraphPresentation, attach: usize, pos: u64) -> usize {
        if pos == 0 {
            attach
        } else {
            let name = format!("{}.{pos}", g.vertices[attach]);
            *self.vertex_names.get(&name).expect("tail position inside window")
        }
    }

    /// Greatest fixed point of "receives an edge from a live vertex";
    /// boundary vertices are live by fiat.
    fn compute_live(&self) -> Vec<bool> {
        let mut live = vec![true; self.vertices.len()];
        loop {
            let mut changed = false;
            for v in 0..self.vertices.len() {
                if !live[v] || self.vertices[v].boundary {
                    continue;
                }
                let ok = self.into[v].iter().any(|&e| live[self.edges[e].src]);
                if !ok {
                    live[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return live;
            }
        }
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.get(name).copied()
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.get(name).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// All paths with range `v`, length at most `max_len` (unbounded when
    /// `None`, which requires `cycle_free`), cycle-free if requested.
    /// Sorted by length, then display name.
    pub fn paths_into(&self, v: usize, max_len: Option<usize>, cycle_free: bool) -> Vec<Path> {
        assert!(
            max_len.is_some() || cycle_free,
            "unbounded enumeration requires the cycle-free restriction"
        );
        let mut out = Vec::new();
        let mut edges = Vec::new();
        let mut visited = vec![false; self.vertices.len()];
        visited[v] = true;
        self.paths_dfs(v, v, max_len, cycle_free, &mut edges, &mut visited, &mut out);
        out.sort_by(|a, b| {
            (a.len(), a.display(self)).cmp(&(b.len(), b.display(self)))
        });
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn paths_dfs(
        &self,
        range: usize,
        at: usize,
        max_len: Option<usize>,
        cycle_free: bool,
        edges: &mut Vec<usize>,
        visited: &mut Vec<bool>,
        out: &mut Vec<Path>,
    ) {
        out.push(Path { range, edges: edges.clone() });
        if let Some(m) = max_len {
            if edges.len() >= m {
                return;
            }
        }
        for &e in &self.into[at] {
            let next = self.edges[e].src;
            if cycle_free && visited[next] {
                continue;
            }
            visited[next] = true;
            edges.push(e);
            self.paths_dfs(range, next, max_len, cycle_free, edges, visited, out);
            edges.pop();
            visited[next] = false;
        }
    }

    /// Paths of exactly `len` edges from `v` whose source is live: the
    /// depth-`len` truncations of infinite paths with range `v`.
    pub fn live_paths_into(&self, v: usize, len: usize) -> Vec<Path> {
        self.paths_into(v, Some(len), false)
            .into_iter()
            .filter(|p| p.len() == len && self.live[p.source(self)])
            .collect()
    }
}

/// All paths of the presented graph with the given range, up to `max_len`
/// (or every cycle-free path when `max_len` is `None`). Bundles contribute
/// two representative copies; the true path set repeats each of them once
/// per copy index.
pub fn enumerate_paths(
    g: &GraphPresentation,
    from_range: &str,
    max_len: Option<usize>,
    cycle_free: bool,
) -> Result<(Window, Vec<Path>), AnalysisError> {
    let w = Window::build(g, max_len.unwrap_or(4));
    let v = w
        .vertex_index(from_range)
        .ok_or_else(|| AnalysisError::UnknownVertex(from_range.to_string()))?;
    let paths = w.paths_into(v, max_len, cycle_free);
    Ok((w, paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;

    #[test]
    fn loop_paths_up_to_two() {
        let g = parse_graph("graph loop\nvertex v\nedge e : v -> v\nend\n").unwrap();
        let (w, paths) = enumerate_paths(&g, "v", Some(2), false).unwrap();
        let shown: Vec<String> = paths.iter().map(|p| p.display(&w)).collect();
        assert_eq!(shown, vec!["v", "e", "e e"]);
        let (w, paths) = enumerate_paths(&g, "v", None, true).unwrap();
        let shown: Vec<String> = paths.iter().map(|p| p.display(&w)).collect();
        assert_eq!(shown, vec!["v"]);
    }

    #[test]
    fn uhf_paths_up_to_two() {
        let g = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        let (w, paths) = enumerate_paths(&g, "v1", Some(2), false).unwrap();
        let shown: Vec<String> = paths.iter().map(|p| p.display(&w)).collect();
        assert_eq!(
            shown,
            vec!["v1", "e1", "f1", "e1 e2", "e1 f2", "f1 e2", "f1 f2"]
        );
    }

    #[test]
    fn bundle_materializes_two_pumpable_copies() {
        let g = parse_graph("graph omega\nvertex u\nvertex v\nbundle b : u => v\nend\n").unwrap();
        let (w, paths) = enumerate_paths(&g, "v", Some(1), false).unwrap();
        let shown: Vec<String> = paths.iter().map(|p| p.display(&w)).collect();
        assert_eq!(shown, vec!["v", "b.1", "b.2"]);
        assert!(w.edges[w.edge_index("b.1").unwrap()].pumpable);
    }

    #[test]
    fn dead_vertices_are_not_live() {
        let g = parse_graph(
            "graph s\nvertex v\nvertex w\nedge e : w -> v\nedge l : v -> v\nend\n",
        )
        .unwrap();
        let w = Window::build(&g, 3);
        assert!(w.live[w.vertex_index("v").unwrap()]);
        assert!(!w.live[w.vertex_index("w").unwrap()]);
    }

    #[test]
    fn tail_window_has_boundary_and_pump_edges() {
        let g = parse_graph(
            "graph d\nvertex u\nvertex v\ntail v\npump v : u\nend\n",
        )
        .unwrap();
        let w = Window::build(&g, 2);
        assert!(w.vertex_index("v.1").is_some());
        let p0 = w.edge_index("v.p0").unwrap();
        assert!(w.edges[p0].pumpable);
        assert_eq!(w.edges[p0].rng, w.vertex_index("v").unwrap());
        let f1 = w.edge_index("v.f1").unwrap();
        assert_eq!(w.edges[f1].rng, w.vertex_index("v").unwrap());
        assert_eq!(w.edges[f1].src, w.vertex_index("v.1").unwrap());
        assert!(w.live[w.vertex_index("v").unwrap()], "tail keeps the attach vertex live");
        assert!(w.live[w.vertex_index("v.1").unwrap()]);
        assert!(!w.live[w.vertex_index("u").unwrap()], "u receives nothing");
    }
}
