//! Finitely presented directed graphs.
//!
//! A presentation lists finitely many vertices and edges, and may additionally
//! carry three kinds of infinite structure, each described by a finite record:
//!
//! * a `bundle` stands for countably many parallel edges with the same source
//!   and range, making the range an infinite receiver;
//! * a `tail` attaches an infinite chain v.1, v.2, ... below a vertex v, with
//!   edges f_i from v.i to v.(i-1) (and v.0 = v);
//! * `redirect` and `pump` records place extra edges from core vertices onto
//!   the tail positions, which is how a desingularized infinite receiver is
//!   written down: `redirect` names one edge at one position, `pump` fills
//!   every later position round-robin from a list of source vertices.
//!
//! A presentation may alternatively consist of a Bratteli diagram, in which
//! case all of the above lists are empty. Edges are written source to range:
//! an edge `e : u -> v` has s(e) = u and r(e) = v.

use crate::bratteli::BratteliPresentation;

/// An edge or a bundle of parallel edges, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub rng: usize,
}

/// A named edge from a core vertex onto position `pos` of a tail.
/// Position 0 is the attach vertex itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redirect {
    pub name: String,
    pub src: usize,
    pub pos: u64,
}

/// An infinite chain attached below `attach`. Explicit redirects occupy
/// positions 0..k-1; if `pump` is nonempty, every position from k on receives
/// one edge whose source cycles through the pump list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tail {
    pub attach: usize,
    pub redirects: Vec<Redirect>,
    pub pump: Vec<usize>,
}

impl Tail {
    /// First position filled by the pump, one past the explicit redirects.
    pub fn pump_base(&self) -> u64 {
        self.redirects.len() as u64
    }
}

/// A finitely presented graph, possibly with bundles and tails, or a
/// Bratteli diagram. At most one of `bratteli` and `bundles`/`tails` is
/// populated.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPresentation {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub bundles: Vec<Edge>,
    pub tails: Vec<Tail>,
    pub bratteli: Option<BratteliPresentation>,
}

impl GraphPresentation {
    pub fn finite(name: impl Into<String>) -> Self {
        GraphPresentation {
            name: name.into(),
            vertices: Vec::new(),
            edges: Vec::new(),
            bundles: Vec::new(),
            tails: Vec::new(),
            bratteli: None,
        }
    }

    pub fn is_bratteli(&self) -> bool {
        self.bratteli.is_some()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Structural invariants that every presentation must satisfy,
    /// independent of how it was constructed.
    pub fn validate(&self) -> Result<(), String> {
        if let Some(b) = &self.bratteli {
            if !self.vertices.is_empty()
                || !self.edges.is_empty()
                || !self.bundles.is_empty()
                || !self.tails.is_empty()
            {
                return Err("a Bratteli presentation carries no vertex or edge records".into());
            }
            return b.validate();
        }
        let n = self.vertices.len();
        for e in self.edges.iter().chain(self.bundles.iter()) {
            if e.src >= n || e.rng >= n {
                return Err(format!("edge `{}` has an endpoint out of range", e.name));
            }
        }
        let mut seen_attach = std::collections::BTreeSet::new();
        for t in &self.tails {
            if t.attach >= n {
                return Err("tail attach vertex out of range".into());
            }
            if !seen_attach.insert(t.attach) {
                return Err(format!(
                    "vertex `{}` carries more than one tail",
                    self.vertices[t.attach]
                ));
            }
            for (i, r) in t.redirects.iter().enumerate() {
                if r.src >= n {
                    return Err(format!("redirect `{}` has a source out of range", r.name));
                }
                if r.pos != i as u64 {
                    return Err(format!(
                        "redirect positions on tail `{}` must be contiguous from 0",
                        self.vertices[t.attach]
                    ));
                }
            }
            for &p in &t.pump {
                if p >= n {
                    return Err("pump source out of range".into());
                }
            }
        }
        let mut names = std::collections::BTreeSet::new();
        for v in &self.vertices {
            if !names.insert(v.clone()) {
                return Err(format!("duplicate identifier `{v}`"));
            }
        }
        for e in self.edges.iter().chain(self.bundles.iter()) {
            if !names.insert(e.name.clone()) {
                return Err(format!("duplicate identifier `{}`", e.name));
            }
        }
        for t in &self.tails {
            for r in &t.redirects {
                if !names.insert(r.name.clone()) {
                    return Err(format!("duplicate identifier `{}`", r.name));
                }
            }
        }
        Ok(())
    }

    pub fn tail_at(&self, v: usize) -> Option<&Tail> {
        self.tails.iter().find(|t| t.attach == v)
    }

    /// Vertices that receive no edge at all. A tail feeds its attach vertex,
    /// and a position-0 redirect or pump feeds the attach vertex too, so
    /// those vertices are not sources.
    pub fn sources(&self) -> Vec<usize> {
        let mut receives = vec![false; self.vertices.len()];
        for e in self.edges.iter().chain(self.bundles.iter()) {
            receives[e.rng] = true;
        }
        for t in &self.tails {
            receives[t.attach] = true;
        }
        (0..self.vertices.len()).filter(|&v| !receives[v]).collect()
    }

    /// Vertices receiving infinitely many edges, i.e. the range of a bundle.
    pub fn infinite_receivers(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.bundles.iter().map(|b| b.rng).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Sources and infinite receivers together.
    pub fn singular_vertices(&self) -> Vec<usize> {
        let mut out = self.sources();
        out.extend(self.infinite_receivers());
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_singular(&self) -> bool {
        !self.is_bratteli() && !self.singular_vertices().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> GraphPresentation {
        let mut g = GraphPresentation::finite("loop");
        g.vertices.push("v".into());
        g.edges.push(Edge { name: "e".into(), src: 0, rng: 0 });
        g
    }

    #[test]
    fn loop_graph_is_regular() {
        let g = loop_graph();
        g.validate().unwrap();
        assert!(g.sources().is_empty());
        assert!(g.infinite_receivers().is_empty());
        assert!(!g.is_singular());
    }

    #[test]
    fn bundle_range_is_an_infinite_receiver() {
        let mut g = GraphPresentation::finite("omega");
        g.vertices.extend(["u".to_string(), "v".to_string()]);
        g.bundles.push(Edge { name: "b".into(), src: 0, rng: 1 });
        g.validate().unwrap();
        assert_eq!(g.sources(), vec![0]);
        assert_eq!(g.infinite_receivers(), vec![1]);
        assert_eq!(g.singular_vertices(), vec![0, 1]);
    }

    #[test]
    fn tail_feeds_its_attach_vertex() {
        let mut g = GraphPresentation::finite("src");
        g.vertices.extend(["v".to_string(), "w".to_string()]);
        g.edges.push(Edge { name: "e".into(), src: 1, rng: 0 });
        g.tails.push(Tail { attach: 1, redirects: vec![], pump: vec![] });
        g.validate().unwrap();
        assert!(g.sources().is_empty());
    }

    #[test]
    fn redirect_positions_must_be_contiguous() {
        let mut g = GraphPresentation::finite("bad");
        g.vertices.extend(["u".to_string(), "v".to_string()]);
        g.tails.push(Tail {
            attach: 1,
            redirects: vec![Redirect { name: "g1".into(), src: 0, pos: 1 }],
            pump: vec![],
        });
        assert!(g.validate().is_err());
    }
}
