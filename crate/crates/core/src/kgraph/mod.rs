//! Rank-2 graphs: two edge colors with a square commutation rule.
//!
//! A colored presentation lists blue and red edges over one vertex set
//! and, for every composable blue-red pair, the unique red-blue pair it
//! equals. Paths are kept in a normal form with all blue edges first;
//! the square map and its inverse mediate every reordering, so degree-
//! respecting factorization is total and unique. A product presentation
//! instead names two ordinary presentations and colors the first's
//! edges blue and the second's red; all squares commute freely there
//! and never need to be written down.
//!
//! Validation requires the square map to be a bijection between the
//! composable blue-red and red-blue pairs with matching endpoints, and
//! every vertex to receive at least one edge of each color, which keeps
//! every degree-indexed path set nonempty and finite.

mod analysis;
mod word;

pub use analysis::{
    ctrace_k, gen_cycle_has_entrance, is_generalized_cycle, is_tight,
    minimal_ancestry_pairs_k, strictly_aperiodic, strong_finite_ancestry, KPairsReport,
};
pub use word::{compose, factorize, EPKPath, KPath};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::AnalysisError;
use crate::graph::GraphPresentation;

/// One colored edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CEdge {
    pub name: String,
    pub src: usize,
    pub rng: usize,
}

/// A rank-2 graph given by colored edges and explicit squares. The map
/// sends a composable (blue, red) key to the (red, blue) pair equal to
/// it as a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredKGraph {
    pub name: String,
    pub vertices: Vec<String>,
    pub blues: Vec<CEdge>,
    pub reds: Vec<CEdge>,
    pub squares: BTreeMap<(usize, usize), (usize, usize)>,
}

/// A rank-2 graph presented as the product of two ordinary graphs: the
/// first factor's paths in the blue coordinate, the second's in red.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductKGraph {
    pub name: String,
    pub factors: [GraphPresentation; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KGraph2 {
    Colored(ColoredKGraph),
    Product(Box<ProductKGraph>),
}

impl ColoredKGraph {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// The square map read backwards: a composable (red, blue) key to
    /// the (blue, red) pair equal to it.
    pub fn inverse_squares(&self) -> BTreeMap<(usize, usize), (usize, usize)> {
        self.squares.iter().map(|(&(b, r), &(r2, b2))| ((r2, b2), (b, r))).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.vertices.is_empty() {
            return Err("a higher-rank graph needs at least one vertex".to_string());
        }
        let mut names = BTreeSet::new();
        for n in self
            .vertices
            .iter()
            .chain(self.blues.iter().map(|e| &e.name))
            .chain(self.reds.iter().map(|e| &e.name))
        {
            if !names.insert(n.clone()) {
                return Err(format!("identifier `{n}` is declared twice"));
            }
        }
        for v in 0..self.vertices.len() {
            if !self.blues.iter().any(|e| e.rng == v) || !self.reds.iter().any(|e| e.rng == v) {
                return Err(format!(
                    "vertex `{}` must receive an edge of each color",
                    self.vertices[v]
                ));
            }
        }
        let mut seen_values = BTreeSet::new();
        for (&(b, r), &(r2, b2)) in &self.squares {
            let (blue, red) = (&self.blues[b], &self.reds[r]);
            let (red2, blue2) = (&self.reds[r2], &self.blues[b2]);
            if blue.src != red.rng {
                return Err(format!(
                    "square key `{} {}` is not a composable blue-red pair",
                    blue.name, red.name
                ));
            }
            if red2.src != blue2.rng {
                return Err(format!(
                    "square value `{} {}` is not a composable red-blue pair",
                    red2.name, blue2.name
                ));
            }
            if red2.rng != blue.rng || blue2.src != red.src {
                return Err(format!(
                    "square `{} {} ~ {} {}` does not preserve endpoints",
                    blue.name, red.name, red2.name, blue2.name
                ));
            }
            if !seen_values.insert((r2, b2)) {
                return Err(format!(
                    "two squares share the value `{} {}`",
                    red2.name, blue2.name
                ));
            }
        }
        for (b, blue) in self.blues.iter().enumerate() {
            for (r, red) in self.reds.iter().enumerate() {
                if blue.src == red.rng && !self.squares.contains_key(&(b, r)) {
                    return Err(format!(
                        "composable pair `{} {}` has no square",
                        blue.name, red.name
                    ));
                }
            }
        }
        for (r2, red2) in self.reds.iter().enumerate() {
            for (b2, blue2) in self.blues.iter().enumerate() {
                if red2.src == blue2.rng && !seen_values.contains(&(r2, b2)) {
                    return Err(format!(
                        "composable pair `{} {}` is not the value of any square",
                        red2.name, blue2.name
                    ));
                }
            }
        }
        Ok(())
    }
}

impl KGraph2 {
    pub fn name(&self) -> &str {
        match self {
            KGraph2::Colored(c) => &c.name,
            KGraph2::Product(p) => &p.name,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            KGraph2::Colored(c) => c.validate(),
            KGraph2::Product(p) => {
                for g in &p.factors {
                    g.validate()?;
                    if !g.is_bratteli() {
                        if !g.bundles.is_empty() {
                            return Err(format!(
                                "product factor `{}` has an infinite receiver; factors \
                                 must be row-finite",
                                g.name
                            ));
                        }
                        if !g.sources().is_empty() {
                            return Err(format!(
                                "product factor `{}` has a source; regularize it first",
                                g.name
                            ));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// All normal-form paths with the given range and exact degree.
pub fn enumerate_colored(kg: &ColoredKGraph, v: usize, degree: (usize, usize)) -> Vec<KPath> {
    let mut blue_chains: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..degree.0 {
        let mut next = Vec::new();
        for chain in &blue_chains {
            let at = chain.last().map_or(v, |&e| kg.blues[e].src);
            for (i, e) in kg.blues.iter().enumerate() {
                if e.rng == at {
                    let mut c = chain.clone();
                    c.push(i);
                    next.push(c);
                }
            }
        }
        blue_chains = next;
    }
    let mut out = Vec::new();
    for blues in blue_chains {
        let mid = blues.last().map_or(v, |&e| kg.blues[e].src);
        let mut red_chains: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..degree.1 {
            let mut next = Vec::new();
            for chain in &red_chains {
                let at = chain.last().map_or(mid, |&e| kg.reds[e].src);
                for (i, e) in kg.reds.iter().enumerate() {
                    if e.rng == at {
                        let mut c = chain.clone();
                        c.push(i);
                        next.push(c);
                    }
                }
            }
            red_chains = next;
        }
        for reds in red_chains {
            out.push(KPath { range: v, blues: blues.clone(), reds });
        }
    }
    out.sort_by_key(|p| p.display(kg));
    out
}

/// The degree-indexed path count interface: displays of all paths with
/// the named range and exact degree.
pub fn enumerate_lambda_n(
    kg: &KGraph2,
    v: &str,
    degree: (usize, usize),
) -> Result<Vec<String>, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            let vi = c
                .vertex_index(v)
                .ok_or_else(|| AnalysisError::UnknownVertex(v.to_string()))?;
            Ok(enumerate_colored(c, vi, degree).iter().map(|p| p.display(c)).collect())
        }
        KGraph2::Product(p) => {
            let (v1, v2) = split_product_vertex(v)?;
            let mut out = Vec::new();
            let (w1, paths1) =
                crate::window::enumerate_paths(&p.factors[0], &v1, Some(degree.0), false)?;
            let (w2, paths2) =
                crate::window::enumerate_paths(&p.factors[1], &v2, Some(degree.1), false)?;
            for a in paths1.iter().filter(|a| a.len() == degree.0) {
                for b in paths2.iter().filter(|b| b.len() == degree.1) {
                    out.push(format!("{} | {}", a.display(&w1), b.display(&w2)));
                }
            }
            out.sort();
            Ok(out)
        }
    }
}

/// Split a product vertex written `v,w` into its coordinates.
pub fn split_product_vertex(v: &str) -> Result<(String, String), AnalysisError> {
    v.split_once(',')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| {
            AnalysisError::UnknownVertex(format!(
                "`{v}`: a product vertex is written `first,second`"
            ))
        })
}

/// Embed an ordinary presentation as a rank-2 graph: its edges turn
/// blue and every vertex gains one red self-loop, which commutes with
/// each blue edge in the only endpoint-respecting way.
pub fn embed_1graph(g: &GraphPresentation) -> Result<ColoredKGraph, AnalysisError> {
    if g.is_bratteli() || !g.bundles.is_empty() || !g.tails.is_empty() {
        return Err(AnalysisError::Unsupported(
            "only a finite plain presentation embeds as a rank-2 graph".to_string(),
        ));
    }
    if !g.sources().is_empty() {
        return Err(AnalysisError::Unsupported(
            "the embedded presentation must have no sources".to_string(),
        ));
    }
    let used: BTreeSet<&String> =
        g.vertices.iter().chain(g.edges.iter().map(|e| &e.name)).collect();
    let reds: Vec<CEdge> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut name = format!("rho_{v}");
            while used.contains(&name) {
                name.push('_');
            }
            CEdge { name, src: i, rng: i }
        })
        .collect();
    let blues: Vec<CEdge> = g
        .edges
        .iter()
        .map(|e| CEdge { name: e.name.clone(), src: e.src, rng: e.rng })
        .collect();
    let squares = blues
        .iter()
        .enumerate()
        .map(|(b, e)| ((b, e.src), (e.rng, b)))
        .collect();
    let kg = ColoredKGraph {
        name: format!("{}_embedded", g.name),
        vertices: g.vertices.clone(),
        blues,
        reds,
        squares,
    };
    kg.validate().map_err(AnalysisError::Unsupported)?;
    Ok(kg)
}

#[cfg(test)]
pub(crate) fn torus() -> ColoredKGraph {
    let kg = ColoredKGraph {
        name: "torus".to_string(),
        vertices: vec!["v".to_string()],
        blues: vec![CEdge { name: "b".to_string(), src: 0, rng: 0 }],
        reds: vec![CEdge { name: "r".to_string(), src: 0, rng: 0 }],
        squares: [((0, 0), (0, 0))].into(),
    };
    kg.validate().unwrap();
    kg
}

#[cfg(test)]
pub(crate) fn twoblue() -> ColoredKGraph {
    let kg = ColoredKGraph {
        name: "twoblue".to_string(),
        vertices: vec!["v".to_string()],
        blues: vec![
            CEdge { name: "b1".to_string(), src: 0, rng: 0 },
            CEdge { name: "b2".to_string(), src: 0, rng: 0 },
        ],
        reds: vec![CEdge { name: "r".to_string(), src: 0, rng: 0 }],
        squares: [((0, 0), (0, 0)), ((1, 0), (0, 1))].into(),
    };
    kg.validate().unwrap();
    kg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;

    #[test]
    fn torus_and_twoblue_validate() {
        torus();
        twoblue();
    }

    #[test]
    fn missing_square_is_rejected() {
        let mut kg = twoblue();
        kg.squares.remove(&(1, 0));
        let err = kg.validate().unwrap_err();
        assert!(err.contains("has no square"), "{err}");
    }

    #[test]
    fn duplicate_square_value_is_rejected() {
        let mut kg = twoblue();
        kg.squares.insert((1, 0), (0, 0));
        let err = kg.validate().unwrap_err();
        assert!(err.contains("share the value") || err.contains("not the value"), "{err}");
    }

    #[test]
    fn path_counts_by_degree() {
        let t = torus();
        assert_eq!(enumerate_colored(&t, 0, (1, 1)).len(), 1);
        let tb = twoblue();
        assert_eq!(enumerate_colored(&tb, 0, (2, 0)).len(), 4);
        assert_eq!(enumerate_colored(&tb, 0, (1, 1)).len(), 2);
    }

    #[test]
    fn loop_graph_embeds() {
        let g = parse_graph("graph loop\nvertex v\nedge e : v -> v\nend\n").unwrap();
        let kg = embed_1graph(&g).unwrap();
        assert_eq!(kg.blues.len(), 1);
        assert_eq!(kg.reds.len(), 1);
        assert_eq!(kg.squares.len(), 1);
        let src = parse_graph("graph s\nvertex u\nvertex v\nedge a : u -> v\nend\n").unwrap();
        assert!(embed_1graph(&src).is_err(), "sources do not embed");
    }
}
