//! Finite paths and eventually periodic infinite paths.
//!
//! A path e1 e2 ... en requires s(e_i) = r(e_(i+1)); its range is r(e1) and
//! its source is s(en). Vertices are the length-0 paths. Concatenation
//! `ab` is defined when s(a) = r(b). An infinite path is represented in
//! eventually periodic form: a finite prefix followed by a cycle repeated
//! forever, which is exactly the shape that carries isotropy.
//!
//! Paths store window-local indices; the owning `Window` supplies names and
//! endpoints.

use crate::window::Window;

/// A finite path in a window. `edges` is empty for the trivial path at
/// `range`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub range: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { range: v, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self, w: &Window) -> usize {
        match self.edges.last() {
            Some(&e) => w.edges[e].src,
            None => self.range,
        }
    }

    /// The vertices visited, starting at the range: n+1 entries for an
    /// n-edge path.
    pub fn vertex_walk(&self, w: &Window) -> Vec<usize> {
        let mut walk = Vec::with_capacity(self.edges.len() + 1);
        walk.push(self.range);
        for &e in &self.edges {
            walk.push(w.edges[e].src);
        }
        walk
    }

    /// A path contains a cycle exactly when it repeats a vertex.
    pub fn is_cycle_free(&self, w: &Window) -> bool {
        let mut walk = self.vertex_walk(w);
        walk.sort_unstable();
        walk.windows(2).all(|p| p[0] != p[1])
    }

    /// Composability and endpoint consistency against the window.
    pub fn well_formed(&self, w: &Window) -> bool {
        let mut at = self.range;
        for &e in &self.edges {
            let Some(edge) = w.edges.get(e) else { return false };
            if edge.rng != at {
                return false;
            }
            at = edge.src;
        }
        true
    }

    /// Concatenation; requires s(self) = r(other).
    pub fn concat(&self, other: &Path, w: &Window) -> Path {
        debug_assert_eq!(self.source(w), other.range);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { range: self.range, edges }
    }

    /// `self = prefix . rest` test by edge list.
    pub fn has_prefix(&self, prefix: &Path) -> bool {
        self.range == prefix.range
            && self.edges.len() >= prefix.edges.len()
            && self.edges[..prefix.edges.len()] == prefix.edges[..]
    }

    /// Edge names joined by spaces, or the vertex name when trivial.
    pub fn display(&self, w: &Window) -> String {
        if self.edges.is_empty() {
            w.vertices[self.range].name.clone()
        } else {
            self.edges
                .iter()
                .map(|&e| w.edges[e].name.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

/// An eventually periodic infinite path: `prefix . cycle . cycle . ...`
/// The cycle is nonempty with r(cycle) = s(cycle) = s(prefix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPInfinitePath {
    pub prefix: Path,
    pub cycle: Path,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl EPInfinitePath {
    pub fn new(prefix: Path, cycle: Path, w: &Window) -> Self {
        debug_assert!(!cycle.is_empty());
        debug_assert_eq!(prefix.source(w), cycle.range);
        debug_assert_eq!(cycle.source(w), cycle.range);
        EPInfinitePath { prefix, cycle }
    }

    pub fn range(&self) -> usize {
        self.prefix.range
    }

    /// The first `n` edges of the infinite path.
    pub fn truncate(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        out.extend(self.prefix.edges.iter().copied().take(n));
        while out.len() < n {
            let take = n - out.len();
            out.extend(self.cycle.edges.iter().copied().take(take));
        }
        out
    }

    /// Canonical form: shortest prefix and primitive cycle. Absorbing a
    /// shared final edge `g` rewrites (a g)(m g)^inf as a (g m)^inf, which
    /// is the same infinite path with a shorter prefix.
    pub fn canonicalize(&self, w: &Window) -> EPInfinitePath {
        let mut cycle = self.cycle.edges.clone();
        let mut cycle_range = self.cycle.range;
        let n = cycle.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| cycle[i] == cycle[i - p]) {
                cycle.truncate(p);
                break;
            }
        }
        let mut prefix = self.prefix.edges.clone();
        while let (Some(&pl), Some(&cl)) = (prefix.last(), cycle.last()) {
            if pl != cl {
                break;
            }
            prefix.pop();
            let g = cycle.pop().unwrap();
            cycle_range = w.edges[g].rng;
            cycle.insert(0, g);
        }
        EPInfinitePath {
            prefix: Path { range: self.prefix.range, edges: prefix },
            cycle: Path { range: cycle_range, edges: cycle },
        }
    }

    /// Remove the first `p` edges. Shifting past the prefix rotates the
    /// cycle.
    pub fn shift(&self, p: usize, w: &Window) -> EPInfinitePath {
        if p <= self.prefix.len() {
            let edges: Vec<usize> = self.prefix.edges[p..].to_vec();
            let range = if p == 0 {
                self.prefix.range
            } else {
                w.edges[self.prefix.edges[p - 1]].src
            };
            EPInfinitePath { prefix: Path { range, edges }, cycle: self.cycle.clone() }
        } else {
            let j = (p - self.prefix.len()) % self.cycle.len();
            let mut edges = self.cycle.edges[j..].to_vec();
            edges.extend_from_slice(&self.cycle.edges[..j]);
            let range = if j == 0 { self.cycle.range } else { w.edges[self.cycle.edges[j - 1]].src };
            EPInfinitePath {
                prefix: Path::trivial(range),
                cycle: Path { range, edges },
            }
        }
    }

    /// The depth at which two eventually periodic paths must be compared to
    /// decide equality: both prefixes plus two full joint periods.
    pub fn comparison_depth(&self, other: &EPInfinitePath) -> usize {
        self.prefix.len() + other.prefix.len() + 2 * lcm(self.cycle.len(), other.cycle.len())
    }

    /// Equality of the underlying infinite paths, decided by comparing
    /// truncations at the structural comparison depth.
    pub fn ep_equal(&self, other: &EPInfinitePath) -> bool {
        if self.range() != other.range() {
            return false;
        }
        let d = self.comparison_depth(other);
        self.truncate(d) == other.truncate(d)
    }

    /// Order of the isotropy group generator at this path: the length of
    /// the primitive cycle. Isotropy at an eventually periodic path is
    /// infinite cyclic, generated by the primitive period.
    pub fn isotropy_generator(&self) -> usize {
        let c = &self.cycle.edges;
        let n = c.len();
        for p in 1..n {
            if n % p == 0 && (p..n).all(|i| c[i] == c[i - p]) {
                return p;
            }
        }
        n
    }
}
