//! Normal-form words in a rank-2 graph.
//!
//! Every path is stored blue-block-first. Composition pushes incoming
//! blue edges left through the red block with the inverse square map;
//! factorization pulls the requested number of red edges forward
//! through trailing blue edges with the forward map. Because the square
//! map is a bijection on composable pairs, both moves are total and
//! deterministic, and factorization at a fixed degree is unique.

use super::ColoredKGraph;

/// A path in normal form: blue edges from the range, then red edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct KPath {
    pub range: usize,
    pub blues: Vec<usize>,
    pub reds: Vec<usize>,
}

impl KPath {
    pub fn trivial(v: usize) -> Self {
        KPath { range: v, blues: Vec::new(), reds: Vec::new() }
    }

    pub fn degree(&self) -> (usize, usize) {
        (self.blues.len(), self.reds.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.blues.is_empty() && self.reds.is_empty()
    }

    /// The vertex after the blue block.
    pub fn mid(&self, kg: &ColoredKGraph) -> usize {
        self.blues.last().map_or(self.range, |&e| kg.blues[e].src)
    }

    pub fn source(&self, kg: &ColoredKGraph) -> usize {
        self.reds.last().map_or(self.mid(kg), |&e| kg.reds[e].src)
    }

    pub fn well_formed(&self, kg: &ColoredKGraph) -> bool {
        let mut at = self.range;
        for &e in &self.blues {
            if kg.blues[e].rng != at {
                return false;
            }
            at = kg.blues[e].src;
        }
        for &e in &self.reds {
            if kg.reds[e].rng != at {
                return false;
            }
            at = kg.reds[e].src;
        }
        true
    }

    pub fn display(&self, kg: &ColoredKGraph) -> String {
        if self.is_trivial() {
            return kg.vertices[self.range].clone();
        }
        self.blues
            .iter()
            .map(|&e| kg.blues[e].name.as_str())
            .chain(self.reds.iter().map(|&e| kg.reds[e].name.as_str()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Concatenate two paths with s(p) = r(q), renormalizing.
pub fn compose(kg: &ColoredKGraph, p: &KPath, q: &KPath) -> KPath {
    debug_assert_eq!(p.source(kg), q.range);
    let inv = kg.inverse_squares();
    let mut blues = p.blues.clone();
    let mut reds = p.reds.clone();
    for &b in &q.blues {
        let mut carry = b;
        for slot in reds.iter_mut().rev() {
            let &(b2, r2) = inv
                .get(&(*slot, carry))
                .expect("square bijectivity covers every composable red-blue pair");
            carry = b2;
            *slot = r2;
        }
        blues.push(carry);
    }
    reds.extend_from_slice(&q.reds);
    KPath { range: p.range, blues, reds }
}

/// Split a path at the given degree: the unique `(head, tail)` with
/// `d(head) = at` and `head . tail = p`.
pub fn factorize(kg: &ColoredKGraph, p: &KPath, at: (usize, usize)) -> (KPath, KPath) {
    let (m, n) = p.degree();
    assert!(at.0 <= m && at.1 <= n, "factorization degree exceeds the path degree");
    let mut tail_blues = p.blues[at.0..].to_vec();
    let mut head_reds = Vec::new();
    for &r in &p.reds[..at.1] {
        let mut carry = r;
        for slot in tail_blues.iter_mut().rev() {
            let &(r2, b2) = kg
                .squares
                .get(&(*slot, carry))
                .expect("square totality covers every composable blue-red pair");
            carry = r2;
            *slot = b2;
        }
        head_reds.push(carry);
    }
    let head = KPath { range: p.range, blues: p.blues[..at.0].to_vec(), reds: head_reds };
    let tail = KPath { range: head.source(kg), blues: tail_blues, reds: p.reds[at.1..].to_vec() };
    debug_assert!(head.well_formed(kg) && tail.well_formed(kg));
    (head, tail)
}

/// An eventually periodic infinite rank-2 path: the cycle repeats
/// forever after the prefix and must have both degrees positive so that
/// every coordinate advances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPKPath {
    pub prefix: KPath,
    pub cycle: KPath,
}

impl EPKPath {
    pub fn new(prefix: KPath, cycle: KPath, kg: &ColoredKGraph) -> Self {
        assert_eq!(prefix.source(kg), cycle.range);
        assert_eq!(cycle.range, cycle.source(kg), "the repeating block is a cycle");
        assert!(
            cycle.degree().0 >= 1 && cycle.degree().1 >= 1,
            "the repeating block advances in both coordinates"
        );
        EPKPath { prefix, cycle }
    }

    /// The initial segment of degree at least `upto` in each
    /// coordinate, as a finite path.
    pub fn materialize(&self, kg: &ColoredKGraph, upto: (usize, usize)) -> KPath {
        let mut out = self.prefix.clone();
        while out.degree().0 < upto.0 || out.degree().1 < upto.1 {
            out = compose(kg, &out, &self.cycle);
        }
        out
    }

    /// The segment of the path between degrees `from` and `to`.
    pub fn segment(&self, kg: &ColoredKGraph, from: (usize, usize), to: (usize, usize)) -> KPath {
        assert!(from.0 <= to.0 && from.1 <= to.1);
        let whole = self.materialize(kg, to);
        let (_, rest) = factorize(kg, &whole, from);
        let (seg, _) = factorize(kg, &rest, (to.0 - from.0, to.1 - from.1));
        seg
    }

    pub fn display(&self, kg: &ColoredKGraph) -> String {
        if self.prefix.is_trivial() {
            format!("({})^inf", self.cycle.display(kg))
        } else {
            format!("{} ({})^inf", self.prefix.display(kg), self.cycle.display(kg))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_colored, torus, twoblue};
    use super::*;

    #[test]
    fn torus_words_commute() {
        let kg = torus();
        let b = KPath { range: 0, blues: vec![0], reds: vec![] };
        let r = KPath { range: 0, blues: vec![], reds: vec![0] };
        let br = compose(&kg, &b, &r);
        let rb = compose(&kg, &r, &b);
        assert_eq!(br, rb);
        assert_eq!(br.degree(), (1, 1));
        assert_eq!(br.display(&kg), "b r");
    }

    #[test]
    fn factorization_inverts_composition() {
        let kg = twoblue();
        for p in enumerate_colored(&kg, 0, (2, 2)) {
            for i in 0..=2 {
                for j in 0..=2 {
                    let (head, tail) = factorize(&kg, &p, (i, j));
                    assert_eq!(head.degree(), (i, j));
                    assert_eq!(compose(&kg, &head, &tail), p);
                }
            }
        }
    }

    #[test]
    fn factorization_is_unique_up_to_three_three() {
        for kg in [torus(), twoblue()] {
            for total in [(3usize, 3usize), (2, 3), (3, 1)] {
                for p in enumerate_colored(&kg, 0, total) {
                    for i in 0..=total.0 {
                        for j in 0..=total.1 {
                            let heads: Vec<KPath> = enumerate_colored(&kg, 0, (i, j))
                                .into_iter()
                                .filter(|h| {
                                    let rest = (total.0 - i, total.1 - j);
                                    enumerate_colored(&kg, h.source(&kg), rest)
                                        .iter()
                                        .any(|t| compose(&kg, h, t) == p)
                                })
                                .collect();
                            assert_eq!(heads.len(), 1, "degree {:?} of {:?}", (i, j), p);
                            assert_eq!(heads[0], factorize(&kg, &p, (i, j)).0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn segments_of_a_periodic_path() {
        let kg = twoblue();
        let cycle = KPath { range: 0, blues: vec![0], reds: vec![0] };
        let x = EPKPath::new(KPath::trivial(0), cycle, &kg);
        let z = x.segment(&kg, (0, 0), (1, 1));
        assert_eq!(z.display(&kg), "b1 r");
        let z = x.segment(&kg, (1, 1), (2, 2));
        assert_eq!(z.display(&kg), "b1 r");
        let z = x.segment(&kg, (1, 0), (2, 1));
        assert_eq!(z.display(&kg), "b1 r");
    }
}
