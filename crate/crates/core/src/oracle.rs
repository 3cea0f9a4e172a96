//! Brute-force cross-checks on truncated path space.
//!
//! Everything here decides questions about the boundary path space and
//! its shift groupoid by enumerating finite truncations, then compares
//! those answers against the combinatorial shortcuts used by the fast
//! deciders. The two routes are kept fully independent: a disagreement
//! at a sufficient depth is reported as an oracle violation, never
//! papered over.
//!
//! Depth sufficiency. Two cylinder images can only be told apart within
//! the first `sum of the four path lengths` edges, and any spurious
//! truncation collision beyond that depth forces the prefix relation
//! the exact route tests for. Requested depths are therefore raised to
//! the structural bound before a disagreement may count as a violation.

use std::collections::{BTreeMap, BTreeSet};

use crate::ancestry::{self, APair, PairsResult};
use crate::cycles;
use crate::desingular;
use crate::error::AnalysisError;
use crate::graph::GraphPresentation;
use crate::path::{EPInfinitePath, Path};
use crate::verdict::{Answer, Certificate, Depth, NamedVerdict, Verdict};
use crate::window::Window;

/// Guard for exponential truncation enumerations.
const ENUMERATION_CAP: usize = 500_000;

/// All ancestry pairs for (v, u) with both path lengths at most
/// `max_len`, minimal or not, cycle-free or not.
pub fn ancestry_pairs(w: &Window, v: usize, u: usize, max_len: usize) -> Vec<APair> {
    let into_v = w.paths_into(v, Some(max_len), false);
    let into_u = w.paths_into(u, Some(max_len), false);
    let mut by_source: BTreeMap<usize, Vec<&Path>> = BTreeMap::new();
    for p in &into_u {
        by_source.entry(p.source(w)).or_default().push(p);
    }
    let mut out = Vec::new();
    for lam in &into_v {
        if let Some(mus) = by_source.get(&lam.source(w)) {
            for &mu in mus {
                out.push(APair { lambda: lam.clone(), mu: mu.clone() });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.lambda.len(), a.mu.len(), a.lambda.display(w), a.mu.display(w)).cmp(&(
            b.lambda.len(),
            b.mu.len(),
            b.lambda.display(w),
            b.mu.display(w),
        ))
    });
    out
}

fn remainder(longer: &Path, shorter: &Path, w: &Window) -> Path {
    debug_assert!(longer.has_prefix(shorter));
    Path { range: shorter.source(w), edges: longer.edges[shorter.len()..].to_vec() }
}

/// Do the cylinders of two ancestry pairs meet in the groupoid? They do
/// exactly when one pair extends the other by a common live tail.
pub fn cylinders_intersect(w: &Window, a: &APair, b: &APair) -> bool {
    let extends = |outer: &APair, inner: &APair| {
        outer.lambda.has_prefix(&inner.lambda)
            && outer.mu.has_prefix(&inner.mu)
            && remainder(&outer.lambda, &inner.lambda, w)
                == remainder(&outer.mu, &inner.mu, w)
            && w.live[outer.lambda.source(w)]
    };
    extends(a, b) || extends(b, a)
}

/// Outcome of an image intersection query: the answer, the witness
/// cycle whose infinite repetition realizes a strict intersection, and
/// the truncation depth the brute route actually used.
#[derive(Debug, Clone)]
pub struct Intersection {
    pub meets: bool,
    pub witness_cycle: Option<Path>,
    pub depth_used: usize,
}

fn exact_images_intersect(w: &Window, a: &APair, b: &APair) -> (bool, Option<Path>) {
    let (outer, inner) = if a.lambda.has_prefix(&b.lambda) {
        (a, b)
    } else if b.lambda.has_prefix(&a.lambda) {
        (b, a)
    } else {
        return (false, None);
    };
    let rest = remainder(&outer.lambda, &inner.lambda, w);
    let p = &outer.mu;
    let q = inner.mu.concat(&rest, w);
    let (longer, shorter) = if q.has_prefix(p) {
        (&q, p)
    } else if p.has_prefix(&q) {
        (p, &q)
    } else {
        return (false, None);
    };
    let c = remainder(longer, shorter, w);
    if c.is_empty() {
        (w.live[outer.lambda.source(w)], None)
    } else {
        debug_assert_eq!(c.range, c.source(w), "the forced witness is a cycle");
        (true, Some(c))
    }
}

/// The pairs of depth-`d` truncations `(trunc(lambda z), trunc(mu z))`
/// over live continuations z, identifying the image of the pair's
/// cylinder inside the product of boundary cylinders.
fn truncated_image(
    w: &Window,
    pair: &APair,
    d: usize,
) -> Result<BTreeSet<(Vec<usize>, Vec<usize>)>, AnalysisError> {
    let zs = w.live_paths_into(pair.lambda.source(w), d);
    if zs.len().saturating_mul(d.max(1)) > ENUMERATION_CAP {
        return Err(AnalysisError::Unsupported(format!(
            "truncated image at depth {d} exceeds the enumeration cap"
        )));
    }
    let trunc = |p: &Path, z: &Path| {
        let full = p.concat(z, w);
        full.edges[..d.min(full.len())].to_vec()
    };
    Ok(zs.iter().map(|z| (trunc(&pair.lambda, z), trunc(&pair.mu, z))).collect())
}

fn sufficient_depth_for(w: &Window, pairs: &[&APair]) -> usize {
    let total: usize = pairs
        .iter()
        .map(|p| p.lambda.len() + p.mu.len())
        .sum();
    total + 2 * w.vertex_count() + 2
}

/// Decide whether the images of two cylinders under the range-pair map
/// meet, by the prefix-forcing shortcut and independently by truncated
/// enumeration. The requested depth is raised to the structural bound;
/// a disagreement is an oracle violation.
pub fn pi_r_images_intersect(
    w: &Window,
    a: &APair,
    b: &APair,
    depth: usize,
) -> Result<Intersection, AnalysisError> {
    let (exact, witness) = exact_images_intersect(w, a, b);
    let d = depth.max(sufficient_depth_for(w, &[a, b]));
    let ta = truncated_image(w, a, d)?;
    let tb = truncated_image(w, b, d)?;
    let brute = !ta.is_disjoint(&tb);
    if exact != brute {
        return Err(AnalysisError::OracleViolation(format!(
            "image intersection of ({}, {}) and ({}, {}): prefix route says {}, \
             depth-{} truncation says {}",
            a.lambda.display(w),
            a.mu.display(w),
            b.lambda.display(w),
            b.mu.display(w),
            exact,
            d,
            brute
        )));
    }
    Ok(Intersection { meets: exact, witness_cycle: witness, depth_used: d })
}

#[derive(Debug, Clone, Default)]
pub struct Lemma1Report {
    pub queries: u64,
    pub comparisons: u64,
    pub intersections: u64,
    pub cycle_witnesses: u64,
}

/// Cross-check the two intersection routes over every pair of ancestry
/// pairs of bounded length, for every vertex pair. On an entrance-free
/// presentation, a strict intersection of the images of two distinct
/// minimal cycle-free pairs must be witnessed by a cycle; that shape is
/// asserted here as well.
pub fn lemma1_check(
    g: &GraphPresentation,
    max_len: usize,
    depth: usize,
) -> Result<Lemma1Report, AnalysisError> {
    let w = Window::build(g, max_len + 1);
    let entrance_free = cycles::no_cycle_has_entrance(g).is_yes();
    let mut report = Lemma1Report::default();
    for v in 0..w.vertex_count() {
        for u in 0..w.vertex_count() {
            let pairs = ancestry_pairs(&w, v, u, max_len);
            if pairs.is_empty() {
                continue;
            }
            report.queries += 1;
            for i in 0..pairs.len() {
                for j in i..pairs.len() {
                    let (a, b) = (&pairs[i], &pairs[j]);
                    let out = pi_r_images_intersect(&w, a, b, depth)?;
                    report.comparisons += 1;
                    if out.meets {
                        report.intersections += 1;
                    }
                    if let Some(c) = &out.witness_cycle {
                        report.cycle_witnesses += 1;
                        if c.range != c.source(&w) || !c.well_formed(&w) {
                            return Err(AnalysisError::OracleViolation(
                                "intersection witness is not a cycle".to_string(),
                            ));
                        }
                        let distinct_minimal = i != j
                            && entrance_free
                            && ancestry::is_minimal(a)
                            && ancestry::is_minimal(b)
                            && a.cycle_free(&w)
                            && b.cycle_free(&w);
                        if distinct_minimal && c.is_empty() {
                            return Err(AnalysisError::OracleViolation(
                                "distinct minimal cycle-free pairs met without a cycle"
                                    .to_string(),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Default)]
pub struct Lemma2Report {
    pub pairs: u64,
}

/// Every ancestry pair strips to exactly one minimal pair: check, for
/// each pair of bounded length, that precisely one suffix removal lands
/// on a minimal pair, and that it is the one `strip_to_minimal` finds.
pub fn lemma2_check(g: &GraphPresentation, max_len: usize) -> Result<Lemma2Report, AnalysisError> {
    let w = Window::build(g, max_len + 1);
    let mut report = Lemma2Report::default();
    for v in 0..w.vertex_count() {
        for u in 0..w.vertex_count() {
            for pair in ancestry_pairs(&w, v, u, max_len) {
                let stripped = ancestry::strip_to_minimal(&pair);
                let mut hits = Vec::new();
                for k in 0..=pair.lambda.len().min(pair.mu.len()) {
                    let ltail = &pair.lambda.edges[pair.lambda.len() - k..];
                    let mtail = &pair.mu.edges[pair.mu.len() - k..];
                    if ltail != mtail {
                        continue;
                    }
                    let candidate = APair {
                        lambda: Path {
                            range: pair.lambda.range,
                            edges: pair.lambda.edges[..pair.lambda.len() - k].to_vec(),
                        },
                        mu: Path {
                            range: pair.mu.range,
                            edges: pair.mu.edges[..pair.mu.len() - k].to_vec(),
                        },
                    };
                    if ancestry::is_minimal(&candidate) {
                        hits.push(candidate);
                    }
                }
                if hits.len() != 1 || hits[0] != stripped {
                    return Err(AnalysisError::OracleViolation(format!(
                        "pair ({}, {}) strips to {} minimal pairs",
                        pair.lambda.display(&w),
                        pair.mu.display(&w),
                        hits.len()
                    )));
                }
                report.pairs += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Default)]
pub struct Lemma3Report {
    pub absorbed: u64,
    pub depth_used: usize,
}

/// On an entrance-free presentation, the image of a minimal ancestry
/// pair that repeats a vertex is contained in the image of one of the
/// minimal cycle-free pairs for the same query. Checked pointwise on
/// truncations.
pub fn lemma3_check(
    g: &GraphPresentation,
    max_len: usize,
    depth: usize,
) -> Result<Lemma3Report, AnalysisError> {
    if !cycles::no_cycle_has_entrance(g).is_yes() {
        return Err(AnalysisError::Unsupported(
            "cycle absorption is only claimed for entrance-free presentations".to_string(),
        ));
    }
    let w = Window::build(g, max_len + 1);
    let mut report = Lemma3Report::default();
    for v in 0..w.vertex_count() {
        for u in 0..w.vertex_count() {
            let pairs = ancestry_pairs(&w, v, u, max_len);
            let cyclic_minimal: Vec<&APair> = pairs
                .iter()
                .filter(|p| ancestry::is_minimal(p) && !p.cycle_free(&w))
                .collect();
            if cyclic_minimal.is_empty() {
                continue;
            }
            let free = ancestry::minimal_cycle_free_pairs_window(&w, v, u);
            for pair in cyclic_minimal {
                let d = depth.max(sufficient_depth_for(&w, &[pair]));
                report.depth_used = report.depth_used.max(d);
                let image = truncated_image(&w, pair, d)?;
                if image.is_empty() {
                    continue;
                }
                let mut absorbed = false;
                for candidate in &free {
                    if image.is_subset(&truncated_image(&w, candidate, d)?) {
                        absorbed = true;
                        break;
                    }
                }
                if !absorbed {
                    return Err(AnalysisError::OracleViolation(format!(
                        "the image of ({}, {}) is not absorbed by any cycle-free \
                         minimal pair for ({}, {})",
                        pair.lambda.display(&w),
                        pair.mu.display(&w),
                        w.vertices[v].name,
                        w.vertices[u].name
                    )));
                }
                report.absorbed += 1;
            }
        }
    }
    Ok(report)
}

/// Outcome of the covering comparison for one vertex pair.
#[derive(Debug, Clone)]
pub enum CoverOutcome {
    /// Both unions were computed and compared pointwise.
    Equal { cover_pairs: usize, points: usize, depth_used: usize },
    /// The query has infinitely many minimal cycle-free pairs; the
    /// evidence is passed through instead of a set comparison.
    Infinite(Certificate),
}

/// Compare the union of all truncated cylinder images over every
/// ancestry pair of bounded length against the union over just the
/// minimal cycle-free pairs. The two must agree pointwise on an
/// entrance-free presentation.
pub fn properness_cover(
    g: &GraphPresentation,
    v: &str,
    u: &str,
    depth: usize,
) -> Result<CoverOutcome, AnalysisError> {
    let (w, result) = ancestry::minimal_cycle_free_pairs(g, v, u)?;
    let free = match result {
        PairsResult::Infinite { representative, pumpable, rule } => {
            return Ok(CoverOutcome::Infinite(Certificate::InfiniteFamily {
                query: [v.to_string(), u.to_string()],
                representative: representative.display(&w),
                pumpable,
                rule,
            }));
        }
        PairsResult::Finite(pairs) => pairs,
    };
    let vi = w.vertex_index(v).ok_or_else(|| AnalysisError::UnknownVertex(v.to_string()))?;
    let ui = w.vertex_index(u).ok_or_else(|| AnalysisError::UnknownVertex(u.to_string()))?;
    let max_len = depth
        .max(w.vertex_count())
        .max(free.iter().map(|p| p.lambda.len().max(p.mu.len())).max().unwrap_or(0));
    let pairs = ancestry_pairs(&w, vi, ui, max_len);
    let d = max_len
        + pairs.iter().map(|p| p.lambda.len().max(p.mu.len())).max().unwrap_or(0)
        + 2 * w.vertex_count()
        + 2;
    let mut rhs = BTreeSet::new();
    for pair in &free {
        rhs.extend(truncated_image(&w, pair, d)?);
    }
    let mut lhs_points = 0usize;
    for pair in &pairs {
        let image = truncated_image(&w, pair, d)?;
        lhs_points += image.len();
        if !image.is_subset(&rhs) {
            return Err(AnalysisError::OracleViolation(format!(
                "the image of ({}, {}) escapes the cycle-free minimal cover of ({v}, {u})",
                pair.lambda.display(&w),
                pair.mu.display(&w)
            )));
        }
    }
    let _ = lhs_points;
    Ok(CoverOutcome::Equal { cover_pairs: free.len(), points: rhs.len(), depth_used: d })
}

type PathKey = (usize, Vec<usize>);

/// A finite shadow of the shift groupoid: triples `(x, n, y)` of
/// depth-truncated boundary paths with a degree, generated by ancestry
/// pairs of bounded length and their live continuations. Truncation
/// composability can overshoot genuine germ composability, so totality
/// of the product is not asserted; inverses, units, and associativity
/// are.
#[derive(Debug)]
pub struct TruncatedGroupoid {
    pub depth: usize,
    elements: BTreeSet<(PathKey, i64, PathKey)>,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub elements: usize,
    pub products: u64,
    pub triples: u64,
}

impl TruncatedGroupoid {
    pub fn build(g: &GraphPresentation, depth: usize) -> Result<Self, AnalysisError> {
        let w = Window::build(g, 3 * depth + 2);
        let mut elements = BTreeSet::new();
        let key = |p: &Path, z: &Path| -> PathKey {
            let full = p.concat(z, &w);
            (full.range, full.edges[..depth.min(full.len())].to_vec())
        };
        for v in 0..w.vertex_count() {
            for u in 0..w.vertex_count() {
                for pair in ancestry_pairs(&w, v, u, depth) {
                    let n = pair.lambda.len() as i64 - pair.mu.len() as i64;
                    for z in w.live_paths_into(pair.lambda.source(&w), depth) {
                        elements.insert((key(&pair.lambda, &z), n, key(&pair.mu, &z)));
                        if elements.len() > ENUMERATION_CAP {
                            return Err(AnalysisError::Unsupported(
                                "truncated groupoid exceeds the enumeration cap".to_string(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(TruncatedGroupoid { depth, elements })
    }

    fn product(
        a: &(PathKey, i64, PathKey),
        b: &(PathKey, i64, PathKey),
    ) -> Option<(PathKey, i64, PathKey)> {
        (a.2 == b.0).then(|| (a.0.clone(), a.1 + b.1, b.2.clone()))
    }

    /// Inverse and unit membership, inverse and unit laws, and
    /// associativity over composable triples. Any failure is an oracle
    /// violation.
    pub fn check_axioms(&self) -> Result<AxiomReport, AnalysisError> {
        let fail = |msg: String| Err(AnalysisError::OracleViolation(msg));
        let mut report =
            AxiomReport { elements: self.elements.len(), ..AxiomReport::default() };
        let mut by_first: BTreeMap<&PathKey, Vec<&(PathKey, i64, PathKey)>> = BTreeMap::new();
        for e in &self.elements {
            by_first.entry(&e.0).or_default().push(e);
        }
        for a in &self.elements {
            let inv = (a.2.clone(), -a.1, a.0.clone());
            if !self.elements.contains(&inv) {
                return fail(format!("no inverse for an element of degree {}", a.1));
            }
            let unit_l = (a.0.clone(), 0, a.0.clone());
            let unit_r = (a.2.clone(), 0, a.2.clone());
            if !self.elements.contains(&unit_l) || !self.elements.contains(&unit_r) {
                return fail("a unit is missing at an element's endpoint".to_string());
            }
            let to_unit = Self::product(a, &inv).expect("an element composes with its inverse");
            if to_unit != unit_l {
                return fail("an element times its inverse is not the unit".to_string());
            }
            if Self::product(&unit_l, a).as_ref() != Some(a)
                || Self::product(a, &unit_r).as_ref() != Some(a)
            {
                return fail("a unit fails to act neutrally".to_string());
            }
            report.products += 2;
        }
        for a in &self.elements {
            for &b in by_first.get(&a.2).into_iter().flatten() {
                let ab = Self::product(a, b).expect("indexed by matching middle");
                report.products += 1;
                for &c in by_first.get(&b.2).into_iter().flatten() {
                    let bc = Self::product(b, c).expect("indexed by matching middle");
                    let left = Self::product(&ab, c).expect("middles chain");
                    let right = Self::product(a, &bc).expect("middles chain");
                    if left != right {
                        return fail("associativity fails on a composable triple".to_string());
                    }
                    report.triples += 1;
                    if report.triples > 2_000_000 {
                        return Ok(report);
                    }
                }
            }
        }
        Ok(report)
    }
}

/// The order of the isotropy generator at an eventually periodic path:
/// the primitive period of its canonical form.
pub fn isotropy(w: &Window, x: &EPInfinitePath) -> usize {
    x.canonicalize(w).isotropy_generator()
}

/// Decide continuous trace. The entrance check runs first and settles
/// the negative case on the presentation as given; otherwise sources
/// and infinite receivers are removed and finite ancestry is decided on
/// the regularized presentation.
pub fn continuous_trace(g: &GraphPresentation) -> Result<Verdict, AnalysisError> {
    let ef = cycles::no_cycle_has_entrance(g);
    if !ef.is_yes() {
        return Ok(Verdict {
            answer: Answer::No,
            certificate: ef.certificate,
            depth: Depth::Exact,
        });
    }
    let (fa, fa_name) = if g.is_singular() {
        let d = desingular::desingularize(g)?;
        (ancestry::finite_ancestry(&d.result), "finite ancestry after regularization")
    } else {
        (ancestry::finite_ancestry(g), "finite ancestry")
    };
    if !fa.is_yes() {
        return Ok(Verdict {
            answer: Answer::No,
            certificate: fa.certificate,
            depth: Depth::Exact,
        });
    }
    Ok(Verdict {
        answer: Answer::Yes,
        certificate: Certificate::Conjunction {
            parts: vec![
                NamedVerdict { name: "entrance-free".to_string(), verdict: ef },
                NamedVerdict { name: fa_name.to_string(), verdict: fa },
            ],
        },
        depth: Depth::Exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;

    fn loop_graph() -> GraphPresentation {
        parse_graph("graph loop\nvertex v\nedge e : v -> v\nend\n").unwrap()
    }

    fn pair(w: &Window, lambda: &[&str], lrange: &str, mu: &[&str], mrange: &str) -> APair {
        let to_path = |edges: &[&str], range: &str| Path {
            range: w.vertex_index(range).unwrap(),
            edges: edges.iter().map(|e| w.edge_index(e).unwrap()).collect(),
        };
        APair { lambda: to_path(lambda, lrange), mu: to_path(mu, mrange) }
    }

    #[test]
    fn cylinder_intersection_on_the_loop() {
        let g = loop_graph();
        let w = Window::build(&g, 6);
        let ev = pair(&w, &["e"], "v", &[], "v");
        let eee = pair(&w, &["e", "e"], "v", &["e"], "v");
        let ve = pair(&w, &[], "v", &["e"], "v");
        let vv = pair(&w, &[], "v", &[], "v");
        assert!(cylinders_intersect(&w, &ev, &eee));
        assert!(!cylinders_intersect(&w, &ev, &ve));
        assert!(cylinders_intersect(&w, &vv, &vv));
    }

    #[test]
    fn image_intersection_witnessed_by_a_cycle() {
        let g = loop_graph();
        let w = Window::build(&g, 20);
        let ev = pair(&w, &["e"], "v", &[], "v");
        let ve = pair(&w, &[], "v", &["e"], "v");
        let out = pi_r_images_intersect(&w, &ev, &ve, 4).unwrap();
        assert!(out.meets);
        let c = out.witness_cycle.expect("a strict intersection carries a cycle");
        assert_eq!(c.display(&w), "e e");
    }

    #[test]
    fn lemma1_routes_agree_on_entrance_free_fixtures() {
        for text in [
            "graph loop\nvertex v\nedge e : v -> v\nend\n",
            "graph two\nvertex v\nvertex w\nedge a : w -> v\nedge b : v -> w\nend\n",
            "graph line\nvertex u\nvertex v\nedge a : u -> v\nedge l : u -> u\nend\n",
        ] {
            let g = parse_graph(text).unwrap();
            let report = lemma1_check(&g, 4, 5).unwrap();
            assert!(report.comparisons > 0, "{text}");
        }
    }

    #[test]
    fn strip_points_are_unique() {
        let g = loop_graph();
        let report = lemma2_check(&g, 6).unwrap();
        assert!(report.pairs > 0);
        let branch = parse_graph(
            "graph b\nvertex v\nvertex w\nedge a : w -> v\nedge b : w -> v\nedge c : w -> w\nend\n",
        )
        .unwrap();
        assert!(lemma2_check(&branch, 5).unwrap().pairs > 0);
    }

    #[test]
    fn cycles_are_absorbed_on_the_loop() {
        let g = loop_graph();
        let report = lemma3_check(&g, 5, 6).unwrap();
        assert!(report.absorbed > 0);
    }

    #[test]
    fn cover_equality_and_infinite_propagation() {
        let g = loop_graph();
        match properness_cover(&g, "v", "v", 3).unwrap() {
            CoverOutcome::Equal { cover_pairs, .. } => assert_eq!(cover_pairs, 1),
            CoverOutcome::Infinite(_) => panic!("the loop has a finite cover"),
        }
        let uhf = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        match properness_cover(&uhf, "v1", "v1", 3).unwrap() {
            CoverOutcome::Infinite(Certificate::InfiniteFamily { query, .. }) => {
                assert_eq!(query, ["v1".to_string(), "v1".to_string()]);
            }
            other => panic!("expected an infinite family, got {other:?}"),
        }
    }

    #[test]
    fn groupoid_axioms_hold_at_depth_four() {
        for text in [
            "graph loop\nvertex v\nedge e : v -> v\nend\n",
            "graph two\nvertex v\nvertex w\nedge a : w -> v\nedge b : v -> w\nend\n",
        ] {
            let g = parse_graph(text).unwrap();
            let gpd = TruncatedGroupoid::build(&g, 4).unwrap();
            let report = gpd.check_axioms().unwrap();
            assert!(report.elements > 0, "{text}");
            assert!(report.triples > 0, "{text}");
        }
    }

    #[test]
    fn isotropy_generators() {
        let g = loop_graph();
        let w = Window::build(&g, 8);
        let e = Path { range: 0, edges: vec![0] };
        let x = EPInfinitePath::new(Path::trivial(0), e.clone(), &w);
        assert_eq!(isotropy(&w, &x), 1);

        let two = parse_graph(
            "graph two\nvertex v\nvertex w\nedge a : w -> v\nedge b : v -> w\nend\n",
        )
        .unwrap();
        let w2 = Window::build(&two, 8);
        let ab = Path {
            range: w2.vertex_index("v").unwrap(),
            edges: vec![w2.edge_index("a").unwrap(), w2.edge_index("b").unwrap()],
        };
        let y = EPInfinitePath::new(Path::trivial(w2.vertex_index("v").unwrap()), ab, &w2);
        assert_eq!(isotropy(&w2, &y), 2);

        let src = parse_graph(
            "graph s\nvertex v\nvertex w\nedge g : w -> v\nedge e : w -> w\nend\n",
        )
        .unwrap();
        let ws = Window::build(&src, 8);
        let prefix = Path {
            range: ws.vertex_index("v").unwrap(),
            edges: vec![ws.edge_index("g").unwrap()],
        };
        let cyc = Path {
            range: ws.vertex_index("w").unwrap(),
            edges: vec![ws.edge_index("e").unwrap()],
        };
        let z = EPInfinitePath::new(prefix, cyc, &ws);
        assert_eq!(isotropy(&ws, &z), 1);
    }

    #[test]
    fn continuous_trace_verdicts() {
        let yes = loop_graph();
        assert!(continuous_trace(&yes).unwrap().is_yes());

        let entrance = parse_graph(
            "graph en\nvertex v\nvertex w\nedge e : v -> v\nedge g : w -> v\nedge h : v -> w\nend\n",
        )
        .unwrap();
        let v = continuous_trace(&entrance).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::CycleEntrance { .. }));

        let omega =
            parse_graph("graph omega\nvertex u\nvertex v\nbundle b : u => v\nend\n").unwrap();
        let v = continuous_trace(&omega).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::InfiniteFamily { .. }));

        let line = parse_graph("graph l\nvertex u\nvertex v\nedge a : u -> v\nend\n").unwrap();
        let v = continuous_trace(&line).unwrap();
        assert!(v.is_yes(), "an acyclic graph with a source regularizes to a tame one");

        let uhf = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        let v = continuous_trace(&uhf).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::Pumping { .. }));
    }
}
