//! Deciders for rank-2 graphs.
//!
//! A colored presentation is finite with no sources, so its blue graph
//! always carries a cycle and its path space always carries a periodic
//! point; strong finite ancestry and strict aperiodicity are therefore
//! decided negatively outright, with the pigeonhole cycle as the
//! certificate. Tightness reduces to a concrete absorption test: an
//! isotropy witness is forced to be a pair of initial segments of its
//! periodic path, so each candidate boils down to finitely many
//! rotations of the repeating block, each refutable by one finite
//! extension. A refutation is exact; stability up to the window is
//! reported as a bounded yes.
//!
//! A product presentation delegates to its factors: squares commute
//! freely, so minimality, cycles, and cylinder containment all act
//! coordinatewise.

use super::word::{compose, factorize, EPKPath, KPath};
use super::{enumerate_colored, split_product_vertex, ColoredKGraph, KGraph2, ProductKGraph};
use crate::ancestry;
use crate::cycles;
use crate::error::AnalysisError;
use crate::graph::GraphPresentation;
use crate::path::Path;
use crate::verdict::{Answer, Certificate, Depth, NamedVerdict, Verdict};
use crate::window::Window;

/// Minimal ancestry pairs of a query, with a completeness claim.
#[derive(Debug, Clone)]
pub struct KPairsReport {
    pub pairs: Vec<[String; 2]>,
    pub complete: bool,
}

fn last_blue(kg: &ColoredKGraph, p: &KPath) -> Option<usize> {
    let (m, n) = p.degree();
    (m > 0).then(|| factorize(kg, p, (m - 1, n)).1.blues[0])
}

fn last_red(kg: &ColoredKGraph, p: &KPath) -> Option<usize> {
    let (m, n) = p.degree();
    (n > 0).then(|| factorize(kg, p, (m, n - 1)).1.reds[0])
}

/// A pair is minimal when no color can be stripped: the two paths must
/// not share their final blue segment nor their final red segment.
fn k_minimal(kg: &ColoredKGraph, a: &KPath, b: &KPath) -> bool {
    let blue_strippable = match (last_blue(kg, a), last_blue(kg, b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    };
    let red_strippable = match (last_red(kg, a), last_red(kg, b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    };
    !blue_strippable && !red_strippable
}

fn all_paths_colored(kg: &ColoredKGraph, v: usize, bound: usize) -> Vec<KPath> {
    let mut out = Vec::new();
    for m in 0..=bound {
        for n in 0..=bound {
            out.extend(enumerate_colored(kg, v, (m, n)));
        }
    }
    out
}

fn factor_window(g: &GraphPresentation, bound: usize) -> Window {
    let min_len = match &g.bratteli {
        Some(b) => {
            let levels = b.prefix_len() + 1;
            levels + bound + 1
        }
        None => bound + 1,
    };
    Window::build(g, min_len)
}

/// Coordinatewise 1-graph minimality: the final edges in one color are
/// the final edges of that coordinate.
fn minimal_1graph(a: &Path, b: &Path) -> bool {
    match (a.edges.last(), b.edges.last()) {
        (Some(x), Some(y)) => x != y,
        _ => true,
    }
}

/// Minimal ancestry pairs for the query, enumerated up to the degree
/// bound. Colored enumerations are never claimed complete; a product
/// enumeration is complete when both factors are acyclic and no pair
/// reaches the bound.
pub fn minimal_ancestry_pairs_k(
    kg: &KGraph2,
    v: &str,
    w: &str,
    bound: usize,
) -> Result<KPairsReport, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            let vi = c
                .vertex_index(v)
                .ok_or_else(|| AnalysisError::UnknownVertex(v.to_string()))?;
            let wi = c
                .vertex_index(w)
                .ok_or_else(|| AnalysisError::UnknownVertex(w.to_string()))?;
            let into_v = all_paths_colored(c, vi, bound);
            let into_w = all_paths_colored(c, wi, bound);
            let mut pairs = Vec::new();
            for lam in &into_v {
                for mu in &into_w {
                    if lam.source(c) == mu.source(c) && k_minimal(c, lam, mu) {
                        pairs.push([lam.display(c), mu.display(c)]);
                    }
                }
            }
            pairs.sort();
            Ok(KPairsReport { pairs, complete: false })
        }
        KGraph2::Product(p) => {
            let (v1, v2) = split_product_vertex(v)?;
            let (w1, w2) = split_product_vertex(w)?;
            let mut coords = Vec::new();
            let mut complete = true;
            for (g, (a, b)) in p.factors.iter().zip([(v1, w1), (v2, w2)]) {
                let win = factor_window(g, bound);
                let ai = win
                    .vertex_index(&a)
                    .ok_or_else(|| AnalysisError::UnknownVertex(a.clone()))?;
                let bi = win
                    .vertex_index(&b)
                    .ok_or_else(|| AnalysisError::UnknownVertex(b.clone()))?;
                let into_a = win.paths_into(ai, Some(bound), false);
                let into_b = win.paths_into(bi, Some(bound), false);
                let mut pairs = Vec::new();
                for lam in &into_a {
                    for mu in &into_b {
                        if lam.source(&win) == mu.source(&win) && minimal_1graph(lam, mu) {
                            if lam.len() >= bound || mu.len() >= bound {
                                complete = false;
                            }
                            pairs.push([lam.display(&win), mu.display(&win)]);
                        }
                    }
                }
                if !factor_acyclic(g, &win) {
                    complete = false;
                }
                coords.push(pairs);
            }
            let mut pairs = Vec::new();
            for [l1, m1] in &coords[0] {
                for [l2, m2] in &coords[1] {
                    pairs.push([format!("{l1} | {l2}"), format!("{m1} | {m2}")]);
                }
            }
            pairs.sort();
            Ok(KPairsReport { pairs, complete })
        }
    }
}

fn factor_acyclic(g: &GraphPresentation, w: &Window) -> bool {
    g.is_bratteli() || cycles::simple_cycles(w).is_empty()
}

/// Walk backwards along least in-edges of one color until a vertex
/// repeats; the enclosed edges form a cycle in that color.
fn pigeonhole_cycle(edges: &[super::CEdge], n_vertices: usize) -> (usize, Vec<usize>) {
    let mut at = 0usize;
    let mut seen = vec![None; n_vertices];
    let mut walk: Vec<usize> = Vec::new();
    loop {
        if let Some(start) = seen[at] {
            return (at, walk[start..].to_vec());
        }
        seen[at] = Some(walk.len());
        let e = (0..edges.len())
            .filter(|&e| edges[e].rng == at)
            .min_by_key(|&e| &edges[e].name)
            .expect("no-sources validation guarantees an in-edge of each color");
        walk.push(e);
        at = edges[e].src;
    }
}

/// Does every vertex pair admit only finitely many minimal ancestry
/// pairs? A colored presentation never does: powers of a blue cycle
/// against the trivial path are all minimal. A product has the property
/// exactly when each factor is acyclic with finite ancestry.
pub fn strong_finite_ancestry(kg: &KGraph2) -> Result<Verdict, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            let (u, cyc) = pigeonhole_cycle(&c.blues, c.vertices.len());
            Ok(Verdict {
                answer: Answer::No,
                certificate: Certificate::CyclePowerFamily {
                    cycle: cyc.iter().map(|&e| c.blues[e].name.clone()).collect(),
                    vertex: c.vertices[u].clone(),
                },
                depth: Depth::Exact,
            })
        }
        KGraph2::Product(p) => {
            let mut parts = Vec::new();
            for (i, g) in p.factors.iter().enumerate() {
                let w = factor_window(g, 1);
                if !factor_acyclic(g, &w) {
                    let cyc = &cycles::simple_cycles(&w)[0];
                    let u = w.vertices[cyc.range].name.clone();
                    let other = p.factors[1 - i].vertices.first().cloned().unwrap_or_default();
                    let vertex =
                        if i == 0 { format!("{u},{other}") } else { format!("{other},{u}") };
                    return Ok(Verdict {
                        answer: Answer::No,
                        certificate: Certificate::CyclePowerFamily {
                            cycle: cyc.edges.iter().map(|&e| w.edges[e].name.clone()).collect(),
                            vertex,
                        },
                        depth: Depth::Exact,
                    });
                }
                let fa = ancestry::finite_ancestry(g);
                let no = !fa.is_yes();
                parts.push(NamedVerdict {
                    name: format!("factor {} finite ancestry", i + 1),
                    verdict: fa,
                });
                if no {
                    return Ok(Verdict {
                        answer: Answer::No,
                        certificate: Certificate::Conjunction { parts },
                        depth: Depth::Exact,
                    });
                }
            }
            Ok(Verdict {
                answer: Answer::Yes,
                certificate: Certificate::Conjunction { parts },
                depth: Depth::Exact,
            })
        }
    }
}

/// Is the shift free of periodic points up to degree bookkeeping? A
/// colored presentation never is: alternating least blue and red
/// in-edges repeats a vertex and closes a cycle of positive bidegree. A
/// product is strictly aperiodic exactly when both factors are acyclic.
pub fn strictly_aperiodic(kg: &KGraph2) -> Result<Verdict, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            let mut at = 0usize;
            let mut seen = vec![None; c.vertices.len()];
            let mut walk: Vec<(usize, usize)> = Vec::new();
            let (start, round) = loop {
                if let Some(start) = seen[at] {
                    break (start, walk.len());
                }
                seen[at] = Some(walk.len());
                let b = (0..c.blues.len())
                    .filter(|&e| c.blues[e].rng == at)
                    .min_by_key(|&e| &c.blues[e].name)
                    .expect("no-sources validation guarantees a blue in-edge");
                let mid = c.blues[b].src;
                let r = (0..c.reds.len())
                    .filter(|&e| c.reds[e].rng == mid)
                    .min_by_key(|&e| &c.reds[e].name)
                    .expect("no-sources validation guarantees a red in-edge");
                walk.push((b, r));
                at = c.reds[r].src;
            };
            let s = (round - start) as u64;
            let mut names = Vec::new();
            for &(b, r) in &walk[start..] {
                names.push(c.blues[b].name.clone());
                names.push(c.reds[r].name.clone());
            }
            Ok(Verdict {
                answer: Answer::No,
                certificate: Certificate::PeriodicPath { cycle: names, period: [s, s] },
                depth: Depth::Exact,
            })
        }
        KGraph2::Product(p) => {
            for (i, g) in p.factors.iter().enumerate() {
                let w = factor_window(g, 1);
                if !factor_acyclic(g, &w) {
                    let cyc = &cycles::simple_cycles(&w)[0];
                    let len = cyc.len() as u64;
                    return Ok(Verdict {
                        answer: Answer::No,
                        certificate: Certificate::PeriodicPath {
                            cycle: cyc.edges.iter().map(|&e| w.edges[e].name.clone()).collect(),
                            period: if i == 0 { [len, 0] } else { [0, len] },
                        },
                        depth: Depth::Exact,
                    });
                }
            }
            Ok(Verdict {
                answer: Answer::Yes,
                certificate: Certificate::Note {
                    text: "both factors are acyclic, so a shift strictly deepens every \
                           path and no two distinct shifts agree"
                        .to_string(),
                },
                depth: Depth::Exact,
            })
        }
    }
}

/// Cylinder containment Z(lambda) within Z(mu) for one colored graph,
/// decided at the join degree.
fn gc_colored(kg: &ColoredKGraph, lambda: &KPath, mu: &KPath) -> bool {
    if lambda.range != mu.range || lambda.source(kg) != mu.source(kg) {
        return false;
    }
    let join = (
        lambda.degree().0.max(mu.degree().0),
        lambda.degree().1.max(mu.degree().1),
    );
    for nu in enumerate_colored(kg, lambda.range, join) {
        if factorize(kg, &nu, lambda.degree()).0 == *lambda
            && factorize(kg, &nu, mu.degree()).0 != *mu
        {
            return false;
        }
    }
    true
}

/// A refuting extension for the failed containment, if any.
fn gc_colored_refutation(kg: &ColoredKGraph, lambda: &KPath, mu: &KPath) -> Option<KPath> {
    let join = (
        lambda.degree().0.max(mu.degree().0),
        lambda.degree().1.max(mu.degree().1),
    );
    enumerate_colored(kg, lambda.range, join).into_iter().find(|nu| {
        factorize(kg, nu, lambda.degree()).0 == *lambda
            && factorize(kg, nu, mu.degree()).0 != *mu
    })
}

/// Cylinder containment for one ordinary factor, decided on live
/// extensions at the joint length.
fn gc_1graph(w: &Window, lambda: &Path, mu: &Path) -> bool {
    if lambda.range != mu.range || lambda.source(w) != mu.source(w) {
        return false;
    }
    let joint = lambda.len().max(mu.len());
    for z in w.live_paths_into(lambda.source(w), joint - lambda.len()) {
        let nu = lambda.concat(&z, w);
        if nu.edges[..mu.len()] != mu.edges[..] {
            return false;
        }
    }
    true
}

fn gc_1graph_refutation(w: &Window, lambda: &Path, mu: &Path) -> Option<Path> {
    let joint = lambda.len().max(mu.len());
    w.live_paths_into(lambda.source(w), joint - lambda.len())
        .into_iter()
        .map(|z| lambda.concat(&z, w))
        .find(|nu| nu.edges[..mu.len()] != mu.edges[..])
}

/// Parse a path written as space-separated edge names, or a vertex name
/// for a trivial path, in a colored graph.
fn parse_kpath(kg: &ColoredKGraph, text: &str) -> Result<KPath, AnalysisError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() == 1 {
        if let Some(v) = kg.vertex_index(words[0]) {
            return Ok(KPath::trivial(v));
        }
    }
    let mut path: Option<KPath> = None;
    for word in &words {
        let step = if let Some(b) = kg.blues.iter().position(|e| &e.name == word) {
            KPath { range: kg.blues[b].rng, blues: vec![b], reds: vec![] }
        } else if let Some(r) = kg.reds.iter().position(|e| &e.name == word) {
            KPath { range: kg.reds[r].rng, blues: vec![], reds: vec![r] }
        } else {
            return Err(AnalysisError::UnknownVertex(format!("edge `{word}`")));
        };
        path = Some(match path {
            None => step,
            Some(p) => {
                if p.source(kg) != step.range {
                    return Err(AnalysisError::Unsupported(format!(
                        "`{text}` does not chain at `{word}`"
                    )));
                }
                compose(kg, &p, &step)
            }
        });
    }
    path.ok_or_else(|| AnalysisError::UnknownVertex(format!("empty path `{text}`")))
}

fn parse_factor_path(w: &Window, text: &str) -> Result<Path, AnalysisError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() == 1 {
        if let Some(v) = w.vertex_index(words[0]) {
            return Ok(Path::trivial(v));
        }
    }
    let mut edges = Vec::new();
    for word in &words {
        edges.push(
            w.edge_index(word)
                .ok_or_else(|| AnalysisError::UnknownVertex(format!("edge `{word}`")))?,
        );
    }
    let range = w.edges[edges[0]].rng;
    let p = Path { range, edges };
    if !p.well_formed(w) {
        return Err(AnalysisError::Unsupported(format!("`{text}` does not chain")));
    }
    Ok(p)
}

fn product_windows(p: &ProductKGraph, bound: usize) -> [Window; 2] {
    [factor_window(&p.factors[0], bound), factor_window(&p.factors[1], bound)]
}

/// Is Z(lambda) contained in Z(mu)? Paths are written as edge name
/// sequences, with `|` separating product coordinates.
pub fn is_generalized_cycle(
    kg: &KGraph2,
    lambda: &str,
    mu: &str,
) -> Result<bool, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            Ok(gc_colored(c, &parse_kpath(c, lambda)?, &parse_kpath(c, mu)?))
        }
        KGraph2::Product(p) => {
            let (l1, l2) = split_pair(lambda)?;
            let (m1, m2) = split_pair(mu)?;
            let ws = product_windows(p, 2 + lambda.len().max(mu.len()));
            let (la, mu_a) = (parse_factor_path(&ws[0], &l1)?, parse_factor_path(&ws[0], &m1)?);
            let (lb, mu_b) = (parse_factor_path(&ws[1], &l2)?, parse_factor_path(&ws[1], &m2)?);
            Ok(gc_1graph(&ws[0], &la, &mu_a) && gc_1graph(&ws[1], &lb, &mu_b))
        }
    }
}

fn split_pair(text: &str) -> Result<(String, String), AnalysisError> {
    text.split_once('|')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| {
            AnalysisError::Unsupported(format!(
                "`{text}`: a product path is written `first | second`"
            ))
        })
}

/// Given that (lambda, mu) is a generalized cycle, does it have an
/// entrance, i.e. is the reversed pair not one?
pub fn gen_cycle_has_entrance(
    kg: &KGraph2,
    lambda: &str,
    mu: &str,
) -> Result<bool, AnalysisError> {
    if !is_generalized_cycle(kg, lambda, mu)? {
        return Err(AnalysisError::Unsupported(format!(
            "({lambda}, {mu}) is not a generalized cycle"
        )));
    }
    Ok(!is_generalized_cycle(kg, mu, lambda)?)
}

/// Search for a generalized cycle with an entrance up to the degree
/// bound. Finding one is exact evidence; exhausting the bound is not.
fn gc_entrance_search(kg: &KGraph2, bound: usize) -> Result<Option<Certificate>, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            for v in 0..c.vertices.len() {
                let paths = all_paths_colored(c, v, bound);
                for lam in &paths {
                    for mu in &paths {
                        if lam == mu || lam.source(c) != mu.source(c) {
                            continue;
                        }
                        if gc_colored(c, lam, mu) {
                            if let Some(nu) = gc_colored_refutation(c, mu, lam) {
                                return Ok(Some(Certificate::GcEntrance {
                                    lambda: lam.display(c),
                                    mu: mu.display(c),
                                    witness: nu.display(c),
                                }));
                            }
                        }
                    }
                }
            }
            Ok(None)
        }
        KGraph2::Product(p) => {
            let ws = product_windows(p, bound);
            let coord_paths = |w: &Window| -> Vec<Path> {
                (0..w.vertex_count())
                    .flat_map(|v| w.paths_into(v, Some(bound), false))
                    .collect()
            };
            let (ps1, ps2) = (coord_paths(&ws[0]), coord_paths(&ws[1]));
            for l1 in &ps1 {
                for m1 in &ps1 {
                    if !gc_1graph(&ws[0], l1, m1) {
                        continue;
                    }
                    for l2 in &ps2 {
                        for m2 in &ps2 {
                            if (l1, l2) == (m1, m2) || !gc_1graph(&ws[1], l2, m2) {
                                continue;
                            }
                            let r1 = gc_1graph_refutation(&ws[0], m1, l1);
                            let r2 = gc_1graph_refutation(&ws[1], m2, l2);
                            let witness = match (&r1, &r2) {
                                (Some(nu), _) => {
                                    format!("{} | {}", nu.display(&ws[0]), m2.display(&ws[1]))
                                }
                                (None, Some(nu)) => {
                                    format!("{} | {}", m1.display(&ws[0]), nu.display(&ws[1]))
                                }
                                (None, None) => continue,
                            };
                            return Ok(Some(Certificate::GcEntrance {
                                lambda: format!(
                                    "{} | {}",
                                    l1.display(&ws[0]),
                                    l2.display(&ws[1])
                                ),
                                mu: format!("{} | {}", m1.display(&ws[0]), m2.display(&ws[1])),
                                witness,
                            }));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

/// Decide tightness: every isotropy germ must be witnessed by a pair of
/// initial segments acting identically on all extensions. A witness for
/// a periodic path is forced to repeat one rotation of its block, so a
/// refutation of every rotation is exact; surviving the window is
/// reported as a bounded yes. A product is tight exactly when both
/// factors are entrance-free.
pub fn is_tight(kg: &KGraph2, bound: usize) -> Result<Verdict, AnalysisError> {
    match kg {
        KGraph2::Colored(c) => {
            let mut candidates = 0u64;
            for u in 0..c.vertices.len() {
                for p in 1..=bound {
                    for q in 1..=bound {
                        for cyc in enumerate_colored(c, u, (p, q)) {
                            if cyc.source(c) != u {
                                continue;
                            }
                            candidates += 1;
                            let x = EPKPath::new(KPath::trivial(u), cyc, c);
                            if let Some(refutations) = refute_all_rotations(c, &x, bound) {
                                return Ok(Verdict {
                                    answer: Answer::No,
                                    certificate: Certificate::TightRefuted {
                                        element: x.display(c),
                                        period: [
                                            x.cycle.degree().0 as i64,
                                            x.cycle.degree().1 as i64,
                                        ],
                                        refutations,
                                    },
                                    depth: Depth::Exact,
                                });
                            }
                        }
                    }
                }
            }
            Ok(Verdict {
                answer: Answer::Yes,
                certificate: Certificate::TightStabilized {
                    candidates,
                    window: [bound as u64, bound as u64],
                },
                depth: Depth::Bounded(bound as u64),
            })
        }
        KGraph2::Product(p) => {
            let mut parts = Vec::new();
            let mut all_yes = true;
            for (i, g) in p.factors.iter().enumerate() {
                let v = cycles::no_cycle_has_entrance(g);
                all_yes &= v.is_yes();
                parts.push(NamedVerdict {
                    name: format!("factor {} entrance-free", i + 1),
                    verdict: v,
                });
            }
            Ok(Verdict {
                answer: if all_yes { Answer::Yes } else { Answer::No },
                certificate: Certificate::Conjunction { parts },
                depth: Depth::Exact,
            })
        }
    }
}

/// Try to refute every rotation of the repeating block. Returns one
/// refutation per rotation if all fail, and None as soon as some
/// rotation absorbs every extension in the window.
fn refute_all_rotations(
    kg: &ColoredKGraph,
    x: &EPKPath,
    bound: usize,
) -> Option<Vec<[String; 2]>> {
    let (p, q) = x.cycle.degree();
    let mut refutations = Vec::new();
    for a in 0..p {
        for b in 0..q {
            let zeta = x.segment(kg, (a, b), (a + p, b + q));
            let mut refuted = None;
            'search: for m in 0..=bound {
                for n in 0..=bound {
                    if m + n == 0 {
                        continue;
                    }
                    for nu in enumerate_colored(kg, zeta.source(kg), (m, n)) {
                        let t = compose(kg, &zeta, &nu);
                        if factorize(kg, &t, nu.degree()).0 != nu {
                            refuted = Some([zeta.display(kg), nu.display(kg)]);
                            break 'search;
                        }
                    }
                }
            }
            match refuted {
                Some(r) => refutations.push(r),
                None => return None,
            }
        }
    }
    Some(refutations)
}

/// Decide continuous trace for a rank-2 graph. A generalized cycle with
/// an entrance settles no; strict aperiodicity without strong finite
/// ancestry settles no; strong finite ancestry with tightness settles
/// yes; anything else is reported unknown with the sub-verdicts.
pub fn ctrace_k(kg: &KGraph2, bound: usize) -> Result<Verdict, AnalysisError> {
    if let Some(cert) = gc_entrance_search(kg, bound)? {
        return Ok(Verdict { answer: Answer::No, certificate: cert, depth: Depth::Exact });
    }
    let sa = strictly_aperiodic(kg)?;
    let sfa = strong_finite_ancestry(kg)?;
    let tight = is_tight(kg, bound)?;
    if sa.is_yes() && !sfa.depth.is_bounded() && sfa.answer == Answer::No {
        return Ok(Verdict {
            answer: Answer::No,
            certificate: Certificate::Conjunction {
                parts: vec![
                    NamedVerdict { name: "strictly aperiodic".to_string(), verdict: sa },
                    NamedVerdict {
                        name: "strong finite ancestry".to_string(),
                        verdict: sfa,
                    },
                ],
            },
            depth: Depth::Exact,
        });
    }
    if sfa.is_yes() && tight.is_yes() && !tight.depth.is_bounded() {
        return Ok(Verdict {
            answer: Answer::Yes,
            certificate: Certificate::Conjunction {
                parts: vec![
                    NamedVerdict {
                        name: "strong finite ancestry".to_string(),
                        verdict: sfa,
                    },
                    NamedVerdict { name: "tight".to_string(), verdict: tight },
                ],
            },
            depth: Depth::Exact,
        });
    }
    Ok(Verdict {
        answer: Answer::Unknown,
        certificate: Certificate::Conjunction {
            parts: vec![
                NamedVerdict { name: "strictly aperiodic".to_string(), verdict: sa },
                NamedVerdict { name: "strong finite ancestry".to_string(), verdict: sfa },
                NamedVerdict { name: "tight".to_string(), verdict: tight },
            ],
        },
        depth: Depth::Bounded(bound as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{torus, twoblue, KGraph2};
    use super::*;
    use crate::parse::parse_graph;

    fn product(name: &str, f1: &str, f2: &str) -> KGraph2 {
        let g1 = parse_graph(f1).unwrap();
        let g2 = parse_graph(f2).unwrap();
        let p = ProductKGraph { name: name.to_string(), factors: [g1, g2] };
        KGraph2::Product(Box::new(p))
    }

    const LINE_BRATTELI: &str = "bratteli line\nrepeat [[1]]\nend\n";
    const UHF_BRATTELI: &str = "bratteli uhf\nrepeat [[2]]\nend\n";
    const LOOP_GRAPH: &str = "graph loop\nvertex v\nedge e : v -> v\nend\n";

    #[test]
    fn torus_minimal_pairs_have_a_trivial_side_per_color() {
        let kg = KGraph2::Colored(torus());
        let report = minimal_ancestry_pairs_k(&kg, "v", "v", 2).unwrap();
        assert!(!report.complete);
        for [l, m] in &report.pairs {
            let count = |s: &str, e: &str| s.split_whitespace().filter(|w| *w == e).count();
            assert_eq!(
                count(l, "b").min(count(m, "b")),
                0,
                "({l}, {m}) should be blue-minimal"
            );
            assert_eq!(
                count(l, "r").min(count(m, "r")),
                0,
                "({l}, {m}) should be red-minimal"
            );
        }
        assert!(report.pairs.len() > 1);
    }

    #[test]
    fn colored_graphs_fail_strong_finite_ancestry() {
        let v = strong_finite_ancestry(&KGraph2::Colored(torus())).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::CyclePowerFamily { .. }));
        assert_eq!(v.depth, Depth::Exact);
    }

    #[test]
    fn colored_graphs_fail_strict_aperiodicity() {
        let v = strictly_aperiodic(&KGraph2::Colored(twoblue())).unwrap();
        assert!(v.is_no());
        match v.certificate {
            Certificate::PeriodicPath { period, .. } => assert_eq!(period[0], period[1]),
            other => panic!("expected a periodic path, got {other:?}"),
        }
    }

    #[test]
    fn product_aperiodicity_tracks_factor_cycles() {
        let ll = product("ll", LINE_BRATTELI, LINE_BRATTELI);
        assert!(strictly_aperiodic(&ll).unwrap().is_yes());
        let lp = product("lp", LOOP_GRAPH, LINE_BRATTELI);
        let v = strictly_aperiodic(&lp).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::PeriodicPath { period: [1, 0], .. }));
    }

    #[test]
    fn product_strong_finite_ancestry() {
        let ll = product("ll", LINE_BRATTELI, LINE_BRATTELI);
        assert!(strong_finite_ancestry(&ll).unwrap().is_yes());
        let ul = product("ul", UHF_BRATTELI, LINE_BRATTELI);
        let v = strong_finite_ancestry(&ul).unwrap();
        assert!(v.is_no());
        let lp = product("lp", LOOP_GRAPH, LINE_BRATTELI);
        let v = strong_finite_ancestry(&lp).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::CyclePowerFamily { .. }));
    }

    #[test]
    fn twoblue_is_not_tight_and_torus_stabilizes() {
        let v = is_tight(&KGraph2::Colored(twoblue()), 2).unwrap();
        assert!(v.is_no());
        assert_eq!(v.depth, Depth::Exact);
        match &v.certificate {
            Certificate::TightRefuted { element, period, refutations } => {
                assert_eq!(element, "(b1 r)^inf");
                assert_eq!(*period, [1, 1]);
                assert_eq!(refutations[0], ["b1 r".to_string(), "b2".to_string()]);
            }
            other => panic!("expected a refutation, got {other:?}"),
        }

        let v = is_tight(&KGraph2::Colored(torus()), 2).unwrap();
        assert!(v.is_yes());
        assert!(v.depth.is_bounded());
        assert!(matches!(v.certificate, Certificate::TightStabilized { .. }));
    }

    #[test]
    fn product_tightness_is_factor_entrance_freeness() {
        let ll = product("ll", LINE_BRATTELI, LINE_BRATTELI);
        let v = is_tight(&ll, 2).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.depth, Depth::Exact);
        let with_entrance = product(
            "el",
            "graph en\nvertex v\nvertex w\nedge e : v -> v\nedge g : w -> v\nedge h : v -> w\nend\n",
            LINE_BRATTELI,
        );
        assert!(is_tight(&with_entrance, 2).unwrap().is_no());
    }

    #[test]
    fn generalized_cycles_on_fixtures() {
        let t = KGraph2::Colored(torus());
        assert!(is_generalized_cycle(&t, "b", "v").unwrap());
        assert!(!gen_cycle_has_entrance(&t, "b", "v").unwrap());

        let tb = KGraph2::Colored(twoblue());
        assert!(is_generalized_cycle(&tb, "b1", "v").unwrap());
        assert!(gen_cycle_has_entrance(&tb, "b1", "v").unwrap());
        assert!(!gen_cycle_has_entrance(&tb, "b1", "b1").unwrap());
    }

    #[test]
    fn ctrace_rule_order() {
        let tb = KGraph2::Colored(twoblue());
        let v = ctrace_k(&tb, 2).unwrap();
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::GcEntrance { .. }));
        assert_eq!(v.depth, Depth::Exact);

        let ul = product("ul", UHF_BRATTELI, LINE_BRATTELI);
        let v = ctrace_k(&ul, 2).unwrap();
        assert!(v.is_no());
        assert_eq!(v.depth, Depth::Exact);

        let ll = product("ll", LINE_BRATTELI, LINE_BRATTELI);
        let v = ctrace_k(&ll, 2).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.depth, Depth::Exact);

        let t = KGraph2::Colored(torus());
        let v = ctrace_k(&t, 2).unwrap();
        assert_eq!(v.answer, Answer::Unknown);

        let lp = product("lp", LOOP_GRAPH, LINE_BRATTELI);
        let v = ctrace_k(&lp, 2).unwrap();
        assert_eq!(v.answer, Answer::Unknown);
    }
}
