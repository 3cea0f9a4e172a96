//! Synchronized-descent automaton for Bratteli diagrams.
//!
//! A minimal ancestry pair for a query (a, b) descends the diagram: the
//! shallower side first walks alone to the deeper side's level, then both
//! sides step down together, and the pair completes the moment the two
//! walks land on a common vertex through distinct edges. Completions with
//! a trivial side are the alignment walks that land exactly on the other
//! query vertex, and the pair (a, a) completes on the spot.
//!
//! States are same-level vertex pairs. Below the prefix the transition
//! structure repeats, so states at levels past the prefix collapse to a
//! finite template quotient. Every state has a successor (every row of
//! every matrix has a positive entry), so a query has infinitely many
//! minimal pairs exactly when its synchronized walk can reach a template
//! state that lies on a quotient cycle and can still reach an accepting
//! move. Otherwise an accepting walk cannot revisit any quotient state,
//! which bounds its length by the state count and makes exhaustive
//! enumeration at that depth exact.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::bratteli::BratteliPresentation;
use crate::verdict::{Answer, Certificate, Depth, PumpStep, StepEdge, Verdict};

/// Quotient state of the synchronized descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QState {
    /// A pair at a level still inside the prefix.
    Layer { level: usize, p: usize, q: usize },
    /// A pair at any level past the prefix; these behave identically.
    Template { p: usize, q: usize },
}

fn qstate(b: &BratteliPresentation, level: usize, p: usize, q: usize) -> QState {
    if level >= b.template_start() {
        QState::Template { p, q }
    } else {
        QState::Layer { level, p, q }
    }
}

/// Synchronized successors of a state, with edge-pair multiplicities.
fn successors(b: &BratteliPresentation, s: QState) -> Vec<(QState, u64)> {
    let (level, p, q) = match s {
        QState::Layer { level, p, q } => (level, p, q),
        QState::Template { p, q } => (b.template_start(), p, q),
    };
    let m = b.matrix_for_level(level);
    let mut out = Vec::new();
    for p2 in 0..m[p].len() {
        for q2 in 0..m[q].len() {
            let mult = m[p][p2] * m[q][q2];
            if mult > 0 {
                out.push((qstate(b, level + 1, p2, q2), mult));
            }
        }
    }
    out
}

/// Ordered pairs of distinct edges from a common next-level vertex into
/// p and q: the accepting moves available at this state.
fn accepting_moves(b: &BratteliPresentation, s: QState) -> u64 {
    let (level, p, q) = match s {
        QState::Layer { level, p, q } => (level, p, q),
        QState::Template { p, q } => (b.template_start(), p, q),
    };
    let m = b.matrix_for_level(level);
    (0..m[p].len())
        .map(|z| if p == q { m[p][z] * m[p][z].saturating_sub(1) } else { m[p][z] * m[q][z] })
        .sum()
}

/// Analysis of the template zone shared by all queries.
pub struct TemplateInfo {
    dim: usize,
    /// Template states (p, q) from which some accepting move is reachable.
    accept_capable: Vec<bool>,
    /// Template states that can return to themselves.
    on_cycle: Vec<bool>,
}

impl TemplateInfo {
    pub fn divergent(&self, p: usize, q: usize) -> bool {
        let i = p * self.dim + q;
        self.accept_capable[i] && self.on_cycle[i]
    }
}

pub fn template_info(b: &BratteliPresentation) -> TemplateInfo {
    let d = b.repeat.len();
    let idx = |p: usize, q: usize| p * d + q;
    let mut succ = vec![Vec::new(); d * d];
    let mut acc_now = vec![false; d * d];
    for p in 0..d {
        for q in 0..d {
            let s = QState::Template { p, q };
            acc_now[idx(p, q)] = accepting_moves(b, s) > 0;
            for (t, _) in successors(b, s) {
                let QState::Template { p: p2, q: q2 } = t else {
                    unreachable!("template successors stay in the template");
                };
                succ[idx(p, q)].push(idx(p2, q2));
            }
        }
    }
    let reach_from = |start: &[usize]| {
        let mut seen = vec![false; d * d];
        let mut queue: VecDeque<usize> = start.iter().copied().collect();
        for &s in start {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &t in &succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    };
    let mut accept_capable = vec![false; d * d];
    let mut on_cycle = vec![false; d * d];
    for s in 0..d * d {
        let r = reach_from(&succ[s]);
        on_cycle[s] = r[s];
        accept_capable[s] = acc_now[s] || (0..d * d).any(|t| r[t] && acc_now[t]);
    }
    TemplateInfo { dim: d, accept_capable, on_cycle }
}

/// Vertices at `level` reachable by descending `steps` levels from
/// vertex `i` at `level - steps`.
fn descend_set(b: &BratteliPresentation, mut level: usize, i: usize, steps: usize) -> Vec<usize> {
    let mut cur: BTreeSet<usize> = [i].into();
    for _ in 0..steps {
        let m = b.matrix_for_level(level);
        let mut next = BTreeSet::new();
        for &v in &cur {
            for (j, &mult) in m[v].iter().enumerate() {
                if mult > 0 {
                    next.insert(j);
                }
            }
        }
        cur = next;
        level += 1;
    }
    cur.into_iter().collect()
}

/// Quotient states a query can occupy after alignment, walking the
/// shallower vertex down to the deeper vertex's level.
pub fn start_states(
    b: &BratteliPresentation,
    a: (usize, usize),
    c: (usize, usize),
) -> Vec<QState> {
    let ((l1, i), (l2, j), swapped) = if a.0 <= c.0 {
        (a, c, false)
    } else {
        (c, a, true)
    };
    descend_set(b, l1, i, l2 - l1)
        .into_iter()
        .map(|p| {
            if swapped {
                qstate(b, l2, j, p)
            } else {
                qstate(b, l2, p, j)
            }
        })
        .collect()
}

/// Does the query (a, c) admit infinitely many minimal ancestry pairs?
/// Vertices are given as (level, index). Exact.
pub fn query_divergent(b: &BratteliPresentation, a: (usize, usize), c: (usize, usize)) -> bool {
    let info = template_info(b);
    let mut queue: VecDeque<QState> = start_states(b, a, c).into();
    let mut seen: BTreeSet<QState> = queue.iter().copied().collect();
    while let Some(s) = queue.pop_front() {
        if let QState::Template { p, q } = s {
            if info.divergent(p, q) {
                return true;
            }
        }
        for (t, _) in successors(b, s) {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    false
}

/// Number of quotient states, bounding the synchronized length of any
/// accepting walk when no divergent state is reachable.
pub fn qstate_count(b: &BratteliPresentation) -> usize {
    let mut n = 0;
    for level in 1..b.template_start() {
        n += b.level_size(level) * b.level_size(level);
    }
    n + b.repeat.len() * b.repeat.len()
}

/// Window depth at which enumeration of a non-divergent query with its
/// deeper vertex at `deep_level` is complete.
pub fn sufficient_depth(b: &BratteliPresentation, deep_level: usize) -> usize {
    deep_level + qstate_count(b) + 2
}

/// Whether some query of the diagram has infinitely many minimal
/// ancestry pairs, reported with the divergent template pair.
pub fn diagram_divergence(b: &BratteliPresentation) -> Option<(usize, usize)> {
    let info = template_info(b);
    let d = b.repeat.len();
    let mut best: Option<(usize, usize)> = None;
    for p in 0..d {
        for q in 0..d {
            if info.divergent(p, q) {
                let cand = (p, q);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

fn copy_index(letter: &str) -> Option<u64> {
    (0..30).find(|&c| BratteliPresentation::copy_letter(c) == letter)
}

fn step_edge(copy: u64, rng: usize, src: usize) -> StepEdge {
    StepEdge {
        copy: BratteliPresentation::copy_letter(copy),
        rng: rng as u32,
        src: src as u32,
    }
}

/// Concrete edge name of a certificate step placed at `level`.
pub fn step_edge_name(b: &BratteliPresentation, level: usize, se: &StepEdge) -> Option<String> {
    let c = copy_index(&se.copy)?;
    let m = b.matrix_for_level(level);
    let (rng, src) = (se.rng as usize, se.src as usize);
    if rng >= m.len() || src >= m[rng].len() || m[rng][src] <= c {
        return None;
    }
    Some(b.edge_name(level, rng, src, c))
}

/// Diagonal walk from vertex `from` to vertex `to` in the repeat block,
/// as steps where both strands ride the same edge.
fn diagonal_return(b: &BratteliPresentation, from: usize, to: usize) -> Option<Vec<PumpStep>> {
    let r = &b.repeat;
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen: BTreeSet<usize> = [from].into();
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut verts = vec![v];
            let mut cur = v;
            while cur != from {
                cur = prev[&cur];
                verts.push(cur);
            }
            verts.reverse();
            let steps = verts
                .windows(2)
                .map(|w| {
                    let e = step_edge(0, w[0], w[1]);
                    PumpStep { lambda: e.clone(), mu: e }
                })
                .collect();
            return Some(steps);
        }
        for (j, &mult) in r[v].iter().enumerate() {
            if mult > 0 && seen.insert(j) {
                prev.insert(j, v);
                queue.push_back(j);
            }
        }
    }
    None
}

/// Pumping scheme for a same-level template query known to be divergent.
/// Prefers the braided form through a diagonal state with a parallel
/// edge pair, which realizes the family that alternates the two copies.
pub fn pumping_certificate(b: &BratteliPresentation, p: usize, q: usize) -> Certificate {
    let d = b.repeat.len();
    let level = b.template_start();
    let query = [b.vertex_name(level, p), b.vertex_name(level, q)];
    let name = |v: usize| b.vertex_name(level, v);

    // Braided form: a diagonal state (x, x) reachable from (p, q) with a
    // parallel pair into x from z and a diagonal walk back from z to x.
    let braid = braided_scheme(b, p, q);
    if let Some((head, x, z, ret)) = braid {
        let e = step_edge(0, x, z);
        let f = step_edge(1, x, z);
        let mut tail = vec![PumpStep { lambda: f.clone(), mu: e.clone() }];
        tail.extend(ret.iter().cloned());
        tail.push(PumpStep { lambda: e, mu: f });
        let mut cycle = tail.clone();
        cycle.extend(ret.iter().cloned());
        let cycle_states = vec![[name(x), name(x)], [name(z), name(z)]];
        return Certificate::Pumping {
            query,
            start_level: level as u64,
            cycle_states,
            divergent_edges: vec![[
                BratteliPresentation::copy_letter(0),
                BratteliPresentation::copy_letter(1),
            ]],
            head,
            cycle,
            tail,
        };
    }

    // General form: loop at (p, q), then walk to an accepting state and
    // take one accepting move.
    let idx = |p: usize, q: usize| p * d + q;
    let step_between = |s: (usize, usize), t: (usize, usize)| {
        let lam = step_edge(0, s.0, t.0);
        let mu = step_edge(0, s.1, t.1);
        PumpStep { lambda: lam, mu }
    };
    let path_to = |from: (usize, usize), goal: &dyn Fn((usize, usize)) -> bool| {
        let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; d * d];
        seen[idx(from.0, from.1)] = true;
        while let Some(s) = queue.pop_front() {
            if goal(s) {
                let mut states = vec![s];
                let mut cur = s;
                while cur != from {
                    cur = prev[&idx(cur.0, cur.1)];
                    states.push(cur);
                }
                states.reverse();
                return Some(states);
            }
            for (t, _) in successors(b, QState::Template { p: s.0, q: s.1 }) {
                let QState::Template { p: tp, q: tq } = t else { unreachable!() };
                if !seen[idx(tp, tq)] {
                    seen[idx(tp, tq)] = true;
                    prev.insert(idx(tp, tq), s);
                    queue.push_back((tp, tq));
                }
            }
        }
        None
    };
    // A cycle back to (p, q): step to a successor that can walk home.
    let (fp, fq, home) = successors(b, QState::Template { p, q })
        .into_iter()
        .find_map(|(t, _)| {
            let QState::Template { p: tp, q: tq } = t else { unreachable!() };
            path_to((tp, tq), &|s| s == (p, q)).map(|home| (tp, tq, home))
        })
        .expect("state is on a cycle");
    let mut cycle = vec![step_between((p, q), (fp, fq))];
    cycle.extend(home.windows(2).map(|w| step_between(w[0], w[1])));
    let accepting = path_to((p, q), &|s| {
        accepting_moves(b, QState::Template { p: s.0, q: s.1 }) > 0
    })
    .expect("state is accept capable");
    let mut tail: Vec<PumpStep> =
        accepting.windows(2).map(|w| step_between(w[0], w[1])).collect();
    let &(tp, tq) = accepting.last().expect("path includes its endpoint");
    let r = &b.repeat;
    let z = (0..d)
        .find(|&z| if tp == tq { r[tp][z] >= 2 } else { r[tp][z] >= 1 && r[tq][z] >= 1 })
        .expect("state has an accepting move");
    let (ec, fc) = if tp == tq { (0, 1) } else { (0, 0) };
    tail.push(PumpStep {
        lambda: step_edge(ec, tp, z),
        mu: step_edge(fc, tq, z),
    });
    let cycle_states = cycle_state_names(b, level, p, q, &cycle);
    Certificate::Pumping {
        query,
        start_level: level as u64,
        cycle_states,
        divergent_edges: vec![[
            BratteliPresentation::copy_letter(ec),
            BratteliPresentation::copy_letter(fc),
        ]],
        head: Vec::new(),
        cycle,
        tail,
    }
}

fn cycle_state_names(
    b: &BratteliPresentation,
    level: usize,
    p: usize,
    q: usize,
    cycle: &[PumpStep],
) -> Vec<[String; 2]> {
    let mut out = vec![[b.vertex_name(level, p), b.vertex_name(level, q)]];
    for s in &cycle[..cycle.len().saturating_sub(1)] {
        let cur = (s.lambda.src as usize, s.mu.src as usize);
        out.push([b.vertex_name(level, cur.0), b.vertex_name(level, cur.1)]);
    }
    out
}

/// Search for the braided scheme: head to a diagonal state (x, x), a
/// vertex z with two parallel edges into x, and a diagonal return walk.
#[allow(clippy::type_complexity)]
fn braided_scheme(
    b: &BratteliPresentation,
    p: usize,
    q: usize,
) -> Option<(Vec<PumpStep>, usize, usize, Vec<PumpStep>)> {
    let d = b.repeat.len();
    let usable = |x: usize| {
        (0..d).find(|&z| b.repeat[x][z] >= 2 && diagonal_return(b, z, x).is_some())
    };
    // BFS over template states from (p, q) for the nearest usable diagonal.
    let idx = |s: (usize, usize)| s.0 * d + s.1;
    let mut prev: BTreeMap<usize, ((usize, usize), PumpStep)> = BTreeMap::new();
    let mut seen = vec![false; d * d];
    seen[idx((p, q))] = true;
    let mut queue = VecDeque::from([(p, q)]);
    while let Some(s) = queue.pop_front() {
        if s.0 == s.1 {
            if let Some(z) = usable(s.0) {
                let mut steps = Vec::new();
                let mut cur = s;
                while cur != (p, q) {
                    let (before, step) = prev[&idx(cur)].clone();
                    steps.push(step);
                    cur = before;
                }
                steps.reverse();
                let ret = diagonal_return(b, z, s.0).expect("checked by usable");
                return Some((steps, s.0, z, ret));
            }
        }
        for (t, _) in successors(b, QState::Template { p: s.0, q: s.1 }) {
            let QState::Template { p: tp, q: tq } = t else { unreachable!() };
            if !seen[idx((tp, tq))] {
                seen[idx((tp, tq))] = true;
                let step = PumpStep {
                    lambda: step_edge(0, s.0, tp),
                    mu: step_edge(0, s.1, tq),
                };
                prev.insert(idx((tp, tq)), (s, step));
                queue.push_back((tp, tq));
            }
        }
    }
    None
}

/// Steps of the k-th pair of a pumping scheme, 1-based.
pub fn unroll(cert: &Certificate, k: usize) -> Option<Vec<PumpStep>> {
    let Certificate::Pumping { head, cycle, tail, .. } = cert else {
        return None;
    };
    let mut steps = head.clone();
    for _ in 1..k {
        steps.extend(cycle.iter().cloned());
    }
    steps.extend(tail.iter().cloned());
    Some(steps)
}

/// Concrete edge names of the k-th pair, as (lambda, mu).
pub fn unroll_names(
    b: &BratteliPresentation,
    cert: &Certificate,
    k: usize,
) -> Option<(Vec<String>, Vec<String>)> {
    let Certificate::Pumping { start_level, .. } = cert else {
        return None;
    };
    let steps = unroll(cert, k)?;
    let mut lam = Vec::new();
    let mut mu = Vec::new();
    for (i, s) in steps.iter().enumerate() {
        let level = *start_level as usize + i;
        lam.push(step_edge_name(b, level, &s.lambda)?);
        mu.push(step_edge_name(b, level, &s.mu)?);
    }
    Some((lam, mu))
}

/// Replay a pumping scheme against the diagram: unrollings must be
/// genuine minimal ancestry pairs of strictly growing length.
pub fn verify_pumping(b: &BratteliPresentation, cert: &Certificate) -> Result<(), String> {
    let Certificate::Pumping { query, start_level, head, cycle, tail, .. } = cert else {
        return Err("not a pumping certificate".into());
    };
    if cycle.is_empty() || tail.is_empty() {
        return Err("pump cycle and tail must be nonempty".into());
    }
    let level = *start_level as usize;
    let a = b
        .vertex_lookup(&query[0])
        .ok_or_else(|| format!("unknown vertex `{}`", query[0]))?;
    let c = b
        .vertex_lookup(&query[1])
        .ok_or_else(|| format!("unknown vertex `{}`", query[1]))?;
    if a.0 != level || c.0 != level {
        return Err("scheme must start at the query level".into());
    }
    let _ = head;
    for k in 1..=4 {
        let steps = unroll(cert, k).expect("shape checked above");
        let mut at = (a.1, c.1);
        for (i, s) in steps.iter().enumerate() {
            let l = level + i;
            let m = b.matrix_for_level(l);
            for (se, side) in [(&s.lambda, at.0), (&s.mu, at.1)] {
                if se.rng as usize != side {
                    return Err(format!("step {i} of pair {k} does not continue its walk"));
                }
                let c_idx = copy_index(&se.copy)
                    .ok_or_else(|| format!("bad copy letter `{}`", se.copy))?;
                if se.src as usize >= m[side].len() || m[side][se.src as usize] <= c_idx {
                    return Err(format!("step {i} of pair {k} uses a missing edge"));
                }
            }
            at = (s.lambda.src as usize, s.mu.src as usize);
        }
        if at.0 != at.1 {
            return Err(format!("pair {k} does not share its source"));
        }
        let last = steps.last().expect("nonempty");
        let same_edge = last.lambda == last.mu;
        if same_edge {
            return Err(format!("pair {k} is not minimal"));
        }
    }
    Ok(())
}

/// Decide whether every query of the diagram has finitely many minimal
/// ancestry pairs.
pub fn finite_ancestry_bratteli(b: &BratteliPresentation) -> Verdict {
    match diagram_divergence(b) {
        Some((p, q)) => {
            let cert = pumping_certificate(b, p, q);
            debug_assert!(verify_pumping(b, &cert).is_ok());
            Verdict::exact(Answer::No, cert)
        }
        None => {
            let bound = qstate_count(b);
            let text = format!(
                "no template state pair both lies on a cycle and reaches an \
                 accepting move; accepting walks visit each of the {bound} \
                 quotient states at most once"
            );
            Verdict::exact(Answer::Yes, Certificate::Note { text })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;

    fn diagram(text: &str) -> BratteliPresentation {
        parse_graph(text).unwrap().bratteli.unwrap()
    }

    #[test]
    fn uhf_is_divergent_with_braided_scheme() {
        let b = diagram("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n");
        assert_eq!(diagram_divergence(&b), Some((0, 0)));
        let cert = pumping_certificate(&b, 0, 0);
        verify_pumping(&b, &cert).unwrap();
        let (lam, mu) = unroll_names(&b, &cert, 1).unwrap();
        assert_eq!(lam, vec!["f1", "e2"]);
        assert_eq!(mu, vec!["e1", "f2"]);
        let (lam, mu) = unroll_names(&b, &cert, 2).unwrap();
        assert_eq!(lam, vec!["f1", "e2", "f3", "e4"]);
        assert_eq!(mu, vec!["e1", "f2", "e3", "f4"]);
    }

    #[test]
    fn line_diagram_is_finite() {
        let b = diagram("bratteli line\nprefix []\nrepeat [[1]]\nend\n");
        assert_eq!(diagram_divergence(&b), None);
        let v = finite_ancestry_bratteli(&b);
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.depth, Depth::Exact);
    }

    #[test]
    fn permutation_diagram_is_finite() {
        let b = diagram("bratteli swap\nprefix []\nrepeat [[0,1],[1,0]]\nend\n");
        assert_eq!(diagram_divergence(&b), None);
        assert!(!query_divergent(&b, (1, 0), (1, 1)));
        assert!(!query_divergent(&b, (1, 0), (3, 0)));
    }

    #[test]
    fn uhf_queries_are_divergent() {
        let b = diagram("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n");
        assert!(query_divergent(&b, (1, 0), (1, 0)));
        assert!(query_divergent(&b, (1, 0), (3, 0)));
    }

    #[test]
    fn prefix_can_shield_a_finite_corner() {
        // Two classes at every level; class 2 only ever feeds class 2,
        // and only class 2 has the doubled edge.
        let b = diagram(
            "bratteli mixed\nprefix []\nrepeat [[1,0],[1,2]]\nend\n",
        );
        // (v1_1, v1_1) stays on the (1,1) corner, which has single edges
        // until a walk falls into class 2.
        let info = template_info(&b);
        assert!(info.divergent(1, 1));
        assert!(!info.divergent(0, 0), "the (0,0) corner never reaches a doubled edge");
        assert!(!query_divergent(&b, (1, 0), (1, 0)));
        assert!(query_divergent(&b, (1, 1), (1, 1)));
        assert!(diagram_divergence(&b).is_some());
    }

    #[test]
    fn truncated_pair_count_matches_closed_form() {
        // For the 2^infinity diagram the number of both-sided minimal
        // pairs for (v1, v1) with t synchronized steps is 2 * 4^(t-1):
        // 4 edge pairs at each of the first t-1 levels, then an ordered
        // distinct pair at the last.
        let b = diagram("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n");
        let mut per_level = vec![0u64; 9];
        let mut walks = 1u64;
        for t in 1..=8u32 {
            per_level[t as usize] = walks * accepting_moves(&b, QState::Template { p: 0, q: 0 });
            let step: u64 = successors(&b, QState::Template { p: 0, q: 0 })
                .iter()
                .map(|&(_, m)| m)
                .sum();
            walks *= step;
        }
        for t in 1..=8usize {
            assert_eq!(per_level[t], 2 * 4u64.pow(t as u32 - 1));
        }
    }
}
