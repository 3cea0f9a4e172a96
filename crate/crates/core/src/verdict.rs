//! Verdicts, certificates, and CLI reports.
//!
//! Every decision procedure returns a `Verdict`: a three-valued answer, a
//! certificate that lets an independent checker replay the reasoning, and a
//! depth marker saying whether the answer came from a terminated decision or
//! a bounded search.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Three-valued answer. `No` verdicts always carry a replayable witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

/// Whether the verdict is a terminated decision or the result of a search
/// truncated at some depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Exact,
    Bounded(u64),
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Depth::Exact => s.serialize_str("exact"),
            Depth::Bounded(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Depth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            N(u64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) if s == "exact" => Ok(Depth::Exact),
            Raw::S(s) => Err(D::Error::custom(format!("bad depth `{s}`"))),
            Raw::N(n) => Ok(Depth::Bounded(n)),
        }
    }
}

/// One template edge inside a pumping scheme. `copy` is the parallel-copy
/// letter, `rng` and `src` are vertex indices at the range and source levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEdge {
    pub copy: String,
    pub rng: u32,
    pub src: u32,
}

/// One synchronized transition of a pumping scheme: the edge taken on the
/// left path and the edge taken on the right path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpStep {
    pub lambda: StepEdge,
    pub mu: StepEdge,
}

/// Certificates. The `pumping` and `enumeration` shapes are stable public
/// contracts; the remaining variants are witnesses for specific verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// A complete finite enumeration, typically of minimal cycle-free
    /// ancestry pairs. Each side of a pair is a path rendered as
    /// space-separated edge names, or a bare vertex name for trivial paths.
    Enumeration { pairs: Vec<[String; 2]> },
    /// An infinite family of ancestry pairs generated by a cycle in the
    /// synchronized pair automaton of a Bratteli diagram. Unrolling
    /// `head ++ cycle^(k-1) ++ tail` for k = 1, 2, ... yields pairwise
    /// distinct minimal cycle-free ancestry pairs for `query`.
    Pumping {
        query: [String; 2],
        start_level: u64,
        cycle_states: Vec<[String; 2]>,
        divergent_edges: Vec<[String; 2]>,
        head: Vec<PumpStep>,
        cycle: Vec<PumpStep>,
        tail: Vec<PumpStep>,
    },
    /// An infinite family of ancestry pairs obtained by varying a bundle
    /// copy index or a tail detour depth in the representative pair.
    InfiniteFamily {
        query: [String; 2],
        representative: [String; 2],
        pumpable: Vec<String>,
        rule: String,
    },
    /// A cycle together with an entrance into it.
    CycleEntrance { cycle: Vec<String>, entrance: String },
    /// All simple cycles were checked and none has an entrance.
    EntranceFree { simple_cycles: Vec<Vec<String>> },
    /// A conjunction of named sub-verdicts.
    Conjunction { parts: Vec<NamedVerdict> },
    /// A generalized cycle (lambda, mu) with an extension witnessing that
    /// the reversed pair is not one, i.e. the generalized cycle has an
    /// entrance.
    GcEntrance {
        lambda: String,
        mu: String,
        witness: String,
    },
    /// A periodic infinite path: the cycle repeats forever and the shift by
    /// `period` fixes the path, refuting strict aperiodicity.
    PeriodicPath { cycle: String, period: [u64; 2] },
    /// Powers of a cycle paired with the trivial path at its base vertex
    /// form an infinite family of minimal ancestry pairs.
    CyclePowerFamily { cycle: String, vertex: String },
    /// An isotropy element with every candidate witness refuted: for each
    /// forced candidate, a continuation on which the two sides disagree.
    TightRefuted {
        element: String,
        period: [i64; 2],
        refutations: Vec<[String; 2]>,
    },
    /// Every isotropy candidate found within the search bound acquired a
    /// witness that was stable over the stated verification window.
    TightStabilized {
        candidates: u64,
        window: [u64; 2],
    },
    /// Free-form note for verdicts whose justification is a named rule.
    Note { text: String },
}

/// A sub-verdict labeled by the question it answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: Verdict,
}

/// The outcome of a decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    pub certificate: Certificate,
    pub depth: Depth,
}

impl Verdict {
    pub fn new(answer: Answer, certificate: Certificate, depth: Depth) -> Self {
        Verdict { answer, certificate, depth }
    }

    pub fn exact(answer: Answer, certificate: Certificate) -> Self {
        Verdict { answer, certificate, depth: Depth::Exact }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::No
    }
}

/// A report as printed by the command line interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub question: String,
    pub answer: Answer,
    pub certificate: Certificate,
    pub depth: Depth,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn from_verdict(question: impl Into<String>, v: Verdict, timing_ms: Option<u64>) -> Self {
        Report {
            question: question.into(),
            answer: v.answer,
            certificate: v.certificate,
            depth: v.depth,
            timing_ms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_serializes_as_exact_or_integer() {
        assert_eq!(serde_json::to_string(&Depth::Exact).unwrap(), "\"exact\"");
        assert_eq!(serde_json::to_string(&Depth::Bounded(6)).unwrap(), "6");
        let d: Depth = serde_json::from_str("\"exact\"").unwrap();
        assert_eq!(d, Depth::Exact);
        let d: Depth = serde_json::from_str("17").unwrap();
        assert_eq!(d, Depth::Bounded(17));
    }

    #[test]
    fn certificate_type_tags_are_stable() {
        let c = Certificate::Enumeration { pairs: vec![["v".into(), "v".into()]] };
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["type"], "enumeration");
        let c = Certificate::Pumping {
            query: ["v1".into(), "v1".into()],
            start_level: 1,
            cycle_states: vec![["v".into(), "v".into()]],
            divergent_edges: vec![["e".into(), "f".into()]],
            head: vec![],
            cycle: vec![],
            tail: vec![],
        };
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["type"], "pumping");
        assert!(json.get("cycle_states").is_some());
        assert!(json.get("divergent_edges").is_some());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = Report {
            question: "finite_ancestry".into(),
            answer: Answer::Yes,
            certificate: Certificate::Enumeration { pairs: vec![] },
            depth: Depth::Exact,
            timing_ms: None,
        };
        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(!json.contains("timing_ms"));
    }
}
