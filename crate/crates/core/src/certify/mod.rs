//! Exposedness and niceness certificates.
//!
//! For every face `F` the closedness of `K* + F^perp` is decided through
//! five equivalent conditions on the faces `H` of `F*`, each evaluated with
//! `K*` and with `K* + F^perp` in its place. The ten evaluations must agree
//! wherever they are decided; a disagreement is an invariant breach.

pub mod poly;
pub mod structured;

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::QVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// `F* = K* + F^perp`.
    One,
    /// `K*` meets `ri H` for every face `H` of `F*`.
    Two,
    /// `K* ∩ H` strictly contains `K* ∩ F^perp` for every properly minimal `H`.
    Three,
    /// As `Two`, over properly minimal faces only.
    TwoP,
    /// As `Three`, over every face other than `F^perp`.
    ThreeP,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::One,
        Condition::Two,
        Condition::Three,
        Condition::TwoP,
        Condition::ThreeP,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::One => "1",
            Condition::Two => "2",
            Condition::Three => "3",
            Condition::TwoP => "2p",
            Condition::ThreeP => "3p",
        }
    }

    pub fn parse(s: &str) -> Option<Condition> {
        Condition::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionEval {
    pub condition: Condition,
    /// Evaluated with `K* + F^perp` in place of `K*`.
    pub substituted: bool,
    /// `None` when undecided.
    pub verdict: Option<bool>,
    /// Name of the dual face where the condition fails or stays undecided.
    pub at: Option<String>,
}

/// `x_{F,H}`: the generator of `H ∩ lin F` for a properly minimal `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XfhDirection {
    pub h: String,
    pub direction: QVec,
    /// Whether the direction lies in the projection of `K*` onto `lin F`.
    pub in_projection: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRecord {
    pub face: String,
    pub trivial: bool,
    /// Whether `K* + F^perp` is closed.
    pub closed: Option<bool>,
    pub conditions: Vec<ConditionEval>,
    /// A point of `F*` outside `K* + F^perp`, when not closed.
    pub witness: Option<QVec>,
    pub xfh: Vec<XfhDirection>,
}

impl FaceRecord {
    pub fn eval(&self, c: Condition, substituted: bool) -> Option<&ConditionEval> {
        self.conditions
            .iter()
            .find(|e| e.condition == c && e.substituted == substituted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NicenessCertificate {
    pub cone: String,
    pub nice: Option<bool>,
    pub faces: Vec<FaceRecord>,
}

impl NicenessCertificate {
    /// The first face whose sum is not closed.
    pub fn failing_face(&self) -> Option<&FaceRecord> {
        self.faces.iter().find(|f| f.closed == Some(false))
    }
}

/// `E1` is not exposed: the smallest exposed face containing it is `E2`,
/// exposed by `y`, and `C* ∩ E1^perp = C* ∩ E2^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposureWitness {
    pub face: String,
    pub smallest_exposed: String,
    pub y: QVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposednessCertificate {
    pub cone: String,
    pub exposed: Option<bool>,
    pub faces_checked: usize,
    /// Names of faces whose exposedness was not decided.
    pub undecided: Vec<String>,
    pub witness: Option<ExposureWitness>,
}

/// A nonexposed face `G`, the smallest exposed face `F` containing it, and
/// a point of `F* ∩ G^perp` outside `K* + F^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonClosednessWitness {
    pub nonexposed: String,
    pub face: String,
    pub point: QVec,
}

/// Folds per-face verdicts: any failure wins, then any undecided.
pub fn aggregate(verdicts: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    let mut undecided = false;
    for v in verdicts {
        match v {
            Some(false) => return Some(false),
            None => undecided = true,
            Some(true) => {}
        }
    }
    if undecided {
        None
    } else {
        Some(true)
    }
}

/// The common verdict of the decided evaluations.
pub(crate) fn unanimous(face: &str, evals: &[ConditionEval]) -> Result<Option<bool>> {
    let mut seen: Option<(bool, &ConditionEval)> = None;
    for e in evals {
        let Some(v) = e.verdict else { continue };
        match seen {
            None => seen = Some((v, e)),
            Some((w, first)) if w != v => {
                return Err(Error::InvariantBreach(format!(
                    "face {face}: condition {}{} gives {w} but {}{} gives {v}",
                    first.condition,
                    if first.substituted { "*" } else { "" },
                    e.condition,
                    if e.substituted { "*" } else { "" },
                )))
            }
            _ => {}
        }
    }
    Ok(seen.map(|(v, _)| v))
}

/// Evaluates a condition that quantifies over a list of dual faces.
pub(crate) fn forall<'a>(
    items: impl IntoIterator<Item = (&'a str, Option<bool>)>,
) -> (Option<bool>, Option<String>) {
    let mut undecided: Option<String> = None;
    for (name, v) in items {
        match v {
            Some(false) => return (Some(false), Some(name.to_string())),
            None if undecided.is_none() => undecided = Some(name.to_string()),
            _ => {}
        }
    }
    match undecided {
        Some(n) => (None, Some(n)),
        None => (Some(true), None),
    }
}
