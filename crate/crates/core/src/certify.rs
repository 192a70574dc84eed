//! Unknotting-sequence certificates.
//!
//! A certificate starts from a diagram of a connected sum, changes one
//! crossing at a time, may swap the current diagram for another diagram of
//! the same knot, and must end at a diagram that simplifies to the unknot.
//! Each change counts towards the claimed bound.
//!
//! "Same knot" is checked by fingerprint equality and named knots by
//! [`KnotTable::identify`], so a passing certificate proves the bound at the
//! invariant level only.
//!
//! # Text format
//!
//! ```text
//! certificate := line*
//! line        := blank | "#" text | header | step
//! header      := "title:" text
//!              | "sum:" side "#" side      (optional)
//!              | "bound:" INT
//! side        := ["mirror"] NAME
//! step        := "start" DT [note]
//!              | "change" INT ["->" NAME] [note]
//!              | "substitute" DT ["mirror"] [note]
//! note        := '"' text '"'
//! ```
//!
//! DT codes use the bracket syntax of [`parse_dt`]. A `mirror` after a
//! substituted code says that it draws the mirror image of the current knot.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use log::info;
use thiserror::Error;

use crate::atlas::{Identification, KnotTable, UnknottingNumber};
use crate::diagram::{CrossingRef, PlanarDiagram};
use crate::invariants::{fingerprint, murasugi_lower_bound, Fingerprint, InvariantError};
use crate::moves::{certify_unknot, simplify, UnknotVerdict, DEFAULT_BUDGET};
use crate::notation::{dt_to_diagram, parse_dt, DtCode};

const BUNDLED: [(&str, &str); 3] = [
    ("4_1-9_10", include_str!("../data/certificates/4_1-9_10.cert")),
    ("5_1-8_2", include_str!("../data/certificates/5_1-8_2.cert")),
    ("3_1-10_6", include_str!("../data/certificates/3_1-10_6.cert")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub name: String,
    pub mirrored: bool,
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            write!(f, "mirror {}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// Parses `NAME` or `mirror NAME`.
impl FromStr for Summand {
    type Err = CertifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_side(s).ok_or_else(|| CertifyError::Malformed {
            line: 0,
            detail: format!("bad summand {s:?}"),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimedSum {
    pub left: Summand,
    pub right: Summand,
}

impl fmt::Display for ClaimedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} # {}", self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Start(DtCode),
    Change {
        index: usize,
        expected_name: Option<String>,
    },
    Substitute {
        dt: DtCode,
        mirrored: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub note: Option<String>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Start(dt) => write!(f, "start {}", dt_text(dt))?,
            StepKind::Change { index, expected_name } => {
                write!(f, "change {index}")?;
                if let Some(name) = expected_name {
                    write!(f, " -> {name}")?;
                }
            }
            StepKind::Substitute { dt, mirrored } => {
                write!(f, "substitute {}", dt_text(dt))?;
                if *mirrored {
                    f.write_str(" mirror")?;
                }
            }
        }
        if let Some(note) = &self.note {
            write!(f, " \"{note}\"")?;
        }
        Ok(())
    }
}

fn dt_text(dt: &DtCode) -> String {
    let s = dt.to_string();
    s.strip_prefix("DT:").map(str::to_string).unwrap_or(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub title: String,
    /// The knot the start diagram is claimed to draw, when it is a sum of
    /// table knots.
    pub claimed_sum: Option<ClaimedSum>,
    pub steps: Vec<Step>,
    pub claimed_bound: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("step {step}: {detail}")]
    StepMismatch { step: usize, detail: String },
    #[error("final diagram did not simplify to the unknot ({crossings} crossings left)")]
    UnknotNotReached { crossings: usize },
    #[error("{0} is not in the knot table")]
    TableMissingName(String),
    #[error("the certificate names no connected sum")]
    NoClaimedSum,
    #[error("{0} has no tabulated unknotting number")]
    MissingUnknottingNumber(String),
    #[error("cannot read certificate: {0}")]
    Io(String),
}

impl Certificate {
    pub fn parse(text: &str) -> Result<Certificate, CertifyError> {
        let mut title = None;
        let mut sum = None;
        let mut bound = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let bad = |detail: String| CertifyError::Malformed { line, detail };
            if let Some(rest) = row.strip_prefix("title:") {
                title = Some(rest.trim().to_string());
            } else if let Some(rest) = row.strip_prefix("sum:") {
                let (l, r) = rest.split_once('#').ok_or_else(|| bad("sum needs two sides".into()))?;
                sum = Some(ClaimedSum {
                    left: parse_side(l).ok_or_else(|| bad(format!("bad summand {l:?}")))?,
                    right: parse_side(r).ok_or_else(|| bad(format!("bad summand {r:?}")))?,
                });
            } else if let Some(rest) = row.strip_prefix("bound:") {
                bound = Some(rest.trim().parse().map_err(|_| bad(format!("bad bound {rest:?}")))?);
            } else {
                steps.push(parse_step(row).map_err(bad)?);
            }
        }
        let missing = |what: &str| CertifyError::Malformed {
            line: 0,
            detail: format!("missing {what}"),
        };
        let c = Certificate {
            title: title.ok_or_else(|| missing("title"))?,
            claimed_sum: sum,
            steps,
            claimed_bound: bound.ok_or_else(|| missing("bound"))?,
        };
        c.check_shape()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Certificate, CertifyError> {
        let text = std::fs::read_to_string(path).map_err(|e| CertifyError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The certificates shipped with the library, keyed by file stem.
    pub fn bundled() -> Vec<(&'static str, Certificate)> {
        BUNDLED
            .iter()
            .map(|&(name, text)| (name, Certificate::parse(text).expect("bundled certificates parse")))
            .collect()
    }

    fn check_shape(&self) -> Result<(), CertifyError> {
        let shape = |detail: String| CertifyError::Malformed { line: 0, detail };
        if !matches!(self.steps.first().map(|s| &s.kind), Some(StepKind::Start(_))) {
            return Err(shape("the first step must be start".into()));
        }
        if self.steps[1..].iter().any(|s| matches!(s.kind, StepKind::Start(_))) {
            return Err(shape("only the first step may be start".into()));
        }
        let changes = self.change_count();
        if changes != self.claimed_bound as usize {
            return Err(shape(format!("{changes} crossing changes but bound {}", self.claimed_bound)));
        }
        Ok(())
    }

    pub fn change_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Change { .. }))
            .count()
    }

    pub fn start(&self) -> &DtCode {
        match &self.steps[0].kind {
            StepKind::Start(dt) => dt,
            _ => unreachable!("checked on construction"),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "title: {}", self.title)?;
        if let Some(sum) = &self.claimed_sum {
            writeln!(f, "sum: {sum}")?;
        }
        writeln!(f, "bound: {}", self.claimed_bound)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn parse_side(text: &str) -> Option<Summand> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words[..] {
        [name] => Some(Summand {
            name: name.to_string(),
            mirrored: false,
        }),
        ["mirror", name] => Some(Summand {
            name: name.to_string(),
            mirrored: true,
        }),
        _ => None,
    }
}

fn split_note(row: &str) -> Result<(&str, Option<String>), String> {
    match row.find('"') {
        None => Ok((row, None)),
        Some(open) => {
            let rest = &row[open + 1..];
            let close = rest.rfind('"').ok_or("unterminated note")?;
            if !rest[close + 1..].trim().is_empty() {
                return Err("text after note".into());
            }
            Ok((row[..open].trim_end(), Some(rest[..close].to_string())))
        }
    }
}

fn split_dt(text: &str) -> Result<(DtCode, &str), String> {
    let close = text.find(']').ok_or("missing DT code")?;
    let dt = parse_dt(&text[..=close]).map_err(|e| e.to_string())?;
    Ok((dt, text[close + 1..].trim()))
}

fn parse_step(row: &str) -> Result<Step, String> {
    let (body, note) = split_note(row)?;
    let (word, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
    let rest = rest.trim();
    let kind = match word {
        "start" => {
            let (dt, tail) = split_dt(rest)?;
            if !tail.is_empty() {
                return Err(format!("unexpected {tail:?}"));
            }
            StepKind::Start(dt)
        }
        "change" => {
            let (index, name) = match rest.split_once("->") {
                Some((i, n)) => (i.trim(), Some(n.trim().to_string())),
                None => (rest, None),
            };
            let index = index.parse().map_err(|_| format!("bad crossing index {index:?}"))?;
            if name.as_deref().is_some_and(|n| n.is_empty() || n.contains(char::is_whitespace)) {
                return Err("bad expected name".into());
            }
            StepKind::Change {
                index,
                expected_name: name,
            }
        }
        "substitute" => {
            let (dt, tail) = split_dt(rest)?;
            let mirrored = match tail {
                "" => false,
                "mirror" => true,
                _ => return Err(format!("unexpected {tail:?}")),
            };
            StepKind::Substitute { dt, mirrored }
        }
        _ => return Err(format!("unknown step {word:?}")),
    };
    Ok(Step { kind, note })
}

/// What one replayed step produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: Step,
    pub crossings: usize,
    pub fingerprint: Option<Fingerprint>,
    pub identification: Option<Identification>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub title: String,
    pub claimed_sum: Option<ClaimedSum>,
    pub claimed_bound: u32,
    /// Whether the connected sum of the tabulated summands has the start
    /// fingerprint; `None` without a claimed sum.
    pub sum_matches: Option<bool>,
    pub steps: Vec<StepRecord>,
    pub error: Option<CertifyError>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
    }

    /// The title followed by e.g. `, bound 3: PASS`.
    pub fn verdict_line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!("{}, bound {}: {verdict}", self.title, self.claimed_bound)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        if let (Some(sum), Some(ok)) = (&self.claimed_sum, self.sum_matches) {
            let verdict = if ok { "matches start" } else { "differs from start" };
            writeln!(f, "  sum {sum}: fingerprint {verdict}")?;
        }
        for (i, r) in self.steps.iter().enumerate() {
            write!(f, "  {i}. {} [{} crossings]", r.step, r.crossings)?;
            if let Some(id) = &r.identification {
                write!(f, " identified {id}")?;
            }
            writeln!(f, ": {}", if r.passed { "ok" } else { "FAILED" })?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "  error: {e}")?;
        }
        writeln!(f, "  (knot identity checked by invariants only)")?;
        write!(f, "{}", self.verdict_line())
    }
}

fn summand_diagram(s: &Summand, table: &KnotTable) -> Result<PlanarDiagram, CertifyError> {
    let e = table.get(&s.name).ok_or_else(|| CertifyError::TableMissingName(s.name.clone()))?;
    let d = e.diagram();
    Ok(if s.mirrored { d.mirror() } else { d })
}

/// The connected sum named by the certificate, built from table diagrams.
pub fn claimed_sum_diagram(c: &Certificate, table: &KnotTable) -> Result<PlanarDiagram, CertifyError> {
    let sum = c.claimed_sum.as_ref().ok_or(CertifyError::NoClaimedSum)?;
    let l = summand_diagram(&sum.left, table)?;
    let r = summand_diagram(&sum.right, table)?;
    Ok(l.connected_sum(&r))
}

/// Fingerprint of `d`, simplifying first when it is over the crossing cap.
fn fp_of(d: &PlanarDiagram, step: usize) -> Result<Fingerprint, CertifyError> {
    let fp = match fingerprint(d) {
        Err(InvariantError::CapExceeded { .. }) => fingerprint(&simplify(d, DEFAULT_BUDGET).0),
        fp => fp,
    };
    fp.map_err(|e| CertifyError::StepMismatch {
        step,
        detail: e.to_string(),
    })
}

/// Replays a certificate step by step, stopping at the first failure.
pub fn verify_certificate(c: &Certificate, table: &KnotTable) -> VerificationReport {
    let mut report = VerificationReport {
        title: c.title.clone(),
        claimed_sum: c.claimed_sum.clone(),
        claimed_bound: c.claimed_bound,
        sum_matches: None,
        steps: Vec::new(),
        error: None,
    };
    if let Err(e) = replay(c, table, &mut report) {
        report.error = Some(e);
    }
    info!("{}", report.verdict_line());
    report
}

fn replay(c: &Certificate, table: &KnotTable, report: &mut VerificationReport) -> Result<(), CertifyError> {
    c.check_shape()?;
    let mut state = PlanarDiagram::unknot();
    let mut fp = Fingerprint::unknot();
    for (i, step) in c.steps.iter().enumerate() {
        let mut record = StepRecord {
            step: step.clone(),
            crossings: 0,
            fingerprint: None,
            identification: None,
            passed: false,
        };
        let mismatch = |detail: String| CertifyError::StepMismatch { step: i, detail };
        let outcome = (|| -> Result<(), CertifyError> {
            match &step.kind {
                StepKind::Start(dt) => {
                    state = dt_to_diagram(dt).map_err(|e| mismatch(e.to_string()))?;
                    fp = fp_of(&state, i)?;
                    if c.claimed_sum.is_some() {
                        let sum = fp_of(&claimed_sum_diagram(c, table)?, i)?;
                        report.sum_matches = Some(sum == fp);
                        if sum != fp {
                            return Err(mismatch(format!("start has {fp}, the claimed sum has {sum}")));
                        }
                    }
                }
                StepKind::Change { index, expected_name } => {
                    state = state
                        .change_crossing(CrossingRef(*index))
                        .map_err(|e| mismatch(e.to_string()))?;
                    fp = fp_of(&state, i)?;
                    if let Some(name) = expected_name {
                        let entry = table.get(name).ok_or_else(|| CertifyError::TableMissingName(name.clone()))?;
                        let id = table.identify(&state).map_err(|e| mismatch(e.to_string()))?;
                        let ok = id.candidates == [entry.name.clone()];
                        record.identification = Some(id.clone());
                        if !ok {
                            return Err(mismatch(format!("expected {name}, identified {id}")));
                        }
                    }
                }
                StepKind::Substitute { dt, mirrored } => {
                    let next = dt_to_diagram(dt).map_err(|e| mismatch(e.to_string()))?;
                    let next_fp = fp_of(&next, i)?;
                    let want = if *mirrored { fp.mirror() } else { fp.clone() };
                    if next_fp != want {
                        return Err(mismatch(format!("substituted code has {next_fp}, expected {want}")));
                    }
                    state = next;
                    fp = next_fp;
                }
            }
            Ok(())
        })();
        record.crossings = state.crossing_count();
        record.fingerprint = Some(fp.clone());
        record.passed = outcome.is_ok();
        report.steps.push(record);
        outcome?;
    }
    let cert = certify_unknot(&state, DEFAULT_BUDGET);
    if cert.verdict != UnknotVerdict::Unknot {
        let crossings = cert.report.map_or(state.crossing_count(), |r| r.final_crossings);
        return Err(CertifyError::UnknotNotReached { crossings });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdditivityVerdict {
    /// The bound is below every possible value of u(left) + u(right).
    StrictFailureOfAdditivity,
    /// The bound is below the sum only for some values in the tabulated ranges.
    ConditionalOnRange,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivitySummary {
    pub verdict: AdditivityVerdict,
    pub claimed_bound: u32,
    pub u_left: UnknottingNumber,
    pub u_right: UnknottingNumber,
    /// Signature lower bound on the unknotting number of the sum.
    pub murasugi_floor: u32,
}

impl fmt::Display for AdditivitySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}: {} <= u <= {} against u(left) + u(right) = {} + {}",
            self.verdict, self.murasugi_floor, self.claimed_bound, self.u_left, self.u_right
        )
    }
}

/// Compares a certified bound with the tabulated unknotting numbers of the
/// summands. Run [`verify_certificate`] first; this does not replay steps.
pub fn summarize_additivity(c: &Certificate, table: &KnotTable) -> Result<AdditivitySummary, CertifyError> {
    let u = |s: &Summand| {
        let e = table.get(&s.name).ok_or_else(|| CertifyError::TableMissingName(s.name.clone()))?;
        e.u_known.ok_or_else(|| CertifyError::MissingUnknottingNumber(s.name.clone()))
    };
    let sum = c.claimed_sum.as_ref().ok_or(CertifyError::NoClaimedSum)?;
    let u_left = u(&sum.left)?;
    let u_right = u(&sum.right)?;
    let verdict = if c.claimed_bound < u_left.lo + u_right.lo {
        AdditivityVerdict::StrictFailureOfAdditivity
    } else if c.claimed_bound < u_left.hi + u_right.hi {
        AdditivityVerdict::ConditionalOnRange
    } else {
        AdditivityVerdict::Inconclusive
    };
    let sum = claimed_sum_diagram(c, table)?;
    Ok(AdditivitySummary {
        verdict,
        claimed_bound: c.claimed_bound,
        u_left,
        u_right,
        murasugi_floor: murasugi_lower_bound(&sum),
    })
}
