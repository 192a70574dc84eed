//! Dowker–Thistlethwaite codes.
//!
//! Entry `i` (0-based) pairs the odd label `2i + 1` with the even label
//! `|entry|`. An entry is negative exactly when the strand passes over at
//! its even-labelled visit.
//!
//! A DT code determines its diagram only up to reflection of each prime
//! factor of the plane graph. We fix the choice so that the crossing met
//! first in each interlacement component sees the second strand pass from
//! its right to its left; this makes the first crossing of a code with a
//! positive first entry a positive crossing.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{canonicalize, Crossing, Dart, PlanarDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NotationErrorKind {
    MalformedSyntax,
    OddEntry,
    DuplicateMagnitude,
    NonRealizable,
    EmptyDiagram,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind:?}: {detail}")]
pub struct NotationError {
    pub kind: NotationErrorKind,
    pub detail: String,
}

impl NotationError {
    fn new(kind: NotationErrorKind, detail: impl Into<String>) -> Self {
        Self {
            kind,
            detail: detail.into(),
        }
    }
}

/// A validated DT code. The empty code stands for the crossingless unknot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DtCode(Vec<i32>);

impl DtCode {
    pub fn new(entries: Vec<i32>) -> Result<Self, NotationError> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            if e % 2 != 0 {
                return Err(NotationError::new(NotationErrorKind::OddEntry, format!("entry {e} is odd")));
            }
            let m = e.unsigned_abs() as usize / 2;
            if m == 0 || m > n {
                return Err(NotationError::new(
                    NotationErrorKind::MalformedSyntax,
                    format!("entry {e} outside 2..={}", 2 * n),
                ));
            }
            if seen[m] {
                return Err(NotationError::new(
                    NotationErrorKind::DuplicateMagnitude,
                    format!("magnitude {} repeated", 2 * m),
                ));
            }
            seen[m] = true;
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The code with the sign of entry `i` flipped.
    pub fn with_flip(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] = -e[i];
        Self(e)
    }

    pub fn mirror(&self) -> Self {
        Self(self.0.iter().map(|e| -e).collect())
    }
}

pub fn parse_dt(text: &str) -> Result<DtCode, NotationError> {
    let malformed = |d: &str| NotationError::new(NotationErrorKind::MalformedSyntax, d);
    let t = text.trim();
    let t = t.strip_prefix("DT:").unwrap_or(t).trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| malformed("expected a bracketed list"))?;
    let entries = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|s| s.trim().parse::<i32>().map_err(|_| malformed(&format!("bad integer {:?}", s.trim()))))
            .collect::<Result<Vec<_>, _>>()?
    };
    DtCode::new(entries)
}

impl FromStr for DtCode {
    type Err = NotationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_dt(s)
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DT:[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Orientation given to the root crossing of each interlacement component.
const ROOT_TURN: i8 = 1;

struct Chords {
    /// 1-based visit label -> crossing
    at: Vec<usize>,
    first: Vec<usize>,
    second: Vec<usize>,
}

impl Chords {
    fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        let n = pairs.len();
        let mut at = vec![0; 2 * n + 1];
        let mut first = vec![0; n];
        let mut second = vec![0; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            at[a] = i;
            at[b] = i;
            first[i] = a.min(b);
            second[i] = a.max(b);
        }
        Self { at, first, second }
    }

    fn len(&self) -> usize {
        self.first.len()
    }

    fn interlaced(&self, x: usize, y: usize) -> bool {
        let inside = |p: usize| self.first[x] < p && p < self.second[x];
        inside(self.first[y]) != inside(self.second[y])
    }

    /// Interlacement sets as bitsets.
    fn interlacement(&self) -> Vec<Vec<u64>> {
        let n = self.len();
        let words = n.div_ceil(64);
        let mut sets = vec![vec![0u64; words]; n];
        for x in 0..n {
            for y in 0..n {
                if x != y && self.interlaced(x, y) {
                    sets[x][y / 64] |= 1 << (y % 64);
                }
            }
        }
        sets
    }

    /// Interlacement components, each listed from its root (the crossing
    /// with the earliest visit) in breadth-first order with parents.
    fn components(&self, sets: &[Vec<u64>]) -> Vec<Vec<(usize, Option<usize>)>> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| self.first[x]);
        let mut done = vec![false; n];
        let mut comps = Vec::new();
        for &root in &order {
            if done[root] {
                continue;
            }
            done[root] = true;
            let mut comp = vec![(root, None)];
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for y in 0..n {
                    if !done[y] && sets[x][y / 64] >> (y % 64) & 1 == 1 {
                        done[y] = true;
                        comp.push((y, Some(x)));
                        queue.push_back(y);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }
}

fn common(sets: &[Vec<u64>], x: usize, y: usize) -> u32 {
    sets[x].iter().zip(&sets[y]).map(|(a, b)| (a & b).count_ones()).sum()
}

fn parity_sign(k: usize) -> i8 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Turn of each crossing: +1 when the second passage crosses the first
/// from right to left, or `None` if the Gauss word is not planar.
fn planar_turns(ch: &Chords) -> Option<Vec<i8>> {
    let n = ch.len();
    let sets = ch.interlacement();
    for x in 0..n {
        for y in x + 1..n {
            if !ch.interlaced(x, y) && common(&sets, x, y) % 2 == 1 {
                return None;
            }
        }
    }
    // s(x) = turn(x) * (-1)^first(x); interlaced x, y need
    // s(x) s(y) = -(-1)^|I(x) & I(y)|.
    let mut s = vec![0i8; n];
    for comp in ch.components(&sets) {
        for &(x, parent) in &comp {
            s[x] = match parent {
                None => ROOT_TURN * parity_sign(ch.first[x]),
                Some(p) => -s[p] * parity_sign(common(&sets, p, x) as usize),
            };
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if ch.interlaced(x, y) && s[x] * s[y] != -parity_sign(common(&sets, x, y) as usize) {
                return None;
            }
        }
    }
    Some((0..n).map(|x| s[x] * parity_sign(ch.first[x])).collect())
}

pub fn dt_to_diagram(code: &DtCode) -> Result<PlanarDiagram, NotationError> {
    let n = code.len();
    if n == 0 {
        return Ok(PlanarDiagram::unknot());
    }
    let non_realizable = |d: &str| NotationError::new(NotationErrorKind::NonRealizable, d);
    let pairs: Vec<(usize, usize)> = code
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| (2 * i + 1, e.unsigned_abs() as usize))
        .collect();
    let ch = Chords::from_pairs(&pairs);
    let turns = planar_turns(&ch).ok_or_else(|| non_realizable("pairing has no planar embedding"))?;
    // first passage enters slot 0; the second enters slot 1 or 3
    let in_slot = |label: usize| -> u8 {
        let x = ch.at[label];
        if label == ch.first[x] {
            0
        } else if turns[x] > 0 {
            1
        } else {
            3
        }
    };
    let dummy = Dart::new(0, 0);
    let mut xs: Vec<Crossing> = (0..n)
        .map(|i| {
            let odd = 2 * i + 1;
            let even = code.entries()[i].unsigned_abs() as usize;
            let (over, under) = if code.entries()[i] > 0 { (odd, even) } else { (even, odd) };
            Crossing {
                link: [dummy; 4],
                under_in: in_slot(under),
                over_in: in_slot(over),
            }
        })
        .collect();
    for t in 1..=2 * n {
        let u = if t == 2 * n { 1 } else { t + 1 };
        let out = Dart::new(ch.at[t], in_slot(t) + 2);
        let inn = Dart::new(ch.at[u], in_slot(u));
        crate::diagram::set_link(&mut xs, out, inn);
    }
    let d = canonicalize(xs, Dart::new(0, 0)).map_err(|e| non_realizable(&e.to_string()))?;
    if !d.is_planar() {
        return Err(non_realizable("embedding is not planar"));
    }
    Ok(d)
}

/// The DT code of a diagram in its canonical labelling.
pub fn emit_dt(d: &PlanarDiagram) -> Result<DtCode, NotationError> {
    if d.is_empty() {
        return Err(NotationError::new(
            NotationErrorKind::EmptyDiagram,
            "a crossingless diagram has no DT code",
        ));
    }
    let labels = d.visit_labels();
    let ch = Chords::from_pairs(&labels);
    let trav = d.traversal();
    let mut entries: Vec<i32> = labels
        .iter()
        .enumerate()
        .map(|(i, &(odd, even))| {
            let x = d.crossing(i);
            let even_slot = trav[even - 1].slot;
            debug_assert_eq!(trav[odd - 1].crossing, i);
            if x.is_over(even_slot) {
                -(even as i32)
            } else {
                even as i32
            }
        })
        .collect();
    let sets = ch.interlacement();
    for comp in ch.components(&sets) {
        let root = comp[0].0;
        let first = trav[ch.first[root] - 1].slot;
        let second = trav[ch.second[root] - 1].slot;
        let turn = if (second + 4 - first) % 4 == 1 { 1 } else { -1 };
        if turn != ROOT_TURN {
            // reflect this factor and swap its crossings: same knot type
            for &(x, _) in &comp {
                entries[x] = -entries[x];
            }
        }
    }
    Ok(DtCode(entries))
}
