//! Named knot tables and identification by fingerprint.
//!
//! Identification is invariant-level: two diagrams with equal fingerprints
//! are reported as the same knot, which is not a proof of isotopy. Table
//! knots that share a fingerprint are told apart by quandle colouring
//! counts when a diagram is available.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

use crate::diagram::PlanarDiagram;
use crate::invariants::{fingerprint, Fingerprint, InvariantError};
use crate::moves::{simplify, DEFAULT_BUDGET};
use crate::notation::{dt_to_diagram, parse_dt, DtCode};
use crate::quandle::coloring_profile;

const BUNDLED: &str = include_str!("../data/knot_table.csv");

/// Known unknotting number: exact when `lo == hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnknottingNumber {
    pub lo: u32,
    pub hi: u32,
}

impl UnknottingNumber {
    pub fn exact(u: u32) -> Self {
        Self { lo: u, hi: u }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for UnknottingNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Clone, Debug)]
pub struct KnotTableEntry {
    pub name: String,
    pub dt: DtCode,
    pub u_known: Option<UnknottingNumber>,
    pub aliases: Vec<String>,
    pub fingerprint: Fingerprint,
    profile: OnceLock<Vec<u64>>,
}

impl KnotTableEntry {
    /// Quandle colouring counts, computed on first use.
    pub fn coloring_profile(&self) -> &[u64] {
        self.profile.get_or_init(|| coloring_profile(&self.diagram()))
    }

    pub fn diagram(&self) -> PlanarDiagram {
        dt_to_diagram(&self.dt).expect("table codes are realizable")
    }

    pub fn is_amphichiral(&self) -> bool {
        self.fingerprint.is_self_mirror()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: malformed row: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("line {line}: duplicate name {name}")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: {name} has an unrealizable DT code: {detail}")]
    Unrealizable { line: usize, name: String, detail: String },
    #[error("line {line}: cannot fingerprint {name}: {source}")]
    Invariant {
        line: usize,
        name: String,
        source: InvariantError,
    },
    #[error("cannot read table: {0}")]
    Io(String),
}

#[derive(Clone, Debug, Default)]
pub struct KnotTable {
    entries: Vec<KnotTableEntry>,
    by_fingerprint: HashMap<Fingerprint, Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    AsTabulated,
    Mirrored,
    /// The table knot's fingerprint cannot tell it from its mirror.
    Amphichiral,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    pub name: String,
    pub chirality: Chirality,
    /// Every table name whose fingerprint, or its mirror, matches.
    pub collision_list: Vec<String>,
    /// The names in `collision_list` that also agree on colouring counts.
    /// Equal to `collision_list` when no diagram was available to refine.
    pub candidates: Vec<String>,
}

impl Identification {
    /// More than one table knot remains possible.
    pub fn is_ambiguous(&self) -> bool {
        self.candidates.len() > 1
    }

    /// Colouring counts were needed to pick the name.
    pub fn was_refined(&self) -> bool {
        self.candidates.len() < self.collision_list.len()
    }
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.chirality {
            Chirality::AsTabulated => "",
            Chirality::Mirrored => " (mirror)",
            Chirality::Amphichiral => " (amphichiral)",
        };
        write!(f, "{}{}", self.name, tag)?;
        if self.is_ambiguous() {
            write!(f, " [collides with {}]", self.candidates.join(", "))?;
        } else if self.was_refined() {
            write!(f, " [fingerprint shared with {}; split by colourings]", self.collision_list.join(", "))?;
        }
        Ok(())
    }
}

/// No table entry matched; carries the fingerprint when it was computable.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no table match{}", .fingerprint.as_ref().map(|f| format!(" for {f}")).unwrap_or_default())]
pub struct NoMatch {
    pub fingerprint: Option<Fingerprint>,
}

fn parse_u(field: &str, line: usize) -> Result<Option<UnknottingNumber>, TableError> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(None);
    }
    let bad = || TableError::Malformed {
        line,
        detail: format!("bad unknotting number {field:?}"),
    };
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let u = match field.split_once("..") {
        Some((a, b)) => UnknottingNumber { lo: num(a)?, hi: num(b)? },
        None => UnknottingNumber::exact(num(field)?),
    };
    if u.lo > u.hi {
        return Err(bad());
    }
    Ok(Some(u))
}

impl KnotTable {
    /// The table shipped with the library, parsed once.
    pub fn bundled() -> &'static KnotTable {
        static TABLE: OnceLock<KnotTable> = OnceLock::new();
        TABLE.get_or_init(|| KnotTable::parse(BUNDLED).expect("bundled table is valid"))
    }

    pub fn load(path: &Path) -> Result<KnotTable, TableError> {
        let text = std::fs::read_to_string(path).map_err(|e| TableError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<KnotTable, TableError> {
        let mut table = KnotTable::default();
        let mut names = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let malformed = |detail: &str| TableError::Malformed {
                line,
                detail: detail.to_string(),
            };
            let (name, rest) = row.split_once(',').ok_or_else(|| malformed("expected name,[dt],u"))?;
            let name = name.trim().to_string();
            if name.is_empty() {
                return Err(malformed("empty name"));
            }
            let rest = rest.trim_start();
            let close = rest.find(']').ok_or_else(|| malformed("missing DT code"))?;
            let code = parse_dt(&rest[..=close]).map_err(|e| malformed(&e.to_string()))?;
            let mut tail = rest[close + 1..].trim_start().split(',');
            if tail.next().is_some_and(|s| !s.trim().is_empty()) {
                return Err(malformed("text after DT code"));
            }
            let u_known = parse_u(tail.next().unwrap_or(""), line)?;
            let mut aliases = Vec::new();
            for extra in tail {
                let list = extra
                    .trim()
                    .strip_prefix("aka=")
                    .ok_or_else(|| malformed("extra fields must be aka=..."))?;
                aliases.extend(list.split(';').map(|s| s.trim().to_string()));
            }
            if !names.insert(name.clone()) {
                return Err(TableError::DuplicateName { line, name });
            }
            let d = dt_to_diagram(&code).map_err(|e| TableError::Unrealizable {
                line,
                name: name.clone(),
                detail: e.to_string(),
            })?;
            let fp = fingerprint(&d).map_err(|source| TableError::Invariant {
                line,
                name: name.clone(),
                source,
            })?;
            table.push(KnotTableEntry {
                name,
                dt: code,
                u_known,
                aliases,
                fingerprint: fp,
                profile: OnceLock::new(),
            });
        }
        Ok(table)
    }

    fn push(&mut self, e: KnotTableEntry) {
        self.by_fingerprint
            .entry(e.fingerprint.clone())
            .or_default()
            .push(self.entries.len());
        self.entries.push(e);
    }

    pub fn entries(&self) -> &[KnotTableEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up a name or alias.
    pub fn get(&self, name: &str) -> Option<&KnotTableEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .or_else(|| self.entries.iter().find(|e| e.aliases.iter().any(|a| a == name)))
    }

    fn matches(&self, fp: &Fingerprint) -> Vec<(usize, Chirality)> {
        let mut hits: Vec<(usize, Chirality)> = Vec::new();
        for (key, chirality) in [(fp.clone(), Chirality::AsTabulated), (fp.mirror(), Chirality::Mirrored)] {
            for &i in self.by_fingerprint.get(&key).into_iter().flatten() {
                let chirality = if self.entries[i].is_amphichiral() {
                    Chirality::Amphichiral
                } else {
                    chirality
                };
                if !hits.iter().any(|&(j, _)| j == i) {
                    hits.push((i, chirality));
                }
            }
        }
        hits.sort_by_key(|&(i, _)| i);
        hits
    }

    fn report(&self, hits: &[(usize, Chirality)], kept: &[(usize, Chirality)], fp: &Fingerprint) -> Result<Identification, NoMatch> {
        let &(first, chirality) = kept.first().ok_or(NoMatch {
            fingerprint: Some(fp.clone()),
        })?;
        let names = |v: &[(usize, Chirality)]| v.iter().map(|&(i, _)| self.entries[i].name.clone()).collect();
        Ok(Identification {
            name: self.entries[first].name.clone(),
            chirality,
            collision_list: names(hits),
            candidates: names(kept),
        })
    }

    /// Matches a fingerprint alone, so colliding table knots stay ambiguous.
    pub fn identify_fingerprint(&self, fp: &Fingerprint) -> Result<Identification, NoMatch> {
        let hits = self.matches(fp);
        self.report(&hits, &hits, fp)
    }

    /// Identifies a diagram, simplifying it first when it is too large for
    /// the state sum. Fingerprint collisions are split by colouring counts;
    /// a diagram whose counts match none of the colliding entries is not in
    /// the table.
    pub fn identify(&self, d: &PlanarDiagram) -> Result<Identification, NoMatch> {
        let (fp, d) = match fingerprint(d) {
            Ok(fp) => (fp, d.clone()),
            Err(InvariantError::CapExceeded { .. }) => {
                let (small, _) = simplify(d, DEFAULT_BUDGET);
                let fp = fingerprint(&small).map_err(|_| NoMatch { fingerprint: None })?;
                (fp, small)
            }
        };
        let hits = self.matches(&fp);
        if hits.len() < 2 {
            return self.report(&hits, &hits, &fp);
        }
        let profile = coloring_profile(&d);
        let kept: Vec<_> = hits
            .iter()
            .copied()
            .filter(|&(i, _)| self.entries[i].coloring_profile() == profile.as_slice())
            .collect();
        self.report(&hits, &kept, &fp)
    }
}

pub fn identify(d: &PlanarDiagram, table: &KnotTable) -> Result<Identification, NoMatch> {
    table.identify(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rows() {
        let t = KnotTable::parse(
            "# comment\n0_1,[],0\n8_14,[-10,-6,-14,-12,-16,-8,-2,-4],1\n10_6,[4,12,16,18,20,14,2,10,6,8],2..3\nX,[4,6,2],,aka=a;b\n",
        )
        .unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.get("8_14").unwrap().u_known, Some(UnknottingNumber::exact(1)));
        assert_eq!(t.get("10_6").unwrap().u_known, Some(UnknottingNumber { lo: 2, hi: 3 }));
        assert_eq!(t.get("b").unwrap().name, "X");
        assert_eq!(t.get("X").unwrap().u_known, None);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            KnotTable::parse("3_1,[4,6,2],1\n3_1,[4,6,2],1"),
            Err(TableError::DuplicateName { line: 2, .. })
        ));
        assert!(matches!(
            KnotTable::parse("x,[4,6,8,10,2],1"),
            Err(TableError::Unrealizable { .. })
        ));
        assert!(matches!(KnotTable::parse("x,[4,6,2],two"), Err(TableError::Malformed { .. })));
        assert!(matches!(KnotTable::parse("x;[4,6,2]"), Err(TableError::Malformed { .. })));
        assert!(matches!(KnotTable::parse("x,[4,6,2],3..2"), Err(TableError::Malformed { .. })));
    }

    #[test]
    fn identifies_unknot_and_chirality() {
        let t = KnotTable::bundled();
        let id = t.identify(&PlanarDiagram::unknot()).unwrap();
        assert_eq!(id.name, "0_1");
        let trefoil = t.get("3_1").unwrap().diagram();
        assert_eq!(t.identify(&trefoil).unwrap().chirality, Chirality::AsTabulated);
        assert_eq!(t.identify(&trefoil.mirror()).unwrap().chirality, Chirality::Mirrored);
        let fig8 = t.get("4_1").unwrap().diagram();
        assert_eq!(t.identify(&fig8).unwrap().chirality, Chirality::Amphichiral);
        assert_eq!(t.identify(&fig8.mirror()).unwrap().chirality, Chirality::Amphichiral);
    }

    #[test]
    fn colourings_split_a_fingerprint_collision() {
        let t = KnotTable::bundled();
        let a = t.get("8_8").unwrap();
        let b = t.get("10_129").unwrap();
        // tabulated with opposite chiralities
        assert_eq!(a.fingerprint, b.fingerprint.mirror());
        assert!(t.identify_fingerprint(&a.fingerprint).unwrap().is_ambiguous());
        for (e, m) in [(a, false), (b, false), (a, true), (b, true)] {
            let d = if m { e.diagram().mirror() } else { e.diagram() };
            let id = t.identify(&d).unwrap();
            assert_eq!(id.candidates, vec![e.name.clone()]);
            assert_eq!(id.name, e.name);
            assert!(id.was_refined());
            assert_eq!(id.collision_list, vec!["8_8".to_string(), "10_129".to_string()]);
        }
    }

    #[test]
    fn no_match_carries_fingerprint() {
        let t = KnotTable::parse("3_1,[4,6,2],1").unwrap();
        let err = t.identify(&PlanarDiagram::unknot()).unwrap_err();
        assert_eq!(err.fingerprint, Some(Fingerprint::unknot()));
    }
}
