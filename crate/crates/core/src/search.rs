//! Searches for short unknotting sequences.
//!
//! Every positive result comes with a [`Certificate`] that replays through
//! [`verify_certificate`](crate::certify::verify_certificate). Failing to find
//! a sequence says nothing about lower bounds.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::atlas::{Chirality, Identification, KnotTable};
use crate::certify::{Certificate, ClaimedSum, Step, StepKind, Summand};
use crate::diagram::{CrossingRef, PlanarDiagram};
use crate::moves::{
    apply_move, certify_unknot, diagram_key, find_moves, r1_plus_sites, r2_plus_sites, simplify, MoveKind,
    UnknotVerdict, DEFAULT_BUDGET,
};
use crate::notation::{dt_to_diagram, emit_dt, DtCode};

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig<'a> {
    /// Most crossing changes tried in one sequence.
    pub depth: u32,
    /// Move budget for each call to [`simplify`].
    pub simplify_budget: usize,
    pub rng_seed: u64,
    /// Most diagrams examined by one search.
    pub max_nodes: usize,
    /// Random moves applied to each symbiont trial diagram.
    pub inflation: usize,
    pub table: &'a KnotTable,
}

impl<'a> SearchConfig<'a> {
    pub fn new(table: &'a KnotTable) -> Self {
        Self {
            depth: 1,
            simplify_budget: DEFAULT_BUDGET,
            rng_seed: 0,
            max_nodes: 20_000,
            inflation: 3,
            table,
        }
    }

    fn check(&self) -> Result<(), SearchError> {
        if self.simplify_budget == 0 || self.max_nodes == 0 {
            return Err(SearchError::InvalidConfig("budget and node cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("{0} is not in the knot table")]
    UnknownName(String),
    #[error("{0} has no tabulated unknotting number")]
    MissingUnknottingNumber(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub bound_found: Option<u32>,
    /// Present exactly when `bound_found` is.
    pub witness: Option<Certificate>,
    pub nodes_explored: usize,
    /// The node cap stopped the search early.
    pub exhausted: bool,
}

impl SearchOutcome {
    fn empty(nodes_explored: usize, exhausted: bool) -> Self {
        Self {
            bound_found: None,
            witness: None,
            nodes_explored,
            exhausted,
        }
    }
}

/// DT code of a diagram, with `[]` for the crossingless circle.
fn code_of(d: &PlanarDiagram) -> DtCode {
    if d.is_empty() {
        return DtCode::new(Vec::new()).expect("the empty code is valid");
    }
    emit_dt(d).expect("nonempty diagrams have DT codes")
}

fn step(kind: StepKind) -> Step {
    Step { kind, note: None }
}

fn witness(title: String, start: DtCode, steps: Vec<Step>) -> Certificate {
    let mut all = vec![step(StepKind::Start(start))];
    all.extend(steps);
    let claimed_bound = all
        .iter()
        .filter(|s| matches!(s.kind, StepKind::Change { .. }))
        .count() as u32;
    Certificate {
        title,
        claimed_sum: None,
        steps: all,
        claimed_bound,
    }
}

struct Node {
    diagram: PlanarDiagram,
    steps: Vec<Step>,
}

/// Breadth-first search over crossing changes, simplifying after each one.
/// Returns the fewest changes that reach a certified unknot.
pub fn unknotting_upper_bound(d: &PlanarDiagram, cfg: &SearchConfig) -> SearchOutcome {
    let start = code_of(d);
    let root = dt_to_diagram(&start).expect("emitted codes are realizable");
    let found = |level: u32, steps: Vec<Step>, nodes: usize| SearchOutcome {
        bound_found: Some(level),
        witness: Some(witness(format!("unknotting sequence of length {level}"), start.clone(), steps)),
        nodes_explored: nodes,
        exhausted: false,
    };
    if certify_unknot(&root, cfg.simplify_budget).verdict == UnknotVerdict::Unknot {
        return found(0, Vec::new(), 1);
    }
    let mut nodes = 1;
    let mut seen = HashSet::from([diagram_key(&root)]);
    let mut frontier = vec![Node {
        diagram: root,
        steps: Vec::new(),
    }];
    for level in 1..=cfg.depth {
        let mut jobs: Vec<(usize, usize)> = frontier
            .iter()
            .enumerate()
            .flat_map(|(i, n)| (0..n.diagram.crossing_count()).map(move |c| (i, c)))
            .collect();
        let room = cfg.max_nodes.saturating_sub(nodes);
        let exhausted = jobs.len() > room;
        jobs.truncate(room);
        nodes += jobs.len();
        let last = level == cfg.depth;
        let results: Vec<(PlanarDiagram, bool)> = jobs
            .par_iter()
            .map(|&(i, c)| {
                let child = frontier[i]
                    .diagram
                    .change_crossing(CrossingRef(c))
                    .expect("index in range");
                let cert = certify_unknot(&child, cfg.simplify_budget);
                if cert.verdict == UnknotVerdict::Unknot {
                    return (child, true);
                }
                if last {
                    return (child, false);
                }
                let (small, _) = simplify(&child, cfg.simplify_budget);
                (small, false)
            })
            .collect();
        let mut next = Vec::new();
        for (&(i, c), (diagram, unknot)) in jobs.iter().zip(results) {
            let mut steps = frontier[i].steps.clone();
            steps.push(step(StepKind::Change {
                index: c,
                expected_name: None,
            }));
            if unknot {
                debug!("unknotted at depth {level} after {nodes} nodes");
                return found(level, steps, nodes);
            }
            if last {
                continue;
            }
            let code = code_of(&diagram);
            let diagram = dt_to_diagram(&code).expect("emitted codes are realizable");
            if seen.insert(diagram_key(&diagram)) {
                steps.push(step(StepKind::Substitute {
                    dt: code,
                    mirrored: false,
                }));
                next.push(Node { diagram, steps });
            }
        }
        if exhausted {
            return SearchOutcome::empty(nodes, true);
        }
        frontier = next;
    }
    SearchOutcome::empty(nodes, false)
}

/// Result of trying every k-subset of crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCount {
    pub k: usize,
    /// Number of subsets tried.
    pub total: usize,
    /// Subsets whose change gave a diagram that simplified to nothing.
    pub certified: usize,
    /// Subsets with trivial determinant and Jones polynomial that did not
    /// simplify; these need a closer look.
    pub unresolved: Vec<Vec<usize>>,
}

/// Counts the k-subsets of crossings whose simultaneous change unknots `d`.
pub fn count_unknotting_subsets(d: &PlanarDiagram, k: usize, cfg: &SearchConfig) -> SubsetCount {
    let subsets: Vec<Vec<usize>> = (0..d.crossing_count()).combinations(k).collect();
    let verdicts: Vec<(bool, bool)> = subsets
        .par_iter()
        .map(|s| {
            let refs: Vec<CrossingRef> = s.iter().map(|&c| CrossingRef(c)).collect();
            let changed = d.change_crossings(&refs).expect("indices in range");
            let cert = certify_unknot(&changed, cfg.simplify_budget);
            (cert.verdict == UnknotVerdict::Unknot, cert.knotted)
        })
        .collect();
    let mut out = SubsetCount {
        k,
        total: subsets.len(),
        certified: 0,
        unresolved: Vec::new(),
    };
    for (s, (unknot, knotted)) in subsets.into_iter().zip(verdicts) {
        if unknot {
            out.certified += 1;
        } else if !knotted {
            out.unresolved.push(s);
        }
    }
    out
}

/// What single crossing changes of a diagram produce.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Adjacency {
    /// Distinct nontrivial knots, in order of the first crossing producing each.
    pub knots: Vec<Identification>,
    /// Crossings whose change gives a certified unknot.
    pub unknot_changes: Vec<usize>,
    /// Crossings whose result matched nothing in the table.
    pub unidentified: Vec<usize>,
    /// Crossings whose result has trivial invariants but did not simplify.
    pub unresolved: Vec<usize>,
}

impl Adjacency {
    pub fn names(&self) -> BTreeSet<&str> {
        self.knots.iter().map(|id| id.name.as_str()).collect()
    }
}

enum ChangeResult {
    Unknot,
    Unresolved,
    Knot(Option<Identification>),
}

pub fn adjacent_knots(d: &PlanarDiagram, cfg: &SearchConfig) -> Adjacency {
    let results: Vec<ChangeResult> = (0..d.crossing_count())
        .into_par_iter()
        .map(|c| {
            let child = d.change_crossing(CrossingRef(c)).expect("index in range");
            let cert = certify_unknot(&child, cfg.simplify_budget);
            if cert.verdict == UnknotVerdict::Unknot {
                return ChangeResult::Unknot;
            }
            if !cert.knotted {
                return ChangeResult::Unresolved;
            }
            let (small, _) = simplify(&child, cfg.simplify_budget);
            ChangeResult::Knot(cfg.table.identify(&small).ok())
        })
        .collect();
    let mut out = Adjacency::default();
    for (c, r) in results.into_iter().enumerate() {
        match r {
            ChangeResult::Unknot => out.unknot_changes.push(c),
            ChangeResult::Unresolved => out.unresolved.push(c),
            ChangeResult::Knot(None) => out.unidentified.push(c),
            ChangeResult::Knot(Some(id)) => {
                if !out.knots.iter().any(|k| k.name == id.name) {
                    out.knots.push(id);
                }
            }
        }
    }
    out
}

/// Applies `inflation` random R1+, R2+ and R3 moves. The kind is drawn with
/// weights 1:2:2 among kinds that have a site, then the site uniformly.
pub fn random_diagram<R: Rng>(d: &PlanarDiagram, inflation: usize, rng: &mut R) -> PlanarDiagram {
    let mut d = d.clone();
    for _ in 0..inflation {
        let r3: Vec<_> = find_moves(&d).into_iter().filter(|m| m.kind() == MoveKind::R3).collect();
        let pools = [(1, r1_plus_sites(&d)), (2, r2_plus_sites(&d)), (2, r3)];
        let total: u32 = pools.iter().filter(|(_, p)| !p.is_empty()).map(|(w, _)| w).sum();
        let mut pick = rng.random_range(0..total);
        let pool = pools
            .iter()
            .filter(|(_, p)| !p.is_empty())
            .find(|(w, _)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|(_, p)| p)
            .expect("R1+ always has a site");
        let m = pool[rng.random_range(0..pool.len())];
        d = apply_move(&d, &m).expect("enumerated sites apply");
    }
    d
}

/// Looks for a single crossing change taking a diagram of `left # right` to
/// a table knot whose unknotting number, plus one, is below
/// u(left) + u(right). Trial `i` uses `injected[i]` when given, otherwise the
/// connected sum inflated with seed `rng_seed + i`.
pub fn symbiont_search(
    left: &Summand,
    right: &Summand,
    trials: usize,
    cfg: &SearchConfig,
    injected: &[PlanarDiagram],
) -> Result<Vec<SearchOutcome>, SearchError> {
    cfg.check()?;
    let entry = |s: &Summand| {
        let e = cfg.table.get(&s.name).ok_or_else(|| SearchError::UnknownName(s.name.clone()))?;
        let u = e.u_known.ok_or_else(|| SearchError::MissingUnknottingNumber(s.name.clone()))?;
        let d = e.diagram();
        Ok::<_, SearchError>((if s.mirrored { d.mirror() } else { d }, u))
    };
    let (ld, lu) = entry(left)?;
    let (rd, ru) = entry(right)?;
    let sum = ld.connected_sum(&rd);
    let target = lu.lo + ru.lo;
    let claimed = ClaimedSum {
        left: left.clone(),
        right: right.clone(),
    };
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let base = match injected.get(i) {
                Some(d) => d.clone(),
                None => random_diagram(&sum, cfg.inflation, &mut ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(i as u64))),
            };
            let outcome = symbiont_trial(&base, target, &claimed, cfg);
            info!(
                "trial {i}: {} crossings, {}",
                base.crossing_count(),
                outcome.bound_found.map_or("no acceptance".to_string(), |b| format!("bound {b}"))
            );
            outcome
        })
        .collect();
    Ok(outcomes)
}

fn symbiont_trial(base: &PlanarDiagram, target: u32, claimed: &ClaimedSum, cfg: &SearchConfig) -> SearchOutcome {
    let start = code_of(base);
    let d = dt_to_diagram(&start).expect("emitted codes are realizable");
    let mut nodes = 0;
    for c in 0..d.crossing_count() {
        nodes += 1;
        let child = d.change_crossing(CrossingRef(c)).expect("index in range");
        let (small, _) = simplify(&child, cfg.simplify_budget);
        let Ok(id) = cfg.table.identify(&small) else {
            debug!("change {c}: no table match");
            continue;
        };
        if id.is_ambiguous() {
            continue;
        }
        let entry = cfg.table.get(&id.name).expect("identified names exist");
        let Some(u) = entry.u_known else { continue };
        if u.hi + 1 >= target {
            continue;
        }
        let tabulated = if id.chirality == Chirality::Mirrored {
            entry.diagram().mirror()
        } else {
            entry.diagram()
        };
        let legs_cfg = SearchConfig { depth: u.hi, ..*cfg };
        let legs = unknotting_upper_bound(&tabulated, &legs_cfg);
        nodes += legs.nodes_explored;
        let (Some(b), Some(w)) = (legs.bound_found, legs.witness) else {
            continue;
        };
        if b + 1 >= target {
            continue;
        }
        let mut steps = vec![step(StepKind::Change {
            index: c,
            expected_name: Some(entry.name.clone()),
        })];
        for s in w.steps {
            steps.push(match s.kind {
                StepKind::Start(dt) => step(StepKind::Substitute { dt, mirrored: false }),
                _ => s,
            });
        }
        let mut cert = witness(format!("u({claimed}) <= {}", b + 1), start, steps);
        cert.claimed_sum = Some(claimed.clone());
        return SearchOutcome {
            bound_found: Some(b + 1),
            witness: Some(cert),
            nodes_explored: nodes,
            exhausted: false,
        };
    }
    SearchOutcome::empty(nodes, false)
}
