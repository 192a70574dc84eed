//! Reidemeister moves and diagram simplification.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use log::debug;
use thiserror::Error;

use crate::diagram::{canonicalize, set_link, Crossing, Dart, PlanarDiagram};
use crate::invariants::{determinant, jones, DEFAULT_CROSSING_CAP};
use crate::notation::{dt_to_diagram, DtCode};

pub const DEFAULT_BUDGET: usize = 10_000;

/// Exploration stays within this many crossings above the best diagram.
pub const EXCURSION: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Minus,
    R2Minus,
    R3,
    R1Plus,
    R2Plus,
}

/// A move site. Darts refer to the diagram the move was found on; a dart
/// `(c, s)` names the edge leaving `c` through `s` and the face on its left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Removes the kink whose loop leaves through `dart`.
    R1Minus { dart: Dart },
    /// Removes the bigon left of `dart`.
    R2Minus { dart: Dart },
    /// Passes a strand across the triangle left of `dart`.
    R3 { dart: Dart },
    /// Adds a kink on the edge of `dart`, inside the face to its left;
    /// `None` kinks the crossingless circle.
    R1Plus { dart: Option<Dart>, first_over: bool },
    /// Pushes the edge of `a` across the edge of `b`; both bound the face
    /// on their left.
    R2Plus { a: Dart, b: Dart, a_over: bool },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Minus { .. } => MoveKind::R1Minus,
            Move::R2Minus { .. } => MoveKind::R2Minus,
            Move::R3 { .. } => MoveKind::R3,
            Move::R1Plus { .. } => MoveKind::R1Plus,
            Move::R2Plus { .. } => MoveKind::R2Plus,
        }
    }

    fn lowest_crossing(&self) -> usize {
        match self {
            Move::R1Minus { dart } | Move::R2Minus { dart } | Move::R3 { dart } => dart.crossing,
            Move::R1Plus { dart, .. } => dart.map_or(0, |d| d.crossing),
            Move::R2Plus { a, b, .. } => a.crossing.min(b.crossing),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move {0:?} is not applicable to this diagram")]
    StaleMove(Move),
}

fn triangle(d: &PlanarDiagram, dart: Dart) -> Option<[Dart; 3]> {
    let d1 = d.next_in_face(dart);
    let d2 = d.next_in_face(d1);
    if d.next_in_face(d2) != dart {
        return None;
    }
    let cs = [dart.crossing, d1.crossing, d2.crossing];
    if cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2] {
        return None;
    }
    Some([dart, d1, d2])
}

fn r3_applicable(d: &PlanarDiagram, dart: Dart) -> bool {
    let Some(tri) = triangle(d, dart) else {
        return false;
    };
    let cs = [tri[0].crossing, tri[1].crossing, tri[2].crossing];
    let mut some_line_uniform = false;
    for k in 0..3 {
        let here = tri[k];
        let there = d.link(here);
        if d.crossing(here.crossing).is_over(here.slot) == d.crossing(there.crossing).is_over(there.slot) {
            some_line_uniform = true;
        }
        // external legs must leave the triangle
        for leg in [there.rotate(1), there.rotate(2)] {
            if cs.contains(&d.link(leg).crossing) {
                return false;
            }
        }
    }
    some_line_uniform
}

fn r2_minus_applicable(d: &PlanarDiagram, dart: Dart) -> bool {
    let d1 = d.next_in_face(dart);
    if d.next_in_face(d1) != dart || d1.crossing == dart.crossing {
        return false;
    }
    let far = d.link(dart);
    d.crossing(dart.crossing).is_over(dart.slot) == d.crossing(far.crossing).is_over(far.slot)
}

fn r1_minus_applicable(d: &PlanarDiagram, dart: Dart) -> bool {
    d.link(dart) == dart.rotate(1)
}

/// All R1-, R2- and R3 moves, ordered by lowest crossing index.
pub fn find_moves(d: &PlanarDiagram) -> Vec<Move> {
    let mut out = Vec::new();
    let mut kinked = HashSet::new();
    for face in d.faces() {
        let site = *face.iter().min().expect("faces are nonempty");
        let m = match face.len() {
            // both loops of a lone figure-eight crossing remove the same kink
            1 if !kinked.insert(site.crossing) => continue,
            1 => Move::R1Minus { dart: site },
            2 if r2_minus_applicable(d, site) => Move::R2Minus { dart: site },
            3 if r3_applicable(d, site) => Move::R3 { dart: site },
            _ => continue,
        };
        out.push(m);
    }
    out.sort_by_key(|m| (m.lowest_crossing(), m.kind(), site_of(m)));
    out
}

fn site_of(m: &Move) -> Dart {
    match m {
        Move::R1Minus { dart } | Move::R2Minus { dart } | Move::R3 { dart } => *dart,
        _ => Dart::new(0, 0),
    }
}

/// Reductions only (R1-, R2-), in tie-break order.
pub fn find_reductions(d: &PlanarDiagram) -> Vec<Move> {
    find_moves(d)
        .into_iter()
        .filter(|m| m.kind() != MoveKind::R3)
        .collect()
}

pub fn r1_plus_sites(d: &PlanarDiagram) -> Vec<Move> {
    if d.is_empty() {
        return [false, true]
            .into_iter()
            .map(|first_over| Move::R1Plus { dart: None, first_over })
            .collect();
    }
    let mut out = Vec::new();
    for c in 0..d.crossing_count() {
        for s in 0..4 {
            for first_over in [false, true] {
                out.push(Move::R1Plus {
                    dart: Some(Dart::new(c, s)),
                    first_over,
                });
            }
        }
    }
    out
}

pub fn r2_plus_sites(d: &PlanarDiagram) -> Vec<Move> {
    let mut out = Vec::new();
    for face in d.faces() {
        for (i, &a) in face.iter().enumerate() {
            for &b in &face[i + 1..] {
                if d.link(a) == b {
                    continue;
                }
                for a_over in [false, true] {
                    out.push(Move::R2Plus { a, b, a_over });
                }
            }
        }
    }
    out
}

fn applicable(d: &PlanarDiagram, m: &Move) -> bool {
    let in_range = |x: &Dart| x.crossing < d.crossing_count() && x.slot < 4;
    match m {
        Move::R1Minus { dart } => in_range(dart) && r1_minus_applicable(d, *dart),
        Move::R2Minus { dart } => in_range(dart) && r2_minus_applicable(d, *dart),
        Move::R3 { dart } => in_range(dart) && r3_applicable(d, *dart),
        Move::R1Plus { dart: None, .. } => d.is_empty(),
        Move::R1Plus { dart: Some(x), .. } => in_range(x),
        Move::R2Plus { a, b, .. } => {
            if !in_range(a) || !in_range(b) || a == b || d.link(*a) == *b {
                return false;
            }
            let mut x = d.next_in_face(*a);
            while x != *a {
                if x == *b {
                    return true;
                }
                x = d.next_in_face(x);
            }
            false
        }
    }
}

pub fn apply_move(d: &PlanarDiagram, m: &Move) -> Result<PlanarDiagram, MoveError> {
    if !applicable(d, m) {
        return Err(MoveError::StaleMove(*m));
    }
    let out = match *m {
        Move::R1Minus { dart } => remove_crossings(d, &[dart.crossing]),
        Move::R2Minus { dart } => remove_crossings(d, &[dart.crossing, d.link(dart).crossing]),
        Move::R3 { dart } => slide_r3(d, dart),
        Move::R1Plus { dart: None, first_over } => {
            let entry = if first_over { 2 } else { -2 };
            dt_to_diagram(&DtCode::new(vec![entry]).expect("valid code")).expect("a kink is realizable")
        }
        Move::R1Plus {
            dart: Some(dart),
            first_over,
        } => add_kink(d, dart, first_over),
        Move::R2Plus { a, b, a_over } => add_bigon(d, a, b, a_over),
    };
    Ok(out)
}

/// Deletes crossings, joining the strands through them straight across.
fn remove_crossings(d: &PlanarDiagram, gone: &[usize]) -> PlanarDiagram {
    let n = d.crossing_count();
    let removed = |c: usize| gone.contains(&c);
    let mut xs = d.crossings().to_vec();
    for &r in gone {
        for s in 0..4u8 {
            let p = d.link(Dart::new(r, s));
            if removed(p.crossing) {
                continue;
            }
            let mut cur = Dart::new(r, s);
            let q = loop {
                let next = d.link(cur.opposite());
                if !removed(next.crossing) {
                    break next;
                }
                cur = next;
            };
            set_link(&mut xs, p, q);
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for c in (0..n).filter(|&c| !removed(c)) {
        index[c] = kept.len();
        kept.push(xs[c]);
    }
    if kept.is_empty() {
        return PlanarDiagram::unknot();
    }
    for x in &mut kept {
        for l in &mut x.link {
            l.crossing = index[l.crossing];
        }
    }
    let start = d
        .traversal()
        .into_iter()
        .find(|v| !removed(v.crossing))
        .expect("some crossing survives");
    canonicalize(kept, Dart::new(index[start.crossing], start.slot)).expect("reduction keeps one component")
}

fn slide_r3(d: &PlanarDiagram, dart: Dart) -> PlanarDiagram {
    let tri = triangle(d, dart).expect("checked triangle");
    let mut xs = d.crossings().to_vec();
    for k in 0..3 {
        let here = tri[k];
        let there = d.link(here);
        let ext_here = here.opposite();
        let ext_there = there.opposite();
        let outer_here = d.link(ext_here);
        let outer_there = d.link(ext_there);
        set_link(&mut xs, here, outer_there);
        set_link(&mut xs, there, outer_here);
        set_link(&mut xs, ext_here, ext_there);
    }
    canonicalize(xs, d.start_dart()).expect("R3 keeps one component")
}

fn add_kink(d: &PlanarDiagram, dart: Dart, first_over: bool) -> PlanarDiagram {
    let far = d.link(dart);
    let along = !d.crossing(dart.crossing).is_in(dart.slot);
    let x = d.crossing_count();
    let mut xs = d.crossings().to_vec();
    // slot 0 faces `dart`, slot 1 faces `far`, slots 2 and 3 form the loop
    let (first_in, second_in) = if along { (0, 3) } else { (1, 2) };
    let (over_in, under_in) = if first_over {
        (first_in, second_in)
    } else {
        (second_in, first_in)
    };
    xs.push(Crossing {
        link: [dart, far, Dart::new(x, 3), Dart::new(x, 2)],
        under_in,
        over_in,
    });
    set_link(&mut xs, dart, Dart::new(x, 0));
    set_link(&mut xs, far, Dart::new(x, 1));
    canonicalize(xs, d.start_dart()).expect("R1 keeps one component")
}

fn add_bigon(d: &PlanarDiagram, a: Dart, b: Dart, a_over: bool) -> PlanarDiagram {
    let (u1, v1) = (a, d.link(a));
    let (u2, v2) = (b, d.link(b));
    let x = d.crossing_count();
    let y = x + 1;
    let dummy = Dart::new(0, 0);
    let mut xs = d.crossings().to_vec();
    let a_along = !d.crossing(u1.crossing).is_in(u1.slot);
    let b_along = !d.crossing(u2.crossing).is_in(u2.slot);
    // X: 0 from u1, 1 to Y, 2 to Y, 3 to v2. Y: 0 to X, 1 to X, 2 to v1, 3 from u2.
    let (xa, ya) = if a_along { (0, 0) } else { (2, 2) };
    let (xb, yb) = if b_along { (1, 3) } else { (3, 1) };
    let make = |a_in: u8, b_in: u8| {
        let (over_in, under_in) = if a_over { (a_in, b_in) } else { (b_in, a_in) };
        Crossing {
            link: [dummy; 4],
            under_in,
            over_in,
        }
    };
    xs.push(make(xa, xb));
    xs.push(make(ya, yb));
    set_link(&mut xs, u1, Dart::new(x, 0));
    set_link(&mut xs, Dart::new(x, 2), Dart::new(y, 0));
    set_link(&mut xs, Dart::new(y, 2), v1);
    set_link(&mut xs, u2, Dart::new(y, 3));
    set_link(&mut xs, Dart::new(y, 1), Dart::new(x, 1));
    set_link(&mut xs, Dart::new(x, 3), v2);
    canonicalize(xs, d.start_dart()).expect("R2 keeps one component")
}

/// A labelling-independent key: the least Gauss-style encoding over all
/// starting points.
pub(crate) fn diagram_key(d: &PlanarDiagram) -> Vec<u32> {
    let trav = d.traversal();
    let m = trav.len();
    let n = d.crossing_count();
    let mut best: Option<Vec<u32>> = None;
    let mut id = vec![u32::MAX; n];
    let mut first_slot = vec![0u8; n];
    for shift in 0..m {
        id.iter_mut().for_each(|v| *v = u32::MAX);
        let mut next_id = 0;
        let mut code = Vec::with_capacity(m);
        for t in 0..m {
            let v = trav[(t + shift) % m];
            let x = d.crossing(v.crossing);
            let over = x.is_over(v.slot) as u32;
            let c = v.crossing;
            let entry = if id[c] == u32::MAX {
                id[c] = next_id;
                next_id += 1;
                first_slot[c] = v.slot;
                id[c] * 8 + over * 2
            } else {
                let turn = ((v.slot + 4 - first_slot[c]) % 4 == 1) as u32;
                id[c] * 8 + 4 + over * 2 + turn
            };
            code.push(entry);
            if let Some(b) = &best {
                if code[..] > b[..code.len()] {
                    break;
                }
            }
        }
        if code.len() == m && best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_default()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplifyReport {
    pub initial_crossings: usize,
    pub final_crossings: usize,
    pub moves_applied: usize,
    pub budget_exhausted: bool,
}

fn reduce(mut d: PlanarDiagram, moves: &mut usize) -> PlanarDiagram {
    while let Some(m) = find_reductions(&d).into_iter().next() {
        d = apply_move(&d, &m).expect("found moves apply");
        *moves += 1;
    }
    d
}

enum Explore {
    Improved(PlanarDiagram),
    Stuck,
    Exhausted,
}

enum Task {
    Visit(usize),
    Widen(usize),
}

fn explore(best: &PlanarDiagram, budget: usize, moves: &mut usize) -> Explore {
    let target = best.crossing_count();
    let ceiling = target + EXCURSION;
    let mut states = vec![best.clone()];
    let mut seen = HashSet::from([diagram_key(best)]);
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut push = |heap: &mut BinaryHeap<_>, key: usize, task: Task| {
        heap.push(Reverse((key, seq)));
        seq += 1;
        task
    };
    let mut tasks = Vec::new();
    tasks.push(push(&mut heap, target, Task::Visit(0)));
    while let Some(Reverse((_, id))) = heap.pop() {
        let children = match tasks[id] {
            Task::Visit(s) => {
                let here = states[s].crossing_count();
                if here + 2 <= ceiling {
                    tasks.push(push(&mut heap, here + 2, Task::Widen(s)));
                }
                find_moves(&states[s])
            }
            Task::Widen(s) => r2_plus_sites(&states[s]),
        };
        let parent = match tasks[id] {
            Task::Visit(s) | Task::Widen(s) => s,
        };
        for m in children {
            if *moves >= budget {
                return Explore::Exhausted;
            }
            let next = apply_move(&states[parent], &m).expect("found moves apply");
            *moves += 1;
            if next.crossing_count() < target {
                return Explore::Improved(next);
            }
            if next.crossing_count() > ceiling || !seen.insert(diagram_key(&next)) {
                continue;
            }
            let key = next.crossing_count();
            states.push(next);
            tasks.push(push(&mut heap, key, Task::Visit(states.len() - 1)));
        }
    }
    Explore::Stuck
}

/// Greedy R1-/R2- reduction, then bounded exploration through R3 moves and
/// R2+ excursions until no smaller diagram is found or `budget` moves have
/// been applied.
pub fn simplify(d: &PlanarDiagram, budget: usize) -> (PlanarDiagram, SimplifyReport) {
    let mut moves = 0;
    let mut best = reduce(d.clone(), &mut moves);
    let mut budget_exhausted = false;
    while !best.is_empty() {
        match explore(&best, budget, &mut moves) {
            Explore::Improved(next) => best = reduce(next, &mut moves),
            Explore::Stuck => break,
            Explore::Exhausted => {
                budget_exhausted = true;
                break;
            }
        }
    }
    let report = SimplifyReport {
        initial_crossings: d.crossing_count(),
        final_crossings: best.crossing_count(),
        moves_applied: moves,
        budget_exhausted,
    };
    debug!("simplify: {report:?}");
    (best, report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknotVerdict {
    Unknot,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknotCertification {
    pub verdict: UnknotVerdict,
    /// Set when the determinant or Jones polynomial is nontrivial.
    pub knotted: bool,
    pub report: Option<SimplifyReport>,
}

/// Sound but incomplete unknot recognition.
pub fn certify_unknot(d: &PlanarDiagram, budget: usize) -> UnknotCertification {
    let knotted = UnknotCertification {
        verdict: UnknotVerdict::Unknown,
        knotted: true,
        report: None,
    };
    if determinant(d) != 1 {
        return knotted;
    }
    if d.crossing_count() <= DEFAULT_CROSSING_CAP && !jones(d).expect("under cap").is_one() {
        return knotted;
    }
    let (out, report) = simplify(d, budget);
    let verdict = if out.is_empty() {
        UnknotVerdict::Unknot
    } else {
        UnknotVerdict::Unknown
    };
    UnknotCertification {
        verdict,
        knotted: false,
        report: Some(report),
    }
}
