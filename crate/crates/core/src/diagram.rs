//! Planar diagrams of knots.
//!
//! A diagram is a 4-valent plane graph. Each crossing has four slots
//! numbered counterclockwise; opposite slots (`s`, `s + 2`) carry the same
//! strand straight through. Every slot is joined by an edge to a slot of
//! some crossing (possibly the same one), which gives the rotation system
//! and hence the faces.
//!
//! Diagrams are kept in a canonical labelling: traversal starts at crossing
//! 0 through slot `start`, and crossing `i` is the crossing met at the odd
//! visit `2i + 1`. This is the ordering of the entries of a DT code, so a
//! `CrossingRef` is an index into the DT entry list.
//!
//! Crossing signs follow the right-hand rule: a crossing is positive when,
//! looking along the under-strand, the over-strand passes from right to
//! left.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub crossing: usize,
    pub slot: u8,
}

impl Dart {
    pub fn new(crossing: usize, slot: u8) -> Self {
        Self { crossing, slot: slot % 4 }
    }

    pub fn rotate(self, k: u8) -> Self {
        Self::new(self.crossing, (self.slot + k) % 4)
    }

    /// The slot across the crossing, on the same strand.
    pub fn opposite(self) -> Self {
        self.rotate(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub(crate) link: [Dart; 4],
    pub(crate) under_in: u8,
    pub(crate) over_in: u8,
}

impl Crossing {
    pub fn is_in(&self, slot: u8) -> bool {
        slot == self.under_in || slot == self.over_in
    }

    pub fn is_over(&self, slot: u8) -> bool {
        slot % 2 == self.over_in % 2
    }

    pub fn sign(&self) -> i32 {
        if (self.over_in + 4 - self.under_in) % 4 == 3 {
            1
        } else {
            -1
        }
    }

    pub fn link(&self, slot: u8) -> Dart {
        self.link[slot as usize % 4]
    }

    pub(crate) fn switch(&mut self) {
        std::mem::swap(&mut self.under_in, &mut self.over_in);
    }
}

/// Index of a crossing in DT-entry order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingRef(pub usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("crossing index {index} out of range for a {count}-crossing diagram")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("diagram has more than one component")]
    NotAKnot,
    #[error("inconsistent diagram: {0}")]
    Inconsistent(String),
}

/// A one-component planar knot diagram in canonical labelling.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    pub(crate) crossings: Vec<Crossing>,
    pub(crate) start: u8,
}

impl PlanarDiagram {
    /// The crossingless diagram of the unknot.
    pub fn unknot() -> Self {
        Self {
            crossings: Vec::new(),
            start: 0,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, c: usize) -> &Crossing {
        &self.crossings[c]
    }

    pub fn link(&self, d: Dart) -> Dart {
        self.crossings[d.crossing].link(d.slot)
    }

    pub fn start_dart(&self) -> Dart {
        Dart::new(0, self.start)
    }

    /// Incoming darts in traversal order; entry `t` is visit `t + 1`.
    pub fn traversal(&self) -> Vec<Dart> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(2 * self.crossing_count());
        let mut d = self.start_dart();
        loop {
            out.push(d);
            d = self.link(d.opposite());
            if d == self.start_dart() || out.len() > 2 * self.crossing_count() {
                break;
            }
        }
        out
    }

    /// For each crossing, the (odd, even) 1-based visit numbers.
    pub fn visit_labels(&self) -> Vec<(usize, usize)> {
        let mut labels = vec![(0, 0); self.crossing_count()];
        for (t, d) in self.traversal().iter().enumerate() {
            let label = t + 1;
            let entry = &mut labels[d.crossing];
            if label % 2 == 1 {
                entry.0 = label;
            } else {
                entry.1 = label;
            }
        }
        labels
    }

    /// Label of every edge, indexed by `[crossing][slot]`: the edge arriving
    /// at visit `t` (1-based) has label `t - 1`.
    pub fn edge_labels(&self) -> Vec<[usize; 4]> {
        let mut labels = vec![[0usize; 4]; self.crossing_count()];
        for (t, d) in self.traversal().iter().enumerate() {
            labels[d.crossing][d.slot as usize] = t;
            let prev = self.link(*d);
            labels[prev.crossing][prev.slot as usize] = t;
        }
        labels
    }

    /// PD code with 1-based edge labels; each 4-tuple lists edges
    /// counterclockwise starting at the incoming under-strand.
    pub fn pd_code(&self) -> Vec<[usize; 4]> {
        let labels = self.edge_labels();
        self.crossings
            .iter()
            .enumerate()
            .map(|(c, x)| std::array::from_fn(|k| labels[c][(x.under_in as usize + k) % 4] + 1))
            .collect()
    }

    pub fn crossing_sign(&self, c: usize) -> i32 {
        self.crossings[c].sign()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    /// Faces as cycles of darts. A dart `(c, s)` stands for leaving crossing
    /// `c` through slot `s` with the face on the left.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let n = self.crossing_count();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for c in 0..n {
            for s in 0..4u8 {
                if seen[c][s as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = Dart::new(c, s);
                while !seen[d.crossing][d.slot as usize] {
                    seen[d.crossing][d.slot as usize] = true;
                    face.push(d);
                    d = self.next_in_face(d);
                }
                faces.push(face);
            }
        }
        faces
    }

    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.link(d).rotate(3)
    }

    /// Face index of each dart, plus the face count.
    pub fn face_map(&self) -> (Vec<[usize; 4]>, usize) {
        let faces = self.faces();
        let mut map = vec![[0usize; 4]; self.crossing_count()];
        for (i, f) in faces.iter().enumerate() {
            for d in f {
                map[d.crossing][d.slot as usize] = i;
            }
        }
        (map, faces.len())
    }

    /// V - E + F = 2 for the underlying plane graph.
    pub fn is_planar(&self) -> bool {
        let n = self.crossing_count();
        n == 0 || self.faces().len() == n + 2
    }

    pub fn change_crossing(&self, c: CrossingRef) -> Result<Self, DiagramError> {
        self.check_ref(c)?;
        let mut out = self.clone();
        out.crossings[c.0].switch();
        Ok(out)
    }

    /// Changes several crossings at once.
    pub fn change_crossings(&self, cs: &[CrossingRef]) -> Result<Self, DiagramError> {
        let mut out = self.clone();
        for &c in cs {
            self.check_ref(c)?;
            out.crossings[c.0].switch();
        }
        Ok(out)
    }

    pub fn mirror(&self) -> Self {
        let mut out = self.clone();
        for x in &mut out.crossings {
            x.switch();
        }
        out
    }

    fn check_ref(&self, c: CrossingRef) -> Result<(), DiagramError> {
        if c.0 >= self.crossing_count() {
            return Err(DiagramError::IndexOutOfRange {
                index: c.0,
                count: self.crossing_count(),
            });
        }
        Ok(())
    }

    /// Connected sum, spliced at the last arc of `self` and the first arc
    /// of `other`. Crossings of `self` keep their indices.
    pub fn connected_sum(&self, other: &PlanarDiagram) -> PlanarDiagram {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let offset = self.crossing_count();
        let mut xs = self.crossings.clone();
        xs.extend(other.crossings.iter().map(|x| {
            let mut x = *x;
            for d in &mut x.link {
                d.crossing += offset;
            }
            x
        }));
        // a: ... -> a_tail -> a_head (visit 1 of self)
        let a_head = self.start_dart();
        let a_tail = self.link(a_head);
        // b: b_tail (out of visit 1) -> b_head (visit 2)
        let b_tail = Dart::new(offset, other.start + 2);
        let b_head = {
            let d = other.link(Dart::new(0, other.start + 2));
            Dart::new(d.crossing + offset, d.slot)
        };
        set_link(&mut xs, a_tail, b_head);
        set_link(&mut xs, b_tail, a_head);
        canonicalize(xs, a_head).expect("connected sum of knots is a knot")
    }

    /// Renders the planar structure in a form useful for debugging.
    pub fn describe(&self) -> String {
        format!("{self:?}")
    }
}

pub(crate) fn set_link(xs: &mut [Crossing], a: Dart, b: Dart) {
    xs[a.crossing].link[a.slot as usize] = b;
    xs[b.crossing].link[b.slot as usize] = a;
}

/// Relabels `xs` so that traversal starts at the incoming dart `start` and
/// crossing `i` is met at visit `2i + 1`. Fails unless `xs` forms a single
/// closed strand visiting every crossing twice.
pub(crate) fn canonicalize(xs: Vec<Crossing>, start: Dart) -> Result<PlanarDiagram, DiagramError> {
    let n = xs.len();
    if n == 0 {
        return Ok(PlanarDiagram::unknot());
    }
    if !xs[start.crossing].is_in(start.slot) {
        return Err(DiagramError::Inconsistent("start dart is not incoming".into()));
    }
    let mut new_index = vec![usize::MAX; n];
    let mut visits = vec![0u8; n];
    let mut d = start;
    let mut t = 0usize;
    loop {
        let c = d.crossing;
        if !xs[c].is_in(d.slot) {
            return Err(DiagramError::Inconsistent(format!("strand enters crossing {c} through an outgoing slot")));
        }
        visits[c] += 1;
        if visits[c] > 2 {
            return Err(DiagramError::Inconsistent(format!("crossing {c} visited more than twice")));
        }
        if t % 2 == 0 {
            if new_index[c] != usize::MAX {
                return Err(DiagramError::Inconsistent(format!("crossing {c} visited twice at odd steps")));
            }
            new_index[c] = t / 2;
        }
        t += 1;
        d = xs[c].link(d.slot + 2);
        if d == start {
            break;
        }
        if t > 2 * n {
            return Err(DiagramError::Inconsistent("traversal does not close".into()));
        }
    }
    if t != 2 * n || visits.iter().any(|&v| v != 2) {
        return Err(DiagramError::NotAKnot);
    }
    let mut out = vec![xs[0]; n];
    for (old, x) in xs.into_iter().enumerate() {
        let mut x = x;
        for l in &mut x.link {
            l.crossing = new_index[l.crossing];
        }
        out[new_index[old]] = x;
    }
    Ok(PlanarDiagram {
        crossings: out,
        start: start.slot,
    })
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarDiagram(PD{:?})", self.pd_code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{dt_to_diagram, DtCode};

    fn from_dt(s: &str) -> PlanarDiagram {
        dt_to_diagram(&s.parse::<DtCode>().unwrap()).unwrap()
    }

    #[test]
    fn trefoil_structure() {
        let d = from_dt("[4,6,2]");
        assert_eq!(d.crossing_count(), 3);
        assert!(d.is_planar());
        assert_eq!(d.writhe().abs(), 3);
        assert_eq!(d.traversal().len(), 6);
        let labels = d.visit_labels();
        assert_eq!(labels, vec![(1, 4), (3, 6), (5, 2)]);
    }

    #[test]
    fn change_crossing_is_an_involution() {
        let d = from_dt("[6,-10,24,20,-4,-22,-8,26,28,30,-12,-2,14,18,16]");
        for c in 0..d.crossing_count() {
            let once = d.change_crossing(CrossingRef(c)).unwrap();
            assert_ne!(once, d);
            assert_eq!((once.writhe() - d.writhe()).abs(), 2);
            assert_eq!(once.change_crossing(CrossingRef(c)).unwrap(), d);
        }
        assert_eq!(
            d.change_crossing(CrossingRef(15)),
            Err(DiagramError::IndexOutOfRange { index: 15, count: 15 })
        );
    }

    #[test]
    fn mirror_laws() {
        let d = from_dt("[4,8,10,14,2,16,6,12]");
        assert_eq!(d.mirror().mirror(), d);
        assert_eq!(d.mirror().writhe(), -d.writhe());
        for c in 0..d.crossing_count() {
            let a = d.mirror().change_crossing(CrossingRef(c)).unwrap();
            let b = d.change_crossing(CrossingRef(c)).unwrap().mirror();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unknot_has_zero_writhe() {
        let u = PlanarDiagram::unknot();
        assert_eq!(u.writhe(), 0);
        assert!(u.faces().is_empty());
        assert!(u.is_planar());
    }

    #[test]
    fn connected_sum_is_planar_and_additive() {
        let a = from_dt("[4,6,2]");
        let b = from_dt("[4,6,8,2]");
        let s = a.connected_sum(&b);
        assert_eq!(s.crossing_count(), 7);
        assert!(s.is_planar());
        assert_eq!(s.writhe(), a.writhe() + b.writhe());
        // crossings of the left summand keep their indices
        for c in 0..3 {
            assert_eq!(s.crossing_sign(c), a.crossing_sign(c));
        }
        assert_eq!(PlanarDiagram::unknot().connected_sum(&a), a);
        assert_eq!(a.connected_sum(&PlanarDiagram::unknot()), a);
    }
}
