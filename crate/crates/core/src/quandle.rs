//! Quandle colouring counts.
//!
//! A colouring assigns to every arc of the diagram an element of the
//! quandle so that at each crossing the outgoing under-arc is the incoming
//! under-arc acted on by the over-arc. The number of colourings is a knot
//! invariant.

use std::sync::OnceLock;

use crate::diagram::PlanarDiagram;

pub type Perm = Vec<u8>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a * b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

fn inverse(a: &Perm) -> Perm {
    let mut out = vec![0u8; a.len()];
    for (i, &v) in a.iter().enumerate() {
        out[v as usize] = i as u8;
    }
    out
}

/// A quandle stored as a multiplication table.
#[derive(Clone, Debug)]
pub struct Quandle {
    /// `act[o][x]` is x conjugated by o; `inv[o][x]` by o inverse.
    act: Vec<Vec<u16>>,
    inv: Vec<Vec<u16>>,
}

impl Quandle {
    /// The conjugacy class of `seed` inside the group generated by `gens`.
    pub fn conjugacy_class(seed: Perm, gens: &[Perm]) -> Self {
        let mut class = vec![seed];
        let mut i = 0;
        while i < class.len() {
            for g in gens {
                let c = compose(&compose(g, &class[i]), &inverse(g));
                if !class.contains(&c) {
                    class.push(c);
                }
            }
            i += 1;
        }
        let index = |p: &Perm| class.iter().position(|q| q == p).expect("class is closed") as u16;
        let table = |f: &dyn Fn(&Perm, &Perm) -> Perm| -> Vec<Vec<u16>> {
            class
                .iter()
                .map(|o| class.iter().map(|x| index(&f(o, x))).collect())
                .collect()
        };
        let act = table(&|o, x| compose(&compose(o, x), &inverse(o)));
        let inv = table(&|o, x| compose(&compose(&inverse(o), x), o));
        Self { act, inv }
    }

    /// The affine quandle on Z/p with x acting on y as t*y + (1 - t)*x.
    pub fn affine(p: u16, t: u16) -> Self {
        let op = |x: u16, y: u16| ((t as u32 * y as u32 + (p + 1 - t % p) as u32 * x as u32) % p as u32) as u16;
        let act: Vec<Vec<u16>> = (0..p).map(|x| (0..p).map(|y| op(x, y)).collect()).collect();
        let mut inv = vec![vec![0u16; p as usize]; p as usize];
        for x in 0..p as usize {
            for y in 0..p as usize {
                inv[x][act[x][y] as usize] = y as u16;
            }
        }
        Self { act, inv }
    }

    pub fn len(&self) -> usize {
        self.act.len()
    }
}

/// Quandles used to split knots sharing a fingerprint: the 3-cycles and one
/// class of 5-cycles in A5, and affine quandles over Z/7, Z/11 and Z/13.
/// With the fingerprint they tell apart every prime knot through ten
/// crossings.
pub fn standard_quandles() -> &'static [Quandle] {
    static MENU: OnceLock<Vec<Quandle>> = OnceLock::new();
    MENU.get_or_init(|| {
        let a5: [Perm; 2] = [vec![1, 2, 0, 3, 4], vec![1, 2, 3, 4, 0]];
        vec![
            Quandle::conjugacy_class(vec![1, 2, 0, 3, 4], &a5),
            Quandle::conjugacy_class(vec![1, 2, 3, 4, 0], &a5),
            Quandle::affine(7, 3),
            Quandle::affine(11, 5),
            Quandle::affine(13, 2),
        ]
    })
}

/// Normalized colouring counts for each of [`standard_quandles`].
pub fn coloring_profile(d: &PlanarDiagram) -> Vec<u64> {
    standard_quandles().iter().map(|q| normalized_colorings(d, q)).collect()
}

struct Arcs {
    count: usize,
    /// For each under-passage in traversal order: (sign, over arc).
    relations: Vec<(i32, usize)>,
}

fn arcs(d: &PlanarDiagram) -> Arcs {
    let trav = d.traversal();
    // arc k runs from the k-th under-passage to the next one
    let first_under = trav
        .iter()
        .position(|v| !d.crossing(v.crossing).is_over(v.slot))
        .expect("a knot diagram has under-passages");
    let m = trav.len();
    let mut arc = 0;
    let mut over_arc = vec![usize::MAX; d.crossing_count()];
    let mut order = Vec::new();
    for k in 0..m {
        let t = (first_under + k) % m;
        let v = trav[t];
        if !d.crossing(v.crossing).is_over(v.slot) {
            if k > 0 {
                arc += 1;
            }
            order.push(v.crossing);
        } else {
            over_arc[v.crossing] = arc;
        }
    }
    let count = arc + 1;
    // under-passage i goes from arc (i - 1) into arc i, cyclically
    let relations = order
        .iter()
        .map(|&c| (d.crossing_sign(c), over_arc[c]))
        .collect();
    Arcs { count, relations }
}

/// Number of colourings divided by the size of the quandle.
pub fn normalized_colorings(d: &PlanarDiagram, q: &Quandle) -> u64 {
    if d.is_empty() {
        return 1;
    }
    let a = arcs(d);
    let mut colour = vec![u16::MAX; a.count];
    // the class is homogeneous, so fix arc 0
    colour[0] = 0;
    count_from(&a, q, &mut colour, 1)
}

/// Relation `i` defines arc `i` from arc `i - 1` (relation 0 closes the
/// loop from the last arc back to arc 0).
fn count_from(a: &Arcs, q: &Quandle, colour: &mut Vec<u16>, i: usize) -> u64 {
    if i == a.count {
        let (sign, over) = a.relations[0];
        let prev = colour[a.count - 1];
        let table = if sign > 0 { &q.act } else { &q.inv };
        return (table[colour[over] as usize][prev as usize] == colour[0]) as u64;
    }
    let (sign, over) = a.relations[i];
    let table = if sign > 0 { &q.act } else { &q.inv };
    if colour[over] == u16::MAX {
        let mut total = 0;
        for o in 0..q.len() as u16 {
            colour[over] = o;
            total += step(a, q, colour, i, table);
            colour[over] = u16::MAX;
        }
        return total;
    }
    step(a, q, colour, i, table)
}

fn step(a: &Arcs, q: &Quandle, colour: &mut Vec<u16>, i: usize, table: &[Vec<u16>]) -> u64 {
    let (_, over) = a.relations[i];
    let next = table[colour[over] as usize][colour[i - 1] as usize];
    let previous = colour[i];
    if previous != u16::MAX {
        // arc i was fixed earlier as an over-arc
        return if previous == next {
            count_from(a, q, colour, i + 1)
        } else {
            0
        };
    }
    colour[i] = next;
    let total = count_from(a, q, colour, i + 1);
    colour[i] = u16::MAX;
    total
}
