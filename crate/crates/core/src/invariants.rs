//! Kauffman bracket, Jones polynomial, determinant and signature.
//!
//! Signatures follow the convention in which the positive (right-handed)
//! trefoil has signature -2 and Jones polynomial `t + t^3 - t^4`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Dart, PlanarDiagram};
use crate::linalg::signature_and_det;
use crate::poly::LaurentPolynomial;

pub const DEFAULT_CROSSING_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("{crossings} crossings exceeds the state-sum cap of {cap}; simplify the diagram first")]
    CapExceeded { crossings: usize, cap: usize },
}

/// Bracket polynomial in `A`, normalised so the crossingless circle is 1.
pub fn kauffman_bracket(d: &PlanarDiagram) -> Result<LaurentPolynomial, InvariantError> {
    kauffman_bracket_with_cap(d, DEFAULT_CROSSING_CAP)
}

pub fn kauffman_bracket_with_cap(d: &PlanarDiagram, cap: usize) -> Result<LaurentPolynomial, InvariantError> {
    let n = d.crossing_count();
    if n > cap {
        return Err(InvariantError::CapExceeded { crossings: n, cap });
    }
    Ok(contract_bracket(d))
}

fn loop_value() -> LaurentPolynomial {
    LaurentPolynomial::from_terms([(2, -1), (-2, -1)])
}

/// Order for [`contract_bracket`]: each crossing has as many links as
/// possible into the crossings before it.
fn contraction_order(d: &PlanarDiagram) -> Vec<usize> {
    let n = d.crossing_count();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let c = (0..n)
            .filter(|&c| !done[c])
            .max_by_key(|&c| {
                let into_done = (0..4).filter(|&s| done[d.crossing(c).link(s).crossing]).count();
                (into_done, std::cmp::Reverse(c))
            })
            .expect("a crossing is left");
        done[c] = true;
        order.push(c);
    }
    order
}

/// Adds crossings one at a time. For every way of pairing up the loose ends
/// of the processed part, keep the partial state sum with one factor of the
/// loop value per closed loop.
fn contract_bracket(d: &PlanarDiagram) -> LaurentPolynomial {
    let n = d.crossing_count();
    if n == 0 {
        return LaurentPolynomial::one();
    }
    let loop_value = loop_value();
    let mut done = vec![false; n];
    let mut frontier: Vec<Dart> = Vec::new();
    let mut states: HashMap<Vec<u8>, LaurentPolynomial> = HashMap::from([(Vec::new(), LaurentPolynomial::one())]);
    for c in contraction_order(d) {
        let x = d.crossing(c);
        let f = frontier.len();
        // nodes 0..f are the old loose ends, f..f + 4 the slots of c
        let mut next = Vec::new();
        let mut position = vec![usize::MAX; f + 4];
        let mut fixed = Vec::new();
        for (i, &e) in frontier.iter().enumerate() {
            let t = d.link(e);
            if t.crossing == c {
                fixed.push((i, f + t.slot as usize));
            } else {
                position[i] = next.len();
                next.push(e);
            }
        }
        for s in 0..4u8 {
            let t = x.link(s);
            if t.crossing == c {
                if s < t.slot {
                    fixed.push((f + s as usize, f + t.slot as usize));
                }
            } else if !done[t.crossing] {
                position[f + s as usize] = next.len();
                next.push(Dart::new(c, s));
            }
        }
        let u = x.under_in as usize;
        let slot = |k: usize| f + (u + k) % 4;
        let smoothings = [
            ([(slot(0), slot(1)), (slot(2), slot(3))], 1),
            ([(slot(1), slot(2)), (slot(3), slot(0))], -1),
        ];
        let mut out: HashMap<Vec<u8>, LaurentPolynomial> = HashMap::new();
        for (key, value) in &states {
            for (pairs, exp) in &smoothings {
                let mut edges: Vec<(usize, usize)> = (0..f)
                    .filter(|&i| i < key[i] as usize)
                    .map(|i| (i, key[i] as usize))
                    .collect();
                edges.extend_from_slice(&fixed);
                edges.extend_from_slice(pairs);
                let (pairing, loops) = join(f + 4, &edges, &position, next.len());
                let mut term = value.shift(*exp);
                for _ in 0..loops {
                    term = &term * &loop_value;
                }
                *out.entry(pairing).or_insert_with(LaurentPolynomial::zero) += &term;
            }
        }
        out.retain(|_, v| !v.is_zero());
        states = out;
        frontier = next;
        done[c] = true;
    }
    let total = states.remove(&Vec::new()).unwrap_or_else(LaurentPolynomial::zero);
    divide_by_loop(&total)
}

/// Follows the paths and cycles of a graph whose nodes have degree one or
/// two. Returns the pairing of degree-one nodes, indexed by `position`, and
/// the number of cycles.
fn join(nodes: usize, edges: &[(usize, usize)], position: &[usize], ends: usize) -> (Vec<u8>, usize) {
    let mut adj = vec![[(usize::MAX, usize::MAX); 2]; nodes];
    let mut degree = vec![0usize; nodes];
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a][degree[a]] = (b, id);
        degree[a] += 1;
        adj[b][degree[b]] = (a, id);
        degree[b] += 1;
    }
    let mut seen = vec![false; nodes];
    let walk = |start: usize, seen: &mut Vec<bool>| -> usize {
        let mut cur = start;
        let mut via = usize::MAX;
        loop {
            seen[cur] = true;
            let Some(&(nb, id)) = adj[cur][..degree[cur]].iter().find(|&&(_, id)| id != via) else {
                return cur;
            };
            if nb == start {
                return start;
            }
            cur = nb;
            via = id;
        }
    };
    let mut pairing = vec![0u8; ends];
    for start in 0..nodes {
        if position[start] != usize::MAX && !seen[start] {
            let end = walk(start, &mut seen);
            pairing[position[start]] = position[end] as u8;
            pairing[position[end]] = position[start] as u8;
        }
    }
    let mut loops = 0;
    for start in 0..nodes {
        if !seen[start] && degree[start] > 0 {
            walk(start, &mut seen);
            loops += 1;
        }
    }
    (pairing, loops)
}

/// Exact division by the loop value -A^2 - A^-2.
fn divide_by_loop(p: &LaurentPolynomial) -> LaurentPolynomial {
    // -A^2 - A^-2 = -A^-2 (1 + A^4)
    let mut rest = p.clone();
    let mut quotient = LaurentPolynomial::zero();
    let top = p.max_exp().unwrap_or(0);
    while let Some(e) = rest.min_exp() {
        assert!(e + 4 <= top, "the bracket sum is divisible by the loop value");
        let c = rest.coeff(e);
        quotient.add_term(c, e);
        rest += &LaurentPolynomial::from_terms([(e, -c), (e + 4, -c)]);
    }
    -quotient.shift(2)
}

/// The plain state sum over all 2^n smoothings, kept as an independent
/// check on [`kauffman_bracket`].
pub fn kauffman_bracket_state_sum(d: &PlanarDiagram, cap: usize) -> Result<LaurentPolynomial, InvariantError> {
    let n = d.crossing_count();
    if n > cap {
        return Err(InvariantError::CapExceeded { crossings: n, cap });
    }
    if n == 0 {
        return Ok(LaurentPolynomial::one());
    }
    let labels = d.edge_labels();
    // for each crossing, the edge pairs joined by the A- and B-smoothings
    let pairs: Vec<[[usize; 2]; 4]> = d
        .crossings()
        .iter()
        .zip(&labels)
        .map(|(x, l)| {
            let e = |k: u8| l[((x.under_in + k) % 4) as usize];
            [[e(0), e(1)], [e(2), e(3)], [e(1), e(2)], [e(3), e(0)]]
        })
        .collect();
    let edges = 2 * n;
    let width = edges + 1;
    let states = 1u64 << n;
    let chunk = 1u64 << 12;
    let histogram = (0..states.div_ceil(chunk))
        .into_par_iter()
        .fold(
            || vec![0u64; (n + 1) * width],
            |mut hist, block| {
                let mut parent = vec![0usize; edges];
                for state in block * chunk..((block + 1) * chunk).min(states) {
                    for (i, p) in parent.iter_mut().enumerate() {
                        *p = i;
                    }
                    let mut loops = edges;
                    for (c, pr) in pairs.iter().enumerate() {
                        let b = (state >> c & 1) as usize;
                        for [u, v] in [pr[2 * b], pr[2 * b + 1]] {
                            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                            if ru != rv {
                                parent[ru] = rv;
                                loops -= 1;
                            }
                        }
                    }
                    let a_count = n - state.count_ones() as usize;
                    hist[a_count * width + loops] += 1;
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; (n + 1) * width],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let loop_value = loop_value();
    let mut loop_powers = vec![LaurentPolynomial::one()];
    for k in 1..width {
        let next = &loop_powers[k - 1] * &loop_value;
        loop_powers.push(next);
    }
    let mut out = LaurentPolynomial::zero();
    for a_count in 0..=n {
        for loops in 1..width {
            let count = histogram[a_count * width + loops];
            if count == 0 {
                continue;
            }
            let exp = a_count as i32 - (n - a_count) as i32;
            let term = &loop_powers[loops - 1] * &LaurentPolynomial::monomial(count as i64, exp);
            out += &term;
        }
    }
    Ok(out)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Jones polynomial with exponents in quarter-units of `t`.
pub fn jones(d: &PlanarDiagram) -> Result<LaurentPolynomial, InvariantError> {
    let bracket = kauffman_bracket(d)?;
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalised = &bracket.shift(-3 * w) * &LaurentPolynomial::monomial(sign, 0);
    // t = A^-4, so A^k = t^(-k/4)
    Ok(normalised.reciprocal())
}

/// Renders a quarter-unit Jones polynomial in `t`.
pub fn render_jones(p: &LaurentPolynomial) -> String {
    p.render("t", 4)
}

struct Goeritz {
    matrix: Vec<Vec<i64>>,
    correction: i32,
}

fn goeritz(d: &PlanarDiagram, shade_start_side: bool) -> Goeritz {
    let (face_of, faces) = d.face_map();
    // two-colour the faces across edges
    let mut colour = vec![None; faces];
    let start = face_of[0][d.start_dart().slot as usize];
    colour[start] = Some(true);
    let mut queue = VecDeque::from([start]);
    let mut neighbours = vec![Vec::new(); faces];
    for (c, x) in d.crossings().iter().enumerate() {
        for s in 0..4u8 {
            let back = x.link(s);
            neighbours[face_of[c][s as usize]].push(face_of[back.crossing][back.slot as usize]);
        }
    }
    while let Some(f) = queue.pop_front() {
        let here = colour[f].expect("queued faces are coloured");
        for &g in &neighbours[f] {
            match colour[g] {
                None => {
                    colour[g] = Some(!here);
                    queue.push_back(g);
                }
                Some(cg) => assert_ne!(cg, here, "faces of a knot diagram are two-colourable"),
            }
        }
    }
    let shaded: Vec<usize> = (0..faces)
        .filter(|&f| colour[f] == Some(shade_start_side))
        .collect();
    let mut index = vec![usize::MAX; faces];
    for (i, &f) in shaded.iter().enumerate() {
        index[f] = i;
    }
    let m = shaded.len();
    let mut g = vec![vec![0i64; m]; m];
    let mut correction = 0;
    for (c, x) in d.crossings().iter().enumerate() {
        let k = (0..2u8)
            .find(|&k| colour[face_of[c][k as usize]] == Some(shade_start_side))
            .expect("one corner pair is shaded");
        let a_corners = (k + 4 - x.under_in) % 2 == 1;
        let eta: i64 = if a_corners { -1 } else { 1 };
        // the oriented smoothing joins the A-corners at a positive crossing
        if (x.sign() > 0) != a_corners {
            correction += eta as i32;
        }
        let fi = index[face_of[c][k as usize]];
        let fj = index[face_of[c][k as usize + 2]];
        if fi != fj {
            g[fi][fj] -= eta;
            g[fj][fi] -= eta;
            g[fi][fi] += eta;
            g[fj][fj] += eta;
        }
    }
    let reduced: Vec<Vec<i64>> = g.iter().skip(1).map(|row| row[1..].to_vec()).collect();
    Goeritz {
        matrix: reduced,
        correction,
    }
}

fn goeritz_invariants(d: &PlanarDiagram, shade_start_side: bool) -> (u64, i32) {
    if d.is_empty() {
        return (1, 0);
    }
    let g = goeritz(d, shade_start_side);
    let (sig, det) = signature_and_det(&g.matrix);
    let det = det.abs().to_u64().expect("determinant fits in u64");
    (det, sig - g.correction)
}

/// Determinant and signature from both checkerboard colourings; they agree
/// for every knot diagram.
pub fn goeritz_both_colourings(d: &PlanarDiagram) -> [(u64, i32); 2] {
    [goeritz_invariants(d, true), goeritz_invariants(d, false)]
}

pub fn determinant(d: &PlanarDiagram) -> u64 {
    let out = goeritz_invariants(d, true);
    debug_assert_eq!(out, goeritz_invariants(d, false));
    out.0
}

pub fn signature(d: &PlanarDiagram) -> i32 {
    let out = goeritz_invariants(d, true);
    debug_assert_eq!(out, goeritz_invariants(d, false));
    out.1
}

/// |signature| / 2, a lower bound for the unknotting number.
pub fn murasugi_lower_bound(d: &PlanarDiagram) -> u32 {
    signature(d).unsigned_abs().div_ceil(2)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub determinant: u64,
    pub signature: i32,
    /// Exponents in quarter-units of `t`.
    pub jones: LaurentPolynomial,
}

impl Fingerprint {
    pub fn unknot() -> Self {
        Self {
            determinant: 1,
            signature: 0,
            jones: LaurentPolynomial::one(),
        }
    }

    pub fn mirror(&self) -> Self {
        Self {
            determinant: self.determinant,
            signature: -self.signature,
            jones: self.jones.reciprocal(),
        }
    }

    pub fn is_unknot(&self) -> bool {
        *self == Self::unknot()
    }

    /// Fingerprint of a connected sum.
    pub fn sum(&self, other: &Self) -> Self {
        Self {
            determinant: self.determinant * other.determinant,
            signature: self.signature + other.signature,
            jones: &self.jones * &other.jones,
        }
    }

    pub fn is_self_mirror(&self) -> bool {
        *self == self.mirror()
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "det={} sig={} jones={}",
            self.determinant,
            self.signature,
            render_jones(&self.jones)
        )
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({self})")
    }
}

pub fn fingerprint(d: &PlanarDiagram) -> Result<Fingerprint, InvariantError> {
    let jones = jones(d)?;
    Ok(Fingerprint {
        determinant: determinant(d),
        signature: signature(d),
        jones,
    })
}
