use gordian::moves::{apply_move, find_moves, r1_plus_sites, r2_plus_sites, Move, MoveKind};
use gordian::{determinant, fingerprint, jones, signature, KnotTable, PlanarDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Crossing count change expected from each kind of move.
fn growth(kind: MoveKind) -> isize {
    match kind {
        MoveKind::R1Minus => -1,
        MoveKind::R2Minus => -2,
        MoveKind::R3 => 0,
        MoveKind::R1Plus => 1,
        MoveKind::R2Plus => 2,
    }
}

/// One random Reidemeister move, drawn uniformly by kind then by site.
/// Growth moves are only offered below `ceiling` crossings.
fn random_move<R: Rng>(d: &PlanarDiagram, ceiling: usize, rng: &mut R) -> Move {
    let found = find_moves(d);
    let mut pools: Vec<Vec<Move>> = [MoveKind::R1Minus, MoveKind::R2Minus, MoveKind::R3]
        .into_iter()
        .map(|k| found.iter().copied().filter(|m| m.kind() == k).collect())
        .collect();
    if d.crossing_count() + 2 <= ceiling {
        pools.push(r1_plus_sites(d));
        pools.push(r2_plus_sites(d));
    } else if d.crossing_count() < ceiling {
        pools.push(r1_plus_sites(d));
    }
    pools.retain(|p| !p.is_empty());
    let pool = &pools[rng.random_range(0..pools.len())];
    pool[rng.random_range(0..pool.len())]
}

/// Applies `steps` random moves, checking determinant and signature after
/// each and the full fingerprint every `check_every` moves.
pub fn walk(name: &str, d: &PlanarDiagram, steps: usize, seed: u64, check_every: usize) -> Vec<MoveKind> {
    let expected = fingerprint(d).unwrap();
    let ceiling = (d.crossing_count() + 4).min(19);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = d.clone();
    let mut kinds = Vec::new();
    for i in 1..=steps {
        let m = random_move(&d, ceiling, &mut rng);
        let next = apply_move(&d, &m).unwrap();
        assert!(next.is_planar(), "{name} step {i}: {m:?}");
        assert_eq!(
            next.crossing_count() as isize,
            d.crossing_count() as isize + growth(m.kind()),
            "{name} step {i}: {m:?}"
        );
        d = next;
        kinds.push(m.kind());
        // determinant and signature are cheap enough for every step
        assert_eq!(determinant(&d), expected.determinant, "{name} step {i}: {m:?}");
        assert_eq!(signature(&d), expected.signature, "{name} step {i}: {m:?}");
        if i % check_every == 0 || i == steps {
            assert_eq!(fingerprint(&d).unwrap(), expected, "{name} step {i}: {m:?}");
        }
    }
    kinds
}

/// Checks that Jones polynomials and determinants multiply and signatures
/// add over connected sums of every pair of table knots with at most ten
/// crossings. Returns the number of pairs.
pub fn check_table_sums() -> usize {
    let table = KnotTable::bundled();
    let small: Vec<_> = table.entries().iter().filter(|e| e.dt.len() <= 10).collect();
    let diagrams: Vec<PlanarDiagram> = small.iter().map(|e| e.diagram()).collect();
    let mut pairs = 0;
    for i in 0..small.len() {
        for j in i..small.len() {
            let (a, b) = (&small[i].fingerprint, &small[j].fingerprint);
            let s = diagrams[i].connected_sum(&diagrams[j]);
            let who = format!("{} # {}", small[i].name, small[j].name);
            assert_eq!(jones(&s).unwrap(), &a.jones * &b.jones, "{who}");
            assert_eq!(determinant(&s), a.determinant * b.determinant, "{who}");
            assert_eq!(signature(&s), a.signature + b.signature, "{who}");
            pairs += 1;
        }
    }
    assert!(small.len() >= 250);
    pairs
}

/// Walks every table knot through `steps` random moves. Returns how many
/// kinds of move were used.
pub fn walk_table(steps: usize) -> usize {
    let mut kinds = std::collections::HashSet::new();
    for (i, e) in KnotTable::bundled().entries().iter().enumerate() {
        kinds.extend(walk(&e.name, &e.diagram(), steps, i as u64, 10));
    }
    kinds.len()
}
