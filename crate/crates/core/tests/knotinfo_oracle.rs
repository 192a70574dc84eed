//! Golden comparison against published knot-table invariants.

use gordian::invariants::goeritz_both_colourings;
use gordian::{determinant, dt_to_diagram, emit_dt, fingerprint, jones, parse_dt, signature, LaurentPolynomial};

struct Row {
    name: String,
    dt: String,
    jones: LaurentPolynomial,
    signature: i32,
    determinant: u64,
}

/// Parses e.g. `t^(-2)-t^(-1)+ 1-3*t+ t^2` into quarter-unit exponents.
fn parse_table_jones(text: &str) -> LaurentPolynomial {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('(') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut p = LaurentPolynomial::zero();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.trim_start_matches('+')),
        };
        let (coeff, var) = match body.split_once('*') {
            Some((c, v)) => (c.parse::<i64>().unwrap(), v),
            None if body.starts_with('t') => (1, body),
            None => (body.parse::<i64>().unwrap(), ""),
        };
        let exp = if var.is_empty() {
            0
        } else if var == "t" {
            1
        } else {
            let e = var.strip_prefix("t^").unwrap();
            e.trim_start_matches('(').trim_end_matches(')').parse::<i32>().unwrap()
        };
        p.add_term(sign * coeff, 4 * exp);
    }
    p
}

fn rows() -> Vec<Row> {
    include_str!("data/knotinfo_invariants.csv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(';').collect();
            Row {
                name: f[0].to_string(),
                dt: f[1].to_string(),
                jones: parse_table_jones(f[2]),
                signature: f[3].parse().unwrap(),
                determinant: f[4].parse().unwrap(),
            }
        })
        .collect()
}

#[test]
fn table_jones_parser() {
    let p = parse_table_jones("t^(-2)-t^(-1)+ 1-3*t+ t^2");
    assert_eq!(p, LaurentPolynomial::from_terms([(-8, 1), (-4, -1), (0, 1), (4, -3), (8, 1)]));
}

#[test]
fn matches_published_invariants() {
    let rows = rows();
    assert_eq!(rows.len(), 250);
    let mut failures = Vec::new();
    for r in &rows {
        let d = dt_to_diagram(&parse_dt(&r.dt).unwrap()).unwrap();
        let got = (jones(&d).unwrap(), signature(&d), determinant(&d));
        if got != (r.jones.clone(), r.signature, r.determinant) {
            failures.push(format!("{}: got {:?}", r.name, got));
        }
    }
    assert!(failures.is_empty(), "{} mismatches:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn both_colourings_agree() {
    for r in rows() {
        let d = dt_to_diagram(&parse_dt(&r.dt).unwrap()).unwrap();
        let [a, b] = goeritz_both_colourings(&d);
        assert_eq!(a, b, "{}", r.name);
        let m = d.mirror();
        let [a, b] = goeritz_both_colourings(&m);
        assert_eq!(a, b, "mirror {}", r.name);
    }
}

#[test]
fn determinant_is_jones_at_minus_one() {
    for r in rows() {
        let d = dt_to_diagram(&parse_dt(&r.dt).unwrap()).unwrap();
        let f = fingerprint(&d).unwrap();
        // quarter exponents are multiples of 4 for knots
        let v = f.jones.compress_exponents(4).expect("integral exponents");
        assert_eq!(v.eval_minus_one().unsigned_abs(), f.determinant, "{}", r.name);
        assert_eq!(f.signature % 2, 0);
    }
}

#[test]
fn dt_round_trip_preserves_fingerprint() {
    for r in rows() {
        let code = parse_dt(&r.dt).unwrap();
        let d = dt_to_diagram(&code).unwrap();
        let again = dt_to_diagram(&emit_dt(&d).unwrap()).unwrap();
        assert_eq!(fingerprint(&again).unwrap(), fingerprint(&d).unwrap(), "{}", r.name);
        assert_eq!(parse_dt(&code.to_string()).unwrap(), code);
    }
}

#[test]
fn bundled_table_matches_published_invariants() {
    let table = gordian::KnotTable::bundled();
    let mut checked = 0;
    for r in rows() {
        let e = table.get(&r.name).unwrap_or_else(|| panic!("{} missing from table", r.name));
        let f = &e.fingerprint;
        assert_eq!((&f.jones, f.signature, f.determinant), (&r.jones, r.signature, r.determinant), "{}", r.name);
        checked += 1;
    }
    assert_eq!(checked, 250);
}
