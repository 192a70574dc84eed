//! Laurent polynomials in one variable with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A Laurent polynomial `sum c_k x^k` with `i64` coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// coefficient-wise equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Substitutes `x -> 1/x`.
    pub fn reciprocal(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Substitutes `x -> x^k` (k may be negative).
    pub fn scale_exponents(&self, k: i32) -> Self {
        assert!(k != 0);
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e * k, c)).collect(),
        }
    }

    /// Returns `Some(q)` when every exponent is divisible by `k`,
    /// with `q` the polynomial in `x^k`.
    pub fn compress_exponents(&self, k: i32) -> Option<Self> {
        assert!(k > 0);
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(Self {
            terms: self.terms.iter().map(|(&e, &c)| (e / k, c)).collect(),
        })
    }

    pub fn shift(&self, by: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e + by, c)).collect(),
        }
    }

    /// Evaluates at `x = -1`.
    pub fn eval_minus_one(&self) -> i64 {
        self.terms
            .iter()
            .map(|(&e, &c)| if e.rem_euclid(2) == 0 { c } else { -c })
            .sum()
    }

    /// Evaluates at `x = 1`.
    pub fn eval_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Ascending-exponent rendering in the variable `var`, where a stored
    /// exponent `e` stands for `var^(e/denom)`.
    pub fn render(&self, var: &str, denom: i32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, &c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if c < 0 {
                out.push('-');
            } else if i > 0 {
                out.push('+');
            }
            if e == 0 {
                out.push_str(&mag.to_string());
                continue;
            }
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push_str(var);
            let g = gcd(e.unsigned_abs(), denom.unsigned_abs()) as i32;
            let (num, den) = (e / g, denom / g);
            match (num, den) {
                (1, 1) => {}
                (n, 1) => out.push_str(&format!("^{n}")),
                (n, d) => out.push_str(&format!("^({n}/{d})")),
            }
        }
        out
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x", 1))
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: Self) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(mut self, rhs: Self) -> LaurentPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&e, &c) in &rhs.terms {
            self.add_term(c, e);
        }
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: Self) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy() -> impl Strategy<Value = LaurentPolynomial> {
        prop::collection::vec((-6i32..6, -5i64..5), 0..6).prop_map(LaurentPolynomial::from_terms)
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = LaurentPolynomial::monomial(3, 2);
        p.add_term(-3, 2);
        assert!(p.is_zero());
        assert_eq!(p, LaurentPolynomial::zero());
    }

    #[test]
    fn renders_ascending() {
        let p = LaurentPolynomial::from_terms([(-4, -1), (-3, 1), (-1, 1)]);
        assert_eq!(p.render("t", 1), "-t^-4+t^-3+t^-1");
        let q = LaurentPolynomial::from_terms([(0, 1), (1, -2), (2, 3)]);
        assert_eq!(q.render("t", 1), "1-2t+3t^2");
        let h = LaurentPolynomial::from_terms([(2, 1), (-6, -1)]);
        assert_eq!(h.render("t", 4), "-t^(-3/2)+t^(1/2)");
        assert_eq!(LaurentPolynomial::zero().render("t", 1), "0");
    }

    #[test]
    fn bracket_loop_value() {
        // (-A^2 - A^-2)^2 = A^4 + 2 + A^-4
        let d = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
        assert_eq!(d.pow(2), LaurentPolynomial::from_terms([(4, 1), (0, 2), (-4, 1)]));
    }

    proptest! {
        #[test]
        fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).eval_minus_one(), a.eval_minus_one() * b.eval_minus_one());
            prop_assert_eq!((&a * &b).reciprocal(), &a.reciprocal() * &b.reciprocal());
            prop_assert!((&a - &a).is_zero());
        }
    }
}
