//! Exact symmetric elimination over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Signature and determinant of a symmetric integer matrix.
pub(crate) fn signature_and_det(m: &[Vec<i64>]) -> (i32, BigInt) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect();
    let mut sig = 0;
    let mut det = BigRational::from_integer(1.into());
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(j, k);
                for row in a.iter_mut() {
                    row.swap(j, k);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // congruence by (e_k + e_j) keeps the determinant
                for i in 0..n {
                    let v = a[j][i].clone();
                    a[k][i] += v;
                }
                for i in 0..n {
                    let v = a[i][j].clone();
                    a[i][k] += v;
                }
            } else {
                det = BigRational::zero();
                continue;
            }
        }
        let p = a[k][k].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        det *= &p;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            a[i][k] = BigRational::zero();
        }
        for j in k + 1..n {
            a[k][j] = BigRational::zero();
        }
    }
    (sig, det.to_integer())
}
