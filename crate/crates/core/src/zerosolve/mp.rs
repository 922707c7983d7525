//! Multi-precision complex helpers.

use num_complex::Complex64;
use rug::{Complex, Float};

pub(crate) fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub(crate) fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// `2^-bits`
pub(crate) fn eps(prec: u32, bits: u32) -> Float {
    Float::with_val(prec, 1) >> bits
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting;
/// `None` when a pivot vanishes.
pub(crate) fn solve_linear(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>) -> Option<Vec<Complex>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| abs(&a[i][col]).partial_cmp(&abs(&a[j][col])).expect("finite"))?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = Complex::with_val(a[row][col].prec().0, &a[row][col] / &a[col][col]);
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = Complex::with_val(f.prec().0, &f * &a[col][k]);
                a[row][k] -= t;
            }
            let t = Complex::with_val(f.prec().0, &f * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = b.clone();
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            let t = Complex::with_val(acc.prec().0, &a[row][k] * &x[k]);
            acc -= t;
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}
