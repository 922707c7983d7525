use std::collections::HashMap;

use rug::Rational;

use super::poly::MultiPoly;
use super::PolyError;

/// Dense matrix of polynomials sharing one variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        nvars: usize,
        mut f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "empty polynomial matrix");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.nvars(), nvars, "matrix entry arity mismatch");
                entries.push(e);
            }
        }
        PolyMatrix { rows, cols, nvars, entries }
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Result<Self, PolyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(PolyError::Shape("rows must be nonempty and of equal length".into()));
        }
        if rows.iter().flatten().any(|e| e.nvars() != nvars) {
            return Err(PolyError::Shape("entries must share the variable count".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, nvars, entries: rows.into_iter().flatten().collect() })
    }

    /// Lifts a rational matrix to constant polynomials.
    pub fn from_rationals(nvars: usize, rows: &[Vec<Rational>]) -> Self {
        Self::from_fn(rows.len(), rows[0].len(), nvars, |i, j| {
            MultiPoly::constant(nvars, rows[i][j].clone())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::from_fn(self.cols, self.rows, self.nvars, |i, j| self.get(j, i).clone())
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(PolyError::Shape(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, self.nvars, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.cols != other.rows {
            return Err(PolyError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, self.nvars, |i, j| {
            let mut acc = MultiPoly::zero(self.nvars);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    /// Exact determinant by Laplace expansion along successive rows,
    /// memoizing the minors keyed by the set of remaining columns.
    pub fn det(&self) -> Result<MultiPoly, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows > 16 {
            return Err(PolyError::Shape("determinant supports at most 16 rows".into()));
        }
        let n = self.rows;
        let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
        Ok(self.minor(0, (1u32 << n) - 1, &mut memo))
    }

    // Determinant of rows `row..n` restricted to the columns in `mask`.
    fn minor(&self, row: usize, mask: u32, memo: &mut HashMap<u32, MultiPoly>) -> MultiPoly {
        if mask == 0 {
            return MultiPoly::one(self.nvars);
        }
        if let Some(m) = memo.get(&mask) {
            return m.clone();
        }
        let mut acc = MultiPoly::zero(self.nvars);
        let mut sign_positive = true;
        for col in 0..self.cols {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = self.get(row, col);
            if !entry.is_zero() {
                let sub = self.minor(row + 1, mask & !(1 << col), memo);
                if !sub.is_zero() {
                    let prod = entry * &sub;
                    acc = if sign_positive { &acc + &prod } else { &acc - &prod };
                }
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}
