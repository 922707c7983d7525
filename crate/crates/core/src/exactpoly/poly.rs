use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::{Complex, Rational};

use super::monomial::{Monomial, MonomialOrder};
use super::rational::parse_rational;
use super::PolyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse multivariate polynomial over ℚ.
///
/// Terms live in a map keyed by exponent vector; zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::from(1))
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var_power(nvars, var, 1), Rational::from(1));
        p
    }

    pub fn monomial(mon: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(mon.nvars());
        p.add_term(mon, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// Parses expressions such as `3*x^2 - x*y/2 + (y - 1)^2` over the
    /// given variable names.
    pub fn parse(text: &str, names: &[&str]) -> Result<Self, PolyError> {
        PolyParser { src: text.as_bytes(), pos: 0, names, text }.parse()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    /// Variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|m| m.exponent(v) > 0))
            .collect()
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.clone().abs()).max().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), Rational::from(k * c))).collect(),
        }
    }

    pub fn mul_monomial(&self, mon: &Monomial, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.mul(mon), Rational::from(k * c))).collect(),
        }
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, lc)) => {
                let inv = Rational::from(lc.recip_ref());
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn try_arith(&self, other: &MultiPoly, op: ArithOp) -> Result<MultiPoly, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(match op {
            ArithOp::Add => {
                let mut out = self.clone();
                for (m, c) in &other.terms {
                    out.add_term(m.clone(), c.clone());
                }
                out
            }
            ArithOp::Sub => {
                let mut out = self.clone();
                for (m, c) in &other.terms {
                    out.add_term(m.clone(), Rational::from(-c));
                }
                out
            }
            ArithOp::Mul => {
                let mut out = MultiPoly::zero(self.nvars);
                for (ma, ca) in &self.terms {
                    for (mb, cb) in &other.terms {
                        out.add_term(ma.mul(mb), Rational::from(ca * cb));
                    }
                }
                out
            }
        })
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn differentiate(&self, var: usize) -> Result<MultiPoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange { var, nvars: self.nvars });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.exps_mut()[var] = e - 1;
            out.add_term(dm, Rational::from(c * e));
        }
        Ok(out)
    }

    fn check_point_len(&self, len: usize) -> Result<(), PolyError> {
        if len != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, got: len });
        }
        Ok(())
    }

    fn max_exponents(&self) -> Vec<u16> {
        let mut out = vec![0u16; self.nvars];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(m.exponents()) {
                *o = (*o).max(e);
            }
        }
        out
    }

    /// Exact value at a rational point.
    pub fn evaluate_rational(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_point_len(point.len())?;
        let powers = power_table(point, &self.max_exponents(), Rational::from(1), |a, b| {
            Rational::from(a * b)
        });
        let mut acc = Rational::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Double-precision value at a complex point; coefficients are rounded
    /// to the nearest double as they are used.
    pub fn evaluate_complex(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        self.check_point_len(point.len())?;
        let powers = power_table(point, &self.max_exponents(), Complex64::new(1.0, 0.0), |a, b| a * b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64(), 0.0);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= powers[v][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value at a multi-precision complex point, computed at `prec` bits
    /// from the exact coefficients.
    pub fn evaluate_mp(&self, point: &[Complex], prec: u32) -> Result<Complex, PolyError> {
        self.check_point_len(point.len())?;
        let one = Complex::with_val(prec, 1);
        let powers = power_table(point, &self.max_exponents(), one, |a, b| {
            Complex::with_val(prec, a * b)
        });
        let mut acc = Complex::new(prec);
        for (m, c) in &self.terms {
            let mut t = Complex::with_val(prec, c);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Dense coefficients (constant term first) if the polynomial involves
    /// no variable other than `var`.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<Rational>> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Rational::new(); deg + 1];
        for (m, c) in &self.terms {
            if m.exponents().iter().enumerate().any(|(v, &e)| v != var && e > 0) {
                return None;
            }
            out[m.exponent(var) as usize] = c.clone();
        }
        Some(out)
    }

    /// Coefficients in `var`: `self = Σ_k coeff_k · var^k`, each `coeff_k`
    /// free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(var) as usize;
            let mut rest = m.clone();
            rest.exps_mut()[var] = 0;
            out[k].add_term(rest, c.clone());
        }
        out
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names, order: None }
    }

    pub fn display_ordered<'a>(
        &'a self,
        names: &'a [String],
        order: &'a MonomialOrder,
    ) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names, order: Some(order) }
    }
}

fn power_table<T: Clone>(point: &[T], max_exp: &[u16], one: T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    point
        .iter()
        .zip(max_exp)
        .map(|(x, &e)| {
            let mut row = Vec::with_capacity(e as usize + 1);
            row.push(one.clone());
            for k in 1..=e as usize {
                let next = mul(&row[k - 1], x);
                row.push(next);
            }
            row
        })
        .collect()
}

pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: &'a [String],
    order: Option<&'a MonomialOrder>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<(&Monomial, &Rational)> = match self.order {
            Some(o) => self.poly.sorted_terms(o),
            None => self.poly.terms.iter().rev().collect(),
        };
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = *c < 0;
            let abs = c.clone().abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{}", m.display_with(self.names))?;
            } else {
                write!(f, "{abs}*{}", m.display_with(self.names))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let shown = PolyDisplay { poly: self, names: &names, order: None };
        write!(f, "{shown}")
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.try_arith(rhs, $op).expect("polynomial arity mismatch")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, ArithOp::Add);
impl_binop!(Sub, sub, ArithOp::Sub);
impl_binop!(Mul, mul, ArithOp::Mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
    text: &'a str,
}

impl PolyParser<'_> {
    fn err(&self) -> PolyError {
        PolyError::Parse(format!("{} (at byte {})", self.text, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<MultiPoly, PolyError> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err());
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let n = self.names.len();
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match d.univariate_coeffs(0) {
                        Some(c) if c.len() == 1 && c[0] != 0 => c[0].clone(),
                        _ => return Err(self.err()),
                    };
                    acc = acc.scale(&Rational::from(c.recip_ref()));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = self.text[start..self.pos].parse().map_err(|_| self.err())?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let c = parse_rational(&self.text[start..self.pos])?;
                Ok(MultiPoly::constant(n, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = &self.text[start..self.pos];
                let var = self.names.iter().position(|&s| s == ident).ok_or_else(|| self.err())?;
                Ok(MultiPoly::var(n, var))
            }
            _ => Err(self.err()),
        }
    }
}
