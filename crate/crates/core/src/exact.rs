//! Exact Gaussian-rational scalars and dense matrices.
//!
//! Everything defined over a finite groupoid (cocycles, bundles, invariant
//! sections, convolution kernels) is computed with these types so that
//! identities can be compared with `==` rather than a tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rational number with `i64` numerator and denominator.
pub type Rational = Ratio<i64>;

/// Gaussian rational `a + b i` with `a, b` rational.
pub type Exact = Complex<Rational>;

pub fn exact(re: i64) -> Exact {
    Complex::new(Ratio::from_integer(re), Ratio::zero())
}

pub fn exact_complex(re: i64, im: i64) -> Exact {
    Complex::new(Ratio::from_integer(re), Ratio::from_integer(im))
}

pub fn exact_ratio(num: i64, den: i64) -> Exact {
    Complex::new(Ratio::new(num, den), Ratio::zero())
}

pub fn to_c64(z: &Exact) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn exact_inv(z: &Exact) -> Option<Exact> {
    let norm = z.re * z.re + z.im * z.im;
    if norm.is_zero() {
        return None;
    }
    Some(Complex::new(z.re / norm, -z.im / norm))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapters that write rationals as `"p/q"` strings.
pub mod frac_serde {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Wire form of an [`ExactMatrix`]: rows of `[re, im]` rational strings.
#[derive(Serialize, Deserialize)]
struct MatrixRows {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<[String; 2]>>,
}

impl From<ExactMatrix> for MatrixRows {
    fn from(m: ExactMatrix) -> Self {
        let entries = (0..m.rows)
            .map(|r| {
                m.row(r)
                    .iter()
                    .map(|z| [format_rational(&z.re), format_rational(&z.im)])
                    .collect()
            })
            .collect();
        Self {
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}

impl TryFrom<MatrixRows> for ExactMatrix {
    type Error = Error;
    fn try_from(w: MatrixRows) -> Result<Self> {
        let mut data = Vec::with_capacity(w.rows * w.cols);
        if w.entries.len() != w.rows {
            return Err(Error::Shape("row count disagrees with entries".into()));
        }
        for row in &w.entries {
            if row.len() != w.cols {
                return Err(Error::Shape("column count disagrees with entries".into()));
            }
            for [re, im] in row {
                data.push(Complex::new(parse_rational(re)?, parse_rational(im)?));
            }
        }
        Ok(Self {
            rows: w.rows,
            cols: w.cols,
            data,
        })
    }
}

/// Dense row-major matrix over [`Exact`].
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MatrixRows", try_from = "MatrixRows")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Exact>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                let z = &self[(r, c)];
                if z.im.is_zero() {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}+{}i", z.re, z.im)?;
                }
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Exact;
    fn index(&self, (r, c): (usize, usize)) -> &Exact {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Exact {
        &mut self.data[r * self.cols + c]
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Exact::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Exact::one();
        }
        m
    }

    pub fn scalar(z: Exact) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    pub fn from_rows(rows: &[Vec<Exact>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<Exact>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| exact(v)).collect())
            .collect();
        Self::from_rows(&data).expect("integer rows must be rectangular")
    }

    pub fn column(v: Vec<Exact>) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Exact] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Exact] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Exact>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, z: &Exact) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * z).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for z in &mut t.data {
            *z = z.conj();
        }
        t
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = exact_inv(&self[(row, col)]).expect("pivot is nonzero");
            for c in 0..self.cols {
                self[(row, c)] = self[(row, c)] * inv;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self[(r, col)];
                if factor.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let v = self[(row, c)];
                    self[(r, c)] = self[(r, c)] - factor * v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space `{v : A v = 0}`, one column vector each.
    pub fn nullspace(&self) -> Vec<Vec<Exact>> {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Exact::zero(); self.cols];
                v[f] = Exact::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)];
            }
            aug[(r, n + r)] = Exact::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = aug[(r, n + c)];
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn mul_vec(&self, v: &[Exact]) -> Vec<Exact> {
        assert_eq!(v.len(), self.cols, "vector length must match columns");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Exact::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn to_complex(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |r, c| to_c64(&self[(r, c)]))
    }

    /// Largest absolute value of a real or imaginary part; used for diagnostics.
    pub fn max_abs_part(&self) -> Rational {
        self.data
            .iter()
            .flat_map(|z| [z.re.abs(), z.im.abs()])
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}
