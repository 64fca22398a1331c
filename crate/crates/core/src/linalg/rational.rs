use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Matrix of exact fractions. Entries are kept in lowest terms with a
/// positive denominator (guaranteed by [`BigRational`] normalization).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(n));
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    float_to_rational(x)
}

/// Exact value of a finite double.
pub fn float_to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("{x} is not finite")))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_diagonal(diag: &[BigRational]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flatten().map(|&v| int(v)).collect())
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn column(values: &[BigRational]) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    /// Exact copy of a floating-point matrix (every double is a dyadic rational).
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let data = m
            .data()
            .iter()
            .map(|&x| float_to_rational(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m.rows(), m.cols(), data)
    }

    /// Nearest-double copy.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        DenseMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(rational_to_f64).collect(),
        )
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

    pub fn data(&self) -> &[BigRational] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// True if every off-diagonal entry is zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn matmul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                "shape mismatch in subtraction".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    /// `self - λI`.
    pub fn shift(&self, lambda: &BigRational) -> Result<RationalMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "shift of a non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - lambda;
            m.set(i, i, v);
        }
        Ok(m)
    }

    /// Exact inverse by Gauss-Jordan elimination. `None` when singular.
    pub fn inverse(&self) -> Result<Option<RationalMatrix>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut inv = Self::identity(n).row_vecs();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(None);
            };
            a.swap(c, p);
            inv.swap(c, p);
            let pivot = a[c][c].clone();
            for k in 0..n {
                a[c][k] /= &pivot;
                inv[c][k] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                    let t = &f * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        Ok(Some(Self::from_rows(inv)?))
    }

    /// Basis of `{x : self·x = 0}` from the reduced row echelon form.
    pub fn null_space(&self) -> Vec<Vec<BigRational>> {
        let (rref, pivots) = rref(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); self.cols];
                x[f] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = -rref[r][f].clone();
                }
                x
            })
            .collect()
    }

    /// Basis of `{y : yᵀ·self = 0}`.
    pub fn left_null_space(&self) -> Vec<Vec<BigRational>> {
        self.transpose().null_space()
    }

    /// Rows rescaled by the lcm of their denominators, giving an integer
    /// matrix with the same rank.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn rref(m: &RationalMatrix) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for x in &mut a[r][c..] {
            *x /= &pivot;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Exact rank over the rationals.
///
/// Rows are scaled to integers and reduced with fraction-free Bareiss
/// elimination; the pivot in each column is the candidate of largest
/// magnitude. Every division in the update is exact.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    let mut a = m.integer_rows();
    let rows = m.rows;
    let cols = m.cols;
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot_row = (rank..rows)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).then(j.cmp(&i)));
        let Some(p) = pivot_row else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for k in c + 1..cols {
                let v = &prow[c] * &row[k] - &lead * &prow[k];
                row[k] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize)]
struct RawRationalOut {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawRationalOut {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

/// `"num/den"` with the denominator omitted for integers.
pub fn format_rational(x: &BigRational) -> String {
    x.to_string()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Text(String),
    Int(i64),
    Float(f64),
}

#[derive(Deserialize)]
struct RawRationalIn {
    rows: usize,
    cols: usize,
    data: Vec<RawEntry>,
}

impl RawEntry {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            RawEntry::Text(s) => parse_rational(s),
            RawEntry::Int(v) => Ok(int(*v)),
            RawEntry::Float(x) => float_to_rational(*x),
        }
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRationalIn::deserialize(d)?;
        let data = raw
            .data
            .iter()
            .map(RawEntry::to_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RationalMatrix::new(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}
