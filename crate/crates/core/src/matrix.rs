//! Dense square matrices over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Reduces `rows` to reduced row-echelon form in place and returns the
/// pivot column of each nonzero row. Zero rows end up at the bottom.
///
/// The pivot in each column is the first row (from the top of the
/// unreduced block) with a nonzero entry there.
pub fn row_reduce(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of vectors of equal length.
pub fn vector_rank(vectors: &[Vec<Scalar>]) -> usize {
    let mut rows = vectors.to_vec();
    row_reduce(&mut rows).len()
}

/// Null space of a (possibly rectangular) system with `cols` unknowns.
pub fn nullspace(mut rows: Vec<Vec<Scalar>>, cols: usize, field: FieldSpec) -> Vec<Vec<Scalar>> {
    let pivots = row_reduce(&mut rows);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[r][free];
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    n: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

/// Wire form: `{"field": "q" | "fp:<p>", "n": <int>, "entries": [[<scalar>, ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixJson {
    field: FieldSpec,
    n: usize,
    entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Matrix> {
        if raw.entries.len() != raw.n || raw.entries.iter().any(|r| r.len() != raw.n) {
            return Err(Error::Parse(format!(
                "entries are not a {0}x{0} array",
                raw.n
            )));
        }
        let entries = raw
            .entries
            .iter()
            .flatten()
            .map(|s| raw.field.parse_scalar(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            n: raw.n,
            field: raw.field,
            entries,
        })
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> MatrixJson {
        MatrixJson {
            field: m.field,
            n: m.n,
            entries: (0..m.n)
                .map(|i| m.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

impl Matrix {
    pub fn zero(n: usize, field: FieldSpec) -> Matrix {
        Matrix {
            n,
            field,
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Matrix {
        let mut m = Matrix::zero(n, field);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Matrix unit with a one at `(i, j)`, zero-based.
    pub fn unit(n: usize, i: usize, j: usize, field: FieldSpec) -> Matrix {
        let mut m = Matrix::zero(n, field);
        m.entries[i * n + j] = field.one();
        m
    }

    pub fn diag(field: FieldSpec, d: &[Scalar]) -> Result<Matrix> {
        let n = d.len();
        let mut m = Matrix::zero(n, field);
        for (i, x) in d.iter().enumerate() {
            if x.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    x.field().to_string(),
                ));
            }
            m.entries[i * n + i] = x.clone();
        }
        Ok(m)
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(
                        field.to_string(),
                        x.field().to_string(),
                    ));
                }
                entries.push(x);
            }
        }
        Ok(Matrix { n, field, entries })
    }

    /// Integer entries, reduced into `field`. Panics if `rows` is not square.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            field,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| field.from_i64(v)))
                .collect(),
        }
    }

    /// Inverse of [`Matrix::coords`].
    pub fn from_coords(n: usize, field: FieldSpec, coords: Vec<Scalar>) -> Matrix {
        assert_eq!(coords.len(), n * n);
        Matrix {
            n,
            field,
            entries: coords,
        }
    }

    /// Builds the matrix whose columns are `cols`.
    pub fn from_columns(field: FieldSpec, cols: &[Vec<Scalar>]) -> Result<Matrix> {
        let n = cols.len();
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Matrix::from_rows(field, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major coordinates in the basis of matrix units.
    pub fn coords(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries
            .chunks(self.n.max(1))
            .map(<[Scalar]>::to_vec)
            .collect()
    }

    /// Image under the reduction `Z_(p) -> F_p`. `None` if some denominator
    /// is divisible by `p` or the matrix is not over `Q`.
    pub fn reduce_mod(&self, target: FieldSpec) -> Option<Matrix> {
        if target.is_rationals() || !self.field.is_rationals() {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .map(|x| match x {
                Scalar::Rational(r) => {
                    let den = target.from_bigint(r.denom());
                    target.from_bigint(r.numer()).try_div(&den).ok()
                }
                Scalar::Residue { .. } => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            n: self.n,
            field: target,
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().is_zero()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        Matrix {
            n,
            field: self.field,
            entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    fn check_compatible(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self - other)
    }

    /// Lie bracket `ab - ba`.
    pub fn bracket(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(&(self * other) - &(other * self))
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.n, self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        vector_rank(&self.rows())
    }

    /// Basis of the null space `{v : self * v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        nullspace(self.rows(), self.n, self.field)
    }

    /// `a^n = 0`, checked by repeated multiplication.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        for _ in 1..self.n {
            if p.is_zero() {
                return true;
            }
            p = &p * self;
        }
        p.is_zero()
    }

    pub fn invert(&self) -> Result<Matrix> {
        let n = self.n;
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| {
                    if i == j {
                        self.field.one()
                    } else {
                        self.field.zero()
                    }
                }));
                r
            })
            .collect();
        let pivots = row_reduce(&mut rows);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(Matrix {
            n,
            field: self.field,
            entries: rows
                .into_iter()
                .flat_map(|r| r.into_iter().skip(n))
                .collect(),
        })
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.n == rhs.n && self.field == rhs.field,
            "incompatible matrices"
        );
        let n = self.n;
        let mut out = vec![self.field.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out[i * n + j] = &out[i * n + j] + &(a * b);
                    }
                }
            }
        }
        Matrix {
            n,
            field: self.field,
            entries: out,
        }
    }
}

macro_rules! entrywise {
    ($trait:ident, $method:ident) => {
        impl $trait<&Matrix> for &Matrix {
            type Output = Matrix;

            fn $method(self, rhs: &Matrix) -> Matrix {
                assert!(
                    self.n == rhs.n && self.field == rhs.field,
                    "incompatible matrices"
                );
                Matrix {
                    n: self.n,
                    field: self.field,
                    entries: self
                        .entries
                        .iter()
                        .zip(&rhs.entries)
                        .map(|(a, b)| a.$method(b))
                        .collect(),
                }
            }
        }
    };
}

entrywise!(Add, add);
entrywise!(Sub, sub);

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let line: Vec<String> = (0..self.n)
                .map(|j| format!("{:>width$}", cells[i * self.n + j]))
                .collect();
            writeln!(f, "[ {} ]", line.join(" "))?;
        }
        Ok(())
    }
}

/// An invertible `c` together with its inverse; conjugation sends `a` to `c a c^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityWitness {
    pub c: Matrix,
    pub c_inv: Matrix,
}

impl SimilarityWitness {
    pub fn new(c: Matrix) -> Result<Self> {
        let c_inv = c.invert()?;
        Ok(SimilarityWitness { c, c_inv })
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        SimilarityWitness {
            c: Matrix::identity(n, field),
            c_inv: Matrix::identity(n, field),
        }
    }

    pub fn n(&self) -> usize {
        self.c.n
    }

    /// `c * c_inv == 1`.
    pub fn is_valid(&self) -> bool {
        self.c.check_compatible(&self.c_inv).is_ok()
            && &self.c * &self.c_inv == Matrix::identity(self.c.n, self.c.field)
    }

    pub fn inverse(&self) -> SimilarityWitness {
        SimilarityWitness {
            c: self.c_inv.clone(),
            c_inv: self.c.clone(),
        }
    }

    /// The witness that applies `inner` first and then `self`.
    pub fn compose(&self, inner: &SimilarityWitness) -> Result<SimilarityWitness> {
        Ok(SimilarityWitness {
            c: self.c.try_mul(&inner.c)?,
            c_inv: inner.c_inv.try_mul(&self.c_inv)?,
        })
    }

    pub fn conjugate(&self, a: &Matrix) -> Result<Matrix> {
        self.c.try_mul(a)?.try_mul(&self.c_inv)
    }
}
