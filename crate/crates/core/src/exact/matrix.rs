use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::{Polynomial, Rational, Vector};
use crate::error::{Error, Result};

/// Dense `dim × dim` matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl SquareMatrix {
    pub fn zero(dim: usize) -> Self {
        SquareMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Malformed("matrix has no rows".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row,
                    len: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(SquareMatrix { dim, entries })
    }

    /// Builds a matrix from integer rows scaled by `scale`.
    pub fn from_i64_rows(rows: &[&[i64]], scale: &Rational) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| &Rational::from(x) * scale).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { dim, entries }
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zero(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.first_antisymmetry_violation().is_none()
    }

    /// First `(i, j)` with `i <= j` where `a[i][j] != -a[j][i]`.
    pub fn first_antisymmetry_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in i..self.dim {
                if *self.get(i, j) != -self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Exact product; zero entries of `self` are skipped, which keeps sparse
    /// generator matrices cheap.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        if let Some(out) = self.integer_mat_mul(other) {
            return Ok(out);
        }
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(D·A, D)` with `D` the lcm of all denominators, or `None` if a
    /// scaled entry does not fit in `i64`.
    fn integer_form(&self) -> Option<(Vec<i128>, BigInt)> {
        let mut d = BigInt::from(1);
        for x in &self.entries {
            if !x.is_integer() {
                d = d.lcm(x.denom());
            }
        }
        let entries = self
            .entries
            .iter()
            .map(|x| {
                let scaled = if x.is_integer() {
                    x.numer() * &d
                } else {
                    x.numer() * (&d / x.denom())
                };
                i64::try_from(&scaled).ok().map(i128::from)
            })
            .collect::<Option<_>>()?;
        Some((entries, d))
    }

    /// Product through [`Self::integer_form`] in checked `i128`; `None` on
    /// overflow.
    fn integer_mat_mul(&self, other: &Self) -> Option<Self> {
        let n = self.dim;
        let (a, da) = self.integer_form()?;
        let (b, db) = other.integer_form()?;
        let mut acc = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = b[k * n + j];
                    if y != 0 {
                        acc[i * n + j] = acc[i * n + j].checked_add(x.checked_mul(y)?)?;
                    }
                }
            }
        }
        let d = da * db;
        let entries = acc
            .into_iter()
            .map(|v| {
                if v == 0 {
                    Rational::zero()
                } else {
                    Rational::from(BigRational::new(BigInt::from(v), d.clone()))
                }
            })
            .collect();
        Some(SquareMatrix { dim: n, entries })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self^k` by repeated squaring; `self^0 = I`.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim).map(|i| super::dot(self.row(i), v)).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> Rational {
        let n = self.dim;
        let mut a = self.rows();
        let mut sign_negative = false;
        let mut prev = Rational::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign_negative = !sign_negative;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = &v / &prev;
                }
                a[i][k] = Rational::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign_negative {
            -d
        } else {
            d
        }
    }

    /// `det(self - x·I)` via the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Polynomial {
        let n = self.dim;
        // Monic det(xI - A) = x^n + c[n-1] x^(n-1) + ... + c[0].
        let mut c = self
            .integer_char_poly()
            .unwrap_or_else(|| self.rational_char_poly());
        if n % 2 == 1 {
            c = c.into_iter().map(|x| -x).collect();
        }
        Polynomial::new(c)
    }

    /// Faddeev-LeVerrier: `M_k = A M_(k-1) + c[n-k+1] I`,
    /// `c[n-k] = -Tr(A M_k) / k`.
    fn rational_char_poly(&self) -> Vec<Rational> {
        let n = self.dim;
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        let mut am = Self::zero(n);
        for k in 1..=n {
            let mut m = am;
            for i in 0..n {
                m.entries[i * n + i] += &c[n - k + 1];
            }
            am = self * &m;
            c[n - k] = -(&am.trace() / &Rational::from(k as i64));
        }
        c
    }

    /// Same recursion on `D·A` in checked `i128`, where `D` clears all
    /// denominators; the divisions by `k` are exact for integer matrices.
    /// `None` on overflow.
    fn integer_char_poly(&self) -> Option<Vec<Rational>> {
        let n = self.dim;
        let (b, d) = self.integer_form()?;
        let scale = Rational::from(BigRational::from_integer(d));
        let mut c = vec![0i128; n + 1];
        c[n] = 1;
        let mut am = vec![0i128; n * n];
        for k in 1..=n {
            let mut m = am;
            for i in 0..n {
                m[i * n + i] = m[i * n + i].checked_add(c[n - k + 1])?;
            }
            am = vec![0i128; n * n];
            for i in 0..n {
                for l in 0..n {
                    let x = b[i * n + l];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let t = x.checked_mul(m[l * n + j])?;
                        am[i * n + j] = am[i * n + j].checked_add(t)?;
                    }
                }
            }
            let mut tr = 0i128;
            for i in 0..n {
                tr = tr.checked_add(am[i * n + i])?;
            }
            c[n - k] = -(tr / k as i128);
        }
        // Coefficients of D·A relate to those of A by c_j(A) = c_j(DA) / D^(n-j).
        Some(
            c.into_iter()
                .enumerate()
                .map(|(j, cj)| {
                    &Rational::from(BigRational::from_integer(cj.into()))
                        / &scale.pow((n - j) as u32)
                })
                .collect(),
        )
    }

    /// Basis of the right null space `{v : self·v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        null_space(&self.rows(), self.dim)
    }

    pub fn rank(&self) -> usize {
        rref(&self.rows(), self.dim).pivots.len()
    }
}

/// Reduced row echelon form of a list of rows.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Nonzero rows of the reduced form.
    pub rows: Vec<Vector>,
    /// Pivot column of each row in `rows`.
    pub pivots: Vec<usize>,
}

pub fn rref(rows: &[Vector], ncols: usize) -> Rref {
    let mut a: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip().expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Rref { rows: a, pivots }
}

/// Null space of the `rows.len() × ncols` matrix given by `rows`; one basis
/// vector per free column, with a 1 in that column and 0 in the other free
/// columns.
pub fn null_space(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let reduced = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !reduced.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (row, &pc) in reduced.rows.iter().zip(&reduced.pivots) {
                v[pc] = -&row[fc];
            }
            v
        })
        .collect()
}

/// Solution set `particular + span(directions)` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub directions: Vec<Vector>,
}

/// Solves `rows · x = rhs` exactly; `None` if the system is inconsistent.
pub fn solve_affine(rows: &[Vector], rhs: &[Rational], ncols: usize) -> Option<AffineSolution> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
    let augmented: Vec<Vector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let reduced = rref(&augmented, ncols + 1);
    if reduced.pivots.contains(&ncols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (row, &pc) in reduced.rows.iter().zip(&reduced.pivots) {
        particular[pc] = row[ncols].clone();
    }
    Some(AffineSolution {
        particular,
        directions: null_space(rows, ncols),
    })
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    /// Panics on dimension mismatch; use [`SquareMatrix::mat_mul`] otherwise.
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.mat_mul(rhs).expect("matrix dimensions agree")
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.checked_add(rhs).expect("matrix dimensions agree")
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.checked_sub(rhs).expect("matrix dimensions agree")
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(&Rational::from(-1))
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}) [", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        SquareMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
