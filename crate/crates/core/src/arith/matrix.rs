//! Square matrices over arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::perm::Permutation;
use super::ArithError;

/// An `n × n` integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix { n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diag<T: Into<BigInt> + Clone>(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zero(n);
        for (i, v) in d.iter().enumerate() {
            m.entries[i * n + i] = v.clone().into();
        }
        m
    }

    /// Builds a matrix from row slices; every row must have length `rows.len()`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, ArithError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(ArithError::NotSquare { rows: n, cols: row.len() });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { n, entries })
    }

    /// Row-major construction from a flat vector of length `n * n`.
    pub fn from_flat(n: usize, entries: Vec<BigInt>) -> Result<Self, ArithError> {
        if entries.len() != n * n {
            return Err(ArithError::NotSquare { rows: n, cols: entries.len() / n.max(1) });
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    /// Entry as a machine integer, for use as an exponent.
    ///
    /// Exponents that do not fit in `i64` would make every polynomial
    /// computation infeasible long before this point, so overflow panics.
    pub fn exp(&self, i: usize, j: usize) -> i64 {
        self.get(i, j).to_i64().expect("matrix entry does not fit in i64")
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column_exps(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.exp(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn neg(&self) -> Self {
        IntMatrix { n: self.n, entries: self.entries.iter().map(|e| -e).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        let n = self.n;
        let mut m = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        m.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        IntMatrix { n: self.n, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v.div_floor(&prev);
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    /// `P_σ` with `p_ij = δ_{i, σ⁻¹(j)}`, so that `C·P_σ` moves column `σ⁻¹(j)` to slot `j`.
    pub fn permutation(sigma: &Permutation) -> Self {
        let n = sigma.len();
        let inv = sigma.inverse();
        let mut m = Self::zero(n);
        for j in 0..n {
            m.entries[inv.apply(j) * n + j] = BigInt::one();
        }
        m
    }

    /// `σ` with `self = P_σ`, if `self` is a permutation matrix.
    pub fn permutation_of(m: &Self) -> Option<Permutation> {
        let n = m.n;
        let mut inv = vec![usize::MAX; n];
        for j in 0..n {
            for i in 0..n {
                let v = m.get(i, j);
                if v.is_one() {
                    if inv[j] != usize::MAX {
                        return None;
                    }
                    inv[j] = i;
                } else if !v.is_zero() {
                    return None;
                }
            }
        }
        let inv = Permutation::from_images(inv).ok()?;
        Some(inv.inverse())
    }

    /// `σ` acting on columns: column `j` of the result is column `σ⁻¹(j)` of `self`.
    pub fn permute_columns(&self, sigma: &Permutation) -> Self {
        let n = self.n;
        let inv = sigma.inverse();
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = self.get(i, inv.apply(j)).clone();
            }
        }
        m
    }

    /// `σ` acting on both indices: `(σB)_ij = b_{σ⁻¹(i) σ⁻¹(j)}`.
    pub fn permute_both(&self, sigma: &Permutation) -> Self {
        let n = self.n;
        let inv = sigma.inverse();
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = self.get(inv.apply(i), inv.apply(j)).clone();
            }
        }
        m
    }

    /// Whether every column is entirely nonnegative or entirely nonpositive.
    pub fn column_sign_coherent(&self) -> bool {
        (0..self.n).all(|j| {
            let col = self.column(j);
            col.iter().all(|v| !v.is_negative()) || col.iter().all(|v| !v.is_positive())
        })
    }

    /// Index of the first column that is zero or mixes signs.
    pub fn first_incoherent_column(&self) -> Option<usize> {
        (0..self.n).find(|&j| {
            let col = self.column(j);
            let pos = col.iter().any(Signed::is_positive);
            let neg = col.iter().any(Signed::is_negative);
            (pos && neg) || (!pos && !neg)
        })
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_default()
    }

    /// Row-major `i64` rows; panics on entries that overflow.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.exp(i, j)).collect()).collect()
    }
}

/// `σ` with `a = b·P_σ`, when `b⁻¹a` is a permutation matrix.
///
/// Both inputs must be invertible. Because `b` is invertible its columns are
/// distinct, so `σ` (if any) is unique and found by column matching.
pub fn extract_sigma(a: &IntMatrix, b: &IntMatrix) -> Result<Option<Permutation>, ArithError> {
    if a.n() != b.n() {
        return Err(ArithError::DimensionMismatch { left: a.n(), right: b.n() });
    }
    if a.det().is_zero() || b.det().is_zero() {
        return Err(ArithError::Singular);
    }
    Ok(match_columns(a, b))
}

/// Column matching behind [`extract_sigma`], without the invertibility check.
pub fn match_columns(a: &IntMatrix, b: &IntMatrix) -> Option<Permutation> {
    let n = a.n();
    let b_cols: Vec<_> = (0..n).map(|j| b.column(j)).collect();
    let mut inv = Vec::with_capacity(n);
    for j in 0..n {
        let col = a.column(j);
        inv.push(b_cols.iter().position(|c| *c == col)?);
    }
    Permutation::from_images(inv).ok().map(|p| p.inverse())
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Integer JSON value that falls back to a decimal string outside `i64`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<JsonInt>> = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| v.to_i64().map_or_else(|| JsonInt::Big(v.to_string()), JsonInt::Small))
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<JsonInt>>::deserialize(d)?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for v in row {
                r.push(match v {
                    JsonInt::Small(x) => BigInt::from(x),
                    JsonInt::Big(s) => s.parse().map_err(serde::de::Error::custom)?,
                });
            }
            parsed.push(r);
        }
        IntMatrix::from_rows(&parsed).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(m(&[&[0, 1], &[-1, 0]]).det(), BigInt::from(1));
        assert_eq!(m(&[&[2, 3, 1], &[4, 1, 0], &[0, 5, 7]]).det(), BigInt::from(-50));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigInt::from(0));
        assert_eq!(m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).det(), BigInt::from(-1));
    }

    #[test]
    fn permutation_matrix_moves_columns() {
        let c = m(&[&[1, 2], &[3, 4]]);
        let s = Permutation::transposition(2, 0, 1);
        assert_eq!(c.mul(&IntMatrix::permutation(&s)), c.permute_columns(&s));
        let s3 = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let c3 = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(c3.mul(&IntMatrix::permutation(&s3)), c3.permute_columns(&s3));
        let p = IntMatrix::permutation(&s3);
        assert_eq!(p.transpose().mul(&c3).mul(&p), c3.permute_both(&s3));
    }

    #[test]
    fn extract_sigma_cases() {
        let b = m(&[&[1, 2], &[0, 1]]);
        assert!(extract_sigma(&b, &b).unwrap().unwrap().is_identity());
        let swapped = m(&[&[2, 1], &[1, 0]]);
        let s = extract_sigma(&swapped, &b).unwrap().unwrap();
        assert_eq!(s, Permutation::transposition(2, 0, 1));
        let other = m(&[&[1, 0], &[0, 1]]);
        assert!(extract_sigma(&other, &b).unwrap().is_none());
        assert!(extract_sigma(&m(&[&[1, 1], &[1, 1]]), &b).is_err());
    }

    #[test]
    fn json_round_trip_with_big_entries() {
        let mut a = IntMatrix::identity(2);
        a.set(0, 1, BigInt::from(10).pow(30));
        let s = serde_json::to_string(&a).unwrap();
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
    }
}
