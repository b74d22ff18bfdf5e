//! Dense vectors and matrices over GF(2), packed 64 entries per word.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector from 0/1 entries; any other value is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self, AlgebraError> {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.set(i, true),
                other => return Err(AlgebraError::NotBinary(other as i64)),
            }
        }
        Ok(v)
    }

    /// Coordinate `i` is bit `i` of `value`. Requires `len <= 64`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 coordinates");
        let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value & mask;
        }
        v
    }

    /// Inverse of [`Gf2Vector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 coordinates");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Standard dot product mod 2.
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let parity: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        parity & 1 == 1
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Index of the lowest nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Gf2Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_bits().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gf2Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(deserializer)?;
        if bits.is_empty() {
            return Err(serde::de::Error::custom("vector must have positive length"));
        }
        Gf2Vector::from_bits(&bits).map_err(serde::de::Error::custom)
    }
}

/// A dense matrix over GF(2) stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.rows[i].set(j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from row vectors of equal length.
    pub fn from_rows(rows: Vec<Gf2Vector>) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Gf2Vector::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Gf2Vector]) -> Result<Self, AlgebraError> {
        let n = columns.first().map_or(0, Gf2Vector::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(n, columns.len(), |i, j| columns[j].get(i)))
    }

    pub fn from_nested(entries: &[Vec<u8>]) -> Result<Self, AlgebraError> {
        let rows = entries
            .iter()
            .map(|r| Gf2Vector::from_bits(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn to_nested(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(Gf2Vector::to_bits).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        let mut c = Gf2Vector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn transpose(&self) -> Gf2Matrix {
        Self::from_fn(self.cols, self.rows(), |i, j| self.get(j, i))
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, AlgebraError> {
        if self.cols != other.rows() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.cols,
                found: other.rows(),
            });
        }
        let mut out = Gf2Matrix::zeros(self.rows(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones_iter() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &Gf2Matrix) -> Gf2Matrix {
        let (r2, c2) = (other.rows(), other.cols);
        Self::from_fn(self.rows() * r2, self.cols * c2, |i, j| {
            self.get(i / r2, j / c2) && other.get(i % r2, j % c2)
        })
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && r.get(col) {
                    r.xor_assign(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Inverse of a square matrix, or `Singular` if none exists.
    pub fn inverse(&self) -> Result<Gf2Matrix, AlgebraError> {
        let n = self.rows();
        if n != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: self.cols,
            });
        }
        let mut left = self.rows.clone();
        let mut right = Gf2Matrix::identity(n).rows;
        for col in 0..n {
            let p = (col..n)
                .find(|&i| left[i].get(col))
                .ok_or(AlgebraError::Singular)?;
            left.swap(col, p);
            right.swap(col, p);
            let (pl, pr) = (left[col].clone(), right[col].clone());
            for i in 0..n {
                if i != col && left[i].get(col) {
                    left[i].xor_assign(&pl);
                    right[i].xor_assign(&pr);
                }
            }
        }
        Ok(Gf2Matrix {
            cols: n,
            rows: right,
        })
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Gf2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_nested().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gf2Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let nested = Vec::<Vec<u8>>::deserialize(deserializer)?;
        if nested.is_empty() || nested[0].is_empty() {
            return Err(serde::de::Error::custom("matrix dimensions must be positive"));
        }
        Gf2Matrix::from_nested(&nested).map_err(serde::de::Error::custom)
    }
}

/// Picks a maximal linearly independent subset, scanning in order.
pub fn independent_subset(vectors: &[Gf2Vector]) -> Vec<Gf2Vector> {
    let mut reduced: Vec<(usize, Gf2Vector)> = Vec::new();
    let mut chosen = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for (pivot, row) in &reduced {
            if r.get(*pivot) {
                r.xor_assign(row);
            }
        }
        if let Some(p) = r.leading_index() {
            for (_, row) in reduced.iter_mut() {
                if row.get(p) {
                    row.xor_assign(&r);
                }
            }
            reduced.push((p, r));
            chosen.push(v.clone());
        }
    }
    chosen
}
