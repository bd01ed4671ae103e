//! Bit-packed Boolean vectors and square bit matrices.
//!
//! Points live in `{0,1}^d` and are stored little-endian in 64-bit words;
//! bits past `len` in the last word are always zero, so Hamming distance and
//! inner product reduce to `popcount` over XOR / AND of whole words.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitPoint {
    words: Vec<u64>,
    len: usize,
}

impl BitPoint {
    pub fn zeros(len: usize) -> Self {
        BitPoint { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitPoint { words: Vec::with_capacity(bits.div_ceil(64)), len: 0 }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut p = BitPoint::default();
        for b in bits {
            p.push(b);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends all bits of `other`.
    pub fn extend(&mut self, other: &BitPoint) {
        let shift = self.len % 64;
        if shift == 0 {
            self.words.truncate(self.len / 64);
            self.words.extend_from_slice(&other.words);
        } else {
            for &w in &other.words {
                *self.words.last_mut().unwrap() |= w << shift;
                self.words.push(w >> (64 - shift));
            }
        }
        self.len += other.len;
        self.words.truncate(self.len.div_ceil(64));
    }

    /// `r` back-to-back copies of `self` (the `1_r ⊗ v` operation).
    pub fn repeat(&self, r: usize) -> BitPoint {
        let mut out = BitPoint::with_capacity(self.len * r);
        for _ in 0..r {
            out.extend(self);
        }
        out
    }

    pub fn concat(&self, other: &BitPoint) -> BitPoint {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn hamming(&self, other: &BitPoint) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    #[inline]
    pub fn inner(&self, other: &BitPoint) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bits as bytes `0`/`1`, convenient for string algorithms.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn parse(s: &str) -> Result<BitPoint> {
        let mut p = BitPoint::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => p.push(false),
                '1' => p.push(true),
                _ => return Err(Error::parse(0, format!("bad bit {c:?} at column {}", i + 1))),
            }
        }
        Ok(p)
    }
}

impl fmt::Display for BitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitPoint({self})")
    }
}

/// Dense `rows × cols` Boolean matrix, one packed row per index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitPoint>,
    cols: usize,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BitMatrix { rows: vec![BitPoint::zeros(cols); rows], cols }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n)
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::square(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<BitPoint>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitPoint::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(cols, bad.len()));
        }
        Ok(BitMatrix { rows, cols })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v)
    }

    pub fn row(&self, i: usize) -> &BitPoint {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitPoint] {
        &self.rows
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitPoint::count_ones).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if row.get(j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(move |(i, r)| (0..self.cols).filter(move |&j| r.get(j)).map(move |j| (i, j)))
    }
}
