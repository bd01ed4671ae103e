//! Covering `K_{n,n}` by side-preserving permuted copies of a dense bipartite graph.
//!
//! [`best_permutation`] derandomizes "a uniformly random permutation covers
//! `|E_G||E_H|/n²` edges of `H` in expectation" by the method of conditional
//! expectations. A-side vertices are fixed first, then B-side vertices.
//!
//! While B is still entirely free, an H-edge at position `(x, y)` is hit by
//! G-edge `(u, v)` with probability `[π_A(u) = x] / n`, so the expectation only
//! depends on degrees:
//!
//! ```text
//! E = (F + SG·SH / m) / n
//! ```
//!
//! with `F = Σ_fixed deg_G(u)·deg_H(π_A(u))`, `SG`/`SH` the degree sums over the
//! `m` free vertices / free positions. Once `π_A` is fixed, sending G-vertex `v`
//! to position `y` covers exactly `C[y][v] = |N_H(y) ∩ π_A(N_G(v))|` edges, and
//! the expectation is `Cfix + Σ_free C / m`.

use std::fmt;

use rayon::prelude::*;

use crate::bits::{BitMatrix, BitPoint};
use crate::error::{Error, Result};
use crate::Rational;

/// `perm_a[u]` is the position of G's A-vertex `u`; likewise for B.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SidePreservingPermutation {
    pub perm_a: Vec<usize>,
    pub perm_b: Vec<usize>,
}

impl SidePreservingPermutation {
    pub fn identity(n: usize) -> Self {
        SidePreservingPermutation { perm_a: (0..n).collect(), perm_b: (0..n).collect() }
    }

    pub fn new(perm_a: Vec<usize>, perm_b: Vec<usize>) -> Result<Self> {
        let p = SidePreservingPermutation { perm_a, perm_b };
        if p.perm_a.len() != p.perm_b.len() {
            return Err(Error::DimensionMismatch(p.perm_a.len(), p.perm_b.len()));
        }
        if !p.is_bijective() {
            return Err(Error::BadParameters("permutation is not a bijection".into()));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.perm_a.len()
    }

    pub fn is_bijective(&self) -> bool {
        fn bij(p: &[usize]) -> bool {
            let mut seen = vec![false; p.len()];
            p.iter().all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
        }
        self.perm_a.len() == self.perm_b.len() && bij(&self.perm_a) && bij(&self.perm_b)
    }

    pub fn inverse_a(&self) -> Vec<usize> {
        invert(&self.perm_a)
    }

    pub fn inverse_b(&self) -> Vec<usize> {
        invert(&self.perm_b)
    }

    /// The edge set of `G_π`.
    pub fn apply(&self, g: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::new(g.n_rows(), g.n_cols());
        for (u, v) in g.ones() {
            out.set(self.perm_a[u], self.perm_b[v], true);
        }
        out
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Result of one conditional-expectation search.
#[derive(Clone, Debug)]
pub struct PermutationSearch {
    pub perm: SidePreservingPermutation,
    /// `|E_H ∩ E_{G_π}|`.
    pub covered: usize,
    /// Conditional expectation before any fixing and after each of the `2n` steps.
    pub expectations: Vec<Rational>,
}

fn check_square(g: &BitMatrix, h: &BitMatrix) -> Result<usize> {
    let n = g.n_rows();
    if g.n_cols() != n || h.n_rows() != n || h.n_cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "G is {}x{}, H is {}x{}",
            g.n_rows(),
            g.n_cols(),
            h.n_rows(),
            h.n_cols()
        )));
    }
    Ok(n)
}

/// Smallest index among maximal scores.
fn argmax(scores: impl ParallelIterator<Item = (usize, i128)>) -> (usize, i128) {
    scores
        .reduce_with(|a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a })
        .expect("at least one free slot")
}

pub fn best_permutation(g: &BitMatrix, h: &BitMatrix) -> Result<SidePreservingPermutation> {
    Ok(best_permutation_traced(g, h)?.perm)
}

pub fn best_permutation_traced(g: &BitMatrix, h: &BitMatrix) -> Result<PermutationSearch> {
    let n = check_square(g, h)?;
    let eg = g.count_ones();
    if eg == 0 {
        return Err(Error::EmptyGraph);
    }
    let eh = h.count_ones();
    let ni = n as i128;
    let mut expectations = Vec::with_capacity(2 * n + 1);
    expectations.push(Rational::new((eg * eh) as i128, ni * ni));

    // Phase A: degrees only.
    let deg_g: Vec<i128> = g.rows().iter().map(|r| r.count_ones() as i128).collect();
    let deg_h: Vec<i128> = h.rows().iter().map(|r| r.count_ones() as i128).collect();
    let mut free_pos = vec![true; n];
    let mut perm_a = vec![usize::MAX; n];
    let (mut f, mut sg, mut sh) = (0i128, eg as i128, eh as i128);
    for u in 0..n {
        let m = (n - u) as i128;
        let du = deg_g[u];
        let (x, num) = argmax((0..n).into_par_iter().filter(|&x| free_pos[x]).map(|x| {
            let dx = deg_h[x];
            (x, (m - 1) * (f + dx * du) + (sh - dx) * (sg - du))
        }));
        free_pos[x] = false;
        perm_a[u] = x;
        f += deg_h[x] * du;
        sg -= du;
        sh -= deg_h[x];
        let e = if m > 1 { Rational::new(num, ni * (m - 1)) } else { Rational::new(f, ni) };
        assert!(e >= *expectations.last().unwrap(), "conditional expectation decreased at A-vertex {u}");
        expectations.push(e);
    }

    // Phase B: exact pair counts against the fixed A-side.
    let inv_a = invert(&perm_a);
    let gpos = BitMatrix::from_rows((0..n).map(|x| g.row(inv_a[x]).clone()).collect())?;
    let gpos_cols = gpos.transpose();
    let h_cols = h.transpose();
    // c[y][v]
    let c: Vec<Vec<i128>> = h_cols
        .rows()
        .par_iter()
        .map(|hy| gpos_cols.rows().iter().map(|gv| hy.inner(gv) as i128).collect())
        .collect();
    let mut s: Vec<i128> = c.iter().map(|row| row.iter().sum()).collect();
    let mut colsum: Vec<i128> = (0..n).map(|v| c.iter().map(|row| row[v]).sum()).collect();
    let mut t: i128 = s.iter().sum();
    let mut cfix = 0i128;
    let mut free_y = vec![true; n];
    let mut perm_b = vec![usize::MAX; n];
    for v in 0..n {
        let m = (n - v) as i128;
        let cs = colsum[v];
        let (y, num) = argmax((0..n).into_par_iter().filter(|&y| free_y[y]).map(|y| {
            let cyv = c[y][v];
            (y, (m - 1) * (cfix + cyv) + (t - cs - s[y] + cyv))
        }));
        free_y[y] = false;
        perm_b[v] = y;
        cfix += c[y][v];
        t = t - cs - s[y] + c[y][v];
        for (yy, row) in c.iter().enumerate() {
            s[yy] -= row[v];
        }
        for (vv, cv) in c[y].iter().enumerate() {
            colsum[vv] -= cv;
        }
        let e = if m > 1 { Rational::new(num, m - 1) } else { Rational::from(cfix) };
        assert!(e >= *expectations.last().unwrap(), "conditional expectation decreased at B-vertex {v}");
        expectations.push(e);
    }

    let perm = SidePreservingPermutation { perm_a, perm_b };
    let covered = g
        .ones()
        .filter(|&(u, v)| h.get(perm.perm_a[u], perm.perm_b[v]))
        .count();
    assert_eq!(Rational::from(covered as i128), *expectations.last().unwrap());
    assert!(covered as u128 * (n * n) as u128 >= (eg * eh) as u128, "averaging bound violated");
    Ok(PermutationSearch { perm, covered, expectations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverStep {
    pub remaining_before: usize,
    pub covered: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationCover {
    pub perms: Vec<SidePreservingPermutation>,
    pub source: BitMatrix,
    pub steps: Vec<CoverStep>,
}

impl PermutationCover {
    pub fn from_parts(perms: Vec<SidePreservingPermutation>, source: BitMatrix) -> Self {
        PermutationCover { perms, source, steps: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.source.n_rows()
    }

    pub fn k(&self) -> usize {
        self.perms.len()
    }
}

/// `2n² ln n / |E| + 1`.
pub fn cover_bound(n: usize, edges: usize) -> f64 {
    let n = n as f64;
    2.0 * n * n * n.ln() / edges as f64 + 1.0
}

pub fn cover_biclique(g: &BitMatrix) -> Result<PermutationCover> {
    let n = check_square(g, g)?;
    let eg = g.count_ones();
    if eg == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut uncovered = BitMatrix::full(n);
    let mut remaining = n * n;
    let mut perms = Vec::new();
    let mut steps = Vec::new();
    while remaining > 0 {
        let found = best_permutation_traced(g, &uncovered)?;
        assert!(found.covered as u128 * (n * n) as u128 >= (eg * remaining) as u128, "greedy step below |E|/n²");
        for (u, v) in g.ones() {
            uncovered.set(found.perm.perm_a[u], found.perm.perm_b[v], false);
        }
        steps.push(CoverStep { remaining_before: remaining, covered: found.covered });
        remaining -= found.covered;
        perms.push(found.perm);
    }
    Ok(PermutationCover { perms, source: g.clone(), steps })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverReport {
    pub uncovered: Vec<(usize, usize)>,
    pub non_bijective: Vec<usize>,
    pub k: usize,
    pub bound: f64,
    pub slack: f64,
}

impl CoverReport {
    pub fn is_ok(&self) -> bool {
        self.uncovered.is_empty() && self.non_bijective.is_empty() && self.slack >= 0.0
    }
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} bound={:.4} slack={:.4} uncovered={} bad_perms={}",
            self.k,
            self.bound,
            self.slack,
            self.uncovered.len(),
            self.non_bijective.len()
        )
    }
}

pub fn verify_cover(cover: &PermutationCover) -> CoverReport {
    let n = cover.n();
    let g = &cover.source;
    let mut union = BitMatrix::square(n);
    let mut non_bijective = Vec::new();
    for (t, p) in cover.perms.iter().enumerate() {
        if p.n() != n || !p.is_bijective() {
            non_bijective.push(t);
            continue;
        }
        for (u, v) in g.ones() {
            union.set(p.perm_a[u], p.perm_b[v], true);
        }
    }
    let full = BitPoint::from_bools(std::iter::repeat_n(true, n));
    let uncovered = union
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, row)| **row != full)
        .flat_map(|(i, row)| (0..n).filter(|&j| !row.get(j)).map(move |j| (i, j)))
        .collect();
    let edges = g.count_ones();
    let bound = if edges == 0 { f64::INFINITY } else { cover_bound(n, edges) };
    let k = cover.k();
    CoverReport { uncovered, non_bijective, k, bound, slack: bound - k as f64 }
}
