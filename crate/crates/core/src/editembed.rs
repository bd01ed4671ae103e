//! Hamming-to-edit embedding by per-coordinate substitution strings.
//!
//! Coordinate `i` with value `x` is replaced by a fixed random string
//! `s_{i,x}` of `L` bits, so a point in `{0,1}^d` becomes a string of length
//! `d' = d·L`. The scale factor between Hamming and edit distance has no
//! closed form and is fitted empirically by [`estimate_lambda`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitPoint;
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionCode {
    d: usize,
    l: usize,
    seed: u64,
    /// `table[i][x]` is `s_{i,x}`.
    table: Vec<[BitPoint; 2]>,
}

pub const DEFAULT_C: f64 = 4.0;

/// `⌈c · log2 d⌉`, at least 1.
pub fn block_len(d: usize, c: f64) -> usize {
    let exact = c * (d as f64).log2();
    let l = exact.ceil();
    // ceil of a value that is an integer up to rounding noise
    let l = if (exact - exact.round()).abs() < 1e-9 { exact.round() } else { l };
    (l as usize).max(1)
}

pub fn gen_substitution_code(d: usize, seed: u64, c: f64) -> Result<SubstitutionCode> {
    if d < 2 {
        return Err(Error::BadParameters(format!("substitution code needs d >= 2, got {d}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::BadParameters(format!("c = {c} must be positive")));
    }
    let l = block_len(d, c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || BitPoint::from_bools((0..l).map(|_| rng.random::<bool>()));
    let table = (0..d).map(|_| [draw(), draw()]).collect();
    Ok(SubstitutionCode { d, l, seed, table })
}

impl SubstitutionCode {
    /// A code with an explicit table (`table[i] = [s_{i,0}, s_{i,1}]`).
    pub fn from_table(table: Vec<[BitPoint; 2]>) -> Result<SubstitutionCode> {
        let l = table.first().map_or(0, |t| t[0].len());
        if table.iter().flatten().any(|s| s.len() != l) {
            return Err(Error::ShapeMismatch("substitution strings of unequal length".into()));
        }
        Ok(SubstitutionCode { d: table.len(), l, seed: 0, table })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn out_len(&self) -> usize {
        self.d * self.l
    }

    pub fn table(&self) -> &[[BitPoint; 2]] {
        &self.table
    }
}

pub fn zeta(code: &SubstitutionCode, a: &BitPoint) -> Result<BitPoint> {
    if a.len() != code.d {
        return Err(Error::DimensionMismatch(code.d, a.len()));
    }
    let mut out = BitPoint::with_capacity(code.out_len());
    for (i, bit) in a.iter().enumerate() {
        out.extend(&code.table[i][bit as usize]);
    }
    Ok(out)
}

/// Levenshtein distance, two-row dynamic program.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut prev: Vec<u32> = (0..=b.len() as u32).collect();
    let mut cur = vec![0u32; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i as u32 + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + u32::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()] as usize
}

pub fn edit_distance_bits(a: &BitPoint, b: &BitPoint) -> usize {
    edit_distance(&a.to_bytes(), &b.to_bytes())
}

/// Random point and a copy with exactly `h` distinct coordinates flipped.
pub fn sample_pair(rng: &mut ChaCha8Rng, d: usize, h: usize) -> (BitPoint, BitPoint) {
    let a = BitPoint::from_bools((0..d).map(|_| rng.random::<bool>()));
    let mut b = a.clone();
    for i in rand::seq::index::sample(rng, d, h.min(d)) {
        b.flip(i);
    }
    (a, b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaFit {
    /// Least-squares slope of `ed(ζa, ζb)` against `Hamming(a, b)` through the origin.
    pub slope: Rational,
    /// `slope / log2 d`.
    pub lambda_hat: f64,
    /// `max |ed − slope·h| / d'`.
    pub max_residual: Rational,
    /// `(hamming, edit)` per sample.
    pub samples: Vec<(usize, usize)>,
}

pub fn estimate_lambda(code: &SubstitutionCode, samples: usize, seed: u64) -> Result<LambdaFit> {
    if samples < 100 {
        return Err(Error::BadParameters(format!("need at least 100 samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(BitPoint, BitPoint)> = (0..samples)
        .map(|_| {
            let h = rng.random_range(0..=code.d);
            sample_pair(&mut rng, code.d, h)
        })
        .collect();
    let measured: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|(a, b)| Ok((a.hamming(b), edit_distance_bits(&zeta(code, a)?, &zeta(code, b)?))))
        .collect::<Result<_>>()?;
    Ok(fit(code, measured))
}

/// Fit from explicit `(hamming, edit)` observations.
pub fn fit(code: &SubstitutionCode, samples: Vec<(usize, usize)>) -> LambdaFit {
    let sxy: i128 = samples.iter().map(|&(h, e)| (h * e) as i128).sum();
    let sxx: i128 = samples.iter().map(|&(h, _)| (h * h) as i128).sum();
    let slope = if sxx == 0 { Rational::from(0) } else { Rational::new(sxy, sxx) };
    let dprime = code.out_len().max(1) as i128;
    let max_residual = samples
        .iter()
        .map(|&(h, e)| {
            let r = Rational::from(e as i128) - slope * Rational::from(h as i128);
            (if r < Rational::from(0) { -r } else { r }) / dprime
        })
        .max()
        .unwrap_or_else(|| Rational::from(0));
    let lambda_hat = ratio_f64(slope) / (code.d as f64).log2();
    LambdaFit { slope, lambda_hat, max_residual, samples }
}

pub fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Mean embedded edit distance over `samples` pairs at Hamming distance exactly `h`.
pub fn mean_distance_at(code: &SubstitutionCode, h: usize, samples: usize, seed: u64) -> Result<Rational> {
    if samples == 0 {
        return Err(Error::BadParameters("no samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (h as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let pairs: Vec<_> = (0..samples).map(|_| sample_pair(&mut rng, code.d, h)).collect();
    let total: usize = pairs
        .par_iter()
        .map(|(a, b)| Ok(edit_distance_bits(&zeta(code, a)?, &zeta(code, b)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(Rational::new(total as i128, samples as i128))
}
