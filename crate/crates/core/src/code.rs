//! Linear codes over prime fields, Reed-Solomon codes in particular.
//!
//! Codes are stored as a `K × N` generator matrix. All enumeration-based
//! operations (minimum distance, weight distribution, center search) walk the
//! `q^K` codewords in lexicographic message order with the least-significant
//! message coordinate first, and refuse to start when `q^K` exceeds the
//! configured [`EnumBudget`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Upper bound on the number of codewords a brute-force routine may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumBudget(pub u64);

impl EnumBudget {
    pub const DEFAULT: EnumBudget = EnumBudget(1 << 24);

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            return Err(Error::BudgetExceeded { needed, budget: self.0 });
        }
        Ok(())
    }
}

impl Default for EnumBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeFamily {
    ReedSolomon { eval_points: Vec<u64> },
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    field: PrimeField,
    n: usize,
    k: usize,
    generator: Vec<Vec<u64>>,
    family: CodeFamily,
    claimed_distance: Option<usize>,
}

/// A codeword as raw field values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(pub Vec<u64>);

impl Codeword {
    pub fn symbols(&self) -> &[u64] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        weight(&self.0)
    }
}

pub fn weight(v: &[u64]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

pub fn hamming(a: &[u64], b: &[u64]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `RS_q[N, K]`: row `k` of the generator evaluates `x^k` at `0, 1, …, N−1`.
pub fn rs_code(field: PrimeField, n: usize, k: usize) -> Result<LinearCode> {
    let q = field.modulus();
    if k == 0 || k > n || n as u128 > q as u128 {
        return Err(Error::BadParameters(format!("RS_{q}[{n}, {k}] needs 1 <= K <= N <= q")));
    }
    let eval_points: Vec<u64> = (0..n as u64).collect();
    let generator = (0..k)
        .map(|row| eval_points.iter().map(|&x| field.pow(x, row as u64)).collect())
        .collect();
    Ok(LinearCode {
        field,
        n,
        k,
        generator,
        family: CodeFamily::ReedSolomon { eval_points },
        claimed_distance: Some(n - k + 1),
    })
}

impl LinearCode {
    /// A code from an explicit generator; rows must be linearly independent.
    pub fn from_generator(field: PrimeField, generator: Vec<Vec<u64>>) -> Result<LinearCode> {
        let k = generator.len();
        let n = generator.first().map_or(0, Vec::len);
        if k == 0 || n < k {
            return Err(Error::BadParameters(format!("generator is {k}x{n}")));
        }
        if let Some(row) = generator.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: row.len() });
        }
        let generator: Vec<Vec<u64>> =
            generator.into_iter().map(|r| r.into_iter().map(|x| x % field.modulus()).collect()).collect();
        if rank(field, &generator) != k {
            return Err(Error::BadParameters("generator rows are linearly dependent".into()));
        }
        Ok(LinearCode { field, n, k, generator, family: CodeFamily::Generic, claimed_distance: None })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u64 {
        self.field.modulus()
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &[Vec<u64>] {
        &self.generator
    }

    pub fn family(&self) -> &CodeFamily {
        &self.family
    }

    pub fn claimed_distance(&self) -> Option<usize> {
        self.claimed_distance
    }

    pub fn is_reed_solomon(&self) -> bool {
        matches!(self.family, CodeFamily::ReedSolomon { .. })
    }

    /// `q^K`, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.k as u32)
    }

    fn check_budget(&self, budget: EnumBudget) -> Result<()> {
        match self.size() {
            Some(s) => budget.check(s),
            None => Err(Error::BudgetExceeded { needed: u128::MAX, budget: budget.0 }),
        }
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Codeword> {
        if let Some(m) = message.iter().find(|m| m.field() != self.field) {
            return Err(Error::FieldMismatch(self.q(), m.field().modulus()));
        }
        let raw: Vec<u64> = message.iter().map(FieldElement::value).collect();
        self.encode_raw(&raw)
    }

    /// `message · generator` over raw (reduced or not) values.
    pub fn encode_raw(&self, message: &[u64]) -> Result<Codeword> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        let f = self.field;
        let mut out = vec![0u64; self.n];
        for (m, row) in message.iter().zip(&self.generator) {
            let m = m % f.modulus();
            if m == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(m, g));
            }
        }
        Ok(Codeword(out))
    }

    /// Streams all `q^K` codewords in message order.
    pub fn enumerate(&self, budget: EnumBudget) -> Result<CodewordIter<'_>> {
        self.check_budget(budget)?;
        Ok(CodewordIter {
            code: self,
            digits: vec![0; self.k],
            current: vec![0; self.n],
            remaining: self.size().unwrap(),
        })
    }

    /// All codewords collected into memory, in enumeration order.
    pub fn codewords(&self, budget: EnumBudget) -> Result<Vec<Vec<u64>>> {
        Ok(self.enumerate(budget)?.map(|c| c.0).collect())
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: v.len() });
        }
        let mut rows = self.generator.clone();
        rows.push(v.iter().map(|x| x % self.q()).collect());
        Ok(rank(self.field, &rows) == self.k)
    }

    /// Minimum distance, using the RS formula when the family guarantees it
    /// and brute force otherwise.
    pub fn distance(&self, budget: EnumBudget) -> Result<usize> {
        match (self.is_reed_solomon(), self.claimed_distance) {
            (true, Some(d)) => Ok(d),
            _ => min_distance_bruteforce(self, budget),
        }
    }

    /// Records a brute-force measured distance on a generic code.
    pub fn with_measured_distance(mut self, budget: EnumBudget) -> Result<LinearCode> {
        self.claimed_distance = Some(min_distance_bruteforce(&self, budget)?);
        Ok(self)
    }

    /// Flat text descriptor `family q N K`.
    pub fn descriptor(&self) -> Result<String> {
        match self.family {
            CodeFamily::ReedSolomon { .. } => Ok(format!("rs {} {} {}", self.q(), self.n, self.k)),
            CodeFamily::Generic => Err(Error::BadParameters("generic codes have no flat descriptor".into())),
        }
    }

    pub fn from_descriptor(s: &str) -> Result<LinearCode> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let [family, q, n, k] = toks[..] else {
            return Err(Error::parse(1, "expected `family q N K`"));
        };
        let num = |t: &str| t.parse::<u64>().map_err(|e| Error::parse(1, format!("{t:?}: {e}")));
        match family {
            "rs" => rs_code(PrimeField::new(num(q)?)?, num(n)? as usize, num(k)? as usize),
            other => Err(Error::parse(1, format!("unknown code family {other:?}"))),
        }
    }

    /// A basis for a complement of `inner` inside `self` (rows of `self`'s
    /// generator not spanned by `inner` and the rows already chosen).
    pub fn complement_basis(&self, inner: &LinearCode) -> Vec<Vec<u64>> {
        let mut span = inner.generator.clone();
        let mut out = Vec::new();
        for row in &self.generator {
            span.push(row.clone());
            if rank(self.field, &span) == span.len() {
                out.push(row.clone());
            } else {
                span.pop();
            }
        }
        out
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.is_reed_solomon() { "RS" } else { "C" };
        write!(f, "{tag}_{}[{}, {}]", self.q(), self.n, self.k)
    }
}

pub struct CodewordIter<'a> {
    code: &'a LinearCode,
    digits: Vec<u64>,
    current: Vec<u64>,
    remaining: u128,
}

impl Iterator for CodewordIter<'_> {
    type Item = Codeword;

    fn next(&mut self) -> Option<Codeword> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = Codeword(self.current.clone());
        if self.remaining > 0 {
            // Incrementing a message digit by one (including the wrap q-1 -> 0)
            // adds exactly that generator row to the codeword.
            let f = self.code.field;
            for (j, d) in self.digits.iter_mut().enumerate() {
                *d += 1;
                for (c, &g) in self.current.iter_mut().zip(&self.code.generator[j]) {
                    *c = f.add(*c, g);
                }
                if *d < f.modulus() {
                    break;
                }
                *d = 0;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Rank over `F_q` by Gaussian elimination.
pub fn rank(field: PrimeField, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, p));
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub fn min_distance_bruteforce(code: &LinearCode, budget: EnumBudget) -> Result<usize> {
    let mut best = code.n;
    for c in code.enumerate(budget)?.skip(1) {
        best = best.min(c.weight());
    }
    Ok(best)
}

pub fn weight_distribution_bruteforce(code: &LinearCode, budget: EnumBudget) -> Result<BTreeMap<usize, u64>> {
    let mut dist = BTreeMap::new();
    for c in code.enumerate(budget)? {
        *dist.entry(c.weight()).or_insert(0) += 1;
    }
    Ok(dist)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of minimum-weight codewords of an MDS code: `C(N, K−1)·(q−1)`.
pub fn mds_min_weight_count(code: &LinearCode) -> Result<u128> {
    match code.claimed_distance {
        Some(d) if d + code.k == code.n + 1 => {
            Ok(binomial(code.n as u64, code.k as u64 - 1) * (code.q() as u128 - 1))
        }
        _ => Err(Error::NotMds),
    }
}

pub fn is_subcode(inner: &LinearCode, outer: &LinearCode) -> Result<bool> {
    if inner.field != outer.field || inner.n != outer.n {
        return Err(Error::ShapeMismatch(format!("{inner} vs {outer}")));
    }
    let mut rows = outer.generator.clone();
    rows.extend(inner.generator.iter().cloned());
    Ok(rank(outer.field, &rows) == outer.k)
}
