//! Prime-field arithmetic and prime sequences.

use std::fmt;

use crate::error::{Error, Result};

/// The prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

/// A canonical representative in `[0, q)` tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::CompositeModulus(q));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement { value: value % self.q, field: *self }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    // Raw-value helpers for the hot loops in `code`; inputs must be reduced.

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.q {
            s.wrapping_sub(self.q)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.q - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.q) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q, other.field.q));
        }
        Ok(())
    }

    pub fn arith(op: ArithOp, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        a.check(&b)?;
        let f = a.field;
        let value = match op {
            ArithOp::Add => f.add(a.value, b.value),
            ArithOp::Sub => f.sub(a.value, b.value),
            ArithOp::Mul => f.mul(a.value, b.value),
        };
        Ok(FieldElement { value, field: f })
    }

    pub fn add(self, other: FieldElement) -> Result<FieldElement> {
        Self::arith(ArithOp::Add, self, other)
    }

    pub fn sub(self, other: FieldElement) -> Result<FieldElement> {
        Self::arith(ArithOp::Sub, self, other)
    }

    pub fn mul(self, other: FieldElement) -> Result<FieldElement> {
        Self::arith(ArithOp::Mul, self, other)
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement { value: self.field.inv(self.value)?, field: self.field })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `i`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(i: usize) -> u64 {
    assert!(i >= 1, "primes are 1-indexed");
    let mut count = 0;
    let mut candidate = 1u64;
    while count < i {
        candidate += 1;
        if is_prime(candidate) {
            count += 1;
        }
    }
    candidate
}

/// Primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sieve(limit: usize) -> Vec<u64> {
        let mut composite = vec![false; limit + 1];
        let mut out = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    }

    #[test]
    fn construction() {
        assert_eq!(PrimeField::new(5).unwrap().modulus(), 5);
        assert_eq!(PrimeField::new(101).unwrap().modulus(), 101);
        assert_eq!(PrimeField::new(4), Err(Error::CompositeModulus(4)));
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn arith_examples() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.elem(3).add(f.elem(4)).unwrap().value(), 2);
        assert_eq!(f.elem(3).mul(f.elem(4)).unwrap().value(), 2);
        assert_eq!(f.elem(0).sub(f.elem(1)).unwrap().value(), 4);
        let g = PrimeField::new(7).unwrap();
        assert_eq!(f.elem(1).add(g.elem(1)), Err(Error::FieldMismatch(5, 7)));
    }

    #[test]
    fn inverse_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f5.elem(2).inv().unwrap().value(), 3);
        assert_eq!(f7.elem(1).inv().unwrap().value(), 1);
        assert_eq!(f5.elem(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_exhaustive_small_fields() {
        for q in sieve(1000) {
            let f = PrimeField::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn nth_prime_examples_and_sieve() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(3), 5);
        assert_eq!(nth_prime(10), 29);
        let reference = sieve(105_000);
        assert!(reference.len() >= 10_000);
        let mut it = primes();
        for (i, &p) in reference.iter().take(10_000).enumerate() {
            assert_eq!(it.next(), Some(p), "prime #{}", i + 1);
        }
        assert_eq!(nth_prime(10_000), reference[9_999]);
    }

    #[test]
    fn large_modulus_arith() {
        let q = 18_446_744_073_709_551_557; // largest 64-bit prime
        let f = PrimeField::new(q).unwrap();
        assert_eq!(f.add(q - 1, q - 1), q - 2);
        assert_eq!(f.sub(0, q - 1), 1);
        assert_eq!(f.mul(f.inv(q - 2).unwrap(), q - 2), 1);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..1009, b in 0u64..1009, c in 0u64..1009) {
            let f = PrimeField::new(1009).unwrap();
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.sub(a, b), b), a);
        }
    }
}
