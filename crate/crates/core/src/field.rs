//! Coefficient fields for persistence: prime fields and the rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    /// `p`, or 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    /// A primitive `m`-th root of unity.
    fn root_of_unity(&self, m: usize) -> Result<Self::E>;

    fn one(&self) -> Self::E {
        self.from_i64(1)
    }

    fn pow(&self, a: &Self::E, mut k: usize) -> Self::E {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::BadParams(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }
}

impl Field for PrimeField {
    type E = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(a, (self.p - 2) as usize)
    }
    fn root_of_unity(&self, m: usize) -> Result<u64> {
        let m64 = m as u64;
        if m == 0 || (self.p - 1) % m64 != 0 {
            return Err(Error::BadCharacteristic { p: self.p, order: m });
        }
        let factors = prime_factors(m64);
        (1..self.p)
            .map(|a| self.pow(&a, ((self.p - 1) / m64) as usize))
            .find(|w| factors.iter().all(|&q| self.pow(w, (m64 / q) as usize) != 1))
            .ok_or(Error::BadCharacteristic { p: self.p, order: m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type E = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn root_of_unity(&self, m: usize) -> Result<BigRational> {
        match m {
            1 => Ok(BigRational::one()),
            2 => Ok(-BigRational::one()),
            _ => Err(Error::BadCharacteristic { p: 0, order: m }),
        }
    }
}

/// Runtime choice of coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Prime(u64),
    Rational,
}

impl Coefficients {
    /// `0` selects the rationals.
    pub fn from_characteristic(p: u64) -> Result<Self> {
        if p == 0 {
            return Ok(Coefficients::Rational);
        }
        PrimeField::new(p)?;
        Ok(Coefficients::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Coefficients::Prime(p) => p,
            Coefficients::Rational => 0,
        }
    }
}

/// Smallest prime `p >= 5` with `p ≡ 1 (mod m)`, so that `F_p` contains the
/// `m`-th roots of unity.
pub fn default_prime(m: usize) -> u64 {
    let m = m.max(1) as u64;
    (5..).find(|&p| is_prime(p) && (p - 1) % m == 0).expect("primes in progressions")
}

/// `-1` or `1`.
pub fn signed_unit<F: Field>(field: &F, negative: bool) -> F::E {
    if negative {
        field.from_i64(-1)
    } else {
        field.one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        let f = PrimeField::new(7).unwrap();
        let w = f.root_of_unity(3).unwrap();
        assert_eq!(f.pow(&w, 3), 1);
        assert_ne!(w, 1);
        assert!(f.root_of_unity(4).is_err());
        assert_eq!(PrimeField::new(5).unwrap().root_of_unity(4).map(|w| w * w % 5), Ok(4));
        assert_eq!(Rationals.root_of_unity(2).unwrap(), Rationals.from_i64(-1));
        assert!(Rationals.root_of_unity(3).is_err());
    }

    #[test]
    fn default_primes() {
        assert_eq!(default_prime(1), 5);
        assert_eq!(default_prime(2), 5);
        assert_eq!(default_prime(3), 7);
        assert_eq!(default_prime(4), 5);
        assert_eq!(default_prime(6), 7);
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(11).unwrap();
        for a in 1..11 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert!(PrimeField::new(9).is_err());
    }
}
