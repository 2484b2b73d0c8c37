//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Everything downstream (matrices, polynomial evaluation, counting) is
//! generic over [`Field`]. Elements are plain values; the field itself is a
//! small copyable handle carrying whatever context is needed (the modulus for
//! `F_p`, nothing for `Q`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::{Debug, Display};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime field characteristic must be odd, got {0}")]
    EvenCharacteristic(u64),
    #[error("denominator {0} is divisible by the characteristic")]
    DenominatorNotInvertible(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact field with plain-value elements.
pub trait Field: Copy + Debug + PartialEq {
    type Elem: Clone + PartialEq + Eq + Debug + Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Image of an exact rational; fails if the denominator is not invertible.
    fn from_rational(&self, r: &BigRational) -> Result<Self::Elem, FieldError>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

/// The field of arbitrary-precision rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, r: &BigRational) -> Result<BigRational, FieldError> {
        Ok(r.clone())
    }
}

/// The prime field `F_p` with elements stored as canonical residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Build `F_p`, rejecting composite moduli.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// Build `F_p` for odd prime `p` (required by quadratic-character work).
    pub fn new_odd(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic(p));
        }
        Self::new(p)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of a signed integer.
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Legendre symbol of `a`: 1 for nonzero squares, -1 for non-squares, 0 at 0.
    /// Euler's criterion `a^((p-1)/2)`.
    pub fn legendre(&self, a: u64) -> i8 {
        debug_assert!(self.p > 2);
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        let e = self.pow(&a, (self.p - 1) / 2);
        if e == 1 {
            1
        } else {
            -1
        }
    }

    /// Table of Legendre symbols indexed by residue, for `O(1)` kernel lookups.
    pub fn legendre_table(&self) -> Vec<i8> {
        (0..self.p).map(|a| self.legendre(a)).collect()
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // p prime, so a^(p-2) inverts a
        Ok(self.pow(a, self.p - 2))
    }
    fn from_int(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn from_rational(&self, r: &BigRational) -> Result<u64, FieldError> {
        let num = r.numer().mod_floor_u64(self.p);
        let den = r.denom().mod_floor_u64(self.p);
        if den == 0 {
            return Err(FieldError::DenominatorNotInvertible(r.denom().to_string()));
        }
        let den_inv = self.inv(&den)?;
        Ok(self.mul(&num, &den_inv))
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        match digits.as_slice() {
            [] => 0,
            [d] => *d,
            _ => unreachable!("residue below u64 modulus"),
        }
    }
}

/// Deterministic primality by trial division; moduli here stay small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Parse an exact rational from "num", "-num", or "num/den" decimal strings.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Render a rational as "num" or "num/den".
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True if the rational is negative (used by pretty-printers).
pub fn rational_is_negative(r: &BigRational) -> bool {
    r.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(10).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(10007).is_ok());
    }

    #[test]
    fn modular_inverse_roundtrip() {
        let f = PrimeField::new(10007).unwrap();
        for a in [1u64, 2, 3, 5000, 10006] {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert!(f.inv(&0).is_err());
    }

    #[test]
    fn rational_image_mod_p() {
        let f = PrimeField::new(5).unwrap();
        // 1/2 = 3 mod 5
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), 3);
        let f2 = PrimeField::new(2).unwrap();
        assert!(f2.from_rational(&half).is_err());
    }

    #[test]
    fn legendre_matches_squares() {
        let f = PrimeField::new(11).unwrap();
        let squares: std::collections::HashSet<u64> = (1..11).map(|x| f.mul(&x, &x)).collect();
        for a in 1..11 {
            let expected = if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(f.legendre(a), expected);
        }
        assert_eq!(f.legendre(0), 0);
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert_eq!(format_rational(&parse_rational("-1/2").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_none());
    }
}
