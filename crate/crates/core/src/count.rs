//! Exact point counting of the commutator-trace fibers over prime fields,
//! with a quadratic-character kernel, a brute-force oracle, commuting-pair
//! enumeration, and counting-polynomial fitting.

use crate::field::{is_prime, Field, PrimeField};
use crate::poly::EPoly;
use crate::sl2::enumerate_sl2;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the fast kernel requires an odd prime, got {0}")]
    FastNeedsOddPrime(u64),
    #[error("commuting-pair enumeration is limited to p ≤ 7, got {0}")]
    PrimeTooLarge(u64),
    #[error("polynomial fitting needs at least 3 records at distinct primes, got {0}")]
    TooFewRecords(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Fast,
    Brute,
}

impl CountMethod {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fast" => Some(CountMethod::Fast),
            "brute" => Some(CountMethod::Brute),
            _ => None,
        }
    }
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountMethod::Fast => write!(f, "fast"),
            CountMethod::Brute => write!(f, "brute"),
        }
    }
}

/// One exact fiber count: `n = #{(x,y,z) ∈ F_p³ : x²+y²+z²-xyz-2 = t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRecord {
    pub p: u64,
    /// Canonical residue of the fiber parameter.
    pub t: u64,
    pub n: u64,
    pub method: CountMethod,
}

impl CountRecord {
    /// CSV row matching the header `p,t,n,method`.
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.p, self.t, self.n, self.method)
    }
}

pub const CSV_HEADER: &str = "p,t,n,method";

/// Split `0..n` into at most `workers` contiguous chunks.
fn chunk_ranges(n: u64, workers: usize) -> Vec<std::ops::Range<u64>> {
    let workers = workers.clamp(1, n.max(1) as usize) as u64;
    let base = n / workers;
    let extra = n % workers;
    let mut out = Vec::with_capacity(workers as usize);
    let mut start = 0;
    for i in 0..workers {
        let len = base + u64::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Exact count of the fiber at `t` (any integer; reduced mod `p`).
///
/// The fast kernel runs over `(y, z)` pairs and counts roots of the monic
/// quadratic `x² - (yz)x + (y² + z² - 2 - t)` through the quadratic character
/// of its discriminant: `1 + χ(D)` roots, with `χ(0) = 0` contributing one.
/// The brute oracle enumerates all `p³` triples. Work is partitioned over
/// slices of the outer coordinate; the merge is a sum, so worker count never
/// changes the result.
pub fn count_fiber(p: u64, t: i64, method: CountMethod, workers: usize) -> Result<CountRecord, CountError> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    if p == 2 && method == CountMethod::Fast {
        return Err(CountError::FastNeedsOddPrime(p));
    }
    let field = PrimeField::new(p).expect("checked prime");
    let t_red = field.reduce_i64(t);
    let n = match method {
        CountMethod::Fast => {
            let chi = field.legendre_table();
            parallel_sum(p, workers, |ys| {
                let mut acc = 0u64;
                for y in ys {
                    for z in 0..p {
                        acc += x_root_count(&field, &chi, y, z, t_red);
                    }
                }
                acc
            })
        }
        CountMethod::Brute => parallel_sum(p, workers, |ys| {
            let mut acc = 0u64;
            for y in ys {
                for z in 0..p {
                    for x in 0..p {
                        if fiber_eval(&field, x, y, z) == t_red {
                            acc += 1;
                        }
                    }
                }
            }
            acc
        }),
    };
    Ok(CountRecord { p, t: t_red, n, method })
}

fn fiber_eval(f: &PrimeField, x: u64, y: u64, z: u64) -> u64 {
    let sq = f.add(&f.add(&f.mul(&x, &x), &f.mul(&y, &y)), &f.mul(&z, &z));
    f.sub(&f.sub(&sq, &f.mul(&f.mul(&x, &y), &z)), &2)
}

fn x_root_count(f: &PrimeField, chi: &[i8], y: u64, z: u64, t: u64) -> u64 {
    // discriminant of x² - (yz)x + (y² + z² - 2 - t)
    let b = f.mul(&y, &z);
    let c = f.sub(&f.sub(&f.add(&f.mul(&y, &y), &f.mul(&z, &z)), &2), &t);
    let disc = f.sub(&f.mul(&b, &b), &f.mul(&4, &c));
    match chi[disc as usize] {
        1 => 2,
        0 => 1,
        _ => 0,
    }
}

fn parallel_sum(p: u64, workers: usize, work: impl Fn(std::ops::Range<u64>) -> u64 + Sync) -> u64 {
    let ranges = chunk_ranges(p, workers);
    if ranges.len() == 1 {
        return work(0..p);
    }
    std::thread::scope(|scope| {
        let work = &work;
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| scope.spawn(move || work(r)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    })
}

/// Fast count with the solved coordinate chosen by `axis` (0, 1 or 2), the
/// quadratic coefficients extracted from the symbolic fiber polynomial rather
/// than hardcoded. The fiber is symmetric, so every axis must agree with the
/// production kernel; this is the kernel self-test.
pub fn count_fiber_fast_axis(p: u64, t: i64, axis: usize) -> Result<u64, CountError> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    if p == 2 {
        return Err(CountError::FastNeedsOddPrime(p));
    }
    let field = PrimeField::new(p).expect("checked prime");
    let chi = field.legendre_table();
    let fiber = crate::geometry::torus_fiber(&BigRational::from_integer(BigInt::from(t)));
    let coords = [
        crate::poly::Var::single(1),
        crate::poly::Var::single(2),
        crate::poly::Var::pair(1, 2).expect("1 < 2"),
    ];
    let solved = coords[axis % 3];
    let others: Vec<_> = coords.iter().copied().filter(|v| *v != solved).collect();
    let coeffs = fiber.coefficients_in(&solved);
    assert_eq!(coeffs.len(), 3, "fiber is quadratic in each coordinate");
    assert_eq!(coeffs[2].as_constant(), Some(BigRational::one()), "monic");
    let mut acc = 0u64;
    for a in 0..p {
        for b in 0..p {
            let mut asg = std::collections::BTreeMap::new();
            asg.insert(others[0], a);
            asg.insert(others[1], b);
            let c1 = coeffs[1].evaluate(&field, &asg).expect("total assignment");
            let c0 = coeffs[0].evaluate(&field, &asg).expect("total assignment");
            let disc = field.sub(&field.mul(&c1, &c1), &field.mul(&4, &c0));
            acc += match chi[disc as usize] {
                1 => 2,
                0 => 1,
                _ => 0,
            };
        }
    }
    Ok(acc)
}

/// Counts for every `t ∈ F_p`, ordered by `t`. The fibers partition affine
/// 3-space, so the counts sum to `p³`.
pub fn count_all_fibers(p: u64, method: CountMethod, workers: usize) -> Result<Vec<CountRecord>, CountError> {
    (0..p as i64).map(|t| count_fiber(p, t, method, workers)).collect()
}

/// Outcome of fitting counts against a quadratic in `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// The unique integer quadratic through the first three records, when it
    /// reproduces every record exactly.
    pub poly: Option<EPoly>,
    /// Rational coefficients of the interpolant, ascending by power.
    pub interpolant: [BigRational; 3],
    /// `n - interpolant(p)` for each record (all zero when `poly` is set).
    pub residuals: Vec<(u64, BigRational)>,
}

/// Interpolate a degree-≤2 polynomial through the first three records and
/// accept it only if it is an integer polynomial reproducing all records.
pub fn fit_count_polynomial(records: &[(u64, u64)]) -> Result<FitReport, CountError> {
    if records.len() < 3 {
        return Err(CountError::TooFewRecords(records.len()));
    }
    let distinct: std::collections::BTreeSet<u64> = records.iter().map(|r| r.0).collect();
    if distinct.len() < 3 {
        return Err(CountError::TooFewRecords(distinct.len()));
    }
    let rat = |n: u64| BigRational::from_integer(BigInt::from(n));
    // Lagrange through the first three records
    let pts: Vec<(BigRational, BigRational)> = records[..3]
        .iter()
        .map(|&(p, n)| (rat(p), rat(n)))
        .collect();
    let mut coeffs = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for i in 0..3 {
        let (xi, yi) = &pts[i];
        let mut num = [BigRational::one(), BigRational::zero(), BigRational::zero()];
        let mut den = BigRational::one();
        for j in 0..3 {
            if i == j {
                continue;
            }
            let xj = &pts[j].0;
            // multiply num by (x - xj)
            let mut next = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
            for (d, c) in num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                next[d + 1] += c;
                next[d] -= c * xj;
            }
            num = next;
            den *= xi - xj;
        }
        let w = yi / den;
        for d in 0..3 {
            coeffs[d] += &num[d] * &w;
        }
    }
    let eval = |p: u64| -> BigRational {
        let x = rat(p);
        &coeffs[2] * &x * &x + &coeffs[1] * &x + &coeffs[0]
    };
    let residuals: Vec<(u64, BigRational)> = records
        .iter()
        .map(|&(p, n)| (p, rat(n) - eval(p)))
        .collect();
    let integral = coeffs.iter().all(|c| c.denom().is_one());
    let exact = residuals.iter().all(|(_, r)| r.is_zero());
    let poly = if integral && exact {
        let to_i64 = |c: &BigRational| -> Option<i64> {
            let (sign, digits) = c.numer().to_u64_digits();
            let mag = match digits.as_slice() {
                [] => 0i64,
                [d] if *d <= i64::MAX as u64 => *d as i64,
                _ => return None,
            };
            Some(if sign == num_bigint::Sign::Minus { -mag } else { mag })
        };
        match (to_i64(&coeffs[0]), to_i64(&coeffs[1]), to_i64(&coeffs[2])) {
            (Some(c0), Some(c1), Some(c2)) => Some(EPoly::new(vec![c0, c1, c2])),
            _ => None,
        }
    } else {
        None
    };
    Ok(FitReport { poly, interpolant: coeffs, residuals })
}

/// `#{(A,B) ∈ SL₂(F_p)² : AB = BA}` by enumeration; desk scale limits `p` to
/// at most 7. Equals (number of conjugacy classes) × |SL₂(F_p)|.
pub fn count_commuting_pairs(p: u64) -> Result<u64, CountError> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    if p > 7 {
        return Err(CountError::PrimeTooLarge(p));
    }
    let field = PrimeField::new(p).expect("checked prime");
    let all = enumerate_sl2(field);
    let mut count = 0u64;
    for a in &all {
        for b in &all {
            if a.mul(b) == b.mul(a) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Number of conjugacy classes of `SL₂(F_p)` by orbit enumeration; the
/// class-equation cross-check for [`count_commuting_pairs`].
pub fn conjugacy_class_count(p: u64) -> Result<u64, CountError> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    if p > 7 {
        return Err(CountError::PrimeTooLarge(p));
    }
    let field = PrimeField::new(p).expect("checked prime");
    let all = enumerate_sl2(field);
    let key = |m: &crate::sl2::SL2Mat<PrimeField>| (m.a, m.b, m.c, m.d);
    let mut seen = std::collections::HashSet::new();
    let mut classes = 0u64;
    for a in &all {
        if seen.contains(&key(a)) {
            continue;
        }
        classes += 1;
        for g in &all {
            seen.insert(key(&a.conjugate_by(g)));
        }
    }
    Ok(classes)
}
