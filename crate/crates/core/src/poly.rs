//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables live in a fixed global registry order (singles, then pairs, then
//! triples of trace symbols, then matrix-entry variables), terms in graded
//! lexicographic order over that registry. Structural equality of canonical
//! forms coincides with mathematical equality.

use crate::field::{format_rational, rational_is_negative, Field, FieldError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("trace symbol indices must be strictly increasing, got {0:?}")]
    NonAscendingTuple(Vec<u32>),
    #[error("trace symbol tuples have length 1..=3, got {0}")]
    BadTupleLength(usize),
    #[error("variable {0} is unassigned")]
    UnassignedVariable(String),
    #[error("coefficient not defined in target field: {0}")]
    Coefficient(#[from] FieldError),
    #[error("resultant requires positive degree in the eliminated variable for both inputs")]
    ResultantDegreeZero,
    #[error("invalid polynomial encoding: {0}")]
    Encoding(String),
}

/// Canonical trace symbol `T_S` for a strictly ascending tuple `S` of one to
/// three generator indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceVar {
    len: u8,
    gens: [u32; 3],
}

impl TraceVar {
    pub fn new(gens: &[u32]) -> Result<Self, PolyError> {
        if gens.is_empty() || gens.len() > 3 {
            return Err(PolyError::BadTupleLength(gens.len()));
        }
        if gens.windows(2).any(|w| w[0] >= w[1]) || gens[0] == 0 {
            return Err(PolyError::NonAscendingTuple(gens.to_vec()));
        }
        let mut g = [0u32; 3];
        g[..gens.len()].copy_from_slice(gens);
        Ok(TraceVar { len: gens.len() as u8, gens: g })
    }

    pub fn single(i: u32) -> Self {
        TraceVar::new(&[i]).expect("single index is ascending")
    }

    pub fn pair(i: u32, j: u32) -> Result<Self, PolyError> {
        TraceVar::new(&[i, j])
    }

    pub fn triple(i: u32, j: u32, l: u32) -> Result<Self, PolyError> {
        TraceVar::new(&[i, j, l])
    }

    pub fn indices(&self) -> &[u32] {
        &self.gens[..self.len as usize]
    }

    pub fn arity(&self) -> usize {
        self.len as usize
    }
}

impl fmt::Display for TraceVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t[")?;
        for (i, g) in self.indices().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// A registry variable: a trace symbol or a matrix-entry unknown.
///
/// The derived `Ord` is the registry order used for term ordering, printing,
/// and resultants: trace symbols sorted by tuple length then tuple, followed
/// by matrix entries sorted by (generator, row, column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Trace(TraceVar),
    MatrixEntry { gen: u32, row: u8, col: u8 },
}

impl Var {
    pub fn trace(gens: &[u32]) -> Result<Self, PolyError> {
        Ok(Var::Trace(TraceVar::new(gens)?))
    }

    pub fn single(i: u32) -> Self {
        Var::Trace(TraceVar::single(i))
    }

    pub fn pair(i: u32, j: u32) -> Result<Self, PolyError> {
        Ok(Var::Trace(TraceVar::pair(i, j)?))
    }

    pub fn triple(i: u32, j: u32, l: u32) -> Result<Self, PolyError> {
        Ok(Var::Trace(TraceVar::triple(i, j, l)?))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Trace(t) => write!(f, "{t}"),
            Var::MatrixEntry { gen, row, col } => write!(f, "x[{gen};{row},{col}]"),
        }
    }
}

/// Sparse monomial: variables with positive exponents, sorted by registry
/// order. Comparison is graded lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_of(&self, v: &Var) -> u32 {
        self.0.iter().find(|(u, _)| u == v).map_or(0, |(_, e)| *e)
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn exponents(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Monomial quotient, if divisible.
    fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut i = 0;
        for &(v, e) in &other.0 {
            loop {
                if i >= self.0.len() {
                    return None;
                }
                let (u, d) = self.0[i];
                if u < v {
                    out.push((u, d));
                    i += 1;
                } else if u == v {
                    if d < e {
                        return None;
                    }
                    if d > e {
                        out.push((u, d - e));
                    }
                    i += 1;
                    break;
                } else {
                    return None;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        Some(Monomial(out))
    }

    fn without(&self, v: &Var) -> Self {
        Monomial(self.0.iter().filter(|(u, _)| u != v).copied().collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then lexicographic with the
    /// registry-smallest variable most significant.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let (mut i, mut j) = (0, 0);
                loop {
                    match (self.0.get(i), other.0.get(j)) {
                        (None, None) => return std::cmp::Ordering::Equal,
                        // Missing variable means exponent 0 on a smaller var:
                        // the side with the positive exponent is lex-greater.
                        (None, Some(_)) => return std::cmp::Ordering::Less,
                        (Some(_), None) => return std::cmp::Ordering::Greater,
                        (Some(&(va, ea)), Some(&(vb, eb))) => {
                            if va < vb {
                                return std::cmp::Ordering::Greater;
                            }
                            if vb < va {
                                return std::cmp::Ordering::Less;
                            }
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            })
    }
}

/// Sparse multivariate polynomial over the rationals in canonical form: no
/// zero coefficients, terms keyed by monomial in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant_i64(1)
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn constant_i64(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_of(v)).max().unwrap_or(0)
    }

    /// Sorted list of variables that occur.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                if let Err(pos) = vars.binary_search(v) {
                    vars.insert(pos, *v);
                }
            }
        }
        vars
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Ring-homomorphic evaluation under a total variable assignment.
    pub fn evaluate<F: Field>(
        &self,
        field: &F,
        assignment: &BTreeMap<Var, F::Elem>,
    ) -> Result<F::Elem, PolyError> {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut term = field.from_rational(c)?;
            for (v, e) in m.exponents() {
                let val = assignment
                    .get(v)
                    .ok_or_else(|| PolyError::UnassignedVariable(v.to_string()))?;
                term = field.mul(&term, &field.pow(val, *e as u64));
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Formal partial derivative.
    pub fn partial_derivative(&self, v: &Var) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            if e == 0 {
                continue;
            }
            let mut reduced: Vec<(Var, u32)> = Vec::with_capacity(m.0.len());
            for &(u, d) in &m.0 {
                if u == *v {
                    if d > 1 {
                        reduced.push((u, d - 1));
                    }
                } else {
                    reduced.push((u, d));
                }
            }
            out.add_term(Monomial(reduced), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Replace every occurrence of `v` by `q`, expanded and normalized.
    pub fn substitute(&self, v: &Var, q: &Poly) -> Self {
        let mut powers: BTreeMap<u32, Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let mut rest = Poly::zero();
            rest.add_term(m.without(v), c.clone());
            let qe = powers.entry(e).or_insert_with(|| q.pow(e)).clone();
            out = out.add(&rest.mul(&qe));
        }
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`,
    /// ascending by power; index `i` holds the coefficient of `v^i`.
    pub fn coefficients_in(&self, v: &Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.degree_of(v) as usize;
            out[e].add_term(m.without(v), c.clone());
        }
        out
    }

    /// Leading term in graded-lex order.
    fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` when `self` is not a polynomial multiple of `d`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            let mut q = Poly::zero();
            q.add_term(qm, qc);
            rem = rem.sub(&q.mul(d));
            quot = quot.add(&q);
        }
        Some(quot)
    }

    /// Remainder of `self` modulo the monic quadratic `v² - x·v - y`, where
    /// `x` and `y` must not involve `v`. Degree in `v` drops below 2.
    pub fn rem_monic_quadratic(&self, v: &Var, x: &Poly, y: &Poly) -> Poly {
        debug_assert_eq!(x.degree_in(v), 0);
        debug_assert_eq!(y.degree_in(v), 0);
        let mut cur = self.clone();
        loop {
            let deg = cur.degree_in(v);
            if deg < 2 {
                return cur;
            }
            let coeffs = cur.coefficients_in(v);
            let lead = &coeffs[deg as usize];
            // v^deg ≡ v^(deg-2) · (x·v + y)
            let v_pow = Poly::var(*v).pow(deg - 2);
            let replacement = v_pow.mul(&Poly::var(*v).mul(x).add(y)).mul(lead);
            let lead_mono = Poly::var(*v).pow(deg).mul(lead);
            cur = cur.sub(&lead_mono).add(&replacement);
        }
    }

    /// Rebuild with every coefficient passed through `f`; terms mapping to
    /// zero are dropped.
    pub fn map_coefficients<E>(
        &self,
        f: impl Fn(&BigRational) -> Result<BigRational, E>,
    ) -> Result<Poly, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Resultant of `self` and `other` with respect to `v`: the determinant of
    /// the Sylvester matrix, computed fraction-free (Bareiss). Vanishes at any
    /// specialization where the two share a root in `v`.
    pub fn resultant(&self, other: &Poly, v: &Var) -> Result<Poly, PolyError> {
        let m = self.degree_in(v) as usize;
        let n = other.degree_in(v) as usize;
        if m == 0 || n == 0 {
            return Err(PolyError::ResultantDegreeZero);
        }
        let pc = self.coefficients_in(v);
        let qc = other.coefficients_in(v);
        let size = m + n;
        let mut mat = vec![vec![Poly::zero(); size]; size];
        for i in 0..n {
            for (j, c) in pc.iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in qc.iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        Ok(bareiss_determinant(mat))
    }
}

/// Fraction-free determinant of a matrix of polynomials. Divisions are exact
/// in the polynomial ring at every step.
fn bareiss_determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

impl fmt::Display for Poly {
    /// Deterministic pretty form: graded-lex leading term first, e.g.
    /// `-t[1]*t[2]*t[1,2] + t[1]^2 + t[2]^2 + t[1,2]^2 - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = rational_is_negative(c);
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = abs.is_one();
            if m.is_constant() {
                write!(f, "{}", format_rational(&abs))?;
                continue;
            }
            if !coeff_is_one {
                write!(f, "{}*", format_rational(&abs))?;
            }
            for (j, (v, e)) in m.exponents().iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{v}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct VarJson {
    id: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gen: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    row: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    col: Option<u8>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    exps: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<VarJson>,
    terms: Vec<TermJson>,
}

impl Poly {
    /// JSON form: a variable table in registry order plus one dense exponent
    /// row per term, coefficients as decimal `num/den` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let vars = self.variables();
        let var_json: Vec<VarJson> = vars
            .iter()
            .map(|v| match v {
                Var::Trace(t) => VarJson {
                    id: v.to_string(),
                    kind: "trace".into(),
                    gens: Some(t.indices().to_vec()),
                    gen: None,
                    row: None,
                    col: None,
                },
                Var::MatrixEntry { gen, row, col } => VarJson {
                    id: v.to_string(),
                    kind: "matrix".into(),
                    gens: None,
                    gen: Some(*gen),
                    row: Some(*row),
                    col: Some(*col),
                },
            })
            .collect();
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson {
                coeff: format_rational(c),
                exps: vars.iter().map(|v| m.degree_of(v)).collect(),
            })
            .collect();
        serde_json::to_value(PolyJson { vars: var_json, terms }).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Poly, PolyError> {
        let parsed: PolyJson =
            serde_json::from_value(value.clone()).map_err(|e| PolyError::Encoding(e.to_string()))?;
        let mut vars = Vec::with_capacity(parsed.vars.len());
        for v in &parsed.vars {
            let var = match v.kind.as_str() {
                "trace" => {
                    let gens = v.gens.as_ref().ok_or_else(|| {
                        PolyError::Encoding("trace variable missing gens".into())
                    })?;
                    Var::trace(gens)?
                }
                "matrix" => Var::MatrixEntry {
                    gen: v.gen.ok_or_else(|| PolyError::Encoding("matrix variable missing gen".into()))?,
                    row: v.row.ok_or_else(|| PolyError::Encoding("matrix variable missing row".into()))?,
                    col: v.col.ok_or_else(|| PolyError::Encoding("matrix variable missing col".into()))?,
                },
                other => return Err(PolyError::Encoding(format!("unknown variable kind {other:?}"))),
            };
            vars.push(var);
        }
        let mut poly = Poly::zero();
        for term in &parsed.terms {
            if term.exps.len() != vars.len() {
                return Err(PolyError::Encoding("exponent row length mismatch".into()));
            }
            let coeff = crate::field::parse_rational(&term.coeff)
                .ok_or_else(|| PolyError::Encoding(format!("bad coefficient {:?}", term.coeff)))?;
            let mut mono = Monomial::one();
            for (v, e) in vars.iter().zip(&term.exps) {
                if *e > 0 {
                    mono = mono.mul(&Monomial(vec![(*v, *e)]));
                }
            }
            poly.add_term(mono, coeff);
        }
        Ok(poly)
    }
}

// ---------------------------------------------------------------------------
// E-polynomials
// ---------------------------------------------------------------------------

/// Univariate integer polynomial in the variable `q`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EPoly {
    coeffs: Vec<i64>,
}

impl EPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        EPoly { coeffs }
    }

    pub fn zero() -> Self {
        EPoly::default()
    }

    /// Coefficients ascending by power of `q`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        EPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(0) + other.coeffs.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        EPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(0) - other.coeffs.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return EPoly::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EPoly::new(out)
    }

    pub fn eval_i128(&self, q: i128) -> i128 {
        self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * q + c as i128)
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{mag}")?,
                1 => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "q")?;
                }
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "q^{e}")?;
                }
            }
        }
        Ok(())
    }
}
