//! Exact SL₂ arithmetic over `Q` and prime fields: the brute-force oracle for
//! every symbolic claim, plus conjugacy classification and samplers.

use crate::field::{Field, FieldError, PrimeField};
use crate::poly::{Poly, PolyError, Var};
use crate::word::Word;
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("determinant must be 1, got {0}")]
    NotUnimodular(String),
    #[error("generator {0} has no assigned matrix")]
    UnassignedGenerator(u32),
    #[error("identity {name} takes {expected} matrices, got {got}")]
    ArityMismatch {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("genus-2 sampler postcondition violated")]
    SamplerCheckFailed,
}

/// Exact 2×2 matrix of determinant 1 over an exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SL2Mat<F: Field> {
    field: F,
    pub a: F::Elem,
    pub b: F::Elem,
    pub c: F::Elem,
    pub d: F::Elem,
}

impl<F: Field> SL2Mat<F> {
    /// Construct from entries, enforcing `ad - bc = 1`.
    pub fn new(field: F, a: F::Elem, b: F::Elem, c: F::Elem, d: F::Elem) -> Result<Self, Sl2Error> {
        let det = field.sub(&field.mul(&a, &d), &field.mul(&b, &c));
        if det != field.one() {
            return Err(Sl2Error::NotUnimodular(format!("{det}")));
        }
        Ok(SL2Mat { field, a, b, c, d })
    }

    pub fn from_ints(field: F, a: i64, b: i64, c: i64, d: i64) -> Result<Self, Sl2Error> {
        SL2Mat::new(
            field,
            field.from_int(a),
            field.from_int(b),
            field.from_int(c),
            field.from_int(d),
        )
    }

    pub fn identity(field: F) -> Self {
        SL2Mat {
            field,
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
        }
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn trace(&self) -> F::Elem {
        self.field.add(&self.a, &self.d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        SL2Mat {
            field: self.field,
            a: f.add(&f.mul(&self.a, &other.a), &f.mul(&self.b, &other.c)),
            b: f.add(&f.mul(&self.a, &other.b), &f.mul(&self.b, &other.d)),
            c: f.add(&f.mul(&self.c, &other.a), &f.mul(&self.d, &other.c)),
            d: f.add(&f.mul(&self.c, &other.b), &f.mul(&self.d, &other.d)),
        }
    }

    /// Closed-form inverse `(d, -b, -c, a)`.
    pub fn inverse(&self) -> Self {
        let f = &self.field;
        SL2Mat {
            field: self.field,
            a: self.d.clone(),
            b: f.neg(&self.b),
            c: f.neg(&self.c),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        SL2Mat {
            field: self.field,
            a: f.neg(&self.a),
            b: f.neg(&self.b),
            c: f.neg(&self.c),
            d: f.neg(&self.d),
        }
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = SL2Mat::identity(self.field);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        *self == SL2Mat::identity(self.field)
    }

    /// Scale by a scalar ±1-style element; used for `-I` comparisons.
    pub fn is_minus_identity(&self) -> bool {
        *self == SL2Mat::identity(self.field).neg()
    }
}

/// Evaluate a word at an assignment of matrices to generator indices.
pub fn word_eval<F: Field>(
    word: &Word,
    assignment: &BTreeMap<u32, SL2Mat<F>>,
    field: F,
) -> Result<SL2Mat<F>, Sl2Error> {
    let mut acc = SL2Mat::identity(field);
    for letter in word.letters() {
        let m = assignment
            .get(&letter.gen)
            .ok_or(Sl2Error::UnassignedGenerator(letter.gen))?;
        acc = acc.mul(&m.pow(letter.exp));
    }
    Ok(acc)
}

/// Geometric conjugacy type of an SL₂ element, in the algebraically closed
/// sense: by trace and the ±identity test only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjClass<E> {
    Id,
    MinusId,
    JPlus,
    JMinus,
    Diag(E),
}

/// Classify by conjugacy type. Over a non-closed field, trace-±2 non-central
/// elements may split into two rational classes; this reports the geometric
/// type only.
pub fn classify_conjugacy<F: Field>(m: &SL2Mat<F>) -> ConjClass<F::Elem> {
    let f = m.field();
    let t = m.trace();
    let two = f.from_int(2);
    let minus_two = f.from_int(-2);
    if t == two {
        if m.is_identity() {
            ConjClass::Id
        } else {
            ConjClass::JPlus
        }
    } else if t == minus_two {
        if m.is_minus_identity() {
            ConjClass::MinusId
        } else {
            ConjClass::JMinus
        }
    } else {
        ConjClass::Diag(t)
    }
}

/// Uniform random element of `SL₂(F_p)`, deterministic for a fixed stream.
///
/// Stratified: with probability `p/(p+1)` draw `a` from `F_p^*` and `b, c`
/// freely, solving `d = (1+bc)/a`; otherwise take `a = 0`, `b` nonzero,
/// `c = -b⁻¹`, `d` free. Stratum weights match the stratum sizes
/// `(p-1)p²` and `(p-1)p`, so the mixture is exactly uniform over all
/// `p³ - p` elements.
pub fn random_sl2<R: Rng>(field: PrimeField, rng: &mut R) -> SL2Mat<PrimeField> {
    let p = field.modulus();
    if rng.gen_range(0..=p) < p {
        let a = rng.gen_range(1..p);
        let b = rng.gen_range(0..p);
        let c = rng.gen_range(0..p);
        let bc1 = field.add(&field.mul(&b, &c), &1);
        let d = field.mul(&bc1, &field.inv(&a).expect("a nonzero"));
        SL2Mat::new(field, a, b, c, d).expect("determinant 1 by construction")
    } else {
        let b = rng.gen_range(1..p);
        let c = field.neg(&field.inv(&b).expect("b nonzero"));
        let d = rng.gen_range(0..p);
        SL2Mat::new(field, 0, b, c, d).expect("determinant 1 by construction")
    }
}

/// Random element of `SL₂(Z)` (viewed over `Q`) as a short product of
/// elementary shear matrices with small entries. Exact rational oracle input.
pub fn random_sl2_rational<R: Rng>(rng: &mut R, factors: usize, max_shear: i64) -> SL2Mat<crate::field::Rationals> {
    let f = crate::field::Rationals;
    let mut m = SL2Mat::identity(f);
    for _ in 0..factors {
        let s = rng.gen_range(-max_shear..=max_shear);
        let upper = rng.gen_bool(0.5);
        let e = if upper {
            SL2Mat::from_ints(f, 1, s, 0, 1)
        } else {
            SL2Mat::from_ints(f, 1, 0, s, 1)
        }
        .expect("shears are unimodular");
        m = m.mul(&e);
    }
    m
}

/// Named matrix identities used as oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixIdentity {
    /// `QP = (t_PQ - t_P t_Q) I + t_P Q + t_Q P - PQ`
    Qp,
    /// `A² = t_A A - I`
    Square,
    /// `A⁻¹ = t_A I - A`
    Inverse,
    /// `[A,B] = -t_AB t_B A + t_AB AB + t_B² I - t_B B + t_A A - I`
    Ttt,
}

impl MatrixIdentity {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixIdentity::Qp => "qp",
            MatrixIdentity::Square => "square",
            MatrixIdentity::Inverse => "inverse",
            MatrixIdentity::Ttt => "ttt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "qp" => Some(MatrixIdentity::Qp),
            "square" => Some(MatrixIdentity::Square),
            "inverse" => Some(MatrixIdentity::Inverse),
            "ttt" => Some(MatrixIdentity::Ttt),
            _ => None,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            MatrixIdentity::Qp | MatrixIdentity::Ttt => 2,
            MatrixIdentity::Square | MatrixIdentity::Inverse => 1,
        }
    }
}

/// Check one of the named identities exactly on given matrices.
pub fn check_matrix_identity<F: Field>(
    identity: MatrixIdentity,
    matrices: &[SL2Mat<F>],
) -> Result<bool, Sl2Error> {
    if matrices.len() != identity.arity() {
        return Err(Sl2Error::ArityMismatch {
            name: identity.name(),
            expected: identity.arity(),
            got: matrices.len(),
        });
    }
    let f = matrices[0].field();
    let scale = |m: &SL2Mat<F>, s: &F::Elem| SL2Mat {
        field: f,
        a: f.mul(&m.a, s),
        b: f.mul(&m.b, s),
        c: f.mul(&m.c, s),
        d: f.mul(&m.d, s),
    };
    let add = |m: &SL2Mat<F>, n: &SL2Mat<F>| SL2Mat {
        field: f,
        a: f.add(&m.a, &n.a),
        b: f.add(&m.b, &n.b),
        c: f.add(&m.c, &n.c),
        d: f.add(&m.d, &n.d),
    };
    let id = SL2Mat::identity(f);
    Ok(match identity {
        MatrixIdentity::Qp => {
            let (p, q) = (&matrices[0], &matrices[1]);
            let tp = p.trace();
            let tq = q.trace();
            let tpq = p.mul(q).trace();
            let lhs = q.mul(p);
            let k = f.sub(&tpq, &f.mul(&tp, &tq));
            let rhs = add(
                &add(&scale(&id, &k), &scale(q, &tp)),
                &add(&scale(p, &tq), &p.mul(q).neg()),
            );
            lhs == rhs
        }
        MatrixIdentity::Square => {
            let a = &matrices[0];
            let lhs = a.mul(a);
            let rhs = add(&scale(a, &a.trace()), &id.neg());
            lhs == rhs
        }
        MatrixIdentity::Inverse => {
            let a = &matrices[0];
            let lhs = a.inverse();
            let rhs = add(&scale(&id, &a.trace()), &a.neg());
            lhs == rhs
        }
        MatrixIdentity::Ttt => {
            let (a, b) = (&matrices[0], &matrices[1]);
            let ta = a.trace();
            let tb = b.trace();
            let ab = a.mul(b);
            let tab = ab.trace();
            let lhs = ab.mul(&a.inverse()).mul(&b.inverse());
            let rhs = add(
                &add(
                    &scale(a, &f.neg(&f.mul(&tab, &tb))),
                    &scale(&ab, &tab),
                ),
                &add(
                    &add(&scale(&id, &f.mul(&tb, &tb)), &scale(b, &tb).neg()),
                    &add(&scale(a, &ta), &id.neg()),
                ),
            );
            lhs == rhs
        }
    })
}

/// All `p³ - p` elements of `SL₂(F_p)`; intended for tiny `p`.
pub fn enumerate_sl2(field: PrimeField) -> Vec<SL2Mat<PrimeField>> {
    let p = field.modulus();
    let mut out = Vec::with_capacity((p * p * p - p) as usize);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                if a != 0 {
                    let d = field.mul(&field.add(&field.mul(&b, &c), &1), &field.inv(&a).unwrap());
                    out.push(SL2Mat::new(field, a, b, c, d).unwrap());
                } else if b != 0 {
                    // a = 0 forces -bc = 1
                    if field.mul(&b, &c) == field.neg(&1) {
                        for d in 0..p {
                            out.push(SL2Mat::new(field, 0, b, c, d).unwrap());
                        }
                    }
                }
            }
        }
    }
    out
}

/// Tuple `(A,B,C,D)` with `[A,B]·[C,D] = I`, drawn from the diagonal /
/// anti-diagonal family and conjugated by a random element. A smoke-test
/// sampler over a low-dimensional family, not a Zariski-dense one.
pub fn sample_genus2_tuple<R: Rng>(
    field: PrimeField,
    rng: &mut R,
) -> Result<[SL2Mat<PrimeField>; 4], Sl2Error> {
    let p = field.modulus();
    debug_assert!(p >= 5);
    // mu outside {0, 1, p-1}
    let mu = loop {
        let x = rng.gen_range(2..p - 1);
        if x != p - 1 {
            break x;
        }
    };
    let b = rng.gen_range(1..p);
    let d = rng.gen_range(1..p);
    let mu_inv = field.inv(&mu)?;
    let anti = |x: u64| -> Result<SL2Mat<PrimeField>, Sl2Error> {
        let x_inv = field.inv(&x)?;
        SL2Mat::new(field, 0, x, field.neg(&x_inv), 0)
    };
    let mat_a = SL2Mat::new(field, mu_inv, 0, 0, mu)?;
    let mat_b = anti(b)?;
    let mat_c = SL2Mat::new(field, mu, 0, 0, mu_inv)?;
    let mat_d = anti(d)?;
    let g = random_sl2(field, rng);
    let tuple = [
        mat_a.conjugate_by(&g),
        mat_b.conjugate_by(&g),
        mat_c.conjugate_by(&g),
        mat_d.conjugate_by(&g),
    ];
    let comm = |x: &SL2Mat<PrimeField>, y: &SL2Mat<PrimeField>| {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    };
    if !comm(&tuple[0], &tuple[1]).mul(&comm(&tuple[2], &tuple[3])).is_identity() {
        return Err(Sl2Error::SamplerCheckFailed);
    }
    Ok(tuple)
}

/// Trace assignment for every trace variable of a polynomial, computed from
/// concrete matrices indexed by generator. The oracle-side counterpart of the
/// symbolic reduction.
pub fn trace_assignment<F: Field>(
    poly: &Poly,
    matrices: &BTreeMap<u32, SL2Mat<F>>,
    field: F,
) -> Result<BTreeMap<Var, F::Elem>, PolyError> {
    let mut asg = BTreeMap::new();
    for var in poly.variables() {
        match var {
            Var::Trace(t) => {
                let mut acc = SL2Mat::identity(field);
                for g in t.indices() {
                    let m = matrices
                        .get(g)
                        .ok_or_else(|| PolyError::UnassignedVariable(var.to_string()))?;
                    acc = acc.mul(m);
                }
                asg.insert(var, acc.trace());
            }
            Var::MatrixEntry { gen, row, col } => {
                let m = matrices
                    .get(&gen)
                    .ok_or_else(|| PolyError::UnassignedVariable(var.to_string()))?;
                let entry = match (row, col) {
                    (1, 1) => m.a.clone(),
                    (1, 2) => m.b.clone(),
                    (2, 1) => m.c.clone(),
                    (2, 2) => m.d.clone(),
                    _ => return Err(PolyError::UnassignedVariable(var.to_string())),
                };
                asg.insert(var, entry);
            }
        }
    }
    Ok(asg)
}
