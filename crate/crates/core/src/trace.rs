//! The trace calculus: rewrite the trace of any free-group word into a
//! canonical polynomial in the trace coordinates `t[S]`, `|S| ≤ 3`.
//!
//! The rewriting runs on a measure-minimal representative of the word's
//! rotation/inversion orbit and terminates by the lexicographic measure
//! (negative atoms, atom count, inversion count): inverse elimination drops
//! the first component, power contraction and the length-4 cut drop the
//! second, adjacent swaps drop the third. Results are memoized on the cyclic
//! normal form, which conjugate words share.
//!
//! Canonical outputs keep every triple symbol at degree ≤ 1 via its quadratic
//! relation. No uniqueness beyond that is claimed: the output contract is
//! soundness — evaluating at the traces of any SL₂ assignment reproduces the
//! trace of the word exactly.

use crate::poly::{Poly, TraceVar, Var};
use crate::word::Word;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("generator index {index} out of range 1..={max}")]
    GeneratorOutOfRange { index: u32, max: u32 },
    #[error("triple relation requires ascending indices, got ({0}, {1}, {2})")]
    NonAscendingTriple(u32, u32, u32),
    #[error("quadruple formula requires pairwise distinct indices, got {0:?}")]
    RepeatedIndex([u32; 4]),
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn tvar(gens: &[u32]) -> Poly {
    Poly::var(Var::Trace(TraceVar::new(gens).expect("ascending tuple")))
}

/// Trace rewriting engine with a memo table keyed on cyclic normal forms.
///
/// The table is not synchronized; create one reducer per thread. All writers
/// would compute identical values, so sharing granularity is a pure
/// performance choice.
#[derive(Debug, Default)]
pub struct TraceReducer {
    memo: HashMap<Word, Poly>,
    steps: u64,
}

impl TraceReducer {
    pub fn new() -> Self {
        TraceReducer::default()
    }

    /// Rewrite steps applied so far (memo hits excluded).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Reduce `tr(word)` to a polynomial in trace coordinates, after checking
    /// that every generator index is at most `max_gen`.
    pub fn reduce(&mut self, word: &Word, max_gen: u32) -> Result<Poly, TraceError> {
        if let Some(l) = word.letters().iter().find(|l| l.gen > max_gen) {
            return Err(TraceError::GeneratorOutOfRange {
                index: l.gen,
                max: max_gen,
            });
        }
        Ok(self.reduce_any(word))
    }

    fn reduce_any(&mut self, word: &Word) -> Poly {
        let key = word.cyclic_normal_form();
        if key.is_empty() {
            return Poly::constant_i64(2);
        }
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let rep = word.measure_minimal_form();
        let result = normalize_triple_degrees(self.reduce_rep(&rep));
        self.memo.insert(key, result.clone());
        result
    }

    /// Apply one rewrite rule to the measure-minimal representative.
    fn reduce_rep(&mut self, rep: &Word) -> Poly {
        self.steps += 1;
        let letters = rep.letters().to_vec();

        // Inverse elimination: w = P a^e Q with e < 0 peels one inverse atom,
        // t_w = t_a t_{P a^{e+1} Q} - t_{P a^{e+2} Q}.
        if let Some(i) = letters.iter().position(|l| l.exp < 0) {
            let child = |delta: i32| {
                let pairs = letters.iter().enumerate().map(|(j, l)| {
                    if j == i {
                        (l.gen, l.exp + delta)
                    } else {
                        (l.gen, l.exp)
                    }
                });
                Word::from_pairs(pairs)
            };
            let ta = tvar(&[letters[i].gen]);
            let p1 = self.reduce_any(&child(1));
            let p2 = self.reduce_any(&child(2));
            return ta.mul(&p1).sub(&p2);
        }

        // Power contraction: w = P a^e Q with e ≥ 2,
        // t_w = t_a t_{P a^{e-1} Q} - t_{P a^{e-2} Q}.
        if let Some(i) = letters.iter().position(|l| l.exp >= 2) {
            let child = |delta: i32| {
                let pairs = letters.iter().enumerate().map(|(j, l)| {
                    if j == i {
                        (l.gen, l.exp - delta)
                    } else {
                        (l.gen, l.exp)
                    }
                });
                Word::from_pairs(pairs)
            };
            let ta = tvar(&[letters[i].gen]);
            let p1 = self.reduce_any(&child(1));
            let p2 = self.reduce_any(&child(2));
            return ta.mul(&p1).sub(&p2);
        }

        // All exponents are +1 from here on.
        let gens: Vec<u32> = letters.iter().map(|l| l.gen).collect();
        let n = gens.len();

        if n == 1 {
            return tvar(&gens);
        }

        // Composite power: w = s^m cyclically, t_{s^m} = t_s t_{s^(m-1)} - t_{s^(m-2)}.
        if let Some(d) = (1..n).find(|&d| n % d == 0 && (d..n).all(|i| gens[i] == gens[i % d])) {
            let m = n / d;
            let root = Word::from_pairs(gens[..d].iter().map(|&g| (g, 1)));
            let power = |e: usize| {
                Word::from_pairs((0..e * d).map(|i| (gens[i % d], 1)))
            };
            let ts = self.reduce_any(&root);
            let p1 = self.reduce_any(&power(m - 1));
            let p2 = self.reduce_any(&power(m - 2));
            return ts.mul(&p1).sub(&p2);
        }

        if n == 2 {
            debug_assert!(gens[0] < gens[1], "canonical two-letter words ascend");
            return tvar(&gens);
        }

        if n == 3 && gens[0] != gens[1] && gens[1] != gens[2] && gens[0] != gens[2] {
            let mut sorted = gens.clone();
            sorted.sort_unstable();
            if gens == sorted {
                return tvar(&gens);
            }
            // Representative is (i, l, j) with i < j < l: the reversed-cycle
            // rearrangement t_{ACB} = t_A t_BC + t_B t_AC + t_C t_AB
            //                         - t_A t_B t_C - t_ABC.
            let (i, j, l) = (sorted[0], sorted[1], sorted[2]);
            debug_assert_eq!(gens, vec![i, l, j]);
            return tvar(&[i])
                .mul(&tvar(&[j, l]))
                .add(&tvar(&[j]).mul(&tvar(&[i, l])))
                .add(&tvar(&[l]).mul(&tvar(&[i, j])))
                .sub(&tvar(&[i]).mul(&tvar(&[j])).mul(&tvar(&[l])))
                .sub(&tvar(&[i, j, l]));
        }

        // Adjacent swap: w = P B A Q with gen(B) > gen(A),
        // t_w = t_PQ t_AB - t_PQ t_A t_B + t_A t_PBQ + t_B t_PAQ - t_PABQ.
        if let Some(pos) = (0..n - 1).find(|&i| gens[i] > gens[i + 1]) {
            let (gb, ga) = (gens[pos], gens[pos + 1]);
            let splice = |middle: &[u32]| {
                Word::from_pairs(
                    gens[..pos]
                        .iter()
                        .chain(middle)
                        .chain(&gens[pos + 2..])
                        .map(|&g| (g, 1)),
                )
            };
            let t_pq = self.reduce_any(&splice(&[]));
            let t_pbq = self.reduce_any(&splice(&[gb]));
            let t_paq = self.reduce_any(&splice(&[ga]));
            let t_pabq = self.reduce_any(&splice(&[ga, gb]));
            return t_pq
                .mul(&tvar(&[ga, gb]))
                .sub(&t_pq.mul(&tvar(&[ga])).mul(&tvar(&[gb])))
                .add(&tvar(&[ga]).mul(&t_pbq))
                .add(&tvar(&[gb]).mul(&t_paq))
                .sub(&t_pabq);
        }

        // Strictly ascending, length ≥ 4: cut as A·B·C·(rest) through the
        // four-factor trace formula, treating the suffix as one opaque letter.
        debug_assert!(n >= 4 && gens.windows(2).all(|w| w[0] < w[1]));
        let (a, b, c) = (gens[0], gens[1], gens[2]);
        let rest: Vec<u32> = gens[3..].to_vec();
        let with_rest = |prefix: &[u32]| {
            Word::from_pairs(prefix.iter().chain(&rest).map(|&g| (g, 1)))
        };
        let t_bcd = self.reduce_any(&with_rest(&[b, c]));
        let t_acd = self.reduce_any(&with_rest(&[a, c]));
        let t_abd = self.reduce_any(&with_rest(&[a, b]));
        let t_abc = tvar(&[a, b, c]);
        let t_d = self.reduce_any(&with_rest(&[]));
        let t_ad = self.reduce_any(&with_rest(&[a]));
        let t_bd = self.reduce_any(&with_rest(&[b]));
        let t_cd = self.reduce_any(&with_rest(&[c]));
        let (ta, tb, tc) = (tvar(&[a]), tvar(&[b]), tvar(&[c]));
        let (t_ab, t_ac, t_bc) = (tvar(&[a, b]), tvar(&[a, c]), tvar(&[b, c]));
        ta.mul(&t_bcd)
            .add(&tb.mul(&t_acd))
            .add(&tc.mul(&t_abd))
            .add(&t_d.mul(&t_abc))
            .add(&t_ad.mul(&t_bc))
            .sub(&t_ac.mul(&t_bd))
            .add(&t_ab.mul(&t_cd))
            .sub(&t_ad.mul(&tb).mul(&tc))
            .sub(&t_bc.mul(&ta).mul(&t_d))
            .sub(&t_ab.mul(&tc).mul(&t_d))
            .sub(&t_cd.mul(&ta).mul(&tb))
            .add(&ta.mul(&tb).mul(&tc).mul(&t_d))
            .scale(&half())
    }
}

/// Canonical trace polynomial of a word over generators `1..=max_gen`.
pub fn reduce_trace(word: &Word, max_gen: u32) -> Result<Poly, TraceError> {
    TraceReducer::new().reduce(word, max_gen)
}

/// The pair `(X, Y)` built from six coordinate polynomials, with
/// `X = wz + vy + ux - xyz` and
/// `Y = -x² - y² - z² + uyz + vxz + wxy - uvw - u² - v² - w² + 4`.
pub fn xy_polys(x: &Poly, y: &Poly, z: &Poly, u: &Poly, v: &Poly, w: &Poly) -> (Poly, Poly) {
    let big_x = w.mul(z).add(&v.mul(y)).add(&u.mul(x)).sub(&x.mul(y).mul(z));
    let big_y = u
        .mul(y)
        .mul(z)
        .add(&v.mul(x).mul(z))
        .add(&w.mul(x).mul(y))
        .sub(&x.pow(2))
        .sub(&y.pow(2))
        .sub(&z.pow(2))
        .sub(&u.mul(v).mul(w))
        .sub(&u.pow(2))
        .sub(&v.pow(2))
        .sub(&w.pow(2))
        .add(&Poly::constant_i64(4));
    (big_x, big_y)
}

/// Coefficient polynomials of the quadratic relation
/// `t[i,j,l]² = X·t[i,j,l] + Y` satisfied on the character variety, in the
/// six single/pair coordinates on `{i, j, l}`.
pub fn triple_relation(i: u32, j: u32, l: u32) -> Result<(Poly, Poly), TraceError> {
    if !(i < j && j < l) {
        return Err(TraceError::NonAscendingTriple(i, j, l));
    }
    Ok(xy_polys(
        &tvar(&[i]),
        &tvar(&[j]),
        &tvar(&[l]),
        &tvar(&[j, l]),
        &tvar(&[i, l]),
        &tvar(&[i, j]),
    ))
}

/// Reduce every triple symbol to degree ≤ 1 using its quadratic relation.
pub fn normalize_triple_degrees(poly: Poly) -> Poly {
    let mut out = poly;
    let triples: Vec<TraceVar> = out
        .variables()
        .into_iter()
        .filter_map(|v| match v {
            Var::Trace(t) if t.arity() == 3 => Some(t),
            _ => None,
        })
        .collect();
    for t in triples {
        let v = Var::Trace(t);
        if out.degree_in(&v) >= 2 {
            let idx = t.indices();
            let (x, y) = triple_relation(idx[0], idx[1], idx[2]).expect("triple var is ascending");
            out = out.rem_monic_quadratic(&v, &x, &y);
        }
    }
    out
}

/// The half-weighted four-factor trace polynomial over four pairwise distinct
/// generators, expanded into trace coordinates.
pub fn quad_trace_formula(a: u32, b: u32, c: u32, d: u32) -> Result<Poly, TraceError> {
    let idx = [a, b, c, d];
    for (i, x) in idx.iter().enumerate() {
        if idx[i + 1..].contains(x) {
            return Err(TraceError::RepeatedIndex(idx));
        }
    }
    let mut red = TraceReducer::new();
    let mut t = |gens: &[u32]| {
        let w = Word::from_pairs(gens.iter().map(|&g| (g, 1)));
        red.reduce_any(&w)
    };
    let (t_bcd, t_acd, t_abd, t_abc) = (t(&[b, c, d]), t(&[a, c, d]), t(&[a, b, d]), t(&[a, b, c]));
    let (t_ad, t_bc, t_ac, t_bd, t_ab, t_cd) =
        (t(&[a, d]), t(&[b, c]), t(&[a, c]), t(&[b, d]), t(&[a, b]), t(&[c, d]));
    let (ta, tb, tc, td) = (t(&[a]), t(&[b]), t(&[c]), t(&[d]));
    let sum = ta
        .mul(&t_bcd)
        .add(&tb.mul(&t_acd))
        .add(&tc.mul(&t_abd))
        .add(&td.mul(&t_abc))
        .add(&t_ad.mul(&t_bc))
        .sub(&t_ac.mul(&t_bd))
        .add(&t_ab.mul(&t_cd))
        .sub(&t_ad.mul(&tb).mul(&tc))
        .sub(&t_bc.mul(&ta).mul(&td))
        .sub(&t_ab.mul(&tc).mul(&td))
        .sub(&t_cd.mul(&ta).mul(&tb))
        .add(&ta.mul(&tb).mul(&tc).mul(&td));
    Ok(normalize_triple_degrees(sum.scale(&half())))
}

/// `t[1]² + t[2]² + t[1,2]² - t[1]t[2]t[1,2] - 2`, the commutator trace.
pub fn commutator_trace_poly() -> Poly {
    let (t1, t2, t12) = (tvar(&[1]), tvar(&[2]), tvar(&[1, 2]));
    t1.pow(2)
        .add(&t2.pow(2))
        .add(&t12.pow(2))
        .sub(&t1.mul(&t2).mul(&t12))
        .sub(&Poly::constant_i64(2))
}

/// The commutator-times-letter trace:
/// `-t[1,2]t[2]t[1,3] + t[1,2]t[1,2,3] + t[2]²t[3] - t[2]t[2,3] + t[1]t[1,3] - t[3]`.
pub fn ttt_identity_poly() -> Poly {
    let (t1, t2, t3) = (tvar(&[1]), tvar(&[2]), tvar(&[3]));
    let (t12, t13, t23, t123) = (tvar(&[1, 2]), tvar(&[1, 3]), tvar(&[2, 3]), tvar(&[1, 2, 3]));
    t12.mul(&t123)
        .sub(&t12.mul(&t2).mul(&t13))
        .add(&t2.pow(2).mul(&t3))
        .sub(&t2.mul(&t23))
        .add(&t1.mul(&t13))
        .sub(&t3)
}
