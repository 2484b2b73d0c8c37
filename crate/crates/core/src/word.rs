//! Free-group words: representation, parsing, free reduction, and the
//! trace-equivalence canonical form (cyclic rotation and inversion).
//!
//! Generator indices are 1-based. A word is a freely reduced sequence of
//! `(generator, exponent)` letters: no zero exponents, adjacent letters carry
//! distinct generators, and the empty sequence is the identity.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator index {index} out of range 1..={max}")]
    GeneratorOutOfRange { index: u32, max: u32 },
    #[error("zero exponent at byte {position}")]
    ZeroExponent { position: usize },
}

/// One letter of a word: a generator raised to a nonzero integer power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u32,
    pub exp: i32,
}

/// Letter comparison for canonical forms: generator first, then positive
/// exponents before negative, then smaller magnitude first. The choice is
/// arbitrary but fixed; memo keys depend on it.
fn letter_key(l: &Letter) -> (u32, u8, u32) {
    (l.gen, if l.exp > 0 { 0 } else { 1 }, l.exp.unsigned_abs())
}

fn letter_cmp(a: &Letter, b: &Letter) -> std::cmp::Ordering {
    letter_key(a).cmp(&letter_key(b))
}

/// A freely reduced free-group word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Build from raw `(gen, exp)` pairs, freely reducing as needed.
    pub fn from_pairs<I: IntoIterator<Item = (u32, i32)>>(pairs: I) -> Self {
        let mut w = Word::identity();
        for (gen, exp) in pairs {
            w.push(gen, exp);
        }
        w
    }

    /// Single generator to a power.
    pub fn generator(gen: u32, exp: i32) -> Self {
        Word::from_pairs([(gen, exp)])
    }

    fn push(&mut self, gen: u32, exp: i32) {
        if exp == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some(last) if last.gen == gen => {
                let merged = last.exp + exp;
                if merged == 0 {
                    self.letters.pop();
                } else {
                    last.exp = merged;
                }
            }
            _ => self.letters.push(Letter { gen, exp }),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of letters after merging equal adjacent generators.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Total letter count with multiplicity: the sum of `|exp|`.
    pub fn atom_len(&self) -> usize {
        self.letters.iter().map(|l| l.exp.unsigned_abs() as usize).sum()
    }

    /// Number of atoms carrying a negative exponent.
    pub fn negative_atoms(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| l.exp < 0)
            .map(|l| l.exp.unsigned_abs() as usize)
            .sum()
    }

    /// Largest generator index used (0 for the identity).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    /// The inverse word, freely reduced.
    pub fn inverse(&self) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { gen: l.gen, exp: -l.exp })
                .collect(),
        }
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.gen, l.exp);
        }
        w
    }

    /// Expand into unit-exponent atoms.
    pub fn atoms(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.atom_len());
        for l in &self.letters {
            let unit = if l.exp > 0 { 1 } else { -1 };
            for _ in 0..l.exp.unsigned_abs() {
                out.push(Letter { gen: l.gen, exp: unit });
            }
        }
        out
    }

    fn from_atoms(atoms: &[Letter]) -> Self {
        Word::from_pairs(atoms.iter().map(|l| (l.gen, l.exp)))
    }

    /// Cyclically reduced form: repeatedly cancel the first letter against the
    /// last. Conjugate words share a cyclic reduction up to rotation.
    pub fn cyclic_reduce(&self) -> Self {
        let mut atoms = self.atoms();
        while atoms.len() >= 2 {
            let first = atoms[0];
            let last = atoms[atoms.len() - 1];
            if first.gen == last.gen && first.exp == -last.exp {
                atoms.pop();
                atoms.remove(0);
            } else {
                break;
            }
        }
        Word::from_atoms(&atoms)
    }

    /// All atom-level rotations of the cyclically reduced word, of it and of
    /// its inverse, re-merged into reduced words.
    fn rotation_orbit(&self) -> Vec<Word> {
        let base = self.cyclic_reduce();
        let mut out = Vec::new();
        for w in [base.clone(), base.inverse()] {
            let atoms = w.atoms();
            if atoms.is_empty() {
                out.push(Word::identity());
                continue;
            }
            for start in 0..atoms.len() {
                let rotated: Vec<Letter> = atoms[start..].iter().chain(&atoms[..start]).copied().collect();
                out.push(Word::from_atoms(&rotated));
            }
        }
        out
    }

    /// Canonical form under trace equivalence: the lexicographically least
    /// word among all rotations of the cyclic reduction of `w` and of `w⁻¹`.
    /// Two words get the same normal form whenever trace equality is forced by
    /// rotation and inversion alone.
    pub fn cyclic_normal_form(&self) -> Word {
        self.rotation_orbit()
            .into_iter()
            .min_by(word_lex_cmp)
            .expect("orbit is never empty")
    }

    /// Orbit representative minimizing the rewrite termination measure
    /// `(negative atoms, atom count, letter count, inversions)`, with the
    /// lexicographic order as the final tie-break. The trace engine processes
    /// this representative; memo keys use [`Word::cyclic_normal_form`].
    pub(crate) fn measure_minimal_form(&self) -> Word {
        self.rotation_orbit()
            .into_iter()
            .min_by(|a, b| {
                measure_key(a)
                    .cmp(&measure_key(b))
                    .then_with(|| word_lex_cmp(a, b))
            })
            .expect("orbit is never empty")
    }

    /// Count of out-of-order atom pairs `(i < j, gen_i > gen_j)`.
    pub(crate) fn inversions(&self) -> usize {
        let atoms = self.atoms();
        let mut n = 0;
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if atoms[i].gen > atoms[j].gen {
                    n += 1;
                }
            }
        }
        n
    }
}

fn measure_key(w: &Word) -> (usize, usize, usize, usize) {
    (w.negative_atoms(), w.atom_len(), w.len(), w.inversions())
}

fn word_lex_cmp(a: &Word, b: &Word) -> std::cmp::Ordering {
    for (x, y) in a.letters.iter().zip(&b.letters) {
        let c = letter_cmp(x, y);
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    a.letters.len().cmp(&b.letters.len())
}

impl fmt::Display for Word {
    /// Generators render as letters `a..z` while every index fits, else `g<i>`;
    /// exponents as `^n` with `^1` omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let letters_ok = self.max_generator() <= 26;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if letters_ok {
                write!(f, "{}", (b'a' + (l.gen - 1) as u8) as char)?;
            } else {
                write!(f, "g{}", l.gen)?;
            }
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

/// Parse a word in the expression grammar:
///
/// ```text
/// word  := term (ws term)* ;
/// term  := atom ('^' '-'? digits)? ;
/// atom  := gen | '(' word ')' | '[' word ',' word ']' ;
/// gen   := 'a'..'z' (a=1, b=2, ...) | 'g' digits (explicit index) ;
/// ```
///
/// `[u,v]` is commutator sugar for `u·v·u⁻¹·v⁻¹`. The result is freely
/// reduced; all generator indices must be ≤ `max_gen`.
pub fn parse_word(text: &str, max_gen: u32) -> Result<Word, WordError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        max_gen,
    };
    let w = parser.parse_word()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(WordError::Syntax {
            position: parser.pos,
            message: format!("unexpected character '{}'", parser.peek_char()),
        });
    }
    Ok(w)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    max_gen: u32,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.peek().map(char::from).unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_word(&mut self) -> Result<Word, WordError> {
        let mut w = Word::identity();
        let mut any = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b) if b.is_ascii_lowercase() || b == b'(' || b == b'[' => {
                    let term = self.parse_term()?;
                    w = w.concat(&term);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(WordError::Syntax {
                position: self.pos,
                message: "expected a generator, '(' or '['".into(),
            });
        }
        Ok(w)
    }

    fn parse_term(&mut self) -> Result<Word, WordError> {
        let atom = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp_pos = self.pos;
            let exp = self.parse_signed_int()?;
            if exp == 0 {
                return Err(WordError::ZeroExponent { position: exp_pos });
            }
            return Ok(word_pow(&atom, exp));
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.parse_word()?;
                self.skip_ws();
                self.expect(b',')?;
                let v = self.parse_word()?;
                self.skip_ws();
                self.expect(b']')?;
                // [u, v] = u v u^-1 v^-1
                Ok(u.concat(&v).concat(&u.inverse()).concat(&v.inverse()))
            }
            Some(b'g') if matches!(self.bytes.get(self.pos + 1), Some(d) if d.is_ascii_digit()) => {
                self.pos += 1;
                let idx = self.parse_unsigned_int()?;
                if idx == 0 || idx > self.max_gen as u64 {
                    return Err(WordError::GeneratorOutOfRange {
                        index: idx.min(u32::MAX as u64) as u32,
                        max: self.max_gen,
                    });
                }
                Ok(Word::generator(idx as u32, 1))
            }
            Some(b) if b.is_ascii_lowercase() => {
                self.pos += 1;
                let idx = (b - b'a') as u32 + 1;
                if idx > self.max_gen {
                    return Err(WordError::GeneratorOutOfRange { index: idx, max: self.max_gen });
                }
                Ok(Word::generator(idx, 1))
            }
            _ => Err(WordError::Syntax {
                position: self.pos,
                message: "expected a generator, '(' or '['".into(),
            }),
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), WordError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(WordError::Syntax {
                position: self.pos,
                message: format!("expected '{}', found '{}'", char::from(b), self.peek_char()),
            })
        }
    }

    fn parse_signed_int(&mut self) -> Result<i32, WordError> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = self.parse_unsigned_int()?;
        let n = i32::try_from(n).map_err(|_| WordError::Syntax {
            position: self.pos,
            message: "exponent too large".into(),
        })?;
        Ok(if negative { -n } else { n })
    }

    fn parse_unsigned_int(&mut self) -> Result<u64, WordError> {
        let start = self.pos;
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(WordError::Syntax {
                position: start,
                message: "expected digits".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| WordError::Syntax {
                position: start,
                message: "number too large".into(),
            })
    }
}

/// `w^n` for any integer `n`, freely reduced.
pub fn word_pow(w: &Word, n: i32) -> Word {
    let base = if n < 0 { w.inverse() } else { w.clone() };
    let mut out = Word::identity();
    for _ in 0..n.unsigned_abs() {
        out = out.concat(&base);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pairs: &[(u32, i32)]) -> Word {
        Word::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn parse_basic() {
        assert_eq!(parse_word("a b^2 c^-1", 3).unwrap(), w(&[(1, 1), (2, 2), (3, -1)]));
        assert_eq!(parse_word("[a,b]", 2).unwrap(), w(&[(1, 1), (2, 1), (1, -1), (2, -1)]));
        assert_eq!(parse_word("a a^-1", 1).unwrap(), Word::identity());
    }

    #[test]
    fn parse_sugar_and_explicit_indices() {
        assert_eq!(parse_word("(a b)^2", 2).unwrap(), w(&[(1, 1), (2, 1), (1, 1), (2, 1)]));
        assert_eq!(parse_word("g27 g1", 27).unwrap(), w(&[(27, 1), (1, 1)]));
        // bare 'g' with no digits is the 7th letter generator
        assert_eq!(parse_word("g a", 7).unwrap(), w(&[(7, 1), (1, 1)]));
        assert_eq!(parse_word("[a b, c]", 3).unwrap(), w(&[(1, 1), (2, 1), (3, 1), (2, -1), (1, -1), (3, -1)]));
    }

    #[test]
    fn parse_errors() {
        match parse_word("a ^ 2", 1) {
            Err(WordError::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_word("d", 3), Err(WordError::GeneratorOutOfRange { index: 4, max: 3 })));
        assert!(matches!(parse_word("g0 a", 3), Err(WordError::GeneratorOutOfRange { .. })));
        assert!(matches!(parse_word("a^0", 1), Err(WordError::ZeroExponent { .. })));
        assert!(parse_word("", 3).is_err());
        assert!(parse_word("(a", 3).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(&[(1, 1), (2, 1)]).inverse(), w(&[(2, -1), (1, -1)]));
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w(&[(1, 3)]).inverse(), w(&[(1, -3)]));
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w(&[(1, 1)]).concat(&w(&[(1, -1)])), Word::identity());
        assert_eq!(w(&[(1, 1)]).concat(&w(&[(1, 2)])), w(&[(1, 3)]));
        assert_eq!(w(&[(1, 1), (2, 1)]).concat(&w(&[(2, -1), (3, 1)])), w(&[(1, 1), (3, 1)]));
    }

    #[test]
    fn cyclic_normal_form_examples() {
        let ab = parse_word("a b", 2).unwrap();
        assert_eq!(parse_word("b a", 2).unwrap().cyclic_normal_form(), ab.cyclic_normal_form());
        assert_eq!(parse_word("b^-1 a^-1", 2).unwrap().cyclic_normal_form(), ab.cyclic_normal_form());
        let abc = parse_word("a b c", 3).unwrap();
        assert_eq!(parse_word("c a b", 3).unwrap().cyclic_normal_form(), abc.cyclic_normal_form());
    }

    #[test]
    fn cyclic_normal_form_cancels_conjugation() {
        let base = parse_word("a b^2", 3).unwrap();
        let g = parse_word("c a^-1 b", 3).unwrap();
        let conj = g.concat(&base).concat(&g.inverse());
        assert_eq!(conj.cyclic_normal_form(), base.cyclic_normal_form());
    }

    #[test]
    fn display_roundtrip() {
        for text in ["a b^2 c^-1", "a", "g1 g2^-3"] {
            let parsed = parse_word(text, 3).unwrap();
            let rendered = parsed.to_string();
            assert_eq!(parse_word(&rendered, 3).unwrap(), parsed);
        }
        assert_eq!(Word::identity().to_string(), "1");
        let big = Word::from_pairs([(27, 2), (1, -1)]);
        assert_eq!(big.to_string(), "g27^2 g1^-1");
        assert_eq!(parse_word(&big.to_string(), 27).unwrap(), big);
    }
}
