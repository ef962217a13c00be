//! Formal trace calculus: exact linear combinations of products of traces of
//! words in noncommuting letters.
//!
//! A letter is either an endpoint symbol `x<id>` (optionally starred, the
//! transpose-like involution) or the distinguished antisymmetric form symbol
//! `J` with `J*J = -1`. A word stands for the trace of the product of its
//! letters, so words are cyclic; a term is a finite product of such traces; an
//! expression is a rational-polynomial combination of terms.
//!
//! This layer knows nothing about Lie algebra families. It only implements
//! the identities that hold verbatim in the matrix calculus:
//!
//! * cyclicity of the trace (words are kept in least-rotation form),
//! * `J . J = -identity` inside a word (cyclically adjacent `J`s cancel
//!   against a factor of -1),
//! * `star` is an anti-automorphism fixing endpoint letters up to the star
//!   flag and negating `J`,
//! * a trace of the empty word is the dimension of the underlying matrix
//!   space, and the trace of `J` alone is zero (scalar closure).

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Poly, Rational};

/// One noncommuting letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    /// Endpoint symbol `x<id>`, starred or not. Ordered before `J`.
    X { id: u32, star: bool },
    /// The antisymmetric form: `J` transposes to `-J` and squares to `-1`.
    J,
}

impl Letter {
    pub fn x(id: u32) -> Letter {
        Letter::X { id, star: false }
    }

    pub fn x_star(id: u32) -> Letter {
        Letter::X { id, star: true }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X { id, star: false } => write!(f, "x{id}"),
            Letter::X { id, star: true } => write!(f, "x{id}*"),
            Letter::J => write!(f, "J"),
        }
    }
}

/// Trace word in least-rotation normal form with cyclically adjacent `J J`
/// pairs removed. Construction via [`normalize_word`] returns the sign those
/// removals produce.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True for the single-letter word `J` (which closes to trace zero).
    pub fn is_bare_j(&self) -> bool {
        self.letters == [Letter::J]
    }

    /// True if no letter is an endpoint symbol (only scalar content).
    pub fn is_scalar(&self) -> bool {
        self.is_empty() || self.is_bare_j()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tr(")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Remove one cyclically adjacent `J J` pair, if any. True if removed.
fn drop_one_jj(letters: &mut Vec<Letter>) -> bool {
    let m = letters.len();
    if m < 2 {
        return false;
    }
    for i in 0..m {
        let j = (i + 1) % m;
        if i != j && letters[i] == Letter::J && letters[j] == Letter::J {
            // Remove the larger index first to keep the smaller valid.
            let (lo, hi) = (i.min(j), i.max(j));
            letters.remove(hi);
            letters.remove(lo);
            return true;
        }
    }
    false
}

/// Normalize a raw cyclic word: cancel `J J` pairs (cyclically, each worth a
/// factor of -1) and rotate to the lexicographically least position. Returns
/// the word and the accumulated sign.
pub fn normalize_word(mut letters: Vec<Letter>) -> (CyclicWord, i64) {
    let mut sign = 1i64;
    while drop_one_jj(&mut letters) {
        sign = -sign;
    }
    let m = letters.len();
    if m > 1 {
        let mut best = 0usize;
        for r in 1..m {
            let better = (0..m)
                .map(|i| (&letters[(i + r) % m], &letters[(i + best) % m]))
                .find_map(|(a, b)| match a.cmp(b) {
                    std::cmp::Ordering::Equal => None,
                    o => Some(o == std::cmp::Ordering::Less),
                });
            if better == Some(true) {
                best = r;
            }
        }
        letters.rotate_left(best);
    }
    (CyclicWord { letters }, sign)
}

/// The star (transpose) of a word: reversed order, endpoint stars toggled,
/// each `J` contributing -1. Returns raw letters plus that sign; the result
/// is not yet rotation-normalized.
pub fn star_word(letters: &[Letter]) -> (Vec<Letter>, i64) {
    let mut out = Vec::with_capacity(letters.len());
    let mut sign = 1i64;
    for l in letters.iter().rev() {
        match *l {
            Letter::X { id, star } => out.push(Letter::X { id, star: !star }),
            Letter::J => {
                sign = -sign;
                out.push(Letter::J);
            }
        }
    }
    (out, sign)
}

/// Product of traces: a sorted multiset of normalized cyclic words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TraceTerm {
    words: Vec<CyclicWord>,
}

impl TraceTerm {
    /// Term with no trace factors at all (the scalar 1).
    pub fn one() -> TraceTerm {
        TraceTerm::default()
    }

    /// Assemble from raw words; every word is normalized and the combined
    /// sign from `J J` cancellations is returned.
    pub fn from_raw(words: Vec<Vec<Letter>>) -> (TraceTerm, i64) {
        let mut sign = 1i64;
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            let (cw, s) = normalize_word(w);
            sign *= s;
            out.push(cw);
        }
        out.sort();
        (TraceTerm { words: out }, sign)
    }

    pub fn from_words(words: Vec<CyclicWord>) -> TraceTerm {
        let mut words = words;
        words.sort();
        TraceTerm { words }
    }

    pub fn words(&self) -> &[CyclicWord] {
        &self.words
    }

    pub fn is_scalar(&self) -> bool {
        self.words.iter().all(CyclicWord::is_scalar)
    }
}

impl fmt::Display for TraceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "1");
        }
        for w in &self.words {
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TraceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial-coefficient combination of trace terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TraceExpr {
    terms: BTreeMap<TraceTerm, Poly>,
}

impl TraceExpr {
    pub fn zero() -> TraceExpr {
        TraceExpr::default()
    }

    /// The scalar expression `c` (no trace factors).
    pub fn scalar(c: Poly) -> TraceExpr {
        let mut e = TraceExpr::zero();
        e.add_term(TraceTerm::one(), c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, term: TraceTerm, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(term) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &TraceExpr) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn scale(&mut self, c: &Poly) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for p in self.terms.values_mut() {
            *p *= c;
        }
    }

    pub fn scale_rat(&mut self, c: &Rational) {
        self.scale(&Poly::constant(c.clone()));
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TraceTerm, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Eliminate scalar trace factors: every empty word becomes a factor of
    /// `trace_dim` (the trace of the identity), every bare-`J` word kills its
    /// term. Words with endpoint letters are left alone.
    pub fn close_scalars(&self, trace_dim: &Poly) -> TraceExpr {
        let mut out = TraceExpr::zero();
        'term: for (t, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for w in t.words() {
                if w.is_empty() {
                    coeff *= trace_dim;
                } else if w.is_bare_j() {
                    continue 'term;
                } else {
                    kept.push(w.clone());
                }
            }
            out.add_term(TraceTerm::from_words(kept), coeff);
        }
        out
    }

    /// The value of a fully scalar expression (after [`close_scalars`]).
    /// `None` if any trace factor with endpoint letters survives.
    pub fn as_scalar(&self) -> Option<Poly> {
        let mut acc = Poly::zero();
        for (t, c) in &self.terms {
            if !t.words().is_empty() {
                return None;
            }
            acc += c;
        }
        Some(acc)
    }
}

impl fmt::Display for TraceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TraceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::J;

    fn x(id: u32) -> Letter {
        Letter::x(id)
    }

    fn xs(id: u32) -> Letter {
        Letter::x_star(id)
    }

    #[test]
    fn words_canonicalize_to_least_rotation() {
        let (w, s) = normalize_word(vec![x(1), x(0)]);
        assert_eq!(s, 1);
        assert_eq!(w.letters(), &[x(0), x(1)]);
        let (w, _) = normalize_word(vec![x(2), x(0), x(1)]);
        assert_eq!(w.letters(), &[x(0), x(1), x(2)]);
        // Stars sort after the bare letter, J sorts last.
        let (w, _) = normalize_word(vec![J, x(0), xs(0)]);
        assert_eq!(w.letters(), &[x(0), xs(0), J]);
    }

    #[test]
    fn cyclically_adjacent_j_pairs_cancel_with_signs() {
        // Tr(J J) = -Tr(1)
        let (w, s) = normalize_word(vec![J, J]);
        assert!(w.is_empty());
        assert_eq!(s, -1);
        // Tr(J x J) = Tr(x J J) = -Tr(x): the pair is adjacent around the wrap.
        let (w, s) = normalize_word(vec![J, x(0), J]);
        assert_eq!(w.letters(), &[x(0)]);
        assert_eq!(s, -1);
        // Tr(J J J) = -Tr(J)
        let (w, s) = normalize_word(vec![J, J, J]);
        assert!(w.is_bare_j());
        assert_eq!(s, -1);
        // Tr(J J J J) = +Tr(1)
        let (w, s) = normalize_word(vec![J, J, J, J]);
        assert!(w.is_empty());
        assert_eq!(s, 1);
        // No cancellation across intervening letters.
        let (w, s) = normalize_word(vec![J, x(0), J, x(1)]);
        assert_eq!(s, 1);
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn star_reverses_toggles_and_negates_j() {
        let (w, s) = star_word(&[x(0), x(1), J]);
        assert_eq!(s, -1);
        assert_eq!(w, vec![J, xs(1), xs(0)]);
        // Involution: double star is the identity with sign +1.
        let (w2, s2) = star_word(&w);
        assert_eq!(s * s2, 1);
        assert_eq!(w2, vec![x(0), x(1), J]);
    }

    #[test]
    fn terms_sort_their_factors() {
        let (t1, s1) = TraceTerm::from_raw(vec![vec![x(1)], vec![x(0)]]);
        let (t2, s2) = TraceTerm::from_raw(vec![vec![x(0)], vec![x(1)]]);
        assert_eq!(t1, t2);
        assert_eq!((s1, s2), (1, 1));
    }

    #[test]
    fn expr_arithmetic_merges_and_cancels() {
        let (t, _) = TraceTerm::from_raw(vec![vec![x(0), x(1)]]);
        let mut e = TraceExpr::zero();
        e.add_term(t.clone(), Poly::from_int(2));
        e.add_term(t.clone(), Poly::from_int(-2));
        assert!(e.is_zero());
        e.add_term(t.clone(), Poly::var_pow(1));
        let mut f = TraceExpr::zero();
        f.add_term(t.clone(), Poly::var_pow(1));
        f.scale(&Poly::from_int(3));
        e.add(&f);
        assert_eq!(e.terms().next().unwrap().1, &"4*n".parse().unwrap());
    }

    #[test]
    fn close_scalars_resolves_empty_and_bare_j_words() {
        let n = Poly::var_pow(1);
        let (t, _) = TraceTerm::from_raw(vec![vec![], vec![], vec![x(0), x(1)]]);
        let mut e = TraceExpr::zero();
        e.add_term(t, Poly::from_int(2));
        let (tj, _) = TraceTerm::from_raw(vec![vec![J], vec![x(0)]]);
        e.add_term(tj, Poly::from_int(7));
        let closed = e.close_scalars(&n);
        assert_eq!(closed.len(), 1);
        let (t, c) = closed.terms().next().unwrap();
        assert_eq!(t.words().len(), 1);
        assert_eq!(c, &"2*n^2".parse().unwrap());
        assert_eq!(closed.as_scalar(), None);
        // Fully scalar case.
        let (s, _) = TraceTerm::from_raw(vec![vec![], vec![]]);
        let mut e = TraceExpr::zero();
        e.add_term(s, Poly::from_int(3));
        let closed = e.close_scalars(&n);
        assert_eq!(closed.as_scalar().unwrap(), "3*n^2".parse().unwrap());
    }

    #[test]
    fn display_is_readable() {
        let (t, _) = TraceTerm::from_raw(vec![vec![x(0), xs(1)], vec![]]);
        let mut e = TraceExpr::zero();
        e.add_term(t, Poly::from_int(2));
        assert_eq!(e.to_string(), "(2)*Tr()Tr(x0 x1*)");
        assert_eq!(TraceExpr::zero().to_string(), "0");
        assert_eq!(TraceTerm::one().to_string(), "1");
    }
}
