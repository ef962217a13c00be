//! Symbolic weight engine: exact adjoint-invariant evaluation of circle
//! words over the classical matrix families, with the matrix size kept as a
//! formal variable n.
//!
//! The value of a degree-k diagram is the trace, over the algebra itself, of
//! the composite map going once around the circle: each endpoint acts by
//! `ad x`, and a chord's two endpoints are summed over dual bases with
//! respect to the defining trace form. Expanding every `ad x (u) = xu - ux`
//! writes the composite as a signed sum over subsets S of endpoint positions
//! of sandwich maps `u -> A u B`, where A multiplies the positions outside S
//! in circle order and B those inside S in reverse order. The operator trace
//! of a sandwich over the algebra is [`AlgebraSpec::same_trace`]; a chord's
//! dual-basis sum inside the resulting trace words is eliminated by
//! [`AlgebraSpec::contract_chord`]. What survives a closed diagram is a pile
//! of scalar traces, closed into one exact Laurent polynomial; the inverse
//! powers of n that sl introduces always cancel in the final value.
//!
//! Everything here is formal; no concrete matrix is ever built. The
//! independent referee that evaluates the same diagrams with explicit bases
//! at fixed sizes lives in [`crate::oracle`].

use rayon::prelude::*;

use crate::diagram::{ChordDiagram, TailedWord};
use crate::poly::{rat, rint, Poly, Rational};
use crate::traceexpr::{star_word, Letter, TraceExpr, TraceTerm};
use crate::{Error, Family, Result};

/// Per-family evaluation rules. Construction is cheap; the family is the
/// only state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    family: Family,
}

/// Degree shape of a closed value next to what the diagram's interleaving
/// graph predicts: the degree can never exceed `k + 2`, reaches it exactly
/// for 2-colorable interleaving graphs, and the leading coefficient is then
/// the number of proper 2-colorings.
#[derive(Clone, Debug)]
pub struct LeadingAnalysis {
    pub value: Poly,
    /// `None` when the value is identically zero.
    pub degree: Option<i64>,
    pub leading_coeff: Option<Rational>,
    /// The a priori top degree `k + 2`.
    pub top_degree: i64,
    /// True when `degree == top_degree`.
    pub saturates: bool,
    pub d_diagram: bool,
    pub split_count: u64,
}

fn add_words(out: &mut TraceExpr, words: Vec<Vec<Letter>>, coeff: Poly) {
    let (term, sign) = TraceTerm::from_raw(words);
    out.add_term(term, if sign < 0 { -coeff } else { coeff });
}

fn cat(p: &[Letter], q: &[Letter]) -> Vec<Letter> {
    let mut w = p.to_vec();
    w.extend_from_slice(q);
    w
}

/// Word factor and slot of the endpoint letter with the given id, star or
/// not. Ids are unique across a term, so the first hit is the only one.
fn locate(words: &[Vec<Letter>], id: u32) -> Option<(usize, usize)> {
    for (wi, w) in words.iter().enumerate() {
        for (pi, l) in w.iter().enumerate() {
            if matches!(l, Letter::X { id: i, .. } if *i == id) {
                return Some((wi, pi));
            }
        }
    }
    None
}

/// The letters strictly between `from` and `to`, walking cyclically. With
/// `from == to` this is everything except that one slot.
fn cyclic_gap(w: &[Letter], from: usize, to: usize) -> Vec<Letter> {
    let m = w.len();
    let mut out = Vec::with_capacity(m);
    let mut i = (from + 1) % m;
    while i != to {
        out.push(w[i]);
        i = (i + 1) % m;
    }
    out
}

impl AlgebraSpec {
    pub fn new(family: Family) -> AlgebraSpec {
        AlgebraSpec { family }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Trace of the identity of the defining matrix space: n, except 2n for
    /// sp whose defining space is 2n-dimensional.
    pub fn trace_dim(&self) -> Poly {
        match self.family {
            Family::Sp => Poly::monomial(rint(2), 1),
            _ => Poly::var_pow(1),
        }
    }

    /// Dimension of the algebra as a polynomial in n.
    pub fn dimension_poly(&self) -> Poly {
        match self.family {
            Family::Gl => Poly::var_pow(2),
            Family::Sl => Poly::var_pow(2) - Poly::one(),
            Family::So => Poly::monomial(rat(1, 2), 2) - Poly::monomial(rat(1, 2), 1),
            Family::Sp => Poly::monomial(rint(2), 2) + Poly::var_pow(1),
        }
    }

    /// Operator trace over the algebra of `u -> P u Q`: the dual-basis sum
    /// of `Tr(P a Q a~)` in the defining space. Closed forms, with `*` the
    /// transpose of a word and J the invariant antisymmetric form of sp:
    ///
    ///   gl: Tr(P) Tr(Q)
    ///   sl: Tr(P) Tr(Q) - (1/n) Tr(P Q)
    ///   so: (Tr(P) Tr(Q) - Tr(P Q*)) / 2
    ///   sp: (Tr(P) Tr(Q) - Tr(P J Q* J)) / 2
    pub fn same_trace(&self, p: &[Letter], q: &[Letter]) -> TraceExpr {
        let mut out = TraceExpr::zero();
        add_words(
            &mut out,
            vec![p.to_vec(), q.to_vec()],
            match self.family {
                Family::Gl | Family::Sl => Poly::one(),
                Family::So | Family::Sp => Poly::constant(rat(1, 2)),
            },
        );
        match self.family {
            Family::Gl => {}
            Family::Sl => {
                add_words(&mut out, vec![cat(p, q)], Poly::monomial(rint(-1), -1));
            }
            Family::So => {
                let (qs, s) = star_word(q);
                add_words(&mut out, vec![cat(p, &qs)], Poly::constant(rat(-s, 2)));
            }
            Family::Sp => {
                let (qs, s) = star_word(q);
                let w = cat(p, &cat(&[Letter::J], &cat(&qs, &[Letter::J])));
                add_words(&mut out, vec![w], Poly::constant(rat(-s, 2)));
            }
        }
        out
    }

    /// Dual-basis sum of `Tr(P a) Tr(Q a~)`: the contraction of a chord
    /// whose endpoints sit in two different trace factors.
    ///
    ///   gl: Tr(P Q)
    ///   sl: Tr(P Q) - (1/n) Tr(P) Tr(Q)
    ///   so: (Tr(P Q) - Tr(P Q*)) / 2
    ///   sp: (Tr(P Q) + Tr(P J Q* J)) / 2
    pub fn cross_trace(&self, p: &[Letter], q: &[Letter]) -> TraceExpr {
        let mut out = TraceExpr::zero();
        add_words(
            &mut out,
            vec![cat(p, q)],
            match self.family {
                Family::Gl | Family::Sl => Poly::one(),
                Family::So | Family::Sp => Poly::constant(rat(1, 2)),
            },
        );
        match self.family {
            Family::Gl => {}
            Family::Sl => {
                add_words(
                    &mut out,
                    vec![p.to_vec(), q.to_vec()],
                    Poly::monomial(rint(-1), -1),
                );
            }
            Family::So => {
                let (qs, s) = star_word(q);
                add_words(&mut out, vec![cat(p, &qs)], Poly::constant(rat(-s, 2)));
            }
            Family::Sp => {
                let (qs, s) = star_word(q);
                let w = cat(p, &cat(&[Letter::J], &cat(&qs, &[Letter::J])));
                add_words(&mut out, vec![w], Poly::constant(rat(s, 2)));
            }
        }
        out
    }

    /// Resolve a (possibly starred) chord endpoint before contraction. Stars
    /// reach endpoints only through the so/sp rules: so transposes an
    /// algebra element to its negative, sp to `J x J` (using `J^2 = -1`).
    /// Over gl/sl no rule ever stars an endpoint, so a starred one there is
    /// an internal inconsistency.
    pub fn destar_endpoint(&self, word: &[Letter], idx: usize) -> Result<(Vec<Letter>, i64)> {
        match word.get(idx) {
            Some(&Letter::X { star: false, .. }) => Ok((word.to_vec(), 1)),
            Some(&Letter::X { id, star: true }) => match self.family {
                Family::Gl | Family::Sl => Err(Error::Internal(format!(
                    "transposed endpoint x{id}* cannot arise over {}",
                    self.family
                ))),
                Family::So => {
                    let mut w = word.to_vec();
                    w[idx] = Letter::x(id);
                    Ok((w, -1))
                }
                Family::Sp => {
                    let mut w = word.to_vec();
                    w.splice(idx..=idx, [Letter::J, Letter::x(id), Letter::J]);
                    Ok((w, 1))
                }
            },
            _ => Err(Error::Internal(format!("no endpoint letter at slot {idx}"))),
        }
    }

    /// One expansion term: `(-1)^|S| same_trace(A_S, B_S)` for the subset
    /// encoded by the bits of `s`.
    fn subset_term(&self, m: usize, s: u64) -> TraceExpr {
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for p in 0..m {
            if s >> p & 1 == 0 {
                a.push(Letter::x(p as u32));
            }
        }
        for p in (0..m).rev() {
            if s >> p & 1 == 1 {
                b.push(Letter::x(p as u32));
            }
        }
        let mut e = self.same_trace(&a, &b);
        if s.count_ones() % 2 == 1 {
            e.scale_rat(&rint(-1));
        }
        e
    }

    /// The full subset expansion of an m-endpoint circle, before any chord
    /// is contracted. Exponential in m; callers contract per subset instead
    /// of materializing this for anything but inspection.
    pub fn circle_expand(&self, m: usize) -> TraceExpr {
        let mut out = TraceExpr::zero();
        for s in 0..1u64 << m {
            out.add(&self.subset_term(m, s));
        }
        out
    }

    /// Eliminate one chord's dual-basis sum from every term. The endpoints
    /// are the letters with ids `id1`, `id2` (each exactly once per term);
    /// both are destarred first, then the sum collapses through
    /// [`Self::same_trace`] (both in one word) or [`Self::cross_trace`]
    /// (different words).
    pub fn contract_chord(&self, expr: &TraceExpr, id1: u32, id2: u32) -> Result<TraceExpr> {
        let mut out = TraceExpr::zero();
        for (term, coeff) in expr.terms() {
            let mut words: Vec<Vec<Letter>> =
                term.words().iter().map(|w| w.letters().to_vec()).collect();
            let mut sign = 1i64;
            for id in [id1, id2] {
                let (wi, pi) = locate(&words, id).ok_or_else(|| {
                    Error::Internal(format!("endpoint x{id} not present for contraction"))
                })?;
                let (w, s) = self.destar_endpoint(&words[wi], pi)?;
                words[wi] = w;
                sign *= s;
            }
            let (w1, p1) = locate(&words, id1).unwrap();
            let (w2, p2) = locate(&words, id2).unwrap();
            let rule = if w1 == w2 {
                let x = cyclic_gap(&words[w1], p1, p2);
                let y = cyclic_gap(&words[w1], p2, p1);
                self.same_trace(&y, &x)
            } else {
                let x = cyclic_gap(&words[w1], p1, p1);
                let y = cyclic_gap(&words[w2], p2, p2);
                self.cross_trace(&x, &y)
            };
            let rest: Vec<Vec<Letter>> = words
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != w1 && *i != w2)
                .map(|(_, w)| w.clone())
                .collect();
            for (rt, rc) in rule.terms() {
                let mut raw = rest.clone();
                raw.extend(rt.words().iter().map(|w| w.letters().to_vec()));
                let (t, s2) = TraceTerm::from_raw(raw);
                let mut c = coeff.clone();
                c *= rc;
                out.add_term(t, if sign * s2 < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Expand, contract every chord, and close scalar traces. The subsets
    /// are independent, so each one runs the whole pipeline and the results
    /// are summed (in parallel once the circle is large enough for the
    /// split to pay for itself).
    fn evaluate_word(&self, m: usize, pairs: &[(usize, usize)]) -> Result<TraceExpr> {
        if m > 22 {
            return Err(Error::Unsupported(format!(
                "a {m}-endpoint circle expands into 2^{m} terms"
            )));
        }
        let dim = self.trace_dim();
        let run = |s: u64| -> Result<TraceExpr> {
            let mut e = self.subset_term(m, s);
            for &(i, j) in pairs {
                e = self.contract_chord(&e, i as u32, j as u32)?;
                e = e.close_scalars(&dim);
            }
            Ok(e.close_scalars(&dim))
        };
        let total = 1u64 << m;
        if m >= 10 {
            (0..total)
                .into_par_iter()
                .map(run)
                .try_reduce(TraceExpr::zero, |mut a, b| {
                    a.add(&b);
                    Ok(a)
                })
        } else {
            let mut acc = TraceExpr::zero();
            for s in 0..total {
                acc.add(&run(s)?);
            }
            Ok(acc)
        }
    }

    /// The invariant value of a closed diagram, exact in n.
    pub fn evaluate_closed(&self, d: &ChordDiagram) -> Result<Poly> {
        let t = TailedWord::from(d);
        let e = self.evaluate_word(t.len(), &t.chord_pairs())?;
        let p = e.as_scalar().ok_or_else(|| {
            Error::Internal("endpoint letters survived a closed evaluation".into())
        })?;
        if !p.is_polynomial() {
            return Err(Error::Internal(format!(
                "closed value {p} has negative powers of n"
            )));
        }
        Ok(p)
    }

    /// The invariant value of a tailed word: chords are contracted, tail
    /// letters stay symbolic (position indices name them), and the result is
    /// a trace expression whose coefficients are exact in n. Tails are not
    /// reduced by any membership condition: over so/sp they may appear
    /// starred, and substituting an actual algebra element resolves the star.
    pub fn evaluate_open(&self, t: &TailedWord) -> Result<TraceExpr> {
        self.evaluate_word(t.len(), &t.chord_pairs())
    }

    /// Closed value plus the degree/coefficient shape next to the diagram's
    /// interleaving-graph predictions.
    pub fn leading_analysis(&self, d: &ChordDiagram) -> Result<LeadingAnalysis> {
        let value = self.evaluate_closed(d)?;
        let degree = value.degree();
        let top_degree = d.degree() as i64 + 2;
        Ok(LeadingAnalysis {
            degree,
            leading_coeff: value.leading_coeff().cloned(),
            top_degree,
            saturates: degree == Some(top_degree),
            d_diagram: d.is_d_diagram(),
            split_count: d.split_count(),
            value,
        })
    }
}
