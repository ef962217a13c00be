//! Laurent polynomials in the formal size variable `n`, over exact rationals.
//!
//! Every value the engine produces is a polynomial in the matrix size, so
//! this is the coefficient ring for the whole crate. Negative exponents are
//! allowed because the sl(n) trace rules introduce 1/n terms mid-computation;
//! closed evaluations must (and do) cancel them before returning.
//!
//! Text format: terms in descending exponent, explicit signs, `*` between a
//! non-unit coefficient and the variable, e.g. `2*n^4 - 2*n^2`, `n^2 - 1`,
//! `-1/2*n`. The parser also accepts negative exponents (`n^-1`) and an
//! optional `*`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Rational from an integer pair. Intended for literals; panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn rint(p: i64) -> Rational {
    Rational::from(BigInt::from(p))
}

/// Laurent polynomial in `n` with `BigRational` coefficients.
///
/// Invariant: the term map holds no zero coefficients, so equality of maps is
/// equality of polynomials.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<i64, Rational>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rational) -> Self {
        Poly::monomial(c, 0)
    }

    /// An integer constant.
    pub fn from_int(c: i64) -> Self {
        Poly::constant(rint(c))
    }

    /// The monomial `c * n^k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Poly { terms }
    }

    /// The variable power `n^k` (k may be negative).
    pub fn var_pow(k: i64) -> Self {
        Poly::monomial(Rational::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest exponent, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest exponent, or `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Coefficient of the highest-exponent term, or `None` for zero.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Coefficient of `n^k` (zero if the term is absent).
    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// True if no term has a negative exponent (a genuine polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.low_degree().is_none_or(|k| k >= 0)
    }

    fn add_term(&mut self, k: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Multiply by a scalar in place.
    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.terms.clear();
        } else {
            for v in self.terms.values_mut() {
                *v *= c;
            }
        }
    }

    /// `self * c * n^k`, consuming nothing.
    pub fn mul_monomial(&self, c: &Rational, k: i64) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let terms = self.terms.iter().map(|(e, v)| (e + k, v * c)).collect();
        Poly { terms }
    }

    /// Evaluate at a rational point. A negative exponent at `x = 0` is a
    /// domain error; everything else is exact.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (&k, c) in &self.terms {
            let p = if k >= 0 {
                num_traits::pow::pow(x.clone(), k as usize)
            } else {
                if x.is_zero() {
                    return Err(Error::Domain(format!("cannot evaluate n^{k} at n = 0")));
                }
                num_traits::pow::pow(x.clone().recip(), (-k) as usize)
            };
            acc += c * p;
        }
        Ok(acc)
    }

    /// Exact quotient `self / other`. Errors if `other` is zero or if the
    /// division leaves a remainder.
    ///
    /// Laurent division reduces to ordinary division after factoring out the
    /// lowest powers of n from both operands.
    pub fn divide_exact(&self, other: &Poly) -> Result<Poly> {
        if other.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let a = self.low_degree().unwrap();
        let b = other.low_degree().unwrap();
        // Shift both to honest polynomials with nonzero constant term.
        let mut rem: BTreeMap<i64, Rational> =
            self.terms.iter().map(|(k, c)| (k - a, c.clone())).collect();
        let div: BTreeMap<i64, Rational> = other
            .terms
            .iter()
            .map(|(k, c)| (k - b, c.clone()))
            .collect();
        let (&dd, ld) = div.iter().next_back().unwrap();
        let mut quot: BTreeMap<i64, Rational> = BTreeMap::new();
        while let Some((&dr, lr)) = rem.iter().next_back() {
            if dr < dd {
                return Err(Error::NotDivisible(format!(
                    "{self} is not an exact multiple of {other}"
                )));
            }
            let qk = dr - dd;
            let qc = lr / ld;
            for (&k, c) in &div {
                let e = k + qk;
                let delta = c * &qc;
                let entry = rem.entry(e).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rem.remove(&e);
                }
            }
            quot.insert(qk + (a - b), qc);
        }
        Ok(Poly { terms: quot })
    }

    /// Convenience: exact division by `c * n^k`.
    pub fn divide_monomial(&self, c: &Rational, k: i64) -> Result<Poly> {
        if c.is_zero() {
            return Err(Error::Domain("division by zero monomial".into()));
        }
        Ok(self.mul_monomial(&c.recip(), -k))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "n")?;
                } else {
                    write!(f, "n^{k}")?;
                }
            }
        }
        Ok(())
    }
}

// Debug = Display keeps assert_eq! output readable.
impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.i;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.i += 1;
        }
        let digits_from = self.i;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.i += 1;
        }
        if self.i == digits_from {
            self.i = start;
            return None;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parse the display format, liberally: optional `*`, negative
    /// exponents, repeated exponents (summed), arbitrary spacing.
    fn from_str(s: &str) -> Result<Poly> {
        let err = |m: &str| Error::Parse(format!("polynomial {s:?}: {m}"));
        let mut c = Cursor {
            s: s.as_bytes(),
            i: 0,
        };
        let mut out = Poly::zero();
        c.skip_ws();
        if c.peek().is_none() {
            return Err(err("empty input"));
        }
        let mut first = true;
        loop {
            c.skip_ws();
            if c.peek().is_none() {
                break;
            }
            // Sign between terms is mandatory after the first term.
            let mut sign = 1i64;
            if c.eat(b'-') {
                sign = -1;
            } else if c.eat(b'+') {
                // explicit plus
            } else if !first {
                return Err(err("expected '+' or '-' between terms"));
            }
            c.skip_ws();
            // Coefficient (optional when the term starts with `n`).
            let mut coeff = match c.integer() {
                Some(p) => {
                    if c.eat(b'/') {
                        let q = c.integer().ok_or_else(|| err("missing denominator"))?;
                        if q.is_zero() {
                            return Err(err("zero denominator"));
                        }
                        Rational::new(p, q)
                    } else {
                        Rational::from(p)
                    }
                }
                None => Rational::one(),
            };
            if sign < 0 {
                coeff = -coeff;
            }
            c.skip_ws();
            c.eat(b'*');
            c.skip_ws();
            let k = if c.eat(b'n') {
                c.skip_ws();
                if c.eat(b'^') {
                    c.skip_ws();
                    let e = c.integer().ok_or_else(|| err("missing exponent"))?;
                    i64::try_from(e).map_err(|_| err("exponent out of range"))?
                } else {
                    1
                }
            } else {
                0
            };
            out.add_term(k, &coeff);
            first = false;
        }
        Ok(out)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, &-c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &rhs.terms {
                out.add_term(ka + kb, &(ca * cb));
            }
        }
        out
    }
}

impl MulAssign<&Poly> for Poly {
    fn mul_assign(&mut self, rhs: &Poly) {
        *self = &*self * rhs;
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect();
        Poly { terms }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
        let mut out = Poly::zero();
        for _ in 0..rng.gen_range(0..5) {
            let k = rng.gen_range(-3..6);
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=4);
            out.add_term(k, &rat(num, den));
        }
        out
    }

    #[test]
    fn display_matches_expected_format() {
        let q = Poly::monomial(rint(2), 4) - Poly::monomial(rint(2), 2);
        assert_eq!(q.to_string(), "2*n^4 - 2*n^2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::from_int(-3).to_string(), "-3");
        assert_eq!(Poly::var_pow(1).to_string(), "n");
        assert_eq!((-Poly::var_pow(2)).to_string(), "-n^2");
        assert_eq!(Poly::monomial(rat(1, 2), -1).to_string(), "1/2*n^-1");
        let m = Poly::var_pow(2) - Poly::one();
        assert_eq!(m.to_string(), "n^2 - 1");
    }

    #[test]
    fn parse_accepts_the_display_grammar_and_more() {
        assert_eq!(p("2*n^4 - 2*n^2").to_string(), "2*n^4 - 2*n^2");
        assert_eq!(p("n^-1"), Poly::var_pow(-1));
        assert_eq!(p("-n"), Poly::monomial(rint(-1), 1));
        assert_eq!(p("3/2"), Poly::constant(rat(3, 2)));
        assert_eq!(p("2n^2+1"), p("1 + 2*n^2"));
        assert_eq!(p("n^2 - n^2"), Poly::zero());
        assert_eq!(p(" n ^ 2 "), Poly::var_pow(2));
        assert!("".parse::<Poly>().is_err());
        assert!("n^".parse::<Poly>().is_err());
        assert!("2 3".parse::<Poly>().is_err());
        assert!("1/0".parse::<Poly>().is_err());
    }

    #[test]
    fn display_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_poly(&mut rng);
            let back: Poly = a.to_string().parse().unwrap();
            assert_eq!(back, a, "round trip failed for {a}");
        }
    }

    #[test]
    fn degree_and_leading_coeff() {
        let q = p("2*n^4 - 2*n^2 + n^-1");
        assert_eq!(q.degree(), Some(4));
        assert_eq!(q.low_degree(), Some(-1));
        assert_eq!(q.leading_coeff(), Some(&rint(2)));
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::zero().leading_coeff(), None);
        assert!(!q.is_polynomial());
        assert!(p("n^2 - 1").is_polynomial());
    }

    #[test]
    fn eval_is_exact_and_guards_zero() {
        let q = p("2*n^4 - 2*n^2");
        assert_eq!(q.eval(&rint(3)).unwrap(), rint(2 * 81 - 2 * 9));
        assert_eq!(q.eval(&rint(0)).unwrap(), rint(0));
        assert_eq!(p("n^-1").eval(&rat(2, 3)).unwrap(), rat(3, 2));
        assert!(p("n^-1").eval(&rint(0)).is_err());
    }

    #[test]
    fn ring_axioms_hold_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let c = random_poly(&mut rng);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a - &a, Poly::zero());
            assert_eq!(&a * &Poly::one(), a);
        }
    }

    #[test]
    fn eval_is_a_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let x = rat(rng.gen_range(-6i64..=6).max(1), rng.gen_range(1i64..=5));
            let lhs = (&a * &b).eval(&x).unwrap();
            let rhs = a.eval(&x).unwrap() * b.eval(&x).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = (&a + &b).eval(&x).unwrap();
            let rhs = a.eval(&x).unwrap() + b.eval(&x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exact_division_inverts_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut nontrivial = 0;
        for _ in 0..150 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            if b.is_zero() {
                continue;
            }
            nontrivial += 1;
            let prod = &a * &b;
            assert_eq!(prod.divide_exact(&b).unwrap(), a);
        }
        assert!(nontrivial > 100);
    }

    #[test]
    fn division_reports_remainders_and_zero_divisors() {
        let q = p("n^2 - 1");
        assert!(matches!(
            q.divide_exact(&p("n - 2")),
            Err(Error::NotDivisible(_))
        ));
        assert!(matches!(
            q.divide_exact(&Poly::zero()),
            Err(Error::Domain(_))
        ));
        // (n^2 - 1) / (n - 1) = n + 1, and the Laurent shift works too.
        assert_eq!(q.divide_exact(&p("n - 1")).unwrap(), p("n + 1"));
        assert_eq!(
            p("n - n^-1").divide_exact(&p("n^-1")).unwrap(),
            p("n^2 - 1")
        );
    }
}
