//! Exact evaluation of adjoint weight systems on chord diagrams.
//!
//! A chord diagram with k chords is read as a composition of 2k adjoint
//! operators acting around a circle. Tracing that composition over one of the
//! classical matrix algebras gl(n), sl(n), so(n), sp(n) yields a number for
//! every fixed n; this crate computes the whole family at once, as an exact
//! polynomial in the formal size variable n. No floating point is involved
//! anywhere: coefficients are arbitrary-precision rationals end to end.
//!
//! The crate is organized in layers:
//!
//! * [`poly`]: Laurent polynomials in n over exact rationals (the
//!   coefficient ring for everything else).
//! * [`diagram`]: chord diagrams as double-occurrence words up to rotation:
//!   parsing, canonical forms, enumeration, intersection graphs, products,
//!   and the four-term relations.
//! * [`traceexpr`]: formal linear combinations of products of cyclic trace
//!   words in noncommuting letters, with the star (transpose-like) involution
//!   and the scalar-closure rules.
//! * [`ccd`]: trivalent-vertex diagrams (chord diagrams with internal
//!   vertices), their validation, and the reduction back to plain chord
//!   diagrams via vertex resolution, plus the antisymmetry and edge-exchange
//!   identities.
//! * [`weight`]: the evaluation engine, which expands the circle of adjoint
//!   operators into trace words, contracts chords with the per-family trace
//!   rules, and closes scalars to a polynomial in n.
//! * [`oracle`]: an independent numeric referee, which builds each algebra at
//!   a concrete small size from structure constants and evaluates the same
//!   diagrams by explicit matrix arithmetic over exact rationals. Shares no
//!   code with [`weight`].
//! * [`reps`]: the two-constant reduction of an adjoint-invariant pairing on
//!   an arbitrary representation, and its closed form for sl(2) irreducibles.
//! * [`span`]: exact linear algebra over the span of the four-term
//!   relations: membership tests and quotient dimensions.

pub mod ccd;
pub mod diagram;
pub mod oracle;
pub mod poly;
pub mod reps;
pub mod span;
pub mod traceexpr;
pub mod weight;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// The four classical matrix algebra families an evaluation can target.
///
/// This is a pure label: the symbolic engine and the matrix referee each
/// attach their own meaning to it and share nothing else.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    Gl,
    Sl,
    So,
    Sp,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Gl, Family::Sl, Family::So, Family::Sp];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::Gl),
            "sl" => Ok(Family::Sl),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            other => Err(Error::Parse(format!(
                "unknown algebra family {other:?} (expected gl, sl, so, sp)"
            ))),
        }
    }
}
