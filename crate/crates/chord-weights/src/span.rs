//! Exact linear algebra over the degree-`k` chord-diagram vector space.
//!
//! [`SpanBasis`] fixes the canonical diagrams of one degree as coordinates,
//! turns every four-term relation into a rational row vector, and keeps a
//! reduced row-echelon form of the relation matrix.  That answers the two
//! questions everything downstream needs: does a given combination of
//! diagrams lie in the relation span ([`SpanBasis::membership`]), and what is
//! the dimension of the quotient space ([`SpanBasis::quotient_dimension`]).
//!
//! [`d_diagram_basis_check`] ties the span to the weight engine: diagrams
//! whose interleaving graph is two-colorable are exactly the ones whose
//! invariant reaches polynomial degree `k + 2`, so every basis of the
//! quotient must contain one.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::ccd::DiagramCombination;
use crate::diagram::{enumerate_diagrams, four_t_relations, ChordDiagram};
use crate::error::Error;
use crate::poly::Rational;
use crate::weight::AlgebraSpec;
use crate::{Family, Result};

/// Degrees past this take minutes instead of seconds; refuse them early.
const MAX_DEGREE: usize = 5;

/// The four-term relation span at one degree, with coordinates fixed by the
/// lexicographic order of canonical words.
pub struct SpanBasis {
    degree: usize,
    diagrams: Vec<ChordDiagram>,
    index: BTreeMap<ChordDiagram, usize>,
    relations: Vec<Vec<Rational>>,
    echelon: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "degree {k} exceeds the span limit of {MAX_DEGREE}"
            )));
        }
        let mut diagrams = enumerate_diagrams(k);
        diagrams.sort();
        let index: BTreeMap<ChordDiagram, usize> = diagrams
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i))
            .collect();
        let cols = diagrams.len();
        let generators = if k < 2 {
            Vec::new()
        } else {
            four_t_relations(k)?
        };
        let relations: Vec<Vec<Rational>> = generators
            .par_iter()
            .map(|rel| {
                let mut row = vec![Rational::zero(); cols];
                for (d, c) in rel.terms() {
                    row[index[d]] += Rational::from_integer(c.into());
                }
                row
            })
            .collect();
        let (echelon, pivots) = rref(relations.clone());
        Ok(SpanBasis {
            degree: k,
            diagrams,
            index,
            relations,
            echelon,
            pivots,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Canonical diagrams of this degree, in coordinate order.
    pub fn diagrams(&self) -> &[ChordDiagram] {
        &self.diagrams
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn quotient_dimension(&self) -> usize {
        self.diagrams.len() - self.rank()
    }

    /// Coordinates of a combination, or a degree-mismatch error.
    pub fn vector(&self, v: &DiagramCombination) -> Result<Vec<Rational>> {
        if let Some(d) = v.degree() {
            if d != self.degree {
                return Err(Error::Domain(format!(
                    "combination has degree {d}, this span has degree {}",
                    self.degree
                )));
            }
        }
        let mut row = vec![Rational::zero(); self.diagrams.len()];
        for (d, c) in v.terms() {
            let i = *self
                .index
                .get(d)
                .ok_or_else(|| Error::Internal("diagram missing from canonical index".into()))?;
            row[i] = c.clone();
        }
        Ok(row)
    }

    /// True iff the combination lies in the four-term span.
    pub fn membership(&self, v: &DiagramCombination) -> Result<bool> {
        let mut row = self.vector(v)?;
        reduce_row(&mut row, &self.echelon, &self.pivots);
        Ok(row.iter().all(Zero::is_zero))
    }

    /// The relation matrix as CSV: a header of canonical words, then one row
    /// of rational coefficients per relation.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let words: Vec<String> = self.diagrams.iter().map(|d| d.to_string()).collect();
        out.push_str(&words.join(","));
        out.push('\n');
        for row in &self.relations {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Dimension of the degree-`k` quotient: canonical diagrams minus the rank
/// of the four-term relations.
pub fn quotient_dimension(k: usize) -> Result<usize> {
    Ok(SpanBasis::new(k)?.quotient_dimension())
}

/// Reduce `row` against a reduced row-echelon basis with unit pivots.
fn reduce_row(row: &mut [Rational], echelon: &[Vec<Rational>], pivots: &[usize]) {
    for (r, &p) in echelon.iter().zip(pivots) {
        if !row[p].is_zero() {
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                *x -= &f * y;
            }
        }
    }
}

/// Reduced row-echelon form with unit pivots; returns the nonzero rows and
/// their pivot columns in increasing column order.
fn rref(rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        reduce_row(&mut row, &echelon, &pivots);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let lead = row[p].clone();
        for x in row.iter_mut() {
            *x /= &lead;
        }
        for r in echelon.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        let at = pivots.partition_point(|&q| q < p);
        echelon.insert(at, row);
        pivots.insert(at, p);
    }
    (echelon, pivots)
}

/// Outcome of the basis argument at one degree, see [`d_diagram_basis_check`].
#[derive(Clone, Debug)]
pub struct DDiagramReport {
    pub degree: usize,
    /// The last canonical diagram attaining polynomial degree `k + 2`.
    pub witness: ChordDiagram,
    pub witness_poly_degree: i64,
    pub d_diagram_count: usize,
    /// Largest polynomial degree among the other diagrams, if any exist.
    pub max_other_degree: Option<i64>,
}

/// Verify, degree by degree, the argument that no basis of the quotient can
/// avoid diagrams with two-colorable interleaving graphs: exactly those
/// diagrams reach polynomial degree `k + 2` under the sl evaluation, and
/// everything else stays strictly lower.  Since the evaluation respects the
/// four-term span, a basis of lower-degree values could never represent the
/// witness.  Returns the witnessing diagram and the observed degrees.
pub fn d_diagram_basis_check(k: usize) -> Result<DDiagramReport> {
    if k > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "degree {k} exceeds the span limit of {MAX_DEGREE}"
        )));
    }
    let spec = AlgebraSpec::new(Family::Sl);
    let top = k as i64 + 2;
    let mut witness: Option<ChordDiagram> = None;
    let mut d_count = 0usize;
    let mut max_other: Option<i64> = None;
    let mut diagrams = enumerate_diagrams(k);
    diagrams.sort();
    for d in diagrams {
        let value = spec.evaluate_closed(&d)?;
        let deg = value.degree().unwrap_or(i64::MIN);
        if d.is_d_diagram() {
            d_count += 1;
            if deg != top {
                return Err(Error::Internal(format!(
                    "two-colorable diagram {d} reached degree {deg}, expected {top}"
                )));
            }
            witness = Some(d);
        } else {
            if deg >= top {
                return Err(Error::Internal(format!(
                    "diagram {d} without a two-coloring reached degree {deg}"
                )));
            }
            if deg != i64::MIN {
                max_other = Some(max_other.map_or(deg, |m| m.max(deg)));
            }
        }
    }
    let witness = witness.ok_or_else(|| {
        Error::Internal(format!(
            "no degree-{k} diagram attains polynomial degree {top}"
        ))
    })?;
    Ok(DDiagramReport {
        degree: k,
        witness,
        witness_poly_degree: top,
        d_diagram_count: d_count,
        max_other_degree: max_other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccd::ChineseDiagram;
    use crate::poly::rint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn combo(pairs: &[(&str, i64)]) -> DiagramCombination {
        let mut out = DiagramCombination::new();
        for (w, c) in pairs {
            out.add(w.parse().unwrap(), rint(*c));
        }
        out
    }

    #[test]
    fn quotient_dimensions_match_the_frozen_table() {
        let expected_dim = [1, 1, 2, 3, 6, 10];
        let expected_rank = [0, 0, 0, 2, 12, 95];
        let expected_relations = [0, 0, 0, 2, 25, 366];
        for k in 0..=5 {
            let s = SpanBasis::new(k).unwrap();
            assert_eq!(s.quotient_dimension(), expected_dim[k], "degree {k}");
            assert_eq!(s.rank(), expected_rank[k], "degree {k}");
            assert_eq!(s.relation_count(), expected_relations[k], "degree {k}");
        }
        assert!(matches!(
            SpanBasis::new(MAX_DEGREE + 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn membership_accepts_generators_and_rejects_outsiders() {
        for k in [3, 4] {
            let s = SpanBasis::new(k).unwrap();
            for rel in four_t_relations(k).unwrap() {
                let v = DiagramCombination::from(&rel);
                assert!(s.membership(&v).unwrap(), "{rel} at degree {k}");
            }
        }
        let s2 = SpanBasis::new(2).unwrap();
        assert!(s2.membership(&DiagramCombination::new()).unwrap());
        assert!(!s2.membership(&combo(&[("aabb", 1)])).unwrap());
        assert!(!s2.membership(&combo(&[("aabb", 1), ("abab", -1)])).unwrap());
        assert!(matches!(
            s2.membership(&combo(&[("aabbcc", 1)])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rank_ignores_relation_order_and_spans_its_echelon() {
        let s = SpanBasis::new(4).unwrap();
        let mut reversed = s.relations.clone();
        reversed.reverse();
        let (back, _) = rref(reversed);
        assert_eq!(back.len(), s.rank());
        // Each echelon row must already lie in the span of the reversed
        // reduction, so the two row spaces coincide.
        let (rev_ech, rev_piv) = {
            let mut rows = s.relations.clone();
            rows.reverse();
            rref(rows)
        };
        for row in &s.echelon {
            let mut r = row.clone();
            reduce_row(&mut r, &rev_ech, &rev_piv);
            assert!(r.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn the_invariant_vanishes_on_the_span() {
        for fam in Family::ALL {
            let spec = AlgebraSpec::new(fam);
            for rel in four_t_relations(3).unwrap() {
                let mut total = crate::poly::Poly::zero();
                for (d, c) in rel.terms() {
                    let mut v = spec.evaluate_closed(d).unwrap();
                    v.scale(&rint(c));
                    total += &v;
                }
                assert!(total.is_zero(), "{fam}: {rel}");
            }
        }
    }

    #[test]
    fn ccd_identities_land_in_the_span() {
        let s = SpanBasis::new(3).unwrap();
        let mercedes = ChineseDiagram::from_json_str(
            r#"{"circle":["u1","u2","u3"],
                "interior":[{"id":"v1","nbrs":["u1","v2","v3"]},
                            {"id":"v2","nbrs":["u2","v3","v1"]},
                            {"id":"v3","nbrs":["u3","v1","v2"]}]}"#,
        )
        .unwrap();
        let h_diagram = ChineseDiagram::from_json_str(
            r#"{"circle":["u1","u2","u3","u4"],
                "interior":[{"id":"v","nbrs":["w","u1","u2"]},
                            {"id":"w","nbrs":["v","u3","u4"]}]}"#,
        )
        .unwrap();

        // Antisymmetry: plain + reversed reduces into the span.
        for d in [&mercedes, &h_diagram] {
            for v in d.interior().keys() {
                let (plain, reversed) = d.as_pair(v).unwrap();
                let total = plain
                    .stu_reduce()
                    .unwrap()
                    .sum(&reversed.stu_reduce().unwrap());
                assert!(s.membership(&total).unwrap(), "as at {v}: {total}");
            }
        }

        // IHX: the alternating sum reduces into the span (for the Mercedes
        // it is nonzero, so this genuinely uses the relations).
        let (i, h, x) = mercedes.ihx_triple("v1", "v2").unwrap();
        let total = i
            .stu_reduce()
            .unwrap()
            .sub(&h.stu_reduce().unwrap())
            .sum(&x.stu_reduce().unwrap());
        assert!(!total.is_zero());
        assert!(s.membership(&total).unwrap(), "ihx: {total}");

        // Any two resolution orders agree modulo the span.
        let base = mercedes.stu_reduce().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let other = mercedes
                .stu_reduce_with(&mut |n| rng.gen_range(0..n))
                .unwrap();
            assert!(s.membership(&base.sub(&other)).unwrap());
        }
    }

    #[test]
    fn basis_check_reports_the_expected_witnesses() {
        let expected = ["", "aa", "abab", "abacbc"];
        for (k, want) in expected.iter().enumerate() {
            let report = d_diagram_basis_check(k).unwrap();
            assert_eq!(report.witness.to_string(), *want, "degree {k}");
            assert_eq!(report.witness_poly_degree, k as i64 + 2);
            if let Some(m) = report.max_other_degree {
                assert!(m < report.witness_poly_degree);
            }
        }
        let r3 = d_diagram_basis_check(3).unwrap();
        assert_eq!(r3.d_diagram_count, 4);
        assert_eq!(r3.max_other_degree, None, "abcabc evaluates to zero");
    }

    #[test]
    fn csv_export_round_trips_through_a_parse() {
        let s = SpanBasis::new(3).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(header, ["aabbcc", "aabcbc", "aabccb", "abacbc", "abcabc"]);
        let rows: Vec<Vec<Rational>> = lines
            .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows, s.relations);
    }
}
