//! Acceptance sweep: ten end-to-end properties of the engine, one test per
//! property, each printing its own pass line. Everything here is exact
//! arithmetic; the only tolerances are the two stated wall-clock budgets.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chord_weights::ccd::{ChineseDiagram, DiagramCombination};
use chord_weights::diagram::{enumerate_diagrams, four_t_relations, ChordDiagram, TailedWord};
use chord_weights::oracle;
use chord_weights::poly::{rat, rint, Poly};
use chord_weights::reps;
use chord_weights::span::SpanBasis;
use chord_weights::weight::AlgebraSpec;
use chord_weights::Family;

fn word(w: &str) -> ChordDiagram {
    w.parse().expect("valid word")
}

/// n^2 - 1, the value of the bare circle over sl.
fn circle() -> Poly {
    &Poly::var_pow(2) - &Poly::one()
}

/// c * n^k * (n^2 - 1).
fn scaled(c: i64, k: i64) -> Poly {
    circle().mul_monomial(&rint(c), k)
}

#[test]
fn criterion_01_published_values_match_exactly() {
    let start = Instant::now();
    let sl = AlgebraSpec::new(Family::Sl);
    // (2*n^2)*(12 + n^2)*(n^2 - 1), the four-cycle value at degree 4.
    let four_cycle = &scaled(2, 4) + &scaled(24, 2);
    let expected = [
        ("", circle()),
        ("aa", scaled(2, 1)),
        ("abab", scaled(2, 2)),
        ("abacbc", scaled(2, 3)),
        ("abcabc", Poly::zero()),
        ("abcdabcd", scaled(24, 2)),
        ("abcadcbd", four_cycle),
        ("abcdadcb", scaled(2, 4)),
        ("abcdcabd", Poly::zero()),
    ];
    for (w, want) in &expected {
        let got = sl.evaluate_closed(&word(w)).unwrap();
        assert_eq!(got, *want, "U_sl({w})");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("criterion 01 (published exact values, < 1 s): pass");
}

#[test]
fn criterion_02_matrix_referee_agrees_at_small_sizes() {
    let start = Instant::now();
    let sizes = |family: Family| match family {
        Family::Gl | Family::Sl => [2usize, 3, 4],
        Family::So => [3, 4, 5],
        Family::Sp => [1, 2, 3],
    };
    let mut checked = 0usize;
    for family in Family::ALL {
        let spec = AlgebraSpec::new(family);
        for degree in 0..=3 {
            for d in enumerate_diagrams(degree) {
                let u = spec.evaluate_closed(&d).unwrap();
                for n0 in sizes(family) {
                    let symbolic = u.eval(&rint(n0 as i64)).unwrap();
                    let referee = oracle::oracle_eval(family, n0, &d).unwrap();
                    assert_eq!(symbolic, referee, "{family}({n0}) on {d}");
                    checked += 1;
                }
            }
        }
    }
    let sl = AlgebraSpec::new(Family::Sl);
    for d in enumerate_diagrams(4) {
        let symbolic = sl.evaluate_closed(&d).unwrap().eval(&rint(2)).unwrap();
        let referee = oracle::oracle_eval(Family::Sl, 2, &d).unwrap();
        assert_eq!(symbolic, referee, "sl(2) on {d}");
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("criterion 02 (referee agreement, {checked} values, < 1 min): pass");
}

#[test]
fn criterion_03_invariance_under_the_four_term_relations() {
    let mut checked = 0usize;
    for family in Family::ALL {
        let spec = AlgebraSpec::new(family);
        let mut values: BTreeMap<ChordDiagram, Poly> = BTreeMap::new();
        for degree in 2..=4 {
            for rel in four_t_relations(degree).unwrap() {
                let mut total = Poly::zero();
                for (d, c) in rel.terms() {
                    let mut u = values
                        .entry(d.canonical())
                        .or_insert_with_key(|d| spec.evaluate_closed(d).unwrap())
                        .clone();
                    u.scale(&rint(c));
                    total += &u;
                }
                assert!(total.is_zero(), "{family}: {rel} gives {total}");
                checked += 1;
            }
        }
    }
    println!("criterion 03 (four-term invariance, {checked} relation sums): pass");
}

#[test]
fn criterion_04_top_degree_iff_two_colorable_with_split_count_lead() {
    let sl = AlgebraSpec::new(Family::Sl);
    let mut checked = 0usize;
    for degree in 0..=5 {
        for d in enumerate_diagrams(degree) {
            let report = sl.leading_analysis(&d).unwrap();
            assert_eq!(
                report.saturates, report.d_diagram,
                "{d}: degree {:?} against top {}",
                report.degree, report.top_degree
            );
            if report.d_diagram {
                assert_eq!(
                    report.leading_coeff,
                    Some(rint(report.split_count as i64)),
                    "{d}: leading coefficient against 2^components"
                );
            }
            checked += 1;
        }
    }
    println!("criterion 04 (top degree iff two-colorable, {checked} diagrams): pass");
}

#[test]
fn criterion_05_exponent_parity_follows_the_degree() {
    let sl = AlgebraSpec::new(Family::Sl);
    let mut checked = 0usize;
    for degree in 0..=4 {
        for d in enumerate_diagrams(degree) {
            let u = sl.evaluate_closed(&d).unwrap();
            for (k, _) in u.terms() {
                assert_eq!(
                    (k - degree as i64).rem_euclid(2),
                    0,
                    "{d}: exponent {k} at degree {degree}"
                );
            }
            checked += 1;
        }
    }
    println!("criterion 05 (exponent parity, {checked} diagrams): pass");
}

#[test]
fn criterion_06_circle_factor_divides_and_products_split() {
    let sl = AlgebraSpec::new(Family::Sl);
    let divisor = circle();
    let mut values: BTreeMap<ChordDiagram, Poly> = BTreeMap::new();
    let mut eval = |d: &ChordDiagram| -> Poly {
        values
            .entry(d.canonical())
            .or_insert_with_key(|d| sl.evaluate_closed(d).unwrap())
            .clone()
    };

    let mut divisions = 0usize;
    for degree in 0..=4 {
        for d in enumerate_diagrams(degree) {
            let u = eval(&d);
            u.divide_exact(&divisor)
                .unwrap_or_else(|e| panic!("{d}: {e}"));
            divisions += 1;
        }
    }

    // Every unordered factor pair of total degree at most 4.
    let mut pairs: Vec<(ChordDiagram, ChordDiagram)> = Vec::new();
    for total in 0..=4usize {
        for k1 in 0..=total / 2 {
            let left = enumerate_diagrams(k1);
            let right = enumerate_diagrams(total - k1);
            for (i, d1) in left.iter().enumerate() {
                let start = if k1 == total - k1 { i } else { 0 };
                for d2 in &right[start..] {
                    pairs.push((d1.clone(), d2.clone()));
                }
            }
        }
    }
    for (d1, d2) in &pairs {
        let lhs = &divisor * &eval(&d1.product(d2));
        let rhs = &eval(d1) * &eval(d2);
        assert_eq!(lhs, rhs, "product split for {d1} * {d2}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(20260815);
    for _ in 0..20 {
        let (d1, d2) = &pairs[rng.gen_range(0..pairs.len())];
        let r1 = rng.gen_range(0..2 * d1.degree() + 1);
        let r2 = rng.gen_range(0..2 * d2.degree() + 1);
        assert_eq!(
            eval(&d1.product_at(d2, r1, r2)),
            eval(&d1.product(d2)),
            "break point ({r1}, {r2}) for {d1} * {d2}"
        );
    }
    println!(
        "criterion 06 (divisibility, {divisions} values; product rule, {} pairs + 20 break points): pass",
        pairs.len()
    );
}

#[test]
fn criterion_07_empty_contractions_give_the_dimension_table() {
    let half = rat(1, 2);
    let same: [(Family, Poly); 4] = [
        (Family::Gl, Poly::var_pow(2)),
        (Family::Sl, circle()),
        // n(n-1)/2 and n(2n+1).
        (
            Family::So,
            (&Poly::var_pow(2) - &Poly::var_pow(1)).mul_monomial(&half, 0),
        ),
        (
            Family::Sp,
            &Poly::var_pow(2).mul_monomial(&rint(2), 0) + &Poly::var_pow(1),
        ),
    ];
    for (family, want) in &same {
        let spec = AlgebraSpec::new(*family);
        let got = spec
            .same_trace(&[], &[])
            .close_scalars(&spec.trace_dim())
            .as_scalar()
            .expect("scalar contraction");
        assert_eq!(got, *want, "same-trace dimension for {family}");
    }
    let cross: [(Family, Poly); 4] = [
        (Family::Gl, Poly::var_pow(1)),
        (Family::Sl, Poly::zero()),
        (Family::So, Poly::zero()),
        (Family::Sp, Poly::zero()),
    ];
    for (family, want) in &cross {
        let spec = AlgebraSpec::new(*family);
        let got = spec
            .cross_trace(&[], &[])
            .close_scalars(&spec.trace_dim())
            .as_scalar()
            .expect("scalar contraction");
        assert_eq!(got, *want, "cross-trace closure for {family}");
    }
    println!("criterion 07 (dimension identities, 8 contractions): pass");
}

/// The bundled trivalent diagrams with interior vertices at degrees 2 and 3.
fn trivalent_family() -> Vec<(&'static str, ChineseDiagram)> {
    [
        (
            "y",
            r#"{"circle":["u1","u2","u3"],
                "interior":[{"id":"v","nbrs":["u1","u2","u3"]}]}"#,
        ),
        (
            "bubble",
            r#"{"circle":["u1","u2"],
                "interior":[{"id":"v","nbrs":["u1","w","w"]},
                            {"id":"w","nbrs":["u2","v","v"]}]}"#,
        ),
        (
            "y-plus-chord",
            r#"{"circle":["u1","c","u2","c","u3"],
                "interior":[{"id":"v","nbrs":["u1","u2","u3"]}]}"#,
        ),
        (
            "h",
            r#"{"circle":["u1","u2","u3","u4"],
                "interior":[{"id":"v","nbrs":["w","u1","u2"]},
                            {"id":"w","nbrs":["v","u3","u4"]}]}"#,
        ),
        (
            "mercedes",
            r#"{"circle":["u1","u2","u3"],
                "interior":[{"id":"v1","nbrs":["u1","v2","v3"]},
                            {"id":"v2","nbrs":["u2","v3","v1"]},
                            {"id":"v3","nbrs":["u3","v1","v2"]}]}"#,
        ),
    ]
    .into_iter()
    .map(|(name, text)| (name, ChineseDiagram::from_json_str(text).unwrap()))
    .collect()
}

#[test]
fn criterion_08_trivalent_identities_die_in_the_quotient() {
    let mut spans: BTreeMap<usize, SpanBasis> = BTreeMap::new();
    let mut member = |v: &DiagramCombination, degree: usize| -> bool {
        spans
            .entry(degree)
            .or_insert_with(|| SpanBasis::new(degree).unwrap())
            .membership(v)
            .unwrap()
    };
    let mut mirrors = 0usize;
    let mut regluings = 0usize;
    for (name, c) in &trivalent_family() {
        let degree = c.degree();

        for v in c.interior().keys() {
            let (plain, mirrored) = c.as_pair(v).unwrap();
            let total = plain
                .stu_reduce()
                .unwrap()
                .sum(&mirrored.stu_reduce().unwrap());
            assert!(member(&total, degree), "{name}/{v}: mirror sum {total}");
            mirrors += 1;
        }

        let vertices: Vec<&String> = c.interior().keys().collect();
        for (i, v) in vertices.iter().enumerate() {
            for w in &vertices[i + 1..] {
                if !c.interior()[*v].contains(*w) || *name == "bubble" {
                    continue;
                }
                let (straight, h, x) = c.ihx_triple(v, w).unwrap();
                let total = straight
                    .stu_reduce()
                    .unwrap()
                    .sub(&h.stu_reduce().unwrap())
                    .sum(&x.stu_reduce().unwrap());
                assert!(member(&total, degree), "{name}/{v}-{w}: I-H+X {total}");
                regluings += 1;
            }
        }

        // Any two resolution orders may differ only by relations.
        let mut first = ChaCha8Rng::seed_from_u64(8);
        let mut second = ChaCha8Rng::seed_from_u64(80);
        let a = c.stu_reduce_with(&mut |k| first.gen_range(0..k)).unwrap();
        let b = c.stu_reduce_with(&mut |k| second.gen_range(0..k)).unwrap();
        assert!(member(&a.sub(&b), degree), "{name}: order difference");
    }
    assert_eq!((mirrors, regluings), (9, 4));
    println!("criterion 08 (trivalent identities, 9 mirrors + 4 re-gluings + 5 order pairs): pass");
}

#[test]
fn criterion_09_bilinear_constants_match_the_closed_form() {
    for k in 1..=4u32 {
        let data = oracle::sl2_rep_data(k as usize).unwrap();
        let solved = reps::solve_ab(&data).unwrap();
        let stated = reps::sl2_constants(k).unwrap();
        assert_eq!(solved, stated, "spin-{k} constants");
    }
    assert_eq!(
        reps::sl2_constants(1).unwrap(),
        (rint(1), rat(-1, 2)),
        "defining representation constants"
    );
    println!("criterion 09 (bilinear constants for k = 1..4): pass");
}

/// Words with `k` chord labels (twice each) and `t` leg labels (once each),
/// labels in first-occurrence order so each shape appears exactly once.
fn open_words(k: usize, t: usize) -> Vec<TailedWord> {
    fn rec(
        word: &mut Vec<u8>,
        open: &mut Vec<u8>,
        used: usize,
        len: usize,
        labels: usize,
        singles: usize,
        out: &mut Vec<TailedWord>,
    ) {
        if word.len() == len {
            if open.len() == singles {
                out.push(TailedWord::from_sequence(word).unwrap());
            }
            return;
        }
        if open.len() > len - word.len() + singles {
            return;
        }
        if used < labels {
            word.push(used as u8);
            open.push(used as u8);
            rec(word, open, used + 1, len, labels, singles, out);
            open.pop();
            word.pop();
        }
        for i in 0..open.len() {
            let label = open.remove(i);
            word.push(label);
            rec(word, open, used, len, labels, singles, out);
            word.pop();
            open.insert(i, label);
        }
    }
    let mut out = Vec::new();
    rec(
        &mut Vec::new(),
        &mut Vec::new(),
        0,
        2 * k + t,
        k + t,
        t,
        &mut out,
    );
    out
}

#[test]
fn criterion_10_open_coefficients_respect_the_degree_bound() {
    let sl = AlgebraSpec::new(Family::Sl);
    let mut checked = 0usize;
    for k in 0..=3usize {
        let bound = k as i64 + 2;
        for t in 0..=2usize {
            for w in open_words(k, t) {
                let expr = sl.evaluate_open(&w).unwrap();
                for (term, coeff) in expr.terms() {
                    assert!(
                        coeff.is_polynomial(),
                        "{w} at {term}: coefficient {coeff} has a pole"
                    );
                    assert!(
                        coeff.degree().is_none_or(|d| d <= bound),
                        "{w} at {term}: coefficient {coeff} beats degree {bound}"
                    );
                }
                checked += 1;
            }
        }
    }
    println!("criterion 10 (open coefficient degrees, {checked} words): pass");
}
