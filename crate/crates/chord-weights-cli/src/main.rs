//! `chordw` evaluates the adjoint-representation weight system of chord
//! diagrams over the four classical matrix families, tabulates whole degrees,
//! re-verifies the relations the invariant is built on, compares against the
//! concrete matrix referee, and reduces trivalent diagrams to chord-diagram
//! combinations.
//!
//! Exit codes: 0 success, 2 bad input, 3 broken internal invariant (including
//! a `check` that finds a violation: every relation checked here must hold).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chord_weights::ccd::{ChineseDiagram, DiagramCombination};
use chord_weights::diagram::{enumerate_diagrams, four_t_relations, ChordDiagram, TailedWord};
use chord_weights::oracle::oracle_eval;
use chord_weights::poly::{rint, Poly};
use chord_weights::span::SpanBasis;
use chord_weights::weight::AlgebraSpec;
use chord_weights::{Error, Family, Result};

/// Largest degree the table and sweep commands accept; evaluation cost grows
/// like 4^k, and past this point a single diagram stops being interactive.
const MAX_DEGREE: usize = 5;

#[derive(Parser)]
#[command(
    name = "chordw",
    version,
    about = "Adjoint weight systems of chord diagrams over gl, sl, so, sp"
)]
struct Cli {
    /// Worker threads for the expansion sweeps (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the invariant of one closed diagram.
    Eval {
        #[arg(long, value_parser = parse_family)]
        algebra: Family,
        /// Double-occurrence word such as "abab"; "" is the bare circle.
        #[arg(long)]
        diagram: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tabulate every canonical diagram of one degree.
    Table {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_parser = parse_family)]
        algebra: Family,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Re-verify one relation family against the engine.
    Check {
        #[arg(long, value_enum)]
        relation: Relation,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_parser = parse_family)]
        algebra: Family,
        /// Seed for the randomized break-point cases.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate one diagram in a concrete matrix algebra and compare with the
    /// symbolic value at the same size.
    Oracle {
        #[arg(long, value_parser = parse_family)]
        algebra: Family,
        /// Concrete size parameter: gl(n), sl(n), so(n), sp(n).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        diagram: String,
    },
    /// Reduce a trivalent diagram (JSON file) to a chord-diagram combination.
    Reduce {
        /// Path to the JSON description: {"circle": [...], "interior": {...}}.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relation {
    /// Signed invariant sums over the four-term relations vanish.
    #[value(name = "4t")]
    FourT,
    /// Mirroring an interior vertex negates a reduction modulo four-term.
    As,
    /// The three re-gluings of an interior edge cancel modulo four-term.
    Ihx,
    /// Every exponent of a degree-k value has the parity of k (sl).
    Parity,
    /// n^2 - 1 divides every closed value (sl).
    Divisibility,
    /// (n^2-1) * U(C1 C2) = U(C1) * U(C2), independent of break points (sl).
    Product,
    /// Open-evaluation coefficients have degree at most k + 2 (sl).
    DegreeBound,
}

impl Relation {
    fn name(self) -> &'static str {
        match self {
            Relation::FourT => "4t",
            Relation::As => "as",
            Relation::Ihx => "ihx",
            Relation::Parity => "parity",
            Relation::Divisibility => "divisibility",
            Relation::Product => "product",
            Relation::DegreeBound => "degree-bound",
        }
    }
}

fn parse_family(s: &str) -> Result<Family> {
    Family::from_str(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        // A check found a counterexample to a relation that holds by
        // construction; that is an engine defect, not a usage problem.
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 2 } else { 3 })
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let body = || match &cli.command {
        Cmd::Eval {
            algebra,
            diagram,
            format,
        } => cmd_eval(*algebra, diagram, *format).map(|()| true),
        Cmd::Table {
            degree,
            algebra,
            format,
        } => cmd_table(*degree, *algebra, *format).map(|()| true),
        Cmd::Check {
            relation,
            degree,
            algebra,
            seed,
        } => cmd_check(*relation, *degree, *algebra, *seed),
        Cmd::Oracle {
            algebra,
            n,
            diagram,
        } => cmd_oracle(*algebra, *n, diagram).map(|()| true),
        Cmd::Reduce { file, format } => cmd_reduce(file, *format).map(|()| true),
    };
    match cli.jobs {
        None => body(),
        Some(width) => rayon::ThreadPoolBuilder::new()
            .num_threads(width)
            .build()
            .map_err(|e| Error::Internal(format!("worker pool: {e}")))?
            .install(body),
    }
}

/// One output row: a diagram next to its invariant and the interleaving-graph
/// quantities that predict the value's shape.
struct Row {
    word: String,
    algebra: Family,
    u: Poly,
    d_diagram: bool,
    split_count: u64,
}

impl Row {
    fn new(spec: &AlgebraSpec, d: &ChordDiagram) -> Result<Row> {
        Ok(Row {
            word: d.to_string(),
            algebra: spec.family(),
            u: spec.evaluate_closed(d)?,
            d_diagram: d.is_d_diagram(),
            split_count: d.split_count(),
        })
    }

    fn deg_u(&self) -> String {
        self.u.degree().map(|k| k.to_string()).unwrap_or_default()
    }

    fn json(&self) -> serde_json::Value {
        serde_json::json!({
            "word": self.word,
            "algebra": self.algebra.name(),
            "U": self.u.to_string(),
            "degU": self.u.degree(),
            "d_diagram": self.d_diagram,
            "split_count": self.split_count,
        })
    }

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.word,
            self.algebra,
            self.u,
            self.deg_u(),
            self.d_diagram,
            self.split_count
        )
    }
}

const CSV_HEADER: &str = "word,algebra,U,degU,d_diagram,split_count";

fn emit_rows(rows: &[Row], format: Format) {
    match format {
        Format::Text => {
            let width = rows.iter().map(|r| r.word.len()).max().unwrap_or(0).max(4);
            for r in rows {
                println!("{:width$}  {}", r.word, r.u);
            }
        }
        Format::Csv => {
            println!("{CSV_HEADER}");
            for r in rows {
                println!("{}", r.csv());
            }
        }
        Format::Json => {
            let items: Vec<_> = rows.iter().map(Row::json).collect();
            println!("{}", serde_json::Value::Array(items));
        }
    }
}

fn cmd_eval(family: Family, word: &str, format: Format) -> Result<()> {
    let d = ChordDiagram::from_str(word)?;
    let spec = AlgebraSpec::new(family);
    match format {
        Format::Text => println!("{}", spec.evaluate_closed(&d)?),
        Format::Json => println!("{}", Row::new(&spec, &d)?.json()),
        Format::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", Row::new(&spec, &d)?.csv());
        }
    }
    Ok(())
}

fn cmd_table(degree: usize, family: Family, format: Format) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::Parse(format!(
            "tables are supported up to degree {MAX_DEGREE}, got {degree}"
        )));
    }
    let spec = AlgebraSpec::new(family);
    let rows = enumerate_diagrams(degree)
        .iter()
        .map(|d| Row::new(&spec, d))
        .collect::<Result<Vec<_>>>()?;
    emit_rows(&rows, format);
    Ok(())
}

fn cmd_oracle(family: Family, n0: usize, word: &str) -> Result<()> {
    let d = ChordDiagram::from_str(word)?;
    let referee = oracle_eval(family, n0, &d)?;
    let symbolic = AlgebraSpec::new(family)
        .evaluate_closed(&d)?
        .eval(&rint(n0 as i64))?;
    if symbolic == referee {
        println!("{referee}, match");
        Ok(())
    } else {
        println!("{referee}, MISMATCH");
        Err(Error::Internal(format!(
            "referee gives {referee} but the symbolic value at n = {n0} is {symbolic}"
        )))
    }
}

fn cmd_reduce(file: &PathBuf, format: Format) -> Result<()> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    let reduced = ChineseDiagram::from_json_str(&text)?.stu_reduce()?;
    match format {
        Format::Text => println!("{reduced}"),
        Format::Csv => {
            println!("word,coeff");
            for (d, c) in reduced.terms() {
                println!("{d},{c}");
            }
        }
        Format::Json => {
            let terms: Vec<_> = reduced
                .terms()
                .map(|(d, c)| serde_json::json!({ "word": d.to_string(), "coeff": c.to_string() }))
                .collect();
            println!(
                "{}",
                serde_json::json!({ "degree": reduced.degree(), "terms": terms })
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check: each relation family reports its case count, prints any
// counterexamples, and ends with one pass/FAIL line.

fn cmd_check(relation: Relation, degree: usize, family: Family, seed: u64) -> Result<bool> {
    if degree > MAX_DEGREE {
        return Err(Error::Parse(format!(
            "checks are supported up to degree {MAX_DEGREE}, got {degree}"
        )));
    }
    let failures = match relation {
        Relation::FourT => check_4t(degree, family),
        Relation::As => check_as(degree, family),
        Relation::Ihx => check_ihx(degree, family),
        Relation::Parity => check_parity(degree, family),
        Relation::Divisibility => check_divisibility(degree, family),
        Relation::Product => check_product(degree, family, seed),
        Relation::DegreeBound => check_degree_bound(degree, family),
    }?;
    for f in &failures {
        println!("FAIL {f}");
    }
    let verdict = if failures.is_empty() { "pass" } else { "FAIL" };
    println!(
        "check {} --degree {degree} --algebra {family}: {verdict}",
        relation.name()
    );
    Ok(failures.is_empty())
}

/// Closed values keyed by canonical word; the relation sweeps revisit the
/// same diagrams many times.
struct UCache {
    spec: AlgebraSpec,
    map: BTreeMap<ChordDiagram, Poly>,
}

impl UCache {
    fn new(family: Family) -> UCache {
        UCache {
            spec: AlgebraSpec::new(family),
            map: BTreeMap::new(),
        }
    }

    fn get(&mut self, d: &ChordDiagram) -> Result<Poly> {
        let c = d.canonical();
        if let Some(p) = self.map.get(&c) {
            return Ok(p.clone());
        }
        let p = self.spec.evaluate_closed(&c)?;
        self.map.insert(c, p.clone());
        Ok(p)
    }

    fn combination(&mut self, v: &DiagramCombination) -> Result<Poly> {
        let mut total = Poly::zero();
        for (d, c) in v.terms() {
            let mut u = self.get(d)?;
            u.scale(c);
            total += &u;
        }
        Ok(total)
    }
}

fn check_4t(degree: usize, family: Family) -> Result<Vec<String>> {
    if degree < 2 {
        return Err(Error::Parse(
            "four-term relations need --degree at least 2".into(),
        ));
    }
    let relations = four_t_relations(degree)?;
    let mut cache = UCache::new(family);
    let mut failures = Vec::new();
    for rel in &relations {
        let total = cache.combination(&DiagramCombination::from(rel))?;
        if !total.is_zero() {
            failures.push(format!("{rel} evaluates to {total}"));
        }
    }
    println!(
        "{} signed sums over the degree-{degree} relations",
        relations.len()
    );
    Ok(failures)
}

/// Bundled trivalent diagrams: every shape with interior vertices at degrees
/// 2 and 3 up to symmetry of the attachment pattern.
fn sample_ccds(degree: usize) -> Result<Vec<(&'static str, ChineseDiagram)>> {
    const SAMPLES: &[(&str, usize, &str)] = &[
        (
            "y",
            2,
            r#"{"circle":["u1","u2","u3"],
                "interior":[{"id":"v","nbrs":["u1","u2","u3"]}]}"#,
        ),
        (
            "bubble",
            2,
            r#"{"circle":["u1","u2"],
                "interior":[{"id":"v","nbrs":["u1","w","w"]},
                            {"id":"w","nbrs":["u2","v","v"]}]}"#,
        ),
        (
            "y-plus-chord",
            3,
            r#"{"circle":["u1","c","u2","c","u3"],
                "interior":[{"id":"v","nbrs":["u1","u2","u3"]}]}"#,
        ),
        (
            "h",
            3,
            r#"{"circle":["u1","u2","u3","u4"],
                "interior":[{"id":"v","nbrs":["w","u1","u2"]},
                            {"id":"w","nbrs":["v","u3","u4"]}]}"#,
        ),
        (
            "mercedes",
            3,
            r#"{"circle":["u1","u2","u3"],
                "interior":[{"id":"v1","nbrs":["u1","v2","v3"]},
                            {"id":"v2","nbrs":["u2","v3","v1"]},
                            {"id":"v3","nbrs":["u3","v1","v2"]}]}"#,
        ),
    ];
    let picked = SAMPLES
        .iter()
        .filter(|(_, k, _)| *k == degree)
        .map(|(name, _, text)| ChineseDiagram::from_json_str(text).map(|c| (*name, c)))
        .collect::<Result<Vec<_>>>()?;
    if picked.is_empty() {
        return Err(Error::Parse(format!(
            "no bundled trivalent diagrams at degree {degree}; available degrees: 2, 3"
        )));
    }
    Ok(picked)
}

/// The sum of a reduction and its vertex-mirrored reduction must die in the
/// quotient: lie in the four-term span and be killed by the invariant.
fn check_as(degree: usize, family: Family) -> Result<Vec<String>> {
    let samples = sample_ccds(degree)?;
    let span = SpanBasis::new(degree)?;
    let mut cache = UCache::new(family);
    let mut failures = Vec::new();
    let mut cases = 0;
    for (name, c) in &samples {
        for v in c.interior().keys() {
            cases += 1;
            let (plus, minus) = c.as_pair(v)?;
            let total = plus.stu_reduce()?.sum(&minus.stu_reduce()?);
            if !span.membership(&total)? {
                failures.push(format!("{name}/{v}: mirrored sum {total} escapes the span"));
            } else {
                let u = cache.combination(&total)?;
                if !u.is_zero() {
                    failures.push(format!(
                        "{name}/{v}: invariant keeps the mirrored sum alive: {u}"
                    ));
                }
            }
        }
    }
    println!(
        "{cases} vertex mirrorings across {} diagrams",
        samples.len()
    );
    Ok(failures)
}

/// I - H + X over an interior edge must die in the quotient.
fn check_ihx(degree: usize, family: Family) -> Result<Vec<String>> {
    if degree != 3 {
        return Err(Error::Parse(
            "re-gluable interior edges exist in the bundled diagrams at degree 3 only \
             (the degree-2 bubble's edge would close a self-loop)"
                .into(),
        ));
    }
    let samples = sample_ccds(degree)?;
    let span = SpanBasis::new(degree)?;
    let mut cache = UCache::new(family);
    let mut failures = Vec::new();
    let mut cases = 0;
    for (name, c) in &samples {
        let vertices: Vec<&String> = c.interior().keys().collect();
        for (i, v) in vertices.iter().enumerate() {
            for w in &vertices[i + 1..] {
                if !c.interior()[*v].contains(*w) {
                    continue;
                }
                cases += 1;
                let (straight, h, x) = c.ihx_triple(v, w)?;
                let total = straight
                    .stu_reduce()?
                    .sub(&h.stu_reduce()?)
                    .sum(&x.stu_reduce()?);
                if !span.membership(&total)? {
                    failures.push(format!(
                        "{name}/{v}-{w}: alternating sum {total} escapes the span"
                    ));
                } else {
                    let u = cache.combination(&total)?;
                    if !u.is_zero() {
                        failures.push(format!(
                            "{name}/{v}-{w}: invariant keeps the alternating sum alive: {u}"
                        ));
                    }
                }
            }
        }
    }
    println!("{cases} edge re-gluings across {} diagrams", samples.len());
    Ok(failures)
}

fn require_sl(relation: &str, family: Family) -> Result<()> {
    if family != Family::Sl {
        return Err(Error::Parse(format!(
            "the {relation} relation is stated for sl; got {family}"
        )));
    }
    Ok(())
}

fn check_parity(degree: usize, family: Family) -> Result<Vec<String>> {
    require_sl("parity", family)?;
    let mut cache = UCache::new(family);
    let mut failures = Vec::new();
    let diagrams = enumerate_diagrams(degree);
    for d in &diagrams {
        let u = cache.get(d)?;
        for (k, _) in u.terms() {
            if (k - degree as i64).rem_euclid(2) != 0 {
                failures.push(format!("{d}: exponent {k} breaks parity {degree} mod 2"));
                break;
            }
        }
    }
    println!("{} exponent lists at degree {degree}", diagrams.len());
    Ok(failures)
}

fn check_divisibility(degree: usize, family: Family) -> Result<Vec<String>> {
    require_sl("divisibility", family)?;
    let divisor = &Poly::var_pow(2) - &Poly::one();
    let mut cache = UCache::new(family);
    let mut failures = Vec::new();
    let diagrams = enumerate_diagrams(degree);
    for d in &diagrams {
        let u = cache.get(d)?;
        if u.divide_exact(&divisor).is_err() {
            failures.push(format!("{d}: {u} is not a multiple of {divisor}"));
        }
    }
    println!("{} exact divisions at degree {degree}", diagrams.len());
    Ok(failures)
}

fn check_product(degree: usize, family: Family, seed: u64) -> Result<Vec<String>> {
    require_sl("product", family)?;
    let circle = &Poly::var_pow(2) - &Poly::one();
    let mut cache = UCache::new(family);
    let mut failures = Vec::new();

    // All unordered factor pairs of total degree `degree`.
    let mut pairs: Vec<(ChordDiagram, ChordDiagram)> = Vec::new();
    for k1 in 0..=degree / 2 {
        let k2 = degree - k1;
        let left = enumerate_diagrams(k1);
        let right = enumerate_diagrams(k2);
        for (i, d1) in left.iter().enumerate() {
            let start = if k1 == k2 { i } else { 0 };
            for d2 in &right[start..] {
                pairs.push((d1.clone(), d2.clone()));
            }
        }
    }
    for (d1, d2) in &pairs {
        let lhs = &circle * &cache.get(&d1.product(d2))?;
        let rhs = &cache.get(d1)? * &cache.get(d2)?;
        if lhs != rhs {
            failures.push(format!(
                "{d1} * {d2}: circle-scaled product value {lhs} differs from {rhs}"
            ));
        }
    }

    // The value may not depend on where the two circles were cut open.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let (d1, d2) = &pairs[rng.gen_range(0..pairs.len())];
        let r1 = rng.gen_range(0..2 * d1.degree() + 1);
        let r2 = rng.gen_range(0..2 * d2.degree() + 1);
        let moved = cache.get(&d1.product_at(d2, r1, r2))?;
        let fixed = cache.get(&d1.product(d2))?;
        if moved != fixed {
            failures.push(format!(
                "{d1} * {d2} cut at ({r1}, {r2}): {moved} differs from {fixed}"
            ));
        }
    }
    println!(
        "{} factor pairs of total degree {degree}, plus 20 random break points",
        pairs.len()
    );
    Ok(failures)
}

/// Every word in which each label occurs once (a free leg) or twice (a
/// chord), with exactly `k` chords and `t` legs, labels in first-occurrence
/// order so each shape appears once.
fn tailed_words(k: usize, t: usize) -> Vec<TailedWord> {
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
                out.push(TailedWord::from_sequence(word).expect("built valid"));
            }
            return;
        }
        // Singles at the end come from labels still open; never open more
        // than can stay single plus be closed in the remaining positions.
        let remaining = len - word.len();
        if open.len() > remaining + singles {
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

fn check_degree_bound(degree: usize, family: Family) -> Result<Vec<String>> {
    require_sl("degree-bound", family)?;
    if degree > 3 {
        return Err(Error::Parse(format!(
            "the open-evaluation sweep is supported up to degree 3, got {degree}"
        )));
    }
    let spec = AlgebraSpec::new(family);
    let bound = degree as i64 + 2;
    let mut failures = Vec::new();
    let mut cases = 0;
    for legs in 0..=2 {
        for w in tailed_words(degree, legs) {
            cases += 1;
            let expr = spec.evaluate_open(&w)?;
            let text = || -> String { w.word().iter().map(|&c| (b'a' + c) as char).collect() };
            for (_, coeff) in expr.terms() {
                if !coeff.is_polynomial() {
                    failures.push(format!("{}: coefficient {coeff} has a pole", text()));
                    break;
                }
                if coeff.degree().is_some_and(|d| d > bound) {
                    failures.push(format!(
                        "{}: coefficient {coeff} exceeds degree {bound}",
                        text()
                    ));
                    break;
                }
            }
        }
    }
    println!("{cases} open words with up to 2 free legs at degree {degree}");
    Ok(failures)
}
