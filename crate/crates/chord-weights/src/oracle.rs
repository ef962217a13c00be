//! Independent matrix referee for the symbolic engine.
//!
//! Everything here works with explicit matrices over exact rationals at a
//! concrete size `n0`: the algebra bases are written out entry by entry, dual
//! bases come from inverting the Gram matrix of the defining trace form, and
//! diagram values are literal traces of products of adjoint operators. None
//! of the symbolic trace machinery is used, so agreement between this module
//! and the engine checks both against a common ground truth.
//!
//! The evaluation hot path stays in fixed-width integers: every dual basis
//! element is scaled to an integer matrix (tracking the denominator), adjoint
//! operators become integer matrices on a per-family coordinate space, and
//! products are accumulated in checked `i128` arithmetic. Rationals appear
//! again only when leaf traces are folded into the final sum.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::diagram::ChordDiagram;
use crate::poly::{rint, Rational};
use crate::reps::RepData;
use crate::{Error, Family, Result};

/// Dense square matrix over exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    e: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(n: usize) -> QMatrix {
        QMatrix {
            n,
            e: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Elementary matrix with a single 1 at (i, j).
    pub fn unit(n: usize, i: usize, j: usize) -> QMatrix {
        let mut m = QMatrix::zero(n);
        m.set(i, j, Rational::one());
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.e[i * self.n + j] = v;
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n);
        QMatrix {
            n: self.n,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n);
        QMatrix {
            n: self.n,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            n: self.n,
            e: self.e.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = QMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &QMatrix) -> QMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Rational::is_zero)
    }
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Solve G X = I by Gauss-Jordan elimination. G must be square and
/// invertible; rows of the result are the dual-expansion coefficients.
fn invert(g: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = g.len();
    let mut a: Vec<Vec<Rational>> = g.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *x /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let d = &a[col][c] * &f;
                a[r][c] -= d;
                let d = &inv[col][c] * &f;
                inv[r][c] -= d;
            }
        }
    }
    Ok(inv)
}

/// A classical matrix algebra at concrete size, with its defining-trace dual
/// basis.
pub struct Algebra {
    pub family: Family,
    pub n0: usize,
    basis: Vec<QMatrix>,
    duals: Vec<QMatrix>,
}

/// Write out the standard basis of the family at size `n0` and compute the
/// dual basis with respect to the form (x, y) = Tr(xy) in the defining
/// representation. The duality Tr(b_i b*_j) = delta_ij is re-verified after
/// the Gram inversion.
pub fn build_algebra(family: Family, n0: usize) -> Result<Algebra> {
    if n0 == 0 {
        return Err(Error::Domain("algebra size must be positive".into()));
    }
    let basis = match family {
        Family::Gl => {
            let mut b = Vec::new();
            for i in 0..n0 {
                for j in 0..n0 {
                    b.push(QMatrix::unit(n0, i, j));
                }
            }
            b
        }
        Family::Sl => {
            let mut b = Vec::new();
            for i in 0..n0 {
                for j in 0..n0 {
                    if i != j {
                        b.push(QMatrix::unit(n0, i, j));
                    }
                }
            }
            // Traceless diagonals d_l = E_00 + .. + E_(l-2)(l-2) - (l-1) E_(l-1)(l-1).
            for l in 2..=n0 {
                let mut m = QMatrix::zero(n0);
                for a in 0..l - 1 {
                    m.set(a, a, Rational::one());
                }
                m.set(l - 1, l - 1, rint(-((l as i64) - 1)));
                b.push(m);
            }
            b
        }
        Family::So => {
            let mut b = Vec::new();
            for i in 0..n0 {
                for j in i + 1..n0 {
                    let m = QMatrix::unit(n0, i, j).sub(&QMatrix::unit(n0, j, i));
                    b.push(m);
                }
            }
            b
        }
        Family::Sp => {
            let d = 2 * n0;
            let mut b = Vec::new();
            // Diagonal block: E_ii - E_(n+i)(n+i).
            for i in 0..n0 {
                b.push(QMatrix::unit(d, i, i).sub(&QMatrix::unit(d, n0 + i, n0 + i)));
            }
            // Off-diagonal A block: E_ij - E_(n+j)(n+i), i != j.
            for i in 0..n0 {
                for j in 0..n0 {
                    if i != j {
                        b.push(QMatrix::unit(d, i, j).sub(&QMatrix::unit(d, n0 + j, n0 + i)));
                    }
                }
            }
            // Symmetric B block: E_i(n+i) and E_i(n+j) + E_j(n+i).
            for i in 0..n0 {
                b.push(QMatrix::unit(d, i, n0 + i));
            }
            for i in 0..n0 {
                for j in i + 1..n0 {
                    b.push(QMatrix::unit(d, i, n0 + j).add(&QMatrix::unit(d, j, n0 + i)));
                }
            }
            // Symmetric C block: E_(n+i)i and E_(n+i)j + E_(n+j)i.
            for i in 0..n0 {
                b.push(QMatrix::unit(d, n0 + i, i));
            }
            for i in 0..n0 {
                for j in i + 1..n0 {
                    b.push(QMatrix::unit(d, n0 + i, j).add(&QMatrix::unit(d, n0 + j, i)));
                }
            }
            b
        }
    };

    let dim = basis.len();
    let gram: Vec<Vec<Rational>> = (0..dim)
        .map(|i| (0..dim).map(|j| basis[i].mul(&basis[j]).trace()).collect())
        .collect();
    let coeffs = invert(&gram)?;
    let duals: Vec<QMatrix> = (0..dim)
        .map(|i| {
            let mut m = QMatrix::zero(basis[0].size());
            for (j, b) in basis.iter().enumerate() {
                if !coeffs[i][j].is_zero() {
                    m = m.add(&b.scale(&coeffs[i][j]));
                }
            }
            m
        })
        .collect();
    #[allow(clippy::needless_range_loop)]
    for i in 0..dim {
        for j in 0..dim {
            let t = basis[i].mul(&duals[j]).trace();
            let expected = if i == j {
                Rational::one()
            } else {
                Rational::zero()
            };
            if t != expected {
                return Err(Error::Internal(format!(
                    "dual basis check failed at ({i}, {j}): Tr = {t}"
                )));
            }
        }
    }
    Ok(Algebra {
        family,
        n0,
        basis,
        duals,
    })
}

impl Algebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Side length of the defining matrices: n0, or 2*n0 for sp.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.n0,
            _ => self.n0,
        }
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn duals(&self) -> &[QMatrix] {
        &self.duals
    }

    /// Matrix of ad_x on the algebra, in the stored basis (columns indexed
    /// by basis elements, coordinates extracted with the dual basis). Errors
    /// if x does not normalize the algebra, i.e. some bracket [x, b] falls
    /// outside the span.
    pub fn adjoint_matrix(&self, x: &QMatrix) -> Result<Vec<Vec<Rational>>> {
        if x.size() != self.matrix_size() {
            return Err(Error::Domain(format!(
                "element size {} does not match defining size {}",
                x.size(),
                self.matrix_size()
            )));
        }
        let dim = self.dim();
        let mut out = vec![vec![Rational::zero(); dim]; dim];
        #[allow(clippy::needless_range_loop)]
        for j in 0..dim {
            let br = x.commutator(&self.basis[j]);
            let mut recon = QMatrix::zero(x.size());
            for i in 0..dim {
                let c = br.mul(&self.duals[i]).trace();
                if !c.is_zero() {
                    recon = recon.add(&self.basis[i].scale(&c));
                }
                out[i][j] = c;
            }
            if recon != br {
                return Err(Error::Domain(
                    "bracket leaves the algebra span; element is not in the algebra's normalizer"
                        .into(),
                ));
            }
        }
        Ok(out)
    }

    /// Prebuilt integer evaluation tables for this algebra.
    pub fn evaluator(&self) -> Result<Evaluator> {
        Evaluator::new(self)
    }
}

/// Evaluate one diagram with a freshly built algebra. Convenience wrapper
/// around [`build_algebra`] + [`Evaluator`].
pub fn oracle_eval(family: Family, n0: usize, diagram: &ChordDiagram) -> Result<Rational> {
    let alg = build_algebra(family, n0)?;
    alg.evaluator()?.eval(diagram)
}

/// Coordinates used for the adjoint action. Each family acts on a space of
/// matrices with an integer coordinate chart:
///
/// * gl and sl share the full gl(n0) chart (all entries). For sl this is
///   valid for any nonempty product of adjoint operators: both the traceless
///   subspace and the identity line are invariant, and each ad kills the
///   identity line, so the extra line contributes nothing to the trace.
/// * so uses the strictly-upper-triangle chart of antisymmetric matrices.
/// * sp uses the block chart (full A block, upper triangles of the two
///   symmetric blocks).
enum Chart {
    Gl { n0: usize },
    So { n0: usize },
    Sp { n0: usize },
}

impl Chart {
    fn new(family: Family, n0: usize) -> Chart {
        match family {
            Family::Gl | Family::Sl => Chart::Gl { n0 },
            Family::So => Chart::So { n0 },
            Family::Sp => Chart::Sp { n0 },
        }
    }

    fn dim(&self) -> usize {
        match *self {
            Chart::Gl { n0 } => n0 * n0,
            Chart::So { n0 } => n0 * (n0 - 1) / 2,
            Chart::Sp { n0 } => 2 * n0 * n0 + n0,
        }
    }

    /// The matrix whose chart coordinates are the unit vector e_r.
    fn basis_mat(&self, r: usize) -> QMatrix {
        match *self {
            Chart::Gl { n0 } => QMatrix::unit(n0, r / n0, r % n0),
            Chart::So { n0 } => {
                let (i, j) = unrank_upper(n0, r);
                QMatrix::unit(n0, i, j).sub(&QMatrix::unit(n0, j, i))
            }
            Chart::Sp { n0 } => {
                let d = 2 * n0;
                let a_block = n0 * n0;
                let tri = n0 * (n0 + 1) / 2;
                if r < a_block {
                    let (i, j) = (r / n0, r % n0);
                    QMatrix::unit(d, i, j).sub(&QMatrix::unit(d, n0 + j, n0 + i))
                } else if r < a_block + tri {
                    let (i, j) = unrank_upper_diag(n0, r - a_block);
                    if i == j {
                        QMatrix::unit(d, i, n0 + i)
                    } else {
                        QMatrix::unit(d, i, n0 + j).add(&QMatrix::unit(d, j, n0 + i))
                    }
                } else {
                    let (i, j) = unrank_upper_diag(n0, r - a_block - tri);
                    if i == j {
                        QMatrix::unit(d, n0 + i, i)
                    } else {
                        QMatrix::unit(d, n0 + i, j).add(&QMatrix::unit(d, n0 + j, i))
                    }
                }
            }
        }
    }

    /// Chart coordinates of a matrix lying in the chart's space.
    fn coords(&self, m: &QMatrix) -> Vec<Rational> {
        match *self {
            Chart::Gl { n0 } => (0..n0 * n0)
                .map(|r| m.get(r / n0, r % n0).clone())
                .collect(),
            Chart::So { n0 } => (0..self.dim())
                .map(|r| {
                    let (i, j) = unrank_upper(n0, r);
                    m.get(i, j).clone()
                })
                .collect(),
            Chart::Sp { n0 } => {
                let a_block = n0 * n0;
                let tri = n0 * (n0 + 1) / 2;
                (0..self.dim())
                    .map(|r| {
                        if r < a_block {
                            m.get(r / n0, r % n0).clone()
                        } else if r < a_block + tri {
                            let (i, j) = unrank_upper_diag(n0, r - a_block);
                            m.get(i, n0 + j).clone()
                        } else {
                            let (i, j) = unrank_upper_diag(n0, r - a_block - tri);
                            m.get(n0 + i, j).clone()
                        }
                    })
                    .collect()
            }
        }
    }
}

/// r-th pair (i, j) with i < j < n, lexicographic.
fn unrank_upper(n: usize, mut r: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i - 1;
        if r < row {
            return (i, i + 1 + r);
        }
        r -= row;
    }
    unreachable!("pair rank out of range");
}

/// r-th pair (i, j) with i <= j < n, lexicographic.
fn unrank_upper_diag(n: usize, mut r: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i;
        if r < row {
            return (i, i + r);
        }
        r -= row;
    }
    unreachable!("pair rank out of range");
}

/// Square integer matrix with checked arithmetic.
#[derive(Clone)]
struct IMatrix {
    n: usize,
    e: Vec<i128>,
}

impl IMatrix {
    fn identity(n: usize) -> IMatrix {
        let mut e = vec![0i128; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        IMatrix { n, e }
    }

    fn mul_checked(&self, o: &IMatrix) -> Result<IMatrix> {
        let n = self.n;
        let mut out = vec![0i128; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = o.e[k * n + j];
                    if b == 0 {
                        continue;
                    }
                    let p = a
                        .checked_mul(b)
                        .ok_or_else(|| Error::Overflow("matrix product entry".into()))?;
                    out[i * n + j] = out[i * n + j]
                        .checked_add(p)
                        .ok_or_else(|| Error::Overflow("matrix product entry".into()))?;
                }
            }
        }
        Ok(IMatrix { n, e: out })
    }

    fn trace_checked(&self) -> Result<i128> {
        let mut t = 0i128;
        for i in 0..self.n {
            t = t
                .checked_add(self.e[i * self.n + i])
                .ok_or_else(|| Error::Overflow("trace".into()))?;
        }
        Ok(t)
    }
}

/// Integer adjoint tables for one algebra: ad of every basis element and of
/// every denominator-scaled dual, on the family's coordinate chart.
pub struct Evaluator {
    dim: usize,
    chart_dim: usize,
    ad_basis: Vec<IMatrix>,
    ad_duals: Vec<IMatrix>,
    denoms: Vec<i128>,
}

fn to_i128(r: &Rational) -> Result<i128> {
    if !r.denom().is_one() {
        return Err(Error::Internal(format!("expected integer, got {r}")));
    }
    i128::try_from(r.numer().clone()).map_err(|_| Error::Overflow("integer matrix entry".into()))
}

impl Evaluator {
    fn new(alg: &Algebra) -> Result<Evaluator> {
        let chart = Chart::new(alg.family, alg.n0);
        let chart_dim = chart.dim();
        let ad_int = |x: &QMatrix| -> Result<IMatrix> {
            let mut e = vec![0i128; chart_dim * chart_dim];
            for c in 0..chart_dim {
                let basis_mat = chart.basis_mat(c);
                let col = chart.coords(&x.commutator(&basis_mat));
                for (r, v) in col.iter().enumerate() {
                    e[r * chart_dim + c] = to_i128(v)?;
                }
            }
            Ok(IMatrix { n: chart_dim, e })
        };
        let mut ad_basis = Vec::with_capacity(alg.dim());
        for b in &alg.basis {
            ad_basis.push(ad_int(b)?);
        }
        let mut ad_duals = Vec::with_capacity(alg.dim());
        let mut denoms = Vec::with_capacity(alg.dim());
        for d in &alg.duals {
            // Scale the dual to integer entries; remember the denominator.
            let q = d.e.iter().fold(BigInt::one(), |acc, v| {
                num_integer::lcm(acc, v.denom().clone())
            });
            let q_i = i128::try_from(q.clone())
                .map_err(|_| Error::Overflow("dual denominator".into()))?;
            let scaled = d.scale(&Rational::from(q));
            ad_duals.push(ad_int(&scaled)?);
            denoms.push(q_i);
        }
        Ok(Evaluator {
            dim: alg.dim(),
            chart_dim,
            ad_basis,
            ad_duals,
            denoms,
        })
    }

    /// Exact value of the diagram over this algebra: the trace of the
    /// product of adjoint operators around the circle, summed over all
    /// basis/dual assignments of the chords.
    pub fn eval(&self, diagram: &ChordDiagram) -> Result<Rational> {
        let word = diagram.word();
        if word.is_empty() {
            // Trace of the identity on the algebra itself.
            return Ok(rint(self.dim as i64));
        }
        let mut first_seen = vec![false; diagram.degree()];
        let firsts: Vec<bool> = word
            .iter()
            .map(|&c| {
                let f = !first_seen[c as usize];
                first_seen[c as usize] = true;
                f
            })
            .collect();
        let mut assigned = vec![usize::MAX; diagram.degree()];
        let mut acc = Rational::zero();
        let m0 = IMatrix::identity(self.chart_dim);
        self.dfs(word, &firsts, 0, &m0, 1, &mut assigned, &mut acc)?;
        Ok(acc)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        word: &[u8],
        firsts: &[bool],
        pos: usize,
        m: &IMatrix,
        denom: i128,
        assigned: &mut [usize],
        acc: &mut Rational,
    ) -> Result<()> {
        if pos == word.len() {
            let t = m.trace_checked()?;
            if t != 0 {
                *acc += Rational::new(BigInt::from(t), BigInt::from(denom));
            }
            return Ok(());
        }
        let c = word[pos] as usize;
        if firsts[pos] {
            for i in 0..self.dim {
                assigned[c] = i;
                let next = m.mul_checked(&self.ad_basis[i])?;
                self.dfs(word, firsts, pos + 1, &next, denom, assigned, acc)?;
            }
            assigned[c] = usize::MAX;
        } else {
            let i = assigned[c];
            let next = m.mul_checked(&self.ad_duals[i])?;
            let denom = denom
                .checked_mul(self.denoms[i])
                .ok_or_else(|| Error::Overflow("denominator product".into()))?;
            self.dfs(word, firsts, pos + 1, &next, denom, assigned, acc)?;
        }
        Ok(())
    }
}

/// The (k+1)-dimensional irreducible representation of sl(2), as integer
/// matrices: h is diagonal with entries k, k-2, ..., -k; f is the
/// subdiagonal of ones; e has superdiagonal (i+1)(k-i). The defining
/// brackets [h,e] = 2e, [h,f] = -2f, [e,f] = h are re-verified.
pub struct Sl2Rep {
    pub e: QMatrix,
    pub f: QMatrix,
    pub h: QMatrix,
}

pub fn sl2_irrep(k: usize) -> Result<Sl2Rep> {
    let d = k + 1;
    let mut e = QMatrix::zero(d);
    let mut f = QMatrix::zero(d);
    let mut h = QMatrix::zero(d);
    for i in 0..d {
        h.set(i, i, rint(k as i64 - 2 * i as i64));
    }
    for i in 0..k {
        e.set(i, i + 1, rint((i as i64 + 1) * (k as i64 - i as i64)));
        f.set(i + 1, i, rint(1));
    }
    let rep = Sl2Rep { e, f, h };
    let checks = [
        (rep.h.commutator(&rep.e), rep.e.scale(&rint(2))),
        (rep.h.commutator(&rep.f), rep.f.scale(&rint(-2))),
        (rep.e.commutator(&rep.f), rep.h.clone()),
    ];
    for (got, want) in &checks {
        if got != want {
            return Err(Error::Internal(
                "sl(2) representation matrices violate the bracket relations".into(),
            ));
        }
    }
    Ok(rep)
}

/// Representation data for [`crate::reps::solve_ab`], measured from the
/// matrices: dimension counts, Tr(R(h)^2) from the irreducible, and the
/// positive-root character sum read off the diagonal of ad_h over sl(2).
pub fn sl2_rep_data(k: usize) -> Result<RepData> {
    let rep = sl2_irrep(k)?;
    let tr_h_sq = rep.h.mul(&rep.h).trace();
    let alg = build_algebra(Family::Sl, 2)?;
    // The coroot: diag(1, -1), which is the d_2 basis element.
    let coroot = {
        let mut m = QMatrix::zero(2);
        m.set(0, 0, rint(1));
        m.set(1, 1, rint(-1));
        m
    };
    let ad_h = alg.adjoint_matrix(&coroot)?;
    let dim = alg.dim();
    // ad_h must be diagonal in the stored basis (root vectors + Cartan).
    let mut sum = Rational::zero();
    #[allow(clippy::needless_range_loop)]
    for i in 0..dim {
        for j in 0..dim {
            if i != j && !ad_h[i][j].is_zero() {
                return Err(Error::Internal(
                    "ad of the coroot is not diagonal in the root basis".into(),
                ));
            }
        }
        if ad_h[i][i].is_positive() {
            sum += &ad_h[i][i] * &ad_h[i][i];
        }
    }
    Ok(RepData {
        dim_r: rint(k as i64 + 1),
        dim_g: rint(alg.dim() as i64),
        tr_h_sq,
        sum_beta_h_sq: sum,
    })
}
