//! The finite presentation of Υ, integer lattice normal forms (Hermite and
//! Smith), the central extension built from relator defects, and the exact
//! rational solver that produces κ tables.
//!
//! The presentation has five generators n1…n5 and thirteen relators, bundled
//! from `relations.txt`. Abelianizing sends each relator to its exponent
//! vector in ℤ⁵; the extension by the central generator z appends a sixth
//! column carrying −12·defect for each relator, plus five commutator rows
//! [z, nᵢ] that abelianize to zero.
//!
//! A splitting character Φ assigns rational values to n̂1…n̂5 and z so that
//! every relator row is annihilated. With Φ(z) fixed the solution set is an
//! affine subspace; `solve_split` computes the particular solution orthogonal
//! to the homogeneous space, which makes the output canonical, and κ = −Φ on
//! the generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cocycle::{defect, CocycleError, KappaTable, SigmaConfig};
use crate::eisenstein::Twelfth;
use crate::group::{evaluate, GroupMatrix};
use crate::words::{Word,WordParseError, GENERATOR_COUNT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PresentationError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: WordParseError },
    #[error("expected {expected} defects, got {got}")]
    DefectCount { expected: usize, got: usize },
    #[error("the splitting system has no rational solution")]
    Inconsistent,
    #[error("solution value {value} is not an integer multiple of 1/12")]
    NonTwelfth { value: String },
    #[error("no homogeneous shift vanishes on the first two generators")]
    UpperZeroUnavailable,
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// A finite presentation: words over n1…n5 that evaluate to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    relators: Vec<Word>,
}

impl Presentation {
    /// The bundled presentation of Υ.
    pub fn bundled() -> Self {
        Presentation::parse(include_str!("relations.txt"))
            .expect("bundled relator file parses")
    }

    /// Parses one relator per line; `#` starts a comment, blank lines are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut relators = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let word = line
                .parse::<Word>()
                .map_err(|source| PresentationError::Parse { line: idx + 1, source })?;
            relators.push(word);
        }
        Ok(Presentation { relators })
    }

    pub fn from_relators(relators: Vec<Word>) -> Self {
        Presentation { relators }
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        GENERATOR_COUNT
    }

    /// Evaluates every relator exactly; reports one boolean per relator
    /// rather than asserting, so a broken relator is visible data.
    pub fn verify_relators(&self) -> Vec<bool> {
        let identity = GroupMatrix::identity();
        self.relators.iter().map(|r| evaluate(r) == identity).collect()
    }

    /// The relator-by-generator exponent matrix (abelianized relators).
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zero(self.relators.len(), GENERATOR_COUNT);
        for (i, r) in self.relators.iter().enumerate() {
            for (j, e) in r.exponent_sums().into_iter().enumerate() {
                *m.entry_mut(i, j) = BigInt::from(e);
            }
        }
        m
    }
}

/// A dense matrix over ℤ.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntegerMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                *m.entry_mut(i, j) = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.entry(k, j);
                    *out.entry_mut(i, j) += add;
                }
            }
        }
        out
    }

    /// Rows as i64, for report serialization of small matrices.
    pub fn rows_vec_i64(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().expect("entry within i64"))
                    .collect()
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.entry(r, j).clone();
            *self.entry_mut(r, j) = v;
        }
    }

    /// row[target] -= q · row[source]
    fn shear_row(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let sub = q * self.entry(source, j);
            *self.entry_mut(target, j) -= sub;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col[target] -= q · col[source]
    fn shear_col(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let sub = q * self.entry(i, source);
            *self.entry_mut(i, target) -= sub;
        }
    }

    /// Row-style Hermite normal form: returns (H, U) with U·self = H, U
    /// unimodular, pivots positive, and entries above each pivot reduced to
    /// the range [0, pivot).
    pub fn hnf(&self) -> (IntegerMatrix, IntegerMatrix) {
        let mut h = self.clone();
        let mut u = IntegerMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            loop {
                let best = (pivot_row..self.rows)
                    .filter(|&r| !h.entry(r, col).is_zero())
                    .min_by_key(|&r| h.entry(r, col).abs());
                let Some(best) = best else { break };
                h.swap_rows(pivot_row, best);
                u.swap_rows(pivot_row, best);
                let mut any_left = false;
                for r in pivot_row + 1..self.rows {
                    if h.entry(r, col).is_zero() {
                        continue;
                    }
                    let q = num_integer::Integer::div_floor(h.entry(r, col), h.entry(pivot_row, col));
                    h.shear_row(r, pivot_row, &q);
                    u.shear_row(r, pivot_row, &q);
                    if !h.entry(r, col).is_zero() {
                        any_left = true;
                    }
                }
                if !any_left {
                    break;
                }
            }
            if h.entry(pivot_row, col).is_zero() {
                continue;
            }
            if h.entry(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            for r in 0..pivot_row {
                let q = num_integer::Integer::div_floor(h.entry(r, col), h.entry(pivot_row, col));
                h.shear_row(r, pivot_row, &q);
                u.shear_row(r, pivot_row, &q);
            }
            pivot_row += 1;
        }
        (h, u)
    }

    /// The nonzero rows of the Hermite form: a canonical basis of the row
    /// lattice.
    pub fn hnf_nonzero_rows(&self) -> Vec<Vec<BigInt>> {
        let (h, _) = self.hnf();
        (0..h.rows)
            .map(|i| h.row(i).to_vec())
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// Smith normal form: returns (D, U, V) with U·self·V = D diagonal,
    /// U and V unimodular, diagonal entries nonnegative with each dividing
    /// the next.
    pub fn snf(&self) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
        let mut d = self.clone();
        let mut u = IntegerMatrix::identity(self.rows);
        let mut v = IntegerMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let pivot = (t..self.rows)
                .flat_map(|i| (t..self.cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d.entry(i, j).is_zero())
                .min_by_key(|&(i, j)| d.entry(i, j).abs());
            let Some((pi, pj)) = pivot else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            if d.entry(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            let mut clean = true;
            for i in t + 1..self.rows {
                if d.entry(i, t).is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(d.entry(i, t), d.entry(t, t));
                d.shear_row(i, t, &q);
                u.shear_row(i, t, &q);
                if !d.entry(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..self.cols {
                if d.entry(t, j).is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(d.entry(t, j), d.entry(t, t));
                d.shear_col(j, t, &q);
                v.shear_col(j, t, &q);
                if !d.entry(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..self.rows)
                .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.entry(i, j) % d.entry(t, t)).is_zero());
            if let Some((i, _)) = offender {
                let minus_one = -BigInt::one();
                d.shear_row(t, i, &minus_one);
                u.shear_row(t, i, &minus_one);
                continue;
            }
            t += 1;
        }
        (d, u, v)
    }

    /// Fraction-free determinant of a square matrix.
    pub fn det_bareiss(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.entry(k, k).is_zero() {
                let swap = (k + 1..n).find(|&r| !m.entry(r, k).is_zero());
                let Some(swap) = swap else { return BigInt::zero() };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (m.entry(i, j) * m.entry(k, k) - m.entry(i, k) * m.entry(k, j))
                        / &prev;
                    *m.entry_mut(i, j) = val;
                }
                *m.entry_mut(i, k) = BigInt::zero();
            }
            prev = m.entry(k, k).clone();
        }
        sign * m.entry(n - 1, n - 1).clone()
    }

    /// An integer basis of { x : self·x = 0 }, as the columns of V beyond
    /// the rank in the Smith decomposition.
    pub fn annihilator_basis(&self) -> Vec<Vec<BigInt>> {
        let (d, _, v) = self.snf();
        let rank = (0..self.rows.min(self.cols))
            .take_while(|&i| !d.entry(i, i).is_zero())
            .count();
        (rank..self.cols)
            .map(|j| (0..self.cols).map(|i| v.entry(i, j).clone()).collect())
            .collect()
    }
}

/// Invariant factors of the cokernel ℤ^cols / rowLattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbelianStructure {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

pub fn abelianization(m: &IntegerMatrix) -> AbelianStructure {
    let (d, _, _) = m.snf();
    let mut torsion = Vec::new();
    let mut nonzero = 0;
    for i in 0..m.rows().min(m.cols()) {
        let e = d.entry(i, i);
        if e.is_zero() {
            break;
        }
        nonzero += 1;
        if !e.is_one() {
            torsion.push(e.to_i64().expect("torsion within i64"));
        }
    }
    AbelianStructure { free_rank: m.cols() - nonzero, torsion }
}

/// Two matrices span the same row lattice iff their Hermite forms agree.
pub fn equal_row_lattices(a: &IntegerMatrix, b: &IntegerMatrix) -> bool {
    a.cols() == b.cols() && a.hnf_nonzero_rows() == b.hnf_nonzero_rows()
}

/// The defects of the bundled relators, in order.
pub fn standard_defects(cfg: &SigmaConfig) -> Result<Vec<Twelfth>, CocycleError> {
    Presentation::bundled()
        .relators()
        .iter()
        .map(|r| defect(r, cfg))
        .collect()
}

pub fn defects_all_integral(defects: &[Twelfth]) -> bool {
    defects.iter().all(Twelfth::is_integer)
}

/// Relator matrix of the central extension of Υ by (1/12)ℤ: one row per
/// relator with the z-column carrying −12·defect, then one zero row per
/// generator for the commutators [z, nᵢ].
pub fn build_extension(
    p: &Presentation,
    defects: &[Twelfth],
) -> Result<IntegerMatrix, PresentationError> {
    if defects.len() != p.relators().len() {
        return Err(PresentationError::DefectCount {
            expected: p.relators().len(),
            got: defects.len(),
        });
    }
    let cols = p.generator_count() + 1;
    let mut m = IntegerMatrix::zero(p.relators().len() + p.generator_count(), cols);
    for (i, (r, d)) in p.relators().iter().zip(defects).enumerate() {
        for (j, e) in r.exponent_sums().into_iter().enumerate() {
            *m.entry_mut(i, j) = BigInt::from(e);
        }
        *m.entry_mut(i, cols - 1) = BigInt::from(-d.numerator());
    }
    Ok(m)
}

/// Row echelon solver over ℚ; free variables are set to zero. Returns None
/// when the system is inconsistent.
fn solve_rational_system(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                let sub = &f * &a[r][j];
                a[i][j] -= sub;
            }
            let sub = &f * &b[r];
            b[i] -= sub;
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[row].clone();
    }
    Some(x)
}

/// A solved splitting system: the canonical particular character plus the
/// homogeneous space it is orthogonal to.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitSolution {
    particular: Vec<BigRational>,
    center: BigRational,
    homogeneous: Vec<Vec<BigInt>>,
}

impl SplitSolution {
    /// Φ on the lifted generators n̂1…n̂5.
    pub fn phi_values(&self) -> &[BigRational] {
        &self.particular
    }

    /// Φ(z).
    pub fn phi_center(&self) -> &BigRational {
        &self.center
    }

    /// Integer basis of the homogeneous solutions (characters of Υ itself).
    pub fn homogeneous_basis(&self) -> &[Vec<BigInt>] {
        &self.homogeneous
    }

    pub fn dimension(&self) -> usize {
        self.homogeneous.len()
    }

    fn kappa_values(shift: &[BigRational]) -> Result<[Twelfth; 5], PresentationError> {
        let twelve = BigRational::from(BigInt::from(12));
        let mut out = [Twelfth::zero(); 5];
        for (i, p) in shift.iter().enumerate() {
            let scaled = -(p * &twelve);
            if !scaled.is_integer() {
                return Err(PresentationError::NonTwelfth { value: p.to_string() });
            }
            let num = scaled
                .to_integer()
                .to_i64()
                .ok_or_else(|| PresentationError::NonTwelfth { value: p.to_string() })?;
            out[i] = Twelfth::new(num);
        }
        Ok(out)
    }

    /// κ = −Φ on the generators, verified against the splitting identity at
    /// construction.
    pub fn kappa_table(&self, cfg: &SigmaConfig) -> Result<KappaTable, PresentationError> {
        let values = SplitSolution::kappa_values(&self.particular)?;
        Ok(KappaTable::from_generator_values(values, cfg)?)
    }

    /// The κ table shifted by a homogeneous character so that κ(n1) and
    /// κ(n2) vanish.
    pub fn kappa_table_upper_zero(
        &self,
        cfg: &SigmaConfig,
    ) -> Result<KappaTable, PresentationError> {
        let k = self.homogeneous.len();
        let a: Vec<Vec<BigRational>> = (0..2)
            .map(|coord| {
                (0..k)
                    .map(|i| BigRational::from(self.homogeneous[i][coord].clone()))
                    .collect()
            })
            .collect();
        let b: Vec<BigRational> =
            (0..2).map(|coord| -self.particular[coord].clone()).collect();
        let coeffs =
            solve_rational_system(a, b).ok_or(PresentationError::UpperZeroUnavailable)?;
        let mut shifted = self.particular.clone();
        for (c, h) in coeffs.iter().zip(&self.homogeneous) {
            for (s, hv) in shifted.iter_mut().zip(h) {
                *s += c * BigRational::from(hv.clone());
            }
        }
        let values = SplitSolution::kappa_values(&shifted)?;
        Ok(KappaTable::from_generator_values(values, cfg)?)
    }
}

/// Solves Φ(row) = 0 for every row of the extension matrix, with Φ(z) fixed
/// to `center`. The returned particular solution is the unique one
/// orthogonal to the homogeneous space.
pub fn solve_split(
    extension: &IntegerMatrix,
    center: Twelfth,
) -> Result<SplitSolution, PresentationError> {
    let gens = extension.cols() - 1;
    let center_value = center.to_rational();
    let a: Vec<Vec<BigRational>> = (0..extension.rows())
        .map(|i| (0..gens).map(|j| BigRational::from(extension.entry(i, j).clone())).collect())
        .collect();
    let b: Vec<BigRational> = (0..extension.rows())
        .map(|i| -BigRational::from(extension.entry(i, extension.cols() - 1).clone()) * &center_value)
        .collect();
    let particular = solve_rational_system(a, b).ok_or(PresentationError::Inconsistent)?;

    let mut generator_part = IntegerMatrix::zero(extension.rows(), gens);
    for i in 0..extension.rows() {
        for j in 0..gens {
            *generator_part.entry_mut(i, j) = extension.entry(i, j).clone();
        }
    }
    let homogeneous = generator_part.annihilator_basis();

    // Project the particular solution onto the orthogonal complement of the
    // homogeneous space: solve the Gram system (BᵀB)c = Bᵀx and subtract Bc.
    let k = homogeneous.len();
    let particular = if k == 0 {
        particular
    } else {
        let gram: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let dot: BigInt = homogeneous[i]
                            .iter()
                            .zip(&homogeneous[j])
                            .map(|(x, y)| x * y)
                            .sum();
                        BigRational::from(dot)
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<BigRational> = (0..k)
            .map(|i| {
                homogeneous[i]
                    .iter()
                    .zip(&particular)
                    .map(|(x, p)| BigRational::from(x.clone()) * p)
                    .sum()
            })
            .collect();
        let coeffs = solve_rational_system(gram, rhs).ok_or(PresentationError::Inconsistent)?;
        particular
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let mut v = p.clone();
                for (c, h) in coeffs.iter().zip(&homogeneous) {
                    v -= c * BigRational::from(h[j].clone());
                }
                v
            })
            .collect()
    };

    Ok(SplitSolution { particular, center: center_value, homogeneous })
}

/// Which representative of the splitting class a κ table uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Orthogonal to the homogeneous characters.
    Canonical,
    /// κ(n1) = κ(n2) = 0.
    UpperZero,
}

/// The full pipeline: bundled presentation → relator defects → extension
/// matrix → splitting solve → κ table.
pub fn derived_kappa_table(
    normalization: Normalization,
    cfg: &SigmaConfig,
) -> Result<KappaTable, PresentationError> {
    let p = Presentation::bundled();
    let defects = standard_defects(cfg)?;
    let ext = build_extension(&p, &defects)?;
    let sol = solve_split(&ext, Twelfth::new(1))?;
    match normalization {
        Normalization::Canonical => sol.kappa_table(cfg),
        Normalization::UpperZero => sol.kappa_table_upper_zero(cfg),
    }
}
