//! Floating-point matrices for SU(d,1) in arbitrary dimension: the form
//! matrix, residual checks, a matrix exponential, Haar-ish random sampling
//! through the Lie algebra, and the diagonal torus elements
//! t_z = diag(z, conj(z)², I_{d−2}, z).

use num_complex::Complex64;
use rand::Rng;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

pub const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("torus parameter must have unit modulus, |z| = {0}")]
    NotUnitModulus(f64),
    #[error("matrix exponential did not converge")]
    ExpNonConvergence,
}

/// Principal logarithm with the branch Im ∈ (−π, π].
///
/// A negative-zero imaginary part is normalized to +0.0 first, so values on
/// the negative real axis land on the +iπ side of the cut instead of −iπ.
pub fn principal_log(z: Complex64) -> Complex64 {
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.ln()
}

/// Ψ(t_z, n) = (1/2πi)·log z − n, real for |z| = 1.
pub fn torus_psi(z: Complex64, n: i64) -> f64 {
    principal_log(z).im / TAU - n as f64
}

/// Residual of the additivity law Ψ((t_z, n)·(t_w, m)) = Ψ(t_z, n) + Ψ(t_w, m),
/// where the product carries the level n + m + σ(t_z, t_w).
pub fn psi_additivity_residual(z: Complex64, n: i64, w: Complex64, m: i64, sigma: i64) -> f64 {
    (torus_psi(z * w, n + m + sigma) - torus_psi(z, n) - torus_psi(w, m)).abs()
}

/// A (d+1)×(d+1) complex matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMatrix {
    d: usize,
    entries: Vec<Complex64>,
}

impl NumericMatrix {
    pub fn zero(d: usize) -> Self {
        NumericMatrix { d, entries: vec![Complex64::new(0.0, 0.0); (d + 1) * (d + 1)] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = NumericMatrix::zero(d);
        for i in 0..=d {
            *m.entry_mut(i, i) = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// The form matrix J: antidiagonal ones on the first and last coordinates
    /// framing an identity block.
    pub fn form_j(d: usize) -> Self {
        let mut m = NumericMatrix::zero(d);
        *m.entry_mut(0, d) = Complex64::new(1.0, 0.0);
        *m.entry_mut(d, 0) = Complex64::new(1.0, 0.0);
        for i in 1..d {
            *m.entry_mut(i, i) = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Ball-model dimension d; the matrix itself is (d+1)×(d+1).
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * (self.d + 1) + col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
        &mut self.entries[row * (self.d + 1) + col]
    }

    pub fn mul(&self, rhs: &NumericMatrix) -> NumericMatrix {
        assert_eq!(self.d, rhs.d, "dimension mismatch");
        let n = self.d + 1;
        let mut out = NumericMatrix::zero(self.d);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entry(i, k) * rhs.entry(k, j);
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> NumericMatrix {
        let n = self.d + 1;
        let mut out = NumericMatrix::zero(self.d);
        for i in 0..n {
            for j in 0..n {
                *out.entry_mut(j, i) = self.entry(i, j).conj();
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> NumericMatrix {
        NumericMatrix { d: self.d, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    pub fn add(&self, rhs: &NumericMatrix) -> NumericMatrix {
        assert_eq!(self.d, rhs.d);
        NumericMatrix {
            d: self.d,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &NumericMatrix) -> NumericMatrix {
        assert_eq!(self.d, rhs.d);
        NumericMatrix {
            d: self.d,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// ‖conj(g)ᵗ J g − J‖_∞, the unitarity residual.
    pub fn j_residual(&self) -> f64 {
        let j = NumericMatrix::form_j(self.d);
        self.conj_transpose().mul(&j).mul(self).sub(&j).max_abs()
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.d + 1;
        let mut a = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    a[r1 * n + col].norm().total_cmp(&a[r2 * n + col].norm())
                })
                .unwrap();
            let pivot = a[pivot_row * n + col];
            if pivot.norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for k in 0..n {
                    a.swap(pivot_row * n + k, col * n + k);
                }
                det = -det;
            }
            det *= pivot;
            for row in col + 1..n {
                let factor = a[row * n + col] / pivot;
                for k in col..n {
                    let sub = factor * a[col * n + k];
                    a[row * n + k] -= sub;
                }
            }
        }
        det
    }

    /// Unitarity and determinant within tol.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.j_residual() <= tol && (self.det() - Complex64::new(1.0, 0.0)).norm() <= tol
    }
}

impl Serialize for NumericMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("d", &self.d)?;
        let rows: Vec<Vec<[f64; 2]>> = (0..=self.d)
            .map(|i| (0..=self.d).map(|j| [self.entry(i, j).re, self.entry(i, j).im]).collect())
            .collect();
        map.serialize_entry("entries", &rows)?;
        map.end()
    }
}

/// exp(M) by scaling and squaring with a truncated Taylor series.
pub fn expm(m: &NumericMatrix) -> Result<NumericMatrix, NumericError> {
    let norm = m.max_abs() * (m.d as f64 + 1.0);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.scaled(Complex64::new(0.5_f64.powi(squarings as i32), 0.0));

    let mut acc = NumericMatrix::identity(m.d);
    let mut term = NumericMatrix::identity(m.d);
    let mut converged = false;
    for k in 1..=60 {
        term = term.mul(&scaled).scaled(Complex64::new(1.0 / k as f64, 0.0));
        acc = acc.add(&term);
        if term.max_abs() <= 1e-16 * acc.max_abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericError::ExpNonConvergence);
    }
    for _ in 0..squarings {
        acc = acc.mul(&acc);
    }
    Ok(acc)
}

/// A random element of SU(d,1): a bounded element of the Lie algebra
/// 𝔰𝔲(d,1) = {M : conj(M)ᵗJ + JM = 0, tr M = 0} is drawn and exponentiated.
pub fn random_su<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<NumericMatrix, NumericError> {
    if d < 2 {
        return Err(NumericError::DimensionTooSmall(d));
    }
    let n = d + 1;
    let mut raw = NumericMatrix::zero(d);
    for i in 0..n {
        for j in 0..n {
            *raw.entry_mut(i, j) = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    // (R − conj(R)ᵗ)/2 is skew-Hermitian; J·skew-Hermitian solves the algebra
    // condition, and tr(J H) is purely imaginary so the trace correction
    // stays inside.
    let skew = raw.sub(&raw.conj_transpose()).scaled(Complex64::new(0.5, 0.0));
    let mut m = NumericMatrix::form_j(d).mul(&skew);
    let trace: Complex64 = (0..n).map(|i| m.entry(i, i)).sum();
    let shift = trace / n as f64;
    for i in 0..n {
        *m.entry_mut(i, i) -= shift;
    }
    let cap = m.max_abs();
    if cap > 1.0 {
        m = m.scaled(Complex64::new(1.0 / cap, 0.0));
    }
    expm(&m)
}

/// The torus element t_z = diag(z, conj(z)², I_{d−2}, z) for |z| = 1.
pub fn make_torus(z: Complex64, d: usize) -> Result<NumericMatrix, NumericError> {
    if d < 2 {
        return Err(NumericError::DimensionTooSmall(d));
    }
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(NumericError::NotUnitModulus(z.norm()));
    }
    let mut m = NumericMatrix::identity(d);
    *m.entry_mut(0, 0) = z;
    *m.entry_mut(1, 1) = z.conj() * z.conj();
    *m.entry_mut(d, d) = z;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_log_branch() {
        assert!((principal_log(c(-1.0, 0.0)).im - std::f64::consts::PI).abs() < 1e-15);
        assert!((principal_log(c(-1.0, -0.0)).im - std::f64::consts::PI).abs() < 1e-15);
        let below = principal_log(c(-1.0, -1e-12));
        assert!(below.im < 0.0, "points just below the cut stay near −π");
    }

    #[test]
    fn form_matrix_and_determinant() {
        let j = NumericMatrix::form_j(2);
        assert_eq!(j.entry(0, 2), c(1.0, 0.0));
        assert_eq!(j.entry(1, 1), c(1.0, 0.0));
        assert!((j.det() - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((NumericMatrix::identity(4).det() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let z = NumericMatrix::zero(3);
        assert!(expm(&z).unwrap().sub(&NumericMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn exponential_matches_diagonal_case() {
        let mut m = NumericMatrix::zero(2);
        *m.entry_mut(0, 0) = c(0.3, -0.4);
        *m.entry_mut(1, 1) = c(-0.2, 0.9);
        *m.entry_mut(2, 2) = c(0.0, 1.4);
        let e = expm(&m).unwrap();
        for i in 0..3 {
            assert!((e.entry(i, i) - m.entry(i, i).exp()).norm() < 1e-13);
        }
        assert!(e.entry(0, 1).norm() < 1e-15);
    }

    #[test]
    fn exponential_respects_squaring() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut m = NumericMatrix::zero(2);
        for i in 0..3 {
            for j in 0..3 {
                *m.entry_mut(i, j) = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let double = expm(&m.scaled(c(2.0, 0.0))).unwrap();
        let single = expm(&m).unwrap();
        assert!(single.mul(&single).sub(&double).max_abs() < 1e-11);
    }

    #[test]
    fn random_su_satisfies_the_form_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for d in [2, 3, 4] {
            for _ in 0..25 {
                let g = random_su(&mut rng, d).unwrap();
                assert!(g.j_residual() < 1e-9, "residual {} at d = {}", g.j_residual(), d);
                assert!((g.det() - c(1.0, 0.0)).norm() < 1e-9);
                assert!(g.is_valid(1e-9));
            }
        }
        assert!(matches!(random_su(&mut rng, 1), Err(NumericError::DimensionTooSmall(1))));
    }

    #[test]
    fn torus_examples() {
        let zeta = c(-0.5, 3.0_f64.sqrt() / 2.0);
        let t = make_torus(zeta, 2).unwrap();
        for i in 0..3 {
            assert!((t.entry(i, i) - zeta).norm() < 1e-15, "t_ζ = ζ·I₃ at d = 2");
        }
        assert!(t.is_valid(1e-12));

        let i_unit = c(0.0, 1.0);
        let t = make_torus(i_unit, 3).unwrap();
        assert_eq!(t.entry(0, 0), i_unit);
        assert!((t.entry(1, 1) - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(t.entry(2, 2), c(1.0, 0.0));
        assert_eq!(t.entry(3, 3), i_unit);
        assert!(t.is_valid(1e-12));

        assert!(matches!(make_torus(c(1.1, 0.0), 2), Err(NumericError::NotUnitModulus(_))));
    }

    #[test]
    fn psi_spot_values() {
        let zeta = c(-0.5, 3.0_f64.sqrt() / 2.0);
        assert!((torus_psi(zeta, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((torus_psi(c(1.0, 0.0), 2) + 2.0).abs() < 1e-15);
        // σ(t_ζ, t_ζ) = −1 makes Ψ additive: Ψ(t_{ζ²}, −1) = 2/3.
        assert!(psi_additivity_residual(zeta, 0, zeta, 0, -1) < 1e-15);
    }

    #[test]
    fn serialization_shape() {
        let j = NumericMatrix::form_j(2);
        let json = serde_json::to_value(&j).unwrap();
        assert_eq!(json["d"], 2);
        assert_eq!(json["entries"][0][2][0], 1.0);
    }
}
