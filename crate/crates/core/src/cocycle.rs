//! The integer 2-cocycle σ of the universal cover of SU(d,1), its exact
//! Heisenberg counterpart Σ, splittings σ = Σ + δκ, and the
//! fractional-weight multiplier ℓ built from a splitting.
//!
//! For g, h ∈ SU(d,1) and any τ ∈ ℋ,
//!
//! ```text
//!     σ(g, h) = (1/2πi) · ( j̃(gh, τ) − j̃(g, h·τ) − j̃(h, τ) )
//! ```
//!
//! is an integer independent of τ. The evaluator rounds the right-hand side
//! and enforces both a rounding-residual gate and agreement between two
//! unrelated base points, so a silent precision failure turns into a loud
//! error. Exact group elements are evaluated on the ℚ(ζ) path, where
//! everything but the final logarithms is exact arithmetic.
//!
//! On words in n1…n5 the Heisenberg pairing
//!
//! ```text
//!     Σ(g, h) = (1/4) · Tr( φ(g)·conj(φ(h)) / √−3 ) ∈ (1/4)ℤ
//! ```
//!
//! is biadditive, and σ − Σ is a coboundary: σ = Σ + δκ for a class of
//! functions κ: Υ → (1/12)ℤ produced by the presentation solver. A κ table
//! determines the weight-1/12-per-unit multiplier
//!
//! ```text
//!     ℓ(g, τ) = exp( (j̃(g, τ) − 2πi·κ(g)) / Norm(I) )
//! ```
//!
//! on the congruence tower Υ_nc(2I), with ℓ^{12·Norm(I)} = j^{12}.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::ball::{
    act, act_exact, default_base_point, embed_matrix, j_tilde, j_tilde_exact, second_base_point,
    BallError, BallPoint, ExactBallPoint,
};
use crate::eisenstein::{EisensteinIdeal, EisensteinInt, Twelfth};
use crate::group::{evaluate, in_upsilon_nc, letter_matrix, phi, GroupError, GroupMatrix};
use crate::numeric::{make_torus, principal_log, psi_additivity_residual, NumericError, NumericMatrix, TAU};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CocycleError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("σ rounding residual {residual:e} exceeds tolerance {tol:e} (raw value {value})")]
    PrecisionLoss { value: f64, residual: f64, tol: f64 },
    #[error("σ disagrees between base points: {first} vs {second}")]
    BasePointMismatch { first: i64, second: i64 },
    #[error("element dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("word {word:?} does not evaluate to the identity")]
    RelatorNotIdentity { word: String },
    #[error("word {word:?} lies outside Υ_nc(2·{ideal})")]
    NotInTower { word: String, ideal: String },
    #[error("κ table fails the splitting identity on the pair ({g:?}, {h:?})")]
    TableCheckFailed { g: String, h: String },
}

/// Evaluation settings for σ: the rounding-residual tolerance and an
/// optional replacement for the default base point. The second,
/// cross-checking base point is fixed.
#[derive(Clone, Debug)]
pub struct SigmaConfig {
    pub tol: f64,
    pub base_override: Option<BallPoint>,
}

impl Default for SigmaConfig {
    fn default() -> Self {
        SigmaConfig { tol: 1e-6, base_override: None }
    }
}

/// A rounded σ value together with the worst rounding residual seen while
/// producing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaOutcome {
    pub value: i64,
    pub residual: f64,
}

fn round_sigma(raw: Complex64, tol: f64) -> Result<SigmaOutcome, CocycleError> {
    let value = raw.im / TAU;
    let rounded = value.round();
    let residual = (value - rounded).abs().max(raw.re.abs() / TAU);
    if !residual.is_finite() || residual > tol {
        return Err(CocycleError::PrecisionLoss { value, residual, tol });
    }
    Ok(SigmaOutcome { value: rounded as i64, residual })
}

fn merge_base_points(
    first: SigmaOutcome,
    second: SigmaOutcome,
) -> Result<SigmaOutcome, CocycleError> {
    if first.value != second.value {
        return Err(CocycleError::BasePointMismatch { first: first.value, second: second.value });
    }
    Ok(SigmaOutcome { value: first.value, residual: first.residual.max(second.residual) })
}

fn sigma_raw_exact(
    g: &GroupMatrix,
    h: &GroupMatrix,
    gh: &GroupMatrix,
    tau: &ExactBallPoint,
) -> Result<Complex64, CocycleError> {
    let (h_tau, _) = act_exact(h, tau)?;
    Ok(j_tilde_exact(gh, tau)? - j_tilde_exact(g, &h_tau)? - j_tilde_exact(h, tau)?)
}

fn sigma_raw_numeric(
    g: &NumericMatrix,
    h: &NumericMatrix,
    gh: &NumericMatrix,
    tau: &BallPoint,
) -> Result<Complex64, CocycleError> {
    let h_tau = act(h, tau)?;
    Ok(j_tilde(gh, tau)? - j_tilde(g, &h_tau)? - j_tilde(h, tau)?)
}

/// σ for exact matrices, evaluated on the ℚ(ζ) path at the default base
/// point (or a numeric override) and cross-checked at the second point.
pub(crate) fn sigma_exact_matrices(
    g: &GroupMatrix,
    h: &GroupMatrix,
    gh: &GroupMatrix,
    cfg: &SigmaConfig,
) -> Result<SigmaOutcome, CocycleError> {
    let first = match &cfg.base_override {
        None => round_sigma(sigma_raw_exact(g, h, gh, &ExactBallPoint::base())?, cfg.tol)?,
        Some(tau) => {
            if tau.dim() != 2 {
                return Err(CocycleError::DimensionMismatch { left: 2, right: tau.dim() });
            }
            let raw = sigma_raw_numeric(&embed_matrix(g), &embed_matrix(h), &embed_matrix(gh), tau)?;
            round_sigma(raw, cfg.tol)?
        }
    };
    let second = round_sigma(sigma_raw_exact(g, h, gh, &ExactBallPoint::second_base())?, cfg.tol)?;
    merge_base_points(first, second)
}

/// σ on words, through exact evaluation of the word matrices.
pub fn sigma_words(g: &Word, h: &Word, cfg: &SigmaConfig) -> Result<SigmaOutcome, CocycleError> {
    let gm = evaluate(g);
    let hm = evaluate(h);
    let gh = gm.mul(&hm);
    sigma_exact_matrices(&gm, &hm, &gh, cfg)
}

/// σ on numeric matrices of any ball dimension d ≥ 2.
pub fn sigma_matrices(
    g: &NumericMatrix,
    h: &NumericMatrix,
    cfg: &SigmaConfig,
) -> Result<SigmaOutcome, CocycleError> {
    if g.dim() != h.dim() {
        return Err(CocycleError::DimensionMismatch { left: g.dim(), right: h.dim() });
    }
    let d = g.dim();
    let gh = g.mul(h);
    let tau1 = match &cfg.base_override {
        Some(tau) => {
            if tau.dim() != d {
                return Err(CocycleError::DimensionMismatch { left: d, right: tau.dim() });
            }
            tau.clone()
        }
        None => default_base_point(d),
    };
    let first = round_sigma(sigma_raw_numeric(g, h, &gh, &tau1)?, cfg.tol)?;
    let second = round_sigma(sigma_raw_numeric(g, h, &gh, &second_base_point(d))?, cfg.tol)?;
    merge_base_points(first, second)
}

/// A group element as the evaluator sees it: an exact word or a numeric
/// matrix.
#[derive(Clone, Debug)]
pub enum Element {
    Word(Word),
    Matrix(NumericMatrix),
}

impl Element {
    pub fn dim(&self) -> usize {
        match self {
            Element::Word(_) => 2,
            Element::Matrix(m) => m.dim(),
        }
    }

    fn to_numeric(&self) -> NumericMatrix {
        match self {
            Element::Word(w) => embed_matrix(&evaluate(w)),
            Element::Matrix(m) => m.clone(),
        }
    }
}

/// σ on a pair of elements; exact words take the exact path, anything else
/// goes through the numeric evaluator.
pub fn sigma(g: &Element, h: &Element, cfg: &SigmaConfig) -> Result<SigmaOutcome, CocycleError> {
    match (g, h) {
        (Element::Word(gw), Element::Word(hw)) => sigma_words(gw, hw, cfg),
        _ => {
            if g.dim() != h.dim() {
                return Err(CocycleError::DimensionMismatch { left: g.dim(), right: h.dim() });
            }
            sigma_matrices(&g.to_numeric(), &h.to_numeric(), cfg)
        }
    }
}

fn phi_of_letter(letter: Letter) -> EisensteinInt {
    let base = match letter.generator() {
        1 => EisensteinInt::one(),
        2 => EisensteinInt::zeta(),
        3 => EisensteinInt::zero(),
        4 => -EisensteinInt::one(),
        5 => EisensteinInt::zero(),
        _ => unreachable!(),
    };
    if letter.is_inverse() {
        -base
    } else {
        base
    }
}

/// Σ in terms of the φ-coordinates of the two arguments.
pub fn big_sigma_phi(phi_g: &EisensteinInt, phi_h: &EisensteinInt) -> Twelfth {
    let product = phi_g * &phi_h.conj();
    let b = product
        .tr_over_sqrt_minus3()
        .to_i64()
        .expect("Σ numerator within i64 for any tested word length");
    Twelfth::new(3 * b)
}

/// Σ(g, h) = (1/4)·Tr(φ(g)·conj(φ(h))/√−3) on words.
pub fn big_sigma(g: &Word, h: &Word) -> Twelfth {
    big_sigma_phi(&phi(g), &phi(h))
}

/// Σ(g, h) ∈ Norm(I)·ℤ for words in the tower Υ_nc(2I).
pub fn divisibility_check(
    g: &Word,
    h: &Word,
    ideal: &EisensteinIdeal,
) -> Result<bool, CocycleError> {
    let conductor = ideal.doubled();
    for w in [g, h] {
        if !conductor.contains(&phi(w)) {
            return Err(CocycleError::NotInTower {
                word: w.to_string(),
                ideal: ideal.to_string(),
            });
        }
    }
    let n = ideal.norm().to_i64().expect("ideal norm within i64");
    Ok(big_sigma(g, h).is_multiple_of(n))
}

/// Splitting data: κ on the five generators, with inverse-letter values
/// derived from κ(s⁻¹) = Σ(s,s⁻¹) − σ(s,s⁻¹) − κ(s).
#[derive(Clone, Debug, PartialEq)]
pub struct KappaTable {
    gens: [Twelfth; 5],
    invs: [Twelfth; 5],
}

/// Fixed spot-check pairs exercising every generator and inverse.
const TABLE_CHECK_PAIRS: [(&str, &str); 8] = [
    ("n1", "n4"),
    ("n2 n5^-1", "n3"),
    ("n4^-1 n5", "n1 n2"),
    ("n5 n5", "n4 n3^-1"),
    ("n3^-1 n2^-1", "n2 n4 n1"),
    ("n1 n5 n1", "n5^-1 n2"),
    ("n4 n2^-1 n3", "n3 n1^-1"),
    ("n5^-1 n4^-1", "n4 n5 n3"),
];

impl KappaTable {
    /// Builds the table and verifies the splitting identity on a fixed set
    /// of word pairs.
    pub fn from_generator_values(
        gens: [Twelfth; 5],
        cfg: &SigmaConfig,
    ) -> Result<Self, CocycleError> {
        let table = KappaTable::from_generator_values_unchecked(gens, cfg)?;
        for (gs, hs) in TABLE_CHECK_PAIRS {
            let g: Word = gs.parse().expect("fixed word parses");
            let h: Word = hs.parse().expect("fixed word parses");
            if !verify_split(&table, &g, &h, cfg)? {
                return Err(CocycleError::TableCheckFailed { g: gs.into(), h: hs.into() });
            }
        }
        Ok(table)
    }

    /// Builds the table without the construction-time spot check; the
    /// mutation tests use this to study corrupted tables.
    pub fn from_generator_values_unchecked(
        gens: [Twelfth; 5],
        cfg: &SigmaConfig,
    ) -> Result<Self, CocycleError> {
        let mut invs = [Twelfth::zero(); 5];
        for i in 0..5 {
            let letter = Letter::new((i + 1) as u8, false);
            let s = letter_matrix(letter);
            let s_inv = letter_matrix(letter.inverse());
            let identity = GroupMatrix::identity();
            let sig = sigma_exact_matrices(s, s_inv, &identity, cfg)?.value;
            let phi_s = phi_of_letter(letter);
            let big = big_sigma_phi(&phi_s, &(-&phi_s));
            invs[i] = big - Twelfth::from_integer(sig) - gens[i];
        }
        Ok(KappaTable { gens, invs })
    }

    pub fn generator_values(&self) -> &[Twelfth; 5] {
        &self.gens
    }

    pub fn letter_value(&self, letter: Letter) -> Twelfth {
        let i = letter.generator() - 1;
        if letter.is_inverse() {
            self.invs[i]
        } else {
            self.gens[i]
        }
    }

    /// κ(w) by the prefix recurrence κ(us) = κ(u) + κ(s) + σ(u,s) − Σ(u,s).
    pub fn kappa(&self, w: &Word, cfg: &SigmaConfig) -> Result<Twelfth, CocycleError> {
        let mut acc = Twelfth::zero();
        let mut prefix = GroupMatrix::identity();
        let mut prefix_phi = EisensteinInt::zero();
        for &letter in w.letters() {
            let s = letter_matrix(letter);
            let next = prefix.mul(s);
            let sig = sigma_exact_matrices(&prefix, s, &next, cfg)?.value;
            let phi_s = phi_of_letter(letter);
            let big = big_sigma_phi(&prefix_phi, &phi_s);
            acc = acc + self.letter_value(letter) + Twelfth::from_integer(sig) - big;
            prefix = next;
            prefix_phi = &prefix_phi + &phi_s;
        }
        Ok(acc)
    }
}

/// σ(g,h) = Σ(g,h) + κ(gh) − κ(g) − κ(h), checked exactly after rounding σ.
pub fn verify_split(
    table: &KappaTable,
    g: &Word,
    h: &Word,
    cfg: &SigmaConfig,
) -> Result<bool, CocycleError> {
    let lhs = Twelfth::from_integer(sigma_words(g, h, cfg)?.value);
    let rhs = big_sigma(g, h) + table.kappa(&g.concat(h), cfg)? - table.kappa(g, cfg)?
        - table.kappa(h, cfg)?;
    Ok(lhs == rhs)
}

/// An element (g, c) of the central extension of Υ by (1/12)ℤ twisted by
/// σ − Σ, with multiplication
///
/// ```text
///     (g, c)·(g', c') = (gg', c + c' + (σ − Σ)(g, g')).
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionElement {
    word: Word,
    matrix: GroupMatrix,
    phi_value: EisensteinInt,
    central: Twelfth,
}

impl ExtensionElement {
    pub fn identity() -> Self {
        ExtensionElement {
            word: Word::empty(),
            matrix: GroupMatrix::identity(),
            phi_value: EisensteinInt::zero(),
            central: Twelfth::zero(),
        }
    }

    /// The lift (s, 0) of a plain generator; an inverse letter lifts to the
    /// group inverse of the plain lift.
    pub fn letter_lift(letter: Letter, cfg: &SigmaConfig) -> Result<Self, CocycleError> {
        let plain = Letter::new(letter.generator() as u8, false);
        let lifted = ExtensionElement {
            word: Word::from_letters(vec![plain]),
            matrix: letter_matrix(plain).clone(),
            phi_value: phi_of_letter(plain),
            central: Twelfth::zero(),
        };
        if letter.is_inverse() {
            lifted.inverse(cfg)
        } else {
            Ok(lifted)
        }
    }

    /// The product of the letter lifts of w.
    pub fn lift(w: &Word, cfg: &SigmaConfig) -> Result<Self, CocycleError> {
        let mut acc = ExtensionElement::identity();
        for &letter in w.letters() {
            acc = acc.mul(&ExtensionElement::letter_lift(letter, cfg)?, cfg)?;
        }
        Ok(acc)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn matrix(&self) -> &GroupMatrix {
        &self.matrix
    }

    pub fn central(&self) -> Twelfth {
        self.central
    }

    pub fn mul(&self, rhs: &ExtensionElement, cfg: &SigmaConfig) -> Result<Self, CocycleError> {
        let product = self.matrix.mul(&rhs.matrix);
        let sig = sigma_exact_matrices(&self.matrix, &rhs.matrix, &product, cfg)?.value;
        let big = big_sigma_phi(&self.phi_value, &rhs.phi_value);
        Ok(ExtensionElement {
            word: self.word.concat(&rhs.word),
            matrix: product,
            phi_value: &self.phi_value + &rhs.phi_value,
            central: self.central + rhs.central + Twelfth::from_integer(sig) - big,
        })
    }

    /// (g, c)⁻¹ = (g⁻¹, −c − (σ − Σ)(g, g⁻¹)).
    pub fn inverse(&self, cfg: &SigmaConfig) -> Result<Self, CocycleError> {
        let inv_matrix = self.matrix.inverse()?;
        let identity = GroupMatrix::identity();
        let sig = sigma_exact_matrices(&self.matrix, &inv_matrix, &identity, cfg)?.value;
        let inv_phi = -&self.phi_value;
        let big = big_sigma_phi(&self.phi_value, &inv_phi);
        Ok(ExtensionElement {
            word: self.word.inverse(),
            matrix: inv_matrix,
            phi_value: inv_phi,
            central: -self.central - Twelfth::from_integer(sig) + big,
        })
    }
}

/// The central part of the lift of a relator: how far the naive lifts
/// (gᵢ, 0) miss being a relator of the extension.
pub fn defect(relator: &Word, cfg: &SigmaConfig) -> Result<Twelfth, CocycleError> {
    if evaluate(relator) != GroupMatrix::identity() {
        return Err(CocycleError::RelatorNotIdentity { word: relator.to_string() });
    }
    Ok(ExtensionElement::lift(relator, cfg)?.central())
}

/// The cocycle relation σ(g,h) + σ(gh,k) = σ(g,hk) + σ(h,k) on words.
pub fn cocycle_relation_words(
    g: &Word,
    h: &Word,
    k: &Word,
    cfg: &SigmaConfig,
) -> Result<bool, CocycleError> {
    let lhs = sigma_words(g, h, cfg)?.value + sigma_words(&g.concat(h), k, cfg)?.value;
    let rhs = sigma_words(g, &h.concat(k), cfg)?.value + sigma_words(h, k, cfg)?.value;
    Ok(lhs == rhs)
}

/// The cocycle relation on numeric matrices.
pub fn cocycle_relation_matrices(
    g: &NumericMatrix,
    h: &NumericMatrix,
    k: &NumericMatrix,
    cfg: &SigmaConfig,
) -> Result<bool, CocycleError> {
    let lhs = sigma_matrices(g, h, cfg)?.value + sigma_matrices(&g.mul(h), k, cfg)?.value;
    let rhs = sigma_matrices(g, &h.mul(k), cfg)?.value + sigma_matrices(h, k, cfg)?.value;
    Ok(lhs == rhs)
}

/// The multiplier ℓ(w, τ) = exp((j̃(w, τ) − 2πi·κ(w)) / Norm(I)), defined for
/// words in the tower Υ_nc(2I).
pub fn multiplier(
    table: &KappaTable,
    w: &Word,
    tau: &BallPoint,
    ideal: &EisensteinIdeal,
    cfg: &SigmaConfig,
) -> Result<Complex64, CocycleError> {
    if !in_upsilon_nc(w, &ideal.doubled()) {
        return Err(CocycleError::NotInTower { word: w.to_string(), ideal: ideal.to_string() });
    }
    if tau.dim() != 2 {
        return Err(CocycleError::DimensionMismatch { left: 2, right: tau.dim() });
    }
    let jt = j_tilde(&embed_matrix(&evaluate(w)), tau)?;
    let kappa = table.kappa(w, cfg)?;
    let n = ideal.norm().to_f64().expect("ideal norm within f64");
    Ok(((jt - Complex64::new(0.0, TAU * kappa.value())) / n).exp())
}

/// σ of two torus elements t_{z1}, t_{z2} through the general evaluator.
pub fn torus_sigma(
    z1: Complex64,
    z2: Complex64,
    d: usize,
    cfg: &SigmaConfig,
) -> Result<SigmaOutcome, CocycleError> {
    let t1 = make_torus(z1, d)?;
    let t2 = make_torus(z2, d)?;
    sigma_matrices(&t1, &t2, cfg)
}

/// The closed form of σ on the torus: the branch-wrap count
/// (log z₁ + log z₂ − log(z₁z₂)) / 2πi ... sign-adjusted to match
/// σ = (1/2πi)(log(z₁z₂) − log z₁ − log z₂).
pub fn torus_sigma_formula(z1: Complex64, z2: Complex64) -> i64 {
    let raw = principal_log(z1 * z2).im - principal_log(z1).im - principal_log(z2).im;
    (raw / TAU).round() as i64
}

/// Residual of the Ψ additivity law with σ supplied by the evaluator.
pub fn psi_residual(
    z1: Complex64,
    n1: i64,
    z2: Complex64,
    n2: i64,
    d: usize,
    cfg: &SigmaConfig,
) -> Result<f64, CocycleError> {
    let sig = torus_sigma(z1, z2, d, cfg)?.value;
    Ok(psi_additivity_residual(z1, n1, z2, n2, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::sample_word;
    use crate::numeric::random_su;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn cfg() -> SigmaConfig {
        SigmaConfig::default()
    }

    fn zeta_c() -> Complex64 {
        Complex64::new(-0.5, 3.0_f64.sqrt() / 2.0)
    }

    /// κ values matching the solver output with the canonical normalization.
    fn reference_table() -> KappaTable {
        KappaTable::from_generator_values(
            [
                Twelfth::new(-1),
                Twelfth::new(0),
                Twelfth::new(-2),
                Twelfth::new(-1),
                Twelfth::new(10),
            ],
            &cfg(),
        )
        .unwrap()
    }

    #[test]
    fn sigma_vanishes_on_upper_triangular_pairs() {
        let out = sigma_words(&w("n1"), &w("n2"), &cfg()).unwrap();
        assert_eq!(out.value, 0);
        assert!(out.residual < 1e-12);
    }

    #[test]
    fn sigma_with_identity_is_zero() {
        assert_eq!(sigma_words(&Word::empty(), &w("n4 n5^-1"), &cfg()).unwrap().value, 0);
        assert_eq!(sigma_words(&w("n4 n5^-1"), &Word::empty(), &cfg()).unwrap().value, 0);
    }

    #[test]
    fn sigma_on_the_torus_square() {
        let out = torus_sigma(zeta_c(), zeta_c(), 2, &cfg()).unwrap();
        assert_eq!(out.value, -1);
        assert_eq!(torus_sigma_formula(zeta_c(), zeta_c()), -1);
    }

    #[test]
    fn sigma_exact_and_numeric_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1001);
        for _ in 0..25 {
            let g = sample_word(&mut rng, 10);
            let h = sample_word(&mut rng, 10);
            let exact = sigma_words(&g, &h, &cfg()).unwrap();
            let numeric = sigma_matrices(
                &embed_matrix(&evaluate(&g)),
                &embed_matrix(&evaluate(&h)),
                &cfg(),
            )
            .unwrap();
            assert_eq!(exact.value, numeric.value);
        }
    }

    #[test]
    fn sigma_ignores_the_base_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let g = sample_word(&mut rng, 10);
            let h = sample_word(&mut rng, 10);
            let default_value = sigma_words(&g, &h, &cfg()).unwrap().value;
            let custom = SigmaConfig {
                base_override: Some(crate::ball::random_ball_point(&mut rng, 2)),
                ..cfg()
            };
            assert_eq!(sigma_words(&g, &h, &custom).unwrap().value, default_value);
        }
    }

    #[test]
    fn sigma_rejects_mismatched_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Element::Matrix(random_su(&mut rng, 2).unwrap());
        let h = Element::Matrix(random_su(&mut rng, 3).unwrap());
        assert!(matches!(
            sigma(&g, &h, &cfg()),
            Err(CocycleError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mixed_word_and_torus_elements_evaluate() {
        let g = Element::Word(w("n4"));
        let h = Element::Matrix(make_torus(zeta_c(), 2).unwrap());
        let out = sigma(&g, &h, &cfg()).unwrap();
        let swapped = sigma(&h, &g, &cfg()).unwrap();
        assert!(out.residual < 1e-9 && swapped.residual < 1e-9);
    }

    #[test]
    fn big_sigma_examples() {
        assert_eq!(big_sigma(&w("n1"), &w("n2")), Twelfth::new(-3));
        assert_eq!(big_sigma(&w("n1 n1"), &w("n2 n2")), Twelfth::new(-12));
        assert_eq!(big_sigma(&w("n1"), &w("n1^-1")), Twelfth::zero());
        assert_eq!(big_sigma(&w("n3"), &w("n5")), Twelfth::zero());
    }

    #[test]
    fn divisibility_examples() {
        let ideal = EisensteinIdeal::new(EisensteinInt::new(1, 2)).unwrap();
        // φ = 2+4ζ ∈ 2(1+2ζ)... both words land in the conductor by design.
        let g = w("n1 n1 n2 n2 n2 n2");
        let h = w("n2 n2 n1 n1 n1 n1 n1 n1");
        assert!(divisibility_check(&g, &h, &ideal).unwrap());
        assert!(matches!(
            divisibility_check(&w("n1"), &h, &ideal),
            Err(CocycleError::NotInTower { .. })
        ));
    }

    #[test]
    fn kappa_of_the_empty_word_vanishes() {
        assert_eq!(reference_table().kappa(&Word::empty(), &cfg()).unwrap(), Twelfth::zero());
    }

    #[test]
    fn kappa_on_single_letters_matches_the_table() {
        let table = reference_table();
        for s in ["n1", "n2", "n3", "n4", "n5", "n1^-1", "n3^-1", "n5^-1"] {
            let word = w(s);
            assert_eq!(
                table.kappa(&word, &cfg()).unwrap(),
                table.letter_value(word.letters()[0]),
                "letter {s}"
            );
        }
    }

    #[test]
    fn kappa_vanishes_on_inverse_pairs() {
        let table = reference_table();
        for s in ["n1", "n2", "n3", "n4", "n5"] {
            let word = format!("{s} {s}^-1").parse::<Word>().unwrap();
            assert_eq!(table.kappa(&word, &cfg()).unwrap(), Twelfth::zero());
        }
    }

    #[test]
    fn split_identity_holds_on_sampled_pairs() {
        let table = reference_table();
        let mut rng = ChaCha8Rng::seed_from_u64(321);
        for _ in 0..30 {
            let g = sample_word(&mut rng, 12);
            let h = sample_word(&mut rng, 12);
            assert!(verify_split(&table, &g, &h, &cfg()).unwrap(), "pair ({g}, {h})");
        }
    }

    #[test]
    fn corrupted_tables_fail_somewhere() {
        let mut values = *reference_table().generator_values();
        values[2] = values[2] + Twelfth::new(1);
        let corrupted = KappaTable::from_generator_values_unchecked(values, &cfg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut failures = 0;
        for _ in 0..20 {
            let g = sample_word(&mut rng, 8);
            let h = sample_word(&mut rng, 8);
            if !verify_split(&corrupted, &g, &h, &cfg()).unwrap() {
                failures += 1;
            }
        }
        assert!(failures > 0, "a corrupted κ table must break the splitting identity");
        assert!(matches!(
            KappaTable::from_generator_values(values, &cfg()),
            Err(CocycleError::TableCheckFailed { .. })
        ));
    }

    #[test]
    fn lift_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..10 {
            let u = sample_word(&mut rng, 8);
            let v = sample_word(&mut rng, 8);
            let product = ExtensionElement::lift(&u, &cfg())
                .unwrap()
                .mul(&ExtensionElement::lift(&v, &cfg()).unwrap(), &cfg())
                .unwrap();
            let direct = ExtensionElement::lift(&u.concat(&v), &cfg()).unwrap();
            assert_eq!(product.central(), direct.central());
            assert_eq!(product.matrix(), direct.matrix());
        }
    }

    #[test]
    fn extension_inverse_cancels() {
        let e = ExtensionElement::lift(&w("n4 n1^-1 n5 n2"), &cfg()).unwrap();
        let product = e.mul(&e.inverse(&cfg()).unwrap(), &cfg()).unwrap();
        assert_eq!(product.central(), Twelfth::zero());
        assert_eq!(product.matrix(), &GroupMatrix::identity());
    }

    #[test]
    fn defect_of_a_trivial_relator_is_zero() {
        assert_eq!(defect(&w("n2 n2^-1"), &cfg()).unwrap(), Twelfth::zero());
        assert!(matches!(
            defect(&w("n1"), &cfg()),
            Err(CocycleError::RelatorNotIdentity { .. })
        ));
    }

    #[test]
    fn cocycle_relation_on_words_and_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(31415);
        for _ in 0..10 {
            let g = sample_word(&mut rng, 8);
            let h = sample_word(&mut rng, 8);
            let k = sample_word(&mut rng, 8);
            assert!(cocycle_relation_words(&g, &h, &k, &cfg()).unwrap());
        }
        for d in [2, 3] {
            for _ in 0..10 {
                let g = random_su(&mut rng, d).unwrap();
                let h = random_su(&mut rng, d).unwrap();
                let k = random_su(&mut rng, d).unwrap();
                assert!(cocycle_relation_matrices(&g, &h, &k, &cfg()).unwrap());
            }
        }
    }

    #[test]
    fn multiplier_requires_the_tower() {
        let table = reference_table();
        let ideal = EisensteinIdeal::new(EisensteinInt::new(1, 2)).unwrap();
        let tau = default_base_point(2);
        assert!(matches!(
            multiplier(&table, &w("n1"), &tau, &ideal, &cfg()),
            Err(CocycleError::NotInTower { .. })
        ));
    }

    #[test]
    fn multiplier_identities_on_tower_samples() {
        let table = reference_table();
        let tau = default_base_point(2);
        let mut rng = ChaCha8Rng::seed_from_u64(271828);
        for (a, b) in [(1i64, 2i64), (2, 0)] {
            let ideal = EisensteinIdeal::new(EisensteinInt::new(a, b)).unwrap();
            let n = ideal.norm().to_i64().unwrap();
            for _ in 0..5 {
                let g = crate::group::sample_word_in_nc(&mut rng, &ideal, 10);
                let h = crate::group::sample_word_in_nc(&mut rng, &ideal, 10);

                let gm = embed_matrix(&evaluate(&g));
                let hm = embed_matrix(&evaluate(&h));

                let chain_lhs = multiplier(&table, &g.concat(&h), &tau, &ideal, &cfg()).unwrap();
                let h_tau = act(&hm, &tau).unwrap();
                let chain_rhs = multiplier(&table, &g, &h_tau, &ideal, &cfg()).unwrap()
                    * multiplier(&table, &h, &tau, &ideal, &cfg()).unwrap();
                assert!((chain_lhs - chain_rhs).norm() < 1e-8, "chain rule for ({g}, {h})");

                let ell = multiplier(&table, &g, &tau, &ideal, &cfg()).unwrap();
                let j = crate::ball::j_factor(&gm, &tau).unwrap();
                let ratio = ell.powi(12 * n as i32) / j.powi(12);
                assert!((ratio - Complex64::new(1.0, 0.0)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn psi_residual_through_the_evaluator() {
        assert!(psi_residual(zeta_c(), 0, zeta_c(), 0, 2, &cfg()).unwrap() < 1e-9);
        let z = Complex64::from_polar(1.0, 2.3);
        let w2 = Complex64::from_polar(1.0, -1.1);
        assert!(psi_residual(z, 3, w2, -2, 3, &cfg()).unwrap() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn big_sigma_is_biadditive_and_antisymmetric(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = sample_word(&mut rng, 10);
            let h = sample_word(&mut rng, 10);
            let k = sample_word(&mut rng, 10);
            prop_assert_eq!(big_sigma(&g.concat(&h), &k), big_sigma(&g, &k) + big_sigma(&h, &k));
            prop_assert_eq!(big_sigma(&k, &g.concat(&h)), big_sigma(&k, &g) + big_sigma(&k, &h));
            prop_assert_eq!(big_sigma(&g, &h), -big_sigma(&h, &g));
        }

        #[test]
        fn torus_sigma_matches_the_formula(a1 in -3.1f64..3.1, a2 in -3.1f64..3.1, d in 2usize..=4) {
            let z1 = Complex64::from_polar(1.0, a1);
            let z2 = Complex64::from_polar(1.0, a2);
            prop_assume!((z1 * z2 + Complex64::new(1.0, 0.0)).norm() > 1e-3);
            let out = torus_sigma(z1, z2, d, &cfg()).unwrap();
            prop_assert_eq!(out.value, torus_sigma_formula(z1, z2));
        }
    }
}
