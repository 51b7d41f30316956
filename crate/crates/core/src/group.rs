//! The Picard modular group Γ = SU(2,1; ℤ[ζ]) in exact arithmetic, together
//! with its Heisenberg generators, congruence conditions, and word samplers.
//!
//! Γ preserves the Hermitian form with matrix
//!
//! ```text
//!         ⎛ 0 0 1 ⎞
//!     J = ⎜ 0 1 0 ⎟ ,      g ∈ Γ  ⟺  det g = 1  and  conj(g)ᵗ J g = J.
//!         ⎝ 1 0 0 ⎠
//! ```
//!
//! The five standard generators are Heisenberg translations n(z, x) and
//! transposes:
//!
//! ```text
//!     n1 = n(1, 1),  n2 = n(ζ, 1),  n3 = n(0, 2),  n4 = n(1, 1)ᵗ,  n5 = n(0, 2)ᵗ,
//! ```
//!
//! with n(z, x) unipotent upper triangular, defined for x ≡ Norm(z) (mod 2).
//! They generate the finite-index subgroup Υ ⊆ Γ(√−3) cut out by
//! 3 | (g₁₁ − 1).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::eisenstein::{EisensteinIdeal, EisensteinInt};
use crate::words::{Letter, Word, GENERATOR_COUNT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("n(z, x) needs x ≡ Norm(z) (mod 2); got z = {z}, x = {x}")]
    ParityViolation { z: String, x: String },
    #[error("matrix is not in SU(2,1; ℤ[ζ]), refusing to invert")]
    NotInGroup,
}

/// A 3×3 matrix over ℤ[ζ], row major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupMatrix {
    entries: [[EisensteinInt; 3]; 3],
}

impl GroupMatrix {
    pub fn new(entries: [[EisensteinInt; 3]; 3]) -> Self {
        GroupMatrix { entries }
    }

    pub fn identity() -> Self {
        let mut m = GroupMatrix::zero();
        for i in 0..3 {
            m.entries[i][i] = EisensteinInt::one();
        }
        m
    }

    fn zero() -> Self {
        GroupMatrix {
            entries: std::array::from_fn(|_| std::array::from_fn(|_| EisensteinInt::zero())),
        }
    }

    /// The form matrix J (antidiagonal ones with a central 1).
    pub fn form_j() -> Self {
        let mut m = GroupMatrix::zero();
        m.entries[0][2] = EisensteinInt::one();
        m.entries[1][1] = EisensteinInt::one();
        m.entries[2][0] = EisensteinInt::one();
        m
    }

    /// The scalar matrix ζ·I₃.
    pub fn zeta_scalar() -> Self {
        let mut m = GroupMatrix::zero();
        for i in 0..3 {
            m.entries[i][i] = EisensteinInt::zeta();
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> &EisensteinInt {
        &self.entries[row][col]
    }

    pub fn mul(&self, rhs: &GroupMatrix) -> GroupMatrix {
        let mut out = GroupMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = EisensteinInt::zero();
                for k in 0..3 {
                    acc = &acc + &(&self.entries[i][k] * &rhs.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> GroupMatrix {
        let mut out = GroupMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[j][i] = self.entries[i][j].clone();
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> GroupMatrix {
        let mut out = GroupMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[j][i] = self.entries[i][j].conj();
            }
        }
        out
    }

    pub fn det(&self) -> EisensteinInt {
        let e = &self.entries;
        let m0 = &(&e[1][1] * &e[2][2]) - &(&e[1][2] * &e[2][1]);
        let m1 = &(&e[1][0] * &e[2][2]) - &(&e[1][2] * &e[2][0]);
        let m2 = &(&e[1][0] * &e[2][1]) - &(&e[1][1] * &e[2][0]);
        &(&(&e[0][0] * &m0) - &(&e[0][1] * &m1)) + &(&e[0][2] * &m2)
    }

    /// conj(g)ᵗ J g = J, the defining unitarity condition.
    pub fn is_j_unitary(&self) -> bool {
        let j = GroupMatrix::form_j();
        self.conj_transpose().mul(&j).mul(self) == j
    }

    /// Group inverse via g⁻¹ = J conj(g)ᵗ J, valid exactly on SU(2,1).
    pub fn inverse(&self) -> Result<GroupMatrix, GroupError> {
        if !self.is_j_unitary() || !self.det().is_one() {
            return Err(GroupError::NotInGroup);
        }
        let j = GroupMatrix::form_j();
        Ok(j.mul(&self.conj_transpose()).mul(&j))
    }

    /// The normalizing factor X(g): −g₃₁ when nonzero, otherwise g₃₃.
    pub fn x_factor(&self) -> EisensteinInt {
        if !self.entries[2][0].is_zero() {
            -&self.entries[2][0]
        } else {
            self.entries[2][2].clone()
        }
    }

    /// Largest coefficient magnitude over all entries; a cheap size gauge.
    pub fn coefficient_height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for row in &self.entries {
            for e in row {
                h = h.max(e.a().abs()).max(e.b().abs());
            }
        }
        h
    }
}

impl fmt::Display for GroupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("{}, {}, {}", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl fmt::Debug for GroupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parameters (z, x) of a Heisenberg translation, with the parity constraint
/// x ≡ Norm(z) (mod 2) enforced at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergParam {
    z: EisensteinInt,
    x: BigInt,
}

impl HeisenbergParam {
    pub fn new(z: EisensteinInt, x: impl Into<BigInt>) -> Result<Self, GroupError> {
        let x: BigInt = x.into();
        if (&x - z.norm()) % 2 != BigInt::zero() {
            return Err(GroupError::ParityViolation { z: z.to_string(), x: x.to_string() });
        }
        Ok(HeisenbergParam { z, x })
    }

    pub fn z(&self) -> &EisensteinInt {
        &self.z
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }
}

/// The Heisenberg translation
///
/// ```text
///              ⎛ 1   √−3·z   (−3·Norm(z) + x·√−3)/2 ⎞
///     n(z,x) = ⎜ 0     1          √−3·conj(z)       ⎟ .
///              ⎝ 0     0              1             ⎠
/// ```
pub fn make_n(p: &HeisenbergParam) -> GroupMatrix {
    let s = EisensteinInt::sqrt_minus_three();
    let norm = p.z.norm();
    // (−3N + x(1 + 2ζ)) / 2 = (x − 3N)/2 + xζ; the parity constraint makes
    // the division exact.
    let corner = EisensteinInt::new((p.x() - 3 * norm) / 2, p.x().clone());
    let mut m = GroupMatrix::identity();
    m.entries[0][1] = &s * &p.z;
    m.entries[0][2] = corner;
    m.entries[1][2] = &s * &p.z.conj();
    m
}

/// n(z, x)ᵗ, the lower-triangular counterpart.
pub fn make_n_transpose(p: &HeisenbergParam) -> GroupMatrix {
    make_n(p).transpose()
}

fn heisenberg(z_a: i64, z_b: i64, x: i64) -> HeisenbergParam {
    HeisenbergParam::new(EisensteinInt::new(z_a, z_b), x).expect("generator parameters satisfy parity")
}

/// The standard generators n1…n5 of Υ, indexed from 1.
pub fn standard_generators() -> &'static [GroupMatrix; GENERATOR_COUNT] {
    static GENERATORS: OnceLock<[GroupMatrix; GENERATOR_COUNT]> = OnceLock::new();
    GENERATORS.get_or_init(|| {
        [
            make_n(&heisenberg(1, 0, 1)),
            make_n(&heisenberg(0, 1, 1)),
            make_n(&heisenberg(0, 0, 2)),
            make_n_transpose(&heisenberg(1, 0, 1)),
            make_n_transpose(&heisenberg(0, 0, 2)),
        ]
    })
}

/// Generator and inverse-generator matrices indexed by `Letter::table_index`.
fn letter_table() -> &'static [GroupMatrix; 2 * GENERATOR_COUNT] {
    static TABLE: OnceLock<[GroupMatrix; 2 * GENERATOR_COUNT]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gens = standard_generators();
        std::array::from_fn(|idx| {
            let g = &gens[idx / 2];
            if idx % 2 == 0 {
                g.clone()
            } else {
                g.inverse().expect("generators lie in the group")
            }
        })
    })
}

pub fn letter_matrix(letter: Letter) -> &'static GroupMatrix {
    &letter_table()[letter.table_index()]
}

/// Exact product of the letters of w; the identity for the empty word.
pub fn evaluate(w: &Word) -> GroupMatrix {
    let mut acc = GroupMatrix::identity();
    for &letter in w.letters() {
        acc = acc.mul(letter_matrix(letter));
    }
    acc
}

/// The abelianized coordinate φ: Υ → ℤ[ζ] on words, with
/// φ(n1) = 1, φ(n2) = ζ, φ(n3) = 0, φ(n4) = −1, φ(n5) = 0.
pub fn phi(w: &Word) -> EisensteinInt {
    let values = [
        EisensteinInt::one(),
        EisensteinInt::zeta(),
        EisensteinInt::zero(),
        -EisensteinInt::one(),
        EisensteinInt::zero(),
    ];
    let sums = w.exponent_sums();
    let mut acc = EisensteinInt::zero();
    for (value, &count) in values.iter().zip(&sums) {
        acc = &acc + &(value * &EisensteinInt::new(count, 0));
    }
    acc
}

/// Membership in Γ = SU(2,1; ℤ[ζ]).
pub fn in_gamma(g: &GroupMatrix) -> bool {
    g.det().is_one() && g.is_j_unitary()
}

/// Membership in the congruence subgroup Γ(√−3) = {g ∈ Γ : g ≡ I mod √−3}.
pub fn in_gamma_sqrt3(g: &GroupMatrix) -> bool {
    if !in_gamma(g) {
        return false;
    }
    let s = EisensteinInt::sqrt_minus_three();
    let id = GroupMatrix::identity();
    (0..3).all(|i| (0..3).all(|j| s.divides(&(g.entry(i, j) - id.entry(i, j)))))
}

/// Membership in Υ ⊆ Γ(√−3), the index-3 complement of the center:
/// additionally 3 | (g₁₁ − 1).
pub fn in_upsilon(g: &GroupMatrix) -> bool {
    in_gamma_sqrt3(g)
        && EisensteinInt::new(3, 0).divides(&(g.entry(0, 0) - &EisensteinInt::one()))
}

/// Membership in the non-compact congruence tower Υ_nc(I) = Υ ∩ φ⁻¹(I),
/// evaluated on a word.
pub fn in_upsilon_nc(w: &Word, ideal: &EisensteinIdeal) -> bool {
    ideal.contains(&phi(w)) && in_upsilon(&evaluate(w))
}

/// Index data of the tower step Υ_nc(I) ⊆ Υ_nc(1): equal to Norm(I).
pub fn tower_index(ideal: &EisensteinIdeal) -> BigInt {
    ideal.norm()
}

/// A uniformly random word: length uniform in 1..=max_len, letters uniform
/// over the ten generators and inverses.
pub fn sample_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    assert!(max_len >= 1);
    let len = rng.gen_range(1..=max_len);
    let mut word = Word::empty();
    for _ in 0..len {
        let idx = rng.gen_range(0..2 * GENERATOR_COUNT);
        word.push(Letter::new((idx / 2 + 1) as u8, idx % 2 == 1));
    }
    word
}

/// A random word steered into Υ_nc(2I): a uniform draft is corrected by a
/// trailing n1^{−r_a} n2^{−r_b} so that φ lands in the ideal 2I.
pub fn sample_word_in_nc<R: Rng + ?Sized>(
    rng: &mut R,
    ideal: &EisensteinIdeal,
    max_len: usize,
) -> Word {
    let mut word = sample_word(rng, max_len);
    let conductor = ideal.doubled();
    let (_, r) = phi(&word).div_round(conductor.gen()).expect("conductor is nonzero");
    push_power(&mut word, 1, -coefficient_to_i64(r.a()));
    push_power(&mut word, 2, -coefficient_to_i64(r.b()));
    debug_assert!(in_upsilon_nc(&word, &conductor));
    word
}

fn coefficient_to_i64(x: &BigInt) -> i64 {
    i64::try_from(x.clone()).expect("reduced remainder has small coefficients")
}

fn push_power(word: &mut Word, gen: u8, exponent: i64) {
    let letter = Letter::new(gen, exponent < 0);
    for _ in 0..exponent.unsigned_abs() {
        word.push(letter);
    }
}

/// The lower-triangular generator n(ζ, 1)ᵗ rewritten as a word in n1…n5;
/// `true` when the exact matrix product confirms the rewriting.
pub fn transpose_word_identity_holds() -> bool {
    let lhs = make_n_transpose(&heisenberg(0, 1, 1));
    let word = Word::from_str("n3^-1 n1 n4 n1 n3^-2 n2").expect("fixed word parses");
    lhs == evaluate(&word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ei(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ideal(a: i64, b: i64) -> EisensteinIdeal {
        EisensteinIdeal::new(ei(a, b)).unwrap()
    }

    #[test]
    fn heisenberg_translation_examples() {
        let n3 = make_n(&heisenberg(0, 0, 2));
        assert_eq!(n3.entry(0, 2), &ei(1, 2));
        assert_eq!(n3.entry(0, 1), &ei(0, 0));
        assert_eq!(n3.entry(1, 2), &ei(0, 0));

        let n1 = make_n(&heisenberg(1, 0, 1));
        assert_eq!(n1.entry(0, 1), &ei(1, 2));
        assert_eq!(n1.entry(0, 2), &ei(-1, 1));
        assert_eq!(n1.entry(1, 2), &ei(1, 2));

        let n2 = make_n(&heisenberg(0, 1, 1));
        assert_eq!(n2.entry(0, 1), &ei(-2, -1));
        assert_eq!(n2.entry(0, 2), &ei(-1, 1));
        assert_eq!(n2.entry(1, 2), &ei(1, -1));
    }

    #[test]
    fn parity_violation_is_rejected() {
        let err = HeisenbergParam::new(ei(1, 0), 2).unwrap_err();
        assert!(matches!(err, GroupError::ParityViolation { .. }));
        assert!(HeisenbergParam::new(ei(1, 0), -3).is_ok());
    }

    #[test]
    fn transpose_generator_example() {
        let n4 = &standard_generators()[3];
        assert_eq!(n4.entry(1, 0), &ei(1, 2));
        assert_eq!(n4.entry(2, 0), &ei(-1, 1));
        assert_eq!(n4.entry(2, 1), &ei(1, 2));
        assert_eq!(n4.entry(0, 1), &ei(0, 0));
    }

    #[test]
    fn generators_live_in_upsilon() {
        for g in standard_generators() {
            assert!(in_upsilon(g));
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&Word::empty()), GroupMatrix::identity());
        assert_eq!(evaluate(&w("n1 n1^-1")), GroupMatrix::identity());
        assert_eq!(evaluate(&w("n3 n2 n1 n2^-1 n3 n1^-1 n3")), GroupMatrix::identity());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&w("n1 n2^-1")), ei(1, -1));
        assert_eq!(phi(&w("n4")), ei(-1, 0));
        assert_eq!(phi(&w("n3 n5^-1 n3^2")), ei(0, 0));
        assert_eq!(phi(&Word::empty()), ei(0, 0));
    }

    #[test]
    fn membership_ladder() {
        let id = GroupMatrix::identity();
        assert!(in_upsilon(&id));

        let j = GroupMatrix::form_j();
        assert!(!in_gamma(&j), "det J = −1 keeps J outside SU(2,1)");

        let zeta_scalar = GroupMatrix::zeta_scalar();
        assert!(in_gamma_sqrt3(&zeta_scalar));
        assert!(!in_upsilon(&zeta_scalar), "the center of Γ(√−3) avoids Υ");
    }

    #[test]
    fn x_factor_examples() {
        assert_eq!(standard_generators()[3].x_factor(), ei(1, -1));
        assert_eq!(standard_generators()[0].x_factor(), ei(1, 0));
        assert_eq!(GroupMatrix::zeta_scalar().x_factor(), ei(0, 1));
    }

    #[test]
    fn inverse_requires_group_membership() {
        assert_eq!(GroupMatrix::form_j().inverse(), Err(GroupError::NotInGroup));
        let n2 = &standard_generators()[1];
        assert_eq!(n2.mul(&n2.inverse().unwrap()), GroupMatrix::identity());
    }

    #[test]
    fn tower_index_examples() {
        assert_eq!(tower_index(&ideal(1, 2)), BigInt::from(3));
        assert_eq!(tower_index(&ideal(2, 0)), BigInt::from(4));
        assert_eq!(tower_index(&ideal(1, 0)), BigInt::from(1));
    }

    #[test]
    fn samplers_are_seed_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(sample_word(&mut r1, 12), sample_word(&mut r2, 12));
        assert_eq!(
            sample_word_in_nc(&mut r1, &ideal(1, 2), 12),
            sample_word_in_nc(&mut r2, &ideal(1, 2), 12)
        );
    }

    #[test]
    fn steered_sampler_lands_in_the_conductor() {
        let mut rng = ChaCha8Rng::seed_from_u64(20260822);
        for ideal in [ideal(1, 0), ideal(1, 2), ideal(2, 0)] {
            let conductor = ideal.doubled();
            for _ in 0..50 {
                let word = sample_word_in_nc(&mut rng, &ideal, 15);
                assert!(in_upsilon_nc(&word, &conductor));
            }
        }
    }

    #[test]
    fn transpose_word_identity_is_confirmed() {
        assert!(transpose_word_identity_holds());
    }

    #[test]
    fn matrix_serde_roundtrip() {
        let n1 = standard_generators()[0].clone();
        let json = serde_json::to_string(&n1).unwrap();
        assert_eq!(json, r#"{"entries":[[[1,0],[1,2],[-1,1]],[[0,0],[1,0],[1,2]],[[0,0],[0,0],[1,0]]]}"#);
        let back: GroupMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, n1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_words_stay_in_upsilon(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let word = sample_word(&mut rng, 14);
            let g = evaluate(&word);
            prop_assert!(in_upsilon(&g));
            prop_assert!(g.det().is_one());
        }

        #[test]
        fn evaluation_respects_inverses(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let word = sample_word(&mut rng, 10);
            let g = evaluate(&word);
            prop_assert_eq!(evaluate(&word.inverse()), g.inverse().unwrap());
            prop_assert_eq!(evaluate(&word.concat(&word.inverse())), GroupMatrix::identity());
        }

        #[test]
        fn phi_is_a_homomorphism_on_words(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (u, v) = (sample_word(&mut rng, 10), sample_word(&mut rng, 10));
            prop_assert_eq!(phi(&u.concat(&v)), &phi(&u) + &phi(&v));
            prop_assert_eq!(phi(&u.inverse()), -phi(&u));
        }
    }
}
