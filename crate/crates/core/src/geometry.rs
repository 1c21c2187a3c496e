//! The tautological line bundle over a round 2-sphere, and a numeric check of
//! the operator-norm inequality `‖A⊗I + I⊗B‖ ≤ ‖A‖ + ‖B‖`.

use nalgebra::{Complex, DMatrix};
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Orientation sign `s` fixes the sign of the first Chern number:
/// `s = +1` is the tautological bundle, `∫ c₁ = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereLineBundle {
    radius: Rational,
    orientation: i8,
}

/// `coefficient · R^exponent`, evaluated at the bundle's radius in `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialLaw {
    pub coefficient: Rational,
    pub exponent: i32,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcwWitness {
    pub bound: RadialLaw,
    /// `∫_N Â(N) · ∫_{S²} c₁`.
    pub product_pairing: Rational,
}

impl SphereLineBundle {
    pub fn new(radius: Rational, orientation: i8) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::Usage(format!("radius must be positive, got {radius}")));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::Usage(format!("orientation must be ±1, got {orientation}")));
        }
        Ok(Self { radius, orientation })
    }

    pub fn tautological(radius: Rational) -> Result<Self> {
        Self::new(radius, 1)
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }
}

/// `‖R^H‖ = 1/(2R²)`.
pub fn hopf_curvature_norm(b: &SphereLineBundle) -> RadialLaw {
    let coefficient = Rational::new(1.into(), 2.into());
    let value = &coefficient / (&b.radius * &b.radius);
    RadialLaw { coefficient, exponent: -2, value }
}

pub fn hopf_chern_number(b: &SphereLineBundle) -> i64 {
    -(b.orientation as i64)
}

/// Lower bound `2R²` for the Â-cowaist of `N × S²(R)`, witnessed by `H`.
pub fn acw_lower_bound(b: &SphereLineBundle, ahat_number: &Rational) -> Result<AcwWitness> {
    if ahat_number.is_zero() {
        return Err(Error::AhatHypothesis("∫ Â(N) = 0".into()));
    }
    let norm = hopf_curvature_norm(b);
    let bound = RadialLaw {
        coefficient: Rational::one() / &norm.coefficient,
        exponent: 2,
        value: Rational::one() / &norm.value,
    };
    Ok(AcwWitness { bound, product_pairing: ahat_number * int(hopf_chern_number(b)) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormSample {
    pub d1: usize,
    pub d2: usize,
    pub trials: usize,
    /// Largest `‖A⊗I + I⊗B‖ / (‖A‖ + ‖B‖)` seen.
    pub max_ratio: f64,
    /// Largest `|‖A⊗I‖ - ‖A‖|` seen.
    pub max_identity_defect: f64,
}

pub const NORM_TOLERANCE: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex<f64>>;

pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Uniform entries in the unit box, then `(X - X*)/2`.
pub fn random_anti_hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    let x = CMatrix::from_fn(d, d, |_, _| Complex::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)));
    (&x - x.adjoint()) * Complex::new(0.5, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KronRatio {
    pub ratio: f64,
    pub identity_defect: f64,
}

/// Ratio `‖A⊗I + I⊗B‖ / (‖A‖ + ‖B‖)` (zero when both vanish) and `|‖A⊗I‖ - ‖A‖|`.
pub fn kron_ratio(a: &CMatrix, b: &CMatrix) -> KronRatio {
    let ia = CMatrix::identity(a.nrows(), a.nrows());
    let ib = CMatrix::identity(b.nrows(), b.nrows());
    let a_i = a.kronecker(&ib);
    let sum = &a_i + ia.kronecker(b);
    let (na, nb) = (operator_norm(a), operator_norm(b));
    let denom = na + nb;
    let ratio = if denom == 0.0 { 0.0 } else { operator_norm(&sum) / denom };
    KronRatio { ratio, identity_defect: (operator_norm(&a_i) - na).abs() }
}

/// Trial `t` draws from its own stream of the master seed.
pub fn kron_norm_check(d1: usize, d2: usize, trials: usize, seed: u64) -> Result<NormSample> {
    if !(1..=16).contains(&d1) || !(1..=16).contains(&d2) {
        return Err(Error::Usage(format!("dimensions must lie in 1..=16, got {d1}x{d2}")));
    }
    if trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    let mut sample = NormSample { d1, d2, trials, max_ratio: 0.0, max_identity_defect: 0.0 };
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let a = random_anti_hermitian(d1, &mut rng);
        let b = random_anti_hermitian(d2, &mut rng);
        let r = kron_ratio(&a, &b);
        sample.max_ratio = sample.max_ratio.max(r.ratio);
        sample.max_identity_defect = sample.max_identity_defect.max(r.identity_defect);
    }
    if sample.max_identity_defect > NORM_TOLERANCE {
        return Err(Error::Internal(format!(
            "‖A⊗I‖ differs from ‖A‖ by {}",
            sample.max_identity_defect
        )));
    }
    Ok(sample)
}
