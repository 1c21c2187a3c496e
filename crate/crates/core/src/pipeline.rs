//! From a bundle with a nonzero Chern number to an admissible image of it
//! with nonzero Â-pairing, together with the curvature constant `c` that
//! depends only on the half-dimension.
//!
//! Steps, for `n = dim M / 2`:
//! 1. decompose the witnessing Chern monomial and keep the first functor
//!    `J₁` (canonical order) with `∫ ch_n(J₁(E)) ≠ 0`;
//! 2. find the least `k₀ ≤ n + 1` with `∫ Â·ch(ψ_{k₀}(J₁(E))) ≠ 0`;
//! 3. split `ψ_{k₀} = G¹ - G²` and keep a part with nonzero Â-pairing;
//! 4. report `G ∘ J₁` and `c = 1 / (max_{k ≤ n+1} C_k · A_n)`.

use num::{One, Signed, Zero};

use crate::adams::adams_expand;
use crate::decompose::{build_library, decompose, sup_bound_constant, FunctorLibrary};
use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::graded::{GradedClass, Partition};
use crate::rational::Rational;
use crate::splitting::{functor_character, FormalBundle, PairingData};

/// Which signed part of `ψ_{k₀}` was kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdamsPart {
    Positive,
    Negative,
}

/// Everything in `c` that depends on the half-dimension alone.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionalConstant {
    pub half_dimension: u32,
    /// `A_n`, the largest bound constant in the library.
    pub a_n: Rational,
    /// `C_k = max(C_{G¹_k}, C_{G²_k})` for `k = 1..=n+1`.
    pub adams_constants: Vec<Rational>,
    pub c: Rational,
}

impl DimensionalConstant {
    pub fn max_adams_constant(&self) -> Rational {
        self.adams_constants.iter().max().cloned().unwrap_or_else(Rational::zero)
    }
}

pub fn adams_part_constant(k: u32) -> Result<Rational> {
    let psi = adams_expand(k)?;
    let bound = |f: Option<FunctorExpr>| f.map(|f| f.bound_constant().0).unwrap_or_else(Rational::zero);
    Ok(bound(psi.positive_part()?).max(bound(psi.negative_part()?)))
}

/// Library with levels `1..=n`, enough for every partition of weight ≤ `n`.
pub fn pipeline_library(n: u32) -> Result<FunctorLibrary> {
    build_library(n, n as usize)
}

pub fn dimensional_constant_from(library: &FunctorLibrary) -> Result<DimensionalConstant> {
    let n = library.weight_bound();
    let a_n = sup_bound_constant(library, library.levels())?;
    let adams_constants = (1..=n + 1).map(adams_part_constant).collect::<Result<Vec<_>>>()?;
    let max_c = adams_constants.iter().max().cloned().unwrap_or_else(Rational::zero);
    let denom = &max_c * &a_n;
    if denom.is_zero() {
        return Err(Error::Internal("vanishing bound constants".into()));
    }
    Ok(DimensionalConstant { half_dimension: n, a_n, adams_constants, c: Rational::one() / denom })
}

pub fn dimensional_constant(n: u32) -> Result<DimensionalConstant> {
    dimensional_constant_from(&pipeline_library(n)?)
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    /// `G ∘ J₁`, applied to the input bundle.
    pub functor: FunctorExpr,
    pub inner: FunctorExpr,
    pub k0: u32,
    pub part: AdamsPart,
    pub constant: DimensionalConstant,
    /// `C_{k₀}`.
    pub c_k0: Rational,
    /// `(1/c)/m₀`, the guaranteed bound on the curvature norm of the output.
    pub bound: Rational,
    pub chern_number: Rational,
    /// `∫ ch_n(J₁(E))`.
    pub inner_pairing: Rational,
    /// `∫ Â·ch(G(J₁(E)))`, nonzero.
    pub ahat_pairing: Rational,
}

impl PipelineOutcome {
    pub fn c(&self) -> &Rational {
        &self.constant.c
    }
}

/// `∫ ∏ c_{a_l}(E)`.
pub fn chern_number(e: &FormalBundle, pairing: &PairingData, witness: &Partition) -> Result<Rational> {
    let n = pairing.half_dimension();
    let product = witness
        .parts()
        .iter()
        .fold(GradedClass::one(n), |acc, &a| {
            let c = if a <= n { e.chern_class(a).truncate_to(n) } else { GradedClass::zero(n) };
            &acc * &c
        });
    pairing.integrate(&product)
}

pub fn comparison_pipeline(
    e: &FormalBundle,
    pairing: &PairingData,
    witness: &Partition,
    m0: &Rational,
) -> Result<PipelineOutcome> {
    let library = pipeline_library(pairing.half_dimension())?;
    comparison_pipeline_with(&library, e, pairing, witness, m0)
}

/// As [`comparison_pipeline`], reusing a prebuilt library for `n`.
pub fn comparison_pipeline_with(
    library: &FunctorLibrary,
    e: &FormalBundle,
    pairing: &PairingData,
    witness: &Partition,
    m0: &Rational,
) -> Result<PipelineOutcome> {
    let n = pairing.half_dimension();
    if library.weight_bound() != n || library.levels() < n as usize {
        return Err(Error::Usage(format!("library does not match half-dimension {n}")));
    }
    if !m0.is_positive() {
        return Err(Error::Usage("m0 must be positive".into()));
    }
    if witness.weight() > n {
        return Err(Error::InvalidPartition(format!(
            "witness weight {} exceeds half-dimension {n}",
            witness.weight()
        )));
    }
    let chern_number = chern_number(e, pairing, witness)?;
    if chern_number.is_zero() {
        return Err(Error::ChernHypothesis(format!("∫ c_{{{witness}}}(E) = 0")));
    }
    let constant = dimensional_constant_from(library)?;

    let cert = decompose(witness, library)?;
    let ch_e = e.chern_character(n);
    let mut inner = None;
    for term in &cert.terms {
        let ch = functor_character(&term.functor, std::slice::from_ref(&ch_e))?;
        let value = pairing.integrate(&ch)?;
        if !value.is_zero() {
            inner = Some((term.functor.clone(), ch, value));
            break;
        }
    }
    let (inner, ch_e1, inner_pairing) = inner.ok_or_else(|| {
        Error::Internal("nonzero Chern number but every certificate term pairs to zero".into())
    })?;

    for k0 in 1..=n + 1 {
        let psi = adams_expand(k0)?;
        if pairing.ahat_pairing(&psi.character(std::slice::from_ref(&ch_e1))?)?.is_zero() {
            continue;
        }
        for (part, g) in [
            (AdamsPart::Positive, psi.positive_part()?),
            (AdamsPart::Negative, psi.negative_part()?),
        ] {
            let Some(g) = g else { continue };
            let ahat_pairing = pairing.ahat_pairing(&functor_character(&g, std::slice::from_ref(&ch_e1))?)?;
            if ahat_pairing.is_zero() {
                continue;
            }
            let c_k0 = constant.adams_constants[(k0 - 1) as usize].clone();
            let bound = Rational::one() / &constant.c / m0;
            return Ok(PipelineOutcome {
                functor: g.substitute(std::slice::from_ref(&inner))?,
                inner,
                k0,
                part,
                constant,
                c_k0,
                bound,
                chern_number,
                inner_pairing,
                ahat_pairing,
            });
        }
        return Err(Error::Internal(format!(
            "ψ_{k0} pairs nontrivially but neither signed part does"
        )));
    }
    Err(Error::Internal(
        "no Adams index k ≤ n+1 with nonzero Â-pairing although ∫ ch_n(J₁(E)) ≠ 0".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Monomial;
    use crate::rational::{frac, int};
    use std::collections::BTreeMap;

    fn table(entries: &[(&str, i64)]) -> BTreeMap<Monomial, Rational> {
        entries.iter().map(|(m, q)| (m.parse().unwrap(), int(*q))).collect()
    }

    #[test]
    fn line_bundle_in_half_dimension_one() {
        let e = FormalBundle::generic(1);
        let pairing = PairingData::with_standard_ahat(1, table(&[("x1", 1)])).unwrap();
        let out = comparison_pipeline(&e, &pairing, &"1".parse().unwrap(), &int(1)).unwrap();
        assert_eq!(out.inner, FunctorExpr::id(0));
        assert_eq!(out.k0, 1);
        assert_eq!(out.functor, FunctorExpr::id(0));
        assert_eq!(out.constant.a_n, int(1));
        assert_eq!(out.constant.adams_constants, vec![int(1), int(2)]);
        assert_eq!(out.c(), &frac(1, 2));
        assert_eq!(out.bound, int(2));
    }

    #[test]
    fn zero_pairing_fails_the_hypothesis() {
        let e = FormalBundle::generic(2);
        let pairing = PairingData::with_standard_ahat(2, BTreeMap::new()).unwrap();
        let err = comparison_pipeline(&e, &pairing, &"2".parse().unwrap(), &int(1)).unwrap_err();
        assert!(matches!(err, Error::ChernHypothesis(_)));
    }

    #[test]
    fn constant_depends_only_on_dimension() {
        let e = FormalBundle::generic(2);
        let a = PairingData::with_standard_ahat(2, table(&[("x1*x2", 1)])).unwrap();
        let b = PairingData::with_standard_ahat(2, table(&[("x1^2", 3), ("p1", 5)])).unwrap();
        let oa = comparison_pipeline(&e, &a, &"2".parse().unwrap(), &int(1)).unwrap();
        let ob = comparison_pipeline(&e, &b, &"1,1".parse().unwrap(), &frac(1, 3)).unwrap();
        assert_eq!(oa.c(), ob.c());
        assert_eq!(oa.constant, dimensional_constant(2).unwrap());
    }

    #[test]
    fn bad_inputs() {
        let e = FormalBundle::generic(1);
        let pairing = PairingData::with_standard_ahat(1, table(&[("x1", 1)])).unwrap();
        assert!(comparison_pipeline(&e, &pairing, &"1".parse().unwrap(), &int(0)).is_err());
        assert!(comparison_pipeline(&e, &pairing, &"2".parse().unwrap(), &int(1)).is_err());
    }
}
