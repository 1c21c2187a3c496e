//! Decomposition certificates: every product of Chern classes of total
//! weight `K` is written as `Σ λ_i ch_K(J_i(E))` for admissible functors
//! `J_i` drawn from a finite library.
//!
//! The construction first rewrites `∏ c_{a_l}` in Chern-character monomials
//! (Newton), then peels one factor at a time: for `ch_a(E)·ch_b(J(E))` it
//! uses `H_l = ψ_l(E) ⊗ J(E)`, whose weight-`a+b` character is
//! `Σ_t l^t ch_t(E) ch_{a+b-t}(J(E))`, and picks the combination of
//! `l = 1..a+b+1` that isolates `t = a` by solving a Vandermonde system.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::adams::{adams_expand, VirtualCombination};
use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::graded::{Family, GradedClass, Partition};
use crate::rational::{self, Rational};
use crate::splitting::{abstract_ch_parts, chern_from_ch, FormalBundle, RootEvaluator};
use crate::vandermonde::vandermonde_select;

pub const CERTIFICATE_VERSION: &str = "cc-cert-v1";

/// Data behind `ch_i(F₁)·ch_j(F₂) = Σ_l λ_l ch_{i+j}(ψ_l(F₁) ⊗ F₂)`.
#[derive(Clone, Debug)]
pub struct ProductSplit {
    pub i: u32,
    pub j: u32,
    /// `λ_l` for the nodes `l = 1..=i+j+1`.
    pub weights: Vec<Rational>,
    /// `ψ_l(slot 0) ⊗ slot 1` expanded into honest two-slot functors.
    pub templates: Vec<VirtualCombination>,
}

impl ProductSplit {
    /// All templates weighted by `λ_l` and merged into one combination of
    /// honest two-slot functors.
    pub fn flatten(&self) -> VirtualCombination {
        let mut terms = Vec::new();
        for (w, t) in self.weights.iter().zip(&self.templates) {
            terms.extend(t.scale(w).terms().iter().cloned());
        }
        VirtualCombination::new(terms).merged()
    }
}

pub fn product_split(i: u32, j: u32) -> Result<ProductSplit> {
    if i == 0 || j == 0 {
        return Err(Error::Usage(format!("product_split needs i, j ≥ 1 (got {i}, {j})")));
    }
    let r = i + j;
    let weights = vandermonde_select(r as usize, i as usize);
    let templates = (1..=r + 1)
        .map(|l| {
            let psi = adams_expand(l)?;
            Ok(VirtualCombination::new(
                psi.terms()
                    .iter()
                    .map(|(c, f)| (c.clone(), FunctorExpr::tensor(f.clone(), FunctorExpr::id(1))))
                    .collect(),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ProductSplit { i, j, weights, templates })
}

/// Nested finite functor sets `C^1 ⊆ C^2 ⊆ …` for weight bound `N`.
#[derive(Clone, Debug)]
pub struct FunctorLibrary {
    n: u32,
    functors: Vec<FunctorExpr>,
    /// `level_ends[ν-1]` is the size of level `ν`; levels are prefixes.
    level_ends: Vec<usize>,
    index: HashMap<String, usize>,
}

impl FunctorLibrary {
    pub fn weight_bound(&self) -> u32 {
        self.n
    }

    pub fn levels(&self) -> usize {
        self.level_ends.len()
    }

    pub fn functors(&self) -> &[FunctorExpr] {
        &self.functors
    }

    /// Functors of level `ν` (1-based).
    pub fn level(&self, nu: usize) -> Option<&[FunctorExpr]> {
        let end = *self.level_ends.get(nu.checked_sub(1)?)?;
        Some(&self.functors[..end])
    }

    /// Smallest level containing `f`.
    pub fn level_of(&self, f: &FunctorExpr) -> Option<usize> {
        let idx = *self.index.get(&f.to_json())?;
        self.level_ends.iter().position(|&end| idx < end).map(|p| p + 1)
    }

    fn push(&mut self, f: FunctorExpr) {
        let key = f.to_json();
        if !self.index.contains_key(&key) {
            self.index.insert(key, self.functors.len());
            self.functors.push(f);
        }
    }
}

/// Builds levels `1..=max_parts`. Level 1 is `{E}`; level `ν+1` adds
/// `G(E, J)` for every `J` of level `ν` and every honest functor `G`
/// occurring in `product_split(a, b)` with `a, b ≥ 1`, `a + b ≤ N`.
pub fn build_library(n: u32, max_parts: usize) -> Result<FunctorLibrary> {
    if n == 0 || max_parts == 0 {
        return Err(Error::Usage("library needs N ≥ 1 and at least one level".into()));
    }
    let mut templates: BTreeMap<String, FunctorExpr> = BTreeMap::new();
    for r in 2..=n {
        for a in 1..r {
            for (_, t) in product_split(a, r - a)?.flatten().terms() {
                templates.insert(t.to_json(), t.clone());
            }
        }
    }
    let mut lib = FunctorLibrary {
        n,
        functors: Vec::new(),
        level_ends: Vec::new(),
        index: HashMap::new(),
    };
    lib.push(FunctorExpr::id(0));
    lib.level_ends.push(1);
    let mut frontier = 0..1;
    for _ in 1..max_parts {
        let start = lib.functors.len();
        for idx in frontier.clone() {
            let j = lib.functors[idx].clone();
            for t in templates.values() {
                lib.push(t.substitute(&[FunctorExpr::id(0), j.clone()])?);
            }
        }
        frontier = start..lib.functors.len();
        lib.level_ends.push(lib.functors.len());
    }
    Ok(lib)
}

/// `A_N`: the largest bound constant over a level.
pub fn sup_bound_constant(library: &FunctorLibrary, level: usize) -> Result<Rational> {
    let set = library.level(level).ok_or_else(|| Error::InsufficientLevel {
        required: level,
        available: library.levels(),
    })?;
    Ok(set
        .iter()
        .map(|f| f.bound_constant().0)
        .max()
        .unwrap_or_else(Rational::zero))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateTerm {
    #[serde(with = "rational::serde_str")]
    pub lambda: Rational,
    pub functor: FunctorExpr,
}

/// Witness that `∏ c_{a_l}(E) = Σ λ_i ch_K(J_i(E))` for all bundles `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate {
    pub n: u32,
    pub partition: Partition,
    pub terms: Vec<CertificateTerm>,
    pub verified_ranks: Vec<u32>,
    /// Library level the functors were drawn from.
    pub level: usize,
}

impl DecompositionCertificate {
    pub fn weight(&self) -> u32 {
        self.partition.weight()
    }

    pub fn rank_universe(&self) -> u32 {
        self.verified_ranks.iter().copied().max().unwrap_or(0)
    }

    pub fn combination(&self) -> VirtualCombination {
        VirtualCombination::new(
            self.terms.iter().map(|t| (t.lambda.clone(), t.functor.clone())).collect(),
        )
    }

    pub fn to_document(&self) -> CertificateDocument {
        CertificateDocument {
            version: CERTIFICATE_VERSION.to_string(),
            n: self.n,
            partition: self.partition.parts().to_vec(),
            terms: self.terms.clone(),
            verified_ranks: self.verified_ranks.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("certificate serialization")
    }

    pub fn from_document(doc: CertificateDocument) -> Result<Self> {
        if doc.version != CERTIFICATE_VERSION {
            return Err(Error::Parse(format!("unsupported certificate version {:?}", doc.version)));
        }
        let partition = Partition::new(doc.partition)?;
        if partition.weight() > doc.n {
            return Err(Error::InvalidPartition(format!(
                "weight {} exceeds N = {}",
                partition.weight(),
                doc.n
            )));
        }
        if let Some(t) = doc.terms.iter().find(|t| t.functor.arity() > 1) {
            return Err(Error::Parse(format!("certificate functor {} is not unary", t.functor)));
        }
        Ok(DecompositionCertificate {
            n: doc.n,
            partition,
            terms: doc.terms,
            verified_ranks: doc.verified_ranks,
            level: 0,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub version: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub partition: Vec<u32>,
    pub terms: Vec<CertificateTerm>,
    pub verified_ranks: Vec<u32>,
}

/// `∏ c_{a_l}` as a polynomial in abstract `ch_1, ch_2, …`.
pub fn chern_product_in_ch(partition: &Partition) -> GradedClass {
    let k = partition.weight();
    let c = chern_from_ch(&abstract_ch_parts(k));
    partition
        .parts()
        .iter()
        .fold(GradedClass::one(k), |acc, &a| &acc * &c[a as usize])
}

struct Decomposer<'a> {
    library: &'a FunctorLibrary,
    memo: HashMap<Vec<u32>, VirtualCombination>,
}

impl Decomposer<'_> {
    /// `∏ ch_{parts}(E)` as `Σ λ ch_K(J(E))`, with parts sorted ascending.
    fn ch_monomial(&mut self, parts: &[u32]) -> Result<VirtualCombination> {
        if let Some(hit) = self.memo.get(parts) {
            return Ok(hit.clone());
        }
        let out = if parts.len() == 1 {
            VirtualCombination::new(vec![(Rational::one(), FunctorExpr::id(0))])
        } else {
            let head = parts[0];
            let rest = &parts[1..];
            let inner = self.ch_monomial(rest)?;
            let split = product_split(head, rest.iter().sum())?.flatten();
            let mut terms = Vec::new();
            for (lj, j) in inner.terms() {
                for (mu, t) in split.terms() {
                    terms.push((lj * mu, t.substitute(&[FunctorExpr::id(0), j.clone()])?));
                }
            }
            VirtualCombination::new(terms).merged()
        };
        for (_, f) in out.terms() {
            match self.library.level_of(f) {
                Some(l) if l <= parts.len() => {}
                _ => {
                    return Err(Error::Internal(format!(
                        "functor {f} missing from library level {}",
                        parts.len()
                    )))
                }
            }
        }
        self.memo.insert(parts.to_vec(), out.clone());
        Ok(out)
    }
}

/// Builds a certificate for `∏ c_{a_l}` from the library. The terms are
/// merged and ordered by canonical functor serialization.
pub fn decompose(partition: &Partition, library: &FunctorLibrary) -> Result<DecompositionCertificate> {
    let k = partition.weight();
    if k > library.weight_bound() {
        return Err(Error::InvalidPartition(format!(
            "weight {k} exceeds N = {}",
            library.weight_bound()
        )));
    }
    let poly = chern_product_in_ch(partition);
    let mut monomials = Vec::new();
    for (m, q) in poly.terms() {
        let mut parts = Vec::new();
        for (g, e) in m.factors() {
            debug_assert_eq!(g.family(), Family::ChernChar);
            parts.extend(std::iter::repeat_n(g.index(), *e as usize));
        }
        parts.sort_unstable();
        monomials.push((q.clone(), parts));
    }
    let required = monomials.iter().map(|(_, p)| p.len()).max().unwrap_or(1);
    if required > library.levels() {
        return Err(Error::InsufficientLevel { required, available: library.levels() });
    }
    let mut dec = Decomposer { library, memo: HashMap::new() };
    let mut terms = Vec::new();
    for (q, parts) in &monomials {
        terms.extend(dec.ch_monomial(parts)?.scale(q).terms().iter().cloned());
    }
    let merged = VirtualCombination::new(terms).merged();
    Ok(DecompositionCertificate {
        n: library.weight_bound(),
        partition: partition.clone(),
        terms: merged
            .terms()
            .iter()
            .map(|(lambda, functor)| CertificateTerm { lambda: lambda.clone(), functor: functor.clone() })
            .collect(),
        verified_ranks: Vec::new(),
        level: required,
    })
}

#[derive(Clone, Debug)]
pub struct RankCheck {
    pub rank: u32,
    /// `∏ c_{a_l}(E) - Σ λ_i ch_K(J_i(E))` in the generic roots.
    pub residual: GradedClass,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<RankCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.residual.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &RankCheck> {
        self.checks.iter().filter(|c| !c.residual.is_zero())
    }
}

/// Evaluates both sides of the certificate on the generic bundle of each
/// rank, through root multisets only.
pub fn verify_certificate(cert: &DecompositionCertificate, ranks: &[u32]) -> Result<VerificationReport> {
    let k = cert.weight();
    let mut checks = Vec::with_capacity(ranks.len());
    for &rank in ranks {
        let e = FormalBundle::generic(rank);
        let lhs = cert
            .partition
            .parts()
            .iter()
            .fold(GradedClass::one(k), |acc, &a| &acc * &e.chern_class(a).truncate_to(k));
        let args = [e];
        let mut eval = RootEvaluator::new(&args)?;
        let mut rhs = GradedClass::zero(k);
        for t in &cert.terms {
            let image = eval.eval(&t.functor)?;
            rhs = &rhs + &image.ch_component(k).scale(&t.lambda);
        }
        checks.push(RankCheck { rank, residual: &lhs - &rhs });
    }
    Ok(VerificationReport { checks })
}

/// Decomposes and verifies in one step, recording the verified ranks.
pub fn certify(
    partition: &Partition,
    library: &FunctorLibrary,
    ranks: &[u32],
) -> Result<(DecompositionCertificate, VerificationReport)> {
    let mut cert = decompose(partition, library)?;
    let report = verify_certificate(&cert, ranks)?;
    if report.passed() {
        cert.verified_ranks = ranks.to_vec();
    }
    Ok((cert, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn e() -> FunctorExpr {
        FunctorExpr::id(0)
    }

    #[test]
    fn split_one_one() {
        let s = product_split(1, 1).unwrap();
        assert_eq!(s.weights, vec![frac(-5, 2), int(4), frac(-3, 2)]);
        assert_eq!(s.flatten().terms().len(), 6);
        let s = product_split(1, 2).unwrap();
        assert_eq!(s.weights.len(), 4);
        assert!(product_split(0, 2).is_err());
    }

    #[test]
    fn library_levels() {
        let lib = build_library(2, 2).unwrap();
        assert_eq!(lib.level(1).unwrap(), &[e()]);
        assert_eq!(lib.level(2).unwrap().len(), 7);
        assert_eq!(sup_bound_constant(&lib, 1).unwrap(), int(1));
        assert_eq!(sup_bound_constant(&lib, 2).unwrap(), int(4));
        assert!(lib.level(3).is_none());
        // N = 1 has no splits, so every level is {E}
        let lib1 = build_library(1, 3).unwrap();
        assert_eq!(lib1.level(3).unwrap().len(), 1);
    }

    #[test]
    fn base_case_certificate() {
        let lib = build_library(4, 1).unwrap();
        let cert = decompose(&"1".parse().unwrap(), &lib).unwrap();
        assert_eq!(cert.terms, vec![CertificateTerm { lambda: int(1), functor: e() }]);
        assert!(verify_certificate(&cert, &[1, 2, 3, 4]).unwrap().passed());
    }

    #[test]
    fn c1_squared_and_c2() {
        let lib = build_library(2, 2).unwrap();
        let sq = decompose(&"1,1".parse().unwrap(), &lib).unwrap();
        assert_eq!(sq.terms.len(), 6);
        assert!(verify_certificate(&sq, &[1, 2, 3, 4]).unwrap().passed());

        let c2 = decompose(&"2".parse().unwrap(), &lib).unwrap();
        // half of the c1² certificate plus -1 on E
        let mut expected = sq.combination().scale(&frac(1, 2)).terms().to_vec();
        expected.push((int(-1), e()));
        assert_eq!(c2.combination(), VirtualCombination::new(expected).merged());
        assert!(verify_certificate(&c2, &[1, 2, 3]).unwrap().passed());
    }

    #[test]
    fn shallow_library_is_reported() {
        let lib = build_library(3, 2).unwrap();
        let err = decompose(&"3".parse().unwrap(), &lib).unwrap_err();
        assert!(matches!(err, Error::InsufficientLevel { required: 3, available: 2 }));
        assert!(decompose(&"2,2".parse().unwrap(), &lib).is_err());
    }

    #[test]
    fn perturbed_lambda_fails_with_residual() {
        let lib = build_library(2, 2).unwrap();
        let mut cert = decompose(&"1,1".parse().unwrap(), &lib).unwrap();
        cert.terms[0].lambda += Rational::one();
        let report = verify_certificate(&cert, &[1, 2]).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failures().count(), 2);
    }

    #[test]
    fn certificate_json_round_trip() {
        let lib = build_library(2, 2).unwrap();
        let (cert, report) = certify(&"2".parse().unwrap(), &lib, &[1, 2]).unwrap();
        assert!(report.passed());
        let text = cert.to_json();
        assert!(text.starts_with(r#"{"version":"cc-cert-v1","N":2,"partition":[2],"terms":[{"lambda":"#));
        let back = DecompositionCertificate::from_json(&text).unwrap();
        assert_eq!(back.terms, cert.terms);
        assert_eq!(back.verified_ranks, vec![1, 2]);
        assert!(DecompositionCertificate::from_json("{}").is_err());
    }
}
