//! Adams operations as virtual combinations of admissible functors.
//!
//! `ψ_k` is expanded with Newton's recursion
//! `ψ_k = λ^1 ψ_{k-1} - λ^2 ψ_{k-2} + … + (-1)^{k-1} k λ^k`,
//! which yields an integer combination of tensor products of exterior powers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::graded::GradedClass;
use crate::rational::{self, Rational};
use crate::splitting::functor_character;

/// `Σ c_i · J_i` with honest functors `J_i`; the empty list is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VirtualCombination {
    terms: Vec<(Rational, FunctorExpr)>,
}

impl VirtualCombination {
    pub fn new(terms: Vec<(Rational, FunctorExpr)>) -> Self {
        VirtualCombination { terms }
    }

    pub fn terms(&self) -> &[(Rational, FunctorExpr)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sums coefficients of functors with the same canonical serialization,
    /// drops zeros, and orders terms by serialization.
    pub fn merged(&self) -> VirtualCombination {
        let mut map: BTreeMap<String, (Rational, FunctorExpr)> = BTreeMap::new();
        for (c, f) in &self.terms {
            map.entry(f.to_json())
                .and_modify(|(acc, _)| *acc += c)
                .or_insert_with(|| (c.clone(), f.clone()));
        }
        VirtualCombination {
            terms: map.into_values().filter(|(c, _)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> VirtualCombination {
        VirtualCombination {
            terms: self.terms.iter().map(|(c, f)| (c * q, f.clone())).collect(),
        }
    }

    /// Substitutes `args` into every functor.
    pub fn substitute(&self, args: &[FunctorExpr]) -> Result<VirtualCombination> {
        let terms = self
            .terms
            .iter()
            .map(|(c, f)| Ok((c.clone(), f.substitute(args)?)))
            .collect::<Result<_>>()?;
        Ok(VirtualCombination { terms })
    }

    /// Honest functor carrying the terms of the given sign, each repeated
    /// `|c|` times (as `C^|c| ⊗ J`). `None` when no term has that sign.
    fn signed_part(&self, positive: bool) -> Result<Option<FunctorExpr>> {
        let mut summands = Vec::new();
        for (c, f) in &self.terms {
            if c.is_positive() != positive || c.is_zero() {
                continue;
            }
            let n = rational::as_integer(c)
                .ok_or_else(|| Error::Usage(format!("non-integer coefficient {c} in virtual bundle")))?
                .abs();
            let n: u32 = n
                .try_into()
                .map_err(|_| Error::Usage(format!("coefficient {c} too large")))?;
            summands.push(if n == 1 {
                f.clone()
            } else {
                FunctorExpr::tensor(FunctorExpr::trivial(n), f.clone())
            });
        }
        Ok(FunctorExpr::sum_all(summands))
    }

    /// `G¹`, the honest part with positive coefficients.
    pub fn positive_part(&self) -> Result<Option<FunctorExpr>> {
        self.signed_part(true)
    }

    /// `G²`, so that the combination equals `G¹ - G²`.
    pub fn negative_part(&self) -> Result<Option<FunctorExpr>> {
        self.signed_part(false)
    }

    /// `Σ c_i ch(J_i(args))` from argument characters.
    pub fn character(&self, args: &[GradedClass]) -> Result<GradedClass> {
        let t = args.first().map(|a| a.truncation()).unwrap_or(0);
        let mut acc = GradedClass::zero(t);
        for (c, f) in &self.terms {
            acc = acc.try_add(&functor_character(f, args)?.scale(c))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for VirtualCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, func)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·{func}", rational::render(c))?;
        }
        Ok(())
    }
}

/// `E^{⊗a} ⊗ Λ^{b}E ⊗ …` for parts in ascending order, `Λ^1 E` written as `E`.
fn wedge_monomial(parts: &[u32]) -> FunctorExpr {
    FunctorExpr::tensor_all(parts.iter().map(|&p| {
        if p == 1 {
            FunctorExpr::id(0)
        } else {
            FunctorExpr::wedge(p, FunctorExpr::id(0))
        }
    }))
    .expect("non-empty monomial")
}

type WedgePoly = BTreeMap<Vec<u32>, BigInt>;

fn newton_polys(k: u32) -> Vec<WedgePoly> {
    let mut psi: Vec<WedgePoly> = vec![WedgePoly::new()];
    for n in 1..=k {
        let mut next = WedgePoly::new();
        for i in 1..n {
            let sign = if i % 2 == 1 { BigInt::from(1) } else { BigInt::from(-1) };
            for (parts, c) in &psi[(n - i) as usize] {
                let mut p = parts.clone();
                p.push(i);
                p.sort_unstable();
                *next.entry(p).or_default() += &sign * c;
            }
        }
        let top = if n % 2 == 1 { BigInt::from(n) } else { -BigInt::from(n) };
        *next.entry(vec![n]).or_default() += top;
        next.retain(|_, c| !c.is_zero());
        psi.push(next);
    }
    psi
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<VirtualCombination>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<VirtualCombination>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `ψ_k` in slot 0 as an integer combination of wedge monomials, ordered by
/// their ascending part lists (`E^{⊗k}` first, `Λ^k E` last).
pub fn adams_expand(k: u32) -> Result<Arc<VirtualCombination>> {
    if k == 0 {
        return Err(Error::Usage("Adams operations are indexed from 1".into()));
    }
    if let Some(hit) = cache().lock().expect("adams cache").get(&k) {
        return Ok(hit.clone());
    }
    let poly = newton_polys(k).pop().expect("psi_k");
    let combo = Arc::new(VirtualCombination::new(
        poly.iter()
            .map(|(parts, c)| (Rational::from_integer(c.clone()), wedge_monomial(parts)))
            .collect(),
    ));
    cache().lock().expect("adams cache").insert(k, combo.clone());
    Ok(combo)
}

/// The wedge monomials of `ψ_k` as part lists with integer coefficients.
pub fn adams_partitions(k: u32) -> Vec<(Vec<u32>, BigInt)> {
    newton_polys(k).pop().map(|p| p.into_iter().collect()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::splitting::{evaluate_functor, FormalBundle};

    fn e() -> FunctorExpr {
        FunctorExpr::id(0)
    }

    #[test]
    fn first_three_expansions() {
        let psi1 = adams_expand(1).unwrap();
        assert_eq!(psi1.terms(), &[(int(1), e())]);

        let psi2 = adams_expand(2).unwrap();
        assert_eq!(
            psi2.terms(),
            &[(int(1), FunctorExpr::tensor(e(), e())), (int(-2), FunctorExpr::wedge(2, e()))]
        );

        let psi3 = adams_expand(3).unwrap();
        assert_eq!(
            psi3.terms(),
            &[
                (int(1), FunctorExpr::tensor(FunctorExpr::tensor(e(), e()), e())),
                (int(-3), FunctorExpr::tensor(e(), FunctorExpr::wedge(2, e()))),
                (int(3), FunctorExpr::wedge(3, e())),
            ]
        );
        assert!(adams_expand(0).is_err());
    }

    #[test]
    fn term_counts_are_partition_numbers() {
        let counts: Vec<usize> = (1..=7).map(|k| adams_expand(k).unwrap().terms().len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn signed_parts() {
        let psi3 = adams_expand(3).unwrap();
        let g1 = psi3.positive_part().unwrap().unwrap();
        let g2 = psi3.negative_part().unwrap().unwrap();
        assert_eq!(g2, FunctorExpr::tensor(FunctorExpr::trivial(3), FunctorExpr::tensor(e(), FunctorExpr::wedge(2, e()))));
        // ch(G¹) - ch(G²) = ch(ψ_3 E)
        let b = FormalBundle::generic(3);
        let n = 3;
        let lhs = &evaluate_functor(&g1, std::slice::from_ref(&b)).unwrap().chern_character(n)
            - &evaluate_functor(&g2, std::slice::from_ref(&b)).unwrap().chern_character(n);
        assert_eq!(lhs, b.scale_roots(3).chern_character(n));
        assert!(adams_expand(1).unwrap().negative_part().unwrap().is_none());
    }

    #[test]
    fn merging_sums_duplicates() {
        let v = VirtualCombination::new(vec![(int(2), e()), (int(-2), e()), (int(1), FunctorExpr::trivial(1))]);
        assert_eq!(v.merged().terms(), &[(int(1), FunctorExpr::trivial(1))]);
    }
}
