use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::bigint::{BigInt, BigUint};
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::graded::{Family, GradedClass, Generator, Monomial};
use crate::rational::Rational;

/// Integer combination of weight-one generators; a formal Chern root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm(Vec<(Generator, i64)>);

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm(Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        LinearForm(vec![(g, 1)])
    }

    pub fn from_coefficients(coeffs: impl IntoIterator<Item = (Generator, i64)>) -> Result<Self> {
        let mut map: BTreeMap<Generator, i64> = BTreeMap::new();
        for (g, c) in coeffs {
            if g.weight() != 1 {
                return Err(Error::Usage(format!("root generator {g} must have weight 1")));
            }
            *map.entry(g).or_default() += c;
        }
        Ok(LinearForm(map.into_iter().filter(|(_, c)| *c != 0).collect()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficients(&self) -> &[(Generator, i64)] {
        &self.0
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = j >= other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0);
            let take_right = i >= self.0.len() || (j < other.0.len() && other.0[j].0 < self.0[i].0);
            if take_left {
                out.push(self.0[i]);
                i += 1;
            } else if take_right {
                out.push(other.0[j]);
                j += 1;
            } else {
                let c = self.0[i].1 + other.0[j].1;
                if c != 0 {
                    out.push((self.0[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LinearForm(out)
    }

    pub fn scale(&self, k: i64) -> LinearForm {
        if k == 0 {
            return LinearForm::zero();
        }
        LinearForm(self.0.iter().map(|&(g, c)| (g, c * k)).collect())
    }

    pub fn as_class(&self, truncation: u32) -> GradedClass {
        GradedClass::from_terms(
            self.0
                .iter()
                .map(|&(g, c)| (Monomial::generator(g), Rational::from_integer(c.into()))),
            truncation,
        )
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.0.iter().enumerate() {
            match (*c, i) {
                (1, 0) => write!(f, "{g}")?,
                (1, _) => write!(f, "+{g}")?,
                (-1, _) => write!(f, "-{g}")?,
                (c, 0) => write!(f, "{c}{g}")?,
                (c, _) if c > 0 => write!(f, "+{c}{g}")?,
                (c, _) => write!(f, "{c}{g}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    /// Accepts forms such as `x1`, `-x2`, `2x1-3y1`, `0`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(LinearForm::zero());
        }
        let mut coeffs = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map(|i| i + 1)
                .unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
            let coeff: i64 = if digits == 0 {
                1
            } else {
                term[..digits]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            let g: Generator = term[digits..].parse()?;
            coeffs.push((g, sign * coeff));
        }
        LinearForm::from_coefficients(coeffs)
    }
}

/// A formal bundle under the splitting principle: a multiset of Chern roots.
///
/// Roots are stored with multiplicities, so large tensor powers stay compact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalBundle {
    roots: BTreeMap<LinearForm, BigUint>,
}

impl FormalBundle {
    pub fn from_roots(roots: impl IntoIterator<Item = LinearForm>) -> Self {
        let mut b = FormalBundle::default();
        for r in roots {
            b.insert(r, BigUint::one());
        }
        b
    }

    /// Rank-`rank` bundle with independent roots `x1..x_rank`.
    pub fn generic(rank: u32) -> Self {
        Self::generic_in(Family::Root, rank)
    }

    pub fn generic_in(family: Family, rank: u32) -> Self {
        Self::from_roots((1..=rank).map(|i| LinearForm::generator(Generator::new(family, i))))
    }

    pub fn trivial(k: u32) -> Self {
        let mut b = FormalBundle::default();
        if k > 0 {
            b.insert(LinearForm::zero(), BigUint::from(k));
        }
        b
    }

    fn insert(&mut self, root: LinearForm, mult: BigUint) {
        if mult.is_zero() {
            return;
        }
        *self.roots.entry(root).or_default() += mult;
    }

    pub fn rank(&self) -> BigUint {
        self.roots.values().sum()
    }

    pub fn distinct_roots(&self) -> usize {
        self.roots.len()
    }

    /// Distinct roots with multiplicities.
    pub fn roots(&self) -> impl Iterator<Item = (&LinearForm, &BigUint)> {
        self.roots.iter()
    }

    pub fn direct_sum(&self, other: &FormalBundle) -> FormalBundle {
        let mut out = self.clone();
        for (r, m) in &other.roots {
            out.insert(r.clone(), m.clone());
        }
        out
    }

    pub fn tensor(&self, other: &FormalBundle) -> FormalBundle {
        let mut out = FormalBundle::default();
        for (a, ma) in &self.roots {
            for (b, mb) in &other.roots {
                out.insert(a.add(b), ma * mb);
            }
        }
        out
    }

    pub fn dual(&self) -> FormalBundle {
        FormalBundle {
            roots: self.roots.iter().map(|(r, m)| (r.scale(-1), m.clone())).collect(),
        }
    }

    /// Every root multiplied by `k`; on a split bundle this is the Adams
    /// operation ψ_k.
    pub fn scale_roots(&self, k: i64) -> FormalBundle {
        let mut out = FormalBundle::default();
        for (r, m) in &self.roots {
            out.insert(r.scale(k), m.clone());
        }
        out
    }

    /// `Λ^k`: sums over k-element sub-multisets. Empty when `k > rank`.
    pub fn wedge(&self, k: u32) -> FormalBundle {
        let k = k as usize;
        // states[c] maps a partial root sum over c chosen roots to its count
        let mut states: Vec<BTreeMap<LinearForm, BigUint>> = vec![BTreeMap::new(); k + 1];
        states[0].insert(LinearForm::zero(), BigUint::one());
        for (root, mult) in &self.roots {
            let mut next = states.clone();
            let cap = mult.clone();
            for used in 0..k {
                if states[used].is_empty() {
                    continue;
                }
                let mut binom = BigUint::one();
                let mut shift = LinearForm::zero();
                for j in 1..=(k - used) {
                    if BigUint::from(j) > cap {
                        break;
                    }
                    // C(mult, j) built incrementally
                    binom = binom * (&cap - BigUint::from(j - 1)) / BigUint::from(j);
                    shift = shift.add(root);
                    let target = &mut next[used + j];
                    for (sum, count) in &states[used] {
                        *target.entry(sum.add(&shift)).or_default() += count * &binom;
                    }
                }
            }
            states = next;
        }
        FormalBundle { roots: std::mem::take(&mut states[k]) }
    }

    /// `Σ_roots Σ_{i≤N} root^i / i!`.
    pub fn chern_character(&self, truncation: u32) -> GradedClass {
        let mut out = GradedClass::zero(truncation);
        for w in 0..=truncation {
            for (m, q) in self.power_sum_terms(w) {
                out.add_term(m, q);
            }
        }
        out
    }

    /// Weight-`w` component of the Chern character, as a class truncated at `w`.
    pub fn ch_component(&self, w: u32) -> GradedClass {
        GradedClass::from_terms(self.power_sum_terms(w), w)
    }

    /// Terms of `Σ mult·root^w / w!` computed monomial by monomial.
    fn power_sum_terms(&self, w: u32) -> Vec<(Monomial, Rational)> {
        // accumulate w!·coefficient as integers, divide once at the end
        let mut acc: BTreeMap<Vec<(Generator, u32)>, BigInt> = BTreeMap::new();
        for (root, mult) in &self.roots {
            if root.is_zero() {
                if w == 0 {
                    *acc.entry(Vec::new()).or_default() += BigInt::from(mult.clone());
                }
                continue;
            }
            let coeffs = root.coefficients();
            let mut alpha = vec![0u32; coeffs.len()];
            for_each_composition(w, &mut alpha, 0, &mut |alpha| {
                let mut value = BigInt::from(mult.clone()) * multinomial(w, alpha);
                for (&(_, c), &a) in coeffs.iter().zip(alpha) {
                    value *= num::pow(BigInt::from(c), a as usize);
                }
                let key: Vec<(Generator, u32)> = coeffs
                    .iter()
                    .zip(alpha)
                    .filter(|(_, &a)| a > 0)
                    .map(|(&(g, _), &a)| (g, a))
                    .collect();
                *acc.entry(key).or_default() += value;
            });
        }
        let fact = factorial(w);
        acc.into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (Monomial::from_factors(k), Rational::new(v, fact.clone())))
            .collect()
    }

    /// Elementary symmetric polynomial `e_i` of the roots (the Chern class `c_i`).
    /// Zero when `i > rank`.
    pub fn chern_class(&self, i: u32) -> GradedClass {
        self.total_chern_class(i)
            .component(i)
            .expect("component within truncation")
    }

    /// `∏ (1 + root)` truncated at weight `truncation`.
    pub fn total_chern_class(&self, truncation: u32) -> GradedClass {
        let mut total = GradedClass::one(truncation);
        for (root, mult) in &self.roots {
            if root.is_zero() {
                continue;
            }
            // (1 + ℓ)^m = Σ_j C(m, j) ℓ^j
            let ell = root.as_class(truncation);
            let mut factor = GradedClass::one(truncation);
            let mut power = GradedClass::one(truncation);
            let mut binom = BigUint::one();
            for j in 1..=truncation {
                if BigUint::from(j) > *mult {
                    break;
                }
                binom = binom * (mult - BigUint::from(j - 1)) / BigUint::from(j);
                power = &power * &ell;
                factor = &factor + &power.scale(&Rational::from_integer(binom.clone().into()));
            }
            total = &total * &factor;
        }
        total
    }
}

impl fmt::Display for FormalBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (r, m)) in self.roots.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if m.is_one() {
                write!(f, "{r}")?;
            } else {
                write!(f, "{r} ×{m}")?;
            }
        }
        f.write_str("}")
    }
}

fn for_each_composition(total: u32, alpha: &mut [u32], at: usize, f: &mut impl FnMut(&[u32])) {
    if at + 1 == alpha.len() {
        alpha[at] = total;
        f(alpha);
        return;
    }
    for a in 0..=total {
        alpha[at] = a;
        for_each_composition(total - a, alpha, at + 1, f);
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn multinomial(n: u32, alpha: &[u32]) -> BigInt {
    let denom = alpha.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
    factorial(n) / denom
}

/// Applies `J` to formal bundles through their root multisets.
pub fn evaluate_functor(functor: &FunctorExpr, args: &[FormalBundle]) -> Result<FormalBundle> {
    RootEvaluator::new(args)?.eval(functor).map(|b| (*b).clone())
}

/// Root-multiset evaluator with a per-argument-list memo, so repeated
/// subtrees across many functors are expanded once.
pub struct RootEvaluator<'a> {
    args: &'a [FormalBundle],
    memo: HashMap<FunctorExpr, Arc<FormalBundle>>,
}

impl<'a> RootEvaluator<'a> {
    pub fn new(args: &'a [FormalBundle]) -> Result<Self> {
        Ok(RootEvaluator { args, memo: HashMap::new() })
    }

    pub fn eval(&mut self, functor: &FunctorExpr) -> Result<Arc<FormalBundle>> {
        if functor.arity() > self.args.len() {
            return Err(Error::ArityMismatch { expected: functor.arity(), got: self.args.len() });
        }
        self.eval_node(functor)
    }

    fn eval_node(&mut self, functor: &FunctorExpr) -> Result<Arc<FormalBundle>> {
        use FunctorExpr::*;
        if let Identity { slot } = functor {
            return Ok(Arc::new(self.args[*slot].clone()));
        }
        if let Some(hit) = self.memo.get(functor) {
            return Ok(hit.clone());
        }
        let out = match functor {
            Identity { .. } => unreachable!(),
            Trivial { k } => FormalBundle::trivial(*k),
            Dual { arg } => self.eval_node(arg)?.dual(),
            Wedge { k, arg } => self.eval_node(arg)?.wedge(*k),
            DirectSum { left, right } => {
                let (l, r) = (self.eval_node(left)?, self.eval_node(right)?);
                l.direct_sum(&r)
            }
            Tensor { left, right } => {
                let (l, r) = (self.eval_node(left)?, self.eval_node(right)?);
                l.tensor(&r)
            }
        };
        let out = Arc::new(out);
        self.memo.insert(functor.clone(), out.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn lf(s: &str) -> LinearForm {
        s.parse().unwrap()
    }

    fn class(terms: &[(&str, Rational)], n: u32) -> GradedClass {
        GradedClass::from_terms(terms.iter().map(|(m, q)| (m.parse().unwrap(), q.clone())), n)
    }

    #[test]
    fn linear_form_text() {
        assert_eq!(lf("2x1-3y2+x1").to_string(), "3x1-3y2");
        assert_eq!(lf("-x2").to_string(), "-x2");
        assert!(lf("x1-x1").is_zero());
        assert!("p1".parse::<LinearForm>().is_err());
        assert!("2".parse::<LinearForm>().is_err());
    }

    #[test]
    fn trivial_bundle_character_is_rank() {
        let b = FormalBundle::trivial(3);
        assert_eq!(b.chern_character(4), GradedClass::constant(int(3), 4));
    }

    #[test]
    fn line_bundle_character() {
        let b = FormalBundle::from_roots([lf("x1")]);
        let expected = class(
            &[("1", int(1)), ("x1", int(1)), ("x1^2", frac(1, 2)), ("x1^3", frac(1, 6))],
            3,
        );
        assert_eq!(b.chern_character(3), expected);
    }

    #[test]
    fn opposite_roots_character() {
        let b = FormalBundle::from_roots([lf("x1"), lf("-x1")]);
        assert_eq!(b.chern_character(2), class(&[("1", int(2)), ("x1^2", int(1))], 2));
    }

    #[test]
    fn chern_classes() {
        let b = FormalBundle::generic(2);
        assert_eq!(b.chern_class(0), GradedClass::one(0));
        assert_eq!(b.chern_class(1), class(&[("x1", int(1)), ("x2", int(1))], 1));
        assert!(b.chern_class(3).is_zero());
        let c = FormalBundle::from_roots([lf("x1"), lf("-x1")]);
        assert_eq!(c.chern_class(2), class(&[("x1^2", int(-1))], 2));
    }

    #[test]
    fn functor_evaluation() {
        let e = FormalBundle::generic(3);
        let dual = evaluate_functor(&FunctorExpr::dual(FunctorExpr::id(0)), &[FormalBundle::generic(2)])
            .unwrap();
        assert_eq!(dual, FormalBundle::from_roots([lf("-x1"), lf("-x2")]));
        let w2 = evaluate_functor(&FunctorExpr::wedge(2, FunctorExpr::id(0)), std::slice::from_ref(&e)).unwrap();
        assert_eq!(w2, FormalBundle::from_roots([lf("x1+x2"), lf("x1+x3"), lf("x2+x3")]));
        let t = FunctorExpr::tensor(FunctorExpr::id(0), FunctorExpr::id(1));
        let x = FormalBundle::from_roots([lf("x1")]);
        let y = FormalBundle::generic_in(Family::SecondRoot, 2);
        assert_eq!(
            evaluate_functor(&t, &[x, y]).unwrap(),
            FormalBundle::from_roots([lf("x1+y1"), lf("x1+y2")])
        );
        assert!(evaluate_functor(&t, std::slice::from_ref(&e)).is_err());
        let w4 = evaluate_functor(&FunctorExpr::wedge(4, FunctorExpr::id(0)), std::slice::from_ref(&e)).unwrap();
        assert_eq!(w4.rank(), BigUint::zero());
        let w0 = evaluate_functor(&FunctorExpr::wedge(0, FunctorExpr::id(0)), &[e]).unwrap();
        assert_eq!(w0, FormalBundle::trivial(1));
    }

    #[test]
    fn wedge_with_multiplicities_matches_expanded_roots() {
        // {x1 ×3, x2} : Λ² = {2x1 ×3, x1+x2 ×3}
        let b = FormalBundle::from_roots([lf("x1"), lf("x1"), lf("x1"), lf("x2")]);
        let mut expected = FormalBundle::default();
        expected.insert(lf("2x1"), BigUint::from(3u32));
        expected.insert(lf("x1+x2"), BigUint::from(3u32));
        assert_eq!(b.wedge(2), expected);
        assert_eq!(b.wedge(4), FormalBundle::from_roots([lf("3x1+x2")]));
    }
}
