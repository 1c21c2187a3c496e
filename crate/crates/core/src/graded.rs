//! Truncated graded-commutative polynomial algebra over ℚ.
//!
//! Weights are half topological degrees: a Chern root or `c1` has weight 1,
//! `ch_i` and `c_i` have weight `i`, and the Pontryagin class `p_i` has weight
//! `2i`. A [`GradedClass`] silently discards every term above its truncation
//! weight, so products behave like products in `H^{even}(M; ℚ)` of a manifold
//! of half-dimension `N`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Generator families, ordered as their names sort: `c < ch < p < x < y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Abstract Chern class symbol `c_i`.
    Chern,
    /// Abstract Chern character component `ch_i`.
    ChernChar,
    /// Pontryagin class `p_i` of the base manifold.
    Pontryagin,
    /// Chern root `x_i` of the first bundle argument.
    Root,
    /// Chern root `y_i` of the second bundle argument.
    SecondRoot,
}

impl Family {
    fn prefix(self) -> &'static str {
        match self {
            Family::Chern => "c",
            Family::ChernChar => "ch",
            Family::Pontryagin => "p",
            Family::Root => "x",
            Family::SecondRoot => "y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    family: Family,
    index: u32,
}

impl Generator {
    /// Indices start at 1.
    pub fn new(family: Family, index: u32) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        Generator { family, index }
    }

    pub fn root(index: u32) -> Self {
        Self::new(Family::Root, index)
    }

    pub fn second_root(index: u32) -> Self {
        Self::new(Family::SecondRoot, index)
    }

    pub fn chern(index: u32) -> Self {
        Self::new(Family::Chern, index)
    }

    pub fn ch(index: u32) -> Self {
        Self::new(Family::ChernChar, index)
    }

    pub fn pontryagin(index: u32) -> Self {
        Self::new(Family::Pontryagin, index)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn weight(&self) -> u32 {
        match self.family {
            Family::Chern | Family::ChernChar => self.index,
            Family::Pontryagin => 2 * self.index,
            Family::Root | Family::SecondRoot => 1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.prefix(), self.index)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (prefix, digits) = s.split_at(split);
        let family = match prefix {
            "c" => Family::Chern,
            "ch" => Family::ChernChar,
            "p" => Family::Pontryagin,
            "x" => Family::Root,
            "y" => Family::SecondRoot,
            _ => return Err(Error::Parse(format!("unknown generator {s:?}"))),
        };
        let index: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator index in {s:?}")))?;
        if index == 0 {
            return Err(Error::Parse(format!("generator index must be ≥ 1 in {s:?}")));
        }
        Ok(Generator::new(family, index))
    }
}

/// A product of generator powers, stored sorted by generator with positive
/// exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(Generator, u32)>,
    weight: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(g: Generator) -> Self {
        Monomial::from_factors([(g, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Generator, u32)>) -> Self {
        let mut map: BTreeMap<Generator, u32> = BTreeMap::new();
        for (g, e) in factors {
            if e > 0 {
                *map.entry(g).or_default() += e;
            }
        }
        let weight = map.iter().map(|(g, e)| g.weight() * e).sum();
        Monomial { factors: map.into_iter().collect(), weight }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        self.factors
            .binary_search_by(|(h, _)| h.cmp(&g))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out, weight: self.weight + other.weight }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut factors = Vec::new();
        for piece in s.split('*') {
            let piece = piece.trim();
            let (g, e) = match piece.split_once('^') {
                Some((g, e)) => (
                    g,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {piece:?}")))?,
                ),
                None => (piece, 1),
            };
            factors.push((g.parse::<Generator>()?, e));
        }
        Ok(Monomial::from_factors(factors))
    }
}

/// A truncated polynomial with exact rational coefficients.
///
/// Invariants: no stored term exceeds `truncation` in weight and no stored
/// coefficient is zero, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedClass {
    truncation: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedClass {
    pub fn zero(truncation: u32) -> Self {
        GradedClass { truncation, terms: BTreeMap::new() }
    }

    pub fn one(truncation: u32) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    pub fn constant(q: Rational, truncation: u32) -> Self {
        Self::from_terms([(Monomial::one(), q)], truncation)
    }

    pub fn generator(g: Generator, truncation: u32) -> Self {
        Self::from_terms([(Monomial::generator(g), Rational::one())], truncation)
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
        truncation: u32,
    ) -> Self {
        let mut out = GradedClass::zero(truncation);
        for (m, q) in terms {
            out.add_term(m, q);
        }
        out
    }

    /// Adds `q·m` in place, dropping it if it lies above the truncation.
    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if m.weight() > self.truncation || q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: by weight, then monomial.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The weight-0 coefficient (the rank, for a Chern character).
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// Keeps terms of weight ≤ `truncation` and records the new bound.
    ///
    /// Raising the bound does not recover terms that were already dropped.
    pub fn truncate_to(&self, truncation: u32) -> Self {
        GradedClass {
            truncation,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= truncation)
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    /// Homogeneous weight-`w` part.
    pub fn component(&self, w: u32) -> Result<Self> {
        if w > self.truncation {
            return Err(Error::WeightOutOfRange { weight: w, truncation: self.truncation });
        }
        Ok(self.filter_weight(|mw| mw == w))
    }

    fn filter_weight(&self, keep: impl Fn(u32) -> bool) -> Self {
        GradedClass {
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m.weight()))
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
        }
    }

    /// Multiplies the weight-`w` part by `f(w)` for every `w`.
    pub fn scale_by_weight(&self, f: impl Fn(u32) -> Rational) -> Self {
        let mut out = GradedClass::zero(self.truncation);
        for (m, q) in &self.terms {
            out.add_term(m.clone(), q * f(m.weight()));
        }
        out
    }

    /// Negates every odd-weight component.
    pub fn negate_odd(&self) -> Self {
        self.scale_by_weight(|w| if w % 2 == 1 { -Rational::one() } else { Rational::one() })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return GradedClass::zero(self.truncation);
        }
        GradedClass {
            truncation: self.truncation,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    fn check_truncation(&self, other: &Self) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_truncation(other)?;
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), q.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_truncation(other)?;
        let mut out = GradedClass::zero(self.truncation);
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                if ma.weight() + mb.weight() > self.truncation {
                    // terms are weight-sorted, so the rest of `other` is too heavy
                    break;
                }
                out.add_term(ma.mul(mb), qa * qb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = GradedClass::one(self.truncation);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `exp(self)` for a class without constant term.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Usage("exp needs a class with zero constant term".into()));
        }
        let mut out = GradedClass::one(self.truncation);
        let mut power = GradedClass::one(self.truncation);
        for k in 1..=self.truncation {
            power = (&power * self).scale(&rational::frac(1, k as i64));
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out)
    }

    /// Canonical `{monomial: "p/q"}` map.
    pub fn to_string_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(m, q)| (m.to_string(), rational::render(q)))
            .collect()
    }

    pub fn from_string_map<'a>(
        map: impl IntoIterator<Item = (&'a String, &'a String)>,
        truncation: u32,
    ) -> Result<Self> {
        let mut out = GradedClass::zero(truncation);
        for (m, q) in map {
            let m: Monomial = m.parse()?;
            if m.weight() > truncation {
                return Err(Error::Parse(format!(
                    "monomial {m} has weight {} above truncation {truncation}",
                    m.weight()
                )));
            }
            out.add_term(m, rational::parse(q)?);
        }
        Ok(out)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            let (sign, abs) = if q.is_negative() { ("-", -q) } else { ("+", q.clone()) };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (m.is_one(), abs.is_one()) {
                (true, _) => write!(f, "{}", rational::render(&abs))?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{}*{m}", rational::render(&abs))?,
            }
        }
        Ok(())
    }
}

// The operator impls panic on mismatched truncations; use the `try_*`
// methods where the bounds are not known to agree.
impl Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.try_add(rhs).expect("graded add")
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self.try_sub(rhs).expect("graded sub")
    }
}

impl Mul for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        self.try_mul(rhs).expect("graded mul")
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        GradedClass {
            truncation: self.truncation,
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }
}

/// A partition `K = a_1 + … + a_ν` into positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All partitions of `k`, parts non-increasing, in reverse lexicographic
    /// order (`[k]` first).
    pub fn all_of(k: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: prefix.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                prefix.push(p);
                rec(rest - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if k > 0 {
            rec(k, k, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn g(name: &str, n: u32) -> GradedClass {
        GradedClass::generator(name.parse().unwrap(), n)
    }

    #[test]
    fn additive_inverse_and_like_terms() {
        let c1 = g("c1", 3);
        assert!((&c1 + &-&c1).is_zero());
        let lhs = &(&GradedClass::one(3) + &g("ch1", 3)) + &g("ch1", 3);
        let rhs = GradedClass::from_terms(
            [(Monomial::one(), int(1)), ("ch1".parse().unwrap(), int(2))],
            3,
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        assert!(matches!(
            g("x1", 2).try_add(&g("x1", 3)),
            Err(Error::TruncationMismatch { left: 2, right: 3 })
        ));
        assert!(g("x1", 2).try_mul(&g("x1", 3)).is_err());
    }

    #[test]
    fn products_truncate() {
        let ch1 = g("ch1", 1);
        assert!((&ch1 * &ch1).is_zero());
        let x = g("x1", 4);
        assert_eq!(&x * &GradedClass::one(4), x);
    }

    #[test]
    fn ahat_square_by_hand() {
        // (1 - p1/24)^2 = 1 - p1/12 + p1^2/576 at weight 4
        let a = &GradedClass::one(4) - &g("p1", 4).scale(&frac(1, 24));
        let sq = &a * &a;
        let p1: Monomial = "p1".parse().unwrap();
        let p1sq: Monomial = "p1^2".parse().unwrap();
        assert_eq!(sq.coefficient(&Monomial::one()), int(1));
        assert_eq!(sq.coefficient(&p1), frac(-1, 12));
        assert_eq!(sq.coefficient(&p1sq), frac(1, 576));
        assert_eq!(sq.len(), 3);
        // at weight 2 the square term drops out
        let a2 = a.truncate_to(2);
        assert_eq!((&a2 * &a2).len(), 2);
    }

    #[test]
    fn components() {
        let x = &(&GradedClass::one(3) + &g("ch1", 3)) + &g("ch2", 3);
        assert_eq!(x.component(2).unwrap(), g("ch2", 3));
        assert!(matches!(x.component(4), Err(Error::WeightOutOfRange { .. })));
        let mut sum = GradedClass::zero(3);
        for w in 0..=3 {
            sum = &sum + &x.component(w).unwrap();
        }
        assert_eq!(sum, x);
    }

    #[test]
    fn exp_of_root_has_factorial_coefficients() {
        let e = g("x1", 3).exp_nilpotent().unwrap();
        assert_eq!(e.component(3).unwrap(), g("x1", 3).pow(3).scale(&frac(1, 6)));
    }

    #[test]
    fn monomial_text_round_trip() {
        let m: Monomial = "x1^2*p1*ch3".parse().unwrap();
        assert_eq!(m.to_string(), "ch3*p1*x1^2");
        assert_eq!(m.weight(), 3 + 2 + 2);
        assert_eq!(m.to_string().parse::<Monomial>().unwrap(), m);
        assert!("q1".parse::<Monomial>().is_err());
        assert!("x0".parse::<Monomial>().is_err());
    }

    #[test]
    fn canonical_rendering() {
        let a = &GradedClass::one(2) - &g("p1", 2).scale(&frac(1, 24));
        assert_eq!(a.to_string(), "1 - 1/24*p1");
        assert_eq!(GradedClass::zero(2).to_string(), "0");
    }

    #[test]
    fn partitions() {
        let counts: Vec<usize> = (1..=6).map(|k| Partition::all_of(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
        assert_eq!(Partition::all_of(3)[0].parts(), &[3]);
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert_eq!("3,2".parse::<Partition>().unwrap().weight(), 5);
    }
}
