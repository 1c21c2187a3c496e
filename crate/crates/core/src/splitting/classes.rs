//! Conversions between Chern classes and Chern characters, the Â-series,
//! and functor evaluation directly on truncated Chern characters.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::functor::FunctorExpr;
use crate::graded::{GradedClass, Generator};
use crate::rational::{self, Rational};

use super::bundle::factorial;

/// Power sums `s_1..s_n` from elementary symmetric `e_0..e_n` (`e_0 = 1`).
/// Index 0 of the result is unused and left zero.
pub fn power_sums_from_elementary(e: &[GradedClass]) -> Vec<GradedClass> {
    let t = e[0].truncation();
    let mut s = vec![GradedClass::zero(t); e.len()];
    for k in 1..e.len() {
        // s_k = Σ_{i<k} (-1)^{i-1} e_i s_{k-i} + (-1)^{k-1} k e_k
        let mut acc = e[k].scale(&rational::int(k as i64));
        if k % 2 == 0 {
            acc = -&acc;
        }
        for i in 1..k {
            let term = &e[i] * &s[k - i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        s[k] = acc;
    }
    s
}

/// Elementary symmetric `e_0..e_n` from power sums (`s[0]` ignored).
pub fn elementary_from_power_sums(s: &[GradedClass]) -> Vec<GradedClass> {
    let t = s[0].truncation();
    let mut e = vec![GradedClass::zero(t); s.len()];
    e[0] = GradedClass::one(t);
    for k in 1..s.len() {
        // k e_k = Σ_{i=1..k} (-1)^{i-1} e_{k-i} s_i
        let mut acc = GradedClass::zero(t);
        for i in 1..=k {
            let term = &e[k - i] * &s[i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e[k] = acc.scale(&rational::frac(1, k as i64));
    }
    e
}

/// Chern classes `c_0..c_N` from Chern character components `ch_0..ch_N`.
///
/// Uses `p_i = i!·ch_i`; the result does not depend on `ch_0`, so it holds
/// for every rank (classes above the rank come out zero).
pub fn chern_from_ch(ch_parts: &[GradedClass]) -> Vec<GradedClass> {
    let mut p = ch_parts.to_vec();
    for (i, part) in p.iter_mut().enumerate().skip(1) {
        *part = part.scale(&Rational::from_integer(factorial(i as u32)));
    }
    elementary_from_power_sums(&p)
}

/// Chern character components `ch_0..ch_N` from `c_0..c_N` and the rank.
pub fn ch_from_chern(c_parts: &[GradedClass], rank: u32) -> Vec<GradedClass> {
    let t = c_parts[0].truncation();
    let mut ch = power_sums_from_elementary(c_parts);
    ch[0] = GradedClass::constant(rational::int(rank as i64), t);
    for (i, part) in ch.iter_mut().enumerate().skip(1) {
        *part = part.scale(&Rational::new(1.into(), factorial(i as u32)));
    }
    ch
}

/// `[ch_1, …, ch_N]` as abstract generators, with `ch_0 = rank` left symbolic
/// as zero (unused by the Newton recursion).
pub fn abstract_ch_parts(truncation: u32) -> Vec<GradedClass> {
    let mut parts = vec![GradedClass::zero(truncation)];
    parts.extend((1..=truncation).map(|i| GradedClass::generator(Generator::ch(i), truncation)));
    parts
}

/// Univariate power-series coefficients of `log((√u/2) / sinh(√u/2))`
/// up to `u^n`.
fn log_ahat_coefficients(n: usize) -> Vec<Rational> {
    // g(u) = sinh(z)/z with z² = u/4: Σ u^k / (4^k (2k+1)!)
    let g: Vec<Rational> = (0..=n)
        .map(|k| {
            let denom = num::pow(num::BigInt::from(4), k) * factorial(2 * k as u32 + 1);
            Rational::new(1.into(), denom)
        })
        .collect();
    // log f = -log g, and log(1 + h) = Σ (-1)^{m-1} h^m / m
    let h: Vec<Rational> =
        g.iter().enumerate().map(|(i, c)| if i == 0 { Rational::zero() } else { c.clone() }).collect();
    let mut out = vec![Rational::zero(); n + 1];
    let mut power = vec![Rational::zero(); n + 1];
    power[0] = Rational::one();
    for m in 1..=n {
        power = series_mul(&power, &h);
        let sign = if m % 2 == 1 { -Rational::one() } else { Rational::one() };
        let w = sign / rational::int(m as i64);
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * &w;
        }
    }
    out
}

fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut out = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// `Â = ∏_j (y_j/2)/sinh(y_j/2)` over `pontryagin_roots` roots, written in the
/// Pontryagin classes `p_i = e_i(y_1², …)` and truncated at `truncation`.
///
/// Computed as `exp(Σ_k b_k s_k)` where `b_k` are the coefficients of the
/// univariate log-series and `s_k` the power sums of the `y_j²`.
pub fn ahat_series(pontryagin_roots: u32, truncation: u32) -> GradedClass {
    let kmax = (truncation / 2) as usize;
    let m = pontryagin_roots as usize;
    // e_i = p_i for i ≤ m, zero beyond
    let mut e = vec![GradedClass::one(truncation)];
    for i in 1..=kmax {
        e.push(if i <= m {
            GradedClass::generator(Generator::pontryagin(i as u32), truncation)
        } else {
            GradedClass::zero(truncation)
        });
    }
    let s = power_sums_from_elementary(&e);
    let b = log_ahat_coefficients(kmax);
    let mut log = GradedClass::zero(truncation);
    for k in 1..=kmax {
        log = &log + &s[k].scale(&b[k]);
    }
    log.exp_nilpotent().expect("log has no constant term")
}

/// Chern character of `J(E_0, E_1, …)` computed from the truncated Chern
/// characters of the arguments.
///
/// Uses additivity and multiplicativity of `ch`, `ch(E*)` = odd weights
/// negated, and for exterior powers the λ-ring identity
/// `k·λ^k = Σ_j (-1)^{j-1} ψ^j · λ^{k-j}` with `ψ^j` scaling weight `w` by
/// `j^w`. Exact at every weight up to the truncation.
pub fn functor_character(functor: &FunctorExpr, args: &[GradedClass]) -> Result<GradedClass> {
    if functor.arity() > args.len() {
        return Err(Error::ArityMismatch { expected: functor.arity(), got: args.len() });
    }
    let t = args
        .first()
        .map(|a| a.truncation())
        .ok_or_else(|| Error::Usage("at least one argument character needed".into()))?;
    if let Some(other) = args.iter().find(|a| a.truncation() != t) {
        return Err(Error::TruncationMismatch { left: t, right: other.truncation() });
    }
    Ok(character_rec(functor, args, t))
}

fn character_rec(functor: &FunctorExpr, args: &[GradedClass], t: u32) -> GradedClass {
    use FunctorExpr::*;
    match functor {
        Identity { slot } => args[*slot].clone(),
        Trivial { k } => GradedClass::constant(rational::int(*k as i64), t),
        Dual { arg } => character_rec(arg, args, t).negate_odd(),
        Wedge { k, arg } => wedge_character(&character_rec(arg, args, t), *k),
        DirectSum { left, right } => &character_rec(left, args, t) + &character_rec(right, args, t),
        Tensor { left, right } => &character_rec(left, args, t) * &character_rec(right, args, t),
    }
}

/// `ch(Λ^k F)` from `ch(F)`.
pub fn wedge_character(ch: &GradedClass, k: u32) -> GradedClass {
    let t = ch.truncation();
    let psi: Vec<GradedClass> = (0..=k)
        .map(|j| ch.scale_by_weight(|w| num::pow(rational::int(j as i64), w as usize)))
        .collect();
    let mut lambda = vec![GradedClass::one(t)];
    for n in 1..=k as usize {
        let mut acc = GradedClass::zero(t);
        for j in 1..=n {
            let term = &psi[j] * &lambda[n - j];
            acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        lambda.push(acc.scale(&rational::frac(1, n as i64)));
    }
    lambda.pop().expect("non-empty")
}
