//! Quick run of the invariants of every module on small inputs.

use num::Zero;

use crate::adams::adams_expand;
use crate::decompose::{build_library, certify, product_split, sup_bound_constant};
use crate::error::Result;
use crate::functor::FunctorExpr;
use crate::geometry::{acw_lower_bound, hopf_chern_number, hopf_curvature_norm, kron_norm_check, SphereLineBundle, NORM_TOLERANCE};
use crate::graded::{Family, GradedClass, Partition};
use crate::pipeline::comparison_pipeline;
use crate::rational::{frac, int, Rational};
use crate::splitting::{ahat_series, ch_from_chern, chern_from_ch, evaluate_functor, FormalBundle, LinearForm, PairingData};
use crate::vandermonde::{determinant_by_elimination, vandermonde_det, vandermonde_select, VandermondeSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, body: impl FnOnce() -> Result<std::result::Result<(), String>>) -> Check {
    match body() {
        Ok(Ok(())) => Check { name, passed: true, detail: String::new() },
        Ok(Err(detail)) => Check { name, passed: false, detail },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn sample_bundle() -> FormalBundle {
    let f = |s: &str| s.parse::<LinearForm>().unwrap();
    FormalBundle::from_roots([f("x1"), f("x1"), f("2x2-x1")])
}

pub fn run() -> Vec<Check> {
    vec![
        check("graded ring laws", || {
            let n = 4;
            let a = sample_bundle().chern_character(n);
            let b = FormalBundle::generic(2).total_chern_class(n);
            let c = ahat_series(2, n);
            let lhs = &(&a + &b) * &c;
            let rhs = &(&a * &c) + &(&b * &c);
            let assoc = &(&a * &b) * &c == &a * &(&b * &c);
            let trunc = (&a * &b).truncate_to(2) == &a.truncate_to(2) * &b.truncate_to(2);
            Ok(ensure(lhs == rhs && assoc && trunc, || "distributivity, associativity or truncation".into()))
        }),
        check("chern character is a ring map", || {
            let n = 4;
            let (e, f) = (sample_bundle(), FormalBundle::generic_in(Family::SecondRoot, 2));
            let sum = e.direct_sum(&f).chern_character(n) == &e.chern_character(n) + &f.chern_character(n);
            let prod = e.tensor(&f).chern_character(n) == &e.chern_character(n) * &f.chern_character(n);
            let dual = e.dual().chern_character(n) == e.chern_character(n).negate_odd();
            Ok(ensure(sum && prod && dual, || format!("sum {sum} product {prod} dual {dual}")))
        }),
        check("newton round trip", || {
            let n = 4;
            let e = FormalBundle::generic(3);
            let ch: Vec<GradedClass> = (0..=n).map(|w| e.ch_component(w).truncate_to(n)).collect();
            let c = chern_from_ch(&ch);
            let direct: Vec<GradedClass> = (0..=n).map(|i| e.chern_class(i).truncate_to(n)).collect();
            let back = ch_from_chern(&c, 3);
            Ok(ensure(c == direct && back == ch, || "c ↔ ch mismatch at rank 3".into()))
        }),
        check("ahat low coefficients", || {
            let a = ahat_series(3, 4);
            let map: std::collections::BTreeMap<String, String> =
                [("1", "1"), ("p1", "-1/24"), ("p1^2", "7/5760"), ("p2", "-1/1440")]
                    .into_iter()
                    .map(|(m, q)| (m.to_string(), q.to_string()))
                    .collect();
            let expected = GradedClass::from_string_map(&map, 4)?;
            Ok(ensure(a == expected, || format!("got {a}")))
        }),
        check("adams identity through rank 3", || {
            let n = 4;
            for rank in 1..=3 {
                let e = FormalBundle::generic(rank);
                for k in 1..=4u32 {
                    let psi = adams_expand(k)?;
                    let mut lhs = GradedClass::zero(n);
                    for (c, f) in psi.terms() {
                        lhs = &lhs + &evaluate_functor(f, std::slice::from_ref(&e))?.chern_character(n).scale(c);
                    }
                    let rhs = e.scale_roots(k as i64).chern_character(n);
                    if lhs != rhs {
                        return Ok(Err(format!("rank {rank}, k {k}")));
                    }
                }
            }
            Ok(Ok(()))
        }),
        check("functor json round trip", || {
            let e = FunctorExpr::id(0);
            let f = FunctorExpr::tensor(
                FunctorExpr::sum(FunctorExpr::dual(e.clone()), FunctorExpr::trivial(3)),
                FunctorExpr::wedge(2, e.clone()),
            );
            Ok(ensure(FunctorExpr::from_json(&f.to_json())? == f, || f.to_json()))
        }),
        check("bound constants", || {
            let e = FunctorExpr::id(0);
            let f = FunctorExpr::tensor(FunctorExpr::tensor(e.clone(), e.clone()), FunctorExpr::wedge(2, e));
            Ok(ensure(f.bound_constant().0 == int(4), || format!("{}", f.bound_constant().0)))
        }),
        check("vandermonde", || {
            for n in 0..=8usize {
                let sys = VandermondeSystem::new(n);
                if vandermonde_det(n) != determinant_by_elimination(sys.matrix()) {
                    return Ok(Err(format!("determinant at n = {n}")));
                }
                for a in 0..=n {
                    let x = vandermonde_select(n, a);
                    let unit: Vec<Rational> = (0..=n).map(|i| int((i == a) as i64)).collect();
                    let applied: Vec<Rational> = (0..=n)
                        .map(|j| (0..=n).map(|l| &sys.matrix()[l][j] * &x[l]).sum())
                        .collect();
                    if applied != unit {
                        return Ok(Err(format!("selection ({n}, {a})")));
                    }
                }
            }
            Ok(Ok(()))
        }),
        check("product split (1,1)", || {
            let s = product_split(1, 1)?;
            Ok(ensure(s.weights == vec![frac(-5, 2), int(4), frac(-3, 2)], || format!("{:?}", s.weights)))
        }),
        check("certificates at N = 3", || {
            let lib = build_library(3, 3)?;
            for k in 1..=3 {
                for p in Partition::all_of(k) {
                    let (_, report) = certify(&p, &lib, &[1, 2, 3])?;
                    if !report.passed() {
                        return Ok(Err(format!("partition {p}")));
                    }
                }
            }
            let a2 = sup_bound_constant(&build_library(2, 2)?, 2)?;
            Ok(ensure(a2 == int(4), || format!("A_2 = {a2}")))
        }),
        check("comparison pipeline", || {
            let e = FormalBundle::generic(2);
            let table = [("x1*x2".parse()?, int(1)), ("p1".parse()?, int(3))].into_iter().collect();
            let pairing = PairingData::with_standard_ahat(2, table)?;
            let out = comparison_pipeline(&e, &pairing, &"1,1".parse()?, &int(1))?;
            let honored = out.functor.bound_constant().0 <= int(1) / out.c();
            Ok(ensure(!out.ahat_pairing.is_zero() && honored, || "pipeline output".into()))
        }),
        check("hopf bundle", || {
            for r in [int(1), int(2), int(3), frac(7, 2)] {
                let b = SphereLineBundle::tautological(r.clone())?;
                let norm = hopf_curvature_norm(&b).value;
                let w = acw_lower_bound(&b, &int(2))?;
                if norm != frac(1, 2) / (&r * &r) || &norm * &w.bound.value != int(1) || hopf_chern_number(&b) != -1 {
                    return Ok(Err(format!("radius {r}")));
                }
            }
            Ok(Ok(()))
        }),
        check("kronecker norm inequality", || {
            let s = kron_norm_check(4, 3, 50, 11)?;
            Ok(ensure(s.max_ratio <= 1.0 + NORM_TOLERANCE, || format!("ratio {}", s.max_ratio)))
        }),
    ]
}
