//! Runs the comparison pipeline in half-dimension 2: starting from a rank-2
//! bundle with ∫ c₁² ≠ 0, finds an admissible image with nonzero Â-pairing.

use std::collections::BTreeMap;

use cowaist::graded::Monomial;
use cowaist::rational::{int, render, Rational};
use cowaist::splitting::{FormalBundle, PairingData};
use cowaist::pipeline::comparison_pipeline;

fn main() -> cowaist::Result<()> {
    let e = FormalBundle::generic(2);
    let table: BTreeMap<Monomial, Rational> = [("x1^2", 1), ("x1*x2", 2), ("x2^2", 0), ("p1", -3)]
        .into_iter()
        .map(|(m, q)| Ok((m.parse()?, int(q))))
        .collect::<cowaist::Result<_>>()?;
    let pairing = PairingData::with_standard_ahat(2, table)?;
    let out = comparison_pipeline(&e, &pairing, &"1,1".parse()?, &int(1))?;
    println!("∫ c_1²(E)        = {}", render(&out.chern_number));
    println!("J₁               = {}", out.inner);
    println!("∫ ch_2(J₁ E)     = {}", render(&out.inner_pairing));
    println!("k₀               = {} ({:?} part)", out.k0, out.part);
    println!("output functor   = {} nodes, C = {}", out.functor.node_count(), render(&out.functor.bound_constant().0));
    println!("∫ Â ch(output)   = {}", render(&out.ahat_pairing));
    println!("A_N = {}, C_k0 = {}, c = {}, bound = {}",
        render(&out.constant.a_n), render(&out.c_k0), render(out.c()), render(&out.bound));
    Ok(())
}
