//! Expands ψ_k in exterior powers and checks ch(ψ_k E) = Σ k^i ch_i(E) on a
//! generic rank-2 bundle.
//!
//!     cargo run --example adams_operations -- 4

use cowaist::adams::adams_expand;
use cowaist::graded::GradedClass;
use cowaist::rational::int;
use cowaist::splitting::{evaluate_functor, FormalBundle};

fn main() -> cowaist::Result<()> {
    let kmax: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let e = FormalBundle::generic(2);
    let n = 4;
    for k in 1..=kmax {
        let psi = adams_expand(k)?;
        println!("ψ_{k} = {psi}");
        let mut lhs = GradedClass::zero(n);
        for (c, f) in psi.terms() {
            lhs = &lhs + &evaluate_functor(f, std::slice::from_ref(&e))?.chern_character(n).scale(c);
        }
        let rhs = e.chern_character(n).scale_by_weight(|w| num::pow(int(k as i64), w as usize));
        println!("  ch(ψ_{k} E) = {lhs}  [{}]", if lhs == rhs { "ok" } else { "MISMATCH" });
    }
    Ok(())
}
