//! Determinants and selection weights of the Adams integral system.

use cowaist::rational::render;
use cowaist::vandermonde::{determinant_by_elimination, vandermonde_det, vandermonde_select, VandermondeSystem};

fn main() {
    for n in 0..=8 {
        let by_elim = determinant_by_elimination(VandermondeSystem::new(n).matrix());
        println!("n = {n}: det = {} (elimination {})", render(&vandermonde_det(n)), render(&by_elim));
    }
    for r in 1..=3 {
        for a in 0..=r {
            let w: Vec<String> = vandermonde_select(r, a).iter().map(render).collect();
            println!("select({r}, {a}) = [{}]", w.join(", "));
        }
    }
}
