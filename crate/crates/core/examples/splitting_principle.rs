use cowaist::graded::Family;
use cowaist::splitting::{ahat_series, chern_from_ch, FormalBundle};

fn main() {
    let n = 3;
    let e = FormalBundle::generic(2);
    let f = FormalBundle::generic_in(Family::SecondRoot, 1);
    println!("ch(E)       = {}", e.chern_character(n));
    println!("c(E)        = {}", e.total_chern_class(n));
    println!("ch(E ⊗ F)   = {}", e.tensor(&f).chern_character(n));
    println!("ch(Λ²E)     = {}", e.wedge(2).chern_character(n));
    println!("ch(E*)      = {}", e.dual().chern_character(n));

    let parts: Vec<_> = (0..=n).map(|w| e.ch_component(w).truncate_to(n)).collect();
    for (i, c) in chern_from_ch(&parts).iter().enumerate() {
        println!("c_{i} from ch = {c}");
    }
    println!("Â = {}", ahat_series(3, 6));
}
