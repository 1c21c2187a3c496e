use cowaist::geometry::{acw_lower_bound, hopf_chern_number, hopf_curvature_norm, SphereLineBundle};
use cowaist::rational::{frac, int, render};

fn main() -> cowaist::Result<()> {
    for r in [int(1), int(2), int(3), frac(7, 2)] {
        let b = SphereLineBundle::tautological(r.clone())?;
        let norm = hopf_curvature_norm(&b);
        let w = acw_lower_bound(&b, &int(2))?;
        println!(
            "R = {:>3}: ‖R^H‖ = {:>5}, c₁ = {}, acw ≥ {:>5}, product pairing {}",
            render(&r),
            render(&norm.value),
            hopf_chern_number(&b),
            render(&w.bound.value),
            render(&w.product_pairing)
        );
    }
    Ok(())
}
