//! Samples ‖A⊗I + I⊗B‖ / (‖A‖ + ‖B‖) for random anti-Hermitian A, B.

use cowaist::geometry::kron_norm_check;

fn main() -> cowaist::Result<()> {
    for d in 1..=8 {
        let s = kron_norm_check(d, 9 - d, 100, 42)?;
        println!(
            "{}x{}: max ratio {:.12}, max ‖A⊗I‖ defect {:.1e}",
            s.d1, s.d2, s.max_ratio, s.max_identity_defect
        );
    }
    Ok(())
}
