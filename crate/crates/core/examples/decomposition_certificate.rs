//! Writes a Chern monomial as a rational combination of ch_K of functor
//! images, verifies it on generic bundles and prints the certificate.
//!
//!     cargo run --example decomposition_certificate -- 2,1 3

use cowaist::decompose::{build_library, certify};
use cowaist::graded::Partition;

fn main() -> cowaist::Result<()> {
    let mut args = std::env::args().skip(1);
    let partition: Partition = args.next().as_deref().unwrap_or("2,1").parse()?;
    let n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(partition.weight());
    let library = build_library(n, partition.weight() as usize)?;
    println!("library: {} functors in {} levels", library.functors().len(), library.levels());

    let ranks: Vec<u32> = (1..=n.max(1)).collect();
    let (cert, report) = certify(&partition, &library, &ranks)?;
    println!("c_{{{partition}}} = Σ λ ch_{}(J(E)) with {} terms", cert.weight(), cert.terms.len());
    for t in cert.terms.iter().take(8) {
        println!("  {:>8} · {}", cowaist::rational::render(&t.lambda), t.functor);
    }
    if cert.terms.len() > 8 {
        println!("  …");
    }
    for c in &report.checks {
        println!("rank {}: residual {}", c.rank, c.residual);
    }
    println!("{}", cert.to_json());
    Ok(())
}
