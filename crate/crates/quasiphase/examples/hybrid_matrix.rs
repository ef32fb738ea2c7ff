//! Hybrid quasiprobability matrix of a cat state and its eigenvalue scan.
//!
//! `cargo run --release --example hybrid_matrix`

use quasiphase::analytic::KernelSpec;
use quasiphase::grid::GridAxes;
use quasiphase::hybrid::{hybrid_matrix, min_eig_scan, min_eigenvalue, OffDiagonal};
use quasiphase::C64;

fn main() -> quasiphase::Result<()> {
    let beta = C64::new(1.0, 0.0);
    let kernel = KernelSpec::sinc2(3.0)?;
    let m = hybrid_matrix(beta, &kernel, C64::new(0.0, 0.0));
    println!("matrix at the origin:\n{m:.5}");
    println!("smallest eigenvalue {:.6}", min_eigenvalue(&m));

    let axes = GridAxes::square(4.0, 101)?;
    for off in [OffDiagonal::Keep, OffDiagonal::Drop] {
        let scan = min_eig_scan(beta, &kernel, &axes, off);
        println!(
            "{off:?}: minimum {:.6} at {}",
            scan.min_eigenvalue,
            scan.argmin()
        );
    }
    Ok(())
}
