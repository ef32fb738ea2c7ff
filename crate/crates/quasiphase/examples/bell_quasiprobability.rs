//! Quasiprobability tables over Pauli-eigenstate products.
//!
//! `cargo run --example bell_quasiprobability`

use quasiphase::entanglement::{
    ent_quasiprob, negativity_report, PauliEigenstate, SolveMode, TwoQubitState,
};

fn print_table(name: &str, state: &TwoQubitState) -> quasiphase::Result<()> {
    let table = ent_quasiprob(state, SolveMode::NnlsFirst);
    println!(
        "{name}: method {:?}, residual {:.1e}",
        table.method, table.residual
    );
    print!("      ");
    for b in PauliEigenstate::ALL {
        print!("{b:>8}");
    }
    println!();
    for a in PauliEigenstate::ALL {
        print!("{a:>6}");
        for b in PauliEigenstate::ALL {
            print!("{:8.4}", table.get(a, b));
        }
        println!();
    }
    let report = negativity_report(&table)?;
    println!("total negativity {:.4}\n", report.total_negativity);
    Ok(())
}

fn main() -> quasiphase::Result<()> {
    print_table("singlet", &TwoQubitState::singlet())?;
    print_table("Werner p = 0.2", &TwoQubitState::werner(0.2)?)?;
    print_table("Werner p = 0.6", &TwoQubitState::werner(0.6)?)?;
    Ok(())
}
