//! Reproduces the oscillatory-regime temporal error table.
//!
//! cargo run --release --example table_one [M]
use std::time::Instant;

use nlde_core::harness::{oscillatory_table, StudySetup, TABLE_ONE_EPSILONS, TABLE_ONE_KAPPAS};
use nlde_core::io::write_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut setup = StudySetup::table_one();
    if let Some(m) = std::env::args().nth(1) {
        setup.modes = m.parse()?;
        setup.reference_modes = setup.modes;
    }
    let start = Instant::now();
    let table = oscillatory_table(&setup, &TABLE_ONE_EPSILONS, &TABLE_ONE_KAPPAS)?;
    write_table(&table, &mut std::io::stdout())?;
    eprintln!("elapsed: {:.1?}", start.elapsed());
    Ok(())
}
