//! Runs a builtin scenario (or a scenario file) and prints its CSV summary.
//!
//! `cargo run --example run_scenario -- mtf-pump-repeat 3`

use depth_charge::scenario::{self, Format, RunOptions, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "single-list-flood".into());
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let sc = Scenario::load(&name)?;
    let out = scenario::run(&sc, &RunOptions { seed, ..Default::default() })?;
    print!("{}", scenario::report(&out.summary, Format::Csv));
    for c in &out.summary.checks {
        eprintln!("{:<22} {}", c.name.as_str(), if c.satisfied { "ok" } else { "FAILED" });
    }
    Ok(())
}
