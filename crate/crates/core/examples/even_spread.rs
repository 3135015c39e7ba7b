//! Spreads `b` bad objects evenly over `s` indices and compares the spend
//! with the `b^2 / (8s)` lower bound and the cost of later good inserts.
//!
//! `cargo run --example even_spread -- 16 256`

use depth_charge::accounting::{evaluate, BoundParams, CheckName};
use depth_charge::adversary::Adversary;
use depth_charge::sim::Sim;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>());
    let s = args.next().transpose()?.unwrap_or(16);
    let b = args.next().transpose()?.unwrap_or(256);

    let mut sim = Sim::with_indices(256, 1)?;
    let indices: Vec<usize> = (0..s as usize).collect();
    let report = Adversary::new(u64::MAX).even_spread(&mut sim, &indices, b)?;
    for &i in &indices {
        sim.good_insert_at(i)?;
    }

    println!("s = {s}, b = {b}, adversary spent {}", report.spent);
    for name in [CheckName::AdversaryLowerBound, CheckName::TargetedInsertUpper] {
        let c = evaluate(name, sim.ledger(), sim.stats(), &BoundParams::default()).expect("applicable");
        println!(
            "{:<22} measured {:>8} {} {:>8.1}  {}",
            name.as_str(),
            c.measured,
            c.relation.as_str(),
            c.bound,
            if c.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
