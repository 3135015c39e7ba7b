//! Runs a pumped list with the wallet oracle attached and prints each good
//! object's wallet next to its depth after every round.
//!
//! `cargo run --example wallet_audit`

use depth_charge::adversary::Adversary;
use depth_charge::sim::Sim;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sim = Sim::with_indices(1, 3)?;
    let mut good = Vec::new();
    for _ in 0..3 {
        good.push(sim.good_insert_at(0)?.0);
        for _ in 0..4 {
            sim.bad_insert(0)?;
        }
    }
    let mut adversary = Adversary::new(u64::MAX);
    for round in 0..6 {
        let target = &good[round % good.len()];
        adversary.mtf_depth_pump(&mut sim, target, 3)?;
        sim.good_query(target)?;
        let oracle = sim.oracle().expect("oracle on by default");
        let cells: Vec<String> = good
            .iter()
            .enumerate()
            .map(|(n, k)| format!("g{n}: ${} @ {}", oracle.wallet(k).unwrap_or(0), sim.depth_of(k).unwrap_or(0)))
            .collect();
        println!("round {}  {}", round + 1, cells.join("   "));
    }
    let oracle = sim.oracle().expect("oracle on by default");
    println!(
        "deposits {}, client spend {}, violations {}",
        oracle.deposits(),
        sim.ledger().algorithm_rb,
        oracle.violations().len()
    );
    Ok(())
}
