//! Random-index queries with and without a flood, compared with the list
//! occupancy.
//!
//! `cargo run --example random_queries`

use depth_charge::adversary::Adversary;
use depth_charge::sim::Sim;
use depth_charge::workload::{QueryMode, QuerySpec, Workload, WorkloadSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = 256;
    for budget in [0u64, 1_000, 100_000] {
        let mut sim = Sim::with_indices(t, 0)?;
        if budget > 0 {
            Adversary::new(budget).single_list_flood(&mut sim, 0, budget)?;
        }
        let mut w = Workload::new(WorkloadSpec {
            good_inserts: t as u64,
            queries: QuerySpec {
                mode: QueryMode::UarIndex,
                count: 20_000,
            },
            deletes: 0,
            rng_seed: 1,
        });
        w.run(&mut sim)?;
        let (rb, n) = sim
            .ledger()
            .per_index
            .values()
            .fold((0, 0), |(rb, n), x| (rb + x.good_lookup_rb, n + x.good_lookups));
        println!(
            "B = {budget:>6}: mean query cost {:.3}, l_ave {:.2}, l_M {}, max list {}",
            rb as f64 / n as f64,
            sim.stats().ell_ave(),
            sim.stats().ell_max(),
            sim.stats().max_list_length()
        );
    }
    Ok(())
}
