//! Floods one index with bad insertions and compares the resulting chain
//! length with `sqrt(2B)`.
//!
//! `cargo run --example flood -- 1000000`

use depth_charge::adversary::Adversary;
use depth_charge::sim::Sim;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget: u64 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(1_000_000);
    let mut sim = Sim::with_indices(1024, 0)?;
    let report = Adversary::new(budget).single_list_flood(&mut sim, 17, budget)?;
    let b = sim.table().bucket_len(17)?;

    let (key, insert) = sim.good_insert_at(17)?;
    let query = sim.good_query(&key)?;

    println!("budget            {budget}");
    println!("bad objects       {b} (sqrt(2B) = {:.1})", (2.0 * budget as f64).sqrt());
    println!("adversary spent   {}", report.spent);
    println!("good insert cost  {}", insert.rb_charged);
    println!("good query cost   {}", query.rb_charged);
    Ok(())
}
