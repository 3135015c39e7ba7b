//! Shows the depth-pump asymmetry: pushing a good object down by `d` costs
//! the adversary `d(d+3)/2`, while the client's next query costs `d + 1`.
//!
//! `cargo run --example depth_pump`

use depth_charge::adversary::Adversary;
use depth_charge::sim::Sim;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>12} {:>12}", "d", "adversary", "next query");
    for d in [1u64, 2, 4, 8, 16, 32, 64] {
        let mut sim = Sim::with_indices(1, d)?;
        let (good, _) = sim.good_insert_at(0)?;
        for _ in 0..64 {
            sim.bad_insert(0)?;
        }
        let pump = Adversary::new(u64::MAX).mtf_depth_pump(&mut sim, &good, d)?;
        let query = sim.good_query(&good)?;
        println!("{d:>4} {:>12} {:>12}", pump.spent, query.rb_charged);
    }
    Ok(())
}
