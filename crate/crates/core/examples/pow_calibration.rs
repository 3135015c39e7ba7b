//! Measures hash evaluations per unit of hardness for the proof-of-work
//! backend.
//!
//! `cargo run --release --example pow_calibration`

use depth_charge::rb::{Backend, ChallengeStore, RequestBinding, WorkMeter};
use depth_charge::table::{ObjectKey, Operation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let backend = Backend::pow();
    let store = ChallengeStore::new(backend, 42);
    println!("expected per unit: {}", backend.expected_unit_work());
    for x in [1u64, 4, 16, 64] {
        let mut meter = WorkMeter::default();
        let trials = 200;
        for n in 0..trials {
            let binding = RequestBinding {
                op: Operation::Insert,
                key: ObjectKey::from("calibration"),
                index: n,
            };
            let challenge = store.issue(x, binding)?;
            let solution = backend.solve(&challenge, &mut meter);
            store.verify(&solution)?;
        }
        let per_challenge = meter.hash_evaluations as f64 / trials as f64;
        println!("x = {x:>2}: {per_challenge:>8.1} evaluations, {:>6.1} per unit", per_challenge / x as f64);
    }
    Ok(())
}
