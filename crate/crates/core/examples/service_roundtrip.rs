//! Starts an endpoint on a local port, then inserts and queries a few keys
//! through the wire protocol, solving proof-of-work challenges client-side.
//!
//! `cargo run --release --example service_roundtrip`

use depth_charge::rb::Backend;
use depth_charge::service::{Client, EndpointConfig, QuoteReply, Server};
use depth_charge::table::{ObjectKey, Operation, Request, TableConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let server = Server::spawn(TableConfig::new(8, 0), Backend::pow(), EndpointConfig::new("127.0.0.1:0"))?;
    println!("endpoint on {}", server.local_addr());
    let mut client = Client::connect(server.local_addr())?;

    let keys: Vec<ObjectKey> = (0..12).map(|n| ObjectKey::from(format!("user-{n}").as_str())).collect();
    for op in [Operation::Insert, Operation::Query] {
        for key in &keys {
            let req = Request::new(op, key.clone());
            let result = match client.quote(&req)? {
                QuoteReply::Done(r) => r,
                QuoteReply::Challenge(ch) => {
                    let solution = client.solve(&ch);
                    client.settle(&solution)?
                }
            };
            println!("{:<6} {key:<8} {:?} cost {}", op.as_str(), result.status, result.rb_charged);
        }
    }
    let meter = client.meter();
    println!("client hashed {} times for {} units", meter.hash_evaluations, meter.rb_units);
    server.shutdown();
    Ok(())
}
