//! Run every registered seed and print a one-line summary per run: handy
//! for eyeballing convergence behavior and node growth.

use hopflift::config::RunConfig;
use hopflift::iterate::run;
use hopflift::seeds;

fn main() {
    for seed in seeds::registry() {
        let mut cfg = RunConfig::default();
        seed.apply_params(&mut cfg);
        match run(&seed.h0_field(), seed.system, &cfg) {
            Ok(trace) => println!(
                "{:<14} {:?} after {} steps, node counts {:?}",
                seed.name,
                trace.status,
                trace.iterates.len() - 1,
                trace.node_counts
            ),
            Err(e) => println!("{:<14} error: {e}", seed.name),
        }
    }
}
