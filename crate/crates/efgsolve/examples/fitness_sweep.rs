//! Scores several solver variants across the built-in training suite at the
//! standard 1000-iteration horizon. The fitness of a variant is the negative
//! mean of its final exploitabilities, so closer to zero is better.

use efgsolve::bench::{fitness, RunConfig};

fn main() {
    let variants = ["cfr", "cfr_plus", "dcfr", "vad_cfr", "aod_cfr"];

    println!(
        "{:>10} {:>12} {:>12} {:>12} {:>12} {:>14}",
        "variant", "kuhn3", "leduc2", "goofspiel4", "liars_dice5", "fitness"
    );
    for variant in variants {
        let mut config = RunConfig::default();
        config.variant = variant.into();
        config.suite = "train".into();
        let report = fitness(&config).unwrap();
        let mut row = format!("{variant:>10}");
        for (_, value) in &report.per_game {
            row.push_str(&format!(" {value:>12.3e}"));
        }
        row.push_str(&format!(" {:>14.6e}", report.fitness));
        println!("{row}");
    }
}
