//! Seeded generators: regular, bounded degree, linear and unrestricted
//! uniform hypergraphs, written in `.hg` format together with a summary.
//!
//! cargo run --release --example generators -- 12 7

use transversal_lab::canon::canonical_form;
use transversal_lab::io::write_hg;
use transversal_lab::solver::tau;
use transversal_lab::{random_hypergraph, GeneratorConfig, Mode};

fn main() -> transversal_lab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().ok());
    let n = args.next().flatten().unwrap_or(12) as usize;
    let seed = args.next().flatten().unwrap_or(7);
    let configs = [
        ("3-regular", GeneratorConfig::new(4, n, Mode::Regular(3), seed)),
        ("max degree 3", GeneratorConfig::new(4, n, Mode::MaxDegree(3), seed)),
        ("linear", GeneratorConfig::new(4, n, Mode::Linear, seed)),
        ("any, 10 edges", GeneratorConfig::new(4, n, Mode::Any, seed).with_edges(10)),
    ];
    for (label, cfg) in configs {
        let h = random_hypergraph(&cfg)?;
        let again = random_hypergraph(&cfg)?;
        assert_eq!(canonical_form(&h), canonical_form(&again));
        println!(
            "# {label}: n = {}, m = {}, Δ = {}, linear = {}, tau = {}",
            h.n(),
            h.m(),
            h.max_degree(),
            h.is_linear(),
            tau(&h)?
        );
        print!("{}", write_hg(&h, false));
    }
    Ok(())
}
