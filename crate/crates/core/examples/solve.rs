//! Exact transversal number of random hypergraphs: branch and bound against
//! the exhaustive oracle, with constraints and the canonical witness.
//!
//! cargo run --release --example solve -- 18 30

use std::time::Instant;

use transversal_lab::instances::{h8, random_mixed};
use transversal_lab::solver::{tau_bruteforce, Constraints, Solver};

fn main() -> transversal_lab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(18);
    let m = args.next().flatten().unwrap_or(30);

    let h = h8();
    let solver = Solver::new();
    let r = solver.solve(&h)?;
    println!("H8: tau = {}, witness {:?}", r.tau, r.witness.vertices);
    let forced = solver.solve_constrained(&h, &Constraints::include([7]))?;
    println!("H8 with vertex 7 forced: tau = {}, witness {:?}", forced.tau, forced.witness.vertices);
    let lex = Solver::new().canonical(true).solve(&h)?;
    println!("H8 lexicographically smallest witness: {:?}", lex.witness.vertices);

    for seed in 0..5 {
        let h = random_mixed(n, m, 2..=5, seed)?;
        let t = Instant::now();
        let fast = solver.solve(&h)?;
        let fast_ms = t.elapsed().as_secs_f64() * 1e3;
        let t = Instant::now();
        let slow = tau_bruteforce(&h)?;
        let slow_ms = t.elapsed().as_secs_f64() * 1e3;
        assert_eq!(fast.tau, slow.tau);
        println!(
            "seed {seed}: n = {n}, m = {}, tau = {}, bnb {fast_ms:.2} ms ({} nodes), brute {slow_ms:.2} ms",
            h.m(),
            fast.tau,
            fast.stats.nodes
        );
    }
    Ok(())
}
