//! Generates every bad hypergraph up to a given order, recognises each one
//! again from scratch and runs the thirteen-part verifier on it.
//!
//! cargo run --release --example family_b -- 10

use std::time::Instant;

use transversal_lab::family_b::{generate_all_b, verify_lemma5, Recognizer};
use transversal_lab::Solver;

fn main() -> transversal_lab::Result<()> {
    let max_n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let start = Instant::now();
    let members = generate_all_b(max_n)?;
    println!("generated {} members with n <= {max_n} in {:?}", members.len(), start.elapsed());
    for n in 2..=max_n {
        let count = members.iter().filter(|m| m.hypergraph.n() == n).count();
        if count > 0 {
            println!("  n = {n:2}: {count}");
        }
    }

    let recognizer = Recognizer::new();
    let solver = Solver::new();
    let start = Instant::now();
    let mut failures = 0;
    for m in &members {
        let cert = recognizer.recognize(&m.hypergraph)?.expect("generated members are recognised");
        assert!(cert.certifies(&m.hypergraph));
        let report = verify_lemma5(m, &solver)?;
        if !report.all_pass() {
            failures += 1;
            println!("FAILED n = {} [{}]: {:?}", m.hypergraph.n(), m.certificate.kinds(), report.failures());
        }
    }
    println!(
        "recognised and verified {} members in {:?}; {failures} failures",
        members.len(),
        start.elapsed()
    );
    Ok(())
}
