//! Searches random linear hypergraphs for counterexamples to the two open
//! bounds on τ and reports tight cases and the worst ratio seen.
//!
//! cargo run --release --example scan -- 11 2000

use transversal_lab::instances::{scan_conjectures, Conjecture, GeneratorConfig, Mode};
use transversal_lab::solver::Solver;

fn main() -> transversal_lab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().ok());
    let n = args.next().flatten().unwrap_or(11) as usize;
    let seeds = args.next().flatten().unwrap_or(2000);
    let cfg = GeneratorConfig::new(4, n, Mode::Linear, 0);
    for which in [Conjecture::C2, Conjecture::C3] {
        let r = scan_conjectures(&cfg, which, 0..seeds, &Solver::new())?;
        println!("{which}: {}", r.statement);
        println!(
            "  n = {n}, {} instances, {} violations, {} tight, max ratio {}/{}",
            r.instances,
            r.violations.len(),
            r.tight_count,
            r.max_ratio[0],
            r.max_ratio[1]
        );
        for hit in &r.reference {
            println!("  reference {}: lhs {} rhs {}", hit.name.as_deref().unwrap_or("?"), hit.lhs, hit.rhs);
        }
    }
    Ok(())
}
