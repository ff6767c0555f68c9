//! Certifies the transversal bounds on the stored extremal instances and on
//! a batch of seeded random 3-regular 4-uniform hypergraphs.
//!
//! cargo run --release --example bounds -- 40 20

use std::time::Instant;

use transversal_lab::bounds::{certify, TheoremId};
use transversal_lab::instances::{h10, h2, h4, h6, h8};
use transversal_lab::{random_hypergraph, GeneratorConfig, Mode};

fn main() -> transversal_lab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(24);
    let count = args.next().flatten().unwrap_or(20);

    let show = |name: &str, h: &transversal_lab::Hypergraph, t: TheoremId| -> transversal_lab::Result<()> {
        println!("{name:>8}  {}", certify(h, t)?);
        Ok(())
    };
    show("H2", &h2(), TheoremId::T1Phi)?;
    show("H8", &h8(), TheoremId::T1Phi)?;
    show("H8", &h8(), TheoremId::T2QuarterSixth)?;
    show("H8", &h8(), TheoremId::T3ThreeEighths)?;
    show("H10", &h10(), TheoremId::T2QuarterSixth)?;
    show("H4+H6", &h4().disjoint_union(&h6()), TheoremId::Cm6Tau)?;
    show("H10", &h10(), TheoremId::Ty21)?;

    let start = Instant::now();
    let mut worst = (0u64, 1u64);
    for seed in 0..count as u64 {
        let h = random_hypergraph(&GeneratorConfig::new(4, n, Mode::Regular(3), seed))?;
        let r = certify(&h, TheoremId::T3ThreeEighths)?;
        assert!(r.holds, "seed {seed}: {r}");
        if r.lhs * worst.1 > worst.0 * r.rhs {
            worst = (r.lhs, r.rhs);
        }
    }
    println!(
        "{count} random 3-regular 4-uniform instances with n = {n}: all satisfy 8τ ≤ 3n, closest {}/{} ({:?})",
        worst.0,
        worst.1,
        start.elapsed()
    );
    Ok(())
}
