//! Total domination through open neighbourhood hypergraphs: the Heawood
//! bipartite complement, and the 3n/7 construction on random graphs with
//! minimum degree 4.
//!
//! cargo run --release --example domination -- 20 10

use transversal_lab::domination::{check_3n7, heawood_bipartite_complement, onh, pipeline_3n7, total_domination};
use transversal_lab::instances::random_min_degree_graph;
use transversal_lab::solver::Solver;

fn main() -> transversal_lab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n = args.next().flatten().unwrap_or(20);
    let count = args.next().flatten().unwrap_or(10) as u64;
    let solver = Solver::new();

    let g = heawood_bipartite_complement();
    let h = onh(&g)?;
    let (gt, set) = total_domination(&g, &solver)?;
    println!(
        "Heawood complement: n = {}, ONH has {} components, gamma_t = {gt}, set {:?}",
        g.n(),
        h.components().len(),
        set.vertices
    );
    println!("  {}", check_3n7(&g, &solver)?);

    for seed in 0..count {
        let g = random_min_degree_graph(n, 4, seed)?;
        let p = pipeline_3n7(&g, &solver)?;
        let (gt, _) = total_domination(&g, &solver)?;
        println!(
            "seed {seed}: n = {n}, m = {}, gamma_t = {gt}, construction {} <= {} (peeled {}, remainder n = {} m = {} tau = {})",
            g.edge_count(),
            p.transversal.len(),
            p.bound,
            p.peeled.len(),
            p.remainder_n,
            p.remainder_m,
            p.remainder_tau
        );
    }
    Ok(())
}
