//! Erdos-Renyi and static-model scale-free networks, their degree
//! statistics, and the edge-list text format.
//!
//! cargo run --example generate_networks

use ectrl::netgen::{generate, GraphSpec, Topology};

fn main() -> ectrl::Result<()> {
    for spec in [
        GraphSpec::er(1000, 6.0, 1),
        GraphSpec::er(1000, 6.0, 1).directed(true),
        GraphSpec::sf(1000, 6.0, 3.0, 1),
        GraphSpec::sf(1000, 6.0, 2.5, 1),
    ] {
        let t = generate(&spec)?;
        let s = t.degree_stats();
        println!(
            "{:?} directed={} gamma={}: {} edges, mean degree {:.2}, max {}, isolated {}",
            spec.model,
            spec.directed,
            spec.gamma,
            t.edges.len(),
            s.mean,
            s.max,
            s.isolated
        );
    }

    let t = generate(&GraphSpec::er(6, 2.0, 7))?;
    let text = t.to_edge_list();
    print!("\nedge list of a small ER graph:\n{text}");
    assert_eq!(Topology::parse_edge_list(&text)?, t);
    Ok(())
}
