//! Evaluates the cluster conditions for the bundled five- and seven-node
//! networks, including the corollary form for a perturbed topology.

use adaptive_kuramoto::conditions::c_tilde_out;
use adaptive_kuramoto::presets::{five_node, seven_node_original, seven_node_removal};
use adaptive_kuramoto::{check_conditions, check_corollary, ConditionReport};

fn show(title: &str, r: &ConditionReport) {
    let c = &r.cardinalities;
    println!("{title}");
    println!(
        "  A1 {}  A2 {}  A3 {}  overall {}",
        r.a1_holds, r.a2_holds, r.a3_holds, r.overall
    );
    println!("  c_out {}  c_max {}  c_sr {:?}", c.c_out, c.c_max, c.c_sr);
    println!("  lhs {:.6}  ratio {:.6}", r.lhs_a3, r.ratio_a3);
    for v in &c.violations {
        println!(
            "  cluster {} <- {}: per-node counts {:?}",
            v.cluster + 1,
            v.source_cluster + 1,
            v.counts
                .iter()
                .map(|(i, n)| (i + 1, *n))
                .collect::<Vec<_>>()
        );
    }
}

fn main() -> adaptive_kuramoto::Result<()> {
    let p = five_node();
    show(
        "five nodes",
        &check_conditions(&p.network, &p.partition, &p.plasticity)?,
    );

    let p = seven_node_original();
    show(
        "seven nodes",
        &check_conditions(&p.network, &p.partition, &p.plasticity)?,
    );

    let removal = seven_node_removal();
    println!("perturbation:\n{removal}");
    println!("c~_out = {}", c_tilde_out(&p.partition, &removal));
    show(
        "seven nodes, link 1 -> 7 removed",
        &check_corollary(&p.network, &removal, &p.partition, &p.plasticity)?,
    );
    Ok(())
}
