//! The prima-facie filter on hand-made data: temporal priority from ranks
//! and strict probability raising, with the exact conditional estimates.

use sbcn::learn::{empirical_conditional, empirical_marginal, prima_facie_edges, prima_facie_edges_with, TemporalPriority};
use sbcn::BinaryDataset;

fn main() -> sbcn::Result<()> {
    // `rain` has the earlier rank and `wet` tends to follow it. `wet` is
    // also more frequent, so ordering by marginal frequency reverses the arc.
    // `coin` is unrelated noise that still slips past the raw filter here.
    let rows: [[u8; 3]; 9] = [
        [1, 1, 0],
        [1, 1, 1],
        [1, 1, 0],
        [1, 0, 1],
        [0, 0, 0],
        [0, 0, 1],
        [0, 1, 1],
        [0, 0, 0],
        [0, 1, 0],
    ];
    let data = BinaryDataset::from_rows(
        vec!["rain".into(), "wet".into(), "coin".into()],
        vec![0, 1, 1],
        &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    )?;

    for v in 0..data.n() {
        println!("P({}) = {:.3}", data.names()[v], empirical_marginal(&data, v)?);
    }
    println!(
        "P(wet | rain) = {:.3}, P(wet | no rain) = {:.3}",
        empirical_conditional(&data, 1, 0, 1)?,
        empirical_conditional(&data, 1, 0, 0)?
    );

    let show = |label: &str, edges: sbcn::learn::EdgeSet| {
        let arcs: Vec<String> = edges.iter().map(|(v, u)| format!("{} -> {}", data.names()[v], data.names()[u])).collect();
        println!("{label}: {}", if arcs.is_empty() { "none".into() } else { arcs.join(", ") });
    };
    show("by rank", prima_facie_edges(&data));
    show("by marginal frequency", prima_facie_edges_with(&data, TemporalPriority::Marginal));
    Ok(())
}
