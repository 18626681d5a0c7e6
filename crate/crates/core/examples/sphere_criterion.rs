//! Decide which exponent tuples give topological spheres.
//!
//! ```text
//! cargo run --example sphere_criterion -- 2 2 2 3 5
//! ```

use brieskorn::topology::{build_graph, evaluate_criterion, ExponentTuple};

fn main() -> brieskorn::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let tuples = if args.is_empty() {
        vec![vec![4, 5, 9, 19], vec![2, 2, 2, 2], vec![2, 2, 2, 3, 5], vec![2, 4, 6, 12], vec![2, 3, 5]]
    } else {
        vec![args]
    };
    for entries in tuples {
        let a = ExponentTuple::from_u64s(&entries)?;
        let graph = build_graph(&a);
        let verdict = evaluate_criterion(&a)?;
        println!(
            "{:<16} dim {:>2}  {:<34} components {:?}",
            a.to_string(),
            a.dimension(),
            verdict.kind.as_str(),
            graph.components
        );
    }
    Ok(())
}
