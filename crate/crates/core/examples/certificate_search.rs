//! Search sphere 4-tuples for connected sums that cannot be Brieskorn.
//!
//! ```text
//! cargo run --release --example certificate_search -- 12 certs.jsonl
//! ```

use std::path::PathBuf;

use brieskorn::search::{certify_non_brieskorn_pairs, distinctness_classes, enumerate_sphere_tuples, load, persist};
use brieskorn::Limits;

fn main() -> brieskorn::Result<()> {
    let max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let path = std::env::args().nth(2).map(PathBuf::from);
    let limits = Limits::default();

    let spheres = enumerate_sphere_tuples(max, 4, &limits)?;
    let certs = certify_non_brieskorn_pairs(&spheres, &limits)?;
    let classes = distinctness_classes(&certs);
    println!("{} sphere 4-tuples with entries <= {max}", spheres.len());
    println!("{} certificates in {} chi_m classes", certs.len(), classes.len());
    for c in certs.iter().take(5) {
        println!("  {} # {} -> {}", c.tuple_a, c.tuple_b, c.chi_sum);
    }
    if let Some(path) = path {
        persist(&certs, &path)?;
        assert_eq!(load(&path)?, certs);
        println!("wrote {}", path.display());
    }
    Ok(())
}
