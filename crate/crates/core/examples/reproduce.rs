//! Run the full reproduction suite from library code.
//!
//! ```text
//! cargo run --release --example reproduce
//! ```

fn main() {
    let suite = brieskorn::reproduce::run(&brieskorn::Limits::default());
    for item in &suite.items {
        println!("{} [{}] {}", if item.passed { "PASS" } else { "FAIL" }, item.id, item.title);
    }
    std::process::exit(if suite.passed() { 0 } else { 1 });
}
