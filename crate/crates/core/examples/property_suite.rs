//! Run the cross-module property checks and print one line per check.

use manifold_interior::harness::run_property_suite;

fn main() -> manifold_interior::Result<()> {
    let report = run_property_suite(1)?;
    for c in &report.checks {
        let tag = if c.pass { "ok  " } else { "FAIL" };
        println!("{tag} {:<20} {}/{} worst margin {:.3e}  {}", c.name, c.successes, c.trials, c.worst_margin, c.detail);
    }
    Ok(())
}
