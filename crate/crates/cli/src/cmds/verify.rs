use gsv_interp::verify::run_verification;

use crate::failure::Failure;

/// Prints the self-check table and fails (exit 1) if any row fails.
pub fn verify() -> Result<(), Failure> {
    let rows = run_verification();
    let name_width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for row in &rows {
        let status = if row.passed { "  ok" } else { "FAIL" };
        println!("{status}  {:<name_width$}  {}", row.name, row.detail);
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        println!("all {} checks passed", rows.len());
        Ok(())
    } else {
        Err(Failure::runtime(format!(
            "{failed} of {} checks failed",
            rows.len()
        )))
    }
}
