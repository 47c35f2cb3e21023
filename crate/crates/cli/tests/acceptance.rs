//! Release acceptance: the full ten-criterion campaign must pass, printing
//! one line per criterion (visible with `--nocapture`, and always shown on
//! failure).

#[test]
fn acceptance_campaign() {
    let results = weyl_certify::acceptance::run(None);
    assert_eq!(results.len(), 10, "the campaign defines ten criteria");
    let mut failed = Vec::new();
    for r in &results {
        println!(
            "{} {:>2}  {:<44} [{:>6} ms]  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.index,
            r.name,
            r.elapsed_ms,
            r.detail
        );
        if !r.pass {
            failed.push(format!("criterion {} ({}): {}", r.index, r.name, r.detail));
        }
    }
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
