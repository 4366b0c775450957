fn main() {
    let entries = stdist::catalog::builtin().expect("catalog loads");
    let results = stdist::checks::run_all(&entries);
    for r in &results {
        println!("{r}");
    }
    if results.iter().any(|r| !r.passed) {
        std::process::exit(1);
    }
}
