use fuslim::experiments::{run, ExpOptions};
fn main() {
    let opts = ExpOptions::default();
    let t = std::time::Instant::now();
    let rep = run("SATURATION", &opts).unwrap();
    eprintln!("SATURATION: {} ({:?})", rep.passed(), t.elapsed());
}
