fn main() {
    if let Some(n) = std::env::var("SSET_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    std::process::exit(kanset::cli::main_with_args(std::env::args().collect()));
}
