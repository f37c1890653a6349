fn main() {
    std::process::exit(seifert_floer::cli::run_main());
}
