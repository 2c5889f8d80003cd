fn main() {
    std::process::exit(subgroup_decomp::cli::run(std::env::args_os()));
}
