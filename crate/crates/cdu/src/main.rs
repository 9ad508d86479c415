fn main() {
    std::process::exit(cdu::harness::cli::run());
}
