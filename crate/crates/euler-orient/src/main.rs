fn main() {
    std::process::exit(euler_orient::cli::run());
}
