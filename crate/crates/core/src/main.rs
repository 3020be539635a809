fn main() {
    std::process::exit(sdf_outage::cli::run());
}
