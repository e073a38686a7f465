fn main() {
    std::process::exit(mwstab::run(std::env::args_os()));
}
