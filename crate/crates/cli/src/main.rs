fn main() {
    std::process::exit(pwkrein::run(std::env::args_os()));
}
