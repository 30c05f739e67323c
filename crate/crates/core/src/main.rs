fn main() {
    let exit = stellar_gfun::cli::run(std::env::args_os());
    std::process::exit(exit as i32);
}
