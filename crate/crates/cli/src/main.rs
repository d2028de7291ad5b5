fn main() {
    std::process::exit(mbqc_vote_cli::run(std::env::args_os()));
}
