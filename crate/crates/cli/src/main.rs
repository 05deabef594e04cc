fn main() {
    std::process::exit(captionprobe_cli::run(std::env::args_os()));
}
