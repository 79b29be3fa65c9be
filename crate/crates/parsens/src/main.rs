use clap::Parser;

fn main() {
    // die quietly when piped into head & co. instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = parsens::cli::Cli::parse();
    std::process::exit(parsens::cli::run(&cli));
}
