use clap::Parser;

fn main() {
    // Die quietly when stdout closes early (`bmgroups … | head`), like
    // other line-oriented tools, instead of panicking on broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(bmgroups::cli::run(bmgroups::cli::Cli::parse()));
}
