use presburger::cli;

fn main() {
    let (report, json) = cli::dispatch(std::env::args_os());
    cli::emit(&report, json);
    std::process::exit(report.exit_code());
}
