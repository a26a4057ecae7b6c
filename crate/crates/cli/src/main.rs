fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out = genstable_cli::run(&args);
    print!("{}", out.text);
    std::process::exit(out.status);
}
