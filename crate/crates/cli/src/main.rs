fn main() {
    eprintln!("ctgraph: not yet wired up");
    std::process::exit(2);
}
