//! `cargo run --release --example census -- 8 5 [--no-filter] [--dump]`

use std::time::Instant;

use uom_core::{enumerate_uoms, EnumerationOptions};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let size: Vec<usize> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let (m, n) = match size[..] {
        [m, n] => (m, n),
        _ => {
            eprintln!("usage: census M N [--no-filter] [--dump]");
            std::process::exit(2);
        }
    };
    let opts = EnumerationOptions {
        use_filter: !args.iter().any(|a| a == "--no-filter"),
        ..Default::default()
    };
    let t = Instant::now();
    let r = enumerate_uoms(m, n, &opts).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    if args.iter().any(|a| a == "--dump") {
        for u in &r.classes {
            println!("{u}");
        }
    }
    println!("{m}x{n}: {} classes, {:?}, {:?}, {:.1?}", r.classes.len(), r.status, r.stats, t.elapsed());
}
