//! Print a builtin model in the JSON model-file format.
//!
//! Usage: cargo run --example export_model -- <builtin> [k=v ...]

use std::collections::BTreeMap;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| {
        eprintln!("usage: export_model <jensen|chavel-ziller|su2|round-sphere> [k=v ...]");
        std::process::exit(2);
    });
    let mut params = BTreeMap::new();
    for entry in args {
        match reductive_geom::io::parse_param_assignment(&entry) {
            Ok((k, v)) => {
                params.insert(k, v);
            }
            Err(e) => {
                eprintln!("error: {e}");
                std::process::exit(2);
            }
        }
    }
    match reductive_geom::io::builtin_model(&name, &params) {
        Ok(model) => println!("{}", reductive_geom::io::save_model_string(&model)),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
