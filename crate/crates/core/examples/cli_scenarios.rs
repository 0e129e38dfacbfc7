//! The bundled command-line scenarios, run through the library front end.

use interaction_laws::cli::scenarios::{write_scenarios, SCENARIOS};
use interaction_laws::cli::{execute, Cli};
use clap::Parser;

fn main() -> interaction_laws::Result<()> {
    let dir = std::env::temp_dir().join("ilaws-scenarios");
    write_scenarios(&dir)?;
    for name in SCENARIOS {
        let d = dir.join(name);
        let agent = if name == "exceptions" { "runner.json" } else { "machine.json" };
        let files = ["signature.json", "tree.json", agent].map(|f| d.join(f).display().to_string());
        let args = ["ilaws".to_string(), "run".to_string()].into_iter().chain(files);
        let out = execute(&Cli::parse_from(args));
        println!("{name}: {}", out.json["result"]);
    }
    Ok(())
}
