//! Drive the command-line front end in-process with a throwaway config.

use std::io;

fn main() {
    let dir = std::env::temp_dir().join("noptica_cli_example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let config = dir.join("run.json");
    let body = format!(
        r#"{{
  "medium": {{"number_density_m3": 2.7e25, "scattering_length_m": 6e-15,
              "hard_sphere_diameter_m": 3e-10, "thickness_m": 0.01}},
  "beam": {{"wavelength_angstrom": 1.8}},
  "output": {{"dir": "{}"}}
}}"#,
        dir.join("out").display()
    );
    std::fs::write(&config, body).expect("write config");
    let cfg = config.to_str().unwrap();

    for args in [
        vec!["refract"],
        vec!["sq", "--q-max", "5e10", "--points", "5"],
        vec!["diffuse", "--phi-max", "3.14159", "--points", "4"],
    ] {
        let mut argv = vec!["noptica"];
        argv.extend(&args);
        argv.extend(["--config", cfg]);
        let code = noptica::cli::run(argv, &mut io::stdout(), &mut io::stderr());
        println!("{:?} -> exit {code}", args[0]);
    }
    println!("outputs in {}", dir.join("out").display());
}
