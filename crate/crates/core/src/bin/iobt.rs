use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use iobt_psygame::equilibrium::{solve_game, verify_equilibrium, SolveMode};
use iobt_psygame::experiment::{
    emit_results, fmt_num, geometry_manifest, load_spec, output_dir, replay_file, run_experiment,
    trace_series_csv, write_trace, OutputFormat,
};
use iobt_psygame::learning::run_learning;
use iobt_psygame::{Game, Result};

#[derive(Parser)]
#[command(
    name = "iobt",
    version,
    about = "Soldier/jammer psychological game solver"
)]
struct Cli {
    /// Output directory (defaults to the spec's output_path, then $IOBT_OUTPUT_DIR, then ./results).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the base game of a spec and write the per-state strategy table.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "pe")]
        mode: SolveMode,
    },
    /// Run Bayesian learning on the base game of a spec.
    Learn {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every sweep point, mode and seed of a spec.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Validate a spec and verify the NE and PE of its base game.
    Check {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Rerun a learning trace and confirm it reproduces exactly.
    Replay {
        #[arg(long)]
        trace: PathBuf,
    },
}

fn format_of(cli: &Option<String>, fallback: OutputFormat) -> OutputFormat {
    cli.as_deref()
        .and_then(|s| s.parse().ok())
        .unwrap_or(fallback)
}

fn write_table(
    dir: &Path,
    name: &str,
    format: OutputFormat,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = match format {
        OutputFormat::Csv => {
            let path = dir.join(format!("{name}.csv"));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
            path
        }
        OutputFormat::Json => {
            let path = dir.join(format!("{name}.json"));
            let list: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .map(|(h, v)| {
                            let value = v
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or_else(
                                    || serde_json::Value::String(v.clone()),
                                    serde_json::Value::Number,
                                );
                            (h.to_string(), value)
                        })
                        .collect()
                })
                .collect();
            std::fs::write(&path, serde_json::to_string_pretty(&list)? + "\n")?;
            path
        }
    };
    Ok(path)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { spec, mode } => {
            let spec = load_spec(&spec)?;
            let game = Game::new(spec.game.clone())?;
            let sol = solve_game(&game, mode)?;
            let rows: Vec<Vec<String>> = sol
                .stages
                .iter()
                .map(|(s, r)| {
                    let (vs, va) = sol.values[s];
                    let (ms, ma) = sol.material_values[s];
                    vec![
                        s.step.to_string(),
                        s.connections.to_string(),
                        s.attacks.to_string(),
                        fmt_num(sol.profile.soldier[s].p_first),
                        fmt_num(sol.profile.attacker[s].p_first),
                        format!("{:?}", r.equilibrium.kind),
                        fmt_num(vs),
                        fmt_num(va),
                        fmt_num(ms),
                        fmt_num(ma),
                    ]
                })
                .collect();
            let header = [
                "step",
                "connections",
                "attacks",
                "connect_prob",
                "jam_prob",
                "kind",
                "soldier_value",
                "attacker_value",
                "soldier_material",
                "attacker_material",
            ];
            let dir = output_dir(cli.out.as_deref(), Some(&spec));
            let name = format!("solve_{}", mode.to_string().to_lowercase());
            let path = write_table(
                &dir,
                &name,
                format_of(&cli.format, spec.format),
                &header,
                &rows,
            )?;
            let (c, j) = sol.root_mixes();
            let (ms, ma) = sol.root_material_values();
            println!(
                "{mode}: root connect {} jam {}; material soldier {} attacker {}",
                fmt_num(c),
                fmt_num(j),
                fmt_num(ms),
                fmt_num(ma)
            );
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Learn { spec, seed } => {
            let spec = load_spec(&spec)?;
            let game = Game::new(spec.game.clone())?;
            let cfg = spec.learning.clone().unwrap_or_default().config(seed);
            let trace = run_learning(&game, &cfg)?;
            let dir = output_dir(cli.out.as_deref(), Some(&spec));
            let trace_path = dir.join(format!("trace_seed{seed}.json"));
            write_trace(&trace, &trace_path)?;
            let series = match format_of(&cli.format, spec.format) {
                OutputFormat::Csv => {
                    let p = dir.join(format!("learn_seed{seed}.csv"));
                    std::fs::write(&p, trace_series_csv(&trace)?)?;
                    p
                }
                OutputFormat::Json => {
                    let p = dir.join(format!("learn_seed{seed}.json"));
                    std::fs::write(&p, serde_json::to_string_pretty(&trace.iterations)? + "\n")?;
                    p
                }
            };
            match trace.converged_at {
                Some(n) => println!("beliefs epsilon-like from iteration {n}"),
                None => println!(
                    "no convergence within {} iterations",
                    trace.iterations.len()
                ),
            }
            println!("wrote {} and {}", trace_path.display(), series.display());
            Ok(true)
        }
        Command::Sweep { spec } => {
            let spec = load_spec(&spec)?;
            let out = run_experiment(&spec)?;
            let dir = output_dir(cli.out.as_deref(), Some(&spec));
            let path = emit_results(&out.rows, &dir, format_of(&cli.format, spec.format))?;
            std::fs::write(dir.join("geometry.json"), geometry_manifest(&spec)?)?;
            for (index, seed, trace) in &out.traces {
                write_trace(
                    trace,
                    &dir.join("traces")
                        .join(format!("point{index}_seed{seed}.json")),
                )?;
            }
            let failed = out.rows.iter().filter(|r| r.error.is_some()).count();
            println!(
                "{} rows ({failed} failed), wrote {}",
                out.rows.len(),
                path.display()
            );
            Ok(true)
        }
        Command::Check { spec } => {
            let spec = load_spec(&spec)?;
            let game = Game::new(spec.game.clone())?;
            let mut ok = true;
            for mode in [SolveMode::Ne, SolveMode::Pe] {
                let sol = solve_game(&game, mode)?;
                let r = verify_equilibrium(&game, &sol, mode)?;
                let pass = r.passes(1e-6);
                ok &= pass;
                println!(
                    "{mode}: {} (indifference {:.3e}, beliefs {:.3e}, soldier gain {:.3e}, attacker gain {:.3e})",
                    if pass { "ok" } else { "FAILED" },
                    r.max_indifference_residual,
                    r.max_belief_residual,
                    r.max_soldier_gain,
                    r.max_attacker_gain
                );
            }
            println!(
                "{} devices, {} terminal histories, {} sweep points",
                game.device_count(),
                game.terminals().len(),
                spec.points()?.len()
            );
            Ok(ok)
        }
        Command::Replay { trace } => {
            let same = replay_file(&trace)?;
            println!("{}", if same { "identical" } else { "MISMATCH" });
            Ok(same)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
