use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vo_cbf::output::{summary_json, write_csv, write_svg};
use vo_cbf::safety_filter::check_sufficient_conditions;
use vo_cbf::scenario::{load_scenario, LoadedScenario};
use vo_cbf::simulator::run_scenario;

#[derive(Parser)]
#[command(
    name = "vo-cbf",
    version,
    about = "Velocity-obstacle CBF safety filter simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write trajectory.csv and summary.json.
    ///
    /// Exit codes: 0 target reached without violation, 1 I/O or load error,
    /// 2 separation violation or infeasible filter step, 3 target not reached.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Step size in seconds; overrides sim.dt (default 0.01).
        #[arg(long)]
        dt: Option<f64>,
        /// Accepted for compatibility; the CSV is always written.
        #[arg(long)]
        csv: bool,
        /// Also write trajectory.svg.
        #[arg(long)]
        svg: bool,
    },
    /// Check the sufficient conditions for safety against each obstacle.
    ///
    /// Exit 0 when the hard speed and acceleration conditions hold; the
    /// turn-rate bound is reported as a warning only.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn load(path: &Path) -> Result<LoadedScenario, String> {
    let loaded = load_scenario(path).map_err(|e| e.to_string())?;
    for w in &loaded.warnings {
        log::warn!("{w}");
        eprintln!("warning: {w}");
    }
    Ok(loaded)
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn simulate(scenario: &Path, out: &Path, dt: Option<f64>, svg: bool) -> Result<i32, String> {
    let mut config = load(scenario)?.config;
    if let Some(dt) = dt {
        config.sim.dt = dt;
        config.validate().map_err(|e| e.to_string())?;
    }
    std::fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let (log, summary) = run_scenario(&config).map_err(|e| e.to_string())?;
    write(
        &out.join("trajectory.csv"),
        &write_csv(&log, config.obstacles.len()),
    )?;
    write(&out.join("summary.json"), &summary_json(&summary))?;
    if svg {
        write(&out.join("trajectory.svg"), &write_svg(&log, &config))?;
    }
    println!(
        "reached={} t_final={} violations={} infeasible={}/{} dt={} t_max={}",
        summary.reached,
        summary.t_final,
        summary.violations,
        summary.infeasible_accel,
        summary.infeasible_turn,
        summary.dt,
        summary.t_max
    );
    for (i, (d, dm)) in summary.min_distance.iter().zip(&summary.d_min).enumerate() {
        println!("obstacle {i}: min distance {d:.4} (d_min {dm})");
    }
    Ok(summary.exit_code())
}

fn validate(scenario: &Path) -> Result<i32, String> {
    let config = load(scenario)?.config;
    let params = config.safety_params();
    let report = check_sufficient_conditions(&params, &config.obstacle_bounds());
    for (i, c) in report.obstacles.iter().enumerate() {
        println!(
            "obstacle {i}: speed {} accel {} {}",
            if c.speed_ok { "ok" } else { "FAIL" },
            if c.accel_ok { "ok" } else { "FAIL" },
            if c.hard_pass() { "pass" } else { "fail" }
        );
        if !c.turn_rate_ok {
            println!(
                "warning: obstacle {i}: r_max = {} below conservative bound {:.4}",
                params.r_max, c.required_r_max
            );
        }
    }
    println!(
        "{}",
        if report.hard_pass() {
            "hard conditions: pass"
        } else {
            "hard conditions: fail"
        }
    );
    Ok(if report.hard_pass() { 0 } else { 2 })
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            scenario,
            out,
            dt,
            csv: _,
            svg,
        } => simulate(&scenario, &out, dt, svg),
        Command::Validate { scenario } => validate(&scenario),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
