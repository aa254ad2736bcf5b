//! Command-line front end: load a TPTP clause problem, search for a closed
//! connection tableau, and report the result as an SZS status line.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use connlearn::constraints::dump_constraint;
use connlearn::search::{prove, Mode, Outcome, SearchOptions};
use connlearn::tptp::{parse_problem, StartPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Learning,
    Chronological,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    ConjectureFirst,
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "prove",
    version,
    about = "Connection-tableau prover with constraint learning"
)]
pub struct CliConfig {
    /// TPTP problem file in clause normal form.
    pub problem: PathBuf,
    /// Directory searched first when resolving include directives.
    #[arg(long, value_name = "DIR")]
    pub include_dir: Option<PathBuf>,
    /// Highest depth limit to try.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: Option<u32>,
    /// Time budget in seconds.
    #[arg(long, value_name = "SECS", default_value_t = 10.0, value_parser = positive_seconds)]
    pub time: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Learning)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = StartArg::ConjectureFirst)]
    pub start: StartArg,
    /// Print the proof when one is found.
    #[arg(long)]
    pub proof: bool,
    /// Print one JSON object of search statistics per depth level.
    #[arg(long)]
    pub stats: bool,
    /// Print every learned constraint.
    #[arg(long)]
    pub dump_constraints: bool,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

impl CliConfig {
    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            max_depth: self.depth.map(|d| d as usize),
            time_budget: Duration::from_secs_f64(self.time),
            mode: match self.mode {
                ModeArg::Learning => Mode::Learning,
                ModeArg::Chronological => Mode::Chronological,
            },
            start_policy: match self.start {
                StartArg::ConjectureFirst => StartPolicy::ConjectureFirst,
                StartArg::All => StartPolicy::All,
            },
            step_budget: None,
            collect_constraints: self.dump_constraints,
        }
    }
}

/// Run the prover on `argv` (program name first). Returns the exit code:
/// 0 for Theorem or Satisfiable, 1 for GaveUp or Timeout, 2 for usage and
/// input errors.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(&config, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "prove: {e}");
            2
        }
    }
}

fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let problem = match parse_problem(&config.problem, config.include_dir.as_deref()) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(2);
        }
    };
    let result = prove(&problem, &config.search_options());
    let (status, code) = match &result.outcome {
        Outcome::Theorem { .. } => ("Theorem", 0),
        Outcome::Saturated { .. } if problem.has_equality => {
            writeln!(
                err,
                "prove: equality is treated as an uninterpreted predicate, so saturation proves nothing"
            )?;
            ("GaveUp", 1)
        }
        Outcome::Saturated { .. } => ("Satisfiable", 0),
        Outcome::DepthOut => ("GaveUp", 1),
        Outcome::TimeOut => ("Timeout", 1),
    };
    writeln!(out, "% SZS status {status}")?;
    if let (true, Outcome::Theorem { proof, .. }) = (config.proof, &result.outcome) {
        writeln!(out, "% SZS output start Proof")?;
        out.write_all(proof.render(&problem).as_bytes())?;
        writeln!(out, "% SZS output end Proof")?;
    }
    if config.stats {
        for level in &result.levels {
            writeln!(
                out,
                "{}",
                serde_json::to_string(level).map_err(std::io::Error::other)?
            )?;
        }
    }
    if config.dump_constraints {
        let mut depth = 0;
        for (d, c) in &result.constraints {
            if *d != depth {
                depth = *d;
                writeln!(out, "% constraints at depth {depth}")?;
            }
            writeln!(out, "{}", dump_constraint(c, &problem.symbols))?;
        }
    }
    Ok(code)
}
