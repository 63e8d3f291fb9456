//! Command-line front end.

mod reproduce;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::beam::{beam_search, SolverParams, StopCondition};
use crate::designs::{
    code_parameters, design_from_solution, expand, packing_bound, verify_coverage, verify_pairwise, Design,
    ValidityReport, DEFAULT_PAIRWISE_THRESHOLD,
};
use crate::error::{Error, ErrorCategory, Result};
use crate::gfmat::text::{format_blocks, parse_blocks, parse_matrices, read_file};
use crate::kramer_mesner::zoom::zoom;
use crate::kramer_mesner::{plain_matrix, reduced_matrix, IncidenceMatrix};
use crate::orbits::{close_group, orbit_partition, GroupGens, DEFAULT_ORDER_CAP};
use crate::FieldOrder;

pub use reproduce::Scenario;

#[derive(Parser, Debug)]
#[command(name = "qpack", version, about = "Construct and verify q-analogs of packing designs")]
pub struct Manifest {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 100)]
    pub alpha: usize,
    #[arg(long, default_value_t = 50)]
    pub beta: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub time_limit_s: f64,
    /// Stop as soon as a solution of this weighted size is found.
    #[arg(long)]
    pub target_size: Option<u64>,
    #[arg(long)]
    pub max_iterations: Option<u64>,
}

impl SolverArgs {
    pub fn params(&self) -> Result<SolverParams> {
        if !(self.time_limit_s.is_finite() && self.time_limit_s >= 0.0) {
            return Err(Error::mismatch("time limit must be a nonnegative number of seconds"));
        }
        Ok(SolverParams {
            alpha: self.alpha,
            beta: self.beta,
            seed: self.seed,
            stop: StopCondition {
                max_iterations: self.max_iterations,
                time_limit: Some(Duration::from_secs_f64(self.time_limit_s)),
                target_size: self.target_size,
            },
        })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Pairwise below the threshold, coverage above.
    Auto,
    Pairwise,
    Coverage,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Packing bounds floor([n t]_q / [k t]_q).
    Bounds {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, conflicts_with_all = ["n_from", "n_to"])]
        n: Option<u32>,
        #[arg(long, requires = "n_to")]
        n_from: Option<u32>,
        #[arg(long, requires = "n_from")]
        n_to: Option<u32>,
    },
    /// Order of the group generated by a matrix file.
    GroupOrder {
        #[arg(long)]
        generators: PathBuf,
    },
    /// Orbits of a group on k-subspaces.
    Orbits {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Emit a plain or Kramer-Mesner matrix.
    Km {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Beam search on a plain or Kramer-Mesner matrix.
    Solve {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the expanded design here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve along a chain of subgroups.
    Zoom {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        generators: PathBuf,
        /// Subgroup generator files, largest first. Repeatable.
        #[arg(long, required = true)]
        subgroup: Vec<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand orbit representatives into a block list.
    Expand {
        #[arg(long)]
        reps: PathBuf,
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a block list is a packing.
    Verify {
        #[arg(long)]
        design: PathBuf,
        /// Defaults to the `t=` header entry, else 2.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Also report the code parameters.
        #[arg(long)]
        code: bool,
    },
    /// Run a named reproduction scenario.
    Reproduce {
        #[arg(value_enum)]
        scenario: Scenario,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Required without --generators.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub k: usize,
    /// Prescribed group; the plain matrix is used without it.
    #[arg(long)]
    pub generators: Option<PathBuf>,
}

impl SpaceArgs {
    fn group(&self) -> Result<GroupGens> {
        match &self.generators {
            Some(path) => {
                let gens = load_gens(path)?;
                if self.n.is_some_and(|n| n != gens.n()) || self.q != gens.q().get() {
                    return Err(Error::mismatch(format!(
                        "{}: generators act on F_{}^{}",
                        path.display(),
                        gens.q().get(),
                        gens.n()
                    )));
                }
                Ok(gens)
            }
            None => {
                let n = self.n.ok_or_else(|| Error::mismatch("--n is required without --generators"))?;
                Ok(GroupGens::trivial(crate::Space::new(FieldOrder::new(self.q)?, n)?))
            }
        }
    }

    fn matrix(&self, gens: &GroupGens) -> Result<IncidenceMatrix> {
        if self.generators.is_some() {
            reduced_matrix(gens, self.t, self.k)
        } else {
            plain_matrix(gens.n(), self.t, self.k, gens.q())
        }
    }
}

pub fn load_gens(path: &Path) -> Result<GroupGens> {
    let (q, n, mats) = parse_matrices(&read_file(path)?, path)?;
    GroupGens::new(q, n, mats)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn write_design(path: &Path, d: &Design) -> Result<()> {
    let mut text = format_blocks(d.q, d.n, d.k, &d.blocks);
    if let Some(rest) = text.strip_prefix("# ") {
        text = format!("# t={} {rest}", d.t);
    }
    write_file(path, &text)
}

/// Process exit status for a result.
pub fn exit_code(result: &Result<()>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(e) => match e.category() {
            ErrorCategory::InvalidInput => 1,
            ErrorCategory::VerificationFailure => 2,
            ErrorCategory::ResourceCap => 3,
        },
    }
}

pub fn run(manifest: &Manifest, out: &mut dyn Write) -> Result<()> {
    match &manifest.command {
        Command::Bounds { q, t, k, n, n_from, n_to } => {
            let range = match (n, n_from, n_to) {
                (Some(n), _, _) => *n..=*n,
                (None, Some(a), Some(b)) => *a..=*b,
                _ => return Err(Error::mismatch("give --n or --n-from and --n-to")),
            };
            FieldOrder::new(*q)?;
            for n in range {
                writeln!(out, "n={n} upper={}", packing_bound(n, *t, *k, *q)?).map_err(io)?;
            }
        }
        Command::GroupOrder { generators } => {
            let closure = close_group(&load_gens(generators)?, DEFAULT_ORDER_CAP)?;
            writeln!(out, "order={}", closure.order()).map_err(io)?;
        }
        Command::Orbits { generators, k } => {
            let p = orbit_partition(&load_gens(generators)?, *k)?;
            writeln!(out, "orbits={}", p.len()).map_err(io)?;
            for o in p.orbits() {
                let rep: Vec<String> = o.representative.encode_tuple().iter().map(u64::to_string).collect();
                writeln!(out, "{} size={}", rep.join(","), o.size).map_err(io)?;
            }
        }
        Command::Km { space, out: path } => {
            let a = space.matrix(&space.group()?)?;
            match path {
                Some(p) => write_file(p, &a.to_text())?,
                None => write!(out, "{}", a.to_text()).map_err(io)?,
            }
        }
        Command::Solve { space, solver, out: path } => {
            let gens = space.group()?;
            let a = space.matrix(&gens)?;
            let found = beam_search(&a, &solver.params()?, None)?;
            write!(out, "{}", found.log_text()).map_err(io)?;
            let ids: Vec<String> = found.best.column_ids().iter().map(usize::to_string).collect();
            writeln!(out, "size={}", found.best.weighted_size()).map_err(io)?;
            writeln!(out, "solution={}", found.best.to_bitstring()).map_err(io)?;
            writeln!(out, "columns={}", ids.join(",")).map_err(io)?;
            let d = design_from_solution(&found.best, &a, &gens)?;
            let report = verify_coverage(&d)?;
            writeln!(out, "{report}").map_err(io)?;
            if let Some(p) = path {
                write_design(p, &d)?;
            }
            check(&report)?;
        }
        Command::Zoom {
            t,
            k,
            generators,
            subgroup,
            solver,
            out: path,
        } => {
            let mut chain = vec![load_gens(generators)?];
            for p in subgroup {
                chain.push(load_gens(p)?);
            }
            let result = zoom(&chain, *t, *k, &solver.params()?)?;
            for (i, level) in result.levels.iter().enumerate() {
                writeln!(
                    out,
                    "level={i} rows={} cols={} excluded={} start_size={} size={}",
                    level.rows, level.cols, level.excluded, level.start_size, level.size
                )
                .map_err(io)?;
            }
            writeln!(out, "solution={}", result.solution.to_bitstring()).map_err(io)?;
            let last = chain.last().expect("chain is nonempty");
            let d = design_from_solution(&result.solution, &result.matrix, last)?;
            let report = verify_coverage(&d)?;
            writeln!(out, "{report}").map_err(io)?;
            if let Some(p) = path {
                write_design(p, &d)?;
            }
            check(&report)?;
        }
        Command::Expand {
            reps,
            generators,
            t,
            out: path,
        } => {
            let list = parse_blocks(&read_file(reps)?, reps)?;
            let d = expand(&list.blocks, &load_gens(generators)?, *t)?;
            writeln!(out, "blocks={}", d.len()).map_err(io)?;
            match path {
                Some(p) => write_design(p, &d)?,
                None => write!(out, "{}", format_blocks(d.q, d.n, d.k, &d.blocks)).map_err(io)?,
            }
        }
        Command::Verify { design, t, method, code } => {
            let list = parse_blocks(&read_file(design)?, design)?;
            let t = t.or(list.header.t).unwrap_or(2);
            let d = Design::new(list.q, list.n, t, list.k, list.blocks)?;
            let pairwise = match method {
                Method::Auto => d.len() <= DEFAULT_PAIRWISE_THRESHOLD,
                Method::Pairwise => true,
                Method::Coverage => false,
            };
            let report = if pairwise { verify_pairwise(&d)? } else { verify_coverage(&d)? };
            writeln!(out, "{report}").map_err(io)?;
            write!(out, "{}", report.details()).map_err(io)?;
            check(&report)?;
            if *code {
                let p = code_parameters(&d)?;
                let min = p.min_distance.map_or("none".to_string(), |m| m.to_string());
                writeln!(out, "code={p} min_distance={min} exhaustive={}", p.exhaustive).map_err(io)?;
            }
        }
        Command::Reproduce { scenario } => reproduce::run(*scenario, out)?,
    }
    Ok(())
}

fn check(report: &ValidityReport) -> Result<()> {
    if report.valid {
        Ok(())
    } else {
        Err(Error::InvalidDesign {
            violations: report.violation_count + report.duplicate_blocks.len(),
        })
    }
}
