//! Command-line front end. Each subcommand calls one library entry point.

pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::json;

use crate::ckmoracle::{oracle_report, random_fontaine_program, Program};
use crate::error::{Error, Result};
use crate::invariantvec::{stranding_terms, web_vector};
use crate::relations::{self, relation_grid, verify_all, RelationInstance, RelationOutcome, Rule};
use crate::stranding::{base_stranding, Stranding};
use crate::tableauweb::{basis_rank, web_from_tableau, StandardTableau};
use crate::uqaction::invariance_table;
use crate::webgraph::WebGraph;

/// Environment variable seeding every randomized command.
pub const SEED_VAR: &str = "WEBCALC_SEED";

#[derive(Parser, Debug)]
#[command(name = "webcalc", version, about = "Exact web vectors of sl_n webs")]
pub struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Checks a web file and prints the validation report.
    Validate { web: PathBuf },
    /// Lists every stranding with its flow exponent and monomial.
    Strandings {
        web: PathBuf,
        /// Print only the number of strandings.
        #[arg(long)]
        count: bool,
    },
    /// Prints the web vector.
    Vector {
        web: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Applies every E_i, F_i, K_i to the web vector.
    CheckInvariance { web: PathBuf },
    /// Prints the base stranding as JSON.
    BaseStranding {
        web: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Builds the web of a rectangular standard tableau.
    FromTableau(FromTableauArgs),
    /// Compares the stranding state sum with the CKM map composition.
    OracleCheck(OracleArgs),
    /// Verifies relation instances exactly.
    Relations(RelationArgs),
    /// Rank of the tableau web vectors against the number of tableaux.
    Rank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Draws a web as SVG 1.1.
    Render {
        web: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        stranding: Option<PathBuf>,
        /// Highlights the (i,j) flows of the stranding, written `i,j`.
        #[arg(long)]
        flows: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct FromTableauArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Row of each entry, e.g. `12132344`.
    #[arg(long)]
    pub word: Option<String>,
    /// Tableau JSON file (`[[1,3],[2,4]]`), instead of `--word`.
    #[arg(long)]
    pub tableau: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the tableau stranding here.
    #[arg(long)]
    pub stranding: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Program JSON file.
    pub program: Option<PathBuf>,
    /// Check this many random Fontaine programs instead (seeded by WEBCALC_SEED).
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
}

#[derive(Args, Debug)]
pub struct RelationArgs {
    #[arg(long)]
    pub rule: Option<String>,
    /// Every rule over its admissible grid.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long)]
    pub r: Option<i64>,
    #[arg(long)]
    pub s: Option<i64>,
    /// Web file for `--rule edge-flip`.
    #[arg(long)]
    pub web: Option<PathBuf>,
    /// Comma-separated edge ids for `--rule edge-flip` (default: all edges).
    #[arg(long)]
    pub edges: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_web(path: &Path) -> Result<WebGraph> {
    WebGraph::from_json_str(&read(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn seed() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("--{name} is required")))
}

fn single_relation(a: &RelationArgs, rule: Rule) -> Result<RelationInstance> {
    let n = need(a.n, "n")?;
    let k = || need(a.k, "k");
    let l = || need(a.l, "l");
    match rule {
        Rule::Bigon => relations::make_bigon(n, k()?, l()?),
        Rule::Ih => relations::make_IH(n, k()?, l()?, need(a.m, "m")?),
        Rule::SquareRemoval => {
            relations::make_square_removal(n, k()?, l()?, need(a.r, "r")?, need(a.s, "s")?)
        }
        Rule::SquareSwitch if a.r.is_none() && a.s.is_none() => {
            relations::make_square_switch_unit(n, k()?, l()?)
        }
        Rule::SquareSwitch | Rule::SquareSwitchGeneral => {
            relations::make_square_switch_general(n, k()?, l()?, a.r.unwrap_or(1), a.s.unwrap_or(1))
        }
        Rule::Loop => relations::make_loop(n, k()?),
        Rule::Circle => relations::make_circle(n, k()?),
        Rule::EdgeFlip => {
            let g = load_web(&need(a.web.clone(), "web")?)?;
            let ids: Vec<String> = match &a.edges {
                Some(list) => list
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                None => g.edges.iter().map(|e| e.id.clone()).collect(),
            };
            relations::make_edge_flip(&g, &ids)
        }
    }
}

fn report_relations(out: &mut dyn Write, outcomes: &[RelationOutcome]) -> Result<i32> {
    for o in outcomes {
        let _ = writeln!(out, "{} {}", if o.pass { "PASS" } else { "FAIL" }, o.label);
    }
    let failures: Vec<&RelationOutcome> = outcomes.iter().filter(|o| !o.pass).collect();
    let _ = writeln!(
        out,
        "{} of {} instances verified",
        outcomes.len() - failures.len(),
        outcomes.len()
    );
    if failures.is_empty() {
        return Ok(0);
    }
    let report = json!({ "failures": failures });
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(1)
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Parse(format!("--flows expects `i,j`, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let i: usize = parts[0].parse().map_err(|_| bad())?;
    let j: usize = parts[1].parse().map_err(|_| bad())?;
    if i >= j {
        return Err(bad());
    }
    Ok((i, j))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = writeln!(out);
            }
            Ok(())
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Validate { web } => {
            let g = load_web(&web)?;
            let report = g.validate();
            let _ = writeln!(out, "{report}");
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Strandings { web, count } => {
            let g = load_web(&web)?;
            let terms = stranding_terms(&g)?;
            if count {
                let _ = writeln!(out, "{}", terms.len());
            } else {
                for (s, m, e) in terms {
                    let factors: Vec<String> = m
                        .factors()
                        .iter()
                        .map(|f| format!("x_{}", f.word))
                        .collect();
                    let _ = writeln!(out, "{s}\texponent {e}\t{}", factors.join("⊗"));
                }
            }
            Ok(0)
        }
        Command::Vector { web, format } => {
            let v = web_vector(&load_web(&web)?)?;
            let text = match format {
                Format::Text => v.to_text(),
                Format::Json => v.to_json_pretty(),
            };
            let _ = writeln!(out, "{text}");
            Ok(0)
        }
        Command::CheckInvariance { web } => {
            let g = load_web(&web)?;
            let rows = invariance_table(&web_vector(&g)?, g.n)?;
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{}{}\t{}",
                    r.generator,
                    r.color,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::BaseStranding { web, output } => {
            let s = base_stranding(&load_web(&web)?)?;
            emit(out, output.as_deref(), &s.to_json_string())?;
            Ok(0)
        }
        Command::FromTableau(a) => {
            let t = match (&a.word, &a.tableau) {
                (Some(w), None) => StandardTableau::from_word_str(need(a.n, "n")?, w)?,
                (None, Some(p)) => StandardTableau::from_json_str(&read(p)?)?,
                _ => {
                    return Err(Error::Parameter(
                        "give exactly one of --word and --tableau".into(),
                    ))
                }
            };
            let (g, s) = web_from_tableau(&t)?;
            emit(out, a.output.as_deref(), &g.to_json_string())?;
            if let Some(p) = &a.stranding {
                write_file(p, &s.to_json_string())?;
            }
            Ok(0)
        }
        Command::OracleCheck(a) => {
            let programs: Vec<(String, Program)> = match (&a.program, a.random) {
                (Some(p), None) => {
                    vec![(p.display().to_string(), Program::from_json_str(&read(p)?)?)]
                }
                (None, Some(count)) => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed());
                    (0..count)
                        .map(|i| {
                            (
                                format!("random #{i}"),
                                random_fontaine_program(a.n, a.layers, 2 * a.layers + 2, &mut rng),
                            )
                        })
                        .collect()
                }
                _ => {
                    return Err(Error::Parameter(
                        "give a program file or --random COUNT".into(),
                    ))
                }
            };
            let mut failed = 0;
            for (name, p) in &programs {
                let r = oracle_report(p)?;
                let ok = r.agrees();
                failed += usize::from(!ok);
                let _ = writeln!(
                    out,
                    "{} {name} sign {}",
                    if ok { "AGREE" } else { "DISAGREE" },
                    r.sign
                );
                if !ok || programs.len() == 1 {
                    let _ = writeln!(out, "  stranding side: {}", r.stranding_side.to_text());
                    let _ = writeln!(out, "  map side:       {}", r.map_side.to_text());
                }
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Relations(a) => {
            let instances = if a.all {
                let mut all = Vec::new();
                for rule in Rule::ALL {
                    all.extend(relation_grid(rule, a.max_n)?);
                }
                all
            } else {
                let rule: Rule = need(a.rule.as_deref(), "rule")?.parse()?;
                vec![single_relation(&a, rule)?]
            };
            report_relations(out, &verify_all(&instances)?)
        }
        Command::Rank { n, m } => {
            let r = basis_rank(n, m)?;
            let _ = writeln!(
                out,
                "webs {} rank {} expected {}",
                r.webs, r.rank, r.expected
            );
            Ok(if r.rank == r.expected && r.webs == r.expected {
                0
            } else {
                1
            })
        }
        Command::Render {
            web,
            output,
            stranding,
            flows,
        } => {
            let g = load_web(&web)?;
            let s = match &stranding {
                Some(p) => Some(Stranding::from_json_str(&read(p)?)?),
                None => None,
            };
            let pair = flows.as_deref().map(parse_pair).transpose()?;
            if pair.is_some() && s.is_none() {
                return Err(Error::Parameter("--flows needs --stranding".into()));
            }
            emit(
                out,
                output.as_deref(),
                &svg::render_svg(&g, s.as_ref(), pair)?,
            )?;
            Ok(0)
        }
    }
}

/// Runs the command line; returns the exit status (0 success, 1 check failed, 2 usage or input error).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // Fails only when a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("webcalc")
            .chain(args.iter().copied())
            .collect();
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn single_relation_and_unknown_rule() {
        let (code, out, _) = call(&[
            "relations",
            "--rule",
            "square-switch",
            "--n",
            "4",
            "--k",
            "2",
            "--l",
            "1",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.starts_with("PASS square-switch("));
        let (code, _, err) = call(&["relations", "--rule", "kekule", "--n", "4"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown relation"));
    }

    #[test]
    fn rank_and_usage_errors() {
        let (code, out, _) = call(&["rank", "--n", "2", "--m", "4"]);
        assert_eq!((code, out.trim()), (0, "webs 2 rank 2 expected 2"));
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        let (code, _, err) = call(&["vector", "/nonexistent/web.json"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/web.json"));
    }

    #[test]
    fn flow_pairs_parse() {
        assert_eq!(parse_pair("1, 3").unwrap(), (1, 3));
        assert!(parse_pair("3,1").is_err());
        assert!(parse_pair("x").is_err());
    }
}
