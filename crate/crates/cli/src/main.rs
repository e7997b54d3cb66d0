use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use narmax_tag::generator::{enumerate_derivations, GenBounds, SampleConfig, Sampler};
use narmax_tag::model::{Mode, NarmaxModel};
use narmax_tag::narmax::{
    build_gnbj, derived_to_model, model_from_yield, model_to_derivation, nbj_derived_to_model,
    nbj_model_from_yield, restrict, roundtrip_check, GrammarPreset,
};
use narmax_tag::tag::{Derivation, Grammar, SyntacticTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Tree adjoining grammars for polynomial NARMAX model structures.
#[derive(Parser)]
#[command(name = "narmax-tag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a grammar in the grammar file format.
    GrammarShow {
        #[arg(long, default_value = "narmax")]
        preset: GrammarPreset,
        /// Show the NBJ grammar instead.
        #[arg(long, conflicts_with = "preset")]
        nbj: bool,
    },
    /// Model text to derivation tree.
    Parse {
        /// Model text, or `-` for one model per stdin line.
        model: String,
        #[arg(long)]
        strict: bool,
    },
    /// Derivation tree to derived tree.
    Derive {
        /// Derivation file, or `-` for stdin.
        input: String,
        #[command(flatten)]
        grammar: GrammarChoice,
    },
    /// Derived tree to its yield.
    Yield {
        /// Tree file, or `-` for stdin.
        input: String,
    },
    /// Derived tree (or yield tokens) to model text.
    ToModel {
        /// Tree or yield file, or `-` for stdin.
        input: String,
        #[arg(long)]
        nbj: bool,
    },
    /// Check that a model survives model -> derivation -> model.
    Roundtrip {
        model: String,
        #[arg(long)]
        strict: bool,
    },
    /// Simulate a model with zero initial conditions and print y.
    Simulate(SimulateArgs),
    /// Print the structural classes of a model.
    Classify {
        /// Model text; omit with --all.
        model: Option<String>,
        /// Classify every stdin line.
        #[arg(long, conflicts_with = "model")]
        all: bool,
    },
    /// List models (or derivations) up to a number of adjunctions.
    Enumerate {
        #[arg(long, default_value = "narmax")]
        preset: GrammarPreset,
        #[arg(long)]
        max: usize,
        /// Print each model once.
        #[arg(long)]
        unique: bool,
        /// Print derivation trees instead of models.
        #[arg(long)]
        derivations: bool,
    },
    /// Draw seeded random models.
    Sample(SampleArgs),
    /// Check a grammar file and list its problems.
    Validate { file: String },
}

#[derive(Args)]
struct GrammarChoice {
    #[arg(long, default_value = "narmax")]
    preset: GrammarPreset,
    /// Grammar file to use instead of a preset.
    #[arg(long, conflicts_with_all = ["preset", "nbj"])]
    grammar: Option<String>,
    #[arg(long, conflicts_with = "preset")]
    nbj: bool,
}

#[derive(Args)]
struct SimulateArgs {
    model: String,
    /// Comma-separated coefficient values; defaults to the values in the
    /// model text.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Input samples file; zeros if omitted.
    #[arg(long)]
    u: Option<String>,
    /// Noise samples file.
    #[arg(long, conflicts_with_all = ["noise_seed", "noise_std"])]
    xi: Option<String>,
    #[arg(long)]
    noise_seed: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    noise_std: f64,
    /// Number of samples when neither --u nor --xi fixes it.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value = "narmax")]
    preset: GrammarPreset,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    max_adjunctions: usize,
    #[arg(long, default_value_t = 3)]
    max_terms: usize,
    /// Maximum delay for every signal.
    #[arg(long, default_value_t = 3)]
    max_delay: u32,
    #[arg(long, default_value_t = 2)]
    max_exponent: u32,
    #[arg(long)]
    strict: bool,
}

fn mode(strict: bool) -> Mode {
    if strict {
        Mode::Strict
    } else {
        Mode::Extended
    }
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path))
    }
}

/// Non-blank lines of a file or stdin.
fn read_lines(path: &str) -> Result<Vec<String>> {
    Ok(read_source(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}

/// The argument itself, or the stdin lines when it is `-`.
fn inline_or_stdin(arg: &str) -> Result<Vec<String>> {
    if arg == "-" {
        read_lines("-")
    } else {
        Ok(vec![arg.to_owned()])
    }
}

fn parse_model(src: &str, strict: bool) -> Result<NarmaxModel> {
    NarmaxModel::parse_with_mode(src, mode(strict)).with_context(|| format!("parsing `{}`", src))
}

fn read_numbers(path: &str) -> Result<Vec<f64>> {
    read_source(path)?
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .with_context(|| format!("bad number `{}` in {}", s, path))
        })
        .collect()
}

fn grammar_for(choice: &GrammarChoice) -> Result<Grammar> {
    if let Some(path) = &choice.grammar {
        return read_source(path)?
            .parse()
            .with_context(|| format!("parsing grammar {}", path));
    }
    Ok(if choice.nbj {
        build_gnbj().grammar().clone()
    } else {
        restrict(choice.preset)
    })
}

fn simulate(args: &SimulateArgs, out: &mut impl Write) -> Result<()> {
    let model = parse_model(&args.model, false)?;
    let coeffs: Vec<f64> = match &args.coeffs {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .with_context(|| format!("bad coefficient `{}`", s))
            })
            .collect::<Result<_>>()?,
        None => model
            .coefficient_values()
            .ok_or_else(|| anyhow!("model has symbolic coefficients; pass --coeffs"))?,
    };
    let u = args.u.as_deref().map(read_numbers).transpose()?;
    let xi = args.xi.as_deref().map(read_numbers).transpose()?;
    let n = match (&u, &xi, args.samples) {
        (Some(u), _, _) => u.len(),
        (None, Some(xi), _) => xi.len(),
        (None, None, Some(n)) => n,
        (None, None, None) => bail!("give --u, --xi or --samples"),
    };
    let u = u.unwrap_or_else(|| vec![0.0; n]);
    let xi = match xi {
        Some(xi) => xi,
        None => {
            let seed = args.noise_seed.unwrap_or(0);
            let normal = Normal::new(0.0, args.noise_std)
                .map_err(|e| anyhow!("invalid --noise-std {}: {}", args.noise_std, e))?;
            eprintln!("noise seed {} std {}", seed, args.noise_std);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| normal.sample(&mut rng)).collect()
        }
    };
    for y in model.simulate(&coeffs, &u, &xi)? {
        writeln!(out, "{}", y)?;
    }
    Ok(())
}

/// Returns `false` when the command ran but found a problem (exit 1).
fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    match cli.command {
        Command::GrammarShow { preset, nbj } => {
            let g = if nbj {
                build_gnbj().grammar().clone()
            } else {
                restrict(preset)
            };
            write!(out, "{}", g)?;
        }
        Command::Parse { model, strict } => {
            for src in inline_or_stdin(&model)? {
                let m = parse_model(&src, strict)?;
                writeln!(out, "{}", model_to_derivation(&m)?)?;
            }
        }
        Command::Derive { input, grammar } => {
            let g = grammar_for(&grammar)?;
            for line in read_lines(&input)? {
                let d: Derivation = line
                    .parse()
                    .with_context(|| format!("parsing `{}`", line))?;
                writeln!(out, "{}", d.derive(&g)?)?;
            }
        }
        Command::Yield { input } => {
            for line in read_lines(&input)? {
                let t: SyntacticTree = line
                    .parse()
                    .with_context(|| format!("parsing `{}`", line))?;
                writeln!(out, "{}", t.yield_tokens().join(" "))?;
            }
        }
        Command::ToModel { input, nbj } => {
            for line in read_lines(&input)? {
                let tree = line.parse::<SyntacticTree>().ok();
                let text = match (tree, nbj) {
                    (Some(t), false) => derived_to_model(&t)?.to_string(),
                    (Some(t), true) => nbj_derived_to_model(&t)?.to_string(),
                    (None, nbj) => {
                        let tokens: Vec<String> =
                            line.split_whitespace().map(str::to_owned).collect();
                        if nbj {
                            nbj_model_from_yield(&tokens)?.canonicalize().to_string()
                        } else {
                            model_from_yield(&tokens)?.canonicalize().to_string()
                        }
                    }
                };
                writeln!(out, "{}", text)?;
            }
        }
        Command::Roundtrip { model, strict } => {
            let m = parse_model(&model, strict)?;
            if !roundtrip_check(&m)? {
                writeln!(out, "MISMATCH")?;
                return Ok(false);
            }
            writeln!(out, "OK")?;
            writeln!(out, "{}", model_to_derivation(&m)?)?;
        }
        Command::Simulate(args) => simulate(&args, out)?,
        Command::Classify { model, all } => {
            let sources = match (model, all) {
                (Some(m), false) => vec![m],
                (None, true) => read_lines("-")?,
                _ => bail!("give a model or --all"),
            };
            for src in sources {
                let m = parse_model(&src, false)?;
                let classes: Vec<&str> = m.classify().into_iter().map(|c| c.name()).collect();
                if all {
                    writeln!(out, "{}\t{}", m, classes.join(" "))?;
                } else {
                    writeln!(out, "{}", classes.join(" "))?;
                }
            }
        }
        Command::Enumerate {
            preset,
            max,
            unique,
            derivations,
        } => {
            let g = restrict(preset);
            let mut seen = std::collections::HashSet::new();
            for d in enumerate_derivations(&g, &GenBounds::adjunctions(max)) {
                let line = if derivations {
                    d.to_string()
                } else {
                    derived_to_model(&d.derive(&g)?)?.to_string()
                };
                if !unique || seen.insert(line.clone()) {
                    writeln!(out, "{}", line)?;
                }
            }
        }
        Command::Sample(args) => {
            let bounds = GenBounds {
                max_adjunctions: args.max_adjunctions,
                max_terms: args.max_terms,
                max_delay_u: args.max_delay,
                max_delay_y: args.max_delay,
                max_delay_xi: args.max_delay,
                max_exponent: args.max_exponent,
                mode: mode(args.strict),
            };
            let cfg = SampleConfig {
                bounds,
                seed: args.seed,
            };
            let mut sampler = Sampler::new(restrict(args.preset), &cfg);
            for _ in 0..args.count {
                writeln!(out, "{}", sampler.sample_model())?;
            }
        }
        Command::Validate { file } => {
            let g: Grammar = read_source(&file)?
                .parse()
                .with_context(|| format!("parsing grammar {}", file))?;
            let diagnostics = g.validate();
            if diagnostics.is_empty() {
                writeln!(out, "ok")?;
            } else {
                for d in &diagnostics {
                    writeln!(out, "{}", d)?;
                }
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    let broken_pipe = |e: &anyhow::Error| {
        e.downcast_ref::<io::Error>()
            .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    };
    match result.and_then(|ok| flushed.map(|_| ok).map_err(Into::into)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
