use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mb_core::decompose::{bfkm_partition, extract_bipartite_core, key2_extract, robust_partition, BipartiteCore};
use mb_core::engine::{play, BoardKind, GameSpec, Player, Transcript, WinPredicate};
use mb_core::graph::min_degree;
use mb_core::rational::{format_rational, parse_rational};
use mb_core::solver::solve;
use mb_core::{Graph, Rational, VertexSet};
use mb_harness::{generate, registry, run_experiment, sweep_bias, sweep_table, write_atomic, ExperimentConfig, Family};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mbgame", version, about = "Maker-Breaker odd-cycle games: generate hosts, play, solve and run experiments")]
struct Cli {
    /// Seed for generators and games.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout (a directory for `sweep`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a host graph, e.g. `multipartite(40x7)` or `gnp(30,1/2)`.
    Generate { family: String },
    /// Run a decomposition on a host.
    Decompose {
        /// Graph file or generator expression.
        graph: String,
        #[arg(long, value_enum)]
        method: Method,
        /// Density `δ`; defaults to `δ(G)/n`.
        #[arg(long)]
        delta: Option<String>,
        /// Minimum-degree parameter for `bfkm`; defaults to `δ(G)`.
        #[arg(long)]
        k: Option<usize>,
        /// Breaker bias for `key2`.
        #[arg(long, default_value_t = 1)]
        b: usize,
        /// Skip the chromatic-number hypothesis.
        #[arg(long)]
        force: bool,
    },
    /// Play one game and print its transcript.
    Play {
        graph: String,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        maker: String,
        #[arg(long)]
        breaker: String,
    },
    /// Solve a small game exactly.
    Solve {
        graph: String,
        #[command(flatten)]
        game: GameArgs,
    },
    /// Replay a transcript against its host and check the recorded result.
    Verify { graph: String, transcript: PathBuf },
    /// Run an experiment described by a JSON config.
    Experiment { config: PathBuf },
    /// Run an experiment once per Breaker bias in `from..=to`.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bfkm,
    Robust,
    Core,
    Key2,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long, default_value = "edge")]
    board: String,
    /// `odd-cycle`, `non-colorable:k`, `spanning-connected`, `connectivity:k`
    /// or `aux-ghm:v1,v2,...`.
    #[arg(long, default_value = "odd-cycle")]
    objective: String,
    #[arg(long, default_value_t = 1)]
    maker_bias: usize,
    #[arg(long, default_value_t = 1)]
    breaker_bias: usize,
    #[arg(long, default_value = "maker")]
    first: String,
}

impl GameArgs {
    fn spec(&self, g: Graph) -> Result<GameSpec> {
        let board = match self.board.as_str() {
            "edge" => BoardKind::Edge,
            "vertex" => BoardKind::Vertex,
            other => bail!("unknown board `{other}`; expected edge or vertex"),
        };
        let objective = WinPredicate::parse(&self.objective, g.n())?;
        let first: Player = self.first.parse()?;
        Ok(GameSpec::new(g, board, self.maker_bias, self.breaker_bias, objective)?.with_first_player(first))
    }
}

fn load_graph(arg: &str, seed: u64) -> Result<Graph> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok(Graph::parse_text(&text).with_context(|| format!("parsing {arg}"))?);
    }
    let family = Family::parse(arg).with_context(|| format!("`{arg}` is neither a file nor a generator expression"))?;
    Ok(generate(&family, seed)?.graph().clone())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn no_csv(format: Option<Format>) -> Result<()> {
    if format == Some(Format::Csv) {
        bail!("csv output is only available for experiment and sweep");
    }
    Ok(())
}

fn set(s: &VertexSet) -> serde_json::Value {
    json!(s.members())
}

fn core_json(c: &BipartiteCore) -> serde_json::Value {
    json!({
        "a": set(&c.a),
        "b": set(&c.b),
        "witness_edge": c.witness_edge,
        "certified_connectivity": c.certified_connectivity,
        "connectivity_target": c.connectivity_target,
        "chromatic_lower_bound": c.chromatic_lower_bound,
        "key2": c.key2.as_ref().map(|k| json!({
            "min_degree_h": k.min_degree_h,
            "min_degree_bound": format_rational(&k.min_degree_bound),
            "low_degree_count": k.low_degree_count,
            "low_degree_budget": k.low_degree_budget,
            "degree_floor": k.degree_floor,
            "sparsest_balanced_cut": k.sparsest_balanced_cut,
            "cut_search_exhaustive": k.cut_search_exhaustive,
        })),
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Generate { family } => {
            no_csv(cli.format)?;
            let f = Family::parse(family)?;
            let generated = generate(&f, cli.seed)?;
            let text = match cli.format {
                Some(Format::Json) => pretty(&json!({
                    "info": generated,
                    "edges": generated.graph().edges(),
                }))?,
                _ => generated.graph().to_text(),
            };
            emit(out, &text)?;
            eprintln!("n={} m={} min_degree={} hash={}", generated.n, generated.m, generated.min_degree, generated.hash);
        }
        Command::Decompose { graph, method, delta, k, b, force } => {
            no_csv(cli.format)?;
            let g = load_graph(graph, cli.seed)?;
            let delta = match delta {
                Some(d) => parse_rational(d)?,
                None => Rational::new(min_degree(&g)? as i64, g.n() as i64),
            };
            let report = match method {
                Method::Bfkm => {
                    let p = bfkm_partition(&g, k.unwrap_or(min_degree(&g)?))?;
                    json!({
                        "k": p.k,
                        "connectivity_target": p.connectivity_target,
                        "parts": p.parts.iter().map(set).collect::<Vec<_>>(),
                        "certificates": p.certificates.iter().map(|c| json!({
                            "size": c.size,
                            "size_bound_met": c.size_bound_met,
                            "certified_connectivity": c.certified_connectivity,
                        })).collect::<Vec<_>>(),
                    })
                }
                Method::Robust => {
                    let r = robust_partition(&g, delta, cli.seed)?;
                    let s = &r.stats;
                    json!({
                        "delta": format_rational(&delta),
                        "parts": r.parts.iter().map(set).collect::<Vec<_>>(),
                        "moved_vertices": set(&r.moved_vertices),
                        "splits": s.splits,
                        "split_bound": s.split_bound,
                        "relocations": s.relocations,
                        "repairs": s.repairs,
                        "exception_budget": s.exception_budget,
                        "degree_floor": s.degree_floor,
                        "part_stats": s.parts.iter().map(|p| json!({
                            "size": p.size,
                            "min_internal_degree": p.min_internal_degree,
                            "low_degree_count": p.low_degree_count,
                            "sparsest_balanced_cut": p.sparsest_balanced_cut,
                            "cut_search_exhaustive": p.cut_search_exhaustive,
                        })).collect::<Vec<_>>(),
                    })
                }
                Method::Core => core_json(&extract_bipartite_core(&g, delta, *force)?),
                Method::Key2 => core_json(&key2_extract(&g, delta, *b, *force, cli.seed)?),
            };
            emit(out, &pretty(&report)?)?;
        }
        Command::Play { graph, game, maker, breaker } => {
            no_csv(cli.format)?;
            let spec = game.spec(load_graph(graph, cli.seed)?)?;
            let mut m = registry::build(maker, Player::Maker, &spec)?;
            let mut b = registry::build(breaker, Player::Breaker, &spec)?;
            let r = play(&spec, m.as_mut(), b.as_mut(), cli.seed);
            let text = match cli.format {
                Some(Format::Json) => pretty(&json!({
                    "winner": r.winner,
                    "rounds": r.rounds,
                    "forfeit": r.forfeit,
                    "witness": r.witness,
                    "maker_stages": r.maker_stages,
                    "transcript": r.transcript.render(),
                }))?,
                _ => r.transcript.render(),
            };
            emit(out, &text)?;
        }
        Command::Solve { graph, game } => {
            no_csv(cli.format)?;
            let spec = game.spec(load_graph(graph, cli.seed)?)?;
            let v = solve(&spec)?;
            let line: Vec<_> = v
                .principal_line
                .iter()
                .map(|t| json!({ "player": t.player, "elements": t.elements }))
                .collect();
            emit(out, &pretty(&json!({ "winner": v.winner, "nodes_expanded": v.nodes_expanded, "principal_line": line }))?)?;
        }
        Command::Verify { graph, transcript } => {
            no_csv(cli.format)?;
            let g = load_graph(graph, cli.seed)?;
            let text = std::fs::read_to_string(transcript).with_context(|| format!("reading {}", transcript.display()))?;
            let t = Transcript::parse(&text)?;
            let objective = WinPredicate::parse(&t.objective, g.n())?;
            let spec = GameSpec::new(g, t.board, t.maker_bias, t.breaker_bias, objective)?.with_first_player(t.first_player);
            t.verify(&spec).context("transcript rejected")?;
            emit(out, &pretty(&json!({ "valid": true, "winner": t.winner, "rounds": t.rounds }))?)?;
        }
        Command::Experiment { config } => {
            let cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
            let doc = run_experiment(&cfg)?;
            let text = if cli.format == Some(Format::Csv) { doc.to_csv()? } else { doc.to_json()? };
            emit(out.or(cfg.output.as_deref()), &text)?;
            let a = &doc.aggregate;
            eprintln!("maker wins {}/{} (forfeits {}, errors {})", a.maker_wins, a.trials, a.forfeits, a.errors);
        }
        Command::Sweep { config, from, to } => {
            let cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
            let docs = sweep_bias(&cfg, *from..=*to)?;
            if let Some(dir) = out {
                let ext = if cli.format == Some(Format::Csv) { "csv" } else { "json" };
                for d in &docs {
                    let text = if ext == "csv" { d.to_csv()? } else { d.to_json()? };
                    write_atomic(&dir.join(format!("b{}.{ext}", d.config.breaker_bias)), &text)?;
                }
            }
            print!("{}", sweep_table(&docs));
        }
    }
    Ok(())
}
