use std::collections::BTreeMap;
use std::io::Write;
use std::ops::RangeInclusive;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use mb_core::engine::{play, BoardKind, GameSpec, Player, Strategy, WinPredicate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::generate::{generate, Family, Generated};
use crate::registry;

pub const SCHEMA: &str = "result-v1";

fn default_first() -> Player {
    Player::Maker
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Generator syntax, see [`crate::generate`].
    pub generator: String,
    #[serde(default)]
    pub generator_seed: u64,
    pub board: BoardKind,
    pub maker_bias: usize,
    pub breaker_bias: usize,
    #[serde(default = "default_first")]
    pub first: Player,
    /// Objective label such as `odd-cycle` or `connectivity:2`.
    pub objective: String,
    pub maker: String,
    pub breaker: String,
    pub trials: usize,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub winner: Option<Player>,
    pub rounds: usize,
    pub forfeit: bool,
    pub forfeit_reason: Option<String>,
    pub witness_kind: Option<String>,
    pub witness_length: Option<usize>,
    /// Independent re-validation of the reported witness.
    pub witness_valid: Option<bool>,
    /// Set when the trial itself failed; the row then carries no result.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub maker_wins: usize,
    pub forfeits: usize,
    pub errors: usize,
    pub win_rate: f64,
    pub mean_rounds: f64,
    pub witness_histogram: BTreeMap<usize, usize>,
    pub max_witness_length: Option<usize>,
}

impl Aggregate {
    pub fn from_rows(rows: &[TrialRow]) -> Self {
        let played: Vec<&TrialRow> = rows.iter().filter(|r| r.error.is_none()).collect();
        let maker_wins = played.iter().filter(|r| r.winner == Some(Player::Maker)).count();
        let mut witness_histogram = BTreeMap::new();
        for len in played.iter().filter_map(|r| r.witness_length) {
            *witness_histogram.entry(len).or_insert(0) += 1;
        }
        let ratio = |x: f64| if rows.is_empty() { 0.0 } else { x / rows.len() as f64 };
        let mean_rounds =
            if played.is_empty() { 0.0 } else { played.iter().map(|r| r.rounds as f64).sum::<f64>() / played.len() as f64 };
        Aggregate {
            trials: rows.len(),
            maker_wins,
            forfeits: played.iter().filter(|r| r.forfeit).count(),
            errors: rows.len() - played.len(),
            win_rate: ratio(maker_wins as f64),
            mean_rounds,
            max_witness_length: witness_histogram.keys().next_back().copied(),
            witness_histogram,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema: String,
    pub code_version: String,
    pub config: ExperimentConfig,
    pub host: Generated,
    pub maker_id: String,
    pub breaker_id: String,
    pub trials: Vec<TrialRow>,
    pub aggregate: Aggregate,
    /// Seconds since the epoch; the only field that differs between reruns.
    pub created_unix: Option<u64>,
}

impl ResultDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// JSON with the timestamp removed, for reproducibility checks.
    pub fn canonical_json(&self) -> Result<String> {
        let mut doc = self.clone();
        doc.created_unix = None;
        doc.to_json()
    }

    /// One row per trial; the config is summarised in leading columns.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "host", "board", "maker_bias", "breaker_bias", "maker", "breaker", "trial", "seed", "winner", "rounds",
            "forfeit", "forfeit_reason", "witness_kind", "witness_length", "witness_valid", "error",
        ])?;
        let opt = |x: Option<String>| x.unwrap_or_default();
        for r in &self.trials {
            w.write_record([
                self.host.family.clone(),
                self.config.board.name().to_string(),
                self.config.maker_bias.to_string(),
                self.config.breaker_bias.to_string(),
                self.maker_id.clone(),
                self.breaker_id.clone(),
                r.trial.to_string(),
                r.seed.to_string(),
                opt(r.winner.map(|p| p.name().to_string())),
                r.rounds.to_string(),
                r.forfeit.to_string(),
                opt(r.forfeit_reason.clone()),
                opt(r.witness_kind.clone()),
                opt(r.witness_length.map(|x| x.to_string())),
                opt(r.witness_valid.map(|x| x.to_string())),
                opt(r.error.clone()),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| config(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// A fully resolved experiment: host, spec and strategy prototypes.
pub struct Prepared {
    pub host: Generated,
    pub spec: GameSpec,
    pub maker: Box<dyn Strategy>,
    pub breaker: Box<dyn Strategy>,
}

/// Resolves every identifier in `cfg` before any trial runs.
pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let family = Family::parse(&cfg.generator)?;
    let host = generate(&family, cfg.generator_seed)?;
    let objective = WinPredicate::parse(&cfg.objective, host.n)?;
    let spec = GameSpec::new(host.graph().clone(), cfg.board, cfg.maker_bias, cfg.breaker_bias, objective)?
        .with_first_player(cfg.first);
    let maker = registry::build(&cfg.maker, Player::Maker, &spec)?;
    let breaker = registry::build(&cfg.breaker, Player::Breaker, &spec)?;
    Ok(Prepared { host, spec, maker, breaker })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultDocument> {
    run_experiment_with(cfg, true)
}

/// Runs trials `0..cfg.trials` with seeds `seed_base + i`. Rows are in
/// trial order whether or not they ran in parallel.
pub fn run_experiment_with(cfg: &ExperimentConfig, parallel: bool) -> Result<ResultDocument> {
    let prep = prepare(cfg)?;
    let run = |i: usize| trial(&prep, i, cfg.seed_base.wrapping_add(i as u64));
    let trials: Vec<TrialRow> =
        if parallel { (0..cfg.trials).into_par_iter().map(run).collect() } else { (0..cfg.trials).map(run).collect() };
    let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    Ok(ResultDocument {
        schema: SCHEMA.to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        maker_id: prep.maker.id(),
        breaker_id: prep.breaker.id(),
        host: prep.host.clone(),
        aggregate: Aggregate::from_rows(&trials),
        trials,
        created_unix,
    })
}

fn trial(prep: &Prepared, index: usize, seed: u64) -> TrialRow {
    let mut row = TrialRow {
        trial: index,
        seed,
        winner: None,
        rounds: 0,
        forfeit: false,
        forfeit_reason: None,
        witness_kind: None,
        witness_length: None,
        witness_valid: None,
        error: None,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut maker = prep.maker.clone();
        let mut breaker = prep.breaker.clone();
        play(&prep.spec, maker.as_mut(), breaker.as_mut(), seed)
    }));
    let result = match outcome {
        Ok(r) => r,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            row.error = Some(format!("trial panicked: {msg}"));
            return row;
        }
    };
    row.winner = Some(result.winner);
    row.rounds = result.rounds;
    row.forfeit = result.forfeit.is_some();
    row.forfeit_reason = result.forfeit.as_ref().map(|f| f.reason.clone());
    match result.transcript.verify(&prep.spec) {
        Ok(end) => {
            if let Some(w) = &result.witness {
                row.witness_kind = Some(w.kind().to_string());
                row.witness_length = Some(w.size());
                row.witness_valid = Some(w.validate(&prep.spec, end.maker_claims()));
            }
        }
        Err(e) => row.error = Some(format!("transcript does not replay: {e}")),
    }
    row
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// One document per Breaker bias in `range`; the Maker is rebuilt for each
/// bias so strategies that read `b` from the game see the right value.
pub fn sweep_bias(cfg: &ExperimentConfig, range: RangeInclusive<usize>) -> Result<Vec<ResultDocument>> {
    range
        .map(|b| {
            let mut c = cfg.clone();
            c.breaker_bias = b;
            run_experiment(&c)
        })
        .collect()
}

/// Win rate against bias, one line per document.
pub fn sweep_table(docs: &[ResultDocument]) -> String {
    let mut out = String::from("b\ttrials\tmaker_wins\twin_rate\tforfeits\tmean_rounds\n");
    for d in docs {
        let a = &d.aggregate;
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.3}\t{}\t{:.2}\n",
            d.config.breaker_bias, a.trials, a.maker_wins, a.win_rate, a.forfeits, a.mean_rounds
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            generator: "complete(5)".into(),
            generator_seed: 0,
            board: BoardKind::Edge,
            maker_bias: 1,
            breaker_bias: 1,
            first: Player::Maker,
            objective: "odd-cycle".into(),
            maker: "random:seed=1".into(),
            breaker: "random:seed=2".into(),
            trials,
            seed_base: 10,
            output: None,
        }
    }

    #[test]
    fn zero_trials_echo_config() {
        let doc = run_experiment(&cfg(0)).unwrap();
        assert!(doc.trials.is_empty());
        assert_eq!(doc.config, cfg(0));
        assert_eq!(doc.aggregate.win_rate, 0.0);
    }

    #[test]
    fn parallel_equals_serial() {
        let a = run_experiment_with(&cfg(30), true).unwrap();
        let b = run_experiment_with(&cfg(30), false).unwrap();
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
        assert_eq!(a.trials[3].seed, 13);
    }

    #[test]
    fn aggregates_recompute_from_rows() {
        let doc = run_experiment(&cfg(25)).unwrap();
        assert_eq!(Aggregate::from_rows(&doc.trials), doc.aggregate);
        let text = doc.to_json().unwrap();
        let back: ResultDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.trials, doc.trials);
        assert_eq!(doc.to_csv().unwrap().lines().count(), 26);
    }

    #[test]
    fn unknown_strategy_fails_before_trials() {
        let mut c = cfg(5);
        c.breaker = "nobody".into();
        assert!(matches!(run_experiment(&c), Err(crate::HarnessError::Config(_))));
    }

    #[test]
    fn sweep_over_empty_range_is_empty() {
        #[allow(clippy::reversed_empty_ranges)]
        let docs = sweep_bias(&cfg(2), 3..=2).unwrap();
        assert!(docs.is_empty());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("doc.json");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    }
}
