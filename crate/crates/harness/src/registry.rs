//! Strategy identifiers of the form `name` or `name:key=value,flag,...`.
//!
//! Makers: `main1`, `main2`, `main3`, `connectivity`, `random`, `optimal`.
//! Breakers: `random`, `guard`, `cut`, `optimal`. Keys: `delta` (defaults
//! to `δ(G)/n`), `force`, `seed`, `b` (defaults to Breaker's bias) and `k`
//! (main3's required connectivity; connectivity target).

use mb_core::engine::{GameSpec, Player, Strategy, WinPredicate};
use mb_core::graph::min_degree;
use mb_core::rational::parse_rational;
use mb_core::solver::OptimalStrategy;
use mb_core::strategies::{
    BipartiteGuard, ConnectivityMaker, CutAttack, Main1Maker, Main1Options, Main2Maker, Main2Options, Main3Maker,
    Main3Options, RandomBreaker,
};
use mb_core::Rational;

use crate::error::{config, Result};

pub const MAKERS: &[&str] = &["main1", "main2", "main3", "connectivity", "random", "optimal"];
pub const BREAKERS: &[&str] = &["random", "guard", "cut", "optimal"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyId {
    pub name: String,
    pub params: Vec<(String, Option<String>)>,
}

impl StrategyId {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        if name.is_empty() {
            return Err(config("empty strategy name"));
        }
        let mut params = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => params.push((k.trim().to_string(), Some(v.trim().to_string()))),
                None => params.push((item.to_string(), None)),
            }
        }
        Ok(StrategyId { name: name.to_string(), params })
    }

    fn flag(&self, key: &str) -> bool {
        self.params.iter().any(|(k, v)| k == key && v.as_deref().is_none_or(|v| v == "true"))
    }

    fn value(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).and_then(|(_, v)| v.as_deref())
    }

    fn number(&self, key: &str) -> Result<Option<u64>> {
        self.value(key)
            .map(|v| v.parse::<u64>().map_err(|_| config(format!("`{key}={v}` is not a non-negative integer"))))
            .transpose()
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(config(format!("strategy `{}` has no parameter `{k}`", self.name))),
            None => Ok(()),
        }
    }
}

fn default_delta(spec: &GameSpec) -> Result<Rational> {
    let g = &spec.host;
    Ok(Rational::new(min_degree(g)? as i64, g.n() as i64))
}

/// Builds the strategy for `side`; expensive precomputation happens here
/// once, and trials clone the result.
pub fn build(id: &str, side: Player, spec: &GameSpec) -> Result<Box<dyn Strategy>> {
    let sid = StrategyId::parse(id)?;
    let seed = sid.number("seed")?.unwrap_or(0);
    let delta = || -> Result<Rational> {
        match sid.value("delta") {
            Some(v) => Ok(parse_rational(v)?),
            None => default_delta(spec),
        }
    };
    let g = &spec.host;
    let strategy: Box<dyn Strategy> = match (side, sid.name.as_str()) {
        (_, "random") => {
            sid.check_keys(&["seed"])?;
            Box::new(RandomBreaker::new(seed))
        }
        (_, "optimal") => {
            sid.check_keys(&[])?;
            Box::new(OptimalStrategy::new(side))
        }
        (Player::Maker, "main1") => {
            sid.check_keys(&["delta", "force"])?;
            Box::new(Main1Maker::new(g, delta()?, Main1Options { force: sid.flag("force") })?)
        }
        (Player::Maker, "main2") => {
            sid.check_keys(&["delta", "force", "seed", "b", "budget"])?;
            let b = sid.number("b")?.map_or(spec.breaker_bias, |b| b as usize);
            let budget = sid.number("budget")?.map(|x| x as usize);
            let opts = Main2Options { force: sid.flag("force"), seed, dominating_budget: budget };
            Box::new(Main2Maker::new(g, delta()?, b, opts)?)
        }
        (Player::Maker, "main3") => {
            sid.check_keys(&["seed", "b", "k"])?;
            let b = sid.number("b")?.map_or(spec.breaker_bias, |b| b as usize);
            let k_prime = sid.number("k")?.map(|k| k as usize);
            Box::new(Main3Maker::new(g, b, Main3Options { k_prime, seed })?)
        }
        (Player::Maker, "connectivity") => {
            sid.check_keys(&["k"])?;
            let k = match (sid.number("k")?, &spec.objective) {
                (Some(k), _) => k as usize,
                (None, WinPredicate::Connectivity(k)) => *k,
                _ => 1,
            };
            Box::new(ConnectivityMaker::new(g, None, None, k))
        }
        (Player::Breaker, "guard") => {
            sid.check_keys(&[])?;
            Box::new(BipartiteGuard::new())
        }
        (Player::Breaker, "cut") => {
            sid.check_keys(&[])?;
            Box::new(CutAttack::new())
        }
        (side, name) => {
            let known = if side == Player::Maker { MAKERS } else { BREAKERS };
            return Err(config(format!("unknown {} strategy `{name}`; expected one of {}", side.name(), known.join(", "))));
        }
    };
    Ok(strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mb_core::engine::BoardKind;
    use mb_core::Graph;

    #[test]
    fn parses_parameters() {
        let id = StrategyId::parse("main2:force,delta=6/7,seed=3").unwrap();
        assert_eq!(id.name, "main2");
        assert!(id.flag("force"));
        assert_eq!(id.value("delta"), Some("6/7"));
        assert_eq!(id.number("seed").unwrap(), Some(3));
    }

    #[test]
    fn rejects_unknown_names_and_keys() {
        let spec = GameSpec::new(Graph::complete(4), BoardKind::Edge, 1, 1, WinPredicate::OddCycle).unwrap();
        assert!(build("guard", Player::Maker, &spec).is_err());
        assert!(build("random:colour=red", Player::Breaker, &spec).is_err());
        assert!(build("cut", Player::Breaker, &spec).is_ok());
        assert!(build("connectivity", Player::Maker, &spec).is_ok());
    }
}
