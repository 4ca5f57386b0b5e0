//! Generator kinds behind a common trait, looked up by config `kind` name.

use super::yang::{exponent_search, orbit_product, orbit_trace};
use crate::error::{Error, Result};
use crate::exactfield::CycNumber;
use crate::qseries::io::{parse_cyc, parse_series};
use crate::qseries::{eta_expand, klein_j_minus_744, EtaQuotient, QSeries};
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

/// A modular function on Γ₀(N) with its only pole at ∞.
pub trait Generator: fmt::Debug + Send + Sync {
    fn kind(&self) -> &'static str;
    /// Exact expansion with every exponent below `prec`.
    fn expand(&self, prec: i64) -> Result<QSeries>;
    /// Bound on the precision this generator can supply, if any.
    fn max_prec(&self) -> Option<i64> {
        None
    }
    fn provenance(&self) -> Option<&str> {
        None
    }
}

/// What a builder may need besides the generator's own config entry.
pub struct BuildContext<'a> {
    pub level: u64,
    pub load_seed: &'a dyn Fn(&str) -> Result<String>,
}

pub type Builder = fn(&Value, &BuildContext) -> Result<Box<dyn Generator>>;

pub struct GeneratorRegistry {
    builders: BTreeMap<String, Builder>,
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        GeneratorRegistry { builders: BTreeMap::new() }
    }

    pub fn register(&mut self, kind: &str, builder: Builder) {
        self.builders.insert(kind.to_string(), builder);
    }

    pub fn kinds(&self) -> Vec<&str> {
        self.builders.keys().map(|k| k.as_str()).collect()
    }

    pub fn build(&self, cfg: &Value, ctx: &BuildContext) -> Result<Box<dyn Generator>> {
        let kind = cfg
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Config("generator entry without a `kind`".into()))?;
        let builder = self
            .builders
            .get(kind)
            .ok_or_else(|| Error::Config(format!("unknown generator kind {kind:?}")))?;
        builder(cfg, ctx)
    }
}

impl Default for GeneratorRegistry {
    fn default() -> Self {
        let mut r = GeneratorRegistry::empty();
        r.register("eta_quotient", EtaGenerator::from_config);
        r.register("orbit_trace", TraceGenerator::from_config);
        r.register("seed_series", SeedGenerator::from_config);
        r.register("klein_j", KleinJ::from_config);
        r
    }
}

fn parse_exponents(map: &BTreeMap<String, i64>) -> Result<Vec<(i64, i64)>> {
    map.iter()
        .map(|(k, &r)| {
            k.trim()
                .parse::<i64>()
                .map(|a| (a, r))
                .map_err(|_| Error::Config(format!("bad eta index {k:?}")))
        })
        .collect()
}

#[derive(Debug)]
pub struct EtaGenerator {
    pub quotient: EtaQuotient,
}

#[derive(Deserialize)]
struct EtaConfig {
    exponents: BTreeMap<String, i64>,
    #[serde(default)]
    generalized: bool,
}

impl EtaGenerator {
    fn from_config(v: &Value, ctx: &BuildContext) -> Result<Box<dyn Generator>> {
        let c: EtaConfig = serde_json::from_value(v.clone())?;
        let exps = parse_exponents(&c.exponents)?;
        let quotient = if c.generalized {
            EtaQuotient::generalized(ctx.level, &exps)?
        } else {
            let q = EtaQuotient::classical(ctx.level, &exps)?;
            if !q.classical_modular() || q.exponents.values().sum::<i64>() != 0 {
                return Err(Error::Generator(format!("{exps:?} is not a modular function on Γ₀({})", ctx.level)));
            }
            q
        };
        Ok(Box::new(EtaGenerator { quotient }))
    }
}

impl Generator for EtaGenerator {
    fn kind(&self) -> &'static str {
        "eta_quotient"
    }
    fn expand(&self, prec: i64) -> Result<QSeries> {
        let s = eta_expand(&self.quotient, prec)?;
        if !s.is_integral() {
            return Err(Error::NonIntegral("eta quotient has fractional exponents".into()));
        }
        Ok(s)
    }
}

/// Trace over Γ₀(N)/Γ of a product of generalized eta quotients.
#[derive(Debug)]
pub struct TraceGenerator {
    pub product: EtaQuotient,
    pub orbit: Vec<i64>,
    pub multipliers: Vec<CycNumber>,
    pub selection: Vec<u32>,
}

#[derive(Deserialize)]
struct TraceConfig {
    exponents: BTreeMap<String, i64>,
    orbit: Vec<i64>,
    #[serde(default)]
    multipliers: Vec<String>,
    #[serde(default)]
    cusp_orders: Vec<Vec<i64>>,
    product: Option<Vec<u32>>,
    target: Option<i64>,
    #[serde(default = "default_bound")]
    search_bound: u32,
}

fn default_bound() -> u32 {
    3
}

impl TraceGenerator {
    fn from_config(v: &Value, ctx: &BuildContext) -> Result<Box<dyn Generator>> {
        let c: TraceConfig = serde_json::from_value(v.clone())?;
        let base = EtaQuotient::generalized(ctx.level, &parse_exponents(&c.exponents)?)?;
        let selection = match (c.product, c.target) {
            (Some(p), _) => p,
            (None, Some(t)) => exponent_search(&c.cusp_orders, t, c.search_bound)?,
            (None, None) => {
                let mut x = vec![0; c.orbit.len()];
                x[0] = 1;
                x
            }
        };
        if selection.len() != c.orbit.len() {
            return Err(Error::Config("product vector length differs from orbit length".into()));
        }
        let multipliers = c.multipliers.iter().map(|s| parse_cyc(s)).collect::<Result<Vec<_>>>()?;
        let product = orbit_product(&base, &c.orbit, &selection);
        Ok(Box::new(TraceGenerator { product, orbit: c.orbit, multipliers, selection }))
    }
}

impl Generator for TraceGenerator {
    fn kind(&self) -> &'static str {
        "orbit_trace"
    }
    fn expand(&self, prec: i64) -> Result<QSeries> {
        orbit_trace(&self.product, &self.orbit, &self.multipliers, prec)
    }
}

/// Fixed series read from a file in the `exponent<TAB>coefficient` format.
#[derive(Debug)]
pub struct SeedGenerator {
    pub series: QSeries,
    pub provenance: String,
}

#[derive(Deserialize)]
struct SeedConfig {
    seed_series: String,
    #[serde(default)]
    provenance: String,
}

impl SeedGenerator {
    fn from_config(v: &Value, ctx: &BuildContext) -> Result<Box<dyn Generator>> {
        let c: SeedConfig = serde_json::from_value(v.clone())?;
        let series = parse_series(&(ctx.load_seed)(&c.seed_series)?)?;
        if !series.is_integral() {
            return Err(Error::NonIntegral(format!("seed {} has fractional exponents", c.seed_series)));
        }
        Ok(Box::new(SeedGenerator { series, provenance: c.provenance }))
    }
}

impl Generator for SeedGenerator {
    fn kind(&self) -> &'static str {
        "seed_series"
    }
    fn expand(&self, prec: i64) -> Result<QSeries> {
        if prec > self.series.prec() {
            return Err(Error::Precision(format!(
                "seed series known below q^{}, requested q^{prec}",
                self.series.prec()
            )));
        }
        Ok(self.series.truncate(prec))
    }
    fn max_prec(&self) -> Option<i64> {
        Some(self.series.prec())
    }
    fn provenance(&self) -> Option<&str> {
        Some(&self.provenance)
    }
}

/// j − 744 at level 1.
#[derive(Debug)]
pub struct KleinJ;

impl KleinJ {
    fn from_config(_: &Value, ctx: &BuildContext) -> Result<Box<dyn Generator>> {
        if ctx.level != 1 {
            return Err(Error::Config("klein_j is a level-1 generator".into()));
        }
        Ok(Box::new(KleinJ))
    }
}

impl Generator for KleinJ {
    fn kind(&self) -> &'static str {
        "klein_j"
    }
    fn expand(&self, prec: i64) -> Result<QSeries> {
        Ok(klein_j_minus_744(prec))
    }
}

/// Generator wrapper for an arbitrary in-memory series (tests, seeds derived at runtime).
#[derive(Debug)]
pub struct FixedSeries(pub QSeries);

impl Generator for FixedSeries {
    fn kind(&self) -> &'static str {
        "fixed"
    }
    fn expand(&self, prec: i64) -> Result<QSeries> {
        if prec > self.0.prec() {
            return Err(Error::Precision(format!("series known below q^{}", self.0.prec())));
        }
        Ok(self.0.truncate(prec))
    }
    fn max_prec(&self) -> Option<i64> {
        Some(self.0.prec())
    }
}
