//! Latency model and the setup-delay metrics derived from a slot series.
//!
//! Units: latencies and setup delays in milliseconds, lengths in metres,
//! rates and impacts in percent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::routing::{RoutePath, SlotResult};
use crate::scalar::{consts, Scalar};

/// How the per-node processing delay enters a path's latency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeDelayMode {
    /// `node_delay_ms` for every satellite on the path.
    #[default]
    PerNode,
    /// `node_delay_ms` once per path.
    PerPath,
}

impl std::str::FromStr for NodeDelayMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-node" => Ok(Self::PerNode),
            "per-path" => Ok(Self::PerPath),
            other => Err(Error::Config(format!("node delay mode must be per-node or per-path, got '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct LatencyParams<T> {
    #[serde(default = "default_node_delay")]
    pub node_delay_ms: T,
    #[serde(default)]
    pub node_delay_mode: NodeDelayMode,
    /// Setup delays η_s to evaluate.
    #[serde(default = "default_setup_delays")]
    pub setup_delays_ms: Vec<T>,
    #[serde(default = "default_light_speed")]
    pub light_speed_m_s: T,
}

fn default_node_delay<T: Scalar>() -> T {
    T::one()
}

fn default_setup_delays<T: Scalar>() -> Vec<T> {
    [1.0, 10.0, 100.0, 1000.0].into_iter().map(T::lit).collect()
}

fn default_light_speed<T: Scalar>() -> T {
    T::lit(consts::SPEED_OF_LIGHT_M_S)
}

impl<T: Scalar> Default for LatencyParams<T> {
    fn default() -> Self {
        Self {
            node_delay_ms: default_node_delay(),
            node_delay_mode: NodeDelayMode::default(),
            setup_delays_ms: default_setup_delays(),
            light_speed_m_s: default_light_speed(),
        }
    }
}

impl<T: Scalar> LatencyParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.node_delay_ms >= T::zero()) || !self.node_delay_ms.is_finite() {
            return Err(Error::Config(format!("node_delay_ms must be >= 0, got {}", self.node_delay_ms)));
        }
        if self.setup_delays_ms.is_empty() {
            return Err(Error::Config("setup_delays_ms must be nonempty".into()));
        }
        if let Some(bad) = self.setup_delays_ms.iter().find(|&&d| !(d > T::zero()) || !d.is_finite()) {
            return Err(Error::Config(format!("every setup delay must be > 0 ms, got {bad}")));
        }
        if !(self.light_speed_m_s > T::zero()) {
            return Err(Error::Config("light_speed_m_s must be > 0".into()));
        }
        Ok(())
    }
}

/// Propagation delay over the path's links plus node delay, ms.
pub fn latency_without_setup<T: Scalar>(path: &RoutePath<T>, params: &LatencyParams<T>) -> T {
    let propagation = path.total_length / params.light_speed_m_s * T::lit(1000.0);
    let nodes = match params.node_delay_mode {
        NodeDelayMode::PerNode => T::from_count(path.hop_count()),
        NodeDelayMode::PerPath => T::one(),
    };
    propagation + params.node_delay_ms * nodes
}

/// Percentage of slots whose route changed.
pub fn path_change_rate<T: Scalar>(alphas: &[u8]) -> Result<T> {
    if alphas.is_empty() {
        return Err(Error::Domain("path change rate of an empty slot series".into()));
    }
    let changes = alphas.iter().filter(|&&a| a != 0).count();
    Ok(T::from_count(changes) / T::from_count(alphas.len()) * T::lit(100.0))
}

/// Mean latency once every route change pays the setup delay `eta_s_ms`.
pub fn mean_latency_with_setup<T: Scalar>(mean_without_ms: T, lambda_pct: T, eta_s_ms: T) -> T {
    mean_without_ms + lambda_pct / T::lit(100.0) * eta_s_ms
}

/// Share of the mean latency caused by setup delay, percent.
pub fn impact<T: Scalar>(mean_with_ms: T, mean_without_ms: T) -> Result<T> {
    if !(mean_without_ms > T::zero()) {
        return Err(Error::Domain(format!("impact needs a positive latency, got {mean_without_ms} ms")));
    }
    if mean_with_ms < mean_without_ms {
        return Err(Error::Domain(format!(
            "latency with setup delay ({mean_with_ms} ms) is below latency without ({mean_without_ms} ms)"
        )));
    }
    Ok((mean_with_ms - mean_without_ms) / mean_with_ms * T::lit(100.0))
}

/// Largest setup delay for which the satellite route still matches the fiber baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TolerableDelay<T> {
    Value(T),
    /// The network is slower than fiber even with zero setup delay.
    Nonexistent,
    /// No route changes: any setup delay is tolerable.
    Unbounded,
}

impl<T: Scalar> TolerableDelay<T> {
    pub fn value(&self) -> Option<T> {
        match *self {
            TolerableDelay::Value(v) => Some(v),
            _ => None,
        }
    }
}

pub fn max_tolerable_setup_delay<T: Scalar>(oftn_ms: T, mean_without_ms: T, lambda_pct: T) -> TolerableDelay<T> {
    let margin = oftn_ms - mean_without_ms;
    if margin < T::zero() {
        TolerableDelay::Nonexistent
    } else if lambda_pct <= T::zero() {
        TolerableDelay::Unbounded
    } else {
        TolerableDelay::Value(margin / (lambda_pct / T::lit(100.0)))
    }
}

/// One-way latency of a terrestrial fiber route of `distance_m`, ms.
pub fn oftn_latency<T: Scalar>(distance_m: T) -> T {
    distance_m / T::lit(consts::FIBER_SPEED_M_S) * T::lit(1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopStats<T> {
    pub mean: T,
    pub min: usize,
    pub max: usize,
    /// Paths that contributed (absent paths are skipped).
    pub count: usize,
}

pub fn hop_statistics<'a, T: Scalar>(paths: impl IntoIterator<Item = Option<&'a RoutePath<T>>>) -> Result<HopStats<T>> {
    let mut sum = 0usize;
    let mut count = 0usize;
    let mut min = usize::MAX;
    let mut max = 0usize;
    for p in paths.into_iter().flatten() {
        let h = p.hop_count();
        sum += h;
        count += 1;
        min = min.min(h);
        max = max.max(h);
    }
    if count == 0 {
        return Err(Error::Domain("hop statistics over zero paths".into()));
    }
    Ok(HopStats { mean: T::from_count(sum) / T::from_count(count), min, max, count })
}

/// Aggregates for one (station pair, LISL range) run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioMetrics<T> {
    /// Path change rate λ, percent.
    pub lambda_pct: T,
    pub mean_latency_without_ms: T,
    /// `(η_s, mean latency)` for each configured setup delay.
    pub mean_latency_with_ms: Vec<(T, T)>,
    /// `(η_s, β)` for each configured setup delay.
    pub beta_pct: Vec<(T, T)>,
    #[serde(skip)]
    pub eta_s_max: TolerableDelay<T>,
    pub oftn_latency_ms: T,
    pub terrestrial_distance_m: T,
    pub hops: HopStats<T>,
    pub unreachable_slots: usize,
    pub total_slots: usize,
}

impl<T: Scalar> ScenarioMetrics<T> {
    /// Mean latency at an arbitrary setup delay.
    pub fn mean_with(&self, eta_s_ms: T) -> T {
        mean_latency_with_setup(self.mean_latency_without_ms, self.lambda_pct, eta_s_ms)
    }
}

/// Reduces a slot series to [`ScenarioMetrics`].
///
/// λ counts every slot; latency means cover reachable slots only.
pub fn aggregate<T: Scalar>(
    slots: &[SlotResult<T>],
    params: &LatencyParams<T>,
    terrestrial_distance_m: T,
) -> Result<ScenarioMetrics<T>> {
    let alphas: Vec<u8> = slots.iter().map(|s| s.alpha).collect();
    let lambda_pct = path_change_rate(&alphas)?;
    let reachable: Vec<T> = slots.iter().filter_map(|s| s.latency.as_ref().map(|l| l.without_ms)).collect();
    if reachable.is_empty() {
        return Err(Error::Input("destination unreachable in every slot".into()));
    }
    let mean_without = reachable.iter().fold(T::zero(), |acc, &l| acc + l) / T::from_count(reachable.len());
    let mut mean_with = Vec::with_capacity(params.setup_delays_ms.len());
    let mut beta = Vec::with_capacity(params.setup_delays_ms.len());
    for &eta in &params.setup_delays_ms {
        let with = mean_latency_with_setup(mean_without, lambda_pct, eta);
        mean_with.push((eta, with));
        beta.push((eta, impact(with, mean_without)?));
    }
    let oftn = oftn_latency(terrestrial_distance_m);
    Ok(ScenarioMetrics {
        lambda_pct,
        mean_latency_without_ms: mean_without,
        mean_latency_with_ms: mean_with,
        beta_pct: beta,
        eta_s_max: max_tolerable_setup_delay(oftn, mean_without, lambda_pct),
        oftn_latency_ms: oftn,
        terrestrial_distance_m,
        hops: hop_statistics(slots.iter().map(|s| s.path.as_ref()))?,
        unreachable_slots: slots.len() - reachable.len(),
        total_slots: slots.len(),
    })
}

/// Which parameter differs between the two compared runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioAxis {
    LislRange,
    Distance,
}

/// Ratios between two runs `a` and `b` for one setup delay. `None` marks a
/// ratio whose denominator is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionRatioReport<T> {
    pub axis: RatioAxis,
    pub eta_s_ms: T,
    pub lambda_ratio: Option<T>,
    pub without_ratio: Option<T>,
    pub with_ratio: Option<T>,
    /// λa/λb > without-ratio.
    pub lambda_exceeds_latency_ratio: Option<bool>,
    /// with-ratio > without-ratio.
    pub with_ratio_exceeds_without: Option<bool>,
}

fn ratio<T: Scalar>(num: T, den: T) -> Option<T> {
    (den != T::zero()).then(|| num / den)
}

pub fn reduction_ratio_report<T: Scalar>(
    a: &ScenarioMetrics<T>,
    b: &ScenarioMetrics<T>,
    eta_s_ms: T,
    axis: RatioAxis,
) -> ReductionRatioReport<T> {
    let lambda_ratio = ratio(a.lambda_pct, b.lambda_pct);
    let without_ratio = ratio(a.mean_latency_without_ms, b.mean_latency_without_ms);
    let with_ratio = ratio(a.mean_with(eta_s_ms), b.mean_with(eta_s_ms));
    let gt = |x: Option<T>, y: Option<T>| Some(x? > y?);
    ReductionRatioReport {
        axis,
        eta_s_ms,
        lambda_ratio,
        without_ratio,
        with_ratio,
        lambda_exceeds_latency_ratio: gt(lambda_ratio, without_ratio),
        with_ratio_exceeds_without: gt(with_ratio, without_ratio),
    }
}
