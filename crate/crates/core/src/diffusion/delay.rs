use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, Exp, Gamma, Normal, Uniform};
use statrs::distribution::{Continuous, ContinuousCDF};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::seed::{self, Rng};

/// One component of a normal mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// Law of the transmission delay across a single edge.
///
/// Normal and mixture laws are truncated at zero by resampling; their
/// [`raw_moment`](DelayFamily::raw_moment) reports the nominal (untruncated)
/// moments, which is what an observer is told.
#[derive(Debug, Clone, PartialEq)]
pub enum DelayFamily {
    /// Zero-variance delay.
    Deterministic {
        value: f64,
    },
    Exponential {
        mean: f64,
    },
    Gamma {
        shape: f64,
        scale: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
    },
    NormalMixture {
        components: Vec<NormalComponent>,
    },
}

impl DelayFamily {
    pub fn exponential(mean: f64) -> Self {
        DelayFamily::Exponential { mean }
    }

    /// Equal-weight mixture of two normals with a shared deviation.
    pub fn bimodal(mean1: f64, mean2: f64, sd: f64) -> Self {
        DelayFamily::NormalMixture {
            components: vec![
                NormalComponent {
                    weight: 0.5,
                    mean: mean1,
                    sd,
                },
                NormalComponent {
                    weight: 0.5,
                    mean: mean2,
                    sd,
                },
            ],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DelayFamily::Deterministic { .. } => "deterministic",
            DelayFamily::Exponential { .. } => "exponential",
            DelayFamily::Gamma { .. } => "gamma",
            DelayFamily::Normal { .. } => "normal",
            DelayFamily::NormalMixture { .. } => "normal_mixture",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            DelayFamily::Deterministic { value } if !(*value > 0.0 && value.is_finite()) => {
                bad(format!("deterministic delay must be positive, got {value}"))
            }
            DelayFamily::Exponential { mean } if !(*mean > 0.0 && mean.is_finite()) => {
                bad(format!("exponential mean must be positive, got {mean}"))
            }
            DelayFamily::Gamma { shape, scale } if !(*shape > 0.0 && *scale > 0.0) => bad(format!(
                "gamma needs positive shape and scale, got {shape}, {scale}"
            )),
            DelayFamily::Normal { mean, sd } if !(*mean > 0.0 && *sd >= 0.0) => bad(format!(
                "normal needs positive mean and non-negative sd, got {mean}, {sd}"
            )),
            DelayFamily::NormalMixture { components } => {
                if components.is_empty() {
                    return bad("mixture needs at least one component".into());
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if components
                    .iter()
                    .any(|c| c.weight <= 0.0 || c.sd < 0.0 || c.mean <= 0.0)
                    || (total - 1.0).abs() > 1e-9
                {
                    return bad(
                        "mixture weights must be positive and sum to 1, means positive".into(),
                    );
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Nominal `k`-th raw moment, `k >= 1`.
    pub fn raw_moment(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(Error::UnsupportedMoment {
                order: k,
                family: self.name().into(),
            });
        }
        Ok(match self {
            DelayFamily::Deterministic { value } => value.powi(k as i32),
            DelayFamily::Exponential { mean } => (1..=k).map(|i| i as f64 * mean).product(),
            DelayFamily::Gamma { shape, scale } => {
                (0..k).map(|i| (shape + i as f64) * scale).product()
            }
            DelayFamily::Normal { mean, sd } => normal_raw_moment(*mean, *sd, k),
            DelayFamily::NormalMixture { components } => components
                .iter()
                .map(|c| c.weight * normal_raw_moment(c.mean, c.sd, k))
                .sum(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1).expect("first moment is always defined")
    }

    /// Cdf of the sampled (post-truncation) law.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            DelayFamily::Deterministic { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            DelayFamily::Exponential { mean } => 1.0 - (-x / mean).exp(),
            DelayFamily::Gamma { shape, scale } => {
                statrs::distribution::Gamma::new(*shape, 1.0 / scale)
                    .expect("validated gamma parameters")
                    .cdf(x)
            }
            DelayFamily::Normal { mean, sd } => {
                let (num, den) = truncated_normal_parts(*mean, *sd, x);
                num / den
            }
            DelayFamily::NormalMixture { components } => {
                let (mut num, mut den) = (0.0, 0.0);
                for c in components {
                    let (a, b) = truncated_normal_parts(c.mean, c.sd, x);
                    num += c.weight * a;
                    den += c.weight * b;
                }
                num / den
            }
        }
    }

    /// Density of the sampled law, where one exists.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        if x < 0.0 {
            return Some(0.0);
        }
        match self {
            DelayFamily::Deterministic { .. } => None,
            DelayFamily::Exponential { mean } => Some((-x / mean).exp() / mean),
            DelayFamily::Gamma { shape, scale } => Some(
                statrs::distribution::Gamma::new(*shape, 1.0 / scale)
                    .expect("validated gamma parameters")
                    .pdf(x),
            ),
            DelayFamily::Normal { mean, sd } => {
                let n = statrs::distribution::Normal::new(*mean, *sd).ok()?;
                Some(n.pdf(x) / (1.0 - n.cdf(0.0)))
            }
            DelayFamily::NormalMixture { components } => {
                let mut num = 0.0;
                let mut den = 0.0;
                for c in components {
                    let n = statrs::distribution::Normal::new(c.mean, c.sd).ok()?;
                    num += c.weight * n.pdf(x);
                    den += c.weight * (1.0 - n.cdf(0.0));
                }
                Some(num / den)
            }
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match self {
            DelayFamily::Deterministic { value } => *value,
            DelayFamily::Exponential { mean } => {
                Exp::new(1.0 / mean).expect("validated rate").sample(rng)
            }
            DelayFamily::Gamma { shape, scale } => Gamma::new(*shape, *scale)
                .expect("validated gamma")
                .sample(rng),
            DelayFamily::Normal { mean, sd } => positive_normal(*mean, *sd, rng),
            DelayFamily::NormalMixture { components } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = components.last().expect("validated mixture");
                for c in components {
                    acc += c.weight;
                    if u < acc {
                        pick = c;
                        break;
                    }
                }
                // Truncation applies to the mixture: redraw the component too.
                loop {
                    let x = Normal::new(pick.mean, pick.sd)
                        .expect("validated normal")
                        .sample(rng);
                    if x > 0.0 {
                        return x;
                    }
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    for c in components {
                        acc += c.weight;
                        if u < acc {
                            pick = c;
                            break;
                        }
                    }
                }
            }
        }
    }
}

fn positive_normal(mean: f64, sd: f64, rng: &mut Rng) -> f64 {
    let dist = Normal::new(mean, sd).expect("validated normal");
    loop {
        let x = dist.sample(rng);
        if x > 0.0 {
            return x;
        }
    }
}

fn normal_raw_moment(mean: f64, sd: f64, k: u32) -> f64 {
    let var = sd * sd;
    let (mut prev, mut cur) = (1.0, mean);
    for j in 2..=k {
        let next = mean * cur + (j - 1) as f64 * var * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn truncated_normal_parts(mean: f64, sd: f64, x: f64) -> (f64, f64) {
    if sd == 0.0 {
        return (if x >= mean { 1.0 } else { 0.0 }, 1.0);
    }
    let n = statrs::distribution::Normal::new(mean, sd).expect("validated normal");
    let below_zero = n.cdf(0.0);
    (n.cdf(x) - below_zero, 1.0 - below_zero)
}

impl fmt::Display for DelayFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayFamily::Deterministic { value } => write!(f, "det:{value}"),
            DelayFamily::Exponential { mean } => write!(f, "exp:{mean}"),
            DelayFamily::Gamma { shape, scale } => write!(f, "gamma:{shape}:{scale}"),
            DelayFamily::Normal { mean, sd } => write!(f, "normal:{mean}:{sd}"),
            DelayFamily::NormalMixture { components } => {
                write!(f, "mix")?;
                for c in components {
                    write!(f, ":{}:{}:{}", c.weight, c.mean, c.sd)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `det:v`, `exp:mean`, `gamma:shape:scale`, `normal:mean:sd`,
/// `bimodal:mean1:mean2:sd` and `mix:w:mean:sd[:w:mean:sd...]`.
impl FromStr for DelayFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let head = parts.next().unwrap_or_default().to_ascii_lowercase();
        let nums: Vec<f64> = parts
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("bad number {p:?} in delay spec {s:?}"))
                })
            })
            .collect::<Result<_>>()?;
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "delay family {head:?} takes {k} parameters, got {}",
                    nums.len()
                )))
            }
        };
        let family = match head.as_str() {
            "det" | "deterministic" => {
                arity(1)?;
                DelayFamily::Deterministic { value: nums[0] }
            }
            "exp" | "exponential" => {
                arity(1)?;
                DelayFamily::Exponential { mean: nums[0] }
            }
            "gamma" => {
                arity(2)?;
                DelayFamily::Gamma {
                    shape: nums[0],
                    scale: nums[1],
                }
            }
            "normal" => {
                arity(2)?;
                DelayFamily::Normal {
                    mean: nums[0],
                    sd: nums[1],
                }
            }
            "bimodal" => {
                arity(3)?;
                DelayFamily::bimodal(nums[0], nums[1], nums[2])
            }
            "mix" | "mixture" => {
                if nums.is_empty() || !nums.len().is_multiple_of(3) {
                    return Err(Error::InvalidParameter(format!(
                        "mixture needs weight:mean:sd triples, got {s:?}"
                    )));
                }
                DelayFamily::NormalMixture {
                    components: nums
                        .chunks(3)
                        .map(|c| NormalComponent {
                            weight: c[0],
                            mean: c[1],
                            sd: c[2],
                        })
                        .collect(),
                }
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown delay family {head:?}"
                )))
            }
        };
        family.validate()?;
        Ok(family)
    }
}

/// How delays are assigned to the edges of a network.
#[derive(Debug, Clone, PartialEq)]
pub enum DelayMode {
    /// Every edge uses the same law.
    Homogeneous(DelayFamily),
    /// Each edge has its own law.
    PerEdge(BTreeMap<Edge, DelayFamily>),
}

/// Per-edge delay laws plus the edge-averaged moments an observer is given.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySpec {
    mode: DelayMode,
    declared: [f64; 2],
}

impl DelaySpec {
    pub fn homogeneous(family: DelayFamily) -> Result<Self> {
        family.validate()?;
        let declared = [family.raw_moment(1)?, family.raw_moment(2)?];
        Ok(DelaySpec {
            mode: DelayMode::Homogeneous(family),
            declared,
        })
    }

    pub fn per_edge(laws: BTreeMap<Edge, DelayFamily>) -> Result<Self> {
        if laws.is_empty() {
            return Err(Error::InvalidParameter(
                "per-edge delay spec has no edges".into(),
            ));
        }
        for f in laws.values() {
            f.validate()?;
        }
        let mut spec = DelaySpec {
            mode: DelayMode::PerEdge(laws),
            declared: [0.0; 2],
        };
        spec.declared = [spec.declared_moment(1)?, spec.declared_moment(2)?];
        Ok(spec)
    }

    pub fn mode(&self) -> &DelayMode {
        &self.mode
    }

    /// Declared edge-average mean.
    pub fn mu1(&self) -> f64 {
        self.declared[0]
    }

    /// Declared edge-average second raw moment.
    pub fn mu2(&self) -> f64 {
        self.declared[1]
    }

    /// Analytic edge-average `k`-th raw moment.
    pub fn declared_moment(&self, k: u32) -> Result<f64> {
        match &self.mode {
            DelayMode::Homogeneous(f) => f.raw_moment(k),
            DelayMode::PerEdge(laws) => {
                let mut total = 0.0;
                for f in laws.values() {
                    total += f.raw_moment(k)?;
                }
                Ok(total / laws.len() as f64)
            }
        }
    }

    /// The single law of a homogeneous spec.
    pub fn family(&self) -> Option<&DelayFamily> {
        match &self.mode {
            DelayMode::Homogeneous(f) => Some(f),
            DelayMode::PerEdge(_) => None,
        }
    }

    /// Resolves the law of every edge of `g`, in `g.edges()` order.
    pub fn bind(&self, g: &Graph) -> Result<Vec<DelayFamily>> {
        match &self.mode {
            DelayMode::Homogeneous(f) => Ok(vec![f.clone(); g.edge_count()]),
            DelayMode::PerEdge(laws) => g
                .edges()
                .iter()
                .map(|e| {
                    laws.get(e).cloned().ok_or_else(|| {
                        Error::InvalidParameter(format!("no delay law for edge {e:?}"))
                    })
                })
                .collect(),
        }
    }
}

impl fmt::Display for DelaySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mode {
            DelayMode::Homogeneous(fam) => write!(f, "{fam}"),
            DelayMode::PerEdge(laws) => {
                write!(f, "per_edge({} edges, mu1={:.6})", laws.len(), self.mu1())
            }
        }
    }
}

/// Draws one mean per edge uniformly from `[lo, hi]` and rescales
/// `base` to that mean (exponential: the mean itself; gamma: the scale;
/// normal and mixtures: a shift of every component).
pub fn make_heterogeneous(
    g: &Graph,
    base: &DelayFamily,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<DelaySpec> {
    base.validate()?;
    if !(lo > 0.0 && lo <= hi) {
        return Err(Error::InvalidParameter(format!(
            "mean range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let mut rng = seed::rng(seed);
    let dist =
        Uniform::new_inclusive(lo, hi).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let base_mean = base.mean();
    let mut laws = BTreeMap::new();
    for &(u, v) in g.edges() {
        let m = if lo == hi { lo } else { dist.sample(&mut rng) };
        let law = match base {
            DelayFamily::Deterministic { .. } => DelayFamily::Deterministic { value: m },
            DelayFamily::Exponential { .. } => DelayFamily::Exponential { mean: m },
            DelayFamily::Gamma { shape, .. } => DelayFamily::Gamma {
                shape: *shape,
                scale: m / shape,
            },
            DelayFamily::Normal { sd, .. } => DelayFamily::Normal { mean: m, sd: *sd },
            DelayFamily::NormalMixture { components } => DelayFamily::NormalMixture {
                components: components
                    .iter()
                    .map(|c| NormalComponent {
                        mean: c.mean - base_mean + m,
                        ..*c
                    })
                    .collect(),
            },
        };
        law.validate()?;
        laws.insert(edge(u, v), law);
    }
    if laws.is_empty() {
        return Err(Error::InvalidParameter("graph has no edges".into()));
    }
    DelaySpec::per_edge(laws)
}
