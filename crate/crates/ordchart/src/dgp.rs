//! Data-generating processes for the run-length studies.
//!
//! `IidNormal` is the in-control model; the five dependent families are the
//! out-of-control alternatives. Standard-normal innovations come from the
//! Marsaglia polar method, standard exponentials from the inverse CDF
//! `-ln(1 - U)`; both consume the crate's ChaCha12 substreams, so a
//! `(spec, seed)` pair fixes the generated series exactly.
//!
//! Initialization aims at stationarity from the first monitored observation:
//! AR(1) starts from its closed-form stationary normal, TEAR(1) from its
//! stationary Exp(1) marginal, QMA(1) from one prior innovation, and the
//! AAR(1)/QAR(1) recursions (no closed-form stationary law) warm up through a
//! burn-in, 500 steps by default.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::rng::{self, StreamDomain};

/// Model family with its dependence parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dgp {
    /// I.i.d. standard normal: the in-control model.
    IidNormal,
    /// `X_t = alpha * X_{t-1} + e_t`, `e ~ N(0,1)`; requires `|alpha| < 1`.
    Ar1 { alpha: f64 },
    /// `X_t = B_t * X_{t-1} + (1 - alpha) * e_t` with `B_t ~ Bernoulli(alpha)`
    /// and `e ~ Exp(1)`; requires `0 <= alpha < 1`. Stationary marginal Exp(1).
    Tear1 { alpha: f64 },
    /// `X_t = alpha * |X_{t-1}| + e_t`, `e ~ N(0,1)`.
    Aar1 { alpha: f64 },
    /// `X_t = alpha * X_{t-1}^2 + e_t`, `e ~ N(0,1)`. The quadratic recursion
    /// is only quasi-stable; keep `alpha` small (about 0.3 or less, the usual
    /// tabulated range) so escapes stay rare. Escaped paths saturate instead
    /// of overflowing; see [`DgpState::next_value`].
    Qar1 { alpha: f64 },
    /// `X_t = e_t + beta * e_{t-1}^2`, `e ~ N(0,1)`; 1-dependent.
    Qma1 { beta: f64 },
}

impl Dgp {
    fn validate(self) -> Result<(), Error> {
        match self {
            Dgp::IidNormal => Ok(()),
            Dgp::Ar1 { alpha } => {
                if alpha.is_finite() && alpha.abs() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidDgp(format!(
                        "ar1 requires |alpha| < 1, got {alpha}"
                    )))
                }
            }
            Dgp::Tear1 { alpha } => {
                if alpha.is_finite() && (0.0..1.0).contains(&alpha) {
                    Ok(())
                } else {
                    Err(Error::InvalidDgp(format!(
                        "tear1 requires 0 <= alpha < 1, got {alpha}"
                    )))
                }
            }
            Dgp::Aar1 { alpha } | Dgp::Qar1 { alpha } => {
                if alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidDgp("alpha must be finite".into()))
                }
            }
            Dgp::Qma1 { beta } => {
                if beta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidDgp("beta must be finite".into()))
                }
            }
        }
    }

    const fn default_burn_in(self) -> u32 {
        match self {
            Dgp::Aar1 { .. } | Dgp::Qar1 { .. } => 500,
            _ => 0,
        }
    }
}

/// A validated model plus its initialization burn-in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DgpSpec {
    model: Dgp,
    burn_in: u32,
}

impl DgpSpec {
    /// Validates the parameter range and applies the family's default burn-in.
    pub fn new(model: Dgp) -> Result<DgpSpec, Error> {
        model.validate()?;
        Ok(DgpSpec {
            model,
            burn_in: model.default_burn_in(),
        })
    }

    /// Shorthand for the in-control model.
    pub fn iid_normal() -> DgpSpec {
        DgpSpec {
            model: Dgp::IidNormal,
            burn_in: 0,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u32) -> DgpSpec {
        self.burn_in = burn_in;
        self
    }

    pub fn model(&self) -> Dgp {
        self.model
    }

    pub fn burn_in(&self) -> u32 {
        self.burn_in
    }
}

impl fmt::Display for Dgp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dgp::IidNormal => write!(f, "iid-normal"),
            Dgp::Ar1 { alpha } => write!(f, "ar1:alpha={alpha}"),
            Dgp::Tear1 { alpha } => write!(f, "tear1:alpha={alpha}"),
            Dgp::Aar1 { alpha } => write!(f, "aar1:alpha={alpha}"),
            Dgp::Qar1 { alpha } => write!(f, "qar1:alpha={alpha}"),
            Dgp::Qma1 { beta } => write!(f, "qma1:beta={beta}"),
        }
    }
}

impl fmt::Display for DgpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.model)?;
        if self.burn_in != self.model.default_burn_in() {
            write!(f, ":burn-in={}", self.burn_in)?;
        }
        Ok(())
    }
}

/// Canonical text form: `iid-normal`, `ar1:alpha=0.8`, `tear1:alpha=0.5`,
/// `aar1:alpha=0.4`, `qar1:alpha=0.25`, `qma1:beta=0.4`, each optionally
/// followed by `:burn-in=N`.
impl FromStr for DgpSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = s.split(':');
        let family = parts.next().unwrap_or_default();
        let mut alpha = None;
        let mut beta = None;
        let mut burn_in = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidDgp(format!("expected key=value, got `{part}`")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| Error::InvalidDgp(format!("cannot parse `{value}` as a number")))?;
            match key {
                "alpha" => alpha = Some(value),
                "beta" => beta = Some(value),
                "burn-in" | "burn_in" => {
                    if value < 0.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                        return Err(Error::InvalidDgp(format!("invalid burn-in `{value}`")));
                    }
                    burn_in = Some(value as u32);
                }
                other => return Err(Error::InvalidDgp(format!("unknown key `{other}`"))),
            }
        }
        let need_alpha = |name: &str| {
            alpha.ok_or_else(|| Error::InvalidDgp(format!("{name} needs alpha=<value>")))
        };
        let model = match family {
            "iid-normal" | "iid" => Dgp::IidNormal,
            "ar1" => Dgp::Ar1 {
                alpha: need_alpha("ar1")?,
            },
            "tear1" => Dgp::Tear1 {
                alpha: need_alpha("tear1")?,
            },
            "aar1" => Dgp::Aar1 {
                alpha: need_alpha("aar1")?,
            },
            "qar1" => Dgp::Qar1 {
                alpha: need_alpha("qar1")?,
            },
            "qma1" => Dgp::Qma1 {
                beta: beta.ok_or_else(|| Error::InvalidDgp("qma1 needs beta=<value>".into()))?,
            },
            other => return Err(Error::UnknownDgpFamily(other.to_string())),
        };
        let mut spec = DgpSpec::new(model)?;
        if let Some(b) = burn_in {
            spec = spec.with_burn_in(b);
        }
        Ok(spec)
    }
}

/// Magnitude cap on the recursion state. Keeps the quadratic families inside
/// f64 range; an escaped QAR(1) path saturates into an exactly constant
/// series (which any chart flags within a few steps) instead of overflowing
/// to infinity.
const CARRY_CAP: f64 = 1e150;

/// During burn-in an escaped quadratic path is restarted from zero; escapes
/// during the monitored phase are left alone — they are exactly the kind of
/// dependence a chart should see.
const BURN_IN_ESCAPE: f64 = 1e6;

/// Evolving generator state. Single-writer; independent states on independent
/// substreams can run on any number of threads.
#[derive(Clone, Debug)]
pub struct DgpState {
    spec: DgpSpec,
    carry: f64,
    rng: ChaCha12Rng,
    spare_normal: Option<f64>,
}

impl DgpState {
    /// Position the process at its first monitored observation, drawing the
    /// initial state and consuming the spec's burn-in.
    pub fn init(spec: DgpSpec, rng: ChaCha12Rng) -> DgpState {
        let mut state = DgpState {
            spec,
            carry: 0.0,
            rng,
            spare_normal: None,
        };
        state.carry = match spec.model() {
            Dgp::IidNormal => 0.0,
            Dgp::Ar1 { alpha } => state.normal() / (1.0 - alpha * alpha).sqrt(),
            Dgp::Tear1 { .. } => state.exp1(),
            Dgp::Aar1 { .. } | Dgp::Qar1 { .. } => 0.0,
            Dgp::Qma1 { .. } => state.normal(),
        };
        let quadratic = matches!(spec.model(), Dgp::Qar1 { .. });
        for _ in 0..spec.burn_in() {
            state.next_value();
            if quadratic && state.carry.abs() > BURN_IN_ESCAPE {
                state.carry = 0.0;
            }
        }
        state
    }

    /// State on the generate substream of `seed`.
    pub fn new(spec: DgpSpec, seed: u64) -> DgpState {
        DgpState::init(spec, rng::substream(seed, StreamDomain::Generate, 0))
    }

    /// Next observation; always finite.
    pub fn next_value(&mut self) -> f64 {
        match self.spec.model() {
            Dgp::IidNormal => self.normal(),
            Dgp::Ar1 { alpha } => {
                let x = alpha * self.carry + self.normal();
                self.carry = x;
                x
            }
            Dgp::Tear1 { alpha } => {
                let keep = self.uniform() < alpha;
                let innovation = (1.0 - alpha) * self.exp1();
                let x = if keep {
                    self.carry + innovation
                } else {
                    innovation
                };
                self.carry = x;
                x
            }
            Dgp::Aar1 { alpha } => {
                let x = alpha * self.carry.abs() + self.normal();
                self.carry = x;
                x
            }
            Dgp::Qar1 { alpha } => {
                let x = alpha * self.carry * self.carry + self.normal();
                self.carry = x.clamp(-CARRY_CAP, CARRY_CAP);
                x
            }
            Dgp::Qma1 { beta } => {
                let innovation = self.normal();
                let x = innovation + beta * self.carry * self.carry;
                self.carry = innovation;
                x
            }
        }
    }

    fn uniform(&mut self) -> f64 {
        // top 53 bits -> [0, 1)
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via the Marsaglia polar method; pairs are generated and
    /// the spare is cached.
    fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * factor);
                return u * factor;
            }
        }
    }

    /// Standard exponential via the inverse CDF of the uniform.
    fn exp1(&mut self) -> f64 {
        -(1.0 - self.uniform()).ln()
    }
}

/// `n` observations from a fresh state; bit-reproducible for fixed
/// `(spec, seed)`.
pub fn generate(spec: DgpSpec, n: usize, seed: u64) -> Result<Vec<f64>, Error> {
    if n == 0 {
        return Err(Error::EmptyGeneration);
    }
    let mut state = DgpState::new(spec, seed);
    Ok((0..n).map(|_| state.next_value()).collect())
}
