//! Herbrand functions of totally ramified p-towers.
//!
//! A [`PlFunc`] is a continuous, strictly increasing, piecewise-linear map of
//! the nonnegative rationals fixing 0. The lower-numbering function `psi`
//! (upper to lower) of a tower is convex with slopes `1, p, p^2, ...`; its
//! inverse `phi` is concave with slopes `1, 1/p, 1/p^2, ...`.
//!
//! For a degree-p step with lower break `i`:
//!
//! ```text
//! psi(x) = x                  for x <= i
//! psi(x) = p*x - (p - 1)*i    for x >  i
//! ```
//!
//! and towers compose as `psi_{L/K} = psi_{L/M} o psi_{M/K}`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{format_rat, from_u64, is_prime, Exact, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HerbrandError {
    #[error("ramification break must be a positive integer, got {0}")]
    NonPositiveBreak(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot evaluate at negative argument {0}")]
    NegativeArgument(String),
    #[error(
        "non-increasing filtration: step {index} has upper break {next}, previous was {previous}"
    )]
    NonIncreasingFiltration {
        index: usize,
        previous: String,
        next: String,
    },
    #[error("tower needs at least one break")]
    EmptyTower,
    #[error("malformed piecewise-linear function: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, HerbrandError>;

/// Exact piecewise-linear increasing function on `[0, inf)` with `f(0) = 0`.
///
/// `slopes[0]` applies on `[0, x_0]`, `slopes[k + 1]` after breakpoint `k`.
/// Adjacent collinear segments are always merged, so two functions are equal
/// iff their data are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PlFuncRepr", into = "PlFuncRepr")]
pub struct PlFunc {
    breakpoints: Vec<(Rat, Rat)>,
    slopes: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct PlFuncRepr {
    breakpoints: Vec<(Exact, Exact)>,
    slopes: Vec<Exact>,
}

impl TryFrom<PlFuncRepr> for PlFunc {
    type Error = HerbrandError;

    fn try_from(r: PlFuncRepr) -> Result<Self> {
        PlFunc::from_parts(
            r.breakpoints.into_iter().map(|(x, y)| (x.0, y.0)).collect(),
            r.slopes.into_iter().map(|s| s.0).collect(),
        )
    }
}

impl From<PlFunc> for PlFuncRepr {
    fn from(f: PlFunc) -> Self {
        PlFuncRepr {
            breakpoints: f
                .breakpoints
                .into_iter()
                .map(|(x, y)| (Exact(x), Exact(y)))
                .collect(),
            slopes: f.slopes.into_iter().map(Exact).collect(),
        }
    }
}

impl PlFunc {
    pub fn identity() -> Self {
        PlFunc {
            breakpoints: Vec::new(),
            slopes: vec![Rat::one()],
        }
    }

    /// Validates continuity, monotonicity and `f(0) = 0`, then normalizes.
    pub fn from_parts(breakpoints: Vec<(Rat, Rat)>, slopes: Vec<Rat>) -> Result<Self> {
        if slopes.len() != breakpoints.len() + 1 {
            return Err(HerbrandError::Malformed(format!(
                "{} breakpoints need {} slopes, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                slopes.len()
            )));
        }
        if let Some(s) = slopes.iter().find(|s| !s.is_positive()) {
            return Err(HerbrandError::Malformed(format!(
                "slope {} is not positive",
                format_rat(s)
            )));
        }
        let mut prev = (Rat::zero(), Rat::zero());
        for (k, (x, y)) in breakpoints.iter().enumerate() {
            if x <= &prev.0 {
                return Err(HerbrandError::Malformed(format!(
                    "breakpoint x-coordinates must be positive and strictly increasing (at {})",
                    format_rat(x)
                )));
            }
            let expected = &prev.1 + &slopes[k] * (x - &prev.0);
            if &expected != y {
                return Err(HerbrandError::Malformed(format!(
                    "discontinuity at x = {}: segment reaches {}, breakpoint says {}",
                    format_rat(x),
                    format_rat(&expected),
                    format_rat(y)
                )));
            }
            prev = (x.clone(), y.clone());
        }
        let mut f = PlFunc {
            breakpoints,
            slopes,
        };
        f.normalize();
        Ok(f)
    }

    fn normalize(&mut self) {
        let mut k = 0;
        while k < self.breakpoints.len() {
            if self.slopes[k] == self.slopes[k + 1] {
                self.breakpoints.remove(k);
                self.slopes.remove(k + 1);
            } else {
                k += 1;
            }
        }
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    /// One slope per segment; the first applies from 0.
    pub fn slopes(&self) -> &[Rat] {
        &self.slopes
    }

    pub fn initial_slope(&self) -> &Rat {
        &self.slopes[0]
    }

    pub fn final_slope(&self) -> &Rat {
        self.slopes.last().expect("at least one slope")
    }

    /// x-coordinates of the breakpoints, i.e. where the slope changes.
    pub fn break_abscissae(&self) -> Vec<Rat> {
        self.breakpoints.iter().map(|(x, _)| x.clone()).collect()
    }

    /// Index of the segment containing `[x, x + dt)`.
    fn segment_at(&self, x: &Rat) -> usize {
        self.breakpoints.partition_point(|(bx, _)| bx <= x)
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if x.is_negative() {
            return Err(HerbrandError::NegativeArgument(format_rat(x)));
        }
        let k = self.segment_at(x);
        Ok(match k {
            0 => &self.slopes[0] * x,
            _ => {
                let (bx, by) = &self.breakpoints[k - 1];
                by + &self.slopes[k] * (x - bx)
            }
        })
    }

    /// Slope of the segment immediately to the right of `x`.
    pub fn right_slope(&self, x: &Rat) -> &Rat {
        &self.slopes[self.segment_at(x)]
    }

    /// Exact inverse; swaps the coordinates of every breakpoint.
    pub fn invert(&self) -> PlFunc {
        PlFunc {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
            slopes: self.slopes.iter().map(|s| s.recip()).collect(),
        }
    }

    /// `self o inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &PlFunc) -> PlFunc {
        let inner_inv = inner.invert();
        let mut xs: Vec<Rat> = inner.break_abscissae();
        for (y, _) in &self.breakpoints {
            xs.push(inner_inv.eval(y).expect("breakpoints are positive"));
        }
        xs.sort();
        xs.dedup();

        let mut breakpoints = Vec::with_capacity(xs.len());
        let mut slopes = Vec::with_capacity(xs.len() + 1);
        slopes.push(self.initial_slope() * inner.initial_slope());
        for x in xs {
            let ix = inner.eval(&x).expect("x is positive");
            let y = self.eval(&ix).expect("x is positive");
            slopes.push(self.right_slope(&ix) * inner.right_slope(&x));
            breakpoints.push((x, y));
        }
        let mut f = PlFunc {
            breakpoints,
            slopes,
        };
        f.normalize();
        f
    }
}

/// Free-function form of [`PlFunc::compose`]: `outer o inner`.
pub fn compose(outer: &PlFunc, inner: &PlFunc) -> PlFunc {
    outer.compose(inner)
}

pub fn invert(f: &PlFunc) -> PlFunc {
    f.invert()
}

pub fn eval(f: &PlFunc, x: &Rat) -> Result<Rat> {
    f.eval(x)
}

/// `psi` of a degree-p step with lower break `i`.
pub fn psi_step(i: u64, p: u64) -> Result<PlFunc> {
    if i == 0 {
        return Err(HerbrandError::NonPositiveBreak(i));
    }
    if !is_prime(p) {
        return Err(HerbrandError::NotPrime(p));
    }
    let i = from_u64(i);
    Ok(PlFunc {
        breakpoints: vec![(i.clone(), i)],
        slopes: vec![Rat::one(), from_u64(p)],
    })
}

/// Herbrand data of a tower `K = K_0 < K_1 < ... < K_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    /// `psi_{K_n/K}`.
    pub psi: PlFunc,
    /// Upper breaks `u_1 < u_2 < ...`, one per step.
    pub upper_breaks: Vec<Rat>,
}

impl Tower {
    pub fn phi(&self) -> PlFunc {
        self.psi.invert()
    }
}

/// Composes the steps of a tower whose `k`-th step `K_k/K_{k-1}` has lower
/// break `relative_lower_breaks[k - 1]`, measured in the numbering of
/// `K_{k-1}`.
pub fn tower_psi(relative_lower_breaks: &[u64], p: u64) -> Result<Tower> {
    if relative_lower_breaks.is_empty() {
        return Err(HerbrandError::EmptyTower);
    }
    let mut psi = PlFunc::identity();
    let mut upper_breaks: Vec<Rat> = Vec::with_capacity(relative_lower_breaks.len());
    for (k, &t) in relative_lower_breaks.iter().enumerate() {
        let step = psi_step(t, p)?;
        let u = psi.invert().eval(&from_u64(t))?;
        if let Some(prev) = upper_breaks.last() {
            if &u <= prev {
                return Err(HerbrandError::NonIncreasingFiltration {
                    index: k + 1,
                    previous: format_rat(prev),
                    next: format_rat(&u),
                });
            }
        }
        psi = step.compose(&psi);
        upper_breaks.push(u);
    }
    Ok(Tower { psi, upper_breaks })
}
