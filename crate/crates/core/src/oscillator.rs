//! Classical harmonic oscillator with Hamiltonian `H = ½(p² + ω²q²)`, its
//! quasi-canonical coordinates, and a finite-difference Poisson bracket.
//!
//! The quasi-canonical pair `(Q, P)` is defined implicitly by
//!
//! ```text
//! P² − Q² = 2p,      QP = ωq,
//! ```
//!
//! which forces `P² + Q² = 2√(2H)`. With the initial data `q(0) = 0`,
//! `p(0) = p₀ > 0` the branch with `P(0) = +√(2p₀)` is selected; along the
//! flow the pair rotates at half the oscillator frequency.

use crate::error::{Error, Result};

/// Oscillator constants: angular frequency `ω`, initial momentum `p₀ > 0`,
/// and the conserved energy `E = p₀²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscParams {
    omega: f64,
    p0: f64,
    energy: f64,
}

impl OscParams {
    /// Builds parameters from `ω > 0` and `p₀ > 0`; the energy is derived.
    pub fn new(omega: f64, p0: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if !(p0 > 0.0) || !p0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "p0 must be positive and finite, got {p0}"
            )));
        }
        Ok(OscParams {
            omega,
            p0,
            energy: 0.5 * p0 * p0,
        })
    }

    /// Builds parameters from `ω > 0` and `E > 0`, with `p₀ = √(2E)`.
    pub fn from_energy(omega: f64, energy: f64) -> Result<Self> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "energy must be positive and finite, got {energy}"
            )));
        }
        Self::new(omega, (2.0 * energy).sqrt())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// One oscillator period `2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}

/// A phase-space point at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState {
    pub t: f64,
    pub q: f64,
    pub p: f64,
}

/// The quasi-canonical pair; `q` holds `Q` and `p` holds `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiState {
    pub q: f64,
    pub p: f64,
}

/// `H(q, p) = ½(p² + ω²q²)`.
pub fn hamiltonian(state: &OscState, params: &OscParams) -> f64 {
    0.5 * (state.p * state.p + params.omega * params.omega * state.q * state.q)
}

/// Exact trajectory through the initial data `q(0) = 0`, `p(0) = p₀`:
/// `q(t) = (p₀/ω)·sin ωt`, `p(t) = p₀·cos ωt`.
pub fn analytic_state(t: f64, params: &OscParams) -> OscState {
    let wt = params.omega * t;
    OscState {
        t,
        q: params.p0 / params.omega * wt.sin(),
        p: params.p0 * wt.cos(),
    }
}

/// Classical fixed-step RK4 integration of `q̇ = p`, `ṗ = −ω²q`, used as an
/// independent cross-check of [`analytic_state`]. Returns the `steps + 1`
/// states including the initial one.
pub fn integrate(s0: &OscState, dt: f64, steps: usize, params: &OscParams) -> Result<Vec<OscState>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if steps < 1 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let w2 = params.omega * params.omega;
    let rhs = |q: f64, p: f64| (p, -w2 * q);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*s0);
    let (mut q, mut p, mut t) = (s0.q, s0.p, s0.t);
    for _ in 0..steps {
        let (k1q, k1p) = rhs(q, p);
        let (k2q, k2p) = rhs(q + 0.5 * dt * k1q, p + 0.5 * dt * k1p);
        let (k3q, k3p) = rhs(q + 0.5 * dt * k2q, p + 0.5 * dt * k2p);
        let (k4q, k4p) = rhs(q + dt * k3q, p + dt * k3p);
        q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        t += dt;
        out.push(OscState { t, q, p });
    }
    Ok(out)
}

/// Quasi-canonical pair along the standard trajectory:
/// `Q(t) = √(2p₀)·sin(ωt/2)`, `P(t) = √(2p₀)·cos(ωt/2)`.
pub fn quasi_state(t: f64, params: &OscParams) -> QuasiState {
    let half = 0.5 * params.omega * t;
    let r = (2.0 * params.p0).sqrt();
    QuasiState {
        q: r * half.sin(),
        p: r * half.cos(),
    }
}

/// Quasi-canonical pair at an arbitrary phase-space point, via the
/// half-angle map `θ = atan2(ωq, p)`, `(Q, P) = √(2S)·(sin θ/2, cos θ/2)`
/// with `S = √(2H)`. Undefined at the origin, where `H = 0`.
pub fn quasi_from_phase_point(q: f64, p: f64, params: &OscParams) -> Result<QuasiState> {
    let wq = params.omega * q;
    let s = (p * p + wq * wq).sqrt();
    if s <= 0.0 {
        return Err(Error::Domain(
            "quasi-canonical coordinates are undefined at H = 0".into(),
        ));
    }
    let theta = wq.atan2(p);
    let r = (2.0 * s).sqrt();
    Ok(QuasiState {
        q: r * (0.5 * theta).sin(),
        p: r * (0.5 * theta).cos(),
    })
}

/// Central-difference Poisson bracket of two phase-space observables,
/// normalized so that `{p, q} = +1`:
///
/// ```text
/// {f, g} = (∂f/∂p)(∂g/∂q) − (∂f/∂q)(∂g/∂p)
/// ```
///
/// Under this normalization the quasi-canonical pair satisfies
/// `{P, Q} = ω/(2√(2H))`. The error is `O(h²)`.
pub fn poisson_bracket_fd(
    f: impl Fn(f64, f64) -> f64,
    g: impl Fn(f64, f64) -> f64,
    at: &OscState,
    h: f64,
) -> f64 {
    let (q, p) = (at.q, at.p);
    let df_dq = (f(q + h, p) - f(q - h, p)) / (2.0 * h);
    let df_dp = (f(q, p + h) - f(q, p - h)) / (2.0 * h);
    let dg_dq = (g(q + h, p) - g(q - h, p)) / (2.0 * h);
    let dg_dp = (g(q, p + h) - g(q, p - h)) / (2.0 * h);
    df_dp * dg_dq - df_dq * dg_dp
}
