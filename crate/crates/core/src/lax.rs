//! Lax representations of the harmonic oscillator and the Bianchi-type Lie
//! algebras they evolve.
//!
//! Two layers live here. The matrix layer is the 3×3 pair
//!
//! ```text
//! L = ⎡ p    ωq   0 ⎤        M = (ω/2) ⎡ 0  −1  0 ⎤
//!     ⎢ ωq  −p    0 ⎥                  ⎢ 1   0  0 ⎥
//!     ⎣ 0    0    1 ⎦                  ⎣ 0   0  0 ⎦
//! ```
//!
//! with `dL/dt = ML − LM` along the oscillator flow, so the spectrum
//! `{±√(2H), 1}` of `L` is conserved. The operadic layer replaces `L` by a
//! binary anticommutative operation `μ` on `ℝ³` whose coefficients follow
//! the nine-parameter family
//!
//! ```text
//! μ¹₂₃ = C₂p − C₃ωq − C₄        μ¹₃₁ = C₂ωq + C₃p − C₁
//! μ²₁₃ = C₂p − C₃ωq + C₄        μ²₂₃ = C₂ωq + C₃p + C₁
//! μ¹₁₂ = C₅P + C₆Q              μ²₁₂ = C₅Q − C₆P
//! μ³₁₃ = C₇P + C₈Q              μ³₂₃ = C₇Q − C₈P
//! μ³₁₂ = C₉
//! ```
//!
//! (diagonal entries zero, the rest by antisymmetry), which satisfies the
//! operadic Lax equation `dμ/dt = [M, μ]` whenever
//! `C₂² + C₃² + C₅² + C₆² + C₇² + C₈² ≠ 0`. Matching `μ` at `t = 0` against
//! the structure constants of the Bianchi families `VII_a`, `III_{a=1}`,
//! `VI_{a≠1}` turns those Lie algebras into time-dependent algebras carried
//! by the flow.

use nalgebra::{DVector, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::operad::MultiOp;
use crate::oscillator::{analytic_state, quasi_from_phase_point, quasi_state, OscParams, OscState, QuasiState};

/// `L(q, p)`: symmetric, with spectrum `{±√(2H), 1}`.
pub fn build_l(q: f64, p: f64, params: &OscParams) -> Matrix3<f64> {
    let wq = params.omega() * q;
    Matrix3::new(p, wq, 0.0, wq, -p, 0.0, 0.0, 0.0, 1.0)
}

/// The constant antisymmetric generator `M`.
pub fn build_m(params: &OscParams) -> Matrix3<f64> {
    let w2 = 0.5 * params.omega();
    Matrix3::new(0.0, -w2, 0.0, w2, 0.0, 0.0, 0.0, 0.0, 0.0)
}

/// Max-norm of `dL/dt − (ML − LM)` at time `t`, with `dL/dt` evaluated
/// analytically through `q̇ = p`, `ṗ = −ω²q`.
pub fn matrix_lax_residual(t: f64, params: &OscParams) -> f64 {
    let s = analytic_state(t, params);
    matrix_lax_residual_at(&s, params)
}

/// Same residual at an arbitrary phase-space point.
pub fn matrix_lax_residual_at(s: &OscState, params: &OscParams) -> f64 {
    let w = params.omega();
    let (q_dot, p_dot) = (s.p, -w * w * s.q);
    let l_dot = Matrix3::new(
        p_dot,
        w * q_dot,
        0.0,
        w * q_dot,
        -p_dot,
        0.0,
        0.0,
        0.0,
        0.0,
    );
    let l = build_l(s.q, s.p, params);
    let m = build_m(params);
    let rhs = m * l - l * m;
    (l_dot - rhs).abs().max()
}

/// The nine coefficients `C₁…C₉` of the operadic Lax family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CParams {
    pub c: [f64; 9],
}

impl CParams {
    /// `C₂² + C₃² + C₅² + C₆² + C₇² + C₈² ≠ 0`; when it fails, `μ` does not
    /// genuinely couple to the flow.
    pub fn is_valid(&self) -> bool {
        let c = &self.c;
        c[1] * c[1] + c[2] * c[2] + c[4] * c[4] + c[5] * c[5] + c[6] * c[6] + c[7] * c[7] != 0.0
    }
}

/// Antisymmetric structure constants `μ^s_{ij}` of a binary operation on
/// `ℝ³`, stored as `mu[s][i][j]` (0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureTable {
    mu: [[[f64; 3]; 3]; 3],
}

impl StructureTable {
    pub fn zero() -> Self {
        StructureTable {
            mu: [[[0.0; 3]; 3]; 3],
        }
    }

    /// `μ^s_{ij}` with 0-based indices.
    pub fn get(&self, s: usize, i: usize, j: usize) -> f64 {
        self.mu[s][i][j]
    }

    /// Sets `μ^s_{ij} = v` and `μ^s_{ji} = −v`.
    pub fn set_antisymmetric(&mut self, s: usize, i: usize, j: usize, v: f64) {
        assert_ne!(i, j, "diagonal entries are identically zero");
        self.mu[s][i][j] = v;
        self.mu[s][j][i] = -v;
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        for s in 0..3 {
            for i in 0..3 {
                if self.mu[s][i][i] != 0.0 {
                    return false;
                }
                for j in (i + 1)..3 {
                    if (self.mu[s][i][j] + self.mu[s][j][i]).abs() > tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for s in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    m = m.max(self.mu[s][i][j].abs());
                }
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &StructureTable) -> f64 {
        let mut m = 0.0f64;
        for s in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    m = m.max((self.mu[s][i][j] - other.mu[s][i][j]).abs());
                }
            }
        }
        m
    }

    /// The table as a degree-2 operation on `ℝ³`.
    pub fn to_multi_op(&self) -> MultiOp {
        MultiOp::from_fn(2, 3, |s, args| self.mu[s][args[0]][args[1]])
    }

    /// Reads a degree-2, dimension-3 operation back into a table.
    pub fn from_multi_op(op: &MultiOp) -> Result<Self> {
        if op.degree() != 2 || op.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: op.dim(),
            });
        }
        let mut t = StructureTable::zero();
        for s in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    t.mu[s][i][j] = op.coeff(s, &[i, j]);
                }
            }
        }
        Ok(t)
    }

    /// The bracket `[u, v]^s = μ^s_{ij} u^i v^j`.
    pub fn bracket(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
        let mut out = Vector3::zeros();
        for s in 0..3 {
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    acc += self.mu[s][i][j] * u[i] * v[j];
                }
            }
            out[s] = acc;
        }
        out
    }

    /// Golden-file dump: one line `s i j value` per nonzero entry (1-based),
    /// sorted lexicographically.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let v = self.mu[s][i][j];
                    if v != 0.0 {
                        out.push_str(&format!("{} {} {} {}\n", s + 1, i + 1, j + 1, v));
                    }
                }
            }
        }
        out
    }
}

/// The three Bianchi families handled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BianchiFamily {
    /// `VII_a`, `a > 0`.
    ViiA,
    /// `III_{a=1}` (the parameter is fixed to 1).
    IiiA1,
    /// `VI_a` with `a > 0`, `a ≠ 1`.
    ViA,
}

impl std::fmt::Display for BianchiFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BianchiFamily::ViiA => write!(f, "VII_a"),
            BianchiFamily::IiiA1 => write!(f, "III_a1"),
            BianchiFamily::ViA => write!(f, "VI_a"),
        }
    }
}

impl std::str::FromStr for BianchiFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vii_a" | "vii-a" | "viia" | "vii" => Ok(BianchiFamily::ViiA),
            "iii_a1" | "iii-a1" | "iiia1" | "iii" => Ok(BianchiFamily::IiiA1),
            "vi_a" | "vi-a" | "via" | "vi" => Ok(BianchiFamily::ViA),
            other => Err(Error::InvalidParameter(format!(
                "unknown Bianchi family '{other}' (expected vii-a, iii, or vi-a)"
            ))),
        }
    }
}

/// A family together with its parameter `a` and the classification data
/// `(α, n¹, n², n³)` of the structure equations
///
/// ```text
/// [e₁,e₂] = −α e₂ + n³ e₃,   [e₂,e₃] = n¹ e₁,   [e₃,e₁] = n² e₂ + α e₃.
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BianchiSpec {
    pub family: BianchiFamily,
    pub a: f64,
}

impl BianchiSpec {
    pub fn new(family: BianchiFamily, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "family parameter a must be positive, got {a}"
            )));
        }
        match family {
            BianchiFamily::IiiA1 if a != 1.0 => Err(Error::InvalidParameter(
                "III_a1 has its parameter fixed to a = 1".into(),
            )),
            BianchiFamily::ViA if a == 1.0 => Err(Error::InvalidParameter(
                "VI_a requires a ≠ 1 (a = 1 is the III_a1 family)".into(),
            )),
            _ => Ok(BianchiSpec { family, a }),
        }
    }

    /// Classification parameters `(α, n¹, n², n³)`.
    pub fn classification(&self) -> (f64, f64, f64, f64) {
        match self.family {
            BianchiFamily::ViiA => (self.a, 0.0, 1.0, 1.0),
            BianchiFamily::IiiA1 => (1.0, 0.0, 1.0, -1.0),
            BianchiFamily::ViA => (self.a, 0.0, 1.0, -1.0),
        }
    }

    /// Structure constants of the algebra at `t = 0`.
    pub fn initial_table(&self) -> StructureTable {
        let (alpha, n1, n2, n3) = self.classification();
        let mut t = StructureTable::zero();
        // [e₁,e₂] = −α e₂ + n³ e₃
        t.set_antisymmetric(1, 0, 1, -alpha);
        t.set_antisymmetric(2, 0, 1, n3);
        // [e₂,e₃] = n¹ e₁
        t.set_antisymmetric(0, 1, 2, n1);
        // [e₃,e₁] = n² e₂ + α e₃
        t.set_antisymmetric(1, 2, 0, n2);
        t.set_antisymmetric(2, 2, 0, alpha);
        t
    }
}

/// Solves the initial-condition linear system for the nine coefficients from
/// the structure constants at `t = 0` (with `q(0) = 0`, `p(0) = p₀`,
/// `P(0) = √(2p₀)`, `Q(0) = 0`):
///
/// ```text
/// C₁ = ½(μ°²₂₃ − μ°¹₃₁)          C₂ = (μ°²₁₃ + μ°¹₂₃)/(2p₀)
/// C₃ = (μ°²₂₃ + μ°¹₃₁)/(2p₀)     C₄ = ½(μ°²₁₃ − μ°¹₂₃)
/// C₅ = μ°¹₁₂/√(2p₀)              C₆ = −μ°²₁₂/√(2p₀)
/// C₇ = μ°³₁₃/√(2p₀)              C₈ = −μ°³₂₃/√(2p₀)
/// C₉ = μ°³₁₂
/// ```
///
/// Entries with lower index pair `13` are read as `−μ°₃₁` by antisymmetry.
pub fn solve_constants(mu0: &StructureTable, p0: f64) -> Result<CParams> {
    if !(p0 > 0.0) {
        return Err(Error::Domain(format!("p0 must be positive, got {p0}")));
    }
    if !mu0.is_antisymmetric(0.0) {
        return Err(Error::InvalidParameter(
            "initial structure table must be antisymmetric".into(),
        ));
    }
    let m = |s: usize, i: usize, j: usize| mu0.get(s - 1, i - 1, j - 1);
    let sqrt_2p0 = (2.0 * p0).sqrt();
    let c = [
        0.5 * (m(2, 2, 3) - m(1, 3, 1)),
        (m(2, 1, 3) + m(1, 2, 3)) / (2.0 * p0),
        (m(2, 2, 3) + m(1, 3, 1)) / (2.0 * p0),
        0.5 * (m(2, 1, 3) - m(1, 2, 3)),
        m(1, 1, 2) / sqrt_2p0,
        -m(2, 1, 2) / sqrt_2p0,
        m(3, 1, 3) / sqrt_2p0,
        -m(3, 2, 3) / sqrt_2p0,
        m(3, 1, 2),
    ];
    Ok(CParams { c })
}

/// Assembles the nine independent entries of the family; every entry is
/// affine in `(p, ωq, P, Q)`, so the same routine also produces partial
/// derivatives by feeding differentiated inputs and dropping the constants.
fn assemble(c: &CParams, p: f64, wq: f64, big_p: f64, big_q: f64, with_constants: bool) -> StructureTable {
    let k = if with_constants { 1.0 } else { 0.0 };
    let [c1, c2, c3, c4, c5, c6, c7, c8, c9] = c.c;
    let mut t = StructureTable::zero();
    t.set_antisymmetric(0, 1, 2, c2 * p - c3 * wq - k * c4); // μ¹₂₃
    t.set_antisymmetric(1, 0, 2, c2 * p - c3 * wq + k * c4); // μ²₁₃
    t.set_antisymmetric(0, 2, 0, c2 * wq + c3 * p - k * c1); // μ¹₃₁
    t.set_antisymmetric(1, 1, 2, c2 * wq + c3 * p + k * c1); // μ²₂₃
    t.set_antisymmetric(0, 0, 1, c5 * big_p + c6 * big_q); // μ¹₁₂
    t.set_antisymmetric(1, 0, 1, c5 * big_q - c6 * big_p); // μ²₁₂
    t.set_antisymmetric(2, 0, 2, c7 * big_p + c8 * big_q); // μ³₁₃
    t.set_antisymmetric(2, 1, 2, c7 * big_q - c8 * big_p); // μ³₂₃
    t.set_antisymmetric(2, 0, 1, k * c9); // μ³₁₂
    t
}

/// Evaluates the nine-parameter family at a phase-space point with its
/// quasi-canonical pair.
pub fn build_mu(c: &CParams, state: &OscState, quasi: &QuasiState, params: &OscParams) -> StructureTable {
    assemble(c, state.p, params.omega() * state.q, quasi.p, quasi.q, true)
}

/// Closed-form time-dependent structure constants of the evolved algebras
/// (`p₀ = √(2E)`):
///
/// ```text
/// μ¹₁₂ = aQ/√(2p₀)   μ²₁₂ = −aP/√(2p₀)   μ³₁₂ = ±1
/// μ¹₂₃ = (p−p₀)/(−2p₀)   μ²₂₃ = ωq/(−2p₀)   μ³₂₃ = −aQ/√(2p₀)
/// μ¹₃₁ = ωq/(−2p₀)   μ²₃₁ = (p+p₀)/(2p₀)   μ³₃₁ = aP/√(2p₀)
/// ```
///
/// with `μ³₁₂ = +1` for `VII_a` and `−1` for `III_{a=1}` and `VI_{a≠1}`.
pub fn evolve_algebra(spec: &BianchiSpec, t: f64, params: &OscParams) -> StructureTable {
    let s = analytic_state(t, params);
    let qs = quasi_state(t, params);
    evolve_algebra_at(spec, &s, &qs, params)
}

/// Table entries at an explicit phase-space point and quasi-canonical pair.
pub fn evolve_algebra_at(
    spec: &BianchiSpec,
    state: &OscState,
    quasi: &QuasiState,
    params: &OscParams,
) -> StructureTable {
    let a = spec.a;
    let p0 = params.p0();
    let sqrt_2p0 = (2.0 * p0).sqrt();
    let wq = params.omega() * state.q;
    let sgn3 = match spec.family {
        BianchiFamily::ViiA => 1.0,
        BianchiFamily::IiiA1 | BianchiFamily::ViA => -1.0,
    };
    let mut t = StructureTable::zero();
    t.set_antisymmetric(0, 0, 1, a * quasi.q / sqrt_2p0);
    t.set_antisymmetric(1, 0, 1, -a * quasi.p / sqrt_2p0);
    t.set_antisymmetric(2, 0, 1, sgn3);
    t.set_antisymmetric(0, 1, 2, (state.p - p0) / (-2.0 * p0));
    t.set_antisymmetric(1, 1, 2, wq / (-2.0 * p0));
    t.set_antisymmetric(2, 1, 2, -a * quasi.q / sqrt_2p0);
    t.set_antisymmetric(0, 2, 0, wq / (-2.0 * p0));
    t.set_antisymmetric(1, 2, 0, (state.p + p0) / (2.0 * p0));
    t.set_antisymmetric(2, 2, 0, a * quasi.p / sqrt_2p0);
    t
}

/// `M` as a degree-1 operation, for bracketing against structure tables.
pub fn m_multi_op(params: &OscParams) -> MultiOp {
    let m = build_m(params);
    MultiOp::from_fn(1, 3, |i, args| m[(i, args[0])])
}

/// `[M, μ]` computed through the operad machinery (`M` of degree 1, `μ` of
/// degree 2).
pub fn bracket_m_mu(mu: &StructureTable, params: &OscParams) -> StructureTable {
    let m_op = m_multi_op(params);
    let br = m_op
        .gerstenhaber(&mu.to_multi_op())
        .expect("dimensions agree by construction");
    StructureTable::from_multi_op(&br).expect("bracket of degree 1 with 2 has degree 2")
}

/// Max-norm residual of the operadic Lax equation `dμ/dt = [M, μ]` at time
/// `t`, with `dμ/dt` estimated by a central difference of step `dt`. The
/// truncation error is `O(dt²)`.
pub fn operadic_lax_residual(spec: &BianchiSpec, t: f64, dt: f64, params: &OscParams) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let plus = evolve_algebra(spec, t + dt, params);
    let minus = evolve_algebra(spec, t - dt, params);
    let mut diff = StructureTable::zero();
    for s in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                diff.mu[s][i][j] = (plus.mu[s][i][j] - minus.mu[s][i][j]) / (2.0 * dt);
            }
        }
    }
    let rhs = bracket_m_mu(&evolve_algebra(spec, t, params), params);
    Ok(diff.max_abs_diff(&rhs))
}

/// Max-norm residual of the stationary form `p·∂μ/∂q − ω²q·∂μ/∂p = [M, μ]`
/// at an arbitrary phase-space point, using the closed-form partials of the
/// quasi-canonical pair
///
/// ```text
/// ∂(Q, P)/∂q = ω(P, Q)/(2S),   ∂(Q, P)/∂p = (−Q, P)/(2S),   S = √(2H).
/// ```
pub fn pde_lax_residual(spec: &BianchiSpec, q: f64, p: f64, params: &OscParams) -> Result<f64> {
    let c = solve_constants(&spec.initial_table(), params.p0())?;
    let w = params.omega();
    let wq = w * q;
    let s = (p * p + wq * wq).sqrt();
    if s <= 0.0 {
        return Err(Error::Domain("stationary residual undefined at H = 0".into()));
    }
    let quasi = quasi_from_phase_point(q, p, params)?;
    let (big_q, big_p) = (quasi.q, quasi.p);
    let dq_dq = w * big_p / (2.0 * s);
    let dp_dq = w * big_q / (2.0 * s);
    let dq_dp = -big_q / (2.0 * s);
    let dp_dp = big_p / (2.0 * s);
    // d/dq enters through (p, ωq, P, Q) ↦ (0, ω, ∂P/∂q, ∂Q/∂q), and the
    // constant offsets drop out of both partials.
    let dmu_dq = assemble(&c, 0.0, w, dp_dq, dq_dq, false);
    let dmu_dp = assemble(&c, 1.0, 0.0, dp_dp, dq_dp, false);
    let state = OscState { t: 0.0, q, p };
    let mu = build_mu(&c, &state, &quasi, params);
    let rhs = bracket_m_mu(&mu, params);
    let mut residual = 0.0f64;
    for si in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let lhs = p * dmu_dq.mu[si][i][j] - w * w * q * dmu_dp.mu[si][i][j];
                residual = residual.max((lhs - rhs.mu[si][i][j]).abs());
            }
        }
    }
    Ok(residual)
}

/// The Jacobiator `J(x; y; z) = [x,[y,z]] + [y,[z,x]] + [z,[x,y]]` of a
/// structure table, evaluated by nested application of the table's degree-2
/// operation; identically zero exactly when the table satisfies the Jacobi
/// identity.
pub fn classical_jacobiator(
    mu: &StructureTable,
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    z: &Vector3<f64>,
) -> Vector3<f64> {
    let op = mu.to_multi_op();
    let dv = |v: &Vector3<f64>| DVector::from_column_slice(v.as_slice());
    let bracket = |u: &DVector<f64>, v: &DVector<f64>| {
        op.apply(&[u.clone(), v.clone()])
            .expect("vectors have dimension 3")
    };
    let (xv, yv, zv) = (dv(x), dv(y), dv(z));
    let j = bracket(&xv, &bracket(&yv, &zv))
        + bracket(&yv, &bracket(&zv, &xv))
        + bracket(&zv, &bracket(&xv, &yv));
    Vector3::new(j[0], j[1], j[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params_w1_p2() -> OscParams {
        OscParams::new(1.0, 2.0).unwrap()
    }

    fn all_specs() -> Vec<BianchiSpec> {
        vec![
            BianchiSpec::new(BianchiFamily::ViiA, 1.0).unwrap(),
            BianchiSpec::new(BianchiFamily::IiiA1, 1.0).unwrap(),
            BianchiSpec::new(BianchiFamily::ViA, 2.0).unwrap(),
        ]
    }

    #[test]
    fn l_matrix_example_and_spectrum() {
        let params = OscParams::new(2.0, 3.0).unwrap();
        let l = build_l(1.0, 3.0, &params);
        let expected = Matrix3::new(3.0, 2.0, 0.0, 2.0, -3.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(l, expected);

        let h = 0.5 * (3.0f64 * 3.0 + 4.0);
        let eig = SymmetricEigen::new(l);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        let s = (2.0 * h).sqrt();
        assert!((vals[0] + s).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((vals[2] - s).abs() < 1e-12);
    }

    #[test]
    fn m_matrix_shape() {
        let params = OscParams::new(2.0, 1.0).unwrap();
        let m = build_m(&params);
        assert_eq!(m, Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(m.transpose(), -m);
    }

    #[test]
    fn matrix_lax_commutator_hand_example() {
        // (ω = 2, q = 1, p = 3): ML − LM = [[−4, 6, 0], [6, 4, 0], [0, 0, 0]]
        let params = OscParams::new(2.0, 3.0).unwrap();
        let l = build_l(1.0, 3.0, &params);
        let m = build_m(&params);
        let comm = m * l - l * m;
        let expected = Matrix3::new(-4.0, 6.0, 0.0, 6.0, 4.0, 0.0, 0.0, 0.0, 0.0);
        assert!((comm - expected).abs().max() < 1e-13);
        let s = OscState { t: 0.0, q: 1.0, p: 3.0 };
        assert!(matrix_lax_residual_at(&s, &params) < 1e-12);
    }

    #[test]
    fn matrix_lax_residual_vanishes_along_flow() {
        let params = params_w1_p2();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let t = rng.gen_range(0.0..20.0);
            assert!(matrix_lax_residual(t, &params) < 1e-12);
        }
    }

    #[test]
    fn l_spectrum_is_conserved() {
        let params = params_w1_p2();
        let s0 = (2.0 * params.energy()).sqrt();
        for k in 0..=128 {
            let t = 2.0 * params.period() * k as f64 / 128.0;
            let st = analytic_state(t, &params);
            let eig = SymmetricEigen::new(build_l(st.q, st.p, &params));
            let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            vals.sort_by(f64::total_cmp);
            assert!((vals[0] + s0).abs() < 1e-10);
            assert!((vals[1] - 1.0).abs() < 1e-10);
            assert!((vals[2] - s0).abs() < 1e-10);
        }
    }

    #[test]
    fn initial_tables_match_classification_columns() {
        // VII_a row: μ°₁₂ = (0, −a, 1), μ°₂₃ = 0, μ°₃₁ = (0, 1, a)
        let spec = BianchiSpec::new(BianchiFamily::ViiA, 2.5).unwrap();
        let t = spec.initial_table();
        assert_eq!(t.get(0, 0, 1), 0.0);
        assert_eq!(t.get(1, 0, 1), -2.5);
        assert_eq!(t.get(2, 0, 1), 1.0);
        for s in 0..3 {
            assert_eq!(t.get(s, 1, 2), 0.0);
        }
        assert_eq!(t.get(0, 2, 0), 0.0);
        assert_eq!(t.get(1, 2, 0), 1.0);
        assert_eq!(t.get(2, 2, 0), 2.5);
        assert!(t.is_antisymmetric(0.0));

        // III_{a=1}: μ°₁₂ = (0, −1, −1), μ°₃₁ = (0, 1, 1)
        let t3 = BianchiSpec::new(BianchiFamily::IiiA1, 1.0).unwrap().initial_table();
        assert_eq!(t3.get(1, 0, 1), -1.0);
        assert_eq!(t3.get(2, 0, 1), -1.0);
        assert_eq!(t3.get(2, 2, 0), 1.0);

        // VI_a: like VII_a but μ°₁₂³ = −1
        let t6 = BianchiSpec::new(BianchiFamily::ViA, 2.0).unwrap().initial_table();
        assert_eq!(t6.get(1, 0, 1), -2.0);
        assert_eq!(t6.get(2, 0, 1), -1.0);
        assert_eq!(t6.get(2, 2, 0), 2.0);
    }

    #[test]
    fn spec_validation() {
        assert!(BianchiSpec::new(BianchiFamily::ViA, 1.0).is_err());
        assert!(BianchiSpec::new(BianchiFamily::IiiA1, 2.0).is_err());
        assert!(BianchiSpec::new(BianchiFamily::ViiA, 0.0).is_err());
        assert!(BianchiSpec::new(BianchiFamily::ViiA, -1.0).is_err());
    }

    #[test]
    fn constants_for_vii_a1_p2() {
        let params = params_w1_p2();
        let spec = BianchiSpec::new(BianchiFamily::ViiA, 1.0).unwrap();
        let c = solve_constants(&spec.initial_table(), params.p0()).unwrap();
        let expected = [0.0, -0.25, 0.0, -0.5, 0.0, 0.5, -0.5, 0.0, 1.0];
        assert_eq!(c.c, expected);
        assert!(c.is_valid());
    }

    #[test]
    fn constants_for_iii_row() {
        let spec = BianchiSpec::new(BianchiFamily::IiiA1, 1.0).unwrap();
        let c = solve_constants(&spec.initial_table(), 2.0).unwrap();
        assert_eq!(c.c[8], -1.0); // C₉ = μ°³₁₂
        assert!(c.is_valid());
    }

    #[test]
    fn zero_table_gives_invalid_constants() {
        let c = solve_constants(&StructureTable::zero(), 2.0).unwrap();
        assert_eq!(c.c, [0.0; 9]);
        assert!(!c.is_valid());
    }

    #[test]
    fn solve_constants_rejects_bad_input() {
        assert!(solve_constants(&StructureTable::zero(), 0.0).is_err());
        let mut bad = StructureTable::zero();
        bad.mu[0][0][1] = 1.0; // deliberately not antisymmetric
        assert!(solve_constants(&bad, 2.0).is_err());
    }

    #[test]
    fn eq6_condition_holds_for_all_rows() {
        for spec in all_specs() {
            let c = solve_constants(&spec.initial_table(), 2.0).unwrap();
            assert!(c.is_valid(), "{}", spec.family);
        }
    }

    #[test]
    fn build_mu_values_at_t0_and_half_turn() {
        let params = params_w1_p2();
        let spec = BianchiSpec::new(BianchiFamily::ViiA, 1.0).unwrap();
        let c = solve_constants(&spec.initial_table(), params.p0()).unwrap();

        let s0 = analytic_state(0.0, &params);
        let q0 = quasi_state(0.0, &params);
        let mu0 = build_mu(&c, &s0, &q0, &params);
        assert_eq!(mu0.get(0, 1, 2), 0.0); // μ¹₂₃ = −0.25·2 + 0.5
        assert_eq!(mu0.get(1, 0, 1), -1.0); // μ²₁₂ = −a

        // ωt = π: (q, p) = (0, −2), (Q, P) = (2, 0)
        let t = std::f64::consts::PI;
        let s1 = analytic_state(t, &params);
        let q1 = quasi_state(t, &params);
        let mu1 = build_mu(&c, &s1, &q1, &params);
        assert!((mu1.get(0, 1, 2) - 1.0).abs() < 1e-12); // (p−p₀)/(−2p₀) = 1
        assert!((mu1.get(0, 0, 1) - 1.0).abs() < 1e-12); // aQ/√(2p₀) = 1
    }

    #[test]
    fn roundtrip_reproduces_initial_table_exactly() {
        let params = params_w1_p2();
        for spec in all_specs() {
            let table = spec.initial_table();
            let c = solve_constants(&table, params.p0()).unwrap();
            let rebuilt = build_mu(
                &c,
                &analytic_state(0.0, &params),
                &quasi_state(0.0, &params),
                &params,
            );
            assert_eq!(rebuilt.max_abs_diff(&table), 0.0, "{}", spec.family);
        }
    }

    #[test]
    fn evolved_table_matches_constants_route_on_grid() {
        let params = params_w1_p2();
        for spec in all_specs() {
            let c = solve_constants(&spec.initial_table(), params.p0()).unwrap();
            for k in 0..64 {
                let t = 2.0 * params.period() * k as f64 / 64.0;
                let direct = evolve_algebra(&spec, t, &params);
                let via_c = build_mu(&c, &analytic_state(t, &params), &quasi_state(t, &params), &params);
                assert!(
                    direct.max_abs_diff(&via_c) < 1e-12,
                    "{} at t = {t}",
                    spec.family
                );
                assert!(direct.is_antisymmetric(0.0));
            }
        }
    }

    #[test]
    fn evolved_table_at_t0_is_initial_table() {
        let params = params_w1_p2();
        for spec in all_specs() {
            let diff = evolve_algebra(&spec, 0.0, &params).max_abs_diff(&spec.initial_table());
            assert_eq!(diff, 0.0, "{}", spec.family);
        }
    }

    #[test]
    fn mu_3_12_is_constant_sign_per_family() {
        let params = params_w1_p2();
        for spec in all_specs() {
            let expected = match spec.family {
                BianchiFamily::ViiA => 1.0,
                _ => -1.0,
            };
            for k in 0..16 {
                let t = 0.37 * k as f64;
                assert_eq!(evolve_algebra(&spec, t, &params).get(2, 0, 1), expected);
            }
        }
    }

    /// Hand-coded closed form of `[M, μ]` for degree-1 `M`, kept as an
    /// independent oracle for the operad-backed bracket.
    fn bracket_oracle(mu: &StructureTable, params: &OscParams) -> StructureTable {
        let m = build_m(params);
        let mut out = StructureTable::zero();
        for s in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for u in 0..3 {
                        acc += m[(s, u)] * mu.get(u, i, j)
                            - mu.get(s, u, j) * m[(u, i)]
                            - mu.get(s, i, u) * m[(u, j)];
                    }
                    out.mu[s][i][j] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn operad_bracket_matches_hand_coded_oracle() {
        let params = params_w1_p2();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let mut mu = StructureTable::zero();
            for s in 0..3 {
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        mu.set_antisymmetric(s, i, j, rng.gen_range(-2.0..2.0));
                    }
                }
            }
            let via_operad = bracket_m_mu(&mu, &params);
            let via_oracle = bracket_oracle(&mu, &params);
            assert!(via_operad.max_abs_diff(&via_oracle) < 1e-14);
        }
    }

    #[test]
    fn operadic_lax_residual_is_second_order() {
        let params = params_w1_p2();
        let spec = BianchiSpec::new(BianchiFamily::ViiA, 2.0).unwrap();
        let r1 = operadic_lax_residual(&spec, 0.7, 1e-4, &params).unwrap();
        assert!(r1 < 1e-6, "residual {r1:.3e}");
        let r2 = operadic_lax_residual(&spec, 0.7, 5e-5, &params).unwrap();
        let ratio = r1 / r2;
        assert!((3.0..5.0).contains(&ratio), "halving ratio {ratio}");
    }

    #[test]
    fn operadic_lax_richardson_ratios_per_family() {
        let params = params_w1_p2();
        for spec in all_specs() {
            for a_t in [0.4, 1.9] {
                let dt = 1e-2;
                let r1 = operadic_lax_residual(&spec, a_t, dt, &params).unwrap();
                let r2 = operadic_lax_residual(&spec, a_t, dt / 2.0, &params).unwrap();
                let ratio = r1 / r2;
                assert!(
                    (3.6..=4.4).contains(&ratio),
                    "{} t={a_t}: ratio {ratio}",
                    spec.family
                );
            }
        }
    }

    #[test]
    fn constant_component_contributes_nothing() {
        // μ³₁₂ is constant and [M, μ] has zero (3; 1, 2) component.
        let params = params_w1_p2();
        let spec = BianchiSpec::new(BianchiFamily::ViA, 0.5).unwrap();
        let mu = evolve_algebra(&spec, 1.3, &params);
        let rhs = bracket_m_mu(&mu, &params);
        assert_eq!(rhs.get(2, 0, 1), 0.0);
    }

    #[test]
    fn stationary_form_residual_small_at_random_points() {
        let params = params_w1_p2();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for spec in all_specs() {
            let mut checked = 0;
            while checked < 100 {
                let q = rng.gen_range(-2.0..2.0);
                let p = rng.gen_range(-2.0..2.0);
                if 0.5 * (p * p + q * q) < 0.1 {
                    continue;
                }
                let r = pde_lax_residual(&spec, q, p, &params).unwrap();
                assert!(r < 1e-10, "{} at ({q}, {p}): {r:.3e}", spec.family);
                checked += 1;
            }
        }
    }

    #[test]
    fn initial_algebras_satisfy_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for spec in all_specs() {
            let mu = spec.initial_table();
            for _ in 0..50 {
                let rv = |rng: &mut ChaCha8Rng| {
                    Vector3::new(
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                    )
                };
                let (x, y, z) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
                let j = classical_jacobiator(&mu, &x, &y, &z);
                assert!(j.amax() < 1e-12, "{}: {j:?}", spec.family);
            }
        }
    }

    #[test]
    fn evolved_algebras_satisfy_jacobi() {
        let params = params_w1_p2();
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for spec in all_specs() {
            for _ in 0..200 {
                let t = rng.gen_range(0.0..4.0 * params.period());
                let mu = evolve_algebra(&spec, t, &params);
                let rv = |rng: &mut ChaCha8Rng| {
                    Vector3::new(
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                    )
                };
                let (x, y, z) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
                let j = classical_jacobiator(&mu, &x, &y, &z);
                assert!(j.amax() < 1e-10, "{} at t={t}: {j:?}", spec.family);
            }
        }
    }

    #[test]
    fn jacobiator_vanishes_on_repeated_argument() {
        let params = params_w1_p2();
        let spec = BianchiSpec::new(BianchiFamily::ViiA, 1.0).unwrap();
        let mu = evolve_algebra(&spec, 0.9, &params);
        let x = Vector3::new(0.3, -1.2, 0.8);
        let z = Vector3::new(1.0, 0.4, -0.6);
        let j = classical_jacobiator(&mu, &x, &x, &z);
        assert_eq!(j, Vector3::zeros());
    }

    #[test]
    fn golden_dump_of_vii_initial_table() {
        // VII_a with a = 1 has no nonzero μ¹ entries; the μ² and μ³ entries
        // come in antisymmetric pairs.
        let spec = BianchiSpec::new(BianchiFamily::ViiA, 1.0).unwrap();
        let got = spec.initial_table().dump();
        let lines: Vec<&str> = got.lines().collect();
        assert_eq!(
            lines,
            vec![
                "2 1 2 -1",
                "2 1 3 -1",
                "2 2 1 1",
                "2 3 1 1",
                "3 1 2 1",
                "3 1 3 -1",
                "3 2 1 -1",
                "3 3 1 1",
            ]
        );
    }
}
