//! Degree-graded multilinear operations on a finite-dimensional real vector
//! space, with the insertion (partial) compositions, the total composition,
//! and the Gerstenhaber bracket.
//!
//! A [`MultiOp`] of degree `n` over dimension `d` is a multilinear map
//! `V^⊗n → V` stored as the dense coefficient array `c^i_{j1…jn}`, the
//! coefficient of `e_i` in `f(e_{j1}, …, e_{jn})`. The *reduced degree* is
//! `|f| = n − 1`. The partial composition inserts `g` into argument slot `i`
//! of `f` with the Koszul sign `(−1)^{i·|g|}`:
//!
//! ```text
//! f ∘_i g = (−1)^{i|g|} f ∘ (1^⊗i ⊗ g ⊗ 1^⊗(|f|−i)),    0 ≤ i ≤ |f|
//! ```
//!
//! Summing the insertions gives the total composition `f ∘ g`, and the graded
//! commutator `[f,g] = f∘g − (−1)^{|f||g|} g∘f` is the Gerstenhaber bracket,
//! under which the operations form a graded Lie algebra.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// A degree-`n` multilinear operation `V^⊗n → V` with dense coefficients.
///
/// Coefficients are laid out row-major in the index order `(i, j1, …, jn)`,
/// so the flat index of `c^i_{j1…jn}` is `i·d^n + j1·d^(n−1) + … + jn`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiOp {
    degree: usize,
    dim: usize,
    coeffs: Vec<f64>,
}

fn pow(d: usize, k: usize) -> usize {
    d.pow(k as u32)
}

impl MultiOp {
    /// The zero operation of the given degree.
    pub fn zero(degree: usize, dim: usize) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        assert!(dim >= 1, "dimension must be at least 1");
        MultiOp {
            degree,
            dim,
            coeffs: vec![0.0; dim * pow(dim, degree)],
        }
    }

    /// The identity map `V → V` as a degree-1 operation.
    pub fn identity(dim: usize) -> Self {
        let mut op = MultiOp::zero(1, dim);
        for i in 0..dim {
            op.set_coeff(i, &[i], 1.0);
        }
        op
    }

    /// Builds an operation from a flat coefficient vector in the layout
    /// documented on the type.
    pub fn from_coeffs(degree: usize, dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        let expected = dim * pow(dim, degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficients must be finite".into(),
            ));
        }
        Ok(MultiOp {
            degree,
            dim,
            coeffs,
        })
    }

    /// Builds an operation by evaluating `f(i, [j1, …, jn])` on every index.
    pub fn from_fn(degree: usize, dim: usize, mut f: impl FnMut(usize, &[usize]) -> f64) -> Self {
        let mut op = MultiOp::zero(degree, dim);
        let args_len = pow(dim, degree);
        let mut args = vec![0usize; degree];
        for i in 0..dim {
            for flat in 0..args_len {
                decode(flat, dim, &mut args);
                let v = f(i, &args);
                op.coeffs[i * args_len + flat] = v;
            }
        }
        op
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reduced degree `|f| = degree − 1`.
    pub fn reduced_degree(&self) -> usize {
        self.degree - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn flat(&self, out: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.degree);
        let mut idx = out;
        for &j in args {
            debug_assert!(j < self.dim);
            idx = idx * self.dim + j;
        }
        idx
    }

    pub fn coeff(&self, out: usize, args: &[usize]) -> f64 {
        self.coeffs[self.flat(out, args)]
    }

    pub fn set_coeff(&mut self, out: usize, args: &[usize], value: f64) {
        let idx = self.flat(out, args);
        self.coeffs[idx] = value;
    }

    /// Partial composition `f ∘_slot g`, inserting `g` into argument slot
    /// `slot` of `f` (0-based, `0 ≤ slot ≤ |f|`) with the Koszul sign
    /// `(−1)^{slot·|g|}`.
    pub fn partial_compose(&self, g: &MultiOp, slot: usize) -> Result<MultiOp> {
        if self.dim != g.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: g.dim,
            });
        }
        if slot > self.reduced_degree() {
            return Err(Error::SlotOutOfRange {
                slot,
                max: self.reduced_degree(),
            });
        }
        let d = self.dim;
        let n = self.degree;
        let m = g.degree;
        let out_degree = n + m - 1;
        let mut out = MultiOp::zero(out_degree, d);

        let sign = if (slot * g.reduced_degree()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };

        // Split an n-digit argument index of f at the insertion slot:
        // a = (prefix, u, suffix) with |prefix| = slot, |suffix| = n-1-slot.
        let f_args = pow(d, n);
        let g_args = pow(d, m);
        let suffix_len = pow(d, n - 1 - slot);
        let mid_len = pow(d, n - slot);
        for s in 0..d {
            let f_row = &self.coeffs[s * f_args..(s + 1) * f_args];
            let out_row = &mut out.coeffs[s * pow(d, out_degree)..(s + 1) * pow(d, out_degree)];
            for (a, &cf) in f_row.iter().enumerate() {
                if cf == 0.0 {
                    continue;
                }
                let prefix = a / mid_len;
                let rem = a % mid_len;
                let u = rem / suffix_len;
                let suffix = rem % suffix_len;
                let g_row = &g.coeffs[u * g_args..(u + 1) * g_args];
                let base = prefix * g_args;
                for (b, &cg) in g_row.iter().enumerate() {
                    if cg == 0.0 {
                        continue;
                    }
                    let idx = (base + b) * suffix_len + suffix;
                    out_row[idx] += sign * cf * cg;
                }
            }
        }
        Ok(out)
    }

    /// Total composition `f ∘ g = Σ_{i=0}^{|f|} f ∘_i g`.
    pub fn total_compose(&self, g: &MultiOp) -> Result<MultiOp> {
        let mut acc = self.partial_compose(g, 0)?;
        for slot in 1..=self.reduced_degree() {
            let term = self.partial_compose(g, slot)?;
            acc.add_assign(&term);
        }
        Ok(acc)
    }

    /// Gerstenhaber bracket `[f,g] = f∘g − (−1)^{|f||g|} g∘f`.
    pub fn gerstenhaber(&self, g: &MultiOp) -> Result<MultiOp> {
        let fg = self.total_compose(g)?;
        let gf = g.total_compose(self)?;
        let sign = if (self.reduced_degree() * g.reduced_degree()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let mut out = fg;
        out.add_scaled_assign(&gf, -sign);
        Ok(out)
    }

    /// Evaluates the operation on concrete vectors: component `i` is
    /// `Σ c^i_{j1…jn} v1^{j1} ⋯ vn^{jn}`.
    pub fn apply(&self, args: &[DVector<f64>]) -> Result<DVector<f64>> {
        if args.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                got: args.len(),
            });
        }
        for v in args {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        // Contract the trailing argument repeatedly; the flat layout makes the
        // last index the fastest-varying one.
        let d = self.dim;
        let mut current = self.coeffs.clone();
        for v in args.iter().rev() {
            let blocks = current.len() / d;
            let mut next = vec![0.0; blocks];
            for (blk, slot) in next.iter_mut().enumerate() {
                let row = &current[blk * d..(blk + 1) * d];
                *slot = row.iter().zip(v.iter()).map(|(c, x)| c * x).sum();
            }
            current = next;
        }
        Ok(DVector::from_vec(current))
    }

    fn add_assign(&mut self, other: &MultiOp) {
        debug_assert_eq!(self.degree, other.degree);
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    fn add_scaled_assign(&mut self, other: &MultiOp, factor: f64) {
        debug_assert_eq!(self.degree, other.degree);
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    /// `self + factor·other`, for residual bookkeeping in tests and checks.
    pub fn add_scaled(&self, other: &MultiOp, factor: f64) -> Result<MultiOp> {
        if self.degree != other.degree || self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: other.coeffs.len(),
            });
        }
        let mut out = self.clone();
        out.add_scaled_assign(other, factor);
        Ok(out)
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &MultiOp) -> Result<f64> {
        if self.degree != other.degree || self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: other.coeffs.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Debug text dump: one line `i j1 … jn value` per nonzero coefficient
    /// (1-based indices), sorted lexicographically.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let args_len = pow(self.dim, self.degree);
        let mut args = vec![0usize; self.degree];
        for i in 0..self.dim {
            for flat in 0..args_len {
                let c = self.coeffs[i * args_len + flat];
                if c == 0.0 {
                    continue;
                }
                decode(flat, self.dim, &mut args);
                out.push_str(&format!("{}", i + 1));
                for &j in &args {
                    out.push_str(&format!(" {}", j + 1));
                }
                out.push_str(&format!(" {}\n", c));
            }
        }
        out
    }
}

/// Decodes a flat argument index into base-`d` digits, most significant first.
fn decode(mut flat: usize, d: usize, digits: &mut [usize]) {
    for slot in digits.iter_mut().rev() {
        *slot = flat % d;
        flat /= d;
    }
}
