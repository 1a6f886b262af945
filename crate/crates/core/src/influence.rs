//! Coordinate influence under arbitrary distributions, exact Shapley
//! values, the Owen integral identity, the Margulis-Russo derivative check,
//! two-parameter expectations for unate functions, and level curves.

use crate::boolfn::BooleanFunction;
use crate::dist::Dist;
use crate::exact::{gauss_legendre, rat_to_f64, Rat};
use crate::{Error, Result};
use num_traits::Zero;

/// `Inf_Ω[f, i] = Pr_{x̄∼Ω}[f(x̄) ≠ f(x̄ ⊕ i)]` for Boolean `f`.
pub fn influence(f: &BooleanFunction, i: usize, omega: &Dist) -> Result<f64> {
    let n = f.arity();
    if i == 0 || i > n {
        return Err(Error::CoordOutOfRange { coord: i, arity: n });
    }
    let masses = omega.dense_masses(n)?;
    Ok(influence_with_masses(f, i, &masses))
}

fn influence_with_masses(f: &BooleanFunction, i: usize, masses: &[f64]) -> f64 {
    let bit = 1u32 << (i - 1);
    let mut inf = 0.0;
    for x in 0..f.points() {
        if x & bit != 0 {
            continue;
        }
        if f.eval_u32(x) != f.eval_u32(x | bit) {
            inf += masses[x as usize] + masses[(x | bit) as usize];
        }
    }
    inf
}

/// Σ_i `Inf_Ω[f, i]`.
pub fn total_influence(f: &BooleanFunction, omega: &Dist) -> Result<f64> {
    let masses = omega.dense_masses(f.arity())?;
    Ok((1..=f.arity()).map(|i| influence_with_masses(f, i, &masses)).sum())
}

/// Counts of pivotal points for coordinate `i`, grouped by Hamming weight.
///
/// `Inf^{(p)}[f, i] = Σ_k counts[k]·p^k(1-p)^{n-k}`, a polynomial in `p`.
pub fn pivotal_counts(f: &BooleanFunction, i: usize) -> Result<Vec<u64>> {
    let n = f.arity();
    if i == 0 || i > n {
        return Err(Error::CoordOutOfRange { coord: i, arity: n });
    }
    let bit = 1u32 << (i - 1);
    let mut counts = vec![0u64; n + 1];
    for x in 0..f.points() {
        if x & bit != 0 {
            continue;
        }
        if f.eval_u32(x) != f.eval_u32(x | bit) {
            counts[(x.count_ones()) as usize] += 1;
            counts[(x | bit).count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

/// Fast path for the biased influence via weight counts.
pub fn influence_biased(f: &BooleanFunction, i: usize, p: f64) -> f64 {
    let counts = pivotal_counts(f, i).expect("coordinate in range");
    eval_weight_poly(&counts, f.arity(), p)
}

fn eval_weight_poly(counts: &[u64], n: usize, p: f64) -> f64 {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| c as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
        .sum()
}

/// `E_p[f]` via weight counts; exact at the endpoints `p ∈ {0, 1}`.
pub fn ep(f: &BooleanFunction, p: f64) -> f64 {
    eval_weight_poly(&f.ones_by_weight(), f.arity(), p)
}

/// Exact derivative `d/dp E_p[f]`, differentiating each weight term.
pub fn ep_derivative(f: &BooleanFunction, p: f64) -> f64 {
    let n = f.arity();
    let mut d = 0.0;
    for (k, &c) in f.ones_by_weight().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let k = k as i32;
        let nk = (n as i32) - k;
        let mut term = 0.0;
        if k > 0 {
            term += k as f64 * p.powi(k - 1) * (1.0 - p).powi(nk);
        }
        if nk > 0 {
            term -= nk as f64 * p.powi(k) * (1.0 - p).powi(nk - 1);
        }
        d += c as f64 * term;
    }
    d
}

/// Exact Shapley value of coordinate `i`: the sum of
/// `|x̄|!·(n-|x̄|)!/(n+1)!` over pivotal points, as a rational.
/// Valid through arity 25 on 128-bit arithmetic.
pub fn shapley_influence_exact(f: &BooleanFunction, i: usize) -> Result<Rat> {
    let n = f.arity();
    if n > crate::dist::MAX_EXACT_DIM {
        return Err(Error::SizeLimit(format!(
            "exact Shapley path capped at arity {}, got {n}",
            crate::dist::MAX_EXACT_DIM
        )));
    }
    let counts = pivotal_counts(f, i)?;
    let layers = Dist::Shapley.layer_masses_exact(n)?.expect("dimension within exact range");
    let mut total = Rat::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            total += layers[k] * Rat::from_integer(c as i128);
        }
    }
    Ok(total)
}

/// Outcome of comparing the biased-influence integral against the exact
/// Shapley value.
#[derive(Clone, Debug)]
pub struct OwenReport {
    /// Numeric Gauss-Legendre value of `∫ Inf^{(p)}[f,i] dp`.
    pub quadrature: f64,
    /// Termwise Beta-integrated value; exactly the Shapley value.
    pub termwise: Rat,
    /// Exact Shapley value for reference.
    pub shapley: Rat,
    /// `|quadrature - shapley|`.
    pub quadrature_residual: f64,
}

/// Integrates the biased influence over `p ∈ [0,1]` two ways: an n-point
/// Gauss-Legendre rule, and exact termwise Beta integration of each weight
/// term (`∫ p^k(1-p)^{n-k} dp = k!(n-k)!/(n+1)!`).
pub fn owen_residual(f: &BooleanFunction, i: usize, points: usize) -> Result<OwenReport> {
    let n = f.arity();
    if points < 1 {
        return Err(Error::InvalidParameter("need at least one quadrature point".into()));
    }
    let counts = pivotal_counts(f, i)?;
    let (nodes, weights) = gauss_legendre(points);
    let quadrature: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(&p, &w)| w * eval_weight_poly(&counts, n, p))
        .sum();
    let layers = Dist::Shapley.layer_masses_exact(n)?.ok_or_else(|| {
        Error::SizeLimit(format!("termwise Beta path capped at arity {}", crate::dist::MAX_EXACT_DIM))
    })?;
    let mut termwise = Rat::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            // ∫ p^k(1-p)^{n-k} dp = 1/((n+1)·C(n,k)), the Shapley layer mass
            termwise += layers[k] * Rat::from_integer(c as i128);
        }
    }
    let shapley = shapley_influence_exact(f, i)?;
    Ok(OwenReport {
        quadrature,
        termwise,
        shapley,
        quadrature_residual: (quadrature - rat_to_f64(shapley)).abs(),
    })
}

/// `|central difference of E_p[f] - I^{(p)}[f]|` for increasing `f`.
pub fn margulis_russo_residual(f: &BooleanFunction, p: f64, h: f64) -> Result<f64> {
    if !f.classify().is_increasing {
        return Err(Error::NotIncreasing);
    }
    if !(h > 0.0) || p - h <= 0.0 || p + h >= 1.0 {
        return Err(Error::InvalidParameter(format!("need 0 < p-h and p+h < 1, got p={p} h={h}")));
    }
    let diff = (ep(f, p + h) - ep(f, p - h)) / (2.0 * h);
    let total: f64 = (1..=f.arity()).map(|i| influence_biased(f, i, p)).sum();
    Ok((diff - total).abs())
}

fn pq_bias_vector(f: &BooleanFunction, p: f64, q: f64) -> Result<Vec<f64>> {
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!("bias {v} outside [0,1]")));
        }
    }
    let cls = f.classify();
    if !cls.is_unate {
        return Err(Error::NotUnate);
    }
    // strictly decreasing coordinates get q; everything else (increasing or
    // non-essential) gets p
    let decreasing = cls.strictly_decreasing_mask();
    Ok((0..f.arity())
        .map(|i| if decreasing >> i & 1 == 1 { q } else { p })
        .collect())
}

/// `E_{p,q}[f]`: expectation with increasing coordinates biased at `p` and
/// decreasing coordinates at `q`. `f` must be unate.
pub fn expectation_pq(f: &BooleanFunction, p: f64, q: f64) -> Result<f64> {
    let r = pq_bias_vector(f, p, q)?;
    crate::dist::expectation(f, &Dist::product(r)?)
}

/// `Inf^{(p,q)}[f, i]` under the same two-parameter product measure.
pub fn influence_pq(f: &BooleanFunction, i: usize, p: f64, q: f64) -> Result<f64> {
    let r = pq_bias_vector(f, p, q)?;
    influence(f, i, &Dist::product(r)?)
}

/// Residuals of the two partial-derivative identities for unate functions:
/// `∂/∂p E_{p,q} = Σ_{incr i} Inf^{(p,q)}[f,i]` and
/// `-∂/∂q E_{p,q} = Σ_{decr i} Inf^{(p,q)}[f,i]`, via central differences.
#[derive(Clone, Copy, Debug)]
pub struct PqResiduals {
    pub dp_residual: f64,
    pub dq_residual: f64,
}

pub fn pq_derivative_residuals(f: &BooleanFunction, p: f64, q: f64, h: f64) -> Result<PqResiduals> {
    if !(h > 0.0) || p - h < 0.0 || p + h > 1.0 || q - h < 0.0 || q + h > 1.0 {
        return Err(Error::InvalidParameter("step h leaves the unit square".into()));
    }
    let cls = f.classify();
    if !cls.is_unate {
        return Err(Error::NotUnate);
    }
    let decreasing = cls.strictly_decreasing_mask();
    let masses = Dist::product(pq_bias_vector(f, p, q)?)?.dense_masses(f.arity())?;
    let mut sum_incr = 0.0;
    let mut sum_decr = 0.0;
    for i in 1..=f.arity() {
        let inf = influence_with_masses(f, i, &masses);
        if decreasing >> (i - 1) & 1 == 1 {
            sum_decr += inf;
        } else {
            sum_incr += inf;
        }
    }
    let dp = (expectation_pq(f, p + h, q)? - expectation_pq(f, p - h, q)?) / (2.0 * h);
    let dq = (expectation_pq(f, p, q + h)? - expectation_pq(f, p, q - h)?) / (2.0 * h);
    Ok(PqResiduals { dp_residual: (dp - sum_incr).abs(), dq_residual: (-dq - sum_decr).abs() })
}

/// One point of a level curve: the `p` solving `E_{p,q}[f] = ε` at this `q`,
/// or `None` when no sign change exists on `[0,1]`.
#[derive(Clone, Copy, Debug)]
pub struct LevelPoint {
    pub q: f64,
    pub p: Option<f64>,
}

/// Traces the ε-level curve of `E_{p,q}[f]` over a grid of `q` values by
/// bisection in `p`, exploiting strict monotonicity in `p` for idempotent
/// unate functions. Bisection tolerance `1e-10`, at most 60 iterations.
pub fn level_curve(f: &BooleanFunction, eps: f64, q_grid: &[f64]) -> Result<Vec<LevelPoint>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps={eps} outside (0,1)")));
    }
    let cls = f.classify();
    if !cls.is_unate {
        return Err(Error::NotUnate);
    }
    if !cls.is_idempotent {
        return Err(Error::InvalidParameter("level curves need an idempotent function".into()));
    }
    let mut out = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        let lo_val = expectation_pq(f, 0.0, q)?;
        let hi_val = expectation_pq(f, 1.0, q)?;
        if (lo_val - eps) * (hi_val - eps) > 0.0 {
            out.push(LevelPoint { q, p: None });
            continue;
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for _ in 0..60 {
            if hi - lo < 1e-10 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if expectation_pq(f, mid, q)? < eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(LevelPoint { q, p: Some(0.5 * (lo + hi)) });
    }
    Ok(out)
}

/// Report of the square-root total-influence bound and the singleton
/// coefficient identity for a unate function.
#[derive(Clone, Copy, Debug)]
pub struct SqrtBoundReport {
    pub total_influence: f64,
    pub bound: f64,
    pub bound_ok: bool,
    /// Worst `||f̂({i})| - √(p(1-p))·Inf^{(p)}[f,i]|` over coordinates.
    pub max_identity_residual: f64,
}

/// For unate `f`: checks `I^{(p)}[f] ≤ √(n/(p(1-p)))` and the per-coordinate
/// identity `Inf^{(p)}[f,i] = |f̂({i})|/√(p(1-p))`.
pub fn unate_sqrt_bound_check(f: &BooleanFunction, p: f64) -> Result<SqrtBoundReport> {
    if !f.classify().is_unate {
        return Err(Error::NotUnate);
    }
    let n = f.arity();
    let spec = crate::fourier::Spectrum::transform(f, p)?;
    let s = (p * (1.0 - p)).sqrt();
    let mut total = 0.0;
    let mut max_resid = 0.0f64;
    for i in 1..=n {
        let inf = influence_biased(f, i, p);
        total += inf;
        let coeff = spec.coeff(1 << (i - 1)).abs();
        max_resid = max_resid.max((coeff - s * inf).abs());
    }
    let bound = (n as f64 / (p * (1.0 - p))).sqrt();
    Ok(SqrtBoundReport {
        total_influence: total,
        bound,
        bound_ok: total <= bound + 1e-12,
        max_identity_residual: max_resid,
    })
}
