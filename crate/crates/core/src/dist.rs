//! Probability distribution families on `{0,1}^n`: biased, Shapley,
//! pull-back, explicit symmetric, and product. Exact rational masses are
//! available on the symmetric paths (128-bit arithmetic, valid through
//! dimension 25); everything else falls back to `f64`.

use crate::boolfn::{BitTuple, BooleanFunction};
use crate::exact::{binom, binom_f64, rat_to_f64, Rat};
use crate::{Error, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Largest dimension for which the `Ratio<i128>` exact paths are valid.
pub const MAX_EXACT_DIM: usize = 25;

/// A family of distributions, one per dimension where defined.
#[derive(Clone, Debug, PartialEq)]
pub enum Dist {
    /// Product measure with every bit `1` with probability `p`.
    Biased(f64),
    /// Exact-rational biased measure; same family as `Biased`, exact path.
    BiasedExact(Rat),
    /// Mass `((n+1)·C(n,|x̄|))^{-1}`.
    Shapley,
    /// Law of `π^{-1}(ȳ)` for uniform 2-to-1 `π` and `ȳ` from the inner
    /// family; defined on even dimensions only.
    Pullback(Box<Dist>),
    /// A single-dimension symmetric distribution given by per-tuple layer
    /// masses (index = Hamming weight).
    ExplicitSymmetric { n: usize, layers: Vec<Rat> },
    /// Product measure with per-coordinate biases.
    Product(Vec<f64>),
}

/// Serialized distribution spec.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistJson {
    Biased { p: f64 },
    Shapley,
    Pullback { inner: Box<DistJson> },
    Product { r: Vec<f64> },
}

impl Dist {
    pub fn biased(p: f64) -> Result<Dist> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("bias p={p} outside (0,1)")));
        }
        Ok(Dist::Biased(p))
    }

    /// Biased family with rational `num/den ∈ (0,1)`; masses stay exact.
    pub fn biased_exact(num: i128, den: i128) -> Result<Dist> {
        if den <= 0 || num <= 0 || num >= den {
            return Err(Error::InvalidParameter(format!("bias {num}/{den} outside (0,1)")));
        }
        Ok(Dist::BiasedExact(Rat::new(num, den)))
    }

    pub fn pullback(inner: Dist) -> Result<Dist> {
        if !inner.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Dist::Pullback(Box::new(inner)))
    }

    /// Explicit symmetric distribution from per-tuple masses by weight;
    /// validates that the total mass is exactly 1.
    pub fn explicit_symmetric(n: usize, layers: Vec<Rat>) -> Result<Dist> {
        if layers.len() != n + 1 {
            return Err(Error::InvalidParameter(format!(
                "need {} layer masses for dimension {n}",
                n + 1
            )));
        }
        if layers.iter().any(|m| *m < Rat::zero()) {
            return Err(Error::InvalidParameter("negative layer mass".into()));
        }
        let total: Rat = layers
            .iter()
            .enumerate()
            .map(|(k, m)| Rat::from_integer(binom(n, k)) * m)
            .sum();
        if total != Rat::one() {
            return Err(Error::InvalidParameter(format!("total mass {total} != 1")));
        }
        Ok(Dist::ExplicitSymmetric { n, layers })
    }

    pub fn product(r: Vec<f64>) -> Result<Dist> {
        if r.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter("product bias outside [0,1]".into()));
        }
        Ok(Dist::Product(r))
    }

    pub fn from_json(json: &DistJson) -> Result<Dist> {
        match json {
            DistJson::Biased { p } => Dist::biased(*p),
            DistJson::Shapley => Ok(Dist::Shapley),
            DistJson::Pullback { inner } => Dist::pullback(Dist::from_json(inner)?),
            DistJson::Product { r } => Dist::product(r.clone()),
        }
    }

    pub fn to_json(&self) -> Result<DistJson> {
        match self {
            Dist::Biased(p) => Ok(DistJson::Biased { p: *p }),
            Dist::BiasedExact(p) => Ok(DistJson::Biased { p: rat_to_f64(*p) }),
            Dist::Shapley => Ok(DistJson::Shapley),
            Dist::Pullback(inner) => {
                Ok(DistJson::Pullback { inner: Box::new(inner.to_json()?) })
            }
            Dist::Product(r) => Ok(DistJson::Product { r: r.clone() }),
            Dist::ExplicitSymmetric { .. } => Err(Error::Unsupported(
                "explicit symmetric families have no JSON spec".into(),
            )),
        }
    }

    /// Whether masses depend on the Hamming weight only.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Dist::Product(r) => r.windows(2).all(|w| w[0] == w[1]),
            _ => true,
        }
    }

    /// Checks that the family is defined at dimension `n`. Layer-mass
    /// computations work at any dimension; dense tables are separately
    /// capped at [`crate::boolfn::MAX_ARITY`].
    pub fn check_dim(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::SizeLimit("dimension must be at least 1".into()));
        }
        match self {
            Dist::Pullback(inner) => {
                if n % 2 != 0 {
                    return Err(Error::OddDimension(n));
                }
                inner.check_dim(n / 2)
            }
            Dist::ExplicitSymmetric { n: dim, .. } => {
                if *dim != n {
                    return Err(Error::ArityMismatch { expected: *dim, got: n });
                }
                Ok(())
            }
            Dist::Product(r) => {
                if r.len() != n {
                    return Err(Error::ArityMismatch { expected: r.len(), got: n });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Mass of the point `x` in the dimension-`n` member of the family.
    pub fn mass(&self, n: usize, x: BitTuple) -> Result<f64> {
        self.check_dim(n)?;
        if n > crate::boolfn::MAX_ARITY {
            return Err(Error::SizeLimit(format!(
                "point masses capped at dimension {}, got {n}",
                crate::boolfn::MAX_ARITY
            )));
        }
        if x.0 >= 1u32 << n {
            return Err(Error::CoordOutOfRange { coord: x.0 as usize, arity: n });
        }
        Ok(self.mass_unchecked(n, x))
    }

    fn mass_unchecked(&self, n: usize, x: BitTuple) -> f64 {
        match self {
            Dist::Product(r) => {
                let mut m = 1.0;
                for (i, &p) in r.iter().enumerate() {
                    m *= if x.bit(i + 1) { p } else { 1.0 - p };
                }
                m
            }
            _ => self.layer_mass_f64(n, x.weight() as usize),
        }
    }

    /// Exact mass where available; `None` on float-only paths or when the
    /// dimension exceeds the 128-bit exact range.
    pub fn mass_exact(&self, n: usize, x: BitTuple) -> Result<Option<Rat>> {
        self.check_dim(n)?;
        Ok(self.layer_mass_exact(n, x.weight() as usize))
    }

    /// Per-tuple mass at Hamming weight `k` (symmetric families).
    fn layer_mass_f64(&self, n: usize, k: usize) -> f64 {
        match self {
            Dist::Biased(p) => p.powi(k as i32) * (1.0 - p).powi((n - k) as i32),
            Dist::BiasedExact(p) => {
                let p = rat_to_f64(*p);
                p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
            }
            Dist::Shapley => 1.0 / ((n as f64 + 1.0) * binom_f64(n, k)),
            Dist::Pullback(inner) => {
                if k % 2 != 0 {
                    return 0.0;
                }
                let half = n / 2;
                inner.layer_mass_f64(half, k / 2) * binom_f64(half, k / 2) / binom_f64(n, k)
            }
            Dist::ExplicitSymmetric { layers, .. } => rat_to_f64(layers[k]),
            Dist::Product(r) => {
                // only reachable for constant bias vectors
                let p = r[0];
                p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
            }
        }
    }

    fn layer_mass_exact(&self, n: usize, k: usize) -> Option<Rat> {
        if n > MAX_EXACT_DIM {
            return None;
        }
        match self {
            Dist::BiasedExact(p) => {
                let q = Rat::one() - p;
                let mut m = Rat::one();
                for _ in 0..k {
                    m *= p;
                }
                for _ in 0..n - k {
                    m *= q;
                }
                Some(m)
            }
            Dist::Shapley => Some(Rat::new(1, (n as i128 + 1) * binom(n, k))),
            Dist::Pullback(inner) => {
                if k % 2 != 0 {
                    return Some(Rat::zero());
                }
                let half = n / 2;
                let m = inner.layer_mass_exact(half, k / 2)?;
                Some(m * Rat::new(binom(half, k / 2), binom(n, k)))
            }
            Dist::ExplicitSymmetric { layers, .. } => Some(layers[k]),
            _ => None,
        }
    }

    /// Per-tuple masses indexed by Hamming weight. Symmetric families only.
    pub fn layer_masses(&self, n: usize) -> Result<Vec<f64>> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        self.check_dim(n)?;
        Ok((0..=n).map(|k| self.layer_mass_f64(n, k)).collect())
    }

    /// Exact per-tuple masses by weight, when the family supports them.
    pub fn layer_masses_exact(&self, n: usize) -> Result<Option<Vec<Rat>>> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        self.check_dim(n)?;
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            match self.layer_mass_exact(n, k) {
                Some(m) => out.push(m),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Dense mass table over all `2^n` points.
    pub fn dense_masses(&self, n: usize) -> Result<Vec<f64>> {
        self.check_dim(n)?;
        if n > crate::boolfn::MAX_ARITY {
            return Err(Error::SizeLimit(format!(
                "dense mass table capped at dimension {}, got {n}",
                crate::boolfn::MAX_ARITY
            )));
        }
        let size = 1usize << n;
        match self {
            Dist::Product(r) => {
                let mut out = vec![1.0; size];
                for (i, &p) in r.iter().enumerate() {
                    let bit = 1usize << i;
                    for (j, o) in out.iter_mut().enumerate() {
                        *o *= if j & bit != 0 { p } else { 1.0 - p };
                    }
                }
                Ok(out)
            }
            _ => {
                let layers: Vec<f64> = (0..=n).map(|k| self.layer_mass_f64(n, k)).collect();
                Ok((0..size).map(|j| layers[(j as u32).count_ones() as usize]).collect())
            }
        }
    }
}

/// Probability that a fixed tuple of weight `2k` in `{0,1}^{2n}` is
/// consistent with a uniformly random 2-to-1 map: `C(n,k)/C(2n,2k)`.
pub fn consistency_probability(n: usize, k: usize) -> Result<Rat> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k={k} exceeds n={n}")));
    }
    if 2 * n > 60 {
        return Err(Error::SizeLimit("binomial C(2n,2k) exceeds exact range".into()));
    }
    Ok(Rat::new(binom(n, k), binom(2 * n, 2 * k)))
}

/// Closed-form pull-back mass of `z ∈ {0,1}^{2n}` for a symmetric inner
/// family: `Ω_n(k) · C(n,k)/C(2n,2k)` at weight `2k`, zero on odd weights.
pub fn pullback_mass_closed(inner: &Dist, two_n: usize, z: BitTuple) -> Result<f64> {
    Dist::pullback(inner.clone())?.mass(two_n, z)
}

/// Exact-rational counterpart of [`pullback_mass_closed`].
pub fn pullback_mass_closed_exact(inner: &Dist, two_n: usize, z: BitTuple) -> Result<Option<Rat>> {
    Dist::pullback(inner.clone())?.mass_exact(two_n, z)
}

/// Brute-force pull-back mass: the average over all `(2n)!/2^n` maps of the
/// probability of hitting `z`. Oracle for the closed form; `2n ≤ 10`.
pub fn pullback_mass_enumerated(inner: &Dist, two_n: usize, z: BitTuple) -> Result<f64> {
    let table = pullback_dense_enumerated(inner, two_n)?;
    Ok(table[z.0 as usize])
}

/// Exact-rational brute-force pull-back masses for the whole cube `{0,1}^{2n}`.
pub fn pullback_dense_enumerated_exact(inner: &Dist, two_n: usize) -> Result<Option<Vec<Rat>>> {
    if two_n % 2 != 0 {
        return Err(Error::OddDimension(two_n));
    }
    let n = two_n / 2;
    if two_n > 10 {
        return Err(Error::SizeLimit(format!(
            "enumeration of all 2-to-1 maps capped at dimension 10, got {two_n}"
        )));
    }
    let layers = match inner.layer_masses_exact(n)? {
        Some(l) => l,
        None => return Ok(None),
    };
    let maps = crate::minors::enumerate_two_to_one(n)?;
    let count = Rat::from_integer(maps.len() as i128);
    let mut acc = vec![Rat::zero(); 1usize << two_n];
    for pi in &maps {
        for y in 0..1u32 << n {
            let z = pi.pullback_tuple(BitTuple(y));
            acc[z.0 as usize] += layers[y.count_ones() as usize];
        }
    }
    for a in acc.iter_mut() {
        *a /= count;
    }
    Ok(Some(acc))
}

/// Float brute-force pull-back masses for the whole cube.
pub fn pullback_dense_enumerated(inner: &Dist, two_n: usize) -> Result<Vec<f64>> {
    if two_n % 2 != 0 {
        return Err(Error::OddDimension(two_n));
    }
    let n = two_n / 2;
    if two_n > 10 {
        return Err(Error::SizeLimit(format!(
            "enumeration of all 2-to-1 maps capped at dimension 10, got {two_n}"
        )));
    }
    let layers = inner.layer_masses(n)?;
    let maps = crate::minors::enumerate_two_to_one(n)?;
    let mut acc = vec![0.0; 1usize << two_n];
    for pi in &maps {
        for y in 0..1u32 << n {
            let z = pi.pullback_tuple(BitTuple(y));
            acc[z.0 as usize] += layers[y.count_ones() as usize];
        }
    }
    let count = maps.len() as f64;
    for a in acc.iter_mut() {
        *a /= count;
    }
    Ok(acc)
}

/// Candidate reasonable-distribution parameters, checked rather than derived.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ReasonableParams {
    pub eps: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub n_min: usize,
}

impl ReasonableParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidParameter("eps must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha)
            || !(0.0..=1.0).contains(&self.beta)
            || self.alpha > self.beta
        {
            return Err(Error::InvalidParameter("need 0 ≤ alpha ≤ beta ≤ 1".into()));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParameter("lambda must lie in (0,1)".into()));
        }
        Ok(())
    }
}

/// Outcome of checking the reasonable-distribution axioms at dimension `n`.
///
/// The ratio checks use closed intervals `[λ, 1/λ]` with a `1e-12` slack so
/// that boundary parameter choices (such as `λ = min(p, 1-p)` for the biased
/// family) validate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReasonableReport {
    pub n: usize,
    /// Mass of the weight band `[αn, βn]` and whether it is ≥ 1-ε.
    pub band_mass: f64,
    pub band_ok: bool,
    /// Largest layer mass and whether it is < ε.
    pub max_layer_mass: f64,
    pub flatness_ok: bool,
    /// Extremes of `Ω_n(k±1)/Ω_n(k)` over the band and their `[λ, 1/λ]` check.
    pub smoothness_ratio_range: (f64, f64),
    pub smoothness_ok: bool,
    /// Extremes of `Ω_{n±1}(k)/Ω_n(k)` over the band; `None` when the family
    /// is not defined at an adjacent dimension.
    pub consistency_ratio_range: Option<(f64, f64)>,
    pub consistency_ok: Option<bool>,
    /// Minimum of `Ω_{2n}(z)/Ω↓_{2n}(z)` over even-weight layers: the best
    /// admissible pull-back compatibility constant at this dimension.
    pub pullback_c: Option<f64>,
}

const RATIO_SLACK: f64 = 1e-12;

fn within_band(k: usize, n: usize, alpha: f64, beta: f64) -> bool {
    let k = k as f64;
    k >= alpha * n as f64 && k <= beta * n as f64
}

/// Checks the band, flatness, smoothness, and consistency axioms at
/// dimension `n` against candidate parameters, and reports the measured
/// pull-back compatibility constant. Report-only: no axiom failure is an error.
pub fn check_reasonable(omega: &Dist, params: &ReasonableParams, n: usize) -> Result<ReasonableReport> {
    params.validate()?;
    if !omega.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let layers = omega.layer_masses(n)?;
    let lo = params.lambda - RATIO_SLACK;
    let hi = 1.0 / params.lambda + RATIO_SLACK;

    let mut band_mass = 0.0;
    let mut max_layer = 0.0f64;
    for k in 0..=n {
        let layer_total = layers[k] * binom_f64(n, k);
        max_layer = max_layer.max(layer_total);
        if within_band(k, n, params.alpha, params.beta) {
            band_mass += layer_total;
        }
    }

    let mut smooth_min = f64::INFINITY;
    let mut smooth_max = f64::NEG_INFINITY;
    for k in 0..=n {
        if !within_band(k, n, params.alpha, params.beta) {
            continue;
        }
        if k + 1 <= n && layers[k] > 0.0 {
            let r = layers[k + 1] / layers[k];
            smooth_min = smooth_min.min(r);
            smooth_max = smooth_max.max(r);
        }
        if k >= 1 && layers[k] > 0.0 {
            let r = layers[k - 1] / layers[k];
            smooth_min = smooth_min.min(r);
            smooth_max = smooth_max.max(r);
        }
    }
    if smooth_min > smooth_max {
        // empty band: vacuously smooth
        smooth_min = 1.0;
        smooth_max = 1.0;
    }
    let smoothness_ok = smooth_min >= lo && smooth_max <= hi;

    // adjacent-dimension ratios, when the family extends there
    let consistency = match (omega.layer_masses(n + 1), if n >= 2 { omega.layer_masses(n - 1).ok() } else { None }) {
        (Ok(up), Some(down)) => {
            let mut cmin = f64::INFINITY;
            let mut cmax = f64::NEG_INFINITY;
            for k in 0..=n {
                if !within_band(k, n, params.alpha, params.beta) || layers[k] == 0.0 {
                    continue;
                }
                let r_up = up[k] / layers[k];
                cmin = cmin.min(r_up);
                cmax = cmax.max(r_up);
                if k < down.len() {
                    let r_down = down[k] / layers[k];
                    cmin = cmin.min(r_down);
                    cmax = cmax.max(r_down);
                }
            }
            if cmin > cmax {
                cmin = 1.0;
                cmax = 1.0;
            }
            Some((cmin, cmax))
        }
        _ => None,
    };

    // best admissible pull-back constant at dimension 2n
    let pullback_c = match (omega.layer_masses(2 * n), Dist::pullback(omega.clone())) {
        (Ok(big), Ok(pb)) => {
            let pb_layers = pb.layer_masses(2 * n)?;
            let mut c = f64::INFINITY;
            for k in 0..=n {
                if pb_layers[2 * k] > 0.0 {
                    c = c.min(big[2 * k] / pb_layers[2 * k]);
                }
            }
            if c.is_finite() {
                Some(c)
            } else {
                None
            }
        }
        _ => None,
    };

    Ok(ReasonableReport {
        n,
        band_mass,
        band_ok: band_mass >= 1.0 - params.eps,
        max_layer_mass: max_layer,
        flatness_ok: max_layer < params.eps,
        smoothness_ratio_range: (smooth_min, smooth_max),
        smoothness_ok,
        consistency_ratio_range: consistency,
        consistency_ok: consistency.map(|(cmin, cmax)| cmin >= lo && cmax <= hi),
        pullback_c,
    })
}

/// Heuristic grid search for parameters that pass [`check_reasonable`] at
/// dimension `n`. Searches a coarse `(α, β, λ)` grid; existence of reported
/// parameters is evidence, not a proof.
pub fn suggest_params(omega: &Dist, eps: f64, n: usize) -> Result<Option<ReasonableParams>> {
    for band in [(0.0, 1.0), (eps / 2.0, 1.0 - eps / 2.0), (0.1, 0.9), (0.25, 0.75)] {
        for lam_steps in 1..20 {
            let lambda = lam_steps as f64 * 0.05;
            if lambda >= 1.0 {
                break;
            }
            let params = ReasonableParams { eps, alpha: band.0, beta: band.1, lambda, n_min: n };
            let rep = check_reasonable(omega, &params, n)?;
            if rep.band_ok
                && rep.flatness_ok
                && rep.smoothness_ok
                && rep.consistency_ok.unwrap_or(true)
            {
                return Ok(Some(params));
            }
        }
    }
    Ok(None)
}

/// `E_{x̄∼Ω}[f(x̄)]` by exhaustive summation.
pub fn expectation(f: &BooleanFunction, omega: &Dist) -> Result<f64> {
    let n = f.arity();
    let masses = omega.dense_masses(n)?;
    Ok(f.domain().filter(|&x| f.eval(x)).map(|x| masses[x.0 as usize]).sum())
}

/// Exact-rational expectation where the family supports it.
pub fn expectation_exact(f: &BooleanFunction, omega: &Dist) -> Result<Option<Rat>> {
    let n = f.arity();
    omega.check_dim(n)?;
    let layers = match omega.layer_masses_exact(n) {
        Ok(Some(l)) => l,
        _ => return Ok(None),
    };
    let mut total = Rat::zero();
    for (k, cnt) in f.ones_by_weight().iter().enumerate() {
        total += layers[k] * Rat::from_integer(*cnt as i128);
    }
    Ok(Some(total))
}

/// Measure of `{x : pred(x)}` under the dimension-`n` member of the family.
pub fn set_measure(n: usize, omega: &Dist, pred: impl Fn(BitTuple) -> bool) -> Result<f64> {
    let masses = omega.dense_masses(n)?;
    Ok((0..1u32 << n).filter(|&j| pred(BitTuple(j))).map(|j| masses[j as usize]).sum())
}

/// Checks the one-coordinate-restriction ratio bound: for `x ∈ {0,1}^n` and
/// its prefix `y ∈ {0,1}^{n-1}` with either weight inside the band,
/// `Ω_{n-1}(ȳ)/Ω_n(x̄) ∈ [λ², 1/λ²]`. Returns the worst observed ratio pair.
pub fn restriction_ratio_check(
    omega: &Dist,
    params: &ReasonableParams,
    n: usize,
) -> Result<(bool, f64, f64)> {
    params.validate()?;
    let big = omega.layer_masses(n)?;
    let small = omega.layer_masses(n - 1)?;
    let lo = params.lambda * params.lambda - RATIO_SLACK;
    let hi = 1.0 / (params.lambda * params.lambda) + RATIO_SLACK;
    let mut rmin = f64::INFINITY;
    let mut rmax = f64::NEG_INFINITY;
    // weight of x is k or k+1 when its prefix y has weight k
    for k in 0..n {
        for xk in [k, k + 1] {
            if xk > n {
                continue;
            }
            let in_band = within_band(xk, n, params.alpha, params.beta)
                || within_band(k, n - 1, params.alpha, params.beta);
            if !in_band || big[xk] == 0.0 {
                continue;
            }
            let r = small[k] / big[xk];
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
    }
    if rmin > rmax {
        rmin = 1.0;
        rmax = 1.0;
    }
    Ok((rmin >= lo && rmax <= hi, rmin, rmax))
}

/// Checks the set-extension inequalities with `Δ = 1/λ²` on a batch of
/// randomly sampled sets `A ⊆ {0,1}^{n-1}`:
/// `Ω_{n-1}(A) ≤ Δ·Ω_n(A×{0,1}) + ε` and `Ω_n(A×{0,1}) ≤ 2Δ·Ω_{n-1}(A) + ε`.
pub fn set_extension_check(
    omega: &Dist,
    params: &ReasonableParams,
    n: usize,
    sets: usize,
    seed: u64,
) -> Result<bool> {
    use rand::{Rng, SeedableRng};
    params.validate()?;
    let small = omega.dense_masses(n - 1)?;
    let big = omega.dense_masses(n)?;
    let delta = 1.0 / (params.lambda * params.lambda);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let size = 1usize << (n - 1);
    for _ in 0..sets {
        let density: f64 = rng.gen();
        let mut ma = 0.0;
        let mut mb = 0.0;
        for y in 0..size {
            if rng.gen::<f64>() < density {
                ma += small[y];
                mb += big[y] + big[y | size];
            }
        }
        if ma > delta * mb + params.eps + RATIO_SLACK {
            return Ok(false);
        }
        if mb > 2.0 * delta * ma + params.eps + RATIO_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn;

    #[test]
    fn shapley_mass_example() {
        // n=4, |x|=2 → 1/(5·C(4,2)) = 1/30
        let m = Dist::Shapley.mass_exact(4, BitTuple(0b0011)).unwrap().unwrap();
        assert_eq!(m, Rat::new(1, 30));
    }

    #[test]
    fn uniform_mass() {
        let d = Dist::biased(0.5).unwrap();
        for x in 0..8u32 {
            assert!((d.mass(3, BitTuple(x)).unwrap() - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn product_point_mass() {
        let d = Dist::product(vec![1.0, 0.0]).unwrap();
        assert_eq!(d.mass(2, BitTuple(0b01)).unwrap(), 1.0);
        assert_eq!(d.mass(2, BitTuple(0b10)).unwrap(), 0.0);
    }

    #[test]
    fn masses_sum_to_one() {
        let fams = [
            Dist::biased(0.37).unwrap(),
            Dist::biased_exact(1, 3).unwrap(),
            Dist::Shapley,
            Dist::pullback(Dist::Shapley).unwrap(),
            Dist::pullback(Dist::biased(0.2).unwrap()).unwrap(),
            Dist::product(vec![0.1, 0.9, 0.5, 0.25, 0.6, 0.7]).unwrap(),
        ];
        for d in &fams {
            for n in [2usize, 6, 14] {
                if d.check_dim(n).is_err() {
                    continue;
                }
                let total: f64 = d.dense_masses(n).unwrap().iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "{d:?} at n={n}: {total}");
            }
        }
        // exact path sums to exactly one
        let layers = Dist::Shapley.layer_masses_exact(14).unwrap().unwrap();
        let total: Rat = layers
            .iter()
            .enumerate()
            .map(|(k, m)| Rat::from_integer(binom(14, k)) * m)
            .sum();
        assert_eq!(total, Rat::one());
    }

    #[test]
    fn consistency_probability_examples() {
        assert_eq!(consistency_probability(2, 1).unwrap(), Rat::new(1, 3));
        assert_eq!(consistency_probability(5, 0).unwrap(), Rat::one());
        assert_eq!(consistency_probability(3, 1).unwrap(), Rat::new(1, 5));
    }

    #[test]
    fn pullback_closed_examples() {
        // Shapley, n=2, z=(1,1,0,0): S_2(1)·C(2,1)/C(4,2) = (1/6)·(2/6) = 1/18
        let m = pullback_mass_closed_exact(&Dist::Shapley, 4, BitTuple(0b0011))
            .unwrap()
            .unwrap();
        assert_eq!(m, Rat::new(1, 18));
        // odd weight → 0
        let m = pullback_mass_closed(&Dist::Shapley, 4, BitTuple(0b0001)).unwrap();
        assert_eq!(m, 0.0);
        // biased(1/2), n=2, z=(1,0,1,0) → (1/4)·(1/3)
        let m = pullback_mass_closed_exact(&Dist::biased_exact(1, 2).unwrap(), 4, BitTuple(0b0101))
            .unwrap()
            .unwrap();
        assert_eq!(m, Rat::new(1, 12));
    }

    #[test]
    fn pullback_closed_matches_enumeration_exactly() {
        for inner in [Dist::biased_exact(1, 3).unwrap(), Dist::Shapley] {
            for n in 1..=3usize {
                let dense = pullback_dense_enumerated_exact(&inner, 2 * n).unwrap().unwrap();
                for z in 0..1u32 << (2 * n) {
                    let closed = pullback_mass_closed_exact(&inner, 2 * n, BitTuple(z))
                        .unwrap()
                        .unwrap();
                    assert_eq!(closed, dense[z as usize], "n={n} z={z:b}");
                }
            }
        }
    }

    #[test]
    fn shapley_pullback_identity() {
        // Ω↓_{2n}(z) = ((2n+1)/(n+1)) · S_{2n}(z) on even layers
        for n in 1..=5usize {
            let pb = Dist::pullback(Dist::Shapley).unwrap();
            let factor = Rat::new(2 * n as i128 + 1, n as i128 + 1);
            for k in 0..=n {
                let z = BitTuple((1u32 << (2 * k)) - 1);
                let lhs = pb.mass_exact(2 * n, z).unwrap().unwrap();
                let rhs = factor * Dist::Shapley.mass_exact(2 * n, z).unwrap().unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn pullback_odd_dimension_is_error() {
        let pb = Dist::pullback(Dist::Shapley).unwrap();
        assert_eq!(pb.mass(3, BitTuple(0)), Err(Error::OddDimension(3)));
    }

    #[test]
    fn all_zeros_pullback_equals_inner_zero_mass() {
        let inner = Dist::biased(0.3).unwrap();
        let m = pullback_mass_enumerated(&inner, 6, BitTuple(0)).unwrap();
        let expect = inner.mass(3, BitTuple(0)).unwrap();
        assert!((m - expect).abs() < 1e-12);
    }

    #[test]
    fn check_reasonable_biased() {
        // λ = min(p, 1-p), band [0,1]: smoothness and consistency hold
        for p in [0.2f64, 0.5, 0.7] {
            let params = ReasonableParams {
                eps: 0.2,
                alpha: 0.0,
                beta: 1.0,
                lambda: p.min(1.0 - p),
                n_min: 8,
            };
            let rep = check_reasonable(&Dist::biased(p).unwrap(), &params, 12).unwrap();
            assert!(rep.smoothness_ok, "p={p}: {rep:?}");
            assert_eq!(rep.consistency_ok, Some(true), "p={p}");
            assert!(rep.band_ok);
        }
    }

    #[test]
    fn check_reasonable_shapley() {
        let params =
            ReasonableParams { eps: 0.05, alpha: 0.1, beta: 0.9, lambda: 0.1, n_min: 50 };
        let rep = check_reasonable(&Dist::Shapley, &params, 50).unwrap();
        assert!((rep.max_layer_mass - 1.0 / 51.0).abs() < 1e-12);
        assert!(rep.flatness_ok);
        // measured pull-back constant is (n+1)/(2n+1)
        let c = rep.pullback_c.unwrap();
        assert!((c - 51.0 / 101.0).abs() < 1e-9);
    }

    #[test]
    fn biased_pullback_constant_positive_and_monotone_reported() {
        // the min ratio sits at the empty layer, where it equals 2^{-n} for
        // the uniform family: positive on the tested range, decreasing in n
        let mut prev = f64::INFINITY;
        for n in 2..=6usize {
            let params =
                ReasonableParams { eps: 0.5, alpha: 0.0, beta: 1.0, lambda: 0.3, n_min: n };
            let rep = check_reasonable(&Dist::biased(0.5).unwrap(), &params, n).unwrap();
            let c = rep.pullback_c.unwrap();
            assert!(c > 0.0, "n={n}: C={c}");
            assert!((c - 0.5f64.powi(n as i32)).abs() < 1e-12, "n={n}: C={c}");
            assert!(c <= prev + 1e-12, "reported C should not grow: n={n}");
            prev = c;
        }
    }

    #[test]
    fn expectation_examples() {
        for m in 1..=3usize {
            let f = boolfn::maj(m).unwrap();
            let e = expectation(&f, &Dist::biased(0.5).unwrap()).unwrap();
            assert!((e - 0.5).abs() < 1e-12);
        }
        let one = boolfn::constant(4, true).unwrap();
        assert_eq!(expectation(&one, &Dist::Shapley).unwrap(), 1.0);
        // E_{1/2}[tribes_{2,2}] = 1 - (3/4)^2 = 7/16
        let t = boolfn::tribes(2, 2).unwrap();
        let e = expectation_exact(&t, &Dist::biased_exact(1, 2).unwrap()).unwrap().unwrap();
        assert_eq!(e, Rat::new(7, 16));
    }

    #[test]
    fn restriction_and_set_extension_checks() {
        let params = ReasonableParams { eps: 0.1, alpha: 0.0, beta: 1.0, lambda: 0.3, n_min: 6 };
        let (ok, rmin, rmax) =
            restriction_ratio_check(&Dist::biased(0.4).unwrap(), &params, 8).unwrap();
        assert!(ok, "ratios ({rmin}, {rmax})");
        assert!(set_extension_check(&Dist::biased(0.4).unwrap(), &params, 8, 20, 7).unwrap());

        let sh = ReasonableParams { eps: 0.2, alpha: 0.2, beta: 0.8, lambda: 0.2, n_min: 10 };
        let (ok, _, _) = restriction_ratio_check(&Dist::Shapley, &sh, 12).unwrap();
        assert!(ok);
        assert!(set_extension_check(&Dist::Shapley, &sh, 12, 20, 11).unwrap());
    }

    #[test]
    fn suggest_params_finds_biased_witness() {
        let p = suggest_params(&Dist::biased(0.5).unwrap(), 0.3, 12).unwrap();
        assert!(p.is_some());
    }

    #[test]
    fn dist_json_round_trip() {
        let js = r#"{"family":"pullback","inner":{"family":"shapley"}}"#;
        let parsed: DistJson = serde_json::from_str(js).unwrap();
        let d = Dist::from_json(&parsed).unwrap();
        assert!(matches!(d, Dist::Pullback(_)));
        let back = serde_json::to_string(&d.to_json().unwrap()).unwrap();
        assert_eq!(back, js);
    }
}
