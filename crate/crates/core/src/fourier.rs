//! Fourier analysis in the biased character basis: transform, Parseval,
//! spectral influence, the noise operator, noise sensitivity, and low-degree
//! tails.
//!
//! The character for coordinate `i` under bias `p` is
//! `χ_i(x) = (x_i - p)/√(p(1-p))`; the character for a set is the product
//! over its members. Coefficients are stored densely, indexed by subset
//! mask (bit `i-1` set means `i ∈ S`).

use crate::boolfn::BooleanFunction;
use crate::{Error, Result};

/// Fourier coefficients of a real-valued table under a product bias.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n: usize,
    bias: Vec<f64>,
    coeffs: Vec<f64>,
}

fn check_bias(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("bias p={p} outside (0,1)")));
    }
    Ok(())
}

impl Spectrum {
    /// Transform of a Boolean function under uniform bias `p`.
    pub fn transform(f: &BooleanFunction, p: f64) -> Result<Spectrum> {
        let table: Vec<f64> =
            f.domain().map(|x| if f.eval(x) { 1.0 } else { 0.0 }).collect();
        Self::transform_table(&table, p)
    }

    /// Transform of a real table under uniform bias `p`.
    pub fn transform_table(table: &[f64], p: f64) -> Result<Spectrum> {
        check_bias(p)?;
        let n = table_arity(table.len())?;
        Self::transform_product(table, &vec![p; n])
    }

    /// Transform under a general product bias, one butterfly stage per
    /// coordinate: `(f0, f1) ↦ ((1-p)·f0 + p·f1, √(p(1-p))·(f1 - f0))`.
    pub fn transform_product(table: &[f64], bias: &[f64]) -> Result<Spectrum> {
        let n = table_arity(table.len())?;
        if bias.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: bias.len() });
        }
        for &p in bias {
            check_bias(p)?;
        }
        let mut coeffs = table.to_vec();
        for (i, &p) in bias.iter().enumerate() {
            let s = (p * (1.0 - p)).sqrt();
            let stride = 1usize << i;
            let mut j = 0;
            while j < coeffs.len() {
                if j & stride == 0 {
                    let a0 = coeffs[j];
                    let a1 = coeffs[j | stride];
                    coeffs[j] = (1.0 - p) * a0 + p * a1;
                    coeffs[j | stride] = s * (a1 - a0);
                }
                j += 1;
            }
        }
        Ok(Spectrum { n, bias: bias.to_vec(), coeffs })
    }

    /// Wraps an explicit coefficient vector under uniform bias `p`, e.g. to
    /// evaluate a character-basis polynomial on the cube via [`inverse`](Self::inverse).
    pub fn from_coeffs(coeffs: Vec<f64>, p: f64) -> Result<Spectrum> {
        check_bias(p)?;
        let n = table_arity(coeffs.len())?;
        Ok(Spectrum { n, bias: vec![p; n], coeffs })
    }

    /// Inverse transform back to the value table.
    pub fn inverse(&self) -> Vec<f64> {
        let mut table = self.coeffs.clone();
        for (i, &p) in self.bias.iter().enumerate().rev() {
            let s = (p * (1.0 - p)).sqrt();
            let stride = 1usize << i;
            let mut j = 0;
            while j < table.len() {
                if j & stride == 0 {
                    let c0 = table[j];
                    let c1 = table[j | stride];
                    table[j] = c0 + c1 * (0.0 - p) / s;
                    table[j | stride] = c0 + c1 * (1.0 - p) / s;
                }
                j += 1;
            }
        }
        table
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// Coefficient of the subset with the given mask.
    pub fn coeff(&self, mask: u32) -> f64 {
        self.coeffs[mask as usize]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Σ_S f̂(S)², the squared 2-norm.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Spectral influence `(1/(p_i(1-p_i))) Σ_{S∋i} f̂(S)²`.
    pub fn influence(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.n {
            return Err(Error::CoordOutOfRange { coord: i, arity: self.n });
        }
        let bit = 1usize << (i - 1);
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| m & bit != 0)
            .map(|(_, c)| c * c)
            .sum();
        let p = self.bias[i - 1];
        Ok(sum / (p * (1.0 - p)))
    }

    /// Σ_i influence(i); for a uniform bias this is
    /// `(1/(p(1-p))) Σ_S |S|·f̂(S)²`.
    pub fn total_influence(&self) -> f64 {
        let mut per_coord = vec![0.0; self.n];
        for (m, c) in self.coeffs.iter().enumerate() {
            let sq = c * c;
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                per_coord[i] += sq;
                rest &= rest - 1;
            }
        }
        per_coord
            .iter()
            .zip(&self.bias)
            .map(|(s, &p)| s / (p * (1.0 - p)))
            .sum()
    }

    /// Coefficient-wise attenuation by `(1-δ)^{|S|}`.
    pub fn noise_operator(&self, delta: f64) -> Result<Spectrum> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta={delta} outside [0,1]")));
        }
        let rho = 1.0 - delta;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * rho.powi(m.count_ones() as i32))
            .collect();
        Ok(Spectrum { n: self.n, bias: self.bias.clone(), coeffs })
    }

    /// Σ_{|S|>d} f̂(S)², the spectral weight above degree `d`.
    pub fn tail_weight(&self, d: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| m.count_ones() as usize > d)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// CSV export with columns `mask,subset,coefficient`.
    pub fn to_csv(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::from("mask,subset,coefficient\n");
        for (m, c) in self.coeffs.iter().enumerate() {
            let subset: Vec<String> = (1..=self.n)
                .filter(|i| m >> (i - 1) & 1 == 1)
                .map(|i| i.to_string())
                .collect();
            out.push_str(&format!("{},{{{}}},{}\n", m, subset.join(" "), fmt(*c)));
        }
        out
    }
}

fn table_arity(len: usize) -> Result<usize> {
    if !len.is_power_of_two() || len < 2 {
        return Err(Error::InvalidParameter(format!("table length {len} is not a power of two ≥ 2")));
    }
    let n = len.trailing_zeros() as usize;
    if n > crate::boolfn::MAX_ARITY {
        return Err(Error::SizeLimit(format!("arity {n} exceeds {}", crate::boolfn::MAX_ARITY)));
    }
    Ok(n)
}

/// `|Σ_S f̂(S)² - E_p[f²]|`; zero up to rounding by Parseval.
pub fn parseval_gap(f: &BooleanFunction, p: f64) -> Result<f64> {
    let spec = Spectrum::transform(f, p)?;
    // f is Boolean, so f² = f and E_p[f²] = E_p[f]
    let e = crate::dist::expectation(f, &crate::dist::Dist::biased(p)?)?;
    Ok((spec.norm_sq() - e).abs())
}

/// `⟨f, g⟩ = E_p[f·g]` computed spectrally.
pub fn inner_product(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::ArityMismatch { expected: a.n, got: b.n });
    }
    Ok(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum())
}

/// Evaluation mode for [`noise_sensitivity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NsMode {
    /// `2(E_p[f] - Σ_S (1-δ)^{|S|} f̂(S)²)`.
    Spectral,
    /// Exhaustive double sum over point pairs; arity ≤ 12.
    Direct,
}

/// Probability that `f` differs on a `p`-biased point and its `δ`-resampled
/// perturbation.
pub fn noise_sensitivity(f: &BooleanFunction, p: f64, delta: f64, mode: NsMode) -> Result<f64> {
    check_bias(p)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("delta={delta} outside [0,1]")));
    }
    match mode {
        NsMode::Spectral => {
            let spec = Spectrum::transform(f, p)?;
            let rho = 1.0 - delta;
            let attenuated: f64 = spec
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| rho.powi(m.count_ones() as i32) * c * c)
                .sum();
            let e = spec.coeff(0); // E_p[f] is the empty coefficient
            Ok(2.0 * (e - attenuated))
        }
        NsMode::Direct => {
            let n = f.arity();
            if n > 12 {
                return Err(Error::SizeLimit(format!(
                    "direct noise sensitivity capped at arity 12, got {n}"
                )));
            }
            // joint per-coordinate weights of (x_i, y_i)
            let p11 = p * ((1.0 - delta) + delta * p);
            let p00 = (1.0 - p) * ((1.0 - delta) + delta * (1.0 - p));
            let pcross = p * delta * (1.0 - p);
            let mut pow11 = vec![1.0; n + 1];
            let mut pow00 = vec![1.0; n + 1];
            let mut powx = vec![1.0; n + 1];
            for k in 1..=n {
                pow11[k] = pow11[k - 1] * p11;
                pow00[k] = pow00[k - 1] * p00;
                powx[k] = powx[k - 1] * pcross;
            }
            let size = 1u32 << n;
            let mut ns = 0.0;
            for x in 0..size {
                let fx = f.eval_u32(x);
                for y in 0..size {
                    if fx != f.eval_u32(y) {
                        let both = (x & y).count_ones() as usize;
                        let neither = n - (x | y).count_ones() as usize;
                        let differ = (x ^ y).count_ones() as usize;
                        ns += pow11[both] * pow00[neither] * powx[differ];
                    }
                }
            }
            Ok(ns)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{self, BitTuple};
    use rand::{Rng, SeedableRng};

    /// Direct inner-product oracle: f̂(S) = E_p[f·χ_S] by naive summation.
    fn naive_coeff(f: &BooleanFunction, p: f64, mask: u32) -> f64 {
        let n = f.arity();
        let s = (p * (1.0 - p)).sqrt();
        let mut total = 0.0;
        for x in f.domain() {
            if !f.eval(x) {
                continue;
            }
            let mut chi = 1.0;
            for i in 1..=n {
                if mask >> (i - 1) & 1 == 1 {
                    chi *= (if x.bit(i) { 1.0 } else { 0.0 } - p) / s;
                }
            }
            let w = p.powi(x.weight() as i32) * (1.0 - p).powi((n as u32 - x.weight()) as i32);
            total += chi * w;
        }
        total
    }

    #[test]
    fn dictator_spectrum() {
        let f = boolfn::proj(1, 1).unwrap();
        for p in [0.2, 0.5, 0.77] {
            let spec = Spectrum::transform(&f, p).unwrap();
            assert!((spec.coeff(0) - p).abs() < 1e-12);
            assert!((spec.coeff(1) - (p * (1.0 - p)).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_spectrum() {
        let f = boolfn::constant(3, true).unwrap();
        let spec = Spectrum::transform(&f, 0.3).unwrap();
        assert!((spec.coeff(0) - 1.0).abs() < 1e-12);
        for m in 1..8u32 {
            assert!(spec.coeff(m).abs() < 1e-12);
        }
    }

    #[test]
    fn xor2_spectrum_at_half() {
        let f = boolfn::xor(2).unwrap();
        let spec = Spectrum::transform(&f, 0.5).unwrap();
        assert!((spec.coeff(0b00) - 0.5).abs() < 1e-12);
        assert!(spec.coeff(0b01).abs() < 1e-12);
        assert!(spec.coeff(0b10).abs() < 1e-12);
        assert!((spec.coeff(0b11) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn transform_matches_naive_inner_products() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in [2usize, 4, 6] {
            let f = BooleanFunction::from_fn(n, |_| rng.gen()).unwrap();
            for p in [0.3, 0.5, 0.8] {
                let spec = Spectrum::transform(&f, p).unwrap();
                for mask in 0..1u32 << n {
                    let naive = naive_coeff(&f, p, mask);
                    assert!(
                        (spec.coeff(mask) - naive).abs() < 1e-10,
                        "n={n} p={p} mask={mask:b}"
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let table: Vec<f64> = (0..256).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let spec = Spectrum::transform_table(&table, 0.37).unwrap();
        let back = spec.inverse();
        for (a, b) in table.iter().zip(&back) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn orthonormality_via_gram() {
        // Gram matrix of characters under μ_p is the identity: transform the
        // character tables themselves and check pairwise inner products.
        let n = 5usize;
        let p = 0.43f64;
        let s = (p * (1.0 - p)).sqrt();
        let mut tables = Vec::new();
        for mask in 0..1u32 << n {
            let table: Vec<f64> = (0..1u32 << n)
                .map(|x| {
                    let mut chi = 1.0;
                    for i in 0..n {
                        if mask >> i & 1 == 1 {
                            chi *= ((x >> i & 1) as f64 - p) / s;
                        }
                    }
                    chi
                })
                .collect();
            tables.push(Spectrum::transform_table(&table, p).unwrap());
        }
        for a in 0..tables.len() {
            for b in a..tables.len() {
                let ip = inner_product(&tables[a], &tables[b]).unwrap();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-9, "({a},{b})");
            }
        }
    }

    #[test]
    fn parseval_examples() {
        assert!(parseval_gap(&boolfn::maj(1).unwrap(), 0.3).unwrap() <= 1e-9);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let f = BooleanFunction::from_fn(10, |_| rng.gen()).unwrap();
        assert!(parseval_gap(&f, 0.7).unwrap() <= 1e-9);
        // dictator: p² + p(1-p) = p = E_p[f²]
        let d = boolfn::proj(1, 1).unwrap();
        assert!(parseval_gap(&d, 0.42).unwrap() <= 1e-12);
    }

    #[test]
    fn spectral_influence_examples() {
        let d = boolfn::proj(5, 3).unwrap();
        for p in [0.2, 0.5, 0.9] {
            let spec = Spectrum::transform(&d, p).unwrap();
            assert!((spec.influence(3).unwrap() - 1.0).abs() < 1e-9);
            assert!((spec.total_influence() - 1.0).abs() < 1e-9);
        }
        let x3 = boolfn::xor(3).unwrap();
        let spec = Spectrum::transform(&x3, 0.5).unwrap();
        for i in 1..=3 {
            assert!((spec.influence(i).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!((spec.total_influence() - 3.0).abs() < 1e-9);
        let m3 = boolfn::maj(1).unwrap();
        let spec = Spectrum::transform(&m3, 0.5).unwrap();
        for i in 1..=3 {
            assert!((spec.influence(i).unwrap() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn noise_operator_limits() {
        let f = boolfn::maj(1).unwrap();
        let spec = Spectrum::transform(&f, 0.4).unwrap();
        let id = spec.noise_operator(0.0).unwrap();
        for m in 0..8u32 {
            assert_eq!(id.coeff(m), spec.coeff(m));
        }
        let full = spec.noise_operator(1.0).unwrap();
        assert_eq!(full.coeff(0), spec.coeff(0));
        for m in 1..8u32 {
            assert_eq!(full.coeff(m), 0.0);
        }
        // dictator: singleton coefficient scaled by (1-δ)
        let d = Spectrum::transform(&boolfn::proj(1, 1).unwrap(), 0.3).unwrap();
        let noised = d.noise_operator(0.25).unwrap();
        assert!((noised.coeff(1) - 0.75 * d.coeff(1)).abs() < 1e-12);
    }

    #[test]
    fn noise_sensitivity_dictator_closed_form() {
        let f = boolfn::proj(2, 1).unwrap();
        for (p, delta) in [(0.5f64, 0.2f64), (0.3, 0.7), (0.8, 1.0)] {
            // NS = 2δp(1-p)
            let expect = 2.0 * delta * p * (1.0 - p);
            for mode in [NsMode::Spectral, NsMode::Direct] {
                let ns = noise_sensitivity(&f, p, delta, mode).unwrap();
                assert!((ns - expect).abs() < 1e-12, "{mode:?} p={p} δ={delta}");
            }
        }
    }

    #[test]
    fn noise_sensitivity_zero_delta() {
        let f = boolfn::tribes(2, 2).unwrap();
        assert_eq!(noise_sensitivity(&f, 0.4, 0.0, NsMode::Spectral).unwrap().abs() < 1e-12, true);
        assert_eq!(noise_sensitivity(&f, 0.4, 0.0, NsMode::Direct).unwrap(), 0.0);
    }

    #[test]
    fn noise_sensitivity_modes_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let fns = vec![
            boolfn::tribes(2, 2).unwrap(),
            boolfn::maj(2).unwrap(),
            BooleanFunction::from_fn(6, |_| rng.gen()).unwrap(),
        ];
        for f in &fns {
            for (p, delta) in [(0.5, 0.5), (0.25, 0.1), (0.7, 0.9)] {
                let a = noise_sensitivity(f, p, delta, NsMode::Spectral).unwrap();
                let b = noise_sensitivity(f, p, delta, NsMode::Direct).unwrap();
                assert!((a - b).abs() < 1e-9, "arity {} p={p} δ={delta}: {a} vs {b}", f.arity());
            }
        }
    }

    #[test]
    fn noise_identity_inner_product() {
        // ⟨f, T_{1-δ}f⟩ = E_p[f] - NS/2
        let f = boolfn::maj(2).unwrap();
        let p = 0.35;
        let delta = 0.4;
        let spec = Spectrum::transform(&f, p).unwrap();
        let noised = spec.noise_operator(delta).unwrap();
        let ip = inner_product(&spec, &noised).unwrap();
        let ns = noise_sensitivity(&f, p, delta, NsMode::Direct).unwrap();
        assert!((ip - (spec.coeff(0) - ns / 2.0)).abs() < 1e-9);
    }

    #[test]
    fn tail_weights() {
        let f = boolfn::xor(4).unwrap();
        let spec = Spectrum::transform(&f, 0.5).unwrap();
        assert!((spec.tail_weight(3) - 0.25).abs() < 1e-12);
        assert_eq!(spec.tail_weight(4), 0.0);
        // monotone non-increasing in d
        let g = boolfn::tribes(2, 3).unwrap();
        let sg = Spectrum::transform(&g, 0.3).unwrap();
        let mut prev = f64::INFINITY;
        for d in 0..=6 {
            let t = sg.tail_weight(d);
            assert!(t <= prev + 1e-15);
            prev = t;
        }
    }

    #[test]
    fn tail_noise_algebraic_identity() {
        // Σ_S (1-(1-δ)^{|S|}) f̂² = E_p[f] - ⟨f, Tf⟩
        let f = boolfn::maj(1).unwrap();
        let p = 0.6;
        let delta = 0.3f64;
        let spec = Spectrum::transform(&f, p).unwrap();
        let lhs: f64 = spec
            .coeffs()
            .iter()
            .enumerate()
            .map(|(m, c)| (1.0 - (1.0 - delta).powi(m.count_ones() as i32)) * c * c)
            .sum();
        let ip = inner_product(&spec, &spec.noise_operator(delta).unwrap()).unwrap();
        assert!((lhs - (spec.coeff(0) - ip)).abs() < 1e-9);
    }

    #[test]
    fn product_bias_spectrum() {
        // per-coordinate biases: dictator on coordinate 2
        let f = boolfn::proj(2, 2).unwrap();
        let table: Vec<f64> = f.domain().map(|x| if f.eval(x) { 1.0 } else { 0.0 }).collect();
        let bias = vec![0.3, 0.7];
        let spec = Spectrum::transform_product(&table, &bias).unwrap();
        assert!((spec.coeff(0b00) - 0.7).abs() < 1e-12);
        assert!((spec.coeff(0b10) - (0.7f64 * 0.3).sqrt()).abs() < 1e-12);
        assert!(spec.coeff(0b01).abs() < 1e-12);
        let back = spec.inverse();
        for (i, x) in f.domain().enumerate() {
            assert!((back[i] - if f.eval(x) { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_bias() {
        assert!(Spectrum::transform(&boolfn::maj(1).unwrap(), 0.0).is_err());
        assert!(Spectrum::transform(&boolfn::maj(1).unwrap(), 1.0).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let f = boolfn::proj(2, 1).unwrap();
        let spec = Spectrum::transform(&f, 0.5).unwrap();
        let csv = spec.to_csv(|v| format!("{v:.3}"));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "mask,subset,coefficient");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,{},"));
        assert!(lines[2].starts_with("1,{1},"));
    }
}
