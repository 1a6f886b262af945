//! Polynomial threshold machinery: multilinear interpolation, exact
//! sign-feasibility via rational simplex, sign-representations over the
//! character basis, regularity profiles, restrictions, determinedness, and
//! an exhaustive junta search.

use crate::boolfn::{BitTuple, BooleanFunction};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

mod simplex;

/// A multilinear polynomial over `{0,1}`-valued variables with exact
/// rational coefficients, stored sparsely by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly {
    n: usize,
    coeffs: BTreeMap<u32, BigRational>,
}

impl MultilinearPoly {
    pub fn new(n: usize, coeffs: BTreeMap<u32, BigRational>) -> Result<Self> {
        if n > 16 {
            return Err(Error::SizeLimit(format!("polynomial arity capped at 16, got {n}")));
        }
        for &mask in coeffs.keys() {
            if mask >= 1 << n {
                return Err(Error::CoordOutOfRange { coord: mask as usize, arity: n });
            }
        }
        Ok(MultilinearPoly { n, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, mask: u32) -> BigRational {
        self.coeffs.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest monomial degree with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Value at a Boolean point: Σ over monomials contained in the support.
    pub fn eval_point(&self, x: BitTuple) -> BigRational {
        let mut v = BigRational::zero();
        for (&mask, c) in &self.coeffs {
            if mask & x.0 == mask {
                v += c;
            }
        }
        v
    }

    /// `sgn ∘ Q` as a Boolean function (`1` iff the value is positive).
    pub fn sign_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(self.n, |x| self.eval_point(x).is_positive())
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            n: self.n,
            k: self.degree(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&mask, c)| CoeffJson {
                    subset: (1..=self.n).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for c in &json.coeffs {
            let mask = crate::boolfn::coord_mask(&c.subset, json.n)?;
            let num: BigInt = c
                .num
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad numerator {:?}", c.num)))?;
            let den: BigInt = c
                .den
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad denominator {:?}", c.den)))?;
            if den.is_zero() {
                return Err(Error::InvalidParameter("zero denominator".into()));
            }
            coeffs.insert(mask, BigRational::new(num, den));
        }
        MultilinearPoly::new(json.n, coeffs)
    }
}

/// Serialized rational polynomial. Numerators and denominators are decimal
/// strings so arbitrary-precision witnesses survive the round trip.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffJson {
    pub subset: Vec<usize>,
    pub num: String,
    pub den: String,
}

/// Multilinear interpolation: the unique multilinear `Q` with
/// `Q = f` on `{0,1}^n`, via `Q_S = Σ_{T⊆S} (-1)^{|S\T|} f(1_T)`.
pub fn moebius_polynomial(f: &BooleanFunction) -> Result<MultilinearPoly> {
    let n = f.arity();
    if n > 16 {
        return Err(Error::SizeLimit(format!("interpolation capped at arity 16, got {n}")));
    }
    let mut vals: Vec<i64> =
        f.domain().map(|x| if f.eval(x) { 1 } else { 0 }).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..vals.len() {
            if m & bit != 0 {
                vals[m] -= vals[m ^ bit];
            }
        }
    }
    let coeffs = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(m, &v)| (m as u32, BigRational::from_integer(BigInt::from(v))))
        .collect();
    MultilinearPoly::new(n, coeffs)
}

/// Result of the degree-membership test.
#[derive(Clone, Debug)]
pub enum PtfDegree {
    /// A verified witness: `sgn(Q(x)) = f(x)` on every point, with
    /// `Q(x) ≥ 1` on ones and `Q(x) ≤ 0` on zeros.
    Feasible(MultilinearPoly),
    Infeasible,
}

/// Decides whether `f` is the sign of a degree-`k` multilinear polynomial,
/// by exact rational linear feasibility. Strictness of `Q > 0` is absorbed
/// by scale invariance: the system used is `Q(x) ≥ 1` on ones and
/// `Q(x) ≤ 0` on zeros. Caps: `n ≤ 10`, `k ≤ 3`.
pub fn ptf_degree_at_most(f: &BooleanFunction, k: usize) -> Result<PtfDegree> {
    let n = f.arity();
    if n > 10 || k > 3 {
        return Err(Error::SizeLimit(format!(
            "degree test capped at n ≤ 10, k ≤ 3; got n={n}, k={k}"
        )));
    }
    let subsets: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() as usize <= k).collect();
    let witness = simplex::sign_feasibility(f, &subsets)?;
    match witness {
        Some(coeffs) => {
            let q = MultilinearPoly::new(
                n,
                subsets.iter().cloned().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect(),
            )?;
            // post-hoc verification: a feasible answer with a bad witness is
            // a hard failure
            for x in f.domain() {
                let v = q.eval_point(x);
                let ok = if f.eval(x) { v >= BigRational::one() } else { !v.is_positive() };
                if !ok {
                    return Err(Error::Unsupported(format!(
                        "internal: witness fails at point {}",
                        x.0
                    )));
                }
            }
            Ok(PtfDegree::Feasible(q))
        }
        None => Ok(PtfDegree::Infeasible),
    }
}

/// A polynomial over the character basis with `f64` coefficients, stored
/// densely by subset mask.
#[derive(Clone, Debug)]
pub struct SignPoly {
    n: usize,
    coeffs: Vec<f64>,
}

/// Serialized character-basis polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignPolyJson {
    pub n: usize,
    pub k: usize,
    pub basis: String,
    pub coeffs: Vec<ChiCoeffJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChiCoeffJson {
    pub subset: Vec<usize>,
    pub value: f64,
}

impl SignPoly {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n > 16 {
            return Err(Error::SizeLimit(format!("polynomial arity capped at 16, got {n}")));
        }
        if coeffs.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "need {} coefficients for arity {n}",
                1usize << n
            )));
        }
        Ok(SignPoly { n, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, mask: u32) -> f64 {
        self.coeffs[mask as usize]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > 1e-14)
            .map(|(m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Σ_{|S|>0} Q_S², the normalization mass.
    pub fn nonconstant_mass(&self) -> f64 {
        self.coeffs.iter().skip(1).map(|c| c * c).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.nonconstant_mass() - 1.0).abs() <= 1e-12
    }

    /// Scales all coefficients so that Σ_{|S|>0} Q_S² = 1. Errors when every
    /// non-constant coefficient vanishes (the represented function is
    /// constant and has no normalized form).
    pub fn normalize(&self) -> Result<SignPoly> {
        let mass = self.nonconstant_mass();
        if mass <= 0.0 {
            return Err(Error::InvalidParameter(
                "all non-constant coefficients vanish; cannot normalize".into(),
            ));
        }
        let scale = mass.sqrt().recip();
        Ok(SignPoly { n: self.n, coeffs: self.coeffs.iter().map(|c| c * scale).collect() })
    }

    /// Evaluates at a vector of per-coordinate character values.
    pub fn eval(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.n);
        // products over subsets by peeling the lowest bit
        let mut prod = vec![1.0; self.coeffs.len()];
        for m in 1..self.coeffs.len() {
            let low = m.trailing_zeros() as usize;
            prod[m] = prod[m & (m - 1)] * values[low];
        }
        self.coeffs.iter().zip(&prod).map(|(c, p)| c * p).sum()
    }

    /// `w_i²(Q) = Σ_{S∋i} Q_S²` for each coordinate, 1-based index order.
    pub fn coordinate_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n];
        for (m, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let sq = c * c;
            let mut rest = m;
            while rest != 0 {
                w[rest.trailing_zeros() as usize] += sq;
                rest &= rest - 1;
            }
        }
        w
    }

    /// Reindexes coordinates by the given permutation: coordinate `perm[j]`
    /// of `self` becomes coordinate `j+1` of the result.
    pub fn permute(&self, perm: &[usize]) -> Result<SignPoly> {
        if perm.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: perm.len() });
        }
        let mut coeffs = vec![0.0; self.coeffs.len()];
        for (m, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let mut out = 0usize;
            for (j, &src) in perm.iter().enumerate() {
                if m >> (src - 1) & 1 == 1 {
                    out |= 1 << j;
                }
            }
            coeffs[out] = *c;
        }
        SignPoly::new(self.n, coeffs)
    }

    pub fn to_json(&self) -> SignPolyJson {
        SignPolyJson {
            n: self.n,
            k: self.degree(),
            basis: "chi".into(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(m, &value)| ChiCoeffJson {
                    subset: (1..=self.n).filter(|i| m >> (i - 1) & 1 == 1).collect(),
                    value,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &SignPolyJson) -> Result<Self> {
        if json.basis != "chi" {
            return Err(Error::InvalidParameter(format!("unknown basis {:?}", json.basis)));
        }
        let mut coeffs = vec![0.0; 1usize << json.n];
        for c in &json.coeffs {
            let mask = crate::boolfn::coord_mask(&c.subset, json.n)?;
            coeffs[mask as usize] = c.value;
        }
        SignPoly::new(json.n, coeffs)
    }
}

/// Rewrites a `{0,1}`-variable polynomial over the bias-`p` character basis
/// via `x_i = p + √(p(1-p))·χ_i`, then normalizes. The substitution never
/// raises the degree. Errors when the represented function is constant.
pub fn to_sign_representation(q: &MultilinearPoly, p: f64) -> Result<SignPoly> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("bias p={p} outside (0,1)")));
    }
    let n = q.arity();
    let s = (p * (1.0 - p)).sqrt();
    let mut chi = vec![0.0; 1usize << n];
    for (&mask, c) in q.coeffs() {
        let c = rational_to_f64(c);
        if c == 0.0 {
            continue;
        }
        // expand Π_{i∈S}(p + s·χ_i) over sub-monomials
        let mut sub = mask;
        loop {
            let extra = (mask.count_ones() - sub.count_ones()) as i32;
            chi[sub as usize] += c * p.powi(extra) * s.powi(sub.count_ones() as i32);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    SignPoly::new(n, chi)?.normalize()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // exact for the small integers produced by interpolation; good to one
    // ulp for LP witnesses
    let num = r.numer();
    let den = r.denom();
    str::parse::<f64>(&num.to_string()).unwrap_or(f64::NAN)
        / str::parse::<f64>(&den.to_string()).unwrap_or(f64::NAN)
}

/// Coordinate-weight profile of a normalized polynomial.
#[derive(Clone, Debug)]
pub struct RegularityProfile {
    /// `(original coordinate, w_i²)` sorted by weight, descending.
    pub weights: Vec<(usize, f64)>,
    /// Suffix sums `σ_i² = Σ_{j≥i} w_j²`, 1-based (`sigma_sq[0]` unused).
    pub sigma_sq: Vec<f64>,
    /// Σ_i w_i⁴.
    pub sum_w4: f64,
    pub degree: usize,
}

impl RegularityProfile {
    /// `Σ w_i⁴ ≤ ε²·σ_1⁴`.
    pub fn is_regular(&self, eps: f64) -> bool {
        self.sum_w4 <= eps * eps * self.sigma_sq[1] * self.sigma_sq[1]
    }

    /// Critical index: least `i ≥ 0` with `w_j² ≤ ε²·σ_{i+1}²` for all `j > i`.
    pub fn critical_index(&self, eps: f64) -> usize {
        let n = self.weights.len();
        for i in 0..n {
            // weights are sorted, so checking j = i+1 suffices
            if self.weights[i].1 <= eps * eps * self.sigma_sq[i + 1] {
                return i;
            }
        }
        n
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.first().map(|w| w.1).unwrap_or(0.0)
    }
}

/// Computes the weight profile of a normalized polynomial; errors otherwise.
pub fn regularity_profile(q: &SignPoly) -> Result<RegularityProfile> {
    if !q.is_normalized() {
        return Err(Error::InvalidParameter(format!(
            "polynomial is not normalized: Σ Q_S² = {}",
            q.nonconstant_mass()
        )));
    }
    let w = q.coordinate_weights();
    let mut weights: Vec<(usize, f64)> = w.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
    weights.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let n = weights.len();
    let mut sigma_sq = vec![0.0; n + 2];
    for i in (1..=n).rev() {
        sigma_sq[i] = sigma_sq[i + 1] + weights[i - 1].1;
    }
    Ok(RegularityProfile {
        sum_w4: weights.iter().map(|(_, v)| v * v).sum(),
        weights,
        sigma_sq,
        degree: q.degree(),
    })
}

/// Restriction by fixing the first `m` coordinates to the supplied character
/// values: `R_S(x̄) = Σ_{T⊆[m]} Q_{S∪T}·Π_{i∈T} x_i` over the remaining
/// coordinates.
pub fn restrict_poly(q: &SignPoly, m: usize, values: &[f64]) -> Result<SignPoly> {
    let n = q.arity();
    if m > n {
        return Err(Error::CoordOutOfRange { coord: m, arity: n });
    }
    if values.len() != m {
        return Err(Error::ArityMismatch { expected: m, got: values.len() });
    }
    let low_size = 1usize << m;
    let mut prod = vec![1.0; low_size];
    for t in 1..low_size {
        let low = t.trailing_zeros() as usize;
        prod[t] = prod[t & (t - 1)] * values[low];
    }
    let mut out = vec![0.0; 1usize << (n - m)];
    for (s, o) in out.iter_mut().enumerate() {
        let high = (s as u32) << m;
        let mut acc = 0.0;
        for (t, pr) in prod.iter().enumerate() {
            acc += q.coeff(high | t as u32) * pr;
        }
        *o = acc;
    }
    SignPoly::new(n - m, out)
}

/// Outcome of the determinedness test.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DeterminedReport {
    pub determined: bool,
    pub pr_positive: f64,
}

/// Whether `min(Pr[Q > 0], Pr[Q ≤ 0]) ≤ ε` when the inputs are the
/// character values of a bias-`p` point. Exact weighted enumeration.
pub fn is_determined(q: &SignPoly, eps: f64, p: f64) -> Result<DeterminedReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("bias p={p} outside (0,1)")));
    }
    let n = q.arity();
    // the value table of Q∘χ is the inverse transform of its coefficients
    let spec = crate::fourier::Spectrum::from_coeffs(q.coeffs().to_vec(), p)?;
    let table = spec.inverse();
    let masses = crate::dist::Dist::biased(p)?.dense_masses(n)?;
    let pr_positive: f64 = table
        .iter()
        .zip(&masses)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, m)| m)
        .sum();
    Ok(DeterminedReport {
        determined: pr_positive.min(1.0 - pr_positive) <= eps,
        pr_positive,
    })
}

/// Best junta approximation found by exhaustive search.
#[derive(Clone, Debug)]
pub struct JuntaReport {
    /// Chosen coordinates, ascending.
    pub coords: Vec<usize>,
    /// The junta as a function of the chosen coordinates, in `coords` order.
    pub junta: BooleanFunction,
    /// `Pr_{μ_p}[f ≠ junta]`, minimal over the searched class.
    pub error: f64,
}

/// Exhaustive search over all coordinate subsets of the given size and all
/// majority-vote completions, minimizing disagreement under the bias-`p`
/// measure. Caps: `n ≤ 12`, `j_size ≤ 4`.
pub fn best_junta(f: &BooleanFunction, j_size: usize, p: f64) -> Result<JuntaReport> {
    let n = f.arity();
    if n > 12 || j_size > 4 {
        return Err(Error::SizeLimit(format!(
            "junta search capped at n ≤ 12, size ≤ 4; got n={n}, size={j_size}"
        )));
    }
    if j_size == 0 || j_size > n {
        return Err(Error::InvalidParameter(format!("junta size {j_size} outside 1..={n}")));
    }
    let masses = crate::dist::Dist::biased(p)?.dense_masses(n)?;
    let mut best: Option<JuntaReport> = None;
    for j_mask in 0..1u32 << n {
        if j_mask.count_ones() as usize != j_size {
            continue;
        }
        let cells = 1usize << j_size;
        let mut p1 = vec![0.0; cells];
        let mut pall = vec![0.0; cells];
        for x in 0..f.points() {
            // compress x onto the chosen coordinates
            let mut key = 0usize;
            let mut bit = 0;
            for i in 0..n {
                if j_mask >> i & 1 == 1 {
                    key |= ((x >> i & 1) as usize) << bit;
                    bit += 1;
                }
            }
            pall[key] += masses[x as usize];
            if f.eval_u32(x) {
                p1[key] += masses[x as usize];
            }
        }
        let error: f64 =
            (0..cells).map(|a| p1[a].min(pall[a] - p1[a])).sum();
        if best.as_ref().map_or(true, |b| error < b.error - 1e-15) {
            let table: Vec<bool> = (0..cells).map(|a| p1[a] > pall[a] - p1[a]).collect();
            best = Some(JuntaReport {
                coords: (1..=n).filter(|i| j_mask >> (i - 1) & 1 == 1).collect(),
                junta: BooleanFunction::from_bits(j_size, &table)?,
                error,
            });
        }
    }
    Ok(best.expect("at least one subset searched"))
}

/// Empirical frequencies from random restrictions at the critical index:
/// draw the first `K` character values from the bias-`p` input distribution,
/// restrict, and test ε-regularity (after renormalizing) and
/// ε-determinedness of the remainder.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RestrictionExperiment {
    pub critical_index: usize,
    pub regular_freq: f64,
    pub determined_freq: f64,
    pub trials: usize,
}

pub fn restriction_experiment(
    q: &SignPoly,
    eps: f64,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<RestrictionExperiment> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let profile = regularity_profile(q)?;
    let k = profile.critical_index(eps);
    // reorder so the heaviest coordinates come first
    let perm: Vec<usize> = profile.weights.iter().map(|(i, _)| *i).collect();
    let sorted = q.permute(&perm)?;
    let s = (p * (1.0 - p)).sqrt();
    let mut regular = 0usize;
    let mut determined = 0usize;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let values: Vec<f64> = (0..k)
            .map(|_| {
                let one: bool = rng.gen_bool(p);
                (if one { 1.0 } else { 0.0 } - p) / s
            })
            .collect();
        let restricted = restrict_poly(&sorted, k, &values)?;
        if let Ok(norm) = restricted.normalize() {
            if regularity_profile(&norm)?.is_regular(eps) {
                regular += 1;
            }
        }
        if restricted.arity() > 0 && is_determined(&restricted, eps, p)?.determined {
            determined += 1;
        }
    }
    Ok(RestrictionExperiment {
        critical_index: k,
        regular_freq: regular as f64 / trials as f64,
        determined_freq: determined as f64 / trials as f64,
        trials,
    })
}
