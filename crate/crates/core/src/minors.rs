//! Random and exhaustive 2-to-1 minor maps, influence-preservation
//! experiments, pull-back expectations, and the selector machinery for the
//! random 2-to-1 condition.
//!
//! Monte-Carlo runs derive one RNG stream per sample index from the master
//! seed, so estimates are reproducible and independent of worker count.

use crate::boolfn::{BitTuple, BooleanFunction, MinorMap};
use crate::dist::Dist;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Number of 2-to-1 maps `[2n] → [n]`: `(2n)!/2^n`.
pub fn two_to_one_count(n: usize) -> u64 {
    let mut c = 1u64;
    for i in 1..=2 * n {
        c *= i as u64;
    }
    c >> n
}

/// A uniformly random 2-to-1 map `[2n] → [n]`.
///
/// Draws a uniform permutation of `[2n]` and sends positions `2j-1, 2j` to
/// target `j`; every map arises from exactly `2^n` permutations.
pub fn random_two_to_one(n: usize, rng: &mut impl Rng) -> MinorMap {
    let mut perm: Vec<usize> = (0..2 * n).collect();
    perm.shuffle(rng);
    let mut image = vec![0usize; 2 * n];
    for (pos, &coord) in perm.iter().enumerate() {
        image[coord] = pos / 2 + 1;
    }
    MinorMap::new(n, image).unwrap()
}

/// Convenience wrapper seeding a dedicated RNG.
pub fn random_two_to_one_seeded(n: usize, seed: u64) -> MinorMap {
    random_two_to_one(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// All 2-to-1 maps `[2n] → [n]`, each exactly once. Capped at `n = 5`
/// (113400 maps).
pub fn enumerate_two_to_one(n: usize) -> Result<Vec<MinorMap>> {
    if n == 0 || n > 5 {
        return Err(Error::SizeLimit(format!(
            "2-to-1 enumeration capped at n = 5, got {n}"
        )));
    }
    // enumerate perfect pairings of [2n], then all target assignments
    let mut pairings = Vec::new();
    let mut current = Vec::new();
    fn rec(free: u32, current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free == 0 {
            out.push(current.clone());
            return;
        }
        let a = free.trailing_zeros() as usize;
        let rest = free & !(1 << a);
        let mut others = rest;
        while others != 0 {
            let b = others.trailing_zeros() as usize;
            others &= others - 1;
            current.push((a, b));
            rec(rest & !(1 << b), current, out);
            current.pop();
        }
    }
    rec((1u32 << (2 * n)) - 1, &mut current, &mut pairings);

    let mut targets: Vec<usize> = (1..=n).collect();
    let mut perms = Vec::new();
    permutations(&mut targets, 0, &mut perms);

    let mut maps = Vec::with_capacity(pairings.len() * perms.len());
    for pairing in &pairings {
        for perm in &perms {
            let mut image = vec![0usize; 2 * n];
            for (pair, &t) in pairing.iter().zip(perm) {
                image[pair.0] = t;
                image[pair.1] = t;
            }
            maps.push(MinorMap::new(n, image).unwrap());
        }
    }
    Ok(maps)
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Influence of coordinate `j` in the minor `f_π`, without materializing the
/// minor's table.
fn minor_influence(f: &BooleanFunction, pi: &MinorMap, j: usize, masses: &[f64]) -> f64 {
    let m = pi.target_arity();
    let bit = 1u32 << (j - 1);
    let mut inf = 0.0;
    for y in 0..1u32 << m {
        if y & bit != 0 {
            continue;
        }
        let lo = f.eval(pi.pullback_tuple(BitTuple(y)));
        let hi = f.eval(pi.pullback_tuple(BitTuple(y | bit)));
        if lo != hi {
            inf += masses[y as usize] + masses[(y | bit) as usize];
        }
    }
    inf
}

/// Evaluation mode for the preservation experiment.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum PreserveMode {
    Exact,
    Mc { samples: usize, seed: u64 },
}

/// Result of a preservation experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PreserveReport {
    pub estimate: f64,
    /// 95% normal-approximation half-width; zero in exact mode.
    pub half_width: f64,
    pub samples: usize,
}

/// Probability over a uniformly random 2-to-1 map `π` that the image of
/// coordinate `i` keeps influence at least `τ`:
/// `Pr_π[Inf_Ω[f_π, π(i)] ≥ τ]`.
pub fn preservation_probability(
    f: &BooleanFunction,
    i: usize,
    omega: &Dist,
    tau: f64,
    mode: PreserveMode,
) -> Result<PreserveReport> {
    let arity = f.arity();
    if arity % 2 != 0 {
        return Err(Error::OddDimension(arity));
    }
    let n = arity / 2;
    if i == 0 || i > arity {
        return Err(Error::CoordOutOfRange { coord: i, arity });
    }
    let masses = omega.dense_masses(n)?;
    match mode {
        PreserveMode::Exact => {
            let maps = enumerate_two_to_one(n)?;
            let hits = maps
                .par_iter()
                .filter(|pi| minor_influence(f, pi, pi.apply(i), &masses) >= tau)
                .count();
            Ok(PreserveReport {
                estimate: hits as f64 / maps.len() as f64,
                half_width: 0.0,
                samples: maps.len(),
            })
        }
        PreserveMode::Mc { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter("need at least one sample".into()));
            }
            let hits: usize = (0..samples)
                .into_par_iter()
                .filter(|&s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s as u64);
                    let pi = random_two_to_one(n, &mut rng);
                    minor_influence(f, &pi, pi.apply(i), &masses) >= tau
                })
                .count();
            let est = hits as f64 / samples as f64;
            let half = 1.96 * (est * (1.0 - est) / samples as f64).sqrt();
            Ok(PreserveReport { estimate: est, half_width: half, samples })
        }
    }
}

/// One sample of the two-step instrumentation of a random 2-to-1 draw.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TwoStepSample {
    /// Influence of the merged coordinate after the single identification.
    pub intermediate_influence: f64,
    /// Influence of the image coordinate under the full 2-to-1 map.
    pub final_influence: f64,
}

/// Instruments the two-step decomposition of a uniform 2-to-1 draw: first
/// identify coordinate `i` with a random partner, then pair the remaining
/// coordinates uniformly. Reports both influences per sample.
pub fn preservation_two_step(
    f: &BooleanFunction,
    i: usize,
    omega: &Dist,
    samples: usize,
    seed: u64,
) -> Result<Vec<TwoStepSample>> {
    let arity = f.arity();
    if arity % 2 != 0 {
        return Err(Error::OddDimension(arity));
    }
    if arity < 4 {
        return Err(Error::SizeLimit("two-step instrumentation needs arity ≥ 4".into()));
    }
    let n = arity / 2;
    if i == 0 || i > arity {
        return Err(Error::CoordOutOfRange { coord: i, arity });
    }
    let mid_masses = omega.dense_masses(arity - 1)?;
    let masses = omega.dense_masses(n)?;
    Ok((0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            // step I: identify i with a random partner j, renumbering so the
            // merged coordinate becomes arity-1 and others keep their order
            let j = loop {
                let j = rng.gen_range(1..=arity);
                if j != i {
                    break j;
                }
            };
            let mut image0 = Vec::with_capacity(arity);
            let mut next = 1usize;
            for c in 1..=arity {
                if c == i || c == j {
                    image0.push(arity - 1);
                } else {
                    image0.push(next);
                    next += 1;
                }
            }
            let pi0 = MinorMap::new(arity - 1, image0).unwrap();
            let intermediate = minor_influence(f, &pi0, arity - 1, &mid_masses);
            // step II: pair the remaining 2n-2 coordinates uniformly
            let mut rest: Vec<usize> = (1..arity).collect();
            rest.shuffle(&mut rng);
            let mut image1 = vec![0usize; arity - 1];
            for (pos, &c) in rest.iter().enumerate() {
                image1[c - 1] = pos / 2 + 1;
            }
            image1[arity - 2] = n;
            let pi1 = MinorMap::new(n, image1).unwrap();
            let pi = pi0.then(&pi1).unwrap();
            let final_influence = minor_influence(f, &pi, pi.apply(i), &masses);
            TwoStepSample { intermediate_influence: intermediate, final_influence }
        })
        .collect())
}

/// The last-coordinate derivative indicator: for `g` of arity `m`, returns
/// `h` of arity `m-1` with `h(x̄) = 1` iff `g(x̄0) ≠ g(x̄1)`.
pub fn derivative_indicator(g: &BooleanFunction) -> Result<BooleanFunction> {
    let m = g.arity();
    if m < 2 {
        return Err(Error::SizeLimit("derivative indicator needs arity ≥ 2".into()));
    }
    let top = 1u32 << (m - 1);
    BooleanFunction::from_fn(m - 1, |x| g.eval(BitTuple(x.0)) != g.eval(BitTuple(x.0 | top)))
}

/// Evaluation mode for [`pullback_expectation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullbackMode {
    /// Closed-form pull-back masses (symmetric inner family).
    Closed,
    /// Average over every 2-to-1 map; dimension ≤ 10.
    Enumerate,
}

/// `E_{z̄∼Ω↓}[h(z̄)]` for `h` of even arity `2n`.
pub fn pullback_expectation(
    h: &BooleanFunction,
    omega: &Dist,
    mode: PullbackMode,
) -> Result<f64> {
    let arity = h.arity();
    if arity % 2 != 0 {
        return Err(Error::OddDimension(arity));
    }
    let n = arity / 2;
    match mode {
        PullbackMode::Closed => {
            let pb = Dist::pullback(omega.clone())?;
            crate::dist::expectation(h, &pb)
        }
        PullbackMode::Enumerate => {
            let maps = enumerate_two_to_one(n)?;
            let masses = omega.dense_masses(n)?;
            let total: f64 = maps
                .iter()
                .map(|pi| {
                    (0..1u32 << n)
                        .filter(|&y| h.eval(pi.pullback_tuple(BitTuple(y))))
                        .map(|y| masses[y as usize])
                        .sum::<f64>()
                })
                .sum();
            Ok(total / maps.len() as f64)
        }
    }
}

/// Coordinates whose Ω-influence is at least `δ`.
pub fn sel_influential(f: &BooleanFunction, omega: &Dist, delta: f64) -> Result<Vec<usize>> {
    if delta <= 0.0 {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let mut out = Vec::new();
    for i in 1..=f.arity() {
        if crate::influence::influence(f, i, omega)? >= delta {
            out.push(i);
        }
    }
    Ok(out)
}

/// Coordinates whose biased influence exceeds `τ` on a `p`-set of measure at
/// least `τ/(2ε)`. The measure of `{p : Inf^{(p)}[f,i] ≥ τ}` is the
/// trapezoidal measure of the indicator on the supplied grid.
pub fn sel_ordered(f: &BooleanFunction, tau: f64, eps: f64, p_grid: &[f64]) -> Result<Vec<usize>> {
    if p_grid.len() < 2 {
        return Err(Error::InvalidParameter("p-grid needs at least two points".into()));
    }
    if tau <= 0.0 || eps <= 0.0 {
        return Err(Error::InvalidParameter("tau and eps must be positive".into()));
    }
    let mut out = Vec::new();
    for i in 1..=f.arity() {
        let ind: Vec<f64> = p_grid
            .iter()
            .map(|&p| if crate::influence::influence_biased(f, i, p) >= tau { 1.0 } else { 0.0 })
            .collect();
        let mut measure = 0.0;
        for w in 0..p_grid.len() - 1 {
            measure += 0.5 * (ind[w] + ind[w + 1]) * (p_grid[w + 1] - p_grid[w]);
        }
        if measure >= tau / (2.0 * eps) {
            out.push(i);
        }
    }
    Ok(out)
}

/// A selector assigning a coordinate set to every function.
#[derive(Clone, Debug)]
pub enum Selector {
    Influential { omega: Dist, delta: f64 },
    Ordered { tau: f64, eps: f64, p_grid: Vec<f64> },
}

impl Selector {
    pub fn select(&self, f: &BooleanFunction) -> Result<Vec<usize>> {
        match self {
            Selector::Influential { omega, delta } => sel_influential(f, omega, *delta),
            Selector::Ordered { tau, eps, p_grid } => sel_ordered(f, *tau, *eps, p_grid),
        }
    }
}

/// Monte-Carlo estimate of `Pr_π[π(Sel(f)) ∩ Sel(f_π) ≠ ∅]` for each `f`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntersectionRate {
    pub estimate: f64,
    pub half_width: f64,
    pub samples: usize,
}

pub fn condition_intersection_rate(
    fs: &[BooleanFunction],
    sel: &Selector,
    samples: usize,
    seed: u64,
) -> Result<Vec<IntersectionRate>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut out = Vec::with_capacity(fs.len());
    for (fi, f) in fs.iter().enumerate() {
        let arity = f.arity();
        if arity % 2 != 0 {
            return Err(Error::OddDimension(arity));
        }
        let n = arity / 2;
        let top = sel.select(f)?;
        let results: Vec<bool> = (0..samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    seed ^ (fi as u64).wrapping_mul(0x9e3779b97f4a7c15),
                );
                rng.set_stream(s as u64);
                let pi = random_two_to_one(n, &mut rng);
                let minor = f.apply_minor(&pi).unwrap();
                let bottom = sel.select(&minor).unwrap_or_default();
                top.iter().any(|&i| bottom.contains(&pi.apply(i)))
            })
            .collect();
        let hits = results.iter().filter(|&&b| b).count();
        let est = hits as f64 / samples as f64;
        out.push(IntersectionRate {
            estimate: est,
            half_width: 1.96 * (est * (1.0 - est) / samples as f64).sqrt(),
            samples,
        });
    }
    Ok(out)
}

/// Random minor of a unate function that sends increasing coordinates
/// uniformly into `[w]` and decreasing coordinates uniformly into
/// `[w+1, w+h]`. Non-essential coordinates count as increasing.
pub fn random_split_minor(
    f: &BooleanFunction,
    w: usize,
    h: usize,
    rng: &mut impl Rng,
) -> Result<BooleanFunction> {
    if w == 0 {
        return Err(Error::InvalidParameter("w must be at least 1".into()));
    }
    let cls = f.classify();
    if !cls.is_unate {
        return Err(Error::NotUnate);
    }
    let decreasing = cls.strictly_decreasing_mask();
    if h == 0 && decreasing != 0 {
        return Err(Error::InvalidParameter(
            "h = 0 requires an increasing function".into(),
        ));
    }
    let m = w + h;
    let image: Vec<usize> = (1..=f.arity())
        .map(|i| {
            if decreasing >> (i - 1) & 1 == 1 {
                w + rng.gen_range(1..=h)
            } else {
                rng.gen_range(1..=w)
            }
        })
        .collect();
    f.apply_minor(&MinorMap::new(m, image)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn;
    use std::collections::HashMap;

    #[test]
    fn map_counts() {
        assert_eq!(two_to_one_count(1), 1);
        assert_eq!(two_to_one_count(2), 6);
        assert_eq!(two_to_one_count(3), 90);
        assert_eq!(enumerate_two_to_one(1).unwrap().len(), 1);
        assert_eq!(enumerate_two_to_one(2).unwrap().len(), 6);
        assert_eq!(enumerate_two_to_one(3).unwrap().len(), 90);
        assert!(enumerate_two_to_one(6).is_err());
    }

    #[test]
    fn enumeration_yields_distinct_two_to_one_maps() {
        let maps = enumerate_two_to_one(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for pi in &maps {
            assert!(pi.is_two_to_one());
            assert!(seen.insert(pi.image().to_vec()));
        }
    }

    #[test]
    fn random_maps_are_two_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let pi = random_two_to_one(4, &mut rng);
            assert!(pi.is_two_to_one());
        }
    }

    #[test]
    fn random_map_frequencies_near_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(60_000);
        let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
        let samples = 60_000;
        for _ in 0..samples {
            let pi = random_two_to_one(2, &mut rng);
            *counts.entry(pi.image().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        for (_, c) in counts {
            let freq = c as f64 / samples as f64;
            assert!((freq - 1.0 / 6.0).abs() < 0.01);
        }
    }

    /// Chi-square uniformity over all maps at n = 2, 3 with 1e5 samples,
    /// significance 0.001 (critical value via Wilson-Hilferty).
    #[test]
    fn random_map_chi_square() {
        for n in [2usize, 3] {
            let maps = enumerate_two_to_one(n).unwrap();
            let k = maps.len();
            let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
            for (idx, pi) in maps.iter().enumerate() {
                index.insert(pi.image().to_vec(), idx);
            }
            let samples = 100_000usize;
            let mut counts = vec![0u64; k];
            let mut rng = ChaCha8Rng::seed_from_u64(1234 + n as u64);
            for _ in 0..samples {
                let pi = random_two_to_one(n, &mut rng);
                counts[index[pi.image()]] += 1;
            }
            let expected = samples as f64 / k as f64;
            let chi2: f64 =
                counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            let df = (k - 1) as f64;
            // Wilson-Hilferty upper quantile at significance 0.001
            let z = 3.0902;
            let crit = df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3);
            assert!(chi2 < crit, "n={n}: chi2={chi2} crit={crit}");
        }
    }

    #[test]
    fn preservation_dictator_and_xor() {
        let omega = Dist::biased(0.5).unwrap();
        let d = boolfn::proj(4, 1).unwrap();
        let rep = preservation_probability(&d, 1, &omega, 1.0, PreserveMode::Exact).unwrap();
        assert_eq!(rep.estimate, 1.0);
        let x = boolfn::xor(4).unwrap();
        let rep = preservation_probability(&x, 1, &omega, 0.01, PreserveMode::Exact).unwrap();
        assert_eq!(rep.estimate, 0.0);
    }

    #[test]
    fn preservation_mc_matches_exact() {
        // x1 ∨ maj3(x2,x3,x4), padded to arity 6
        let f = BooleanFunction::from_fn(6, |x| {
            x.bit(1) || (x.bit(2) as u8 + x.bit(3) as u8 + x.bit(4) as u8) >= 2
        })
        .unwrap();
        let omega = Dist::biased(0.5).unwrap();
        // τ: half the median minor influence, via the exact distribution
        let masses = omega.dense_masses(3).unwrap();
        let maps = enumerate_two_to_one(3).unwrap();
        let mut infs: Vec<f64> =
            maps.iter().map(|pi| minor_influence(&f, pi, pi.apply(1), &masses)).collect();
        infs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let tau = infs[infs.len() / 2] / 2.0;
        let exact = preservation_probability(&f, 1, &omega, tau, PreserveMode::Exact).unwrap();
        let mc = preservation_probability(
            &f,
            1,
            &omega,
            tau,
            PreserveMode::Mc { samples: 100_000, seed: 99 },
        )
        .unwrap();
        assert!(
            (mc.estimate - exact.estimate).abs() <= mc.half_width,
            "exact {} mc {} ± {}",
            exact.estimate,
            mc.estimate,
            mc.half_width
        );
    }

    #[test]
    fn derivative_indicator_examples() {
        let x2 = boolfn::xor(2).unwrap();
        let h = derivative_indicator(&x2).unwrap();
        assert!(h.domain().all(|x| h.eval(x)));
        let c = boolfn::constant(3, true).unwrap();
        let h = derivative_indicator(&c).unwrap();
        assert!(h.domain().all(|x| !h.eval(x)));
        let m = boolfn::maj(1).unwrap();
        let h = derivative_indicator(&m).unwrap();
        for x in h.domain() {
            assert_eq!(h.eval(x), x.bit(1) != x.bit(2));
        }
    }

    #[test]
    fn derivative_indicator_expectation_is_last_coordinate_influence() {
        let g = boolfn::tribes(2, 2).unwrap();
        let omega = Dist::biased(0.3).unwrap();
        let h = derivative_indicator(&g).unwrap();
        // E over the 3-dimensional marginal equals Inf[g, 4] because the
        // biased family is a product measure
        let e = crate::dist::expectation(&h, &Dist::biased(0.3).unwrap()).unwrap();
        let inf = crate::influence::influence(&g, 4, &omega).unwrap();
        assert!((e - inf).abs() < 1e-12);
    }

    #[test]
    fn pullback_expectation_examples() {
        let one = boolfn::constant(4, true).unwrap();
        for mode in [PullbackMode::Closed, PullbackMode::Enumerate] {
            let e = pullback_expectation(&one, &Dist::Shapley, mode).unwrap();
            assert!((e - 1.0).abs() < 1e-12);
        }
        // odd-weight indicator vanishes under a pull-back
        let parity = boolfn::xor(4).unwrap();
        for mode in [PullbackMode::Closed, PullbackMode::Enumerate] {
            let e = pullback_expectation(&parity, &Dist::Shapley, mode).unwrap();
            assert!(e.abs() < 1e-12);
        }
        // point mass at 0̄: Ω↓(0̄) = (5/3)·(1/5) = 1/3 for Shapley at n=2
        let at_zero = BooleanFunction::from_fn(4, |x| x.0 == 0).unwrap();
        for mode in [PullbackMode::Closed, PullbackMode::Enumerate] {
            let e = pullback_expectation(&at_zero, &Dist::Shapley, mode).unwrap();
            assert!((e - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pullback_expectation_modes_agree_on_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in [2usize, 3, 4] {
            for omega in [Dist::biased(0.35).unwrap(), Dist::Shapley] {
                let h = BooleanFunction::from_fn(2 * n, |_| rng.gen()).unwrap();
                let a = pullback_expectation(&h, &omega, PullbackMode::Closed).unwrap();
                let b = pullback_expectation(&h, &omega, PullbackMode::Enumerate).unwrap();
                assert!((a - b).abs() < 1e-12, "n={n} {omega:?}");
            }
        }
    }

    #[test]
    fn sel_examples() {
        let omega = Dist::biased(0.5).unwrap();
        let d = boolfn::proj(4, 1).unwrap();
        assert_eq!(sel_influential(&d, &omega, 1.0).unwrap(), vec![1]);
        let m5 = boolfn::maj(2).unwrap();
        assert!(sel_influential(&m5, &omega, 0.9).unwrap().is_empty());
        let x3 = boolfn::xor(3).unwrap();
        assert_eq!(sel_influential(&x3, &omega, 1.0).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn sel_ordered_dictator() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let d = boolfn::proj(3, 2).unwrap();
        // dictator coordinate is influential at every p
        let sel = sel_ordered(&d, 0.5, 0.5, &grid).unwrap();
        assert_eq!(sel, vec![2]);
    }

    #[test]
    fn intersection_rates() {
        let sel = Selector::Influential { omega: Dist::biased(0.5).unwrap(), delta: 0.5 };
        let dictators: Vec<BooleanFunction> =
            [4usize, 6, 8].iter().map(|&n| boolfn::proj(n, 1).unwrap()).collect();
        let rates = condition_intersection_rate(&dictators, &sel, 300, 7).unwrap();
        for r in &rates {
            assert_eq!(r.estimate, 1.0);
        }
        let xors: Vec<BooleanFunction> =
            [4usize, 6].iter().map(|&n| boolfn::xor(n).unwrap()).collect();
        let sel = Selector::Influential { omega: Dist::biased(0.5).unwrap(), delta: 0.01 };
        let rates = condition_intersection_rate(&xors, &sel, 300, 7).unwrap();
        for r in &rates {
            assert_eq!(r.estimate, 0.0);
        }
    }

    #[test]
    fn split_minor_dictator() {
        let d = boolfn::proj(5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let g = random_split_minor(&d, 3, 0, &mut rng).unwrap();
            let c = g.classify();
            assert_eq!(c.essential_coords().len(), 1);
            let e = c.essential_coords()[0];
            assert_eq!(g, boolfn::proj(3, e).unwrap());
        }
    }

    #[test]
    fn split_minor_rejects_non_unate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(
            random_split_minor(&boolfn::xor(3).unwrap(), 2, 2, &mut rng),
            Err(Error::NotUnate)
        );
        // h = 0 demands an increasing function
        assert!(random_split_minor(&boolfn::at(1).unwrap(), 2, 0, &mut rng).is_err());
    }

    #[test]
    fn split_minor_empirical_mean_matches_epq() {
        // increasing case: E_seed[g(x̄)] → E_{|x̄|/m}[f]
        let f = boolfn::maj(1).unwrap();
        let m = 4usize;
        let x = BitTuple(0b0011); // weight 2 of 4
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 20_000;
        let mut hits = 0u64;
        for _ in 0..trials {
            let g = random_split_minor(&f, m, 0, &mut rng).unwrap();
            if g.eval(x) {
                hits += 1;
            }
        }
        let mean = hits as f64 / trials as f64;
        let expect = crate::influence::ep(&f, 2.0 / 4.0);
        let sigma = (expect * (1.0 - expect) / trials as f64).sqrt();
        assert!((mean - expect).abs() < 4.0 * sigma, "{mean} vs {expect}");

        // unate case with w = h = 3 at (i, j) = (2, 1) for the alternating
        // threshold of arity 7
        let f = boolfn::at(3).unwrap();
        let y = BitTuple(0b001_011); // weight 2 in the first 3, weight 1 in the last 3
        let mut hits = 0u64;
        for _ in 0..trials {
            let g = random_split_minor(&f, 3, 3, &mut rng).unwrap();
            if g.eval(y) {
                hits += 1;
            }
        }
        let mean = hits as f64 / trials as f64;
        let expect = crate::influence::expectation_pq(&f, 2.0 / 3.0, 1.0 / 3.0).unwrap();
        let sigma = (expect * (1.0 - expect) / trials as f64).sqrt() + 1e-9;
        assert!((mean - expect).abs() < 4.0 * sigma, "{mean} vs {expect}");
    }

    #[test]
    fn minor_influence_matches_definition() {
        let f = boolfn::tribes(2, 2).unwrap();
        let omega = Dist::biased(0.4).unwrap();
        let masses = omega.dense_masses(2).unwrap();
        for pi in enumerate_two_to_one(2).unwrap() {
            let g = f.apply_minor(&pi).unwrap();
            for j in 1..=2usize {
                let direct = crate::influence::influence(&g, j, &omega).unwrap();
                let inline = minor_influence(&f, &pi, j, &masses);
                assert!((direct - inline).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_step_instrumentation_runs() {
        // maj on 5 coordinates padded with a dummy sixth
        let m5 = boolfn::maj(2).unwrap();
        let f = BooleanFunction::from_fn(6, |x| m5.eval(BitTuple(x.0 & 0b11111))).unwrap();
        let omega = Dist::biased(0.5).unwrap();
        let samples = preservation_two_step(&f, 1, &omega, 64, 3).unwrap();
        assert_eq!(samples.len(), 64);
        for s in &samples {
            assert!(s.intermediate_influence >= 0.0 && s.intermediate_influence <= 1.0);
            assert!(s.final_influence >= 0.0 && s.final_influence <= 1.0);
        }
    }
}
