//! Boolean tuples and functions as packed truth tables, minor maps,
//! structural classification, and the standard function families.
//!
//! A tuple `x ∈ {0,1}^n` is an integer index with coordinate `i` stored at
//! bit `i-1` (coordinate 1 is the least-significant bit). Truth tables are
//! bit vectors of length `2^n` where bit `j` is the value at tuple `j`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hard cap on arity for exhaustive representations (`2^24`-bit tables).
pub const MAX_ARITY: usize = 24;

/// A point of `{0,1}^n`, packed into an integer. Coordinate 1 is the LSB.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitTuple(pub u32);

impl BitTuple {
    /// Value of coordinate `i` (1-based).
    #[inline]
    pub fn bit(self, i: usize) -> bool {
        debug_assert!(i >= 1);
        self.0 >> (i - 1) & 1 == 1
    }

    /// Tuple with coordinate `i` flipped.
    #[inline]
    pub fn flip_coord(self, i: usize) -> BitTuple {
        BitTuple(self.0 ^ (1 << (i - 1)))
    }

    /// Tuple with every coordinate in `mask` flipped (bit `i-1` for coordinate `i`).
    #[inline]
    pub fn flip_mask(self, mask: u32) -> BitTuple {
        BitTuple(self.0 ^ mask)
    }

    /// Tuple with coordinate `i` forced to `v` (the `x^{i→v}` notation).
    #[inline]
    pub fn with_coord(self, i: usize, v: bool) -> BitTuple {
        let m = 1u32 << (i - 1);
        BitTuple(if v { self.0 | m } else { self.0 & !m })
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }
}

/// Bit mask for a set of 1-based coordinates.
pub fn coord_mask(coords: &[usize], arity: usize) -> Result<u32> {
    let mut m = 0u32;
    for &c in coords {
        if c == 0 || c > arity {
            return Err(Error::CoordOutOfRange { coord: c, arity });
        }
        m |= 1 << (c - 1);
    }
    Ok(m)
}

/// Flips the coordinates `coords` of `x` inside `{0,1}^arity`. Involutive.
pub fn flip(x: BitTuple, coords: &[usize], arity: usize) -> Result<BitTuple> {
    Ok(x.flip_mask(coord_mask(coords, arity)?))
}

/// A Boolean function `{0,1}^n → {0,1}` stored as a packed truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    table: Vec<u64>,
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanFunction(arity={}, table=0x{})", self.arity, self.table_hex())
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity == 0 || arity > MAX_ARITY {
        return Err(Error::SizeLimit(format!(
            "arity {arity} outside supported range 1..={MAX_ARITY}"
        )));
    }
    Ok(())
}

impl BooleanFunction {
    /// Builds a function by evaluating `f` on every point.
    pub fn from_fn(arity: usize, mut f: impl FnMut(BitTuple) -> bool) -> Result<Self> {
        check_arity(arity)?;
        let words = ((1usize << arity) + 63) / 64;
        let mut table = vec![0u64; words];
        for j in 0..1u32 << arity {
            if f(BitTuple(j)) {
                table[(j >> 6) as usize] |= 1 << (j & 63);
            }
        }
        Ok(BooleanFunction { arity, table })
    }

    /// Builds a function from an explicit list of values, indexed by tuple.
    pub fn from_bits(arity: usize, bits: &[bool]) -> Result<Self> {
        check_arity(arity)?;
        if bits.len() != 1 << arity {
            return Err(Error::InvalidParameter(format!(
                "table length {} does not match 2^{arity}",
                bits.len()
            )));
        }
        Self::from_fn(arity, |x| bits[x.0 as usize])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of points of the domain, `2^n`.
    pub fn points(&self) -> u32 {
        1 << self.arity
    }

    /// Value at `x`. Panics if `x` is out of range.
    #[inline]
    pub fn eval(&self, x: BitTuple) -> bool {
        assert!(x.0 < self.points(), "tuple {} out of range for arity {}", x.0, self.arity);
        self.table[(x.0 >> 6) as usize] >> (x.0 & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn eval_u32(&self, x: u32) -> bool {
        self.table[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    /// Iterator over all points of the domain.
    pub fn domain(&self) -> impl Iterator<Item = BitTuple> {
        (0..self.points()).map(BitTuple)
    }

    /// Number of ones in the truth table, grouped by Hamming weight of the input.
    pub fn ones_by_weight(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.arity + 1];
        for x in self.domain() {
            if self.eval(x) {
                counts[x.weight() as usize] += 1;
            }
        }
        counts
    }

    /// The minor `g = f_π` with `g(ȳ) = f(x̄)` where `x_i = y_{π(i)}`.
    pub fn apply_minor(&self, pi: &MinorMap) -> Result<BooleanFunction> {
        if pi.source_arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: pi.source_arity() });
        }
        BooleanFunction::from_fn(pi.target_arity(), |y| self.eval(pi.pullback_tuple(y)))
    }

    /// Negation `x̄ ↦ 1 - f(x̄)`.
    pub fn negate(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.arity, |x| !self.eval(x)).unwrap()
    }

    /// Structural classification by exhaustive scan over `(x^{i→0}, x^{i→1})` pairs.
    pub fn classify(&self) -> Classification {
        let n = self.arity;
        let mut up = 0u32;
        let mut down = 0u32;
        for i in 1..=n {
            let mut never_up = true; // f(x^{i→0}) ≤ f(x^{i→1}) everywhere
            let mut never_down = true; // f(x^{i→0}) ≥ f(x^{i→1}) everywhere
            let m = 1u32 << (i - 1);
            for j in 0..self.points() {
                if j & m != 0 {
                    continue;
                }
                let lo = self.eval_u32(j);
                let hi = self.eval_u32(j | m);
                if lo && !hi {
                    never_up = false;
                }
                if !lo && hi {
                    never_down = false;
                }
                if !never_up && !never_down {
                    break;
                }
            }
            if never_up {
                up |= m;
            }
            if never_down {
                down |= m;
            }
        }
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let essential = all & !(up & down);
        let mut symmetric = true;
        let mut by_weight: Vec<Option<bool>> = vec![None; n + 1];
        for x in self.domain() {
            let w = x.weight() as usize;
            let v = self.eval(x);
            match by_weight[w] {
                None => by_weight[w] = Some(v),
                Some(prev) if prev != v => {
                    symmetric = false;
                    break;
                }
                _ => {}
            }
        }
        Classification {
            arity: n,
            domain_up: up,
            domain_down: down,
            essential,
            is_unate: up | down == all,
            is_increasing: up == all,
            is_symmetric: symmetric,
            is_idempotent: !self.eval(BitTuple(0)) && self.eval(BitTuple(all)),
        }
    }

    /// Lowercase hex encoding of the table, little-endian nibbles: the first
    /// character carries values at tuples 0..=3.
    pub fn table_hex(&self) -> String {
        let nibbles = (self.points() as usize + 3) / 4;
        let mut s = String::with_capacity(nibbles);
        for k in 0..nibbles {
            let mut v = 0u8;
            for b in 0..4 {
                let j = (4 * k + b) as u32;
                if j < self.points() && self.eval_u32(j) {
                    v |= 1 << b;
                }
            }
            s.push(std::char::from_digit(v as u32, 16).unwrap());
        }
        s
    }

    /// Decodes the hex table format produced by [`table_hex`](Self::table_hex).
    pub fn from_table_hex(arity: usize, hex: &str) -> Result<Self> {
        check_arity(arity)?;
        let expect = ((1usize << arity) + 3) / 4;
        if hex.len() != expect {
            return Err(Error::InvalidParameter(format!(
                "hex table has {} nibbles, arity {arity} needs {expect}",
                hex.len()
            )));
        }
        let mut vals = Vec::with_capacity(hex.len());
        for c in hex.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidParameter(format!("bad hex digit {c:?}")))?;
            if c.is_uppercase() {
                return Err(Error::InvalidParameter("hex table must be lowercase".into()));
            }
            vals.push(v as u8);
        }
        BooleanFunction::from_fn(arity, |x| {
            let j = x.0 as usize;
            vals[j / 4] >> (j % 4) & 1 == 1
        })
    }

    pub fn to_json(&self) -> FunctionJson {
        FunctionJson::Table { arity: self.arity, table_hex: self.table_hex() }
    }

    pub fn from_json(json: &FunctionJson) -> Result<Self> {
        match json {
            FunctionJson::Table { arity, table_hex } => Self::from_table_hex(*arity, table_hex),
            FunctionJson::Family { family } => family.build(),
        }
    }
}

/// Classification flags; non-essential coordinates appear in both
/// `domain_up` and `domain_down`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub arity: usize,
    pub domain_up: u32,
    pub domain_down: u32,
    pub essential: u32,
    pub is_unate: bool,
    pub is_increasing: bool,
    pub is_symmetric: bool,
    pub is_idempotent: bool,
}

impl Classification {
    pub fn essential_coords(&self) -> Vec<usize> {
        (1..=self.arity).filter(|&i| self.essential >> (i - 1) & 1 == 1).collect()
    }

    pub fn increasing_coords(&self) -> Vec<usize> {
        (1..=self.arity).filter(|&i| self.domain_up >> (i - 1) & 1 == 1).collect()
    }

    pub fn decreasing_coords(&self) -> Vec<usize> {
        (1..=self.arity).filter(|&i| self.domain_down >> (i - 1) & 1 == 1).collect()
    }

    /// Coordinates that are decreasing and essential.
    pub fn strictly_decreasing_mask(&self) -> u32 {
        self.domain_down & self.essential
    }
}

/// A variable-identification map `π : [n] → [m]`, stored as the image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinorMap {
    target: usize,
    image: Vec<usize>,
}

impl MinorMap {
    /// `image[i-1] = π(i)`, targets 1-based.
    pub fn new(target: usize, image: Vec<usize>) -> Result<Self> {
        if target == 0 || target > MAX_ARITY || image.is_empty() || image.len() > MAX_ARITY {
            return Err(Error::SizeLimit("minor map arity out of range".into()));
        }
        for &t in &image {
            if t == 0 || t > target {
                return Err(Error::CoordOutOfRange { coord: t, arity: target });
            }
        }
        Ok(MinorMap { target, image })
    }

    pub fn identity(n: usize) -> Self {
        MinorMap { target: n, image: (1..=n).collect() }
    }

    pub fn source_arity(&self) -> usize {
        self.image.len()
    }

    pub fn target_arity(&self) -> usize {
        self.target
    }

    /// `π(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Whether every target has exactly two preimages.
    pub fn is_two_to_one(&self) -> bool {
        if self.image.len() != 2 * self.target {
            return false;
        }
        let mut counts = vec![0usize; self.target];
        for &t in &self.image {
            counts[t - 1] += 1;
        }
        counts.iter().all(|&c| c == 2)
    }

    /// Composition: first `self : [n] → [m]`, then `other : [m] → [k]`.
    pub fn then(&self, other: &MinorMap) -> Result<MinorMap> {
        if other.source_arity() != self.target {
            return Err(Error::ArityMismatch {
                expected: self.target,
                got: other.source_arity(),
            });
        }
        MinorMap::new(other.target, self.image.iter().map(|&t| other.apply(t)).collect())
    }

    /// The tuple `x̄` with `x_i = y_{π(i)}`.
    #[inline]
    pub fn pullback_tuple(&self, y: BitTuple) -> BitTuple {
        let mut x = 0u32;
        for (i, &t) in self.image.iter().enumerate() {
            x |= (y.0 >> (t - 1) & 1) << i;
        }
        BitTuple(x)
    }
}

/// Serialized function format: either a raw table or a named family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionJson {
    Table { arity: usize, table_hex: String },
    Family { family: FamilySpec },
}

/// Named family constructors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Majority of arity `2m+1`.
    Maj { m: usize },
    /// `1` iff the weight exceeds `t·m`; arity `m`.
    Thr { t: f64, m: usize },
    Max { m: usize },
    Min { m: usize },
    /// Parity of arity `m`.
    Xor { m: usize },
    /// Alternating threshold of arity `2m+1`.
    At { m: usize },
    /// Almost-negation of arity `n`.
    An { n: usize },
    /// `b` tribes of `s` coordinates each; arity `s·b`.
    Tribes { s: usize, b: usize },
    /// Projection to coordinate `i` of arity `n`.
    Proj { n: usize, i: usize },
    Const { n: usize, value: u8 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<BooleanFunction> {
        match *self {
            FamilySpec::Maj { m } => maj(m),
            FamilySpec::Thr { t, m } => thr(t, m),
            FamilySpec::Max { m } => max_fn(m),
            FamilySpec::Min { m } => min_fn(m),
            FamilySpec::Xor { m } => xor(m),
            FamilySpec::At { m } => at(m),
            FamilySpec::An { n } => an(n),
            FamilySpec::Tribes { s, b } => tribes(s, b),
            FamilySpec::Proj { n, i } => proj(n, i),
            FamilySpec::Const { n, value } => constant(n, value != 0),
        }
    }
}

/// Majority on `2m+1` coordinates: `1` iff the weight exceeds `m`.
pub fn maj(m: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(2 * m + 1, |x| x.weight() as usize > m)
}

/// Threshold `1` iff `|x̄| > t·m`, for `t ∈ (0,1)`.
///
/// The constructor accepts any `t ∈ (0,1)`, including values with `t·m`
/// integral; threshold minions only contain the non-integral case.
pub fn thr(t: f64, m: usize) -> Result<BooleanFunction> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!("threshold t={t} outside (0,1)")));
    }
    let cut = t * m as f64;
    BooleanFunction::from_fn(m, |x| x.weight() as f64 > cut)
}

pub fn max_fn(m: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(m, |x| x.0 != 0)
}

pub fn min_fn(m: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(m, |x| x.weight() as usize == m)
}

/// Parity of all coordinates. Odd arity is required for membership in the
/// parity minion; the constructor itself allows any arity.
pub fn xor(m: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(m, |x| x.weight() % 2 == 1)
}

/// Alternating threshold on `2m+1` coordinates:
/// `at(x_1..x_{m+1}, y_1..y_m) = 1` iff `Σx_i > Σy_i`.
pub fn at(m: usize) -> Result<BooleanFunction> {
    let xmask = (1u32 << (m + 1)) - 1;
    BooleanFunction::from_fn(2 * m + 1, move |z| {
        let xs = (z.0 & xmask).count_ones();
        let ys = (z.0 >> (m + 1)).count_ones();
        xs > ys
    })
}

/// Almost negation: `x_1` when all coordinates agree, `1 - x_1` otherwise.
pub fn an(n: usize) -> Result<BooleanFunction> {
    check_arity(n)?;
    let all = (1u64 << n) - 1;
    BooleanFunction::from_fn(n, move |x| {
        let v = x.0 as u64;
        if v == 0 || v == all {
            x.bit(1)
        } else {
            !x.bit(1)
        }
    })
}

/// Tribes: coordinates `1..s` form tribe 1, `s+1..2s` tribe 2, and so on;
/// the value is `1` iff some tribe is all-ones.
pub fn tribes(s: usize, b: usize) -> Result<BooleanFunction> {
    if s == 0 || b == 0 {
        return Err(Error::InvalidParameter("tribes requires s ≥ 1 and b ≥ 1".into()));
    }
    let n = s.checked_mul(b).filter(|&n| n <= MAX_ARITY).ok_or_else(|| {
        Error::SizeLimit(format!("tribes arity {}·{} exceeds {MAX_ARITY}", s, b))
    })?;
    let tribe = (1u32 << s) - 1;
    BooleanFunction::from_fn(n, move |x| {
        (0..b).any(|j| x.0 >> (j * s) & tribe == tribe)
    })
}

/// Projection `x̄ ↦ x_i` of arity `n`.
pub fn proj(n: usize, i: usize) -> Result<BooleanFunction> {
    check_arity(n)?;
    if i == 0 || i > n {
        return Err(Error::CoordOutOfRange { coord: i, arity: n });
    }
    BooleanFunction::from_fn(n, move |x| x.bit(i))
}

pub fn constant(n: usize, value: bool) -> Result<BooleanFunction> {
    BooleanFunction::from_fn(n, move |_| value)
}
