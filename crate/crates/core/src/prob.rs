//! Finite-alphabet probability primitives.
//!
//! All information quantities are in bits. Entries below [`ZERO_MASS`] are
//! treated as exact zeros so that `0 · log 0 = 0` never produces `-inf`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on total mass when validating a pmf.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Masses below this are treated as exact zeros by the entropy routines.
pub const ZERO_MASS: f64 = 1e-15;
/// Default cap on the number of points `simplex_grid` will enumerate.
pub const SIMPLEX_GRID_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbError {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("invalid mass {value} at symbol {index}")]
    BadEntry { index: usize, value: f64 },
    #[error("total mass {total} differs from 1 by more than {MASS_TOLERANCE:e}")]
    NotNormalized { total: f64 },
    #[error("cannot normalize weights with total {0}")]
    ZeroWeight(f64),
    #[error("shape {dims:?} needs {expected} entries, got {actual}")]
    ShapeMismatch {
        dims: Vec<usize>,
        expected: usize,
        actual: usize,
    },
    #[error("axis {axis} out of range for a {ndim}-axis joint")]
    AxisOutOfRange { axis: usize, ndim: usize },
    #[error("operation needs a {expected}-axis joint, got {actual} axes")]
    WrongArity { expected: usize, actual: usize },
    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },
    #[error("simplex grid dim={dim} resolution={resolution} has {count} points, cap is {cap}")]
    GridTooLarge {
        dim: usize,
        resolution: usize,
        count: u128,
        cap: usize,
    },
    #[error("simplex grid needs dim >= 1 and resolution >= 1 (got dim={dim}, resolution={resolution})")]
    BadGrid { dim: usize, resolution: usize },
}

fn validate_masses(probs: &[f64]) -> Result<(), ProbError> {
    if probs.is_empty() {
        return Err(ProbError::EmptyAlphabet);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(ProbError::BadEntry { index, value });
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(ProbError::NotNormalized { total });
    }
    Ok(())
}

/// `-Σ p log₂ p` over raw masses, ignoring entries below [`ZERO_MASS`].
pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p >= ZERO_MASS)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// A probability mass function over the alphabet `0..len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates without renormalizing.
    pub fn new(probs: Vec<f64>) -> Result<Self, ProbError> {
        validate_masses(&probs)?;
        Ok(Self { probs })
    }

    /// Explicit renormalization of non-negative weights.
    pub fn normalized(weights: Vec<f64>) -> Result<Self, ProbError> {
        if weights.is_empty() {
            return Err(ProbError::EmptyAlphabet);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(ProbError::BadEntry { index, value });
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(ProbError::ZeroWeight(total));
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(size: usize) -> Self {
        assert!(size > 0, "uniform pmf over an empty alphabet");
        Self {
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn point_mass(size: usize, symbol: usize) -> Self {
        assert!(symbol < size, "point mass symbol {symbol} >= size {size}");
        let mut probs = vec![0.0; size];
        probs[symbol] = 1.0;
        Self { probs }
    }

    /// `(1 - p, p)`.
    pub fn bernoulli(p: f64) -> Result<Self, ProbError> {
        Self::new(vec![1.0 - p, p])
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, symbol: usize) -> f64 {
        self.probs[symbol]
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    /// The symbol carrying all mass, if any.
    pub fn point_mass_symbol(&self) -> Option<usize> {
        self.probs.iter().position(|&p| (p - 1.0).abs() <= MASS_TOLERANCE)
    }

    /// Symbols with mass at least [`ZERO_MASS`].
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= ZERO_MASS)
            .map(|(i, _)| i)
    }

    /// Convex combination `(1 - t) · self + t · other`.
    pub fn mix(&self, other: &Pmf, t: f64) -> Pmf {
        assert_eq!(self.len(), other.len());
        Pmf {
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        }
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = ProbError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

/// Dense joint pmf over any number of finite axes, stored row-major
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self, ProbError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(ProbError::EmptyAlphabet);
        }
        let expected: usize = dims.iter().product();
        if expected != probs.len() {
            return Err(ProbError::ShapeMismatch {
                dims,
                expected,
                actual: probs.len(),
            });
        }
        validate_masses(&probs)?;
        Ok(Self { dims, probs })
    }

    /// Builds a joint by evaluating `f` on every multi-index.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self, ProbError> {
        let total: usize = dims.iter().product();
        let mut probs = Vec::with_capacity(total);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..total {
            probs.push(f(&idx));
            for axis in (0..dims.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < dims[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Self::new(dims, probs)
    }

    /// Independent product `p ⊗ q`.
    pub fn product(p: &Pmf, q: &Pmf) -> Self {
        let probs = p
            .probs()
            .iter()
            .flat_map(|a| q.probs().iter().map(move |b| a * b))
            .collect();
        Self {
            dims: vec![p.len(), q.len()],
            probs,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut flat = 0;
        for (axis, &i) in idx.iter().enumerate() {
            flat = flat * self.dims[axis] + i;
        }
        self.probs[flat]
    }

    fn check_axes(&self, axes: &[usize]) -> Result<(), ProbError> {
        for &axis in axes {
            if axis >= self.dims.len() {
                return Err(ProbError::AxisOutOfRange {
                    axis,
                    ndim: self.dims.len(),
                });
            }
        }
        Ok(())
    }

    /// Marginal over `keep`, with axes reordered to the order given.
    pub fn marginal(&self, keep: &[usize]) -> Result<JointPmf, ProbError> {
        self.check_axes(keep)?;
        let out_dims: Vec<usize> = keep.iter().map(|&a| self.dims[a]).collect();
        let out_len: usize = out_dims.iter().product();
        let mut out = vec![0.0; out_len];
        let mut idx = vec![0usize; self.dims.len()];
        for &p in &self.probs {
            let mut flat = 0;
            for (k, &axis) in keep.iter().enumerate() {
                flat = flat * out_dims[k] + idx[axis];
            }
            out[flat] += p;
            for axis in (0..self.dims.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < self.dims[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Ok(JointPmf {
            dims: out_dims,
            probs: out,
        })
    }

    pub fn marginal_pmf(&self, axis: usize) -> Result<Pmf, ProbError> {
        let m = self.marginal(&[axis])?;
        Ok(Pmf { probs: m.probs })
    }

    /// Joint entropy of the listed axes.
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64, ProbError> {
        Ok(entropy_bits(&self.marginal(axes)?.probs))
    }

    /// `H(target | given)` evaluated slice by slice as `Σ_g p(g) H(T | G = g)`.
    pub fn conditional_entropy_of(&self, target: &[usize], given: &[usize]) -> Result<f64, ProbError> {
        let order: Vec<usize> = given.iter().chain(target).copied().collect();
        let m = self.marginal(&order)?;
        let chunk: usize = target.iter().map(|&a| self.dims[a]).product();
        let mut h = 0.0;
        for slice in m.probs.chunks(chunk) {
            let pg: f64 = slice.iter().sum();
            if pg < ZERO_MASS {
                continue;
            }
            for &p in slice {
                if p >= ZERO_MASS {
                    h -= p * (p / pg).log2();
                }
            }
        }
        Ok(h.max(0.0))
    }

    /// `I(A; B | G) = H(A | G) - H(A | B, G)`, clamped at zero.
    pub fn mutual_information_of(&self, a: &[usize], b: &[usize], given: &[usize]) -> Result<f64, ProbError> {
        let h_a_g = self.conditional_entropy_of(a, given)?;
        let bg: Vec<usize> = b.iter().chain(given).copied().collect();
        let h_a_bg = self.conditional_entropy_of(a, &bg)?;
        Ok((h_a_g - h_a_bg).max(0.0))
    }
}

pub fn entropy(p: &Pmf) -> f64 {
    p.entropy()
}

/// `H(other | condition_on)` for a two-axis joint.
pub fn conditional_entropy(joint: &JointPmf, condition_on: usize) -> Result<f64, ProbError> {
    if joint.ndim() != 2 {
        return Err(ProbError::WrongArity {
            expected: 2,
            actual: joint.ndim(),
        });
    }
    joint.check_axes(&[condition_on])?;
    joint.conditional_entropy_of(&[1 - condition_on], &[condition_on])
}

/// `I(A; B)` for a two-axis joint.
pub fn mutual_information(joint: &JointPmf) -> Result<f64, ProbError> {
    if joint.ndim() != 2 {
        return Err(ProbError::WrongArity {
            expected: 2,
            actual: joint.ndim(),
        });
    }
    joint.mutual_information_of(&[0], &[1], &[])
}

/// `C(resolution + dim - 1, dim - 1)`, saturating.
pub fn simplex_grid_count(dim: usize, resolution: usize) -> u128 {
    if dim == 0 {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 1..dim as u128 {
        c = match c.checked_mul(resolution as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    c
}

pub fn simplex_grid(dim: usize, resolution: usize) -> Result<Vec<Pmf>, ProbError> {
    simplex_grid_capped(dim, resolution, SIMPLEX_GRID_CAP)
}

/// Every pmf whose entries are multiples of `1 / resolution`, in
/// lexicographic order of the integer compositions.
pub fn simplex_grid_capped(dim: usize, resolution: usize, cap: usize) -> Result<Vec<Pmf>, ProbError> {
    if dim == 0 || resolution == 0 {
        return Err(ProbError::BadGrid { dim, resolution });
    }
    let count = simplex_grid_count(dim, resolution);
    if count > cap as u128 {
        return Err(ProbError::GridTooLarge {
            dim,
            resolution,
            count,
            cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut parts = vec![0usize; dim];
    fill_compositions(&mut parts, 0, resolution, resolution, &mut out);
    Ok(out)
}

fn fill_compositions(parts: &mut [usize], axis: usize, remaining: usize, resolution: usize, out: &mut Vec<Pmf>) {
    if axis + 1 == parts.len() {
        parts[axis] = remaining;
        let r = resolution as f64;
        out.push(Pmf {
            probs: parts.iter().map(|&k| k as f64 / r).collect(),
        });
        return;
    }
    for k in 0..=remaining {
        parts[axis] = k;
        fill_compositions(parts, axis + 1, remaining - k, resolution, out);
    }
}

/// Seed and stream selecting one reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream_id: u64,
}

/// splitmix64 finalizer; used to derive child streams.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSource {
    /// Generator identity recorded in simulation reports.
    pub const GENERATOR: &'static str = "chacha8 (rand_chacha 0.3): seed_from_u64(seed), set_stream(stream_id)";

    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A child stream keyed by `tag`; same seed, different stream.
    pub fn derive(&self, tag: u64) -> RandomSource {
        RandomSource {
            seed: self.seed,
            stream_id: mix64(self.stream_id ^ mix64(tag)),
        }
    }

    pub fn derive2(&self, a: u64, b: u64) -> RandomSource {
        self.derive(a).derive(b)
    }
}

/// Reusable sampler for one pmf.
#[derive(Debug, Clone)]
pub struct Sampler {
    dist: WeightedIndex<f64>,
}

impl Sampler {
    pub fn new(p: &Pmf) -> Self {
        // A valid Pmf always has positive total weight.
        let dist = WeightedIndex::new(p.probs()).expect("valid pmf has positive mass");
        Self { dist }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }
}

pub fn sample<R: Rng + ?Sized>(p: &Pmf, rng: &mut R) -> usize {
    Sampler::new(p).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Pmf::uniform(2)), 1.0);
        assert_eq!(entropy(&Pmf::point_mass(2, 0)), 0.0);
        // -0.7035 log2 0.7035 - 0.2965 log2 0.2965 = 0.87702...
        let h = entropy(&Pmf::new(vec![0.7035, 0.2965]).unwrap());
        assert!(close(h, 0.8770, 1e-4), "{h}");
    }

    #[test]
    fn pmf_validation() {
        assert!(matches!(Pmf::new(vec![0.6, 0.5]), Err(ProbError::NotNormalized { .. })));
        assert!(matches!(Pmf::new(vec![1.1, -0.1]), Err(ProbError::BadEntry { index: 1, .. })));
        assert!(matches!(Pmf::new(vec![]), Err(ProbError::EmptyAlphabet)));
        assert!(Pmf::new(vec![0.98, 0.0]).is_err());
        let p = Pmf::normalized(vec![2.0, 6.0]).unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert!(Pmf::normalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let indep = JointPmf::product(&Pmf::uniform(2), &Pmf::uniform(2));
        assert_eq!(conditional_entropy(&indep, 1).unwrap(), 1.0);
        let copy = JointPmf::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(conditional_entropy(&copy, 1).unwrap(), 0.0);
        assert!(conditional_entropy(&copy, 2).is_err());

        // Multiplier with X1 ~ Bern(0.5), X2 = 1: axes (X2, Y0).
        // p(x2=1, y0=0) = 0.5, p(x2=1, y0=1) = 0.5.
        let j = JointPmf::new(vec![2, 2], vec![0.0, 0.0, 0.5, 0.5]).unwrap();
        assert_eq!(conditional_entropy(&j, 0).unwrap(), 1.0);
    }

    #[test]
    fn mutual_information_examples() {
        let indep = JointPmf::product(&Pmf::new(vec![0.3, 0.7]).unwrap(), &Pmf::uniform(3));
        assert!(mutual_information(&indep).unwrap().abs() < 1e-12);
        let copy = JointPmf::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(mutual_information(&copy).unwrap(), 1.0);
        let bsc = JointPmf::new(vec![2, 2], vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        // 1 - h(0.1) = 0.531004...
        assert!(close(mutual_information(&bsc).unwrap(), 0.5310, 1e-4));
    }

    #[test]
    fn simplex_grid_examples() {
        let g = simplex_grid(2, 2).unwrap();
        let got: Vec<Vec<f64>> = g.iter().map(|p| p.probs().to_vec()).collect();
        assert_eq!(got, vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
        let g1 = simplex_grid(1, 7).unwrap();
        assert_eq!(g1.len(), 1);
        assert_eq!(g1[0].probs(), &[1.0]);
        assert_eq!(simplex_grid(3, 4).unwrap().len(), 15);
        assert_eq!(simplex_grid_count(3, 4), 15);
        assert!(matches!(
            simplex_grid_capped(3, 100, 10),
            Err(ProbError::GridTooLarge { count: 5151, .. })
        ));
        assert!(simplex_grid(0, 3).is_err());
        assert!(simplex_grid(3, 0).is_err());
    }

    #[test]
    fn grid_contains_vertices() {
        let g = simplex_grid(4, 3).unwrap();
        for s in 0..4 {
            assert!(g.iter().any(|p| p.point_mass_symbol() == Some(s)));
        }
    }

    #[test]
    fn sample_examples() {
        let mut rng = RandomSource::new(7, 0).rng();
        let p = Pmf::point_mass(4, 2);
        for _ in 0..100 {
            assert_eq!(sample(&p, &mut rng), 2);
        }
        let s = Sampler::new(&Pmf::uniform(2));
        let zeros = (0..100_000).filter(|_| s.sample(&mut rng) == 0).count();
        let freq = zeros as f64 / 100_000.0;
        assert!((0.49..=0.51).contains(&freq), "{freq}");
    }

    #[test]
    fn sample_replays() {
        let src = RandomSource::new(42, 9);
        let s = Sampler::new(&Pmf::new(vec![0.2, 0.3, 0.5]).unwrap());
        let mut a = src.rng();
        let mut b = src.rng();
        let xs: Vec<usize> = (0..500).map(|_| s.sample(&mut a)).collect();
        let ys: Vec<usize> = (0..500).map(|_| s.sample(&mut b)).collect();
        assert_eq!(xs, ys);
        let mut c = src.derive(1).rng();
        let zs: Vec<usize> = (0..500).map(|_| s.sample(&mut c)).collect();
        assert_ne!(xs, zs);
    }

    fn arb_pmf(max_len: usize) -> impl Strategy<Value = Pmf> {
        prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_filter_map("zero weight", |w| {
            let w: Vec<f64> = w.into_iter().map(|x| if x < 0.2 { 0.0 } else { x }).collect();
            Pmf::normalized(w).ok()
        })
    }

    fn arb_joint() -> impl Strategy<Value = JointPmf> {
        (1usize..5, 1usize..5).prop_flat_map(|(a, b)| {
            prop::collection::vec(0.0f64..1.0, a * b).prop_filter_map("zero weight", move |w| {
                let total: f64 = w.iter().sum();
                if total <= 0.0 {
                    return None;
                }
                JointPmf::new(vec![a, b], w.iter().map(|x| x / total).collect()).ok()
            })
        })
    }

    proptest! {
        #[test]
        fn entropy_bounds(p in arb_pmf(8)) {
            let h = entropy(&p);
            prop_assert!(h >= 0.0);
            prop_assert!(h <= (p.len() as f64).log2() + 1e-12);
            if p.point_mass_symbol().is_some() {
                prop_assert!(h.abs() < 1e-12);
            } else {
                prop_assert!(h > 0.0);
            }
        }

        #[test]
        fn chain_rule(j in arb_joint()) {
            let hab = j.entropy_of(&[0, 1]).unwrap();
            let hb = j.entropy_of(&[1]).unwrap();
            let ha_b = conditional_entropy(&j, 1).unwrap();
            prop_assert!((hab - hb - ha_b).abs() < 1e-10);
        }

        #[test]
        fn mutual_information_symmetric(j in arb_joint()) {
            let via_a = j.entropy_of(&[0]).unwrap() - conditional_entropy(&j, 1).unwrap();
            let via_b = j.entropy_of(&[1]).unwrap() - conditional_entropy(&j, 0).unwrap();
            prop_assert!((via_a - via_b).abs() < 1e-10);
            let swapped = j.marginal(&[1, 0]).unwrap();
            prop_assert!((mutual_information(&j).unwrap() - mutual_information(&swapped).unwrap()).abs() < 1e-12);
            prop_assert!(mutual_information(&j).unwrap() >= 0.0);
        }

        #[test]
        fn marginals_are_pmfs(j in arb_joint()) {
            for axis in 0..2 {
                let m = j.marginal_pmf(axis).unwrap();
                prop_assert!(Pmf::new(m.probs().to_vec()).is_ok());
            }
        }

        #[test]
        fn grid_refinement_nests(dim in 1usize..4, r in 1usize..6) {
            let coarse = simplex_grid(dim, r).unwrap();
            let fine = simplex_grid(dim, 2 * r).unwrap();
            for p in &coarse {
                prop_assert!(fine.iter().any(|q| q.probs().iter().zip(p.probs()).all(|(a, b)| (a - b).abs() < 1e-15)));
            }
            prop_assert_eq!(coarse.len() as u128, simplex_grid_count(dim, r));
        }

        #[test]
        fn replay_is_bit_identical(seed in any::<u64>(), stream in any::<u64>()) {
            let src = RandomSource::new(seed, stream);
            let a: Vec<u64> = { let mut r = src.rng(); (0..16).map(|_| r.gen()).collect() };
            let b: Vec<u64> = { let mut r = src.rng(); (0..16).map(|_| r.gen()).collect() };
            prop_assert_eq!(a, b);
        }
    }
}
