//! Coefficient sets C(d)/C0(d), solution profiles, translation to D = C - z,
//! the exponent formula Lambda, and exact/asymptotic counting of
//! half-partitions.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoeffsError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// C(d) = {±1..±d} or C0(d) = {0,±1..±d}, optionally transformed affinely:
/// elements are shift + scale*c over the base set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientSet {
    d: u32,
    includes_zero: bool,
    scale: i64,
    shift: i64,
}

impl CoefficientSet {
    pub fn new(d: u32, includes_zero: bool) -> Result<Self, CoeffsError> {
        Self::with_transform(d, includes_zero, 1, 0)
    }

    /// C(d), the signed set without zero.
    pub fn signed(d: u32) -> Self {
        Self::new(d, false).expect("d >= 1")
    }

    /// C0(d), the signed set with zero.
    pub fn with_zero(d: u32) -> Self {
        Self::new(d, true).expect("d >= 1")
    }

    pub fn with_transform(
        d: u32,
        includes_zero: bool,
        scale: i64,
        shift: i64,
    ) -> Result<Self, CoeffsError> {
        if d == 0 {
            return Err(CoeffsError::Domain("d must be >= 1".into()));
        }
        if scale == 0 {
            return Err(CoeffsError::Domain("scale must be nonzero".into()));
        }
        Ok(CoefficientSet { d, includes_zero, scale, shift })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn includes_zero(&self) -> bool {
        self.includes_zero
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_canonical(&self) -> bool {
        self.scale == 1 && self.shift == 0
    }

    /// Drops the affine transform, keeping the base set.
    pub fn canonical(&self) -> CoefficientSet {
        CoefficientSet { d: self.d, includes_zero: self.includes_zero, scale: 1, shift: 0 }
    }

    pub fn size(&self) -> usize {
        if self.includes_zero {
            2 * self.d as usize + 1
        } else {
            2 * self.d as usize
        }
    }

    /// All elements in ascending order.
    pub fn elements(&self) -> Vec<i64> {
        let d = self.d as i64;
        let mut out = Vec::with_capacity(self.size());
        for c in -d..=d {
            if c == 0 && !self.includes_zero {
                continue;
            }
            out.push(self.shift + self.scale * c);
        }
        out.sort_unstable();
        out
    }

    pub fn contains(&self, c: i64) -> bool {
        let v = c - self.shift;
        if v % self.scale != 0 {
            return false;
        }
        let base = v / self.scale;
        base.unsigned_abs() <= self.d as u64 && (base != 0 || self.includes_zero)
    }

    /// Largest |c| over the elements (used by the number-balancing precision
    /// bound).
    pub fn max_abs_element(&self) -> u64 {
        self.elements().iter().map(|c| c.unsigned_abs()).max().unwrap()
    }
}

/// D = C - z for a nonzero z in C; 0 is always an element of D.
#[derive(Debug, Clone)]
pub struct TranslatedSet {
    base: CoefficientSet,
    z: i64,
}

impl TranslatedSet {
    pub fn new(base: &CoefficientSet, z: i64) -> Result<Self, CoeffsError> {
        if z == 0 || !base.contains(z) {
            return Err(CoeffsError::Domain(format!("z = {z} is not a nonzero element of the set")));
        }
        Ok(TranslatedSet { base: base.clone(), z })
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn base(&self) -> &CoefficientSet {
        &self.base
    }

    /// Elements {w - z : w in C}, ascending; contains 0.
    pub fn elements(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.base.elements().iter().map(|c| c - self.z).collect();
        out.sort_unstable();
        out
    }

    /// Nonzero elements, ascending.
    pub fn nonzero_elements(&self) -> Vec<i64> {
        self.elements().into_iter().filter(|&w| w != 0).collect()
    }
}

/// Multiplicity vector over a coefficient set (pi over C, or sigma over D).
/// Every element of the owning set appears as a key, possibly with count 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    counts: BTreeMap<i64, usize>,
    n: usize,
}

impl Profile {
    /// Builds a profile over the given element list; `counts` keys must be a
    /// subset of `elements`, missing elements get count 0.
    pub fn new(elements: &[i64], counts: &BTreeMap<i64, usize>) -> Result<Self, CoeffsError> {
        for k in counts.keys() {
            if !elements.contains(k) {
                return Err(CoeffsError::Domain(format!("count key {k} outside coefficient set")));
            }
        }
        let mut full = BTreeMap::new();
        for &e in elements {
            full.insert(e, *counts.get(&e).unwrap_or(&0));
        }
        let n = full.values().sum();
        Ok(Profile { counts: full, n })
    }

    /// Profile of a concrete coefficient vector.
    pub fn of_vector(elements: &[i64], c: &[i64]) -> Result<Self, CoeffsError> {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for &ci in c {
            if !elements.contains(&ci) {
                return Err(CoeffsError::Domain(format!("coefficient {ci} outside set")));
            }
            *counts.entry(ci).or_insert(0) += 1;
        }
        Self::new(elements, &counts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, w: i64) -> usize {
        *self.counts.get(&w).unwrap_or(&0)
    }

    /// |sigma| = n - counts[0] (counts[0] = 0 if 0 is not a key).
    pub fn size(&self) -> usize {
        self.n - self.count(0)
    }

    /// (element, count) pairs in ascending element order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// Nonzero-element entries in ascending element order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.entries().filter(|&(k, _)| k != 0)
    }

    pub fn keys(&self) -> impl Iterator<Item = i64> + '_ {
        self.counts.keys().copied()
    }
}

/// Tuning knobs of the solver; the analysis only requires delta, epsilon and
/// the cap constants to be "sufficiently small" constants, so the concrete
/// values live here.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Slack in the profile size bound used for up-front rejection.
    pub delta: f64,
    /// Regime-classification slack; must satisfy epsilon < delta.
    pub epsilon: f64,
    /// Repeat budget of the (p, r) outer loop; default 4n^2.
    pub repeats: usize,
    /// Case-1 residue-class cap constant: cap = rho2 * b * n^2 / p.
    pub rho2: f64,
    /// Case-2 draw count: round(subsample_scale * b * n^3 / sqrt(a*p)).
    pub subsample_scale: f64,
    pub rng_seed: u64,
    /// Stop a profile after this many consecutive clean repeats (both buckets
    /// built, no aborts, zero candidate pairs); 0 disables the early stop.
    pub stop_after_clean: usize,
    /// Case-2 subsampling with replacement (the default) or without.
    pub with_replacement: bool,
    /// Memory budget for DP tables and candidate lists.
    pub budget_bytes: u64,
}

impl SolverConfig {
    /// Defaults with the repeat budget 4n^2 for instance length n.
    pub fn for_n(n: usize) -> Self {
        SolverConfig { repeats: 4 * n * n, ..Self::default() }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            // delta absorbs the O(sqrt(n)) fluctuation of the max profile
            // count at desk-scale n; asymptotically any constant works
            delta: 0.3,
            epsilon: 0.025,
            repeats: 64,
            rho2: 1.0,
            subsample_scale: 2.0,
            rng_seed: 0,
            stop_after_clean: 2,
            with_replacement: true,
            budget_bytes: crate::DEFAULT_BUDGET_BYTES,
        }
    }
}

/// Which branch of the two-branch exponent formula attains the max.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaBranch {
    Branch1,
    Branch2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaExponent {
    pub value: f64,
    pub branch: LambdaBranch,
    pub branch1: f64,
    pub branch2: f64,
}

/// Run-time exponent Lambda(z) for set size z: the solver runs in
/// O*(|C|^{Lambda(|C|) n}).
pub fn lambda_exponent(set_size: u32) -> Result<LambdaExponent, CoeffsError> {
    if set_size < 2 {
        return Err(CoeffsError::Domain("set size must be >= 2".into()));
    }
    let z = set_size as f64;
    let log_z = |v: f64| v.ln() / z.ln();
    let branch1 = 1.0 - ((z + 1.0) / (2.0 * z)) * log_z(z + 1.0) + (1.0 / z) * log_z(2.0);
    let branch2 = 2.0 / 3.0 - ((z + 1.0) / (3.0 * z)) * log_z((z + 1.0) / 2.0);
    let (value, branch) = if branch2 >= branch1 {
        (branch2, LambdaBranch::Branch2)
    } else {
        (branch1, LambdaBranch::Branch1)
    };
    Ok(LambdaExponent { value, branch, branch1, branch2 })
}

/// Translation z minimizing |sigma|: a nonzero z maximizing pi_z, ties broken
/// by smallest |z|, then positive sign, for reproducibility.
pub fn choose_translation(pi: &Profile) -> i64 {
    let mut best: Option<(usize, i64)> = None;
    for (w, cnt) in pi.entries() {
        if w == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some((bc, bw)) => {
                cnt > bc
                    || (cnt == bc
                        && (w.abs() < bw.abs() || (w.abs() == bw.abs() && w > 0 && bw < 0)))
            }
        };
        if better {
            best = Some((cnt, w));
        }
    }
    best.expect("coefficient set has a nonzero element").1
}

/// sigma over D = C - z with sigma_w = pi_{w+z}.
pub fn translate_profile(pi: &Profile, z: i64) -> Profile {
    let mut counts = BTreeMap::new();
    for (c, cnt) in pi.entries() {
        counts.insert(c - z, cnt);
    }
    let n = pi.n();
    Profile { counts, n }
}

/// Size bound |sigma| <= ((|C|-1)/|C| + delta/(|C|-1)) * n, compared in exact
/// rationals (delta is converted to its exact binary-rational value).
pub fn profile_size_ok(sigma: &Profile, set_size: usize, delta: f64) -> bool {
    let s = BigRational::from_integer(BigInt::from(set_size));
    let s1 = BigRational::from_integer(BigInt::from(set_size - 1));
    let d = BigRational::from_float(delta).expect("delta finite");
    let n = BigRational::from_integer(BigInt::from(sigma.n()));
    let bound = (s1.clone() / s + d / s1) * n;
    BigRational::from_integer(BigInt::from(sigma.size())) <= bound
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// multinomial(n; parts..., n - sum(parts)).
pub fn multinomial(n: usize, parts: &[usize]) -> BigUint {
    let used: usize = parts.iter().sum();
    assert!(used <= n, "multinomial parts exceed n");
    let mut denom = factorial(n - used);
    for &t in parts {
        denom *= factorial(t);
    }
    factorial(n) / denom
}

/// Allowed half sizes for a part of size sigma_w: {sigma_w/2} if even,
/// {(sigma_w-1)/2, (sigma_w+1)/2} if odd.
pub fn half_sizes(sigma_w: usize) -> Vec<usize> {
    if sigma_w % 2 == 0 {
        vec![sigma_w / 2]
    } else {
        vec![(sigma_w - 1) / 2, (sigma_w + 1) / 2]
    }
}

/// a(sigma): exact number of half-partitions of one fixed input partition
/// realizing sigma. Product over nonzero w of binom(sigma_w, half size),
/// summing the two choices when sigma_w is odd.
pub fn count_half_partitions_of_fixed_partition(sigma: &Profile) -> BigUint {
    let mut a = BigUint::one();
    for (_, s) in sigma.nonzero_entries() {
        let term: BigUint = half_sizes(s).into_iter().map(|t| binomial(s, t)).sum();
        a *= term;
    }
    a
}

/// b(sigma): exact number of half-partitions over the ground set [n] for
/// profile sigma — sum over valid half-size tuples of
/// multinomial(n; (t_w)_{w != 0}, n - sum t_w).
pub fn count_half_partitions_total(sigma: &Profile, n: usize) -> BigUint {
    assert_eq!(sigma.n(), n, "sigma must sum to n");
    let sizes: Vec<usize> = sigma.nonzero_entries().map(|(_, s)| s).collect();
    let mut total = BigUint::zero();
    let mut tuple = vec![0usize; sizes.len()];
    fn rec(sizes: &[usize], k: usize, tuple: &mut Vec<usize>, n: usize, total: &mut BigUint) {
        if k == sizes.len() {
            *total += multinomial(n, tuple);
            return;
        }
        for t in half_sizes(sizes[k]) {
            tuple[k] = t;
            rec(sizes, k + 1, tuple, n, total);
        }
    }
    rec(&sizes, 0, &mut tuple, n, &mut total);
    total
}

/// Binary entropy H(alpha_1..alpha_m) = -sum alpha_i log2 alpha_i.
pub fn multinomial_entropy(alphas: &[f64]) -> Result<f64, CoeffsError> {
    let sum: f64 = alphas.iter().sum();
    if alphas.iter().any(|&a| a < 0.0) {
        return Err(CoeffsError::Domain("entropy arguments must be nonnegative".into()));
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(CoeffsError::Domain(format!("entropy arguments sum to {sum}, not 1")));
    }
    Ok(alphas.iter().filter(|&&a| a > 0.0).map(|&a| -a * a.log2()).sum())
}

/// Asymptotic exponent h of b(sigma) = O*(2^{hn}) at alpha = |sigma|/n with
/// all parts balanced: h = (alpha/2) log2(2(|C|-1)/alpha)
/// + (1 - alpha/2) log2(2/(2-alpha)). Cross-check estimate only.
pub fn total_count_exponent(alpha: f64, set_size: usize) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    let k = (set_size - 1) as f64;
    (alpha / 2.0) * (2.0 * k / alpha).log2() + (1.0 - alpha / 2.0) * (2.0 / (2.0 - alpha)).log2()
}

/// Every count tuple over the set summing to n, each exactly once, ordered
/// lexicographically over ascending coefficient order.
pub fn enumerate_profiles(n: usize, set: &CoefficientSet) -> Vec<Profile> {
    let elements = set.elements();
    let k = elements.len();
    let mut out = Vec::new();
    let mut counts = vec![0usize; k];
    fn rec(
        elements: &[i64],
        counts: &mut Vec<usize>,
        pos: usize,
        left: usize,
        out: &mut Vec<Profile>,
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            let map: BTreeMap<i64, usize> =
                elements.iter().copied().zip(counts.iter().copied()).collect();
            out.push(Profile::new(elements, &map).unwrap());
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(elements, counts, pos + 1, left - c, out);
        }
    }
    if k == 1 {
        let map: BTreeMap<i64, usize> = [(elements[0], n)].into_iter().collect();
        out.push(Profile::new(&elements, &map).unwrap());
    } else {
        rec(&elements, &mut counts, 0, n, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(elements: &[i64], pairs: &[(i64, usize)]) -> Profile {
        let map: BTreeMap<i64, usize> = pairs.iter().copied().collect();
        Profile::new(elements, &map).unwrap()
    }

    #[test]
    fn elements_and_sizes() {
        assert_eq!(CoefficientSet::signed(1).elements(), vec![-1, 1]);
        assert_eq!(CoefficientSet::with_zero(1).elements(), vec![-1, 0, 1]);
        assert_eq!(CoefficientSet::signed(2).elements(), vec![-2, -1, 1, 2]);
        assert_eq!(CoefficientSet::with_zero(2).size(), 5);
        let t = CoefficientSet::with_transform(1, true, 2, 1).unwrap();
        assert_eq!(t.elements(), vec![-1, 1, 3]);
        assert!(t.contains(3) && !t.contains(0));
        assert!(CoefficientSet::new(0, true).is_err());
        assert!(CoefficientSet::with_transform(1, true, 0, 0).is_err());
    }

    #[test]
    fn translated_set_contains_zero() {
        let c = CoefficientSet::with_zero(2);
        for z in [-2i64, -1, 1, 2] {
            let d = TranslatedSet::new(&c, z).unwrap();
            let e = d.elements();
            assert!(e.contains(&0));
            assert_eq!(e.len(), c.size());
        }
        assert!(TranslatedSet::new(&c, 0).is_err());
        assert!(TranslatedSet::new(&c, 3).is_err());
    }

    #[test]
    fn lambda_table_values() {
        // Frozen against the published exponent table / figure.
        let cases = [
            (2u32, 0.374, 0.375, LambdaBranch::Branch2),
            (3, 0.386, 0.387, LambdaBranch::Branch2),
            (4, 0.399, 0.400, LambdaBranch::Branch1),
            (5, 0.418, 0.419, LambdaBranch::Branch1),
            (7, 0.440, 0.441, LambdaBranch::Branch1),
        ];
        for (z, lo, hi, branch) in cases {
            let l = lambda_exponent(z).unwrap();
            assert!(l.value >= lo && l.value <= hi, "Lambda({z}) = {}", l.value);
            assert_eq!(l.branch, branch, "branch mismatch at z = {z}");
        }
        assert!(lambda_exponent(1).is_err());
    }

    #[test]
    fn lambda_gap_below_half() {
        // Lambda(z) < 0.5 with gap Omega(1/z): check z*(0.5 - Lambda(z))
        // stays above a fitted positive constant on 2..=64.
        let mut min_scaled_gap = f64::INFINITY;
        for z in 2..=64u32 {
            let l = lambda_exponent(z).unwrap().value;
            assert!(l < 0.5, "Lambda({z}) = {l}");
            min_scaled_gap = min_scaled_gap.min(z as f64 * (0.5 - l));
        }
        assert!(min_scaled_gap > 0.2, "scaled gap {min_scaled_gap}");
    }

    #[test]
    fn lambda_branch_crossover() {
        for z in 2..=3u32 {
            assert_eq!(lambda_exponent(z).unwrap().branch, LambdaBranch::Branch2);
        }
        for z in 4..=64u32 {
            assert_eq!(lambda_exponent(z).unwrap().branch, LambdaBranch::Branch1);
        }
    }

    #[test]
    fn choose_translation_cases() {
        let c01 = CoefficientSet::with_zero(1).elements();
        assert_eq!(choose_translation(&profile(&c01, &[(0, 4), (1, 3), (-1, 1)])), 1);
        let c1 = CoefficientSet::signed(1).elements();
        assert_eq!(choose_translation(&profile(&c1, &[(1, 2), (-1, 2)])), 1);
        let c02 = CoefficientSet::with_zero(2).elements();
        assert_eq!(
            choose_translation(&profile(&c02, &[(0, 5), (1, 1), (-1, 1), (2, 6), (-2, 1)])),
            2
        );
        // All nonzero counts zero: tie-break gives +1.
        assert_eq!(choose_translation(&profile(&c01, &[(0, 7)])), 1);
    }

    #[test]
    fn translate_profile_cases() {
        let c01 = CoefficientSet::with_zero(1).elements();
        let pi = profile(&c01, &[(0, 2), (1, 3), (-1, 1)]);
        let sigma = translate_profile(&pi, 1);
        assert_eq!(sigma.count(-1), 2);
        assert_eq!(sigma.count(0), 3);
        assert_eq!(sigma.count(-2), 1);
        assert_eq!(sigma.size(), 3);

        let c1 = CoefficientSet::signed(1).elements();
        let pi2 = profile(&c1, &[(1, 4), (-1, 0)]);
        let sigma2 = translate_profile(&pi2, 1);
        assert_eq!(sigma2.count(0), 4);
        assert_eq!(sigma2.count(-2), 0);
        assert_eq!(sigma2.size(), 0);

        let pi3 = profile(&c01, &[(0, 1), (1, 1), (-1, 1)]);
        let sigma3 = translate_profile(&pi3, -1);
        assert_eq!(sigma3.count(1), 1);
        assert_eq!(sigma3.count(2), 1);
        assert_eq!(sigma3.count(0), 1);
        assert_eq!(sigma3.size(), 2);
    }

    #[test]
    fn profile_size_bound() {
        // |sigma|=4, n=6, |C|=3, delta=0.05: bound = 4.15.
        let d = [-2i64, -1, 0];
        assert!(profile_size_ok(&profile(&d, &[(-1, 4), (0, 2)]), 3, 0.05));
        // |sigma| = n is always out for delta = 0.
        assert!(!profile_size_ok(&profile(&d, &[(-1, 6)]), 3, 0.0));
        // |sigma| = 0 is always fine.
        assert!(profile_size_ok(&profile(&d, &[(0, 6)]), 3, 0.0));
    }

    /// Brute-force a(sigma): enumerate subset choices per part.
    fn a_oracle(sizes: &[usize]) -> u64 {
        fn subsets_of_size(s: usize, t: usize) -> u64 {
            let mut cnt = 0;
            for mask in 0u32..(1 << s) {
                if mask.count_ones() as usize == t {
                    cnt += 1;
                }
            }
            cnt
        }
        sizes
            .iter()
            .map(|&s| half_sizes(s).into_iter().map(|t| subsets_of_size(s, t)).sum::<u64>())
            .product()
    }

    #[test]
    fn a_examples_and_oracle() {
        let one = [0i64, 5];
        assert_eq!(count_half_partitions_of_fixed_partition(&profile(&one, &[(5, 2)])), 2u32.into());
        assert_eq!(count_half_partitions_of_fixed_partition(&profile(&one, &[(5, 3)])), 6u32.into());
        let two = [0i64, 3, 5];
        assert_eq!(
            count_half_partitions_of_fixed_partition(&profile(&two, &[(3, 2), (5, 3)])),
            12u32.into()
        );
        for s1 in 0..=6usize {
            for s2 in 0..=6usize {
                let p = profile(&two, &[(3, s1), (5, s2)]);
                assert_eq!(
                    count_half_partitions_of_fixed_partition(&p),
                    a_oracle(&[s1, s2]).into(),
                    "sizes ({s1},{s2})"
                );
            }
        }
    }

    /// Brute-force b(sigma, n): assign each index one of the nonzero parts or
    /// "unassigned" and count assignments hitting a valid half-size tuple.
    fn b_oracle(sizes: &[usize], n: usize) -> u64 {
        let k = sizes.len();
        let mut count = 0u64;
        let mut assign = vec![0usize; n]; // 0 = unassigned, 1..=k = part index
        loop {
            let mut tallies = vec![0usize; k];
            for &a in &assign {
                if a > 0 {
                    tallies[a - 1] += 1;
                }
            }
            if tallies.iter().zip(sizes).all(|(&t, &s)| half_sizes(s).contains(&t)) {
                count += 1;
            }
            // odometer
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                assign[i] += 1;
                if assign[i] <= k {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn b_examples_and_oracle() {
        let one = [0i64, 5];
        assert_eq!(
            count_half_partitions_total(&profile(&one, &[(5, 2), (0, 2)]), 4),
            4u32.into()
        );
        assert_eq!(
            count_half_partitions_total(&profile(&one, &[(5, 0), (0, 7)]), 7),
            1u32.into()
        );
        let two = [0i64, 3, 5];
        assert_eq!(
            count_half_partitions_total(&profile(&two, &[(3, 2), (5, 2), (0, 1)]), 5),
            20u32.into()
        );
        for n in 1..=7usize {
            for s1 in 0..=n {
                for s2 in 0..=(n - s1) {
                    let p = profile(&two, &[(3, s1), (5, s2), (0, n - s1 - s2)]);
                    assert_eq!(
                        count_half_partitions_total(&p, n),
                        b_oracle(&[s1, s2], n).into(),
                        "n={n} sizes ({s1},{s2})"
                    );
                }
            }
        }
    }

    #[test]
    fn a_bounded_by_two_power_sigma() {
        let two = [0i64, 3, 5];
        for s1 in 0..=8usize {
            for s2 in 0..=8usize {
                let p = profile(&two, &[(3, s1), (5, s2)]);
                let a = count_half_partitions_of_fixed_partition(&p);
                assert!(a <= BigUint::from(1u32) << (s1 + s2));
            }
        }
    }

    #[test]
    fn entropy_examples() {
        assert!((multinomial_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(multinomial_entropy(&[1.0]).unwrap(), 0.0);
        assert!((multinomial_entropy(&[0.25, 0.25, 0.5]).unwrap() - 1.5).abs() < 1e-12);
        assert!(multinomial_entropy(&[-0.1, 1.1]).is_err());
        assert!(multinomial_entropy(&[0.5, 0.4]).is_err());
    }

    #[test]
    fn b_exponent_tracks_exact_count() {
        // h from the entropy formula should upper-bound log2(b)/n up to a
        // poly(n) slop for balanced sigma.
        let n = 12usize;
        let two = [0i64, 3, 5];
        for s in [2usize, 4] {
            let p = profile(&two, &[(3, s), (5, s), (0, n - 2 * s)]);
            let b = count_half_partitions_total(&p, n);
            let alpha = 2.0 * s as f64 / n as f64;
            let h = total_count_exponent(alpha, 3);
            let log_b = b.to_string().parse::<f64>().unwrap().log2();
            assert!(log_b <= h * n as f64 + 2.0 * (n as f64).log2(), "log b = {log_b}, hn = {}", h * n as f64);
        }
    }

    #[test]
    fn profile_enumeration() {
        let c1 = CoefficientSet::signed(1);
        let ps = enumerate_profiles(2, &c1);
        assert_eq!(ps.len(), 3);
        let tuples: Vec<(usize, usize)> = ps.iter().map(|p| (p.count(-1), p.count(1))).collect();
        assert_eq!(tuples, vec![(0, 2), (1, 1), (2, 0)]);

        assert_eq!(enumerate_profiles(0, &c1).len(), 1);
        assert_eq!(enumerate_profiles(3, &CoefficientSet::with_zero(1)).len(), 10);
        // count = binom(n + |C| - 1, |C| - 1)
        let c02 = CoefficientSet::with_zero(2);
        assert_eq!(enumerate_profiles(6, &c02).len(), usize::try_from(binomial(10, 4)).unwrap());
    }

    proptest! {
        #[test]
        fn translate_round_trip(counts in proptest::collection::vec(0usize..6, 3), zi in 0usize..2) {
            let c01 = CoefficientSet::with_zero(1);
            let elements = c01.elements();
            let map: BTreeMap<i64, usize> =
                elements.iter().copied().zip(counts.iter().copied()).collect();
            let pi = Profile::new(&elements, &map).unwrap();
            let z = [-1i64, 1][zi];
            let sigma = translate_profile(&pi, z);
            prop_assert_eq!(sigma.n(), pi.n());
            // Translating back by -z in D-space restores pi.
            let back = translate_profile(&sigma, -z);
            prop_assert_eq!(back, pi);
        }

        #[test]
        fn size_matches_definition(counts in proptest::collection::vec(0usize..6, 5)) {
            let c02 = CoefficientSet::with_zero(2);
            let elements = c02.elements();
            let map: BTreeMap<i64, usize> =
                elements.iter().copied().zip(counts.iter().copied()).collect();
            let pi = Profile::new(&elements, &map).unwrap();
            prop_assert_eq!(pi.size(), pi.n() - pi.count(0));
            let z = choose_translation(&pi);
            let sigma = translate_profile(&pi, z);
            prop_assert_eq!(sigma.size(), pi.n() - pi.count(z));
        }
    }
}
