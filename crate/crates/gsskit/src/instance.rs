//! GSS instances, solutions, verification, random generation, serialization,
//! and conversions from Subset Sum and Number Balancing.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::CoefficientSet;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("solution length {got} does not match instance length {want}")]
    LengthMismatch { want: usize, got: usize },
    #[error("invalid solution: coefficient {value} at index {index} is outside the set")]
    CoefficientOutsideSet { index: usize, value: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// A GSS instance: find c in C^n with c.x = tau, x in [0:M-1]^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GssInstance {
    m: BigUint,
    x: Vec<BigUint>,
    tau: BigInt,
    coeffs: CoefficientSet,
}

/// A candidate coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub c: Vec<i64>,
}

impl GssInstance {
    pub fn new(
        m: BigUint,
        x: Vec<BigUint>,
        tau: BigInt,
        coeffs: CoefficientSet,
    ) -> Result<Self, InstanceError> {
        if m.is_zero() {
            return Err(InstanceError::Domain("M must be >= 1".into()));
        }
        if x.is_empty() {
            return Err(InstanceError::Domain("n must be >= 1".into()));
        }
        for (i, xi) in x.iter().enumerate() {
            if *xi >= m {
                return Err(InstanceError::Domain(format!("x[{i}] = {xi} exceeds M-1")));
            }
        }
        Ok(GssInstance { m, x, tau, coeffs })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn x(&self) -> &[BigUint] {
        &self.x
    }

    pub fn tau(&self) -> &BigInt {
        &self.tau
    }

    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn sum_x(&self) -> BigInt {
        BigInt::from(self.x.iter().sum::<BigUint>())
    }

    /// x drawn i.i.d. uniform on [0, M-1]. PRNG: ChaCha12 seeded with `seed`;
    /// x_i uses stream i+1 (stream 0 is reserved for coefficient sampling in
    /// planted generation); uniformity on [0, M-1] by rejection sampling.
    pub fn generate_random(
        n: usize,
        m: BigUint,
        tau: BigInt,
        coeffs: CoefficientSet,
        seed: u64,
    ) -> Result<Self, InstanceError> {
        if m.is_zero() {
            return Err(InstanceError::Domain("M must be >= 1".into()));
        }
        let x = (0..n)
            .map(|i| {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                rng.set_stream(i as u64 + 1);
                rng.gen_biguint_below(&m)
            })
            .collect();
        Self::new(m, x, tau, coeffs)
    }

    /// Planted instance: random x, random c* in C^n (stream 0), tau = c*.x.
    pub fn generate_planted(
        n: usize,
        m: BigUint,
        coeffs: CoefficientSet,
        seed: u64,
    ) -> Result<(Self, Solution), InstanceError> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(0);
        let elements = coeffs.elements();
        let c: Vec<i64> = (0..n).map(|_| elements[rng.gen_range(0..elements.len())]).collect();
        Self::planted_from_coefficients(m, coeffs, c, seed)
    }

    /// Planted instance whose solution realizes the given profile: c* is a
    /// uniformly shuffled arrangement of the profile's multiset.
    pub fn generate_planted_with_profile(
        m: BigUint,
        coeffs: CoefficientSet,
        pi: &crate::coeffs::Profile,
        seed: u64,
    ) -> Result<(Self, Solution), InstanceError> {
        let mut c = Vec::with_capacity(pi.n());
        for (w, cnt) in pi.entries() {
            c.extend(std::iter::repeat(w).take(cnt));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(0);
        c.shuffle(&mut rng);
        Self::planted_from_coefficients(m, coeffs, c, seed)
    }

    fn planted_from_coefficients(
        m: BigUint,
        coeffs: CoefficientSet,
        c: Vec<i64>,
        seed: u64,
    ) -> Result<(Self, Solution), InstanceError> {
        let n = c.len();
        let proto = Self::generate_random(n, m, BigInt::zero(), coeffs, seed)?;
        let tau = dot(&c, &proto.x);
        let inst = GssInstance { tau, ..proto };
        Ok((inst, Solution { c }))
    }

    /// True iff c.x = tau exactly, with the excluded all-zero solution
    /// (0 in C and tau = 0) reported as false. A coefficient outside the set
    /// is an error, distinct from false.
    pub fn verify(&self, sol: &Solution) -> Result<bool, InstanceError> {
        if sol.c.len() != self.n() {
            return Err(InstanceError::LengthMismatch { want: self.n(), got: sol.c.len() });
        }
        for (i, &ci) in sol.c.iter().enumerate() {
            if !self.coeffs.contains(ci) {
                return Err(InstanceError::CoefficientOutsideSet { index: i, value: ci });
            }
        }
        if self.coeffs.contains(0) && self.tau.is_zero() && sol.c.iter().all(|&ci| ci == 0) {
            return Ok(false);
        }
        Ok(dot(&sol.c, &self.x) == self.tau)
    }

    /// Subset Sum (x, tau) as GSS over C(1): a subset S with sum tau maps to
    /// c = +1 on S and -1 off S, giving target 2*tau - sum(x). M is the
    /// smallest bound containing x, max(x)+1.
    pub fn from_subset_sum(x: &[BigUint], tau: &BigInt) -> Result<Self, InstanceError> {
        if x.is_empty() {
            return Err(InstanceError::Domain("n must be >= 1".into()));
        }
        let m = x.iter().max().unwrap() + 1u32;
        let sum = BigInt::from(x.iter().sum::<BigUint>());
        let tau_prime = tau * 2 - sum;
        Self::new(m, x.to_vec(), tau_prime, CoefficientSet::signed(1))
    }

    /// Number Balancing: reals y in [0,1] scaled and truncated to integers
    /// x_i = floor(y_i / delta), with M = ceil(1/delta) (bumped by one when a
    /// y_i = 1 lands exactly on the bound), tau = 0. Any GSS solution c has
    /// real imbalance |c.y| < d*delta*n; the metadata records the bound so
    /// callers can re-verify in exact rationals.
    pub fn from_number_balancing(
        y: &[f64],
        delta: f64,
        coeffs: CoefficientSet,
    ) -> Result<(Self, BalanceMeta), InstanceError> {
        if y.is_empty() {
            return Err(InstanceError::Domain("n must be >= 1".into()));
        }
        if !(0.0 < delta && delta < 1.0) {
            return Err(InstanceError::Domain("delta must be in (0,1)".into()));
        }
        let delta_r = BigRational::from_float(delta)
            .ok_or_else(|| InstanceError::Domain("delta must be finite".into()))?;
        let mut x = Vec::with_capacity(y.len());
        for (i, &yi) in y.iter().enumerate() {
            if !(0.0..=1.0).contains(&yi) {
                return Err(InstanceError::Domain(format!("y[{i}] = {yi} outside [0,1]")));
            }
            let yr = BigRational::from_float(yi).unwrap();
            let xi = (yr / &delta_r).floor().to_integer();
            x.push(xi.to_biguint().unwrap());
        }
        let mut m = delta_r.recip().ceil().to_integer().to_biguint().unwrap();
        if let Some(max_x) = x.iter().max() {
            if *max_x >= m {
                m = max_x + 1u32;
            }
        }
        let d = coeffs.max_abs_element();
        let bound = &delta_r * BigRational::from_integer(BigInt::from(d * y.len() as u64));
        let meta = BalanceMeta { delta, delta_rational: delta_r, imbalance_bound: bound };
        let inst = Self::new(m, x, BigInt::zero(), coeffs)?;
        Ok((inst, meta))
    }

    /// Rewrites an instance over a transformed set scale*C + shift as an
    /// equivalent canonical instance with target (tau - shift*sum(x))/scale.
    /// Returns None when the divisibility fails, which proves there is no
    /// solution at all.
    pub fn canonicalize(&self) -> Option<(GssInstance, CoeffMap)> {
        let map = CoeffMap { scale: self.coeffs.scale(), shift: self.coeffs.shift() };
        if self.coeffs.is_canonical() {
            return Some((self.clone(), map));
        }
        let adjusted = &self.tau - BigInt::from(self.coeffs.shift()) * self.sum_x();
        let scale = BigInt::from(self.coeffs.scale());
        if (&adjusted % &scale) != BigInt::zero() {
            return None;
        }
        let inst = GssInstance {
            m: self.m.clone(),
            x: self.x.clone(),
            tau: adjusted / scale,
            coeffs: self.coeffs.canonical(),
        };
        Some((inst, map))
    }
}

/// Affine coefficient map c -> shift + scale*c between a canonical instance
/// and its transformed original.
#[derive(Debug, Clone, Copy)]
pub struct CoeffMap {
    pub scale: i64,
    pub shift: i64,
}

impl CoeffMap {
    /// Maps a canonical-instance solution back to the transformed set.
    pub fn lift(&self, sol: &Solution) -> Solution {
        Solution { c: sol.c.iter().map(|&ci| self.shift + self.scale * ci).collect() }
    }
}

/// Metadata of a number-balancing conversion.
#[derive(Debug, Clone)]
pub struct BalanceMeta {
    pub delta: f64,
    /// Exact rational value of delta (the f64 is itself an exact rational).
    pub delta_rational: BigRational,
    /// Guaranteed bound d*delta*n on the real imbalance of any solution.
    pub imbalance_bound: BigRational,
}

/// Exact rational imbalance |c.y| of a coefficient vector on the real input.
pub fn imbalance(y: &[f64], c: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (&yi, &ci) in y.iter().zip(c) {
        acc += BigRational::from_float(yi).unwrap() * BigRational::from_integer(BigInt::from(ci));
    }
    acc.abs()
}

/// c.x as a signed big integer.
pub fn dot(c: &[i64], x: &[BigUint]) -> BigInt {
    assert_eq!(c.len(), x.len());
    let mut acc = BigInt::zero();
    for (&ci, xi) in c.iter().zip(x) {
        acc += BigInt::from(ci) * BigInt::from(xi.clone());
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct WireCoeffs {
    d: u32,
    zero: bool,
    #[serde(default = "default_scale")]
    scale: i64,
    #[serde(default)]
    shift: i64,
}

fn default_scale() -> i64 {
    1
}

#[derive(Serialize, Deserialize)]
struct WireInstance {
    version: u32,
    coeffs: WireCoeffs,
    #[serde(rename = "M")]
    m: String,
    tau: String,
    x: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct WireSolution {
    c: Vec<i64>,
}

/// Instance file format v1: JSON with all big integers as decimal strings.
pub fn serialize(inst: &GssInstance) -> String {
    let wire = WireInstance {
        version: 1,
        coeffs: WireCoeffs {
            d: inst.coeffs.d(),
            zero: inst.coeffs.includes_zero(),
            scale: inst.coeffs.scale(),
            shift: inst.coeffs.shift(),
        },
        m: inst.m.to_string(),
        tau: inst.tau.to_string(),
        x: inst.x.iter().map(|v| v.to_string()).collect(),
    };
    let mut s = serde_json::to_string_pretty(&wire).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn deserialize(text: &str) -> Result<GssInstance, InstanceError> {
    let wire: WireInstance = serde_json::from_str(text)
        .map_err(|e| InstanceError::Parse(format!("{e}")))?;
    if wire.version != 1 {
        return Err(InstanceError::Parse(format!("unsupported version {}", wire.version)));
    }
    let coeffs =
        CoefficientSet::with_transform(wire.coeffs.d, wire.coeffs.zero, wire.coeffs.scale, wire.coeffs.shift)
            .map_err(|e| InstanceError::Parse(format!("field coeffs: {e}")))?;
    let m = BigUint::from_str(&wire.m)
        .map_err(|e| InstanceError::Parse(format!("field M: {e}")))?;
    let tau = BigInt::from_str(&wire.tau)
        .map_err(|e| InstanceError::Parse(format!("field tau: {e}")))?;
    let mut x = Vec::with_capacity(wire.x.len());
    for (i, s) in wire.x.iter().enumerate() {
        x.push(
            BigUint::from_str(s).map_err(|e| InstanceError::Parse(format!("field x[{i}]: {e}")))?,
        );
    }
    GssInstance::new(m, x, tau, coeffs).map_err(|e| InstanceError::Parse(format!("{e}")))
}

pub fn serialize_solution(sol: &Solution) -> String {
    let mut s =
        serde_json::to_string(&WireSolution { c: sol.c.clone() }).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn deserialize_solution(text: &str) -> Result<Solution, InstanceError> {
    let wire: WireSolution =
        serde_json::from_str(text).map_err(|e| InstanceError::Parse(format!("{e}")))?;
    Ok(Solution { c: wire.c })
}
