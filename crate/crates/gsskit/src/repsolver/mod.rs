//! Representation-technique solver: for a given solution profile pi on a
//! core-regime instance, translate the coefficient set by z, pick a random
//! prime p and residue r, and search for a matching pair of half-partitions
//! with complementary signatures inside the selected residue classes.

mod dp;

pub use dp::DpTable;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::coeffs::{
    choose_translation, count_half_partitions_of_fixed_partition, count_half_partitions_total,
    half_sizes, profile_size_ok, translate_profile, Profile, SolverConfig, TranslatedSet,
};
use crate::instance::{GssInstance, Solution};
use crate::mitm::{find_pair_in_sorted_lists, PairScan};
use crate::reductions::{classify_regime, lift, shrink_signed, shrink_zero, Regime};
use crate::work::WorkStats;

/// Full half-partition lists are enumerated directly (no prime/residue
/// machinery) when b is at most this, or when P falls below 2.
const FALLBACK_B: u64 = 1 << 9;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("solver requires a canonical coefficient set (scale=1, shift=0)")]
    NotCanonical,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

/// Family (T_w) of disjoint index sets, one per nonzero element of D, with
/// the half-size constraint relative to the governing sigma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPartition {
    pub(crate) parts: BTreeMap<i64, Vec<usize>>,
}

impl HalfPartition {
    pub fn new(parts: BTreeMap<i64, Vec<usize>>) -> Self {
        let mut parts = parts;
        let mut seen = HashSet::new();
        for v in parts.values_mut() {
            v.sort_unstable();
            for &i in v.iter() {
                assert!(seen.insert(i), "parts must be disjoint");
            }
        }
        HalfPartition { parts }
    }

    pub fn part(&self, w: i64) -> &[usize] {
        self.parts.get(&w).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn parts(&self) -> impl Iterator<Item = (i64, &[usize])> {
        self.parts.iter().map(|(&w, v)| (w, v.as_slice()))
    }

    /// sig(T, x) = sum over w of w * sum_{i in T_w} x_i.
    pub fn signature(&self, x: &[BigUint]) -> BigInt {
        let mut acc = BigInt::zero();
        for (&w, idxs) in &self.parts {
            let part_sum: BigUint = idxs.iter().map(|&i| x[i].clone()).sum();
            acc += BigInt::from(w) * BigInt::from(part_sum);
        }
        acc
    }

    fn index_mask(&self) -> u128 {
        let mut m = 0u128;
        for idxs in self.parts.values() {
            for &i in idxs {
                m |= 1u128 << i;
            }
        }
        m
    }

    fn sizes(&self, nonzero: &[i64]) -> Vec<u32> {
        nonzero.iter().map(|&w| self.part(w).len() as u32).collect()
    }

    /// Per-part bitmasks; a full identity key for without-replacement draws.
    pub fn key(&self) -> Vec<(i64, u128)> {
        self.parts
            .iter()
            .map(|(&w, idxs)| (w, idxs.iter().fold(0u128, |m, &i| m | (1u128 << i))))
            .collect()
    }
}

/// Assignment of all indices to elements of D (coefficient 0 of D means the
/// index belongs to the sigma_0 block).
#[derive(Debug, Clone)]
pub struct InputPartition {
    pub parts: BTreeMap<i64, Vec<usize>>,
}

impl InputPartition {
    /// Partition realized by a concrete solution under translation z:
    /// index i goes to block c_i - z.
    pub fn from_solution(c: &[i64], z: i64) -> Self {
        let mut parts: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &ci) in c.iter().enumerate() {
            parts.entry(ci - z).or_default().push(i);
        }
        InputPartition { parts }
    }

    pub fn sigma_sizes(&self) -> BTreeMap<i64, usize> {
        self.parts.iter().map(|(&w, v)| (w, v.len())).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// Case 1: collect entire residue classes (cap rho2*b*n^2/p).
    FullClass,
    /// Case 2: subsample ~ subsample_scale*b*n^3/sqrt(a*p) elements.
    Subsample,
}

/// log2 of a big integer with ~1e-15 relative precision.
pub fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 53 {
        return v.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top = (v >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// P = min(b^{2/3} a^{-1/3}, a/n) with the case tag: SUBSAMPLE when the first
/// term is the strict minimum, FULL_CLASS otherwise. Evaluated in log space
/// so exponential a, b cannot overflow.
pub fn compute_p(a: &BigUint, b: &BigUint, n: usize) -> (f64, CaseTag) {
    assert!(!a.is_zero() && !b.is_zero() && n >= 1);
    let la = log2_biguint(a);
    let lb = log2_biguint(b);
    let log_sub = (2.0 * lb - la) / 3.0;
    let log_full = la - (n as f64).log2();
    let (log_p, tag) =
        if log_sub < log_full { (log_sub, CaseTag::Subsample) } else { (log_full, CaseTag::FullClass) };
    (if log_p >= 1023.0 { f64::MAX } else { log_p.exp2() }, tag)
}

/// Deterministic Miller-Rabin for u64 (witness set exact below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        base %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform-ish prime in [ceil(P), floor(2P)]: rejection sampling of uniform
/// integers with a primality test; interval endpoints round toward the
/// inside.
pub fn sample_prime(p_target: f64, rng: &mut impl Rng) -> Result<u64, RepError> {
    if p_target < 2.0 {
        return Err(RepError::Precondition(format!("P = {p_target} below 2")));
    }
    if 2.0 * p_target > (1u64 << 62) as f64 {
        return Err(RepError::BudgetExceeded(format!("P = {p_target:.3e} too large for a u64 modulus")));
    }
    let lo = p_target.ceil() as u64;
    let hi = ((2.0 * p_target).floor() as u64).max(lo);
    let max_draws = ((64.0 * (2.0 * p_target).ln()).ceil() as u64).max(128);
    for _ in 0..max_draws {
        let cand = rng.gen_range(lo..=hi);
        if is_prime_u64(cand) {
            return Ok(cand);
        }
    }
    Err(RepError::Internal(format!("no prime found in [{lo}, {hi}] after {max_draws} draws")))
}

/// A half-partition with its cached signature and acceptance data.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub hp: HalfPartition,
    pub sig: BigInt,
    mask: u128,
    sizes: Vec<u32>,
}

fn make_candidates(hps: Vec<HalfPartition>, x: &[BigUint], nonzero: &[i64]) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = hps
        .into_iter()
        .map(|hp| {
            let sig = hp.signature(x);
            let mask = hp.index_mask();
            let sizes = hp.sizes(nonzero);
            Candidate { hp, sig, mask, sizes }
        })
        .collect();
    out.sort_by(|a, b| a.sig.cmp(&b.sig));
    out
}

#[derive(Debug)]
pub enum MatchOutcome {
    Found { i: usize, j: usize, pairs_examined: u64 },
    NotFound { pairs_examined: u64 },
    Aborted { pairs_examined: u64 },
}

/// Scans sorted candidate lists for sig(T1) + sig(T2) = target_D, accepting
/// only index-disjoint pairs with |T1_w| + |T2_w| = sigma_w for every w.
/// Rejected key matches are pseudosolutions; the scan aborts past max_pairs.
/// `forbid_full` excludes the pair assembling to the excluded all-zero
/// solution (every index in the -z parts).
pub fn find_matching_pair(
    l1: &[Candidate],
    l2: &[Candidate],
    target_d: &BigInt,
    sigma_sizes: &[u32],
    max_pairs: u64,
    forbid_full: Option<(usize, u32)>,
) -> Result<MatchOutcome, RepError> {
    let k1: Vec<(BigInt, usize)> = l1.iter().enumerate().map(|(i, c)| (c.sig.clone(), i)).collect();
    let k2: Vec<(BigInt, usize)> = l2.iter().enumerate().map(|(i, c)| (c.sig.clone(), i)).collect();
    let accept = |&i: &usize, &j: &usize| {
        let a = &l1[i];
        let b = &l2[j];
        if a.mask & b.mask != 0 {
            return false;
        }
        if a.sizes.iter().zip(&b.sizes).zip(sigma_sizes).any(|((&s1, &s2), &s)| s1 + s2 != s) {
            return false;
        }
        if let Some((e, n_total)) = forbid_full {
            if a.sizes[e] + b.sizes[e] == n_total {
                return false;
            }
        }
        true
    };
    let scan = find_pair_in_sorted_lists(&k1, &k2, target_d, Some(max_pairs), accept)
        .map_err(|e| RepError::Internal(format!("{e}")))?;
    Ok(match scan {
        PairScan::Found { i, j, pairs_examined } => {
            MatchOutcome::Found { i: k1[i].1, j: k2[j].1, pairs_examined }
        }
        PairScan::Exhausted { pairs_examined } => MatchOutcome::NotFound { pairs_examined },
        PairScan::AbortedOverBudget { pairs_examined } => MatchOutcome::Aborted { pairs_examined },
    })
}

/// c_i = w + z for i in T1_w or T2_w, c_i = z for unassigned indices.
pub fn assemble_solution(t1: &HalfPartition, t2: &HalfPartition, z: i64, n: usize) -> Solution {
    let mut c = vec![z; n];
    for hp in [t1, t2] {
        for (w, idxs) in hp.parts() {
            for &i in idxs {
                c[i] = w + z;
            }
        }
    }
    Solution { c }
}

/// Case-1 bucket collection: full residue class or the over-cap signal.
pub fn collect_bucket(table: &DpTable, r: u64, cap: u128) -> Result<Vec<HalfPartition>, u128> {
    table.enumerate_class(r, cap)
}

/// Case-2 bucket subsampling via repeated exact-uniform draws; with
/// replacement by default, or distinct draws when `with_replacement` is
/// false (capped by the class size via bounded retry).
pub fn subsample_bucket(
    table: &DpTable,
    r: u64,
    count: usize,
    rng: &mut impl Rng,
    with_replacement: bool,
) -> Vec<HalfPartition> {
    if count == 0 {
        return Vec::new();
    }
    if with_replacement {
        return (0..count).filter_map(|_| table.sample(r, rng)).collect();
    }
    let mut seen: HashSet<Vec<(i64, u128)>> = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < count.saturating_mul(10).max(64) {
        attempts += 1;
        let Some(hp) = table.sample(r, rng) else { break };
        if seen.insert(hp.key()) {
            out.push(hp);
        }
    }
    out
}

#[derive(Debug)]
pub struct RepOutcome {
    pub solution: Option<Solution>,
    pub work: WorkStats,
    /// Profile rejected up front by the size bound.
    pub rejected_by_size: bool,
    pub repeats_run: usize,
    pub aborts: usize,
    pub case: Option<CaseTag>,
}

impl RepOutcome {
    fn empty() -> Self {
        RepOutcome {
            solution: None,
            work: WorkStats::default(),
            rejected_by_size: false,
            repeats_run: 0,
            aborts: 0,
            case: None,
        }
    }
}

/// Algorithm skeleton for one profile: reject by the size bound; translate by
/// z; compute a, b and P; then repeatedly pick (p, r), draw the bucket pair
/// per the P-case and run the matched search. Any returned solution verifies
/// and realizes pi exactly.
pub fn solve_profile(
    inst: &GssInstance,
    pi: &Profile,
    cfg: &SolverConfig,
) -> Result<RepOutcome, RepError> {
    if !inst.coeffs().is_canonical() {
        return Err(RepError::NotCanonical);
    }
    if pi.n() != inst.n() {
        return Err(RepError::Precondition(format!(
            "profile sums to {} but n = {}",
            pi.n(),
            inst.n()
        )));
    }
    let n = inst.n();
    let set_size = inst.coeffs().size();
    let z = choose_translation(pi);
    let sigma = translate_profile(pi, z);
    let mut out = RepOutcome::empty();

    if !profile_size_ok(&sigma, set_size, cfg.delta) {
        out.rejected_by_size = true;
        return Ok(out);
    }
    let sum_x = inst.sum_x();
    let tau_d = inst.tau() - BigInt::from(z) * &sum_x;

    if sigma.size() == 0 {
        // single candidate: every index gets coefficient z
        if tau_d.is_zero() {
            let sol = Solution { c: vec![z; n] };
            if inst.verify(&sol).map_err(|e| RepError::Internal(format!("{e}")))? {
                out.solution = Some(sol);
            }
        }
        return Ok(out);
    }

    let dset = TranslatedSet::new(inst.coeffs(), z)
        .map_err(|e| RepError::Internal(format!("{e}")))?;
    let nonzero = dset.nonzero_elements();
    let sigma_sizes: Vec<u32> = nonzero.iter().map(|&w| sigma.count(w) as u32).collect();
    // exclusion: a pair covering all n indices with coefficient -z in D
    // assembles to the all-zero vector
    let forbid_full = if inst.coeffs().contains(0) && inst.tau().is_zero() {
        nonzero.iter().position(|&w| w == -z).map(|e| (e, n as u32))
    } else {
        None
    };

    let a = count_half_partitions_of_fixed_partition(&sigma);
    let b = count_half_partitions_total(&sigma, n);
    let (p_target, case) = compute_p(&a, &b, n);
    out.case = Some(case);
    let n_f = n as f64;
    let b_log = log2_biguint(&b);
    let a_log = log2_biguint(&a);

    let finish = |out: &mut RepOutcome,
                  l1: &[Candidate],
                  l2: &[Candidate],
                  i: usize,
                  j: usize|
     -> Result<(), RepError> {
        let sol = assemble_solution(&l1[i].hp, &l2[j].hp, z, n);
        let ok = inst.verify(&sol).map_err(|e| RepError::Internal(format!("{e}")))?;
        if !ok {
            return Err(RepError::Internal("assembled solution failed verification".into()));
        }
        let got = Profile::of_vector(&inst.coeffs().elements(), &sol.c)
            .map_err(|e| RepError::Internal(format!("{e}")))?;
        if got != *pi {
            return Err(RepError::Internal("assembled solution does not realize pi".into()));
        }
        out.solution = Some(sol);
        Ok(())
    };

    // Small-P fallback: enumerate all of B(sigma) once (a degenerate table
    // with p = 1 holds the whole family in residue class 0) and run the
    // matched search on the complete lists.
    if p_target < 2.0 || b <= BigUint::from(FALLBACK_B) {
        let (table, writes) = DpTable::build(inst.x(), &dset, 1, &sigma, cfg.budget_bytes)?;
        out.work.dp_cells += writes;
        let all = table
            .enumerate_class(0, u128::MAX)
            .expect("cap is unbounded");
        out.work.list_elements += all.len() as u64;
        let l = make_candidates(all, inst.x(), &nonzero);
        let max_pairs = (cfg.rho2 * (l.len() as f64).powi(2)).max(1e4) as u64;
        match find_matching_pair(&l, &l, &tau_d, &sigma_sizes, max_pairs, forbid_full)? {
            MatchOutcome::Found { i, j, pairs_examined } => {
                out.work.pairs_examined += pairs_examined;
                finish(&mut out, &l, &l, i, j)?;
            }
            MatchOutcome::NotFound { pairs_examined }
            | MatchOutcome::Aborted { pairs_examined } => {
                out.work.pairs_examined += pairs_examined;
            }
        }
        return Ok(out);
    }

    let b_f = b.to_f64().unwrap_or(f64::MAX);
    let list_cap = (cfg.budget_bytes / 64).max(1) as usize;
    let mut tables: HashMap<u64, DpTable> = HashMap::new();
    let mut completed_without_pair = 0usize;

    for k in 0..cfg.repeats {
        out.repeats_run = k + 1;
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(k as u64 + 1);
        let p = sample_prime(p_target, &mut rng)?;
        if !tables.contains_key(&p) {
            let (table, writes) = DpTable::build(inst.x(), &dset, p, &sigma, cfg.budget_bytes)?;
            out.work.dp_cells += writes;
            tables.insert(p, table);
        }
        let table = &tables[&p];
        let r = rng.gen_range(0..p);
        let p_big = BigInt::from(p);
        let r2u: u64 = (&tau_d - BigInt::from(r)).mod_floor(&p_big).to_u64().unwrap();

        let (l1_raw, l2_raw, pair_budget) = match case {
            CaseTag::FullClass => {
                let cap = ((cfg.rho2 * b_f * n_f * n_f / p as f64).max(16.0)).min(1e18) as u128;
                let c1 = match collect_bucket(table, r, cap) {
                    Ok(v) => v,
                    Err(_) => {
                        out.aborts += 1;
                        continue;
                    }
                };
                let c2 = match collect_bucket(table, r2u, cap) {
                    Ok(v) => v,
                    Err(_) => {
                        out.aborts += 1;
                        continue;
                    }
                };
                (c1, c2, cap.min(u64::MAX as u128) as u64)
            }
            CaseTag::Subsample => {
                let raw = cfg.subsample_scale * 2f64.powf(b_log - 0.5 * (a_log + (p as f64).log2()))
                    * n_f.powi(3);
                let count = (raw.round().max(1.0) as usize).min(list_cap);
                let c1 = subsample_bucket(table, r, count, &mut rng, cfg.with_replacement);
                let c2 = subsample_bucket(table, r2u, count, &mut rng, cfg.with_replacement);
                (c1, c2, count as u64)
            }
        };
        if l1_raw.is_empty() || l2_raw.is_empty() {
            // empty residue class: a completed repeat with no candidates
            completed_without_pair += 1;
            if cfg.stop_after_clean > 0 && completed_without_pair >= cfg.stop_after_clean {
                break;
            }
            continue;
        }
        out.work.list_elements += (l1_raw.len() + l2_raw.len()) as u64;
        let l1 = make_candidates(l1_raw, inst.x(), &nonzero);
        let l2 = make_candidates(l2_raw, inst.x(), &nonzero);
        match find_matching_pair(&l1, &l2, &tau_d, &sigma_sizes, pair_budget.max(1024), forbid_full)? {
            MatchOutcome::Found { i, j, pairs_examined } => {
                out.work.pairs_examined += pairs_examined;
                finish(&mut out, &l1, &l2, i, j)?;
                return Ok(out);
            }
            MatchOutcome::NotFound { pairs_examined } => {
                out.work.pairs_examined += pairs_examined;
                completed_without_pair += 1;
                if cfg.stop_after_clean > 0 && completed_without_pair >= cfg.stop_after_clean {
                    break;
                }
            }
            MatchOutcome::Aborted { pairs_examined } => {
                out.work.pairs_examined += pairs_examined;
                out.aborts += 1;
            }
        }
    }
    Ok(out)
}

/// Distinct signatures over all half-partitions of one input partition,
/// together with their total count a. Refuses when a exceeds the budget.
pub fn signature_spread(
    x: &[BigUint],
    partition: &InputPartition,
    budget: u64,
) -> Result<(u64, BigUint), RepError> {
    let mut a = BigUint::one();
    let mut parts: Vec<(i64, &Vec<usize>)> = Vec::new();
    for (&w, idxs) in &partition.parts {
        if w == 0 {
            continue;
        }
        let s = idxs.len();
        let term: BigUint =
            half_sizes(s).into_iter().map(|t| crate::coeffs::binomial(s, t)).sum();
        a *= term;
        parts.push((w, idxs));
    }
    if a > BigUint::from(budget) {
        return Err(RepError::BudgetExceeded(format!("a = {a} over budget {budget}")));
    }
    let mut sigs: HashSet<BigInt> = HashSet::new();
    // enumerate subsets of each part at the allowed sizes, accumulating sums
    fn subsets(idxs: &[usize], t: usize, start: usize, acc: &BigInt, w: i64, x: &[BigUint], out: &mut Vec<BigInt>) {
        if t == 0 {
            out.push(acc.clone());
            return;
        }
        for k in start..=idxs.len().saturating_sub(t) {
            let next = acc + BigInt::from(w) * BigInt::from(x[idxs[k]].clone());
            subsets(idxs, t - 1, k + 1, &next, w, x, out);
        }
    }
    let mut partials: Vec<BigInt> = vec![BigInt::zero()];
    for (w, idxs) in parts {
        let mut per_part: Vec<BigInt> = Vec::new();
        for t in half_sizes(idxs.len()) {
            subsets(idxs, t, 0, &BigInt::zero(), w, x, &mut per_part);
        }
        let mut next = Vec::with_capacity(partials.len() * per_part.len());
        for base in &partials {
            for add in &per_part {
                next.push(base + add);
            }
        }
        partials = next;
    }
    for s in partials {
        sigs.insert(s);
    }
    Ok((sigs.len() as u64, a))
}

/// Outcome of the profile-iterating auto solver.
#[derive(Debug)]
pub enum AutoOutcome {
    /// M >= |C|^{(1+eps)n}: declared unsolvable without search.
    TooLarge,
    Solved { solution: Solution, work: WorkStats },
    NotFound { work: WorkStats },
}

/// End-to-end representation solve: canonicalize, classify the regime,
/// shrink if possible, then iterate profiles (most probable first, by
/// multinomial weight) running solve_profile on each.
pub fn solve_auto(inst: &GssInstance, cfg: &SolverConfig) -> Result<AutoOutcome, RepError> {
    let Some((canon, map)) = inst.canonicalize() else {
        return Ok(AutoOutcome::NotFound { work: WorkStats::default() });
    };
    match classify_regime(canon.m(), canon.n(), canon.coeffs().size(), cfg.epsilon) {
        Regime::TooLarge => Ok(AutoOutcome::TooLarge),
        Regime::Core => {
            let (sol, work) = solve_core(&canon, cfg)?;
            Ok(match sol {
                Some(s) => AutoOutcome::Solved { solution: map.lift(&s), work },
                None => AutoOutcome::NotFound { work },
            })
        }
        Regime::Shrinkable { n_prime } => {
            // the minimal n' only has a sub-solution with constant
            // probability; on a miss, grow n' geometrically up to n (total
            // work is dominated by the last attempt)
            let mut work = WorkStats::default();
            let mut np = n_prime;
            loop {
                let (sub, rec) = if canon.coeffs().contains(0) {
                    shrink_zero(&canon, np)
                } else {
                    shrink_signed(&canon, np)
                }
                .map_err(|e| RepError::Precondition(format!("{e}")))?;
                let (sol, w) = solve_core(&sub, cfg)?;
                work.add(&w);
                if let Some(s) = sol {
                    let lifted = lift(&canon, &s, &rec)
                        .map_err(|e| RepError::Internal(format!("lift failed: {e}")))?;
                    return Ok(AutoOutcome::Solved { solution: map.lift(&lifted), work });
                }
                if np == canon.n() {
                    return Ok(AutoOutcome::NotFound { work });
                }
                np = (np + np.div_ceil(2)).min(canon.n());
            }
        }
    }
}

fn solve_core(
    inst: &GssInstance,
    cfg: &SolverConfig,
) -> Result<(Option<Solution>, WorkStats), RepError> {
    let mut work = WorkStats::default();
    let mut profiles = crate::coeffs::enumerate_profiles(inst.n(), inst.coeffs());
    let weight = |p: &Profile| {
        let parts: Vec<usize> = p.entries().map(|(_, c)| c).collect();
        crate::coeffs::multinomial(inst.n(), &parts)
    };
    profiles.sort_by_cached_key(|p| std::cmp::Reverse(weight(p)));
    let cfg = if cfg.repeats == 0 {
        SolverConfig { repeats: 4 * inst.n() * inst.n(), ..cfg.clone() }
    } else {
        cfg.clone()
    };
    for pi in &profiles {
        let out = solve_profile(inst, pi, &cfg)?;
        work.add(&out.work);
        if let Some(sol) = out.solution {
            return Ok((Some(sol), work));
        }
    }
    Ok((None, work))
}
