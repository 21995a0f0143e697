//! Finite-support characters: Freudenthal multiplicities, tensor products,
//! Adams operations, exterior/symmetric powers and decomposition into
//! irreducibles.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootsystem::{RootSystem, RootSystemError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("characters belong to different root systems")]
    MismatchedRootSystem,
    #[error("virtual character: weight {0} has negative remainder {1}")]
    Virtual(Weight, i64),
    #[error("Newton recursion is not exact at degree {0}; input is not a character")]
    InexactNewton(usize),
    #[error("module specification has no summands")]
    EmptySpec,
    #[error("summand {0} has zero multiplicity")]
    ZeroMultiplicity(Weight),
    #[error("multiplicity overflow")]
    Overflow,
}

/// A direct sum of irreducibles `⊕ V(λ)^{m}` given by highest weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub summands: Vec<(Weight, u64)>,
}

impl ModuleSpec {
    pub fn new(summands: Vec<(Weight, u64)>) -> Result<Self, CharacterError> {
        let spec = ModuleSpec { summands };
        spec.validate()?;
        Ok(spec)
    }

    pub fn irreducible(lam: Weight) -> Self {
        ModuleSpec {
            summands: vec![(lam, 1)],
        }
    }

    pub fn validate(&self) -> Result<(), CharacterError> {
        if self.summands.is_empty() {
            return Err(CharacterError::EmptySpec);
        }
        for (lam, m) in &self.summands {
            if !lam.is_dominant() {
                return Err(RootSystemError::NotDominant(lam.clone()).into());
            }
            if *m == 0 {
                return Err(CharacterError::ZeroMultiplicity(lam.clone()));
            }
        }
        Ok(())
    }

    /// Parse `"1,0"` or `"1,0*2"` summands.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, String> {
        let summands = items
            .iter()
            .map(|item| {
                let item = item.as_ref();
                let (w, m) = match item.split_once('*') {
                    Some((w, m)) => (
                        w,
                        m.trim()
                            .parse::<u64>()
                            .map_err(|e| format!("bad multiplicity in {item:?}: {e}"))?,
                    ),
                    None => (item, 1),
                };
                Ok((Weight::parse(w)?, m))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let spec = ModuleSpec { summands };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

/// A finitely supported map weight → multiplicity; zero entries are never stored.
#[derive(Clone, Debug)]
pub struct Character {
    rs: Arc<RootSystem>,
    mults: BTreeMap<Weight, i64>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        *self.rs == *other.rs && self.mults == other.mults
    }
}

impl Eq for Character {}

impl Character {
    pub fn from_map(rs: Arc<RootSystem>, mults: BTreeMap<Weight, i64>) -> Self {
        let mults = mults.into_iter().filter(|(_, m)| *m != 0).collect();
        Character { rs, mults }
    }

    pub fn zero(rs: Arc<RootSystem>) -> Self {
        Character {
            rs,
            mults: BTreeMap::new(),
        }
    }

    /// The trivial character `{0: 1}`.
    pub fn trivial(rs: Arc<RootSystem>) -> Self {
        let z = Weight::zero(rs.rank());
        Character {
            rs,
            mults: BTreeMap::from([(z, 1)]),
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn mults(&self) -> &BTreeMap<Weight, i64> {
        &self.mults
    }

    pub fn get(&self, mu: &Weight) -> i64 {
        self.mults.get(mu).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn dimension(&self) -> i64 {
        self.mults.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.mults.keys()
    }

    /// Multiplicities are constant on every simple-reflection pair.
    pub fn is_weyl_invariant(&self) -> bool {
        self.mults.iter().all(|(mu, &m)| {
            (0..self.rs.rank()).all(|i| self.get(&self.rs.reflect(i, mu)) == m)
        })
    }

    fn same_rs(&self, other: &Character) -> Result<(), CharacterError> {
        if Arc::ptr_eq(&self.rs, &other.rs) || *self.rs == *other.rs {
            Ok(())
        } else {
            Err(CharacterError::MismatchedRootSystem)
        }
    }

    pub fn add(&self, other: &Character) -> Result<Character, CharacterError> {
        self.axpy(1, other)
    }

    /// `self + k·other`.
    pub fn axpy(&self, k: i64, other: &Character) -> Result<Character, CharacterError> {
        self.same_rs(other)?;
        let mut out = self.mults.clone();
        for (mu, &m) in &other.mults {
            let term = m.checked_mul(k).ok_or(CharacterError::Overflow)?;
            let entry = out.entry(mu.clone()).or_insert(0);
            *entry = entry.checked_add(term).ok_or(CharacterError::Overflow)?;
        }
        Ok(Character::from_map(self.rs.clone(), out))
    }

    pub fn scaled(&self, k: i64) -> Result<Character, CharacterError> {
        Character::zero(self.rs.clone()).axpy(k, self)
    }

    /// Multiplicity convolution `(a ⊗ b)(ν) = Σ_μ a(μ)·b(ν−μ)`.
    pub fn tensor(&self, other: &Character) -> Result<Character, CharacterError> {
        self.same_rs(other)?;
        let mut acc: HashMap<Weight, i64> = HashMap::new();
        for (mu, &a) in &self.mults {
            for (nu, &b) in &other.mults {
                let w = mu.checked_add(nu)?;
                let term = a.checked_mul(b).ok_or(CharacterError::Overflow)?;
                let e = acc.entry(w).or_insert(0);
                *e = e.checked_add(term).ok_or(CharacterError::Overflow)?;
            }
        }
        Ok(Character::from_map(self.rs.clone(), acc.into_iter().collect()))
    }

    /// Adams operation: every weight `μ` is replaced by `kμ`.
    pub fn adams(&self, k: u32) -> Character {
        assert!(k >= 1, "Adams operation needs k >= 1");
        let mults = self
            .mults
            .iter()
            .map(|(mu, &m)| (mu.scale(k as i64), m))
            .collect();
        Character {
            rs: self.rs.clone(),
            mults,
        }
    }

    /// `∧^0 .. ∧^max_j` of this character.
    pub fn exterior_powers(&self, max_j: usize) -> Result<Vec<Character>, CharacterError> {
        self.newton_powers(max_j, true)
    }

    /// `Sym^0 .. Sym^max_j` of this character.
    pub fn symmetric_powers(&self, max_j: usize) -> Result<Vec<Character>, CharacterError> {
        self.newton_powers(max_j, false)
    }

    pub fn exterior_power(&self, j: usize) -> Result<Character, CharacterError> {
        Ok(self.exterior_powers(j)?.pop().unwrap())
    }

    pub fn symmetric_power(&self, j: usize) -> Result<Character, CharacterError> {
        Ok(self.symmetric_powers(j)?.pop().unwrap())
    }

    /// Newton's identities `j·e_j = Σ (−1)^{i−1} p_i e_{j−i}` and
    /// `j·h_j = Σ p_i h_{j−i}` with `p_i` the Adams operations.
    fn newton_powers(&self, max_j: usize, alternating: bool) -> Result<Vec<Character>, CharacterError> {
        let mut out = vec![Character::trivial(self.rs.clone())];
        let mut power_sums: Vec<Character> = Vec::with_capacity(max_j);
        for j in 1..=max_j {
            power_sums.push(self.adams(j as u32));
            let mut acc = Character::zero(self.rs.clone());
            for i in 1..=j {
                let sign = if alternating && i % 2 == 0 { -1 } else { 1 };
                let term = power_sums[i - 1].tensor(&out[j - i])?;
                acc = acc.axpy(sign, &term)?;
            }
            let mut mults = BTreeMap::new();
            for (mu, m) in acc.mults {
                if m % j as i64 != 0 {
                    return Err(CharacterError::InexactNewton(j));
                }
                mults.insert(mu, m / j as i64);
            }
            out.push(Character::from_map(self.rs.clone(), mults));
        }
        Ok(out)
    }
}

/// Order used for leading-term extraction: `<ρ, μ>` descending, then
/// coordinates lexicographically descending.
pub fn leading_order(rs: &RootSystem, a: &Weight, b: &Weight) -> Ordering {
    rs.rho_key(b).cmp(&rs.rho_key(a)).then_with(|| b.cmp(a))
}

/// Dominant weights of `V(λ)` mapped to their multiplicities (Freudenthal).
fn dominant_multiplicities(rs: &RootSystem, lam: &Weight) -> BTreeMap<Weight, i64> {
    // Dominant weights below λ are connected to λ by positive-root steps
    // through dominant weights.
    let mut dominant = BTreeSet::from([lam.clone()]);
    let mut queue = VecDeque::from([lam.clone()]);
    while let Some(mu) = queue.pop_front() {
        for alpha in rs.positive_roots() {
            let nu = &mu - alpha;
            if nu.is_dominant() && dominant.insert(nu.clone()) {
                queue.push_back(nu);
            }
        }
    }
    let mut order: Vec<Weight> = dominant.into_iter().collect();
    order.sort_by(|a, b| leading_order(rs, a, b));

    let lam_rho = lam + rs.rho();
    let top = rs.scaled_pairing(&lam_rho, &lam_rho);
    let mut mults: BTreeMap<Weight, i64> = BTreeMap::new();
    mults.insert(lam.clone(), 1);
    for mu in order.iter().skip(1) {
        let mut numerator: i128 = 0;
        for alpha in rs.positive_roots() {
            let mut shifted = mu + alpha;
            loop {
                let rep = rs.dominant_representative(&shifted);
                let Some(&m) = mults.get(&rep) else { break };
                numerator += m as i128 * rs.scaled_pairing(&shifted, alpha);
                shifted = &shifted + alpha;
            }
        }
        let mu_rho = mu + rs.rho();
        let denom = top - rs.scaled_pairing(&mu_rho, &mu_rho);
        assert!(denom > 0, "Freudenthal denominator vanished at {mu}");
        let num = 2 * numerator;
        assert_eq!(num % denom, 0, "Freudenthal quotient not integral at {mu}");
        let m = i64::try_from(num / denom).expect("multiplicity overflow");
        if m != 0 {
            mults.insert(mu.clone(), m);
        }
    }
    mults
}

/// Character of the irreducible module `V(λ)`.
pub fn irr_character(rs: &Arc<RootSystem>, lam: &Weight) -> Result<Character, CharacterError> {
    rs.check_rank(lam)?;
    if !lam.is_dominant() {
        return Err(RootSystemError::NotDominant(lam.clone()).into());
    }
    if let Some(hit) = rs.irreducible_memo().lock().unwrap().get(lam) {
        return Ok(Character {
            rs: rs.clone(),
            mults: (**hit).clone(),
        });
    }
    let mults = full_support(rs, &dominant_multiplicities(rs, lam));
    rs.irreducible_memo()
        .lock()
        .unwrap()
        .insert(lam.clone(), Arc::new(mults.clone()));
    Ok(Character {
        rs: rs.clone(),
        mults,
    })
}

/// Seed the in-memory irreducible table (used by the on-disk cache).
pub fn seed_irreducible(rs: &RootSystem, lam: &Weight, mults: BTreeMap<Weight, i64>) {
    rs.irreducible_memo()
        .lock()
        .unwrap()
        .insert(lam.clone(), Arc::new(mults));
}

fn full_support(rs: &RootSystem, dominant: &BTreeMap<Weight, i64>) -> BTreeMap<Weight, i64> {
    let mut out = BTreeMap::new();
    for (mu, &m) in dominant {
        for w in rs.orbit(mu) {
            out.insert(w, m);
        }
    }
    out
}

pub fn module_character(rs: &Arc<RootSystem>, spec: &ModuleSpec) -> Result<Character, CharacterError> {
    spec.validate()?;
    let mut acc = Character::zero(rs.clone());
    for (lam, m) in &spec.summands {
        let irr = irr_character(rs, lam)?;
        acc = acc.axpy(*m as i64, &irr)?;
    }
    Ok(acc)
}

/// Repeated maximal-weight subtraction. When `stop_below` is given, stops as
/// soon as the leading weight falls strictly below it in `<ρ, ·>`.
fn peel(
    ch: &Character,
    stop_below: Option<&Weight>,
) -> Result<Vec<(Weight, u64)>, CharacterError> {
    let rs = ch.rs.clone();
    let floor = stop_below.map(|w| rs.rho_key(w));
    // Sorted by leading order; the first key is always the current maximum.
    let mut remaining: BTreeMap<(i128, std::cmp::Reverse<Weight>), i64> = ch
        .mults
        .iter()
        .map(|(mu, &m)| ((-rs.rho_key(mu), std::cmp::Reverse(mu.clone())), m))
        .collect();
    let mut out = Vec::new();
    while let Some(((neg_key, top), m)) = remaining.iter().next().map(|(k, &m)| (k.clone(), m)) {
        if let Some(f) = floor {
            if -neg_key < f {
                break;
            }
        }
        let lam = top.0;
        if m < 0 || !lam.is_dominant() {
            return Err(CharacterError::Virtual(lam, m));
        }
        let irr = irr_character(&rs, &lam)?;
        for (mu, &k) in &irr.mults {
            let key = (-rs.rho_key(mu), std::cmp::Reverse(mu.clone()));
            let entry = remaining.entry(key.clone()).or_insert(0);
            *entry -= m * k;
            if *entry == 0 {
                remaining.remove(&key);
            }
        }
        out.push((lam, m as u64));
    }
    Ok(out)
}

/// Decompose an actual character into irreducibles, in decreasing leading order.
pub fn decompose(ch: &Character) -> Result<Vec<(Weight, u64)>, CharacterError> {
    peel(ch, None)
}

/// Multiplicity of `V(λ)` in `ch` via leading-term subtraction.
pub fn mult_in(lam: &Weight, ch: &Character) -> Result<u64, CharacterError> {
    ch.rs.check_rank(lam)?;
    if !lam.is_dominant() {
        return Err(RootSystemError::NotDominant(lam.clone()).into());
    }
    Ok(peel(ch, Some(lam))?
        .into_iter()
        .find(|(w, _)| w == lam)
        .map_or(0, |(_, m)| m))
}

/// Multiplicity of `V(λ)` via the signed sum `Σ_w sign(w)·ch(w(λ+ρ)−ρ)`.
pub fn mult_in_alternating(lam: &Weight, ch: &Character) -> i64 {
    let rs = &ch.rs;
    let target = lam + rs.rho();
    ch.mults
        .iter()
        .filter_map(|(mu, &m)| {
            let (dom, sign, singular) = rs.to_dominant_signed(&(mu + rs.rho()));
            (!singular && dom == target).then_some(sign * m)
        })
        .sum()
}

/// `dim Hom_g(W ⊗ V(μ), V(ν))` via the signed sum over weights of `W`.
pub fn tensor_mult_alternating(w: &Character, mu: &Weight, nu: &Weight) -> i64 {
    let rs = &w.rs;
    let target = nu + rs.rho();
    let base = mu + rs.rho();
    w.mults
        .iter()
        .filter_map(|(beta, &m)| {
            let (dom, sign, singular) = rs.to_dominant_signed(&(&base + beta));
            (!singular && dom == target).then_some(sign * m)
        })
        .sum()
}
