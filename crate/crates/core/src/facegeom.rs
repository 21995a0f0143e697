//! Faces of the weight polytope of a module `V`.
//!
//! A subset `Ψ ⊂ wt(V)` lies on a proper face exactly when some functional
//! `ξ` takes the value 1 on `Ψ` and at most 1 on all of `wt(V)`. The level
//! can be fixed at 1 because the weights of `V` have barycenter zero, so any
//! proper face sits at a positive level.
//!
//! Functionals are stored in coordinates dual to the fundamental-weight
//! basis: `ξ(β) = Σ_i ξ_i β_i`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::characters::{decompose, irr_character, module_character, Character, CharacterError, ModuleSpec};
use crate::lp::System;
use crate::rootsystem::{rat, RootSystem, Weight};

/// Default total-length bound for [`is_rigid_bruteforce`].
pub const DEFAULT_RIGID_BOUND: usize = 6;

const MAX_ENUMERATION_RANK: usize = 4;
const MAX_ENUMERATION_WEIGHTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("module has only the zero weight")]
    TrivialModule,
    #[error("face subset is empty")]
    EmptyPsi,
    #[error("{0} is not a weight of the module")]
    NotAWeight(Weight),
    #[error("face enumeration limited to rank <= {MAX_ENUMERATION_RANK} and <= {MAX_ENUMERATION_WEIGHTS} weights (got rank {0}, {1} weights)")]
    GuardExceeded(usize, usize),
}

/// `(exterior?, j, μ)` for `∧^j V ⊗ V(μ)` or `Sym^j V ⊗ V(μ)`.
type DecompositionKey = (bool, usize, Weight);

/// Memoized k-fold sums `{g_1 + ... + g_k}` of a fixed generator list.
pub(crate) struct SumLayers {
    generators: Vec<Weight>,
    layers: Mutex<Vec<Arc<HashSet<Weight>>>>,
}

impl SumLayers {
    fn new(generators: Vec<Weight>, rank: usize) -> Self {
        SumLayers {
            generators,
            layers: Mutex::new(vec![Arc::new(HashSet::from([Weight::zero(rank)]))]),
        }
    }

    pub(crate) fn layer(&self, k: usize) -> Arc<HashSet<Weight>> {
        let mut layers = self.layers.lock().unwrap();
        while layers.len() <= k {
            let prev = layers.last().unwrap().clone();
            let next: HashSet<Weight> = prev
                .iter()
                .flat_map(|s| self.generators.iter().map(move |g| s + g))
                .collect();
            layers.push(Arc::new(next));
        }
        layers[k].clone()
    }
}

impl fmt::Debug for SumLayers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SumLayers").field("generators", &self.generators).finish()
    }
}

/// The weights of a module together with their multiplicities.
pub struct WeightSystem {
    rs: Arc<RootSystem>,
    spec: ModuleSpec,
    character: Character,
    weights: BTreeMap<Weight, u64>,
    exterior: Mutex<Vec<Character>>,
    symmetric: Mutex<Vec<Character>>,
    sums: SumLayers,
    decompositions: Mutex<HashMap<DecompositionKey, Arc<BTreeMap<Weight, u64>>>>,
}

impl fmt::Debug for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSystem")
            .field("spec", &self.spec)
            .field("weights", &self.weights)
            .finish()
    }
}

impl WeightSystem {
    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    /// `wt(V)` with `dim V_μ`.
    pub fn weights(&self) -> &BTreeMap<Weight, u64> {
        &self.weights
    }

    pub fn contains(&self, mu: &Weight) -> bool {
        self.weights.contains_key(mu)
    }

    pub fn dimension(&self) -> u64 {
        self.weights.values().sum()
    }

    /// Whether `diff` is a sum of exactly `k` elements of `wt(V)`, repetition allowed.
    pub fn is_k_fold_sum(&self, diff: &Weight, k: usize) -> bool {
        self.sums.layer(k).contains(diff)
    }

    pub(crate) fn sum_layer(&self, k: usize) -> Arc<HashSet<Weight>> {
        self.sums.layer(k)
    }

    /// Irreducible decomposition of `∧^j V ⊗ V(μ)` (`exterior`) or
    /// `Sym^j V ⊗ V(μ)`, memoized.
    pub fn power_tensor_decomposition(
        &self,
        exterior: bool,
        j: usize,
        mu: &Weight,
    ) -> Result<Arc<BTreeMap<Weight, u64>>, CharacterError> {
        let key = (exterior, j, mu.clone());
        if let Some(hit) = self.decompositions.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let power = if exterior {
            self.exterior_power(j)?
        } else {
            self.symmetric_power(j)?
        };
        let product = power.tensor(&irr_character(&self.rs, mu)?)?;
        let parts: BTreeMap<Weight, u64> = decompose(&product)?.into_iter().collect();
        let parts = Arc::new(parts);
        self.decompositions
            .lock()
            .unwrap()
            .insert(key, parts.clone());
        Ok(parts)
    }

    /// `Σ_μ (dim V_μ)·μ`; always zero for a genuine module.
    pub fn barycenter(&self) -> Weight {
        self.weights
            .iter()
            .fold(Weight::zero(self.rs.rank()), |acc, (mu, &m)| &acc + &mu.scale(m as i64))
    }

    /// `∧^j V`, memoized.
    pub fn exterior_power(&self, j: usize) -> Result<Character, CharacterError> {
        Self::power(&self.exterior, &self.character, j, true)
    }

    /// `Sym^j V`, memoized.
    pub fn symmetric_power(&self, j: usize) -> Result<Character, CharacterError> {
        Self::power(&self.symmetric, &self.character, j, false)
    }

    fn power(
        memo: &Mutex<Vec<Character>>,
        base: &Character,
        j: usize,
        exterior: bool,
    ) -> Result<Character, CharacterError> {
        let mut memo = memo.lock().unwrap();
        if memo.len() <= j {
            *memo = if exterior {
                base.exterior_powers(j)?
            } else {
                base.symmetric_powers(j)?
            };
        }
        Ok(memo[j].clone())
    }
}

/// Build `wt(V)` for the module described by `spec`.
pub fn weight_system(rs: &Arc<RootSystem>, spec: &ModuleSpec) -> Result<Arc<WeightSystem>, FaceError> {
    let character = module_character(rs, spec)?;
    let weights: BTreeMap<Weight, u64> = character
        .mults()
        .iter()
        .map(|(mu, &m)| (mu.clone(), m as u64))
        .collect();
    if weights.keys().all(Weight::is_zero) {
        return Err(FaceError::TrivialModule);
    }
    Ok(Arc::new(WeightSystem {
        rs: rs.clone(),
        spec: spec.clone(),
        character,
        exterior: Mutex::new(Vec::new()),
        symmetric: Mutex::new(Vec::new()),
        decompositions: Mutex::new(HashMap::new()),
        sums: SumLayers::new(weights.keys().cloned().collect(), rs.rank()),
        weights,
    }))
}

/// A subset `Ψ` of `wt(V)`, with a face certificate when it lies on a proper face.
#[derive(Clone, Debug)]
pub struct PsiFace {
    ws: Arc<WeightSystem>,
    psi: Vec<Weight>,
    certificate: Option<Vec<BigRational>>,
    lambda_psi: Weight,
    n_psi: u64,
    sums: Arc<SumLayers>,
}

impl PsiFace {
    pub fn weight_system(&self) -> &Arc<WeightSystem> {
        &self.ws
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.ws.rs
    }

    /// The elements of `Ψ`, sorted.
    pub fn psi(&self) -> &[Weight] {
        &self.psi
    }

    pub fn contains(&self, mu: &Weight) -> bool {
        self.psi.binary_search(mu).is_ok()
    }

    pub fn certificate(&self) -> Option<&[BigRational]> {
        self.certificate.as_deref()
    }

    pub fn is_face(&self) -> bool {
        self.certificate.is_some()
    }

    /// `λ_Ψ = Σ_{μ∈Ψ} (dim V_μ)·μ`.
    pub fn lambda_psi(&self) -> &Weight {
        &self.lambda_psi
    }

    /// `N_Ψ = Σ_{μ∈Ψ} dim V_μ`.
    pub fn n_psi(&self) -> u64 {
        self.n_psi
    }

    /// All sums of exactly `k` elements of `Ψ`.
    pub(crate) fn psi_sum_layer(&self, k: usize) -> Arc<HashSet<Weight>> {
        self.sums.layer(k)
    }

    /// `ξ(β)`; `None` without a certificate.
    pub fn evaluate(&self, beta: &Weight) -> Option<BigRational> {
        self.certificate.as_ref().map(|xi| evaluate(xi, beta))
    }

    /// Re-check the certificate against `Ψ` and `wt(V)` without the LP.
    pub fn verify_certificate(&self) -> bool {
        let Some(xi) = &self.certificate else {
            return false;
        };
        let one = BigRational::one();
        self.psi.iter().all(|p| evaluate(xi, p) == one)
            && self.ws.weights.keys().all(|b| evaluate(xi, b) <= one)
    }
}

fn evaluate(xi: &[BigRational], beta: &Weight) -> BigRational {
    xi.iter()
        .zip(beta.coords())
        .fold(BigRational::zero(), |acc, (x, &b)| acc + x * rat(b))
}

fn coeffs_of(w: &Weight) -> Vec<BigRational> {
    w.coords().iter().map(|&c| rat(c)).collect()
}

fn checked_psi(ws: &WeightSystem, psi: &[Weight]) -> Result<Vec<Weight>, FaceError> {
    if psi.is_empty() {
        return Err(FaceError::EmptyPsi);
    }
    for p in psi {
        if !ws.contains(p) {
            return Err(FaceError::NotAWeight(p.clone()));
        }
    }
    Ok(psi.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect())
}

fn make_face(ws: &Arc<WeightSystem>, psi: Vec<Weight>, certificate: Option<Vec<BigRational>>) -> PsiFace {
    let rank = ws.rs.rank();
    let lambda_psi = psi
        .iter()
        .fold(Weight::zero(rank), |acc, mu| &acc + &mu.scale(ws.weights[mu] as i64));
    let n_psi = psi.iter().map(|mu| ws.weights[mu]).sum();
    PsiFace {
        ws: ws.clone(),
        sums: Arc::new(SumLayers::new(psi.clone(), rank)),
        psi,
        certificate,
        lambda_psi,
        n_psi,
    }
}

/// Decide whether `Ψ` lies on a proper face of the weight polytope.
///
/// Always returns a [`PsiFace`]; the certificate is absent when the LP is
/// infeasible.
pub fn lies_on_proper_face(ws: &Arc<WeightSystem>, psi: &[Weight]) -> Result<PsiFace, FaceError> {
    let psi = checked_psi(ws, psi)?;
    let mut sys = System::new(ws.rs.rank());
    for p in &psi {
        sys.equal(coeffs_of(p), BigRational::one());
    }
    for b in ws.weights.keys() {
        if !psi.contains(b) {
            sys.at_most(coeffs_of(b), BigRational::one(), false);
        }
    }
    let certificate = sys.solve();
    let face = make_face(ws, psi, certificate);
    debug_assert!(!face.is_face() || face.verify_certificate());
    Ok(face)
}

/// `Ψ` is exactly the set of weights on some proper face (strict inequality
/// off `Ψ`).
pub fn exact_face(ws: &Arc<WeightSystem>, psi: &[Weight]) -> Result<Option<PsiFace>, FaceError> {
    let psi = checked_psi(ws, psi)?;
    let mut sys = System::new(ws.rs.rank());
    for p in &psi {
        sys.equal(coeffs_of(p), BigRational::one());
    }
    for b in ws.weights.keys() {
        if !psi.contains(b) {
            sys.at_most(coeffs_of(b), BigRational::one(), true);
        }
    }
    Ok(sys.solve().map(|xi| make_face(ws, psi, Some(xi))))
}

/// Outcome of the exhaustive rigidity search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RigidVerdict {
    /// No violation with `Σ r_β ≤ bound` (and `Σ m_α ≤ bound + 1`).
    NoViolation,
    /// `Σ m_α α = Σ r_β β` violating the length condition.
    Violation {
        m: Vec<(Weight, u64)>,
        r: Vec<(Weight, u64)>,
    },
}

impl RigidVerdict {
    pub fn is_rigid(&self) -> bool {
        matches!(self, RigidVerdict::NoViolation)
    }
}

fn multiset_sums(
    pool: &[Weight],
    max_size: usize,
    rank: usize,
) -> Vec<(Weight, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for size in 0..=max_size {
        for combo in (0..pool.len()).combinations_with_replacement(size) {
            let sum = combo
                .iter()
                .fold(Weight::zero(rank), |acc, &i| &acc + &pool[i]);
            out.push((sum, size, combo));
        }
    }
    out
}

fn counted(pool: &[Weight], combo: &[usize]) -> Vec<(Weight, u64)> {
    let mut counts: BTreeMap<Weight, u64> = BTreeMap::new();
    for &i in combo {
        *counts.entry(pool[i].clone()).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

/// Exhaustive search for a violation of the rigidity condition: whenever
/// `Σ m_α α = Σ r_β β` with `α ∈ Ψ`, `β ∈ wt(V)`, we need `Σ m ≤ Σ r`, with
/// equality exactly when every `β` used lies in `Ψ`.
pub fn is_rigid_bruteforce(
    ws: &WeightSystem,
    psi: &[Weight],
    bound: usize,
) -> Result<RigidVerdict, FaceError> {
    let psi = checked_psi(ws, psi)?;
    let rank = ws.rs.rank();
    let all: Vec<Weight> = ws.weights.keys().cloned().collect();

    let mut by_sum: HashMap<Weight, Vec<(usize, bool, Vec<usize>)>> = HashMap::new();
    for (sum, size, combo) in multiset_sums(&all, bound, rank) {
        let inside = combo.iter().all(|&i| psi.contains(&all[i]));
        by_sum.entry(sum).or_default().push((size, inside, combo));
    }
    let m_sums = multiset_sums(&psi, bound + 1, rank);
    // Length violations first, then failures of the equality clause.
    for length_pass in [true, false] {
        for (sum, m_size, m_combo) in &m_sums {
            let Some(candidates) = by_sum.get(sum) else {
                continue;
            };
            for (r_size, inside, r_combo) in candidates {
                let violated = if length_pass {
                    m_size > r_size
                } else {
                    (m_size == r_size && !inside) || (m_size < r_size && *inside)
                };
                if violated {
                    return Ok(RigidVerdict::Violation {
                        m: counted(&psi, m_combo),
                        r: counted(&all, r_combo),
                    });
                }
            }
        }
    }
    Ok(RigidVerdict::NoViolation)
}

fn in_affine_hull(points: &[&Weight], candidate: &Weight) -> bool {
    let base = points[0];
    let mut rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| coeffs_of(&(*p - base)))
        .collect();
    let before = rank_of(rows.clone());
    rows.push(coeffs_of(&(candidate - base)));
    rank_of(rows) == before
}

fn rank_of(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let v = &f * &m[r][k];
                m[i][k] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Every proper face of the weight polytope, as the set of weights on it.
///
/// Ordered by decreasing size, then lexicographically.
pub fn enumerate_face_subsets(ws: &Arc<WeightSystem>) -> Result<Vec<PsiFace>, FaceError> {
    let rank = ws.rs.rank();
    if rank > MAX_ENUMERATION_RANK || ws.weights.len() > MAX_ENUMERATION_WEIGHTS {
        return Err(FaceError::GuardExceeded(rank, ws.weights.len()));
    }
    let all: Vec<Weight> = ws.weights.keys().cloned().collect();
    let mut vertices = Vec::new();
    for w in &all {
        if exact_face(ws, std::slice::from_ref(w))?.is_some() {
            vertices.push(w.clone());
        }
    }
    // A face is determined by its affine hull, which is spanned by at most
    // `rank` of its vertices.
    let mut candidates: BTreeSet<Vec<Weight>> = BTreeSet::new();
    for k in 1..=rank.min(vertices.len()) {
        for subset in vertices.iter().combinations(k) {
            let closure: Vec<Weight> = all
                .iter()
                .filter(|w| in_affine_hull(&subset, w))
                .cloned()
                .collect();
            candidates.insert(closure);
        }
    }
    let mut faces = Vec::new();
    for set in candidates {
        if let Some(face) = exact_face(ws, &set)? {
            faces.push(face);
        }
    }
    faces.sort_by(|a, b| b.psi.len().cmp(&a.psi.len()).then_with(|| a.psi.cmp(&b.psi)));
    Ok(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    fn adjoint(letter: &str, rank: usize, top: &[i64]) -> Arc<WeightSystem> {
        let rs = RootSystem::of_type(letter, rank).unwrap();
        weight_system(&rs, &ModuleSpec::irreducible(w(top))).unwrap()
    }

    #[test]
    fn weight_systems() {
        let a1 = adjoint("A", 1, &[2]);
        assert_eq!(
            a1.weights(),
            &BTreeMap::from([(w(&[-2]), 1), (w(&[0]), 1), (w(&[2]), 1)])
        );
        let a2 = adjoint("A", 2, &[1, 1]);
        assert_eq!(a2.weights()[&w(&[0, 0])], 2);
        assert_eq!(a2.weights().len(), 7);
        assert!(a2.barycenter().is_zero());
        let rs = RootSystem::of_type("A", 2).unwrap();
        assert_eq!(
            weight_system(&rs, &ModuleSpec::irreducible(w(&[0, 0]))).unwrap_err(),
            FaceError::TrivialModule
        );
    }

    #[test]
    fn a1_faces() {
        let ws = adjoint("A", 1, &[2]);
        let top = lies_on_proper_face(&ws, &[w(&[2])]).unwrap();
        assert_eq!(top.certificate().unwrap(), &[BigRational::new(1.into(), 2.into())]);
        assert!(top.verify_certificate());
        assert_eq!(top.n_psi(), 1);
        assert_eq!(top.lambda_psi(), &w(&[2]));
        assert!(!lies_on_proper_face(&ws, &[w(&[2]), w(&[0])]).unwrap().is_face());
        assert_eq!(lies_on_proper_face(&ws, &[]).unwrap_err(), FaceError::EmptyPsi);
        assert_eq!(
            lies_on_proper_face(&ws, &[w(&[4])]).unwrap_err(),
            FaceError::NotAWeight(w(&[4]))
        );
    }

    #[test]
    fn a2_edge() {
        let ws = adjoint("A", 2, &[1, 1]);
        let edge = lies_on_proper_face(&ws, &[w(&[2, -1]), w(&[1, 1])]).unwrap();
        assert!(edge.is_face() && edge.verify_certificate());
        assert_eq!(edge.n_psi(), 2);
        assert_eq!(edge.lambda_psi(), &w(&[3, 0]));
        let across = lies_on_proper_face(&ws, &[w(&[2, -1]), w(&[-1, 2])]).unwrap();
        assert!(!across.is_face());
    }

    #[test]
    fn rigidity_examples() {
        let ws = adjoint("A", 1, &[2]);
        assert!(is_rigid_bruteforce(&ws, &[w(&[2])], 4).unwrap().is_rigid());
        match is_rigid_bruteforce(&ws, &[w(&[2]), w(&[0])], 1).unwrap() {
            RigidVerdict::Violation { m, r } => {
                assert_eq!(m, vec![(w(&[0]), 1)]);
                assert!(r.is_empty());
            }
            v => panic!("expected a violation, got {v:?}"),
        }
        match is_rigid_bruteforce(&ws, &[w(&[-2]), w(&[2])], 2).unwrap() {
            RigidVerdict::Violation { m, r } => {
                assert_eq!(m, vec![(w(&[-2]), 1), (w(&[2]), 1)]);
                assert!(r.is_empty());
            }
            v => panic!("expected a violation, got {v:?}"),
        }
    }

    #[test]
    fn face_enumeration() {
        let a1 = adjoint("A", 1, &[2]);
        let faces = enumerate_face_subsets(&a1).unwrap();
        let sets: Vec<&[Weight]> = faces.iter().map(|f| f.psi()).collect();
        assert_eq!(sets, vec![&[w(&[-2])][..], &[w(&[2])][..]]);

        let a2 = adjoint("A", 2, &[1, 1]);
        let faces = enumerate_face_subsets(&a2).unwrap();
        assert_eq!(faces.len(), 12);
        assert_eq!(faces.iter().filter(|f| f.psi().len() == 2).count(), 6);
        assert!(faces.iter().all(|f| f.verify_certificate()));

        let rs = RootSystem::of_type("A", 2).unwrap();
        let std = weight_system(&rs, &ModuleSpec::irreducible(w(&[1, 0]))).unwrap();
        let faces = enumerate_face_subsets(&std).unwrap();
        assert_eq!(faces.len(), 6, "triangle: 3 vertices and 3 edges");
        assert_eq!(faces.iter().filter(|f| f.psi().len() == 1).count(), 3);

        let c2 = adjoint("C", 2, &[2, 0]);
        let faces = enumerate_face_subsets(&c2).unwrap();
        assert_eq!(faces.iter().filter(|f| f.psi().len() == 1).count(), 4);
        assert_eq!(faces.iter().filter(|f| f.psi().len() == 3).count(), 4);
    }

    #[test]
    fn enumeration_guard() {
        let rs = RootSystem::of_type("A", 5).unwrap();
        let ws = weight_system(&rs, &ModuleSpec::irreducible(w(&[1, 0, 0, 0, 0]))).unwrap();
        assert_eq!(enumerate_face_subsets(&ws).unwrap_err(), FaceError::GuardExceeded(5, 6));
    }
}
