//! Ext groups between simples, graded multiplicities of projective covers,
//! global dimension of truncations, and the top-degree witness search.
//!
//! With `a = g ⋉ V` concentrated in degree one:
//!
//! * `dim Ext^j(V(μ,r), V(ν,s)) = [∧^j V ⊗ V(μ) : V(ν)]` for `j = s − r`, zero otherwise;
//! * `[P(λ,r) : V(μ,s)] = [Sym^{s−r} V ⊗ V(λ) : V(μ)]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::CharacterError;
use crate::facegeom::{PsiFace, WeightSystem};
use crate::rootsystem::Weight;
use crate::weightposet::{covers, dpsi, GammaSet, LambdaPoint, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("Γ is not interval-closed")]
    NotIntervalClosed,
    #[error("{0} is not below {1} in the face order")]
    Incomparable(Weight, Weight),
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("no witness with k <= {0}")]
    WitnessNotFound(u64),
    #[error("top-degree Hom has dimension {mult} > 1 at k = {k}")]
    MultiplicityBound { k: u64, mult: u64 },
}

fn lookup(ws: &WeightSystem, exterior: bool, from: &LambdaPoint, to: &LambdaPoint) -> Result<u64, HomError> {
    if to.degree < from.degree {
        return Ok(0);
    }
    let j = (to.degree - from.degree) as usize;
    let parts = ws.power_tensor_decomposition(exterior, j, &from.weight)?;
    Ok(parts.get(&to.weight).copied().unwrap_or(0))
}

/// `dim Ext^{s−r}(V(μ,r), V(ν,s))`.
pub fn ext_dim(ws: &WeightSystem, p: &LambdaPoint, q: &LambdaPoint) -> Result<u64, HomError> {
    lookup(ws, true, p, q)
}

/// `[P(λ,r) : V(μ,s)]`.
pub fn proj_mult(ws: &WeightSystem, p: &LambdaPoint, q: &LambdaPoint) -> Result<u64, HomError> {
    lookup(ws, false, p, q)
}

/// Every sampled pair with nonzero `Ext¹` is a cover.
pub fn directedness_check(ws: &WeightSystem, pairs: &[(LambdaPoint, LambdaPoint)]) -> Result<bool, HomError> {
    let results: Vec<bool> = pairs
        .par_iter()
        .map(|(p, q)| -> Result<bool, HomError> {
            if q.degree - p.degree != 1 {
                return Ok(true);
            }
            Ok(ext_dim(ws, p, q)? == 0 || covers(ws, p, q))
        })
        .collect::<Result<_, _>>()?;
    Ok(results.into_iter().all(|ok| ok))
}

/// Largest `s − r` with a nonzero Ext between points of `Γ`.
pub fn gldim(gamma: &GammaSet) -> Result<u64, HomError> {
    if !gamma.is_interval_closed() {
        return Err(HomError::NotIntervalClosed);
    }
    let ws = gamma.face().weight_system();
    let points: Vec<&LambdaPoint> = gamma.points().iter().collect();
    let pairs: Vec<(&LambdaPoint, &LambdaPoint)> = points
        .iter()
        .flat_map(|p| points.iter().map(move |q| (*p, *q)))
        .filter(|(p, q)| q.degree >= p.degree)
        .collect();
    let degrees: Vec<u64> = pairs
        .par_iter()
        .map(|(p, q)| -> Result<u64, HomError> {
            let gap = (q.degree - p.degree) as u64;
            Ok(if ext_dim(ws, p, q)? != 0 { gap } else { 0 })
        })
        .collect::<Result<_, _>>()?;
    Ok(degrees.into_iter().max().unwrap_or(0))
}

/// `dim A_Ψ(ν, μ)^g = [Sym^{d_Ψ(μ,ν)} V ⊗ V(μ) : V(ν)]`.
pub fn apsi_dim(face: &PsiFace, nu: &Weight, mu: &Weight) -> Result<u64, HomError> {
    for w in [nu, mu] {
        if !w.is_dominant() {
            return Err(HomError::NotDominant(w.clone()));
        }
    }
    let d = dpsi(face, mu, nu)?.ok_or_else(|| HomError::Incomparable(mu.clone(), nu.clone()))?;
    let parts = face
        .weight_system()
        .power_tensor_decomposition(false, d as usize, mu)?;
    Ok(parts.get(nu).copied().unwrap_or(0))
}

/// Result of [`witness_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub k: u64,
    pub nu: Weight,
    /// `(k, dim Hom(∧^{N_Ψ} V ⊗ V(ν), V(ν + λ_Ψ)))` for every `k` where both weights were dominant.
    pub tried: Vec<(u64, u64)>,
}

/// Smallest `k ≤ max_k` such that `ν = η + 2kρ` and `ν + λ_Ψ` are regular
/// dominant and `Hom(∧^{N_Ψ} V ⊗ V(ν), V(ν + λ_Ψ))` is one-dimensional.
pub fn witness_search(face: &PsiFace, eta: &Weight, max_k: u64) -> Result<Witness, HomError> {
    if !eta.is_dominant() {
        return Err(HomError::NotDominant(eta.clone()));
    }
    let ws = face.weight_system();
    let two_rho = ws.root_system().rho().scale(2);
    let n = face.n_psi() as usize;
    let mut tried = Vec::new();
    for k in 0..=max_k {
        let nu = eta + &two_rho.scale(k as i64);
        let top = &nu + face.lambda_psi();
        if !nu.is_dominant() || !top.is_dominant() {
            continue;
        }
        let parts = ws.power_tensor_decomposition(true, n, &nu)?;
        let mult = parts.get(&top).copied().unwrap_or(0);
        tried.push((k, mult));
        if mult > 1 {
            return Err(HomError::MultiplicityBound { k, mult });
        }
        if mult == 1 && nu.is_regular_dominant() && top.is_regular_dominant() {
            return Ok(Witness { k, nu, tried });
        }
    }
    Err(HomError::WitnessNotFound(max_k))
}
