//! The orders `≤_Ψ` on weights and `⪯`, `⪯_Ψ` on `Λ = P⁺ × ℤ`, with finite
//! intervals, truncated downsets and interval-closedness.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facegeom::{PsiFace, WeightSystem};
use crate::rootsystem::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("Ψ has no face certificate")]
    MissingCertificate,
    #[error("{0} and {1} are not comparable under the face order")]
    Incomparable(LambdaPoint, LambdaPoint),
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("bad point {0:?}: {1}")]
    Parse(String, String),
}

/// A point `(λ, r)` of `Λ = P⁺ × ℤ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LambdaPoint {
    pub weight: Weight,
    pub degree: i64,
}

impl LambdaPoint {
    pub fn new(weight: Weight, degree: i64) -> Result<Self, PosetError> {
        if !weight.is_dominant() {
            return Err(PosetError::NotDominant(weight));
        }
        Ok(LambdaPoint { weight, degree })
    }

    /// Parse `"1,0@2"`; the degree defaults to 0 when `@` is absent.
    pub fn parse(s: &str) -> Result<Self, PosetError> {
        let bad = |e: String| PosetError::Parse(s.to_string(), e);
        let (w, r) = match s.split_once('@') {
            Some((w, r)) => (w, r.trim().parse::<i64>().map_err(|e| bad(e.to_string()))?),
            None => (s, 0),
        };
        LambdaPoint::new(Weight::parse(w).map_err(bad)?, r)
    }
}

impl fmt::Display for LambdaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.weight, self.degree)
    }
}

impl fmt::Debug for LambdaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite subset of `Λ` attached to a face, with its closedness flag.
#[derive(Clone, Debug)]
pub struct GammaSet {
    face: PsiFace,
    points: BTreeSet<LambdaPoint>,
    interval_closed: bool,
}

impl GammaSet {
    pub fn new(face: &PsiFace, points: BTreeSet<LambdaPoint>) -> Result<Self, PosetError> {
        let interval_closed = is_interval_closed(face, &points)?;
        Ok(GammaSet {
            face: face.clone(),
            points,
            interval_closed,
        })
    }

    pub fn face(&self) -> &PsiFace {
        &self.face
    }

    pub fn points(&self) -> &BTreeSet<LambdaPoint> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_interval_closed(&self) -> bool {
        self.interval_closed
    }
}

fn certificate(face: &PsiFace) -> Result<(), PosetError> {
    if face.is_face() {
        Ok(())
    } else {
        Err(PosetError::MissingCertificate)
    }
}

/// `d_Ψ(μ, ν)` when `ν − μ ∈ ℤ₊Ψ`, else `None`.
///
/// Every `Ψ`-decomposition of `ν − μ` has exactly `ξ(ν − μ)` terms, so the
/// membership search is a DP of that depth.
pub fn dpsi(face: &PsiFace, mu: &Weight, nu: &Weight) -> Result<Option<u64>, PosetError> {
    certificate(face)?;
    let diff = nu - mu;
    let level = face.evaluate(&diff).expect("certificate present");
    if !level.is_integer() || level.is_negative() {
        return Ok(None);
    }
    let Some(d) = level.to_integer().to_usize() else {
        return Ok(None);
    };
    Ok(face.psi_sum_layer(d).contains(&diff).then_some(d as u64))
}

/// `μ ≤_Ψ ν`.
pub fn leq_psi(face: &PsiFace, mu: &Weight, nu: &Weight) -> Result<bool, PosetError> {
    Ok(dpsi(face, mu, nu)?.is_some())
}

/// `q` covers `p`: one degree higher and weight difference in `wt(V)`.
pub fn covers(ws: &WeightSystem, p: &LambdaPoint, q: &LambdaPoint) -> bool {
    q.degree == p.degree + 1 && ws.contains(&(&q.weight - &p.weight))
}

/// `p ⪯ q`: `q.weight − p.weight` is a sum of exactly `q.degree − p.degree` weights of `V`.
pub fn preceq(ws: &WeightSystem, p: &LambdaPoint, q: &LambdaPoint) -> bool {
    let gap = q.degree - p.degree;
    gap >= 0 && ws.is_k_fold_sum(&(&q.weight - &p.weight), gap as usize)
}

/// `p ⪯_Ψ q`: `p.weight ≤_Ψ q.weight` with `d_Ψ` equal to the degree gap.
pub fn preceq_psi(face: &PsiFace, p: &LambdaPoint, q: &LambdaPoint) -> Result<bool, PosetError> {
    if q.degree < p.degree {
        certificate(face)?;
        return Ok(false);
    }
    Ok(dpsi(face, &p.weight, &q.weight)? == Some((q.degree - p.degree) as u64))
}

/// Dominant points between `p` and `q`, where consecutive-degree layers are
/// reachable through the given k-fold sum sets.
fn interval_between(
    p: &LambdaPoint,
    q: &LambdaPoint,
    layer: impl Fn(usize) -> std::sync::Arc<std::collections::HashSet<Weight>>,
) -> BTreeSet<LambdaPoint> {
    let gap = (q.degree - p.degree) as usize;
    let mut out = BTreeSet::new();
    for k in 0..=gap {
        let upper = layer(gap - k);
        for step in layer(k).iter() {
            let eta = &p.weight + step;
            if eta.is_dominant() && upper.contains(&(&q.weight - &eta)) {
                out.insert(LambdaPoint {
                    weight: eta,
                    degree: p.degree + k as i64,
                });
            }
        }
    }
    out
}

/// `[p, q]` under `⪯_Ψ`.
pub fn interval_psi(face: &PsiFace, p: &LambdaPoint, q: &LambdaPoint) -> Result<GammaSet, PosetError> {
    let points = interval_psi_points(face, p, q)?;
    Ok(GammaSet {
        face: face.clone(),
        points,
        interval_closed: true,
    })
}

fn interval_psi_points(
    face: &PsiFace,
    p: &LambdaPoint,
    q: &LambdaPoint,
) -> Result<BTreeSet<LambdaPoint>, PosetError> {
    if !preceq_psi(face, p, q)? {
        return Err(PosetError::Incomparable(p.clone(), q.clone()));
    }
    Ok(interval_between(p, q, |k| face.psi_sum_layer(k)))
}

/// `[p, q]` under `⪯`; empty when `p ⋠ q`.
pub fn interval_preceq(ws: &WeightSystem, p: &LambdaPoint, q: &LambdaPoint) -> BTreeSet<LambdaPoint> {
    if !preceq(ws, p, q) {
        return BTreeSet::new();
    }
    interval_between(p, q, |k| ws.sum_layer(k))
}

/// All `p ⪯_Ψ q` with `d_Ψ(p, q) ≤ max_depth`.
pub fn downset_psi(face: &PsiFace, q: &LambdaPoint, max_depth: usize) -> Result<GammaSet, PosetError> {
    certificate(face)?;
    let mut points = BTreeSet::new();
    for k in 0..=max_depth {
        for step in face.psi_sum_layer(k).iter() {
            let w = &q.weight - step;
            if w.is_dominant() {
                points.insert(LambdaPoint {
                    weight: w,
                    degree: q.degree - k as i64,
                });
            }
        }
    }
    GammaSet::new(face, points)
}

/// Every `⪯_Ψ`-interval between two members is contained in the set.
pub fn is_interval_closed(face: &PsiFace, gamma: &BTreeSet<LambdaPoint>) -> Result<bool, PosetError> {
    certificate(face)?;
    for p in gamma {
        for q in gamma {
            if p != q && preceq_psi(face, p, q)? {
                let interval = interval_psi_points(face, p, q)?;
                if !interval.is_subset(gamma) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether the `⪯_Ψ`- and `⪯`-intervals between `p` and `q` agree.
pub fn interval_coincidence(face: &PsiFace, p: &LambdaPoint, q: &LambdaPoint) -> Result<bool, PosetError> {
    let refined = interval_psi_points(face, p, q)?;
    Ok(refined == interval_preceq(face.weight_system(), p, q))
}
