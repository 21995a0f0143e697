//! Hilbert matrices of the truncated algebra `B(Γ)` and of its Ext algebra,
//! the numerical Koszulity identity `H(E(B), −t)·H(B, t) = I`, and the JSON
//! report built on top of them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::ModuleSpec;
use crate::facegeom::{PsiFace, WeightSystem};
use crate::homdims::{ext_dim, gldim, proj_mult, witness_search, HomError, Witness};
use crate::poly::{Poly, PolyMatrix};
use crate::rootsystem::Weight;
use crate::weightposet::{interval_psi, preceq_psi, GammaSet, LambdaPoint, PosetError};

/// Version of the serialized [`KoszulReport`].
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("Γ is not interval-closed")]
    NotIntervalClosed,
    #[error("Ψ does not lie on a proper face")]
    NotRigid,
    #[error("Γ is empty")]
    EmptyGamma,
}

/// Square polynomial matrix indexed by a linear extension of `⪯_Ψ` on `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertMatrix {
    pub index: Vec<LambdaPoint>,
    pub matrix: PolyMatrix,
}

/// `Γ` ordered by degree, then `⟨ρ, λ⟩`, then lexicographically.
pub fn linear_extension(face: &PsiFace, points: &BTreeSet<LambdaPoint>) -> Vec<LambdaPoint> {
    let rs = face.root_system();
    let mut index: Vec<LambdaPoint> = points.iter().cloned().collect();
    index.sort_by_cached_key(|p| (p.degree, rs.rho_pairing(&p.weight), p.weight.clone()));
    index
}

fn check_gamma(gamma: &GammaSet) -> Result<(), KoszulError> {
    if !gamma.face().is_face() {
        return Err(KoszulError::NotRigid);
    }
    if gamma.is_empty() {
        return Err(KoszulError::EmptyGamma);
    }
    if !gamma.is_interval_closed() {
        return Err(KoszulError::NotIntervalClosed);
    }
    Ok(())
}

/// Builds the matrix with entry `(i, j)` given by `entry(row, col)` for `i > j`
/// and `1` on the diagonal.
fn assemble<F>(face: &PsiFace, gamma: &GammaSet, entry: F) -> Result<HilbertMatrix, KoszulError>
where
    F: Fn(&LambdaPoint, &LambdaPoint) -> Result<Poly, KoszulError> + Sync,
{
    check_gamma(gamma)?;
    let index = linear_extension(face, gamma.points());
    let n = index.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let values: Vec<Poly> = cells
        .par_iter()
        .map(|&(i, j)| -> Result<Poly, KoszulError> {
            if i == j {
                return Ok(Poly::one());
            }
            let (row, col) = (&index[i], &index[j]);
            if !preceq_psi(face, col, row)? {
                return Ok(Poly::zero());
            }
            entry(row, col)
        })
        .collect::<Result<_, _>>()?;
    let rows = values.chunks(n.max(1)).take(n).map(|r| r.to_vec()).collect();
    Ok(HilbertMatrix {
        index,
        matrix: PolyMatrix::from_rows(rows),
    })
}

/// `H(B, t)`: row `(ξ, l)`, column `(ν′, s′)` holds `t^{l−s′}·[P(ν′, s′) : V(ξ, l)]`.
pub fn hilbert_b(face: &PsiFace, gamma: &GammaSet) -> Result<HilbertMatrix, KoszulError> {
    let ws = face.weight_system();
    assemble(face, gamma, |row, col| {
        let m = proj_mult(ws, col, row)?;
        Ok(Poly::monomial(m, (row.degree - col.degree) as usize))
    })
}

/// `H(E(B), −t)`: row `(ν, s)`, column `(ξ, l)` holds `(−t)^{s−l}·dim Ext^{s−l}(V(ξ, l), V(ν, s))`.
pub fn hilbert_e_neg(face: &PsiFace, gamma: &GammaSet) -> Result<HilbertMatrix, KoszulError> {
    let ws = face.weight_system();
    assemble(face, gamma, |row, col| {
        let gap = (row.degree - col.degree) as usize;
        let e = BigInt::from(ext_dim(ws, col, row)?);
        let c = if gap.is_multiple_of(2) { e } else { -e };
        Ok(Poly::monomial(c, gap))
    })
}

/// Outcome of the numerical Koszulity identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KoszulVerdict {
    Pass,
    /// Entry of `H(E, −t)·H(B, t) − I` that is nonzero.
    Fail {
        row: LambdaPoint,
        col: LambdaPoint,
        residual: Poly,
    },
}

impl KoszulVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, KoszulVerdict::Pass)
    }
}

/// Both Hilbert matrices and the verdict on their product.
#[derive(Clone, Debug)]
pub struct KoszulCheck {
    pub b: HilbertMatrix,
    pub e_neg: HilbertMatrix,
    pub product: PolyMatrix,
    pub verdict: KoszulVerdict,
}

pub fn verify_koszul_numerical(face: &PsiFace, gamma: &GammaSet) -> Result<KoszulCheck, KoszulError> {
    let b = hilbert_b(face, gamma)?;
    let e_neg = hilbert_e_neg(face, gamma)?;
    let product = e_neg.matrix.mul_row_major(&b.matrix);
    let verdict = match product.identity_defect() {
        None => KoszulVerdict::Pass,
        Some((i, j, residual)) => KoszulVerdict::Fail {
            row: b.index[i].clone(),
            col: b.index[j].clone(),
            residual,
        },
    };
    Ok(KoszulCheck {
        b,
        e_neg,
        product,
        verdict,
    })
}

/// A polynomial coefficient: a JSON integer when it fits in `i64`, a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Big(String),
}

impl Coeff {
    fn from_bigint(c: &BigInt) -> Coeff {
        match c.to_i64() {
            Some(v) => Coeff::Int(v),
            None => Coeff::Big(c.to_string()),
        }
    }

    fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            Coeff::Int(v) => Ok(BigInt::from(*v)),
            Coeff::Big(s) => s.parse().map_err(|_| format!("bad coefficient {s:?}")),
        }
    }
}

fn poly_to_json(p: &Poly) -> Vec<Coeff> {
    p.coeffs().iter().map(Coeff::from_bigint).collect()
}

fn poly_from_json(c: &[Coeff]) -> Result<Poly, String> {
    let coeffs = c.iter().map(Coeff::to_bigint).collect::<Result<Vec<_>, _>>()?;
    let p = Poly::from_coeffs(coeffs);
    if p.coeffs().len() != c.len() {
        return Err("coefficient list has trailing zeros".into());
    }
    Ok(p)
}

fn matrix_to_json(m: &PolyMatrix) -> Vec<Vec<Vec<Coeff>>> {
    m.rows().iter().map(|r| r.iter().map(poly_to_json).collect()).collect()
}

fn matrix_from_json(m: &[Vec<Vec<Coeff>>], n: usize) -> Result<PolyMatrix, String> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(format!("matrix is not {n}x{n}"));
    }
    let rows = m
        .iter()
        .map(|r| r.iter().map(|c| poly_from_json(c)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMatrix::from_rows(rows))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    /// `"PASS"` or `"FAIL"`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<LambdaPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<LambdaPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<Coeff>>,
}

impl VerdictRecord {
    fn from_verdict(v: &KoszulVerdict) -> Self {
        match v {
            KoszulVerdict::Pass => VerdictRecord {
                status: "PASS".into(),
                row: None,
                col: None,
                residual: None,
            },
            KoszulVerdict::Fail { row, col, residual } => VerdictRecord {
                status: "FAIL".into(),
                row: Some(row.clone()),
                col: Some(col.clone()),
                residual: Some(poly_to_json(residual)),
            },
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == "PASS"
    }
}

/// The top-degree interval `[(μ, r), (μ + λ_Ψ, r + N_Ψ)]_Ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub search: Witness,
    pub bottom: LambdaPoint,
    pub top: LambdaPoint,
    pub size: usize,
    pub gldim: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub schema_version: u32,
    pub root_system: String,
    pub cartan: Vec<Vec<i64>>,
    pub module: Vec<(Weight, u64)>,
    pub psi: Vec<Weight>,
    /// The face functional, as `"p/q"` strings in dual coordinates.
    pub certificate: Vec<String>,
    pub lambda_psi: Weight,
    pub n_psi: u64,
    pub index: Vec<LambdaPoint>,
    pub gldim: u64,
    pub verdict: VerdictRecord,
    pub hilbert_b: Vec<Vec<Vec<Coeff>>>,
    pub hilbert_e_neg: Vec<Vec<Vec<Coeff>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
}

/// Witness interval anchored at `r = 0`, with `μ` from [`witness_search`] starting at `eta`.
pub fn witness_interval(face: &PsiFace, eta: &Weight, max_k: u64) -> Result<(WitnessRecord, GammaSet), KoszulError> {
    if !face.is_face() {
        return Err(KoszulError::NotRigid);
    }
    let search = witness_search(face, eta, max_k)?;
    let bottom = LambdaPoint::new(search.nu.clone(), 0)?;
    let top = LambdaPoint::new(&search.nu + face.lambda_psi(), face.n_psi() as i64)?;
    let gamma = interval_psi(face, &bottom, &top)?;
    let dim = gldim(&gamma)?;
    Ok((
        WitnessRecord {
            search,
            bottom,
            top,
            size: gamma.len(),
            gldim: dim,
        },
        gamma,
    ))
}

/// Full report on `Γ`; with `witness_max_k`, also the witness interval
/// searched from the weight of the first point of `Γ`.
pub fn full_report(face: &PsiFace, gamma: &GammaSet, witness_max_k: Option<u64>) -> Result<KoszulReport, KoszulError> {
    let check = verify_koszul_numerical(face, gamma)?;
    let dim = gldim(gamma)?;
    let witness = match witness_max_k {
        Some(max_k) => Some(witness_interval(face, &check.b.index[0].weight, max_k)?.0),
        None => None,
    };
    let ws: &WeightSystem = face.weight_system();
    let datum = face.root_system().datum();
    let ModuleSpec { summands } = ws.spec().clone();
    Ok(KoszulReport {
        schema_version: REPORT_SCHEMA_VERSION,
        root_system: datum.display_name(),
        cartan: datum.cartan.clone(),
        module: summands,
        psi: face.psi().to_vec(),
        certificate: face
            .certificate()
            .expect("checked above")
            .iter()
            .map(|x| x.to_string())
            .collect(),
        lambda_psi: face.lambda_psi().clone(),
        n_psi: face.n_psi(),
        index: check.b.index.clone(),
        gldim: dim,
        verdict: VerdictRecord::from_verdict(&check.verdict),
        hilbert_b: matrix_to_json(&check.b.matrix),
        hilbert_e_neg: matrix_to_json(&check.e_neg.matrix),
        witness,
    })
}

/// Structural checks on a report, independent of the library that produced it.
pub fn validate_report(report: &KoszulReport) -> Result<(), String> {
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(format!("unsupported schema version {}", report.schema_version));
    }
    let n = report.index.len();
    if n == 0 {
        return Err("empty index".into());
    }
    let rank = report.cartan.len();
    if report.certificate.len() != rank || report.lambda_psi.rank() != rank {
        return Err("rank mismatch".into());
    }
    for w in report.index.windows(2) {
        if w[0].degree > w[1].degree {
            return Err("index is not sorted by degree".into());
        }
    }
    if report.index.iter().collect::<BTreeSet<_>>().len() != n {
        return Err("index has duplicates".into());
    }
    let b = matrix_from_json(&report.hilbert_b, n)?;
    let e = matrix_from_json(&report.hilbert_e_neg, n)?;
    if !b.is_lower_unitriangular() || !e.is_lower_unitriangular() {
        return Err("Hilbert matrices are not unitriangular".into());
    }
    for i in 0..n {
        for j in 0..i {
            let gap = report.index[i].degree - report.index[j].degree;
            for (m, name) in [(&b, "B"), (&e, "E")] {
                let p = m.get(i, j);
                let ok = p.coeffs().iter().enumerate().all(|(k, c)| {
                    c.sign() == num_bigint::Sign::NoSign || k as i64 == gap
                });
                if !ok {
                    return Err(format!("H({name}) entry ({i},{j}) has the wrong degree"));
                }
            }
            if !b.get(i, j).has_nonnegative_coeffs() {
                return Err(format!("H(B) entry ({i},{j}) has a negative coefficient"));
            }
            if !e.get(i, j).negate_variable().has_nonnegative_coeffs() {
                return Err(format!("H(E) entry ({i},{j}) has the wrong sign"));
            }
        }
    }
    let pass = e.mul_row_major(&b).is_identity();
    match report.verdict.status.as_str() {
        "PASS" if pass => {}
        "FAIL" if !pass => {}
        "PASS" | "FAIL" => return Err("verdict disagrees with the matrices".into()),
        s => return Err(format!("unknown verdict {s:?}")),
    }
    if report.gldim > report.n_psi {
        return Err(format!("gldim {} exceeds N_Ψ = {}", report.gldim, report.n_psi));
    }
    if let Some(w) = &report.witness {
        if w.gldim != report.n_psi {
            return Err(format!("witness gldim {} differs from N_Ψ = {}", w.gldim, report.n_psi));
        }
        if w.top.degree - w.bottom.degree != report.n_psi as i64 {
            return Err("witness interval has the wrong height".into());
        }
    }
    Ok(())
}

/// Parse a serialized report and validate it.
pub fn parse_report(json: &str) -> Result<KoszulReport, String> {
    let report: KoszulReport = serde_json::from_str(json).map_err(|e| e.to_string())?;
    validate_report(&report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facegeom::{lies_on_proper_face, weight_system};
    use crate::rootsystem::RootSystem;
    use std::sync::Arc;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    fn pt(c: &[i64], r: i64) -> LambdaPoint {
        LambdaPoint::new(w(c), r).unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn face(letter: &str, rank: usize, top: &[i64], psi: &[&[i64]]) -> PsiFace {
        let rs = RootSystem::of_type(letter, rank).unwrap();
        let ws: Arc<WeightSystem> = weight_system(&rs, &ModuleSpec::irreducible(w(top))).unwrap();
        let psi: Vec<Weight> = psi.iter().map(|c| w(c)).collect();
        lies_on_proper_face(&ws, &psi).unwrap()
    }

    #[test]
    fn sl2_three_by_three() {
        let f = face("A", 1, &[2], &[&[2]]);
        let g = interval_psi(&f, &pt(&[0], 0), &pt(&[4], 2)).unwrap();
        let check = verify_koszul_numerical(&f, &g).unwrap();
        assert_eq!(check.b.index, vec![pt(&[0], 0), pt(&[2], 1), pt(&[4], 2)]);
        let b = &check.b.matrix;
        assert_eq!((b.get(1, 0), b.get(2, 1), b.get(2, 0)), (&p(&[0, 1]), &p(&[0, 1]), &p(&[0, 0, 1])));
        let e = &check.e_neg.matrix;
        assert_eq!((e.get(1, 0), e.get(2, 1), e.get(2, 0)), (&p(&[0, -1]), &p(&[0, -1]), &Poly::zero()));
        assert!(b.is_lower_unitriangular() && e.is_lower_unitriangular());
        assert_eq!(check.verdict, KoszulVerdict::Pass);
        assert_eq!(check.product, e.mul_column_major(b));
    }

    #[test]
    fn singleton_passes() {
        let f = face("A", 1, &[2], &[&[2]]);
        let g = interval_psi(&f, &pt(&[3], 5), &pt(&[3], 5)).unwrap();
        let check = verify_koszul_numerical(&f, &g).unwrap();
        assert_eq!(check.b.matrix, PolyMatrix::identity(1));
        assert!(check.verdict.is_pass());
    }

    #[test]
    fn a2_edge_interval_passes() {
        let f = face("A", 2, &[1, 1], &[&[2, -1], &[1, 1]]);
        let g = interval_psi(&f, &pt(&[0, 0], 0), &pt(&[3, 0], 2)).unwrap();
        assert!(verify_koszul_numerical(&f, &g).unwrap().verdict.is_pass());
    }

    #[test]
    fn preconditions_are_distinct_from_fail() {
        let f = face("A", 1, &[2], &[&[2]]);
        let open: BTreeSet<_> = [pt(&[0], 0), pt(&[4], 2)].into_iter().collect();
        let open = GammaSet::new(&f, open).unwrap();
        assert_eq!(verify_koszul_numerical(&f, &open).unwrap_err(), KoszulError::NotIntervalClosed);
    }

    #[test]
    fn reports_round_trip_and_validate() {
        let f = face("A", 2, &[1, 1], &[&[2, -1], &[1, 1]]);
        let g = interval_psi(&f, &pt(&[0, 0], 0), &pt(&[3, 0], 2)).unwrap();
        let report = full_report(&f, &g, Some(6)).unwrap();
        assert_eq!(report.witness.as_ref().unwrap().gldim, 2);
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(parse_report(&json).unwrap(), report);

        let mut bad = report.clone();
        bad.verdict.status = "FAIL".into();
        assert!(validate_report(&bad).is_err());
        let mut bad = report;
        bad.hilbert_b[1][0] = vec![Coeff::Int(0), Coeff::Int(-1)];
        assert!(validate_report(&bad).is_err());
    }

    #[test]
    fn big_coefficients_serialize_as_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * BigInt::from(4);
        let c = poly_to_json(&Poly::monomial(big.clone(), 0));
        assert_eq!(c, vec![Coeff::Big(big.to_string())]);
        assert_eq!(poly_from_json(&c).unwrap(), Poly::monomial(big, 0));
    }

    #[test]
    fn sl2_witness_interval() {
        let f = face("A", 1, &[2], &[&[2]]);
        let (rec, g) = witness_interval(&f, &w(&[0]), 6).unwrap();
        assert_eq!(rec.gldim, 1);
        assert_eq!(rec.bottom, pt(&[2], 0));
        assert!(verify_koszul_numerical(&f, &g).unwrap().verdict.is_pass());
    }
}
