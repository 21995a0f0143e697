//! Root systems of finite type built from Cartan data.
//!
//! Weights are always stored in the fundamental-weight basis: coordinate `i`
//! of a weight `λ` is the pairing `λ(h_i)`. The simple root `α_j` is then
//! column `j` of the Cartan matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the number of positive roots accepted by the closure loop.
/// E8 has 120; anything beyond this means the input is not of finite type.
const MAX_POSITIVE_ROOTS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("cartan matrix must be {0}x{0}")]
    Shape(usize),
    #[error("diagonal entry a[{0}][{0}] = {1}, expected 2")]
    Diagonal(usize, i64),
    #[error("off-diagonal entry a[{0}][{1}] = {2} is positive")]
    PositiveOffDiagonal(usize, usize, i64),
    #[error("a[{0}][{1}] and a[{1}][{0}] must vanish together")]
    ZeroPattern(usize, usize),
    #[error("matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("symmetrized matrix is not positive definite (leading minor {0} is {1})")]
    NotFiniteType(usize, String),
    #[error("unknown Cartan type {0}{1}")]
    UnknownType(String, usize),
    #[error("simple reflection index {0} out of range for rank {1}")]
    IndexOutOfRange(usize, usize),
    #[error("weight has {0} coordinates, root system has rank {1}")]
    RankMismatch(usize, usize),
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("weight coordinate overflow")]
    Overflow,
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight `ω_i` (zero-based `i`).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        Weight(c)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Dominant with every coordinate strictly positive.
    pub fn is_regular_dominant(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn checked_add(&self, other: &Weight) -> Result<Weight, RootSystemError> {
        self.zip_checked(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Weight) -> Result<Weight, RootSystemError> {
        self.zip_checked(other, i64::checked_sub)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Weight, RootSystemError> {
        self.0
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(RootSystemError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }

    fn zip_checked(
        &self,
        other: &Weight,
        op: fn(i64, i64) -> Option<i64>,
    ) -> Result<Weight, RootSystemError> {
        if self.0.len() != other.0.len() {
            return Err(RootSystemError::RankMismatch(other.0.len(), self.0.len()));
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| op(a, b).ok_or(RootSystemError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }

    /// `self * k`; panics on overflow rather than wrapping.
    pub fn scale(&self, k: i64) -> Weight {
        self.checked_scale(k).expect("weight coordinate overflow")
    }

    /// Parse comma-separated coordinates such as `"1,-2"`.
    pub fn parse(s: &str) -> Result<Weight, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty weight".into());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("bad coordinate {t:?} in weight {s:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.checked_add(rhs).expect("weight coordinate overflow")
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self.checked_sub(rhs).expect("weight coordinate overflow")
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

/// Generalized Cartan matrix of finite type together with its symmetrizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanDatum {
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: Vec<i64>,
    /// Optional series label such as `"A2"`; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CartanDatum {
    /// Validate a Cartan matrix and an explicit symmetrizer.
    pub fn new(cartan: Vec<Vec<i64>>, symmetrizer: Vec<i64>) -> Result<Self, RootSystemError> {
        let datum = CartanDatum {
            rank: cartan.len(),
            cartan,
            symmetrizer,
            label: None,
        };
        datum.validate()?;
        Ok(datum)
    }

    /// Validate a Cartan matrix and derive the smallest positive integer symmetrizer.
    pub fn from_matrix(cartan: Vec<Vec<i64>>) -> Result<Self, RootSystemError> {
        let rank = cartan.len();
        check_shape(&cartan)?;
        let symmetrizer = derive_symmetrizer(&cartan)?;
        let datum = CartanDatum {
            rank,
            cartan,
            symmetrizer,
            label: None,
        };
        datum.validate()?;
        Ok(datum)
    }

    /// Built-in Cartan matrices in Bourbaki numbering.
    pub fn of_type(letter: &str, rank: usize) -> Result<Self, RootSystemError> {
        let upper = letter.trim().to_ascii_uppercase();
        let unknown = || RootSystemError::UnknownType(upper.clone(), rank);
        if rank == 0 {
            return Err(RootSystemError::ZeroRank);
        }
        let mut a = vec![vec![0i64; rank]; rank];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |a: &mut Vec<Vec<i64>>, n: usize| {
            for i in 0..n.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        };
        match upper.as_str() {
            "A" => chain(&mut a, rank),
            "B" if rank >= 2 => {
                chain(&mut a, rank);
                a[rank - 1][rank - 2] = -2;
            }
            "C" if rank >= 2 => {
                chain(&mut a, rank);
                a[rank - 2][rank - 1] = -2;
            }
            "D" if rank >= 3 => {
                chain(&mut a, rank - 1);
                a[rank - 3][rank - 1] = -1;
                a[rank - 1][rank - 3] = -1;
            }
            "E" if (6..=8).contains(&rank) => {
                // 1-3-4-5-6-7-8 with 2 attached to 4
                let edges = [(0usize, 2usize), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
                for &(i, j) in edges.iter().filter(|&&(i, j)| i < rank && j < rank) {
                    a[i][j] = -1;
                    a[j][i] = -1;
                }
            }
            "F" if rank == 4 => {
                chain(&mut a, 4);
                a[2][1] = -2;
            }
            "G" if rank == 2 => {
                a[0][1] = -3;
                a[1][0] = -1;
            }
            _ => return Err(unknown()),
        }
        let mut datum = CartanDatum::from_matrix(a)?;
        datum.label = Some(format!("{upper}{rank}"));
        Ok(datum)
    }

    pub fn validate(&self) -> Result<(), RootSystemError> {
        if self.rank == 0 {
            return Err(RootSystemError::ZeroRank);
        }
        check_shape(&self.cartan)?;
        if self.cartan.len() != self.rank {
            return Err(RootSystemError::Shape(self.rank));
        }
        if self.symmetrizer.len() != self.rank || self.symmetrizer.iter().any(|&d| d <= 0) {
            return Err(RootSystemError::NotSymmetrizable(
                "symmetrizer must have one positive entry per node".into(),
            ));
        }
        let a = &self.cartan;
        let d = &self.symmetrizer;
        for i in 0..self.rank {
            for j in 0..self.rank {
                if i != j && d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(RootSystemError::NotSymmetrizable(format!(
                        "d[{i}]*a[{i}][{j}] = {} but d[{j}]*a[{j}][{i}] = {}",
                        d[i] * a[i][j],
                        d[j] * a[j][i]
                    )));
                }
            }
        }
        // Sylvester's criterion on D·A.
        let sym: Vec<Vec<BigRational>> = (0..self.rank)
            .map(|i| (0..self.rank).map(|j| rat(d[i] * a[i][j])).collect())
            .collect();
        for k in 1..=self.rank {
            let minor: Vec<Vec<BigRational>> =
                sym[..k].iter().map(|row| row[..k].to_vec()).collect();
            let det = determinant(minor);
            if !det.is_positive() {
                return Err(RootSystemError::NotFiniteType(k, det.to_string()));
            }
        }
        Ok(())
    }

    /// Canonical text key, stable across runs (used by the character cache).
    pub fn canonical_key(&self) -> String {
        let rows: Vec<String> = self
            .cartan
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        let sym: Vec<String> = self.symmetrizer.iter().map(|c| c.to_string()).collect();
        format!("cartan=[{}];d=[{}]", rows.join(";"), sym.join(","))
    }

    pub fn display_name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.canonical_key())
    }
}

fn check_shape(a: &[Vec<i64>]) -> Result<(), RootSystemError> {
    let n = a.len();
    if n == 0 {
        return Err(RootSystemError::ZeroRank);
    }
    for row in a {
        if row.len() != n {
            return Err(RootSystemError::Shape(n));
        }
    }
    for i in 0..n {
        if a[i][i] != 2 {
            return Err(RootSystemError::Diagonal(i, a[i][i]));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                return Err(RootSystemError::PositiveOffDiagonal(i, j, a[i][j]));
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(RootSystemError::ZeroPattern(i, j));
            }
        }
    }
    Ok(())
}

/// Propagate `d_j = d_i a_ij / a_ji` along the Dynkin graph, then clear denominators.
fn derive_symmetrizer(a: &[Vec<i64>]) -> Result<Vec<i64>, RootSystemError> {
    let n = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(BigRational::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                let dj = &di * rat(a[i][j]) / rat(a[j][i]);
                match &d[j] {
                    Some(existing) if *existing != dj => {
                        return Err(RootSystemError::NotSymmetrizable(format!(
                            "inconsistent symmetrizer around node {j}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(Option::unwrap).collect();
    let lcm = d
        .iter()
        .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
    let ints: Vec<BigInt> = d.iter().map(|q| (q * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
    ints.iter()
        .map(|x| {
            i64::try_from(x / &g).map_err(|_| {
                RootSystemError::NotSymmetrizable("symmetrizer does not fit in 64 bits".into())
            })
        })
        .collect()
}

pub(crate) fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            let f = &m[r][col] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

fn invert(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .expect("matrix is singular");
        aug.swap(p, col);
        let pivot = aug[col][col].clone();
        for c in 0..2 * n {
            aug[col][c] = &aug[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for c in 0..2 * n {
                let v = &f * &aug[col][c];
                aug[r][c] -= v;
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// A root system of finite type with its Weyl-invariant form.
pub struct RootSystem {
    datum: CartanDatum,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    /// Root-basis coordinates of each positive root, same order as `positive_roots`.
    positive_root_heights: Vec<Vec<i64>>,
    rho: Weight,
    /// Gram matrix of the form in the fundamental-weight basis.
    form: Vec<Vec<BigRational>>,
    cartan_inverse: Vec<Vec<BigRational>>,
    /// `form` times a common denominator, for integer-only inner loops.
    form_scaled: Vec<Vec<i64>>,
    irreducibles: Mutex<HashMap<Weight, Arc<BTreeMap<Weight, i64>>>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootSystem")
            .field("datum", &self.datum)
            .field("positive_roots", &self.positive_roots)
            .finish()
    }
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.datum.cartan == other.datum.cartan && self.datum.symmetrizer == other.datum.symmetrizer
    }
}

impl Eq for RootSystem {}

impl RootSystem {
    /// Build the positive roots by closing the simple roots under simple reflections.
    pub fn build(datum: CartanDatum) -> Result<Arc<RootSystem>, RootSystemError> {
        datum.validate()?;
        let n = datum.rank;
        let a = &datum.cartan;
        let simple_roots: Vec<Weight> =
            (0..n).map(|j| Weight((0..n).map(|i| a[i][j]).collect())).collect();

        let mut seen: BTreeMap<Vec<i64>, Weight> = BTreeMap::new();
        let mut queue: VecDeque<(Vec<i64>, Weight)> = VecDeque::new();
        for (j, root) in simple_roots.iter().enumerate() {
            let mut h = vec![0; n];
            h[j] = 1;
            seen.insert(h.clone(), root.clone());
            queue.push_back((h, root.clone()));
        }
        while let Some((h, beta)) = queue.pop_front() {
            for i in 0..n {
                let c = beta.0[i];
                if c == 0 {
                    continue;
                }
                let mut h2 = h.clone();
                h2[i] -= c;
                if h2.iter().any(|&x| x < 0) {
                    continue;
                }
                if !seen.contains_key(&h2) {
                    let image = &beta - &simple_roots[i].scale(c);
                    seen.insert(h2.clone(), image.clone());
                    queue.push_back((h2, image));
                    if seen.len() > MAX_POSITIVE_ROOTS {
                        return Err(RootSystemError::NotFiniteType(0, "root closure diverged".into()));
                    }
                }
            }
        }
        // Order by height, then by root coordinates.
        let mut roots: Vec<(Vec<i64>, Weight)> = seen.into_iter().collect();
        roots.sort_by(|(h1, _), (h2, _)| {
            h1.iter().sum::<i64>().cmp(&h2.iter().sum::<i64>()).then_with(|| h2.cmp(h1))
        });
        let (positive_root_heights, positive_roots): (Vec<_>, Vec<_>) = roots.into_iter().unzip();

        let d = &datum.symmetrizer;
        let amat: Vec<Vec<BigRational>> =
            a.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
        let cartan_inverse = invert(&amat);
        // <ω_i, ω_j> = d_i (A^{-1})_{ij}
        let form: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| &cartan_inverse[i][j] * rat(d[i])).collect())
            .collect();

        let denom = form
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
        let form_scaled: Vec<Vec<i64>> = form
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| i64::try_from((q * &denom).to_integer()).expect("form entry overflow"))
                    .collect()
            })
            .collect();

        Ok(Arc::new(RootSystem {
            rho: Weight(vec![1; n]),
            form_scaled,
            datum,
            simple_roots,
            positive_roots,
            positive_root_heights,
            form,
            cartan_inverse,
            irreducibles: Mutex::new(HashMap::new()),
        }))
    }

    pub fn of_type(letter: &str, rank: usize) -> Result<Arc<RootSystem>, RootSystemError> {
        RootSystem::build(CartanDatum::of_type(letter, rank)?)
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn form(&self) -> &[Vec<BigRational>] {
        &self.form
    }

    pub fn check_rank(&self, w: &Weight) -> Result<(), RootSystemError> {
        if w.rank() != self.rank() {
            return Err(RootSystemError::RankMismatch(w.rank(), self.rank()));
        }
        Ok(())
    }

    /// The Weyl-invariant form `<a, b>`.
    pub fn pairing(&self, a: &Weight, b: &Weight) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                if bj != 0 {
                    acc += &self.form[i][j] * rat(ai * bj);
                }
            }
        }
        acc
    }

    /// The form scaled by a fixed positive constant; only ratios and signs are meaningful.
    pub fn scaled_pairing(&self, a: &Weight, b: &Weight) -> i128 {
        let mut acc: i128 = 0;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.form_scaled[i];
            for (j, &bj) in b.0.iter().enumerate() {
                acc += row[j] as i128 * ai as i128 * bj as i128;
            }
        }
        acc
    }

    /// Scaled `<ρ, μ>`; orders weights the same way as [`Self::rho_pairing`].
    pub fn rho_key(&self, mu: &Weight) -> i128 {
        self.scaled_pairing(&self.rho, mu)
    }

    /// `<ρ, μ>`, the height-like functional used to order weights.
    pub fn rho_pairing(&self, mu: &Weight) -> BigRational {
        self.pairing(&self.rho, mu)
    }

    /// Coordinates of `λ` in the simple-root basis (rational in general).
    pub fn root_coords(&self, lam: &Weight) -> Vec<BigRational> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n).fold(BigRational::zero(), |acc, j| {
                    acc + &self.cartan_inverse[i][j] * rat(lam.0[j])
                })
            })
            .collect()
    }

    /// Whether `λ` lies in `Q⁺`, the nonnegative integer span of the simple roots.
    pub fn in_positive_root_cone(&self, lam: &Weight) -> bool {
        self.root_coords(lam)
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Root-basis coordinates of the positive roots, aligned with [`Self::positive_roots`].
    pub fn positive_root_coords(&self) -> &[Vec<i64>] {
        &self.positive_root_heights
    }

    /// `s_i(λ) = λ − λ(h_i)·α_i`, zero-based `i`.
    pub fn simple_reflection(&self, i: usize, lam: &Weight) -> Result<Weight, RootSystemError> {
        if i >= self.rank() {
            return Err(RootSystemError::IndexOutOfRange(i, self.rank()));
        }
        self.check_rank(lam)?;
        let c = lam.0[i];
        self.simple_roots[i]
            .checked_scale(c)
            .and_then(|shift| lam.checked_sub(&shift))
    }

    pub(crate) fn reflect(&self, i: usize, lam: &Weight) -> Weight {
        self.simple_reflection(i, lam).expect("weight coordinate overflow")
    }

    /// Move `λ` into the dominant chamber by simple reflections.
    ///
    /// Returns the dominant representative, the sign `(−1)^ℓ(w)` of the
    /// reflections used, and whether the result lies on a chamber wall.
    pub fn to_dominant_signed(&self, lam: &Weight) -> (Weight, i64, bool) {
        let mut w = lam.clone();
        let mut sign = 1;
        while let Some(i) = w.0.iter().position(|&c| c < 0) {
            w = self.reflect(i, &w);
            sign = -sign;
        }
        let singular = w.0.contains(&0);
        (w, sign, singular)
    }

    pub fn dominant_representative(&self, lam: &Weight) -> Weight {
        self.to_dominant_signed(lam).0
    }

    /// Weyl orbit of `λ`, sorted.
    pub fn orbit(&self, lam: &Weight) -> Vec<Weight> {
        let mut seen = BTreeSet::from([lam.clone()]);
        let mut queue = VecDeque::from([lam.clone()]);
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                if w.0[i] == 0 {
                    continue;
                }
                let image = self.reflect(i, &w);
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// `dim V(λ) = Π_{α>0} <λ+ρ, α> / <ρ, α>`.
    pub fn weyl_dim(&self, lam: &Weight) -> Result<u64, RootSystemError> {
        self.check_rank(lam)?;
        if !lam.is_dominant() {
            return Err(RootSystemError::NotDominant(lam.clone()));
        }
        let shifted = lam.checked_add(&self.rho)?;
        let mut num = BigRational::one();
        for alpha in &self.positive_roots {
            num *= self.pairing(&shifted, alpha) / self.pairing(&self.rho, alpha);
        }
        assert!(num.is_integer(), "Weyl dimension is not an integer");
        u64::try_from(num.to_integer()).map_err(|_| RootSystemError::Overflow)
    }

    pub(crate) fn irreducible_memo(&self) -> &Mutex<HashMap<Weight, Arc<BTreeMap<Weight, i64>>>> {
        &self.irreducibles
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn classical_positive_root_counts() {
        let cases = [
            ("A", 1, 1),
            ("A", 2, 3),
            ("A", 3, 6),
            ("B", 2, 4),
            ("C", 2, 4),
            ("B", 3, 9),
            ("C", 3, 9),
            ("D", 4, 12),
            ("G", 2, 6),
            ("F", 4, 24),
            ("E", 6, 36),
            ("E", 7, 63),
            ("E", 8, 120),
        ];
        for (letter, rank, count) in cases {
            let rs = RootSystem::of_type(letter, rank).unwrap();
            assert_eq!(rs.positive_roots().len(), count, "{letter}{rank}");
        }
    }

    #[test]
    fn a1_root_is_twice_fundamental() {
        let rs = RootSystem::of_type("A", 1).unwrap();
        assert_eq!(rs.positive_roots(), &[w(&[2])]);
    }

    #[test]
    fn symmetrizers_are_derived() {
        assert_eq!(CartanDatum::of_type("B", 2).unwrap().symmetrizer, vec![2, 1]);
        assert_eq!(CartanDatum::of_type("C", 2).unwrap().symmetrizer, vec![1, 2]);
        assert_eq!(CartanDatum::of_type("G", 2).unwrap().symmetrizer, vec![1, 3]);
        assert_eq!(CartanDatum::of_type("F", 4).unwrap().symmetrizer, vec![2, 2, 1, 1]);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            CartanDatum::from_matrix(vec![vec![2, -1], vec![0, 2]]),
            Err(RootSystemError::ZeroPattern(..))
        ));
        assert!(matches!(
            CartanDatum::from_matrix(vec![vec![2, -2], vec![-2, 2]]),
            Err(RootSystemError::NotFiniteType(..))
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![2, -1], vec![-2, 2]], vec![1, 1]),
            Err(RootSystemError::NotSymmetrizable(_))
        ));
        assert!(matches!(
            CartanDatum::from_matrix(vec![vec![3]]),
            Err(RootSystemError::Diagonal(0, 3))
        ));
    }

    #[test]
    fn reflections() {
        let a1 = RootSystem::of_type("A", 1).unwrap();
        assert_eq!(a1.simple_reflection(0, &w(&[1])).unwrap(), w(&[-1]));
        let a2 = RootSystem::of_type("A", 2).unwrap();
        assert_eq!(a2.simple_reflection(0, &w(&[1, 1])).unwrap(), w(&[-1, 2]));
        assert_eq!(a2.simple_reflection(0, &w(&[0, 5])).unwrap(), w(&[0, 5]));
        assert!(matches!(
            a2.simple_reflection(2, &w(&[0, 0])),
            Err(RootSystemError::IndexOutOfRange(2, 2))
        ));
    }

    #[test]
    fn dominant_representatives() {
        let a1 = RootSystem::of_type("A", 1).unwrap();
        assert_eq!(a1.to_dominant_signed(&w(&[-3])), (w(&[3]), -1, false));
        assert_eq!(a1.to_dominant_signed(&w(&[0])), (w(&[0]), 1, true));
        let a2 = RootSystem::of_type("A", 2).unwrap();
        let rho = a2.rho().clone();
        let x = a2.reflect(0, &a2.reflect(1, &rho));
        assert_eq!(a2.to_dominant_signed(&x), (rho.clone(), 1, false));
        assert_eq!(a2.to_dominant_signed(&w(&[2, 0])), (w(&[2, 0]), 1, true));
    }

    #[test]
    fn weyl_dimensions() {
        let a1 = RootSystem::of_type("A", 1).unwrap();
        for m in 0..6 {
            assert_eq!(a1.weyl_dim(&w(&[m])).unwrap(), m as u64 + 1);
        }
        let a2 = RootSystem::of_type("A", 2).unwrap();
        assert_eq!(a2.weyl_dim(&w(&[0, 0])).unwrap(), 1);
        assert_eq!(a2.weyl_dim(&w(&[1, 1])).unwrap(), 8);
        assert!(a2.weyl_dim(&w(&[-1, 1])).is_err());
        let g2 = RootSystem::of_type("G", 2).unwrap();
        assert_eq!(g2.weyl_dim(&w(&[1, 0])).unwrap(), 7);
        assert_eq!(g2.weyl_dim(&w(&[0, 1])).unwrap(), 14);
    }

    #[test]
    fn reflected_roots_stay_roots() {
        for (letter, rank) in [("A", 3), ("B", 3), ("C", 3), ("G", 2), ("F", 4)] {
            let rs = RootSystem::of_type(letter, rank).unwrap();
            let roots: BTreeSet<Weight> = rs.positive_roots().iter().cloned().collect();
            for beta in rs.positive_roots() {
                for i in 0..rank {
                    let image = rs.reflect(i, beta);
                    assert!(roots.contains(&image) || roots.contains(&-&image));
                }
            }
        }
    }

    #[test]
    fn form_is_positive_definite_and_rho_pairs_positively() {
        let rs = RootSystem::of_type("B", 3).unwrap();
        for alpha in rs.positive_roots() {
            assert!(rs.pairing(alpha, alpha).is_positive());
            assert!(rs.rho_pairing(alpha).is_positive());
            assert!(rs.in_positive_root_cone(alpha));
        }
    }
}
