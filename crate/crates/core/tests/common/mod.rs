#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use facekoszul::facegeom::{lies_on_proper_face, weight_system, PsiFace, WeightSystem};
use facekoszul::weightposet::LambdaPoint;
use facekoszul::{ModuleSpec, RootSystem, Weight};
use rand::Rng;

pub fn w(c: &[i64]) -> Weight {
    Weight::new(c.to_vec())
}

pub fn pt(c: &[i64], r: i64) -> LambdaPoint {
    LambdaPoint::new(w(c), r).unwrap()
}

pub struct Fixture {
    pub name: &'static str,
    pub face: PsiFace,
}

impl Fixture {
    pub fn ws(&self) -> &Arc<WeightSystem> {
        self.face.weight_system()
    }

    pub fn rank(&self) -> usize {
        self.face.root_system().rank()
    }
}

pub fn module(letter: &str, rank: usize, summands: &[&[i64]]) -> Arc<WeightSystem> {
    let rs = RootSystem::of_type(letter, rank).unwrap();
    let spec = ModuleSpec::new(summands.iter().map(|c| (w(c), 1)).collect()).unwrap();
    weight_system(&rs, &spec).unwrap()
}

pub fn fixture(name: &'static str, ws: Arc<WeightSystem>, psi: &[&[i64]]) -> Fixture {
    let psi: Vec<Weight> = psi.iter().map(|c| w(c)).collect();
    let face = lies_on_proper_face(&ws, &psi).unwrap();
    assert!(face.is_face(), "{name}: Ψ is not on a proper face");
    Fixture { name, face }
}

/// The five reference fixtures: module and face subset.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        fixture("A1 adjoint, vertex", module("A", 1, &[&[2]]), &[&[2]]),
        fixture("A2 adjoint, vertex", module("A", 2, &[&[1, 1]]), &[&[1, 1]]),
        fixture("A2 adjoint, edge", module("A", 2, &[&[1, 1]]), &[&[2, -1], &[1, 1]]),
        fixture("C2 adjoint, vertex", module("C", 2, &[&[2, 0]]), &[&[2, 0]]),
        fixture("A2 V(w1)+V(w2), vertex", module("A", 2, &[&[1, 0], &[0, 1]]), &[&[1, 0]]),
    ]
}

pub fn random_dominant(rng: &mut impl Rng, rank: usize, max: i64) -> Weight {
    Weight::new((0..rank).map(|_| rng.gen_range(0..=max)).collect())
}

/// `p` plus `k` random elements of `Ψ`, one degree per step.
pub fn climb(rng: &mut impl Rng, face: &PsiFace, p: &LambdaPoint, k: usize) -> (Weight, i64) {
    let psi = face.psi();
    let mut top = p.weight.clone();
    for _ in 0..k {
        top = &top + &psi[rng.gen_range(0..psi.len())];
    }
    (top, p.degree + k as i64)
}

/// A random comparable pair `p ⪯_Ψ q` with `d_Ψ(p, q) = d`.
pub fn random_pair(rng: &mut impl Rng, face: &PsiFace, max_coord: i64, d: usize) -> (LambdaPoint, LambdaPoint) {
    let rank = face.root_system().rank();
    loop {
        let p = LambdaPoint::new(random_dominant(rng, rank, max_coord), rng.gen_range(-2..=2)).unwrap();
        let (top, r) = climb(rng, face, &p, d);
        if let Ok(q) = LambdaPoint::new(top, r) {
            return (p, q);
        }
    }
}

/// Weights of `V` listed once per basis vector.
pub fn basis_weights(ws: &WeightSystem) -> Vec<Weight> {
    ws.weights()
        .iter()
        .flat_map(|(w, &m)| std::iter::repeat_n(w.clone(), m as usize))
        .collect()
}

pub fn count(weights: impl IntoIterator<Item = Weight>) -> BTreeMap<Weight, i64> {
    let mut out = BTreeMap::new();
    for w in weights {
        *out.entry(w).or_insert(0) += 1;
    }
    out
}
