//! Exact computations for graded module categories over `g ⋉ V`: weight
//! polytope faces, face-refined orders on `P⁺ × ℤ`, Ext and projective
//! multiplicities between simples, and numerical Koszulity of the
//! truncated algebras.

#![allow(clippy::needless_range_loop)]

pub mod characters;
pub mod cli;
pub mod facegeom;
pub mod homdims;
pub mod koszulcheck;
pub mod lp;
pub mod poly;
pub mod rootsystem;
pub mod weightposet;

pub use characters::{Character, CharacterError, ModuleSpec};
pub use rootsystem::{CartanDatum, RootSystem, RootSystemError, Weight};
