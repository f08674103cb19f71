//! The filling `σ` built from the contraction, and cocycle evaluation on it.
//!
//! `σ()` is the base point `o`, `σ(γ)` the reversed trajectory of `γ·o`, and
//! `σ(γ_1, γ_2)` the cone over `γ_1 σ(γ_2)`: the union of the trajectories of
//! its points, as an exact 2-chain of `𝒞`-triangles.

use std::collections::HashMap;

use rand::Rng;

use super::sym::{rho_sym, SymTensor};
use crate::complex::GammaElt;
use crate::contraction::chain::FormalChain;
use crate::contraction::sweep::{chain_cone, orbit_path};
use crate::contraction::TraceContext;
use crate::error::{Error, Result};

pub fn filling_sigma(ctx: &TraceContext, gammas: &[GammaElt<3>]) -> Result<FormalChain> {
    match gammas {
        [] => Ok(FormalChain::base_point()),
        [g] => orbit_path(ctx, g),
        [g1, rest @ ..] if rest.len() == 1 => chain_cone(ctx, &filling_sigma(ctx, rest)?.translate(g1)),
        _ => Err(Error::Unhandled(format!(
            "fillings are built up to dimension 2, not {}",
            gammas.len()
        ))),
    }
}

/// The chain `σ(γ) ∘ ξ^i` prescribed by the face relations: a translate for
/// `i = 0`, a product of neighbours for `0 < i < k`, a truncation for `i = k`.
pub fn expected_face(ctx: &TraceContext, gammas: &[GammaElt<3>], i: usize) -> Result<FormalChain> {
    let k = gammas.len();
    if i > k || k == 0 {
        return Err(Error::Domain(format!("face {i} of a {k}-simplex")));
    }
    if i == 0 {
        return Ok(filling_sigma(ctx, &gammas[1..])?.translate(&gammas[0]));
    }
    if i == k {
        return filling_sigma(ctx, &gammas[..k - 1]);
    }
    let mut merged = gammas[..i - 1].to_vec();
    merged.push(gammas[i - 1].mul(&gammas[i]));
    merged.extend_from_slice(&gammas[i + 1..]);
    filling_sigma(ctx, &merged)
}

/// Face `i` of `σ(γ)` as read off its boundary: `∂σ` minus the other
/// prescribed faces must be exactly `(-1)^i` times face `i`.
pub fn face_identity_check(ctx: &TraceContext, gammas: &[GammaElt<3>], i: usize) -> Result<bool> {
    let k = gammas.len();
    if k > 2 {
        return Err(Error::Domain("face identities are checked for k ≤ 2".into()));
    }
    let mut residue = filling_sigma(ctx, gammas)?.boundary();
    for j in (0..=k).filter(|&j| j != i) {
        let sign = if j % 2 == 0 { -1 } else { 1 };
        residue.add_scaled(&expected_face(ctx, gammas, j)?, sign);
    }
    let want = expected_face(ctx, gammas, i)?;
    let want = if i.is_multiple_of(2) { want } else { want.neg() };
    residue.equivalent(&want)
}

/// `Σ c · ρ(γ) values(cell)` over the terms of a chain.
pub fn cocycle_from_generators(
    values: &HashMap<usize, SymTensor<3>>,
    degree: usize,
    chain: &FormalChain,
) -> Result<SymTensor<3>> {
    let mut acc = SymTensor::zero(degree);
    for t in &chain.terms {
        let v = values
            .get(&t.cell)
            .ok_or_else(|| Error::Domain(format!("no generator value for cell {}", t.cell)))?;
        let img = rho_sym(&t.gamma, degree, v)?;
        acc = acc.add(&img.scale(&crate::rational::int(t.coeff)))?;
    }
    Ok(acc)
}

/// Elementary matrices `1 ± E_ij` and the signed permutations.
pub fn generators() -> Vec<GammaElt<3>> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for s in [1, -1] {
                let mut rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
                rows[i][j] = s;
                out.push(GammaElt::from_rows(rows).expect("unimodular"));
            }
        }
    }
    out.extend(GammaElt::signed_permutations());
    out
}

/// A product of at most `len` random generators.
pub fn random_word(rng: &mut impl Rng, len: usize) -> GammaElt<3> {
    let gens = generators();
    let k = rng.gen_range(1..=len.max(1));
    (0..k).fold(GammaElt::identity(), |acc, _| acc.mul(&gens[rng.gen_range(0..gens.len())]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn base_and_path_faces() {
        let ctx = TraceContext::new(2, rat(1, 8)).unwrap();
        let g = GammaElt::from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert!(face_identity_check(&ctx, &[g], 0).unwrap());
        assert!(face_identity_check(&ctx, &[g], 1).unwrap());
        let s = GammaElt::from_rows([[0, 1, 0], [1, 0, 0], [0, 0, -1]]).unwrap();
        // a stabiliser of the fundamental cube moves o nowhere
        assert!(filling_sigma(&ctx, &[s]).unwrap().global().unwrap().is_empty());
    }
}
