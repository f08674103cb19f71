//! Symmetric powers of the standard representation.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::GammaElt;
use crate::error::{Error, Result};
use crate::rational::{int, Rat};

/// A homogeneous polynomial of degree `n` in `e_1, …, e_M`, keyed by
/// exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymTensor<const M: usize> {
    pub degree: usize,
    #[serde(with = "coeff_map")]
    pub coeffs: BTreeMap<[u32; M], Rat>,
}

mod coeff_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer, const M: usize>(m: &BTreeMap<[u32; M], Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: BTreeMap<String, String> = m
            .iter()
            .map(|(k, c)| {
                let key: Vec<String> = k.iter().map(u32::to_string).collect();
                (key.join(","), crate::rational::format_rat(c))
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const M: usize>(d: D) -> std::result::Result<BTreeMap<[u32; M], Rat>, D::Error> {
        use serde::de::Error as _;
        let v = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, c) in v {
            let e: Vec<u32> = k
                .split(',')
                .map(|x| x.trim().parse().map_err(D::Error::custom))
                .collect::<std::result::Result<_, _>>()?;
            let e: [u32; M] = e.try_into().map_err(|_| D::Error::custom(format!("expected {M} exponents")))?;
            let c = crate::rational::parse_rat(&c).map_err(D::Error::custom)?;
            if !c.is_zero() {
                out.insert(e, c);
            }
        }
        Ok(out)
    }
}

/// Exponent vectors of degree `n` in `M` variables.
pub fn monomials<const M: usize>(n: usize) -> Vec<[u32; M]> {
    let mut out = Vec::new();
    let mut cur = [0u32; M];
    fn rec<const M: usize>(i: usize, left: u32, cur: &mut [u32; M], out: &mut Vec<[u32; M]>) {
        if i + 1 == M {
            cur[i] = left;
            out.push(*cur);
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    if M == 0 {
        return out;
    }
    rec(0, n as u32, &mut cur, &mut out);
    out
}

impl<const M: usize> SymTensor<M> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: BTreeMap::new() }
    }

    pub fn monomial(exp: [u32; M], c: Rat) -> Self {
        let degree = exp.iter().sum::<u32>() as usize;
        let mut t = Self::zero(degree);
        t.add_term(exp, c);
        t
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = ([u32; M], Rat)>) -> Result<Self> {
        let mut t = Self::zero(degree);
        for (e, c) in terms {
            if e.iter().sum::<u32>() as usize != degree {
                return Err(Error::Domain(format!("monomial {e:?} is not of degree {degree}")));
            }
            t.add_term(e, c);
        }
        Ok(t)
    }

    fn add_term(&mut self, e: [u32; M], c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other.degree)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero(self.degree);
        for (e, c) in &self.coeffs {
            out.add_term(*e, c * k);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&int(-1)))
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if self.degree != n {
            return Err(Error::Domain(format!("degree {} does not match {n}", self.degree)));
        }
        Ok(())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let e: [u32; M] = std::array::from_fn(|i| a[i] + b[i]);
                out.add_term(e, x * y);
            }
        }
        out
    }

    /// Uniformly random coefficients in `[-k, k]` on every monomial.
    pub fn random(degree: usize, k: i64, rng: &mut impl Rng) -> Self {
        let mut t = Self::zero(degree);
        for e in monomials::<M>(degree) {
            t.add_term(e, int(rng.gen_range(-k..=k)));
        }
        t
    }
}

/// `γ` acting on `Sym^n`: `e_i ↦ Σ_j γ_{ji} e_j`, extended multiplicatively.
pub fn rho_sym<const M: usize>(g: &GammaElt<M>, n: usize, t: &SymTensor<M>) -> Result<SymTensor<M>> {
    t.check_degree(n)?;
    let images: Vec<SymTensor<M>> = (0..M)
        .map(|i| {
            SymTensor::from_terms(
                1,
                (0..M).map(|j| {
                    let mut e = [0u32; M];
                    e[j] = 1;
                    (e, int(g.entry(j, i)))
                }),
            )
            .expect("linear terms")
        })
        .collect();
    let mut out = SymTensor::zero(n);
    for (e, c) in &t.coeffs {
        let mut acc = SymTensor::monomial([0; M], c.clone());
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                acc = acc.mul(&images[i]);
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials::<3>(0).len(), 1);
        assert_eq!(monomials::<3>(2).len(), 6);
        assert_eq!(monomials::<3>(3).len(), 10);
    }

    #[test]
    fn permutation_relabels() {
        let g = GammaElt::<3>::from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]]).unwrap();
        let t = SymTensor::monomial([2, 0, 0], int(1));
        // e_1 ↦ e_2
        assert_eq!(rho_sym(&g, 2, &t).unwrap(), SymTensor::monomial([0, 2, 0], int(1)));
        assert!(rho_sym(&g, 3, &t).is_err());
    }

    #[test]
    fn shear_expands() {
        let g = GammaElt::<3>::from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        // e_2 ↦ e_1 + e_2, so e_2^2 ↦ e_1^2 + 2 e_1 e_2 + e_2^2
        let t = SymTensor::monomial([0, 2, 0], int(1));
        let want = SymTensor::from_terms(2, [([2, 0, 0], int(1)), ([1, 1, 0], int(2)), ([0, 2, 0], int(1))]).unwrap();
        assert_eq!(rho_sym(&g, 2, &t).unwrap(), want);
    }
}
