//! Inhomogeneous cochains `G^k → Sym^n(V)` and the bar coboundary.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;

use super::sym::{rho_sym, SymTensor};
use crate::complex::GammaElt;
use crate::error::{Error, Result};

pub type Tuple<const M: usize> = Vec<GammaElt<M>>;

#[derive(Clone, Debug)]
enum Kind<const M: usize> {
    Table(Arc<HashMap<Tuple<M>, SymTensor<M>>>),
    Coboundary(Arc<Cochain<M>>),
}

/// A cochain of arity `k` with values in `Sym^degree`, either tabulated on
/// a finite support or the coboundary of another cochain.
#[derive(Clone, Debug)]
pub struct Cochain<const M: usize> {
    pub arity: usize,
    pub degree: usize,
    kind: Kind<M>,
}

impl<const M: usize> Cochain<M> {
    pub fn tabulated(arity: usize, degree: usize, table: HashMap<Tuple<M>, SymTensor<M>>) -> Result<Self> {
        for (k, v) in &table {
            if k.len() != arity || v.degree != degree {
                return Err(Error::Domain(format!(
                    "entry of arity {} and degree {} in a cochain of arity {arity}, degree {degree}",
                    k.len(),
                    v.degree
                )));
            }
        }
        Ok(Self { arity, degree, kind: Kind::Table(Arc::new(table)) })
    }

    /// Tabulate `f` on `support`.
    pub fn from_fn(
        arity: usize,
        degree: usize,
        support: impl IntoIterator<Item = Tuple<M>>,
        f: impl Fn(&[GammaElt<M>]) -> Result<SymTensor<M>>,
    ) -> Result<Self> {
        let mut table = HashMap::new();
        for t in support {
            let v = f(&t)?;
            table.insert(t, v);
        }
        Self::tabulated(arity, degree, table)
    }

    /// Independent random values with entries in `[-k, k]` on `support`.
    pub fn random_on(
        arity: usize,
        degree: usize,
        support: impl IntoIterator<Item = Tuple<M>>,
        k: i64,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let mut table = HashMap::new();
        let mut keys: Vec<Tuple<M>> = support.into_iter().collect();
        keys.sort();
        keys.dedup();
        for t in keys {
            table.insert(t, SymTensor::random(degree, k, rng));
        }
        Self::tabulated(arity, degree, table)
    }

    pub fn eval(&self, args: &[GammaElt<M>]) -> Result<SymTensor<M>> {
        if args.len() != self.arity {
            return Err(Error::Domain(format!("{} arguments for arity {}", args.len(), self.arity)));
        }
        match &self.kind {
            Kind::Table(t) => t
                .get(args)
                .cloned()
                .ok_or_else(|| Error::Support(format!("{args:?} is outside the tabulated support"))),
            Kind::Coboundary(f) => coboundary_at(f, args),
        }
    }
}

/// `(d f)(g_1, …, g_{i+1}) = g_1 f(g_2, …) + Σ_j (-1)^j f(…, g_j g_{j+1}, …)
/// + (-1)^{i+1} f(g_1, …, g_i)`.
fn coboundary_at<const M: usize>(f: &Cochain<M>, g: &[GammaElt<M>]) -> Result<SymTensor<M>> {
    let i = f.arity;
    let mut acc = rho_sym(&g[0], f.degree, &f.eval(&g[1..])?)?;
    for j in 1..=i {
        let mut args: Tuple<M> = g[..j - 1].to_vec();
        args.push(g[j - 1].mul(&g[j]));
        args.extend_from_slice(&g[j + 1..]);
        let term = f.eval(&args)?;
        acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    let last = f.eval(&g[..i])?;
    Ok(if (i + 1).is_multiple_of(2) { acc.add(&last)? } else { acc.sub(&last)? })
}

pub fn coboundary<const M: usize>(f: &Cochain<M>) -> Cochain<M> {
    Cochain { arity: f.arity + 1, degree: f.degree, kind: Kind::Coboundary(Arc::new(f.clone())) }
}

/// Arguments of `f` needed to evaluate `d^depth f` at `args`.
pub fn required_support<const M: usize>(depth: usize, args: &[GammaElt<M>]) -> BTreeSet<Tuple<M>> {
    let mut out = BTreeSet::new();
    if depth == 0 {
        out.insert(args.to_vec());
        return out;
    }
    let n = args.len();
    let mut faces: Vec<Tuple<M>> = vec![args[1..].to_vec(), args[..n - 1].to_vec()];
    for j in 1..n {
        let mut a: Tuple<M> = args[..j - 1].to_vec();
        a.push(args[j - 1].mul(&args[j]));
        a.extend_from_slice(&args[j + 1..]);
        faces.push(a);
    }
    for f in faces {
        out.extend(required_support(depth - 1, &f));
    }
    out
}

/// `f(g) = ρ(g) v - v`, a 1-cocycle.
pub fn principal_cocycle<const M: usize>(
    v: &SymTensor<M>,
    support: impl IntoIterator<Item = Tuple<M>>,
) -> Result<Cochain<M>> {
    let n = v.degree;
    Cochain::from_fn(1, n, support, |g| rho_sym(&g[0], n, v)?.sub(v))
}

/// A constant 0-cochain.
pub fn constant<const M: usize>(v: SymTensor<M>) -> Result<Cochain<M>> {
    let n = v.degree;
    Cochain::from_fn(0, n, [Vec::new()], move |_| Ok(v.clone()))
}

/// Zero test of `d(d f)` at `args` for a random `f` tabulated exactly on
/// what the evaluation needs.
pub fn dd_vanishes<const M: usize>(
    arity: usize,
    degree: usize,
    args: &[GammaElt<M>],
    rng: &mut impl Rng,
) -> Result<bool> {
    if args.len() != arity + 2 {
        return Err(Error::Domain("d∘d of an arity-k cochain takes k + 2 arguments".into()));
    }
    let f = Cochain::random_on(arity, degree, required_support(2, args), 5, rng)?;
    let dd = coboundary(&coboundary(&f));
    Ok(dd.eval(args)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use rand::SeedableRng;

    fn g(rows: [[i64; 3]; 3]) -> GammaElt<3> {
        GammaElt::from_rows(rows).unwrap()
    }

    #[test]
    fn constant_with_trivial_coefficients() {
        let c = constant(SymTensor::<3>::monomial([0, 0, 0], rat(3, 2))).unwrap();
        let d = coboundary(&c);
        let x = g([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(d.eval(&[x]).unwrap().is_zero());
    }

    #[test]
    fn principal_cocycle_is_closed() {
        let a = g([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let b = g([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let v = SymTensor::from_terms(2, [([1, 1, 0], int(1)), ([0, 0, 2], int(-3))]).unwrap();
        let f = principal_cocycle(&v, required_support(1, &[a, b])).unwrap();
        assert!(coboundary(&f).eval(&[a, b]).unwrap().is_zero());
    }

    #[test]
    fn missing_support_is_reported() {
        let a = g([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let f = Cochain::<3>::tabulated(1, 1, HashMap::new()).unwrap();
        assert!(matches!(f.eval(&[a]), Err(Error::Support(_))));
    }

    #[test]
    fn dd_zero_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = g([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let b = g([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let c = g([[1, 0, 0], [0, 1, 0], [1, 0, 1]]);
        assert!(dd_vanishes(0, 2, &[a, b], &mut rng).unwrap());
        assert!(dd_vanishes(1, 3, &[a, b, c], &mut rng).unwrap());
    }
}
