//! Integer vectors, sign classes and the norm-lexicographic preorders.
//!
//! Everything here is exact integer arithmetic. Squared norms are computed in
//! `i128` so ties between vectors are decided without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A lattice vector in `Z^M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec<const M: usize>(pub [i64; M]);

impl<const M: usize> IntVec<M> {
    pub const fn new(entries: [i64; M]) -> Self {
        Self(entries)
    }

    pub fn zero() -> Self {
        Self([0; M])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(i: usize) -> Self {
        let mut e = [0; M];
        e[i] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[i64; M] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &Self) -> i128 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    pub fn norm_sq(&self) -> i128 {
        self.dot(self)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.map(|x| x * k))
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// `true` iff the gcd of the entries is 1.
    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Domain("primitivity of the zero vector".into()));
        }
        Ok(self.content() == 1)
    }

    /// Representative of `{v, -v}` whose first nonzero entry is positive.
    pub fn canon(&self) -> Result<SignClass<M>> {
        if !self.is_primitive()? {
            return Err(Error::Domain(format!("{self:?} is not primitive")));
        }
        Ok(SignClass(self.sign_normalized()))
    }

    fn sign_normalized(&self) -> Self {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => -*self,
            _ => *self,
        }
    }

    /// Sort key realising the preorder: squared norm, then absolute entries in
    /// index order.
    pub fn order_key(&self) -> OrderKey<M> {
        OrderKey {
            norm_sq: self.norm_sq(),
            abs: self.0.map(|x| x.unsigned_abs()),
        }
    }
}

impl<const M: usize> Add for IntVec<M> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o += r;
        }
        Self(out)
    }
}

impl<const M: usize> Sub for IntVec<M> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const M: usize> Neg for IntVec<M> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl<const M: usize> fmt::Debug for IntVec<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl<const M: usize> fmt::Display for IntVec<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<const M: usize> Serialize for IntVec<M> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de, const M: usize> Deserialize<'de> for IntVec<M> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        let arr: [i64; M] = v
            .try_into()
            .map_err(|_| D::Error::custom(format!("expected {M} entries")))?;
        Ok(Self(arr))
    }
}

/// Key of the norm-lexicographic preorder. Equal keys are exactly the `≈`
/// relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey<const M: usize> {
    pub norm_sq: i128,
    pub abs: [u64; M],
}

/// A primitive vector modulo sign, stored with its first nonzero entry
/// positive. The derived `Ord` is the signed lexicographic order and is only
/// used for hashing and deterministic sorting of decorations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SignClass<const M: usize>(IntVec<M>);

impl<const M: usize> SignClass<M> {
    pub fn rep(&self) -> IntVec<M> {
        self.0
    }

    pub fn unit(i: usize) -> Self {
        Self(IntVec::unit(i))
    }

    pub fn order_key(&self) -> OrderKey<M> {
        self.0.order_key()
    }
}

impl<'de, const M: usize> Deserialize<'de> for SignClass<M> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        IntVec::<M>::deserialize(d)?
            .canon()
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl<const M: usize> fmt::Debug for SignClass<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl<const M: usize> fmt::Display for SignClass<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl<const M: usize> TryFrom<IntVec<M>> for SignClass<M> {
    type Error = Error;
    fn try_from(v: IntVec<M>) -> Result<Self> {
        v.canon()
    }
}

/// Outcome of a preorder comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderResult {
    Less,
    Approx,
    Greater,
}

impl From<Ordering> for OrderResult {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => OrderResult::Less,
            Ordering::Equal => OrderResult::Approx,
            Ordering::Greater => OrderResult::Greater,
        }
    }
}

impl OrderResult {
    pub fn reverse(self) -> Self {
        match self {
            OrderResult::Less => OrderResult::Greater,
            OrderResult::Approx => OrderResult::Approx,
            OrderResult::Greater => OrderResult::Less,
        }
    }
}

/// `v ≺ w`, `v ≈ w` or `w ≺ v`: squared norm first, then the first index where
/// the absolute entries differ.
pub fn vec_cmp<const M: usize>(v: &IntVec<M>, w: &IntVec<M>) -> OrderResult {
    v.order_key().cmp(&w.order_key()).into()
}

/// Comparison of equally sized collections by repeated extraction of minima.
///
/// Extracting a minimum from each side and comparing is the same as comparing
/// the ascending key sequences lexicographically.
pub fn coll_cmp<const M: usize>(a: &[IntVec<M>], b: &[IntVec<M>]) -> Result<OrderResult> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "collections of different sizes {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(sorted_keys(a).cmp(&sorted_keys(b)).into())
}

pub fn sorted_keys<const M: usize>(vs: &[IntVec<M>]) -> Vec<OrderKey<M>> {
    let mut keys: Vec<_> = vs.iter().map(IntVec::order_key).collect();
    keys.sort_unstable();
    keys
}

pub fn strictly_greater<const M: usize>(v: &IntVec<M>, w: &IntVec<M>) -> bool {
    vec_cmp(v, w) == OrderResult::Greater
}

/// Both `v + w` and `v - w` are strictly above `v` and `w` in the preorder.
pub fn is_fundamental_pair<const M: usize>(v: &IntVec<M>, w: &IntVec<M>) -> Result<bool> {
    if v.is_zero() || w.is_zero() || rank(&[*v, *w]) < 2 {
        return Err(Error::Domain(format!("{v:?} and {w:?} are dependent")));
    }
    Ok([*v + *w, *v - *w]
        .iter()
        .all(|s| strictly_greater(s, v) && strictly_greater(s, w)))
}

/// Instance check of: `|v+w| <= max(|v|,|w|)` implies `|v-w| > max(|v|,|w|)`.
pub fn lemma_sum_diff<const M: usize>(v: &IntVec<M>, w: &IntVec<M>) -> bool {
    let max = v.norm_sq().max(w.norm_sq());
    (*v + *w).norm_sq() > max || (*v - *w).norm_sq() > max
}

/// Instance check for a non-fundamental primitive pair:
/// `max|v±w| > max(|v|,|w|) >= min|v±w|`. Fundamental pairs satisfy it vacuously.
pub fn lemma_norm_rank_two<const M: usize>(v: &IntVec<M>, w: &IntVec<M>) -> bool {
    match is_fundamental_pair(v, w) {
        Ok(false) => {
            let (s, d) = ((*v + *w).norm_sq(), (*v - *w).norm_sq());
            let max = v.norm_sq().max(w.norm_sq());
            s.max(d) > max && max >= s.min(d)
        }
        _ => true,
    }
}

/// Instance check over all distinct `(i,j,k)`: if `|vi+vj| >= max(|vi|,|vj|)`
/// and `(vk, vi+vj) >= 0` then `|v1+v2+v3| > max |vi|`.
pub fn lemma_connected_one(vs: &[IntVec<3>; 3]) -> bool {
    let total = (vs[0] + vs[1] + vs[2]).norm_sq();
    let max = vs.iter().map(IntVec::norm_sq).max().unwrap_or(0);
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let s = vs[i] + vs[j];
        let hyp = s.norm_sq() >= vs[i].norm_sq().max(vs[j].norm_sq()) && vs[k].dot(&s) >= 0;
        if hyp && total <= max {
            return false;
        }
    }
    true
}

/// Instance check: if `|vi+vj| <= max(|vi|,|vj|)` for every pair then
/// `|v1+v2+v3| < max |vi|`.
pub fn lemma_connected_two(vs: &[IntVec<3>; 3]) -> bool {
    let hyp = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .all(|&(i, j)| (vs[i] + vs[j]).norm_sq() <= vs[i].norm_sq().max(vs[j].norm_sq()));
    if !hyp {
        return true;
    }
    let max = vs.iter().map(IntVec::norm_sq).max().unwrap_or(0);
    (vs[0] + vs[1] + vs[2]).norm_sq() < max
}

/// Determinant of the square matrix whose columns are `cols`.
pub fn det<const M: usize>(cols: &[IntVec<M>; M]) -> i128 {
    let mut rows: Vec<Vec<i128>> = (0..M)
        .map(|r| cols.iter().map(|c| c.0[r] as i128).collect())
        .collect();
    det_bareiss(&mut rows)
}

fn det_bareiss(a: &mut [Vec<i128>]) -> i128 {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over `Q` of a list of vectors.
pub fn rank<const M: usize>(vs: &[IntVec<M>]) -> usize {
    hermite_normal_form(vs).len()
}

/// Row-style Hermite normal form of the `Z`-span of `vs`: the nonzero rows of
/// an upper-triangular basis with positive pivots and reduced entries above
/// each pivot.
pub fn hermite_normal_form<const M: usize>(vs: &[IntVec<M>]) -> Vec<IntVec<M>> {
    let mut rows: Vec<[i128; M]> = vs.iter().map(|v| v.0.map(|x| x as i128)).collect();
    let mut pivot_row = 0;
    for col in 0..M {
        if pivot_row == rows.len() {
            break;
        }
        // Euclid on the column below `pivot_row`.
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero
                .iter()
                .min_by_key(|&&r| rows[r][col].unsigned_abs())
                .expect("nonempty");
            rows.swap(pivot_row, best);
            let p = rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                let q = rows[r][col].div_euclid(p);
                if q != 0 {
                    let prow = rows[pivot_row];
                    for (x, y) in rows[r].iter_mut().zip(prow.iter()) {
                        *x -= q * y;
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col] == 0 {
            continue;
        }
        if rows[pivot_row][col] < 0 {
            for x in rows[pivot_row].iter_mut() {
                *x = -*x;
            }
        }
        let p = rows[pivot_row][col];
        for r in 0..pivot_row {
            let q = rows[r][col].div_euclid(p);
            if q != 0 {
                let prow = rows[pivot_row];
                for (x, y) in rows[r].iter_mut().zip(prow.iter()) {
                    *x -= q * y;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows.into_iter()
        .map(|r| IntVec(r.map(|x| i64::try_from(x).expect("HNF entry fits in i64"))))
        .collect()
}

/// `true` iff the vectors span `Z^M` as a `Z`-module.
pub fn spans_lattice<const M: usize>(vs: &[IntVec<M>]) -> bool {
    let h = hermite_normal_form(vs);
    h.len() == M && (0..M).all(|i| h[i].0[i] == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v3(a: i64, b: i64, c: i64) -> IntVec<3> {
        IntVec([a, b, c])
    }

    #[test]
    fn primitivity() {
        assert!(v3(1, 0, 0).is_primitive().unwrap());
        assert!(!v3(2, 4, 6).is_primitive().unwrap());
        assert!(v3(0, -1, 1).is_primitive().unwrap());
        assert!(v3(0, 0, 0).is_primitive().is_err());
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(v3(0, -1, 1).canon().unwrap().rep(), v3(0, 1, -1));
        assert_eq!(v3(1, 1, -1).canon().unwrap().rep(), v3(1, 1, -1));
        assert_eq!(v3(-2, 0, 1).canon().unwrap().rep(), v3(2, 0, -1));
        assert!(v3(2, 0, 2).canon().is_err());
    }

    #[test]
    fn vector_preorder() {
        let e1 = v3(1, 0, 0);
        assert_eq!(vec_cmp(&e1, &v3(1, 1, 0)), OrderResult::Less);
        assert_eq!(vec_cmp(&v3(0, 1, -1), &v3(1, 0, 1)), OrderResult::Less);
        assert_eq!(vec_cmp(&v3(1, -1, 0), &v3(1, 1, 0)), OrderResult::Approx);
        // e3 ≺ e2 ≺ e1 by entry sizes.
        assert_eq!(vec_cmp(&v3(0, 0, 1), &v3(0, 1, 0)), OrderResult::Less);
    }

    #[test]
    fn collection_preorder() {
        let (e1, e2, e3) = (v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1));
        assert_eq!(coll_cmp(&[e1, e2, e3], &[e1, e2, e1 + e2]).unwrap(), OrderResult::Less);
        assert_eq!(coll_cmp(&[e1, e2], &[e2, e1]).unwrap(), OrderResult::Approx);
        assert_eq!(
            coll_cmp(&[e1, e2, e2 - e3], &[e1, e2, e1 + e2 + e3]).unwrap(),
            OrderResult::Less
        );
        assert!(coll_cmp(&[e1], &[e1, e2]).is_err());
    }

    #[test]
    fn fundamental_pairs() {
        let (e1, e2) = (v3(1, 0, 0), v3(0, 1, 0));
        assert!(is_fundamental_pair(&e1, &e2).unwrap());
        assert!(!is_fundamental_pair(&e1, &(e1 + e2)).unwrap());
        assert!(!is_fundamental_pair(&v3(4, 1, 0), &v3(2, 1, 1)).unwrap());
        assert!(is_fundamental_pair(&e1, &e1.scale(-1)).is_err());
    }

    #[test]
    fn lemma_instances() {
        let (e1, e2) = (v3(1, 0, 0), v3(0, 1, 0));
        assert!(lemma_sum_diff(&e1, &(e2 - e1)));
        assert!(lemma_sum_diff(&e1, &e2));
    }

    #[test]
    fn hnf_and_span() {
        let (e1, e2, e3) = (v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1));
        assert!(spans_lattice(&[e1, e2, e3, e1 + e2]));
        assert!(!spans_lattice(&[e1, e2, v3(0, 0, 2)]));
        assert!(!spans_lattice(&[e1, e2, e1 + e2]));
        assert!(spans_lattice(&[v3(1, 1, 0), v3(1, -1, 0), v3(0, 1, 1), v3(0, 0, 1)]));
        assert_eq!(rank(&[e1, e2, e1 + e2]), 2);
        assert_eq!(det(&[v3(1, 0, 0), v3(4, 1, 0), v3(2, 1, 1)]), 1);
        assert_eq!(det(&[e2, e1, e3]), -1);
    }

    #[test]
    fn serde_round_trip() {
        let c = v3(0, -1, 1).canon().unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, "[0,1,-1]");
        let back: SignClass<3> = serde_json::from_str("[0,-1,1]").unwrap();
        assert_eq!(back, c);
    }
}
