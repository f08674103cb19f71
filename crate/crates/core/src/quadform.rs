//! Positive definite forms, minimal vectors, the Soulé `(u,v,w)` chart and
//! upper half-plane coordinates of rank-2 restrictions.

use std::array;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intvec::{self, IntVec, SignClass};
use crate::rational::{self, int, rat, Rat};

/// Symmetric positive definite Gram matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm<const M: usize> {
    gram: [[Rat; M]; M],
}

impl<const M: usize> QuadForm<M> {
    pub fn new(gram: [[Rat; M]; M]) -> Result<Self> {
        for i in 0..M {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Domain("Gram matrix is not symmetric".into()));
                }
            }
        }
        let form = Self { gram };
        if !form.is_positive_definite() {
            return Err(Error::Domain("form is not positive definite".into()));
        }
        Ok(form)
    }

    pub fn identity() -> Self {
        Self {
            gram: array::from_fn(|i| array::from_fn(|j| if i == j { int(1) } else { int(0) })),
        }
    }

    pub fn diagonal(entries: [i64; M]) -> Result<Self> {
        Self::new(array::from_fn(|i| {
            array::from_fn(|j| if i == j { int(entries[i]) } else { int(0) })
        }))
    }

    /// Gram matrix `B^T B` of the lattice spanned by the columns of `basis`.
    pub fn from_lattice_basis(basis: &[[Rat; M]; M]) -> Result<Self> {
        // basis[c] is the c-th column.
        Self::new(array::from_fn(|i| {
            array::from_fn(|j| (0..M).map(|r| &basis[i][r] * &basis[j][r]).sum())
        }))
    }

    /// The associated form `Q_g = (g^T)^{-1} g^{-1}` of an invertible rational
    /// matrix given by its columns.
    pub fn associated(g_cols: &[[Rat; M]; M]) -> Result<Self> {
        let rows: [[Rat; M]; M] = array::from_fn(|r| array::from_fn(|c| g_cols[c][r].clone()));
        let inv = invert(&rows).ok_or_else(|| Error::Domain("singular matrix".into()))?;
        // Q = inv^T inv; as columns of inv: Q_ij = <inv col i, inv col j>.
        Self::new(array::from_fn(|i| {
            array::from_fn(|j| (0..M).map(|r| &inv[r][i] * &inv[r][j]).sum())
        }))
    }

    pub fn gram(&self) -> &[[Rat; M]; M] {
        &self.gram
    }

    pub fn eval(&self, x: &IntVec<M>) -> Rat {
        self.bilinear(x, x)
    }

    pub fn bilinear(&self, x: &IntVec<M>, y: &IntVec<M>) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..M {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..M {
                if y.0[j] != 0 {
                    acc += &self.gram[i][j] * int(x.0[i] * y.0[j]);
                }
            }
        }
        acc
    }

    fn is_positive_definite(&self) -> bool {
        (1..=M).all(|k| {
            let minor: Vec<Vec<Rat>> = (0..k).map(|i| self.gram[i][..k].to_vec()).collect();
            det_rat(minor).is_positive()
        })
    }

    /// Pull the form back along an integer change of basis: `B^T G B`, so that
    /// the new form evaluated at `x` equals the old one at `B x`.
    pub fn pullback(&self, basis: &[IntVec<M>; M]) -> Self {
        Self {
            gram: array::from_fn(|i| array::from_fn(|j| self.bilinear(&basis[i], &basis[j]))),
        }
    }

    /// Fincke-Pohst coefficients: `Q(x) = Σ q_i (x_i + Σ_{j>i} mu_ij x_j)^2`.
    fn pohst(&self) -> ([Rat; M], [[Rat; M]; M]) {
        let mut q: [Rat; M] = array::from_fn(|_| Rat::zero());
        let mut mu: [[Rat; M]; M] = array::from_fn(|_| array::from_fn(|_| Rat::zero()));
        for i in 0..M {
            let mut qi = self.gram[i][i].clone();
            for k in 0..i {
                qi -= &mu[k][i] * &mu[k][i] * &q[k];
            }
            q[i] = qi;
            for j in i + 1..M {
                let mut s = self.gram[i][j].clone();
                for k in 0..i {
                    s -= &mu[k][i] * &mu[k][j] * &q[k];
                }
                mu[i][j] = s / &q[i];
            }
        }
        (q, mu)
    }

    /// All nonzero integer vectors with `Q(x) <= bound`, one per sign class.
    pub fn short_vectors(&self, bound: &Rat) -> Vec<(IntVec<M>, Rat)> {
        let (q, mu) = self.pohst();
        let mut out = Vec::new();
        let mut x = [0i64; M];
        self.enumerate_level(M, &q, &mu, bound, &mut x, &mut out);
        out
    }

    fn enumerate_level(
        &self,
        level: usize,
        q: &[Rat; M],
        mu: &[[Rat; M]; M],
        remaining: &Rat,
        x: &mut [i64; M],
        out: &mut Vec<(IntVec<M>, Rat)>,
    ) {
        if level == 0 {
            let v = IntVec(*x);
            // one representative per ± pair: first nonzero entry positive
            if v.0.iter().find(|&&t| t != 0).is_some_and(|&t| t > 0) {
                out.push((v, self.eval(&v)));
            }
            return;
        }
        let i = level - 1;
        let mut center = Rat::zero();
        for j in i + 1..M {
            center -= &mu[i][j] * int(x[j]);
        }
        let fits = |t: i64| -> Option<Rat> {
            let diff = int(t) - &center;
            let used = &q[i] * &diff * &diff;
            (used <= *remaining).then(|| remaining - used)
        };
        let start = rational::floor_int(&center);
        let start: i64 = i64::try_from(start).expect("enumeration coordinate fits in i64");
        let mut t = start;
        while let Some(rest) = fits(t) {
            x[i] = t;
            self.enumerate_level(level - 1, q, mu, &rest, x, out);
            t -= 1;
        }
        let mut t = start + 1;
        while let Some(rest) = fits(t) {
            x[i] = t;
            self.enumerate_level(level - 1, q, mu, &rest, x, out);
            t += 1;
        }
        x[i] = 0;
    }

    /// Arithmetic minimum and the minimal vectors modulo sign.
    pub fn arithmetic_minimum(&self) -> MinimaResult<M> {
        let bound = (0..M)
            .map(|i| self.gram[i][i].clone())
            .min()
            .expect("M > 0");
        let short = self.short_vectors(&bound);
        let min_sq = short
            .iter()
            .map(|(_, val)| val.clone())
            .min()
            .expect("some basis vector attains the diagonal bound");
        let mut vectors: Vec<SignClass<M>> = short
            .into_iter()
            .filter(|(_, val)| *val == min_sq)
            .map(|(v, _)| v.canon().expect("minimal vectors are primitive"))
            .collect();
        vectors.sort_unstable();
        vectors.dedup();
        MinimaResult { min_sq, vectors }
    }

    /// Minimal vectors span `Z^M` as a `Z`-module.
    pub fn is_well_rounded(&self) -> bool {
        let m = self.arithmetic_minimum();
        let reps: Vec<IntVec<M>> = m.vectors.iter().map(SignClass::rep).collect();
        intvec::spans_lattice(&reps)
    }
}

impl<const M: usize> Serialize for QuadForm<M> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(M))?;
        for row in &self.gram {
            let strs: Vec<String> = row.iter().map(rational::format_rat).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }
}

impl<'de, const M: usize> Deserialize<'de> for QuadForm<M> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        if rows.len() != M || rows.iter().any(|r| r.len() != M) {
            return Err(D::Error::custom(format!("expected a {M}x{M} matrix")));
        }
        let mut gram: [[Rat; M]; M] = array::from_fn(|_| array::from_fn(|_| Rat::zero()));
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                gram[i][j] = rational::parse_rat(s).map_err(D::Error::custom)?;
            }
        }
        QuadForm::new(gram).map_err(D::Error::custom)
    }
}

/// Squared arithmetic minimum and minimal vectors modulo sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimaResult<const M: usize> {
    #[serde(serialize_with = "rational::serialize_rat")]
    pub min_sq: Rat,
    pub vectors: Vec<SignClass<M>>,
}

pub(crate) fn det_rat(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &pivot;
            for c in k..n {
                let t = &f * &a[k][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Gauss-Jordan inverse of a square rational matrix (row-major).
pub(crate) fn invert<const M: usize>(a: &[[Rat; M]; M]) -> Option<[[Rat; M]; M]> {
    let mut m: Vec<Vec<Rat>> = a.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<Rat>> = (0..M)
        .map(|i| (0..M).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for k in 0..M {
        let p = (k..M).find(|&r| !m[r][k].is_zero())?;
        m.swap(p, k);
        inv.swap(p, k);
        let pivot = m[k][k].clone();
        for c in 0..M {
            m[k][c] /= &pivot;
            inv[k][c] /= &pivot;
        }
        for r in 0..M {
            if r == k || m[r][k].is_zero() {
                continue;
            }
            let f = m[r][k].clone();
            for c in 0..M {
                let t = &f * &m[k][c];
                m[r][c] -= t;
                let t = &f * &inv[k][c];
                inv[r][c] -= t;
            }
        }
    }
    Some(array::from_fn(|i| array::from_fn(|j| inv[i][j].clone())))
}

/// Point `x + iy` of the upper half-plane with `y` kept as its exact square.
///
/// Convention: a rank-2 marked lattice is normalised so that its first basis
/// vector is `1` and its second basis vector is `x + iy`. Gram `[[a,b],[b,c]]`
/// gives `x = b/a`, `y^2 = (ac - b^2)/a^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HPoint {
    #[serde(serialize_with = "rational::serialize_rat", deserialize_with = "rational::deserialize_rat")]
    pub x: Rat,
    #[serde(serialize_with = "rational::serialize_rat", deserialize_with = "rational::deserialize_rat")]
    pub y_sq: Rat,
}

impl HPoint {
    pub fn new(x: Rat, y_sq: Rat) -> Result<Self> {
        if !y_sq.is_positive() {
            return Err(Error::Domain("upper half-plane point needs y > 0".into()));
        }
        Ok(Self { x, y_sq })
    }

    pub fn i() -> Self {
        Self { x: Rat::zero(), y_sq: Rat::one() }
    }

    pub fn from_gram(a: &Rat, b: &Rat, c: &Rat) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::Domain("Gram entry a must be positive".into()));
        }
        Self::new(b / a, (a * c - b * b) / (a * a))
    }

    pub fn y(&self) -> f64 {
        rational::to_f64(&self.y_sq).sqrt()
    }

    /// Exact membership in `{x^2 + y^2 = 1, |x| <= 1/2}`.
    pub fn on_fundamental_arc(&self) -> bool {
        &self.x * &self.x + &self.y_sq == Rat::one() && self.x.abs() <= rat(1, 2)
    }
}

/// The point of the marked lattice whose basis is the columns of `g`.
pub fn upper_half_point(g: &[IntVec<2>; 2]) -> Result<HPoint> {
    let d = intvec::det(g);
    if d.abs() != 1 {
        return Err(Error::Domain(format!("det {d} is not ±1")));
    }
    let (a, b, c) = (g[0].norm_sq(), g[0].dot(&g[1]), g[1].norm_sq());
    HPoint::from_gram(&int(a as i64), &int(b as i64), &int(c as i64))
}

/// Restrict `Q` to `Z{vi, vj}` and return the upper half-plane point of the
/// restricted marked lattice in the basis `(vi, vj)`.
pub fn project_to_sublattice<const M: usize>(
    q: &QuadForm<M>,
    pair: (&IntVec<M>, &IntVec<M>),
) -> Result<HPoint> {
    let (vi, vj) = pair;
    if intvec::rank(&[*vi, *vj]) < 2 {
        return Err(Error::Domain(format!("{vi:?}, {vj:?} are dependent")));
    }
    HPoint::from_gram(&q.eval(vi), &q.bilinear(vi, vj), &q.eval(vj))
}

pub fn on_fundamental_arc(p: &HPoint) -> bool {
    p.on_fundamental_arc()
}

/// The ten vectors whose minimality cuts out the faces of the fundamental
/// Soulé cube: `e_i ± e_j` (hexagons) and `e1 ± e2 ± e3` (triangles).
pub fn face_vectors() -> [IntVec<3>; 10] {
    [
        IntVec([0, 1, -1]),
        IntVec([0, 1, 1]),
        IntVec([1, 0, -1]),
        IntVec([1, 0, 1]),
        IntVec([1, -1, 0]),
        IntVec([1, 1, 0]),
        IntVec([1, 1, 1]),
        IntVec([1, 1, -1]),
        IntVec([1, -1, 1]),
        IntVec([1, -1, -1]),
    ]
}

/// `x^T Q(u,v,w) x` for the fundamental chart
/// `Q(u,v,w) = [[2,w,v],[w,2,u],[v,u,2]]`.
pub fn soule_value(x: &IntVec<3>, p: &[Rat; 3]) -> Rat {
    let [a, b, c] = x.0;
    let (u, v, w) = (&p[0], &p[1], &p[2]);
    int(2 * (a * a + b * b + c * c))
        + int(2 * a * b) * w
        + int(2 * a * c) * v
        + int(2 * b * c) * u
}

/// Point `(u,v,w)` lies in the closed fundamental cube.
pub fn in_fundamental_cube(p: &[Rat; 3]) -> bool {
    let two = int(2);
    face_vectors().iter().all(|x| soule_value(x, p) >= two)
}

pub fn fundamental_soule_form(p: &[Rat; 3]) -> Result<QuadForm<3>> {
    let (u, v, w) = (p[0].clone(), p[1].clone(), p[2].clone());
    let two = int(2);
    QuadForm::new([
        [two.clone(), w.clone(), v.clone()],
        [w, two.clone(), u.clone()],
        [v, u, two],
    ])
}

/// A point in the chart of the cube decorated by the ordered basis `basis`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeChart {
    pub basis: [IntVec<3>; 3],
    #[serde(with = "rational::rat_array")]
    pub coords: [Rat; 3],
}

impl CubeChart {
    pub fn new(basis: [IntVec<3>; 3], coords: [Rat; 3]) -> Result<Self> {
        if intvec::det(&basis).abs() != 1 {
            return Err(Error::Domain("chart basis is not a Z-basis".into()));
        }
        if !in_fundamental_cube(&coords) {
            return Err(Error::Domain("chart point lies outside the cell".into()));
        }
        Ok(Self { basis, coords })
    }

    pub fn standard(coords: [Rat; 3]) -> Result<Self> {
        Self::new([IntVec::unit(0), IntVec::unit(1), IntVec::unit(2)], coords)
    }
}

/// Soulé form of a chart point: `B^{-T} Q(u,v,w) B^{-1}`, so that the
/// decorating basis vectors take the value 2.
pub fn soule_form(chart: &CubeChart) -> Result<QuadForm<3>> {
    if !in_fundamental_cube(&chart.coords) {
        return Err(Error::Domain("chart point lies outside the cell".into()));
    }
    let base = fundamental_soule_form(&chart.coords)?;
    let inv = integer_inverse(&chart.basis)?;
    Ok(base.pullback(&inv))
}

/// Inverse of a unimodular integer matrix, as columns.
pub fn integer_inverse(cols: &[IntVec<3>; 3]) -> Result<[IntVec<3>; 3]> {
    let d = intvec::det(cols);
    if d.abs() != 1 {
        return Err(Error::Domain(format!("det {d} is not ±1")));
    }
    let d = d as i64;
    // m[r][c] = cols[c][r]
    let m = |r: usize, c: usize| cols[c].0[r];
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        let minor = m(rs[0], cs[0]) * m(rs[1], cs[1]) - m(rs[0], cs[1]) * m(rs[1], cs[0]);
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    // inverse[r][c] = cof(c, r) / d; column c of the inverse has entries r.
    Ok(array::from_fn(|c| IntVec(array::from_fn(|r| cof(c, r) * d))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sc(a: i64, b: i64, c: i64) -> SignClass<3> {
        IntVec([a, b, c]).canon().unwrap()
    }

    #[test]
    fn identity_minima() {
        let m = QuadForm::<3>::identity().arithmetic_minimum();
        assert_eq!(m.min_sq, int(1));
        assert_eq!(m.vectors, {
            let mut v = vec![sc(1, 0, 0), sc(0, 1, 0), sc(0, 0, 1)];
            v.sort();
            v
        });
    }

    #[test]
    fn soule_center_and_hexagon() {
        let q = fundamental_soule_form(&[int(0), int(0), int(0)]).unwrap();
        assert_eq!(q.arithmetic_minimum().vectors.len(), 3);
        let q = fundamental_soule_form(&[int(1), rat(1, 5), rat(-1, 7)]).unwrap();
        let mut want = vec![sc(1, 0, 0), sc(0, 1, 0), sc(0, 0, 1), sc(0, -1, 1)];
        want.sort();
        assert_eq!(q.arithmetic_minimum().vectors, want);
    }

    #[test]
    fn well_roundedness() {
        assert!(QuadForm::<3>::identity().is_well_rounded());
        assert!(!QuadForm::<3>::diagonal([1, 1, 4]).unwrap().is_well_rounded());
    }

    #[test]
    fn rejects_bad_forms() {
        assert!(QuadForm::<2>::new([[int(1), int(2)], [int(2), int(1)]]).is_err());
        assert!(QuadForm::<2>::new([[int(1), int(0)], [int(1), int(1)]]).is_err());
    }

    #[test]
    fn upper_half_plane_points() {
        let e = [IntVec([1, 0]), IntVec([0, 1])];
        assert_eq!(upper_half_point(&e).unwrap(), HPoint::i());
        let rot = [IntVec([0, 1]), IntVec([-1, 0])];
        assert_eq!(upper_half_point(&rot).unwrap(), HPoint::i());
        // Lattice with basis e1, e1+e2: second vector sits at 1 + i.
        let shear = [IntVec([1, 0]), IntVec([1, 1])];
        assert_eq!(upper_half_point(&shear).unwrap(), HPoint::new(int(1), int(1)).unwrap());
        assert!(upper_half_point(&[IntVec([1, 0]), IntVec([2, 0])]).is_err());
    }

    #[test]
    fn arc_membership() {
        assert!(HPoint::i().on_fundamental_arc());
        assert!(HPoint::new(rat(1, 2), rat(3, 4)).unwrap().on_fundamental_arc());
        assert!(!HPoint::new(int(0), int(4)).unwrap().on_fundamental_arc());
        assert!(!HPoint::new(rat(3, 5), rat(16, 25)).unwrap().on_fundamental_arc());
    }

    #[test]
    fn projection_of_chart_points() {
        let (e2, e3) = (IntVec::unit(1), IntVec::unit(2));
        let q = QuadForm::<3>::identity();
        assert_eq!(project_to_sublattice(&q, (&e2, &e3)).unwrap(), HPoint::i());
        let u = rat(2, 3);
        let q = fundamental_soule_form(&[u.clone(), int(0), int(0)]).unwrap();
        let p = project_to_sublattice(&q, (&e2, &e3)).unwrap();
        assert_eq!(p.x, &u / int(2));
        assert_eq!(p.y_sq, (int(4) - &u * &u) / int(4));
        let q = fundamental_soule_form(&[int(1), int(0), int(0)]).unwrap();
        let p = project_to_sublattice(&q, (&e2, &e3)).unwrap();
        assert_eq!(p, HPoint::new(rat(1, 2), rat(3, 4)).unwrap());
        assert!(p.on_fundamental_arc());
        assert!(project_to_sublattice(&q, (&e2, &e2)).is_err());
    }

    #[test]
    fn soule_form_of_general_chart() {
        let basis = [IntVec([1, 0, 0]), IntVec([4, 1, 0]), IntVec([2, 1, 1])];
        let chart = CubeChart::new(basis, [int(0), int(0), int(0)]).unwrap();
        let q = soule_form(&chart).unwrap();
        let mut want: Vec<_> = basis.iter().map(|b| b.canon().unwrap()).collect();
        want.sort();
        assert_eq!(q.arithmetic_minimum().vectors, want);
        assert_eq!(q.arithmetic_minimum().min_sq, int(2));
        let bad = CubeChart::new(basis, [int(-1), int(-1), int(-1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn inverse_is_inverse() {
        let b = [IntVec([1, 0, 0]), IntVec([4, 1, 0]), IntVec([2, 1, 1])];
        let inv = integer_inverse(&b).unwrap();
        // b * inv = I: column c of the product is b applied to inv[c].
        for c in 0..3 {
            let mut col = [0i64; 3];
            for k in 0..3 {
                for r in 0..3 {
                    col[r] += b[k].0[r] * inv[c].0[k];
                }
            }
            assert_eq!(IntVec(col), IntVec::unit(c));
        }
    }

    #[test]
    fn associated_form_is_rotation_invariant() {
        let g = [
            [int(2), int(1), int(0)],
            [int(0), int(1), rat(1, 2)],
            [int(1), int(0), int(3)],
        ];
        let q = QuadForm::associated(&g).unwrap();
        // g k for k the signed permutation e1 -> -e3, e2 -> e1, e3 -> e2
        let gk = [
            [-g[2][0].clone(), -g[2][1].clone(), -g[2][2].clone()],
            g[0].clone(),
            g[1].clone(),
        ];
        assert_eq!(QuadForm::associated(&gk).unwrap(), q);
    }

    #[test]
    fn json_encoding() {
        let q = fundamental_soule_form(&[rat(1, 2), int(0), int(0)]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"[["2","0","0"],["0","2","1/2"],["0","1/2","2"]]"#);
        let back: QuadForm<3> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
