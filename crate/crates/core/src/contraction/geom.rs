//! Exact affine geometry in a cube chart.

use num_traits::{Signed, Zero};

use crate::rational::{int, Rat};

pub type Pt = [Rat; 3];

pub fn pt(x: i64, y: i64, z: i64) -> Pt {
    [int(x), int(y), int(z)]
}

pub fn origin() -> Pt {
    [Rat::zero(), Rat::zero(), Rat::zero()]
}

pub fn add(a: &Pt, b: &Pt) -> Pt {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn sub(a: &Pt, b: &Pt) -> Pt {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn scale(a: &Pt, s: &Rat) -> Pt {
    [&a[0] * s, &a[1] * s, &a[2] * s]
}

/// `a + s (b - a)`.
pub fn lerp(a: &Pt, b: &Pt, s: &Rat) -> Pt {
    add(a, &scale(&sub(b, a), s))
}

pub fn dot(a: &Pt, b: &Pt) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn cross(a: &Pt, b: &Pt) -> Pt {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn det3(a: &Pt, b: &Pt, c: &Pt) -> Rat {
    dot(a, &cross(b, c))
}

pub fn is_zero(a: &Pt) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn centroid(ps: &[Pt]) -> Pt {
    let n = int(ps.len() as i64);
    let mut s = origin();
    for p in ps {
        s = add(&s, p);
    }
    [&s[0] / &n, &s[1] / &n, &s[2] / &n]
}

pub fn norm_f64(a: &Pt) -> f64 {
    crate::rational::to_f64(&dot(a, a)).sqrt()
}

/// Six times the signed volume of a tetrahedron.
pub fn tet_det(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> Rat {
    det3(&sub(b, a), &sub(c, a), &sub(d, a))
}

fn solve3(cols: [&Pt; 3], rhs: &Pt) -> Option<Pt> {
    let d = det3(cols[0], cols[1], cols[2]);
    if d.is_zero() {
        return None;
    }
    Some([
        det3(rhs, cols[1], cols[2]) / &d,
        det3(cols[0], rhs, cols[2]) / &d,
        det3(cols[0], cols[1], rhs) / &d,
    ])
}

/// Affine coordinates of `p` with respect to the vertices of a simplex,
/// if `p` lies in the simplex's affine hull.
pub fn barycentric(simplex: &[Pt], p: &Pt) -> Option<Vec<Rat>> {
    let k = simplex.len();
    let rel = sub(p, &simplex[0]);
    let mut mu: Vec<Rat> = match k {
        1 => {
            if !is_zero(&rel) {
                return None;
            }
            vec![]
        }
        2 => {
            let e = sub(&simplex[1], &simplex[0]);
            if !is_zero(&cross(&e, &rel)) {
                return None;
            }
            vec![dot(&rel, &e) / dot(&e, &e)]
        }
        3 => {
            let e1 = sub(&simplex[1], &simplex[0]);
            let e2 = sub(&simplex[2], &simplex[0]);
            let n = cross(&e1, &e2);
            if !dot(&n, &rel).is_zero() {
                return None;
            }
            let m = solve3([&e1, &e2, &n], &rel)?;
            vec![m[0].clone(), m[1].clone()]
        }
        4 => {
            let e1 = sub(&simplex[1], &simplex[0]);
            let e2 = sub(&simplex[2], &simplex[0]);
            let e3 = sub(&simplex[3], &simplex[0]);
            solve3([&e1, &e2, &e3], &rel)?.to_vec()
        }
        _ => return None,
    };
    let rest: Rat = mu.iter().fold(int(1), |acc, m| acc - m);
    mu.insert(0, rest);
    Some(mu)
}

pub fn in_simplex(simplex: &[Pt], p: &Pt) -> bool {
    barycentric(simplex, p).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
}

/// Closed interval of `t` with `p + t d` in the simplex, if non-empty.
pub fn line_interval(simplex: &[Pt], p: &Pt, d: &Pt) -> Option<(Rat, Rat)> {
    // Affine coordinates along the line are affine in t wherever the line
    // stays in the affine hull; collect the constraints `a + b t >= 0`.
    let k = simplex.len();
    let constraints: Vec<(Rat, Rat)> = match k {
        4 => {
            let l0 = barycentric(simplex, p)?;
            let q = add(p, d);
            let l1 = barycentric(simplex, &q)?;
            l0.into_iter().zip(l1).map(|(a, b)| { let s = &b - &a; (a, s) }).collect()
        }
        2 | 3 => {
            let e1 = sub(&simplex[1], &simplex[0]);
            let normal_dir = if k == 3 {
                cross(&e1, &sub(&simplex[2], &simplex[0]))
            } else {
                cross(&e1, d)
            };
            if k == 3 {
                let nd = dot(&normal_dir, d);
                let np = dot(&normal_dir, &sub(p, &simplex[0]));
                if !nd.is_zero() {
                    let t = -np / nd;
                    let q = add(p, &scale(d, &t));
                    return in_simplex(simplex, &q).then(|| (t.clone(), t));
                }
                if !np.is_zero() {
                    return None;
                }
            } else if !is_zero(&normal_dir) {
                // Line and segment not parallel: at most one crossing.
                let rel = sub(&simplex[0], p);
                let n = cross(d, &e1);
                // p + t d = s0 + mu e1; take components along n x e1 and n x d.
                let t = dot(&cross(&rel, &e1), &n) / dot(&n, &n);
                let q = add(p, &scale(d, &t));
                return in_simplex(simplex, &q).then(|| (t.clone(), t));
            } else if !is_zero(&cross(&e1, &sub(p, &simplex[0]))) {
                return None;
            }
            let l0 = barycentric(simplex, p)?;
            let l1 = barycentric(simplex, &add(p, d))?;
            l0.into_iter().zip(l1).map(|(a, b)| { let s = &b - &a; (a, s) }).collect()
        }
        1 => {
            let rel = sub(&simplex[0], p);
            if !is_zero(&cross(&rel, d)) {
                return None;
            }
            if is_zero(d) {
                return is_zero(&rel).then(|| (Rat::zero(), Rat::zero()));
            }
            let t = dot(&rel, d) / dot(d, d);
            return Some((t.clone(), t));
        }
        _ => return None,
    };
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (a, b) in constraints {
        if b.is_zero() {
            if a.is_negative() {
                return None;
            }
            continue;
        }
        let t = -&a / &b;
        if b.is_positive() {
            if lo.as_ref().is_none_or(|l| t > *l) {
                lo = Some(t);
            }
        } else if hi.as_ref().is_none_or(|h| t < *h) {
            hi = Some(t);
        }
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn barycentric_coordinates() {
        let tet = [pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)];
        let p = [rat(1, 4), rat(1, 4), rat(1, 4)];
        assert_eq!(barycentric(&tet, &p).unwrap(), vec![rat(1, 4); 4]);
        let tri = [pt(0, 0, 0), pt(2, 0, 0), pt(0, 2, 0)];
        assert!(in_simplex(&tri, &[int(1), int(1), int(0)]));
        assert!(!in_simplex(&tri, &[int(1), int(1), int(1)]));
        assert!(barycentric(&tri, &pt(0, 0, 1)).is_none());
    }

    #[test]
    fn line_intervals() {
        let tet = [pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)];
        let (lo, hi) = line_interval(&tet, &pt(-1, 0, 0), &[rat(1, 2), int(0), int(0)]).unwrap();
        assert_eq!((lo, hi), (int(2), int(4)));
        let tri = [pt(0, 0, 1), pt(1, 0, 1), pt(0, 1, 1)];
        let (lo, hi) = line_interval(&tri, &[rat(1, 4), rat(1, 4), int(0)], &pt(0, 0, 1)).unwrap();
        assert_eq!((lo, hi), (int(1), int(1)));
        // coplanar line through a triangle
        let (lo, hi) = line_interval(&tri, &pt(-1, 0, 1), &pt(1, 0, 0)).unwrap();
        assert_eq!((lo, hi), (int(1), int(2)));
        let seg = [pt(0, 0, 0), pt(0, 0, 2)];
        let (lo, hi) = line_interval(&seg, &pt(-1, 0, 1), &pt(1, 0, 0)).unwrap();
        assert_eq!((lo, hi), (int(1), int(1)));
        assert!(line_interval(&seg, &pt(-1, 0, 3), &pt(1, 0, 0)).is_none());
        let (lo, hi) = line_interval(&seg, &pt(0, 0, -1), &pt(0, 0, 1)).unwrap();
        assert_eq!((lo, hi), (int(1), int(3)));
    }
}
