//! Integer row-style Hermite normal form and the lattice operations built on it.
//!
//! Vectors are rows. A lattice is the integer row span of a matrix.

use crate::error::{Error, Result};

pub type Vector = Vec<i128>;

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `row[i] -= f * other[i]`
fn axpy(row: &mut [i128], f: i128, other: &[i128]) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for (x, y) in row.iter_mut().zip(other) {
        *x = add(*x, -mul(f, *y)?)?;
    }
    Ok(())
}

fn negate(row: &mut [i128]) {
    for x in row {
        *x = -*x;
    }
}

/// `U * A = H`, with `H` in row Hermite normal form and `U` unimodular.
///
/// The first `rank` rows of `h` are nonzero; the leading entry of row `i` sits
/// in column `pivots[i]`, is positive, and entries above it are reduced into
/// `[0, pivot)`.
#[derive(Debug, Clone)]
pub struct Hnf {
    pub h: Vec<Vector>,
    pub u: Vec<Vector>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Hnf {
    pub fn new(rows: &[Vector], ncols: usize) -> Result<Self> {
        let m = rows.len();
        let mut h: Vec<Vector> = rows.to_vec();
        for r in &h {
            debug_assert_eq!(r.len(), ncols);
        }
        let mut u: Vec<Vector> = (0..m)
            .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            if r == m {
                break;
            }
            loop {
                // smallest nonzero entry at or below row r
                let best = (r..m)
                    .filter(|&i| h[i][col] != 0)
                    .min_by_key(|&i| h[i][col].unsigned_abs());
                let Some(best) = best else { break };
                h.swap(r, best);
                u.swap(r, best);
                let mut done = true;
                for i in r + 1..m {
                    if h[i][col] != 0 {
                        let f = h[i][col] / h[r][col];
                        let (top_h, rest_h) = h.split_at_mut(i);
                        axpy(&mut rest_h[0], f, &top_h[r])?;
                        let (top_u, rest_u) = u.split_at_mut(i);
                        axpy(&mut rest_u[0], f, &top_u[r])?;
                        if h[i][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if h[r][col] == 0 {
                continue;
            }
            if h[r][col] < 0 {
                negate(&mut h[r]);
                negate(&mut u[r]);
            }
            let p = h[r][col];
            for i in 0..r {
                let f = h[i][col].div_euclid(p);
                if f != 0 {
                    let (top_h, rest_h) = h.split_at_mut(r);
                    axpy(&mut top_h[i], f, &rest_h[0])?;
                    let (top_u, rest_u) = u.split_at_mut(r);
                    axpy(&mut top_u[i], f, &rest_u[0])?;
                }
            }
            pivots.push(col);
            r += 1;
        }
        Ok(Hnf {
            h,
            u,
            pivots,
            ncols,
        })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nonzero HNF rows: the canonical basis of the row lattice.
    pub fn basis(&self) -> Vec<Vector> {
        self.h[..self.rank()].to_vec()
    }

    /// Integer coefficients `lambda` with `lambda * H_basis = t`, if any.
    pub fn solve_in_basis(&self, t: &[i128]) -> Result<Option<Vector>> {
        let mut rem = t.to_vec();
        let mut lambda = Vec::with_capacity(self.rank());
        let mut next = 0;
        for (i, &pc) in self.pivots.iter().enumerate() {
            // columns before this pivot must already be cleared
            if rem[next..pc].iter().any(|&x| x != 0) {
                return Ok(None);
            }
            let p = self.h[i][pc];
            if rem[pc] % p != 0 {
                return Ok(None);
            }
            let f = rem[pc] / p;
            axpy(&mut rem, f, &self.h[i])?;
            lambda.push(f);
            next = pc + 1;
        }
        if rem.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(lambda))
    }

    /// Integer coefficients `mu` on the original rows with `mu * A = t`, if any.
    pub fn solve(&self, t: &[i128]) -> Result<Option<Vector>> {
        let Some(lambda) = self.solve_in_basis(t)? else {
            return Ok(None);
        };
        let m = self.u.len();
        let mut mu = vec![0i128; m];
        for (i, &l) in lambda.iter().enumerate() {
            axpy(&mut mu, -l, &self.u[i])?;
        }
        Ok(Some(mu))
    }

    pub fn contains(&self, t: &[i128]) -> Result<bool> {
        Ok(self.solve_in_basis(t)?.is_some())
    }

    /// Basis of the left kernel `{ mu : mu * A = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vector> {
        self.u[self.rank()..].to_vec()
    }
}

pub fn hnf_basis(rows: &[Vector], ncols: usize) -> Result<Vec<Vector>> {
    Ok(Hnf::new(rows, ncols)?.basis())
}

pub fn same_lattice(a: &[Vector], b: &[Vector], ncols: usize) -> Result<bool> {
    Ok(hnf_basis(a, ncols)? == hnf_basis(b, ncols)?)
}

pub fn is_sublattice(a: &[Vector], b: &[Vector], ncols: usize) -> Result<bool> {
    let hb = Hnf::new(b, ncols)?;
    for r in a {
        if !hb.contains(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of the intersection of two row lattices in `Z^ncols`.
pub fn intersect(a: &[Vector], b: &[Vector], ncols: usize) -> Result<Vec<Vector>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let stacked: Vec<Vector> = a.iter().chain(b).cloned().collect();
    let ker = Hnf::new(&stacked, ncols)?.left_kernel();
    let mut out = Vec::with_capacity(ker.len());
    for k in ker {
        let mut v = vec![0i128; ncols];
        for (coef, row) in k.iter().zip(a) {
            axpy(&mut v, -*coef, row)?;
        }
        out.push(v);
    }
    hnf_basis(&out, ncols)
}

/// Basis of the integer solutions `x` of `A x = 0` (right kernel).
pub fn right_kernel(a: &[Vector], ncols: usize) -> Result<Vec<Vector>> {
    let t = transpose(a, ncols);
    Ok(Hnf::new(&t, a.len())?.left_kernel())
}

pub fn transpose(a: &[Vector], ncols: usize) -> Vec<Vector> {
    (0..ncols)
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

pub fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (x, y)| add(acc, mul(*x, *y)?))
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn det(a: &[Vector]) -> Result<i128> {
    let n = a.len();
    if n == 0 {
        return Ok(1);
    }
    let mut m: Vec<Vector> = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(sw) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = add(mul(m[i][j], m[k][k])?, -mul(m[i][k], m[k][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i128]]) -> Vec<Vector> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn hnf_small() {
        let a = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let h = Hnf::new(&a, 3).unwrap();
        assert_eq!(h.rank(), 3);
        assert_eq!(h.basis(), mat(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
        assert_eq!(det(&a).unwrap(), -144);
    }

    #[test]
    fn membership_needs_integrality() {
        let a = mat(&[&[2, 0], &[0, 2]]);
        let h = Hnf::new(&a, 2).unwrap();
        assert!(h.contains(&[4, -2]).unwrap());
        // rationally solvable, not integrally
        assert!(!h.contains(&[1, 0]).unwrap());
    }

    #[test]
    fn intersection_of_coprime_scalings() {
        let a = mat(&[&[2, 0], &[0, 1]]);
        let b = mat(&[&[3, 0], &[0, 1]]);
        assert_eq!(intersect(&a, &b, 2).unwrap(), mat(&[&[6, 0], &[0, 1]]));
    }

    #[test]
    fn right_kernel_of_sum() {
        let k = right_kernel(&mat(&[&[1, 1, 1]]), 3).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<i128>(), 0);
        }
    }

    #[test]
    fn det_signs() {
        assert_eq!(det(&mat(&[&[0, 2], &[1, 0]])).unwrap(), -2);
        assert_eq!(det(&mat(&[&[1, 2], &[2, 0]])).unwrap(), -4);
        assert_eq!(det(&mat(&[&[1, 1], &[2, 1]])).unwrap(), -1);
        assert_eq!(det(&mat(&[&[1, 0], &[2, 2]])).unwrap(), 2);
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])).unwrap(), 0);
    }

    fn small_matrix() -> impl Strategy<Value = (Vec<Vector>, usize)> {
        (1usize..5, 1usize..5).prop_flat_map(|(m, n)| {
            (
                proptest::collection::vec(proptest::collection::vec(-6i128..7, n), m),
                Just(n),
            )
        })
    }

    proptest! {
        #[test]
        fn transform_reproduces_hnf((a, n) in small_matrix()) {
            let h = Hnf::new(&a, n).unwrap();
            for (urow, hrow) in h.u.iter().zip(&h.h) {
                let mut v = vec![0i128; n];
                for (c, r) in urow.iter().zip(&a) {
                    axpy(&mut v, -*c, r).unwrap();
                }
                prop_assert_eq!(&v, hrow);
            }
            prop_assert_eq!(det(&h.u).unwrap().abs(), 1);
        }

        #[test]
        fn solve_round_trips((a, n) in small_matrix(), coefs in proptest::collection::vec(-4i128..5, 5)) {
            let mut t = vec![0i128; n];
            for (c, r) in coefs.iter().zip(&a) {
                axpy(&mut t, -*c, r).unwrap();
            }
            let h = Hnf::new(&a, n).unwrap();
            let mu = h.solve(&t).unwrap().expect("combination must be a member");
            let mut back = vec![0i128; n];
            for (c, r) in mu.iter().zip(&a) {
                axpy(&mut back, -*c, r).unwrap();
            }
            prop_assert_eq!(back, t);
        }

        #[test]
        fn intersection_lies_in_both((a, n) in small_matrix(), (b, m) in small_matrix()) {
            prop_assume!(n == m);
            let c = intersect(&a, &b, n).unwrap();
            prop_assert!(is_sublattice(&c, &a, n).unwrap());
            prop_assert!(is_sublattice(&c, &b, n).unwrap());
        }
    }
}
