//! Small dense integer and rational matrices, Smith normal form.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Q;

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend_from_slice(row);
        }
        IMat { rows: r, cols: c, data }
    }

    pub fn from_cols(cols: &[Vec<i64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_q(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + b * Q::from(*a))).collect()
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> IMat {
        IMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == (i == j) as i64))
    }

    pub fn pow(&self, e: u64) -> IMat {
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, searched up to `bound`.
    pub fn order(&self, bound: u64) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    pub fn det(&self) -> i64 {
        let q = QMat::from_imat(self);
        let d = q.det();
        assert!(d.is_integer());
        d.to_integer()
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<IMat> {
        let inv = QMat::from_imat(self).inverse()?;
        inv.to_imat()
    }

    /// Φ(A) for an integer polynomial given lowest degree first.
    pub fn poly_eval(&self, coeffs: &[i64]) -> IMat {
        let n = self.rows;
        let mut acc = IMat::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_imat(m: &IMat) -> Self {
        QMat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|x| Q::from(*x)).collect() }
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        QMat { rows: r, cols: c, data: rows.iter().flat_map(|x| x.iter().copied()).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }

    pub fn to_imat(&self) -> Option<IMat> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.to_integer()).collect() })
        } else {
            None
        }
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = Q::one() / self.get(r, c);
            for j in 0..self.cols {
                *self.at(r, j) *= inv;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(r, j);
                    *self.at(i, j) -= f * v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of {v : A v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return Q::zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let pv = m.get(c, c);
            det *= pv;
            for i in c + 1..n {
                let f = m.get(i, c) / pv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(c, j);
                    *m.at(i, j) -= f * v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMat> {
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at(i, j) = self.get(i, j);
            }
            *aug.at(i, n + i) = Q::one();
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.at(i, j) = aug.get(i, n + j);
            }
        }
        Some(out)
    }

    /// Solves A x = b, returning one solution if consistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate().take(self.rows) {
            for j in 0..self.cols {
                *aug.at(i, j) = self.get(i, j);
            }
            *aug.at(i, self.cols) = bi;
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in piv.iter().enumerate() {
            x[p] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// Intersection of subspaces given by spanning sets, as a basis.
pub fn intersect_kernels(mats: &[&QMat]) -> Vec<Vec<Q>> {
    let cols = mats[0].cols;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for m in mats {
        assert_eq!(m.cols, cols);
        for i in 0..m.rows {
            rows.push((0..cols).map(|j| m.get(i, j)).collect());
        }
    }
    if rows.is_empty() {
        return (0..cols).map(|i| (0..cols).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    }
    QMat::from_rows(&rows).nullspace()
}

/// Smith normal form `u * a * v = d` with unimodular `u`, `v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: Vec<i64>,
    pub u: IMat,
    pub v: IMat,
    pub v_inv: IMat,
}

pub fn smith_normal_form(a: &IMat) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IMat::identity(m);
    let mut v = IMat::identity(n);
    let mut vi = IMat::identity(n);

    fn row_op(x: &mut IMat, i: usize, j: usize, c: i64) {
        // row_i += c * row_j
        for k in 0..x.cols {
            let t = x[(j, k)];
            x[(i, k)] += c * t;
        }
    }
    fn col_op(x: &mut IMat, i: usize, j: usize, c: i64) {
        // col_i += c * col_j
        for k in 0..x.rows {
            let t = x[(k, j)];
            x[(k, i)] += c * t;
        }
    }
    fn swap_rows(x: &mut IMat, i: usize, j: usize) {
        for k in 0..x.cols {
            x.data.swap(i * x.cols + k, j * x.cols + k);
        }
    }
    fn swap_cols(x: &mut IMat, i: usize, j: usize) {
        for k in 0..x.rows {
            x.data.swap(k * x.cols + i, k * x.cols + j);
        }
    }
    fn neg_row(x: &mut IMat, i: usize) {
        for k in 0..x.cols {
            x[(i, k)] = -x[(i, k)];
        }
    }
    // column ops on d act on v from the right and on v^{-1} from the left
    fn c_add(d: &mut IMat, v: &mut IMat, vi: &mut IMat, i: usize, j: usize, c: i64) {
        col_op(d, i, j, c);
        col_op(v, i, j, c);
        row_op(vi, j, i, -c);
    }
    fn c_swap(d: &mut IMat, v: &mut IMat, vi: &mut IMat, i: usize, j: usize) {
        swap_cols(d, i, j);
        swap_cols(v, i, j);
        swap_rows(vi, i, j);
    }

    let r = m.min(n);
    let mut t = 0;
    while t < r {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)] != 0 && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        c_swap(&mut d, &mut v, &mut vi, t, pj);
        loop {
            let mut done = true;
            for i in t + 1..m {
                let q = Integer::div_floor(&d[(i, t)], &d[(t, t)]);
                if q != 0 {
                    row_op(&mut d, i, t, -q);
                    row_op(&mut u, i, t, -q);
                }
                if d[(i, t)] != 0 {
                    done = false;
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                }
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&d[(t, j)], &d[(t, t)]);
                if q != 0 {
                    c_add(&mut d, &mut v, &mut vi, j, t, -q);
                }
                if d[(t, j)] != 0 {
                    done = false;
                    c_swap(&mut d, &mut v, &mut vi, t, j);
                }
            }
            if done {
                // divisibility of the remaining block
                let mut fix = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if d[(i, j)] % d[(t, t)] != 0 {
                            fix = Some(i);
                            break 'scan;
                        }
                    }
                }
                match fix {
                    Some(i) => {
                        row_op(&mut d, t, i, 1);
                        row_op(&mut u, t, i, 1);
                    }
                    None => break,
                }
            }
        }
        if d[(t, t)] < 0 {
            neg_row(&mut d, t);
            neg_row(&mut u, t);
        }
        t += 1;
    }
    let diag = (0..r).map(|i| d[(i, i)]).collect();
    Smith { d: diag, u, v, v_inv: vi }
}

/// Reduces a rational to [0, 1).
pub fn frac(q: Q) -> Q {
    q - Q::from(q.floor().to_integer())
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

pub fn is_zero_mod1(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn lcm_denoms(v: &[Q]) -> i64 {
    v.iter().fold(1i64, |l, x| l.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_reconstructs() {
        let a = IMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, vec![2, 6, 12]);
        let prod = s.u.mul(&a).mul(&s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[(i, j)], if i == j { s.d[i] } else { 0 });
            }
        }
        assert!(s.v.mul(&s.v_inv).is_identity());
    }

    #[test]
    fn nullspace_dim() {
        let a = QMat::from_imat(&IMat::from_rows(&[vec![1, 1, 0], vec![0, 0, 0]]));
        assert_eq!(a.nullspace().len(), 2);
    }
}
