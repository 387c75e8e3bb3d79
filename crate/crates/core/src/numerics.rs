//! Dense real-symmetric eigensolver and bracketing root finder.

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense, exactly symmetric real matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds from the upper triangle `f(i, j)` with `i <= j`, mirrored.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rejects rows that are not square or not exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("matrix must be square and non-empty".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SymmetricMatrix {
            dim,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both (i, j) and (j, i).
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let x = self.get(i, j);
        if i == j {
            self.set(i, i, x + v);
        } else {
            self.set(i, j, x + v);
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> SymmetricMatrix {
        SymmetricMatrix::from_upper(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// `Pᵀ A P` for a row-major list of basis column vectors `cols` (each of length dim).
    pub fn project(&self, cols: &[Vec<f64>]) -> SymmetricMatrix {
        let av: Vec<Vec<f64>> = cols.iter().map(|v| self.mul_vec(v)).collect();
        SymmetricMatrix::from_upper(cols.len(), |a, b| dot(&cols[a], &av[b]))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.dim)
            .map(|row| dot(row, v))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues ascending; `vectors[k]` is the unit eigenvector of `values[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// ‖A − VΛVᵀ‖_F.
    pub fn reconstruction_error(&self, m: &SymmetricMatrix) -> f64 {
        let n = m.dim();
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n)
                    .map(|k| self.vectors[k][i] * self.values[k] * self.vectors[k][j])
                    .sum();
                err += (m.get(i, j) - r).powi(2);
            }
        }
        err.sqrt()
    }
}

const MAX_SWEEPS: usize = 100;
const SIGN_EPS: f64 = 1e-12;
const CLUSTER_RTOL: f64 = 1e-10;

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Output ordering is deterministic: values ascending, each vector's first
/// component with magnitude above 1e-12 is positive, and vectors inside a
/// degenerate cluster are ordered by the index of that component.
pub fn eig_sym(m: &SymmetricMatrix) -> Result<EigenSystem> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.dim();
    let mut a = m.rows();
    // v[i][k]: component i of eigenvector k
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i][k]).collect();
            if let Some(&lead) = col.iter().find(|x| x.abs() > SIGN_EPS) {
                if lead < 0.0 {
                    col.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (a[k][k], col)
        })
        .collect();

    let lead_index = |col: &[f64]| col.iter().position(|x| x.abs() > SIGN_EPS).unwrap_or(0);
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    // order inside degenerate clusters
    let tol = CLUSTER_RTOL * scale.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 <= tol {
            end += 1;
        }
        pairs[start..end].sort_by_key(|p| lead_index(&p.1));
        start = end;
    }

    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenSystem { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_sym(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    eig_sym(m).map(|e| e.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub x: f64,
    /// |f(x)| at the returned point.
    pub residual: f64,
    /// Final bracket.
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` until the bracket is no wider than `tol`.
pub fn find_root(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    if !(lo.is_finite() && hi.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput("bracket and tolerance must be finite, tol > 0".into()));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(RootResult { x: lo, residual: 0.0, lo, hi: lo, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(RootResult { x: hi, residual: 0.0, lo: hi, hi, iterations: 0 });
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::Bracketing { lo, hi, f_lo, f_hi });
    }

    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(RootResult { x: mid, residual: 0.0, lo: mid, hi: mid, iterations });
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(RootResult {
        x,
        residual: f(x).abs(),
        lo,
        hi,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn check_orthonormal(e: &EigenSystem) {
        for a in 0..e.dim() {
            for b in 0..e.dim() {
                let d = dot(&e.vectors[a], &e.vectors[b]);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-10, "({a},{b}) = {d}");
            }
        }
    }

    #[test]
    fn identity_gives_standard_basis() {
        let e = eig_sym(&SymmetricMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        for (k, v) in e.vectors.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                assert_eq!(x, if i == k { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn diagonal_sorted() {
        let e = eig_sym(&SymmetricMatrix::from_diagonal(&[3.0, 1.0, 4.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.vectors[0], vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_by_two_off_diagonal() {
        let m = SymmetricMatrix::from_rows(&[vec![0.0, 58.0], vec![58.0, 0.0]]).unwrap();
        let e = eig_sym(&m).unwrap();
        assert_relative_eq!(e.values[0], -58.0, max_relative = 1e-14);
        assert_relative_eq!(e.values[1], 58.0, max_relative = 1e-14);
        check_orthonormal(&e);
        // first nonzero component positive
        assert!(e.vectors[0][0] > 0.0 && e.vectors[1][0] > 0.0);
    }

    #[test]
    fn rejects_non_finite_and_asymmetric() {
        let mut m = SymmetricMatrix::zeros(2);
        m.set(0, 1, f64::NAN);
        assert!(matches!(eig_sym(&m), Err(Error::InvalidInput(_))));
        assert!(SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
    }

    #[test]
    fn one_by_one() {
        let e = eig_sym(&SymmetricMatrix::from_diagonal(&[-7.0])).unwrap();
        assert_eq!(e.values, vec![-7.0]);
        assert_eq!(e.vectors, vec![vec![1.0]]);
    }

    fn random_sym(n: usize, entries: &[f64]) -> SymmetricMatrix {
        let mut it = entries.iter().cycle();
        SymmetricMatrix::from_upper(n, |_, _| *it.next().unwrap())
    }

    proptest! {
        #[test]
        fn decomposition_invariants(n in 1usize..17, entries in prop::collection::vec(-1e4f64..1e4, 1..300)) {
            let m = random_sym(n, &entries);
            let e = eig_sym(&m).unwrap();
            let norm = m.frobenius_norm().max(1e-300);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(e.reconstruction_error(&m) < 1e-9 * norm);
            let tr: f64 = e.values.iter().sum();
            prop_assert!((tr - m.trace()).abs() <= 1e-9 * norm);
            for (k, v) in e.vectors.iter().enumerate() {
                let av = m.mul_vec(v);
                let res: f64 = av.iter().zip(v).map(|(a, x)| (a - e.values[k] * x).powi(2)).sum::<f64>().sqrt();
                prop_assert!(res < 1e-8 * norm);
                for w in &e.vectors[..k] {
                    prop_assert!(dot(v, w).abs() < 1e-10);
                }
                prop_assert!((dot(v, v) - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn permutation_leaves_spectrum(entries in prop::collection::vec(-100f64..100.0, 10), perm in Just([2usize, 0, 3, 1])) {
            let m = random_sym(4, &entries);
            let p = SymmetricMatrix::from_upper(4, |i, j| m.get(perm[i], perm[j]));
            let a = eigvals_sym(&m).unwrap();
            let b = eigvals_sym(&p).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-10 * (1.0 + x.abs()));
            }
            // eigenvectors permute with the basis
            let em = eig_sym(&m).unwrap();
            let ep = eig_sym(&p).unwrap();
            for k in 0..4 {
                if k > 0 && (a[k] - a[k - 1]).abs() < 1e-6 { continue; }
                if k < 3 && (a[k + 1] - a[k]).abs() < 1e-6 { continue; }
                let permuted: Vec<f64> = (0..4).map(|i| em.vectors[k][perm[i]]).collect();
                prop_assert!((dot(&permuted, &ep.vectors[k]).abs() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn root_linear_and_sqrt2() {
        let r = find_root(|x| x - 3.0, 0.0, 10.0, 1e-9).unwrap();
        assert!((r.x - 3.0).abs() < 1e-9);
        assert!(r.hi - r.lo <= 1e-9);
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(r.x, std::f64::consts::SQRT_2, max_relative = 1e-11);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn root_requires_sign_change() {
        assert!(matches!(
            find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(Error::Bracketing { .. })
        ));
    }

    #[test]
    fn bracket_shrinks_monotonically() {
        let mut evals = Vec::new();
        let r = find_root(
            |x| {
                evals.push(x);
                x.powi(3) - 5.0
            },
            0.0,
            4.0,
            1e-10,
        )
        .unwrap();
        // evals: lo, hi, then midpoints; successive midpoints move by half the previous move
        let mids = &evals[2..evals.len() - 1];
        let steps: Vec<f64> = mids.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in steps.windows(2) {
            assert_relative_eq!(w[1], 0.5 * w[0], max_relative = 1e-9);
        }
        assert!(r.hi - r.lo <= 1e-10);
        assert!((r.x - 5f64.cbrt()).abs() < 1e-10);
    }
}
