//! Linear solvers for the shifted Hamiltonians arising in implicit time stepping.

use crate::domain::Grid;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Solves the symmetric tridiagonal system with diagonal `diag`, constant
/// off-diagonal `off` and right-hand side `rhs`. Fails if a pivot is not
/// strictly positive, which flags loss of positive definiteness.
pub fn thomas_spd(diag: &[f64], off: f64, rhs: &[f64], out: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut pivot = diag[0];
    if !(pivot > 0.0) {
        return Err(Error::LinearSolve(format!("non-positive pivot {pivot} at row 0")));
    }
    c[0] = off / pivot;
    out[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - off * c[i - 1];
        if !(pivot > 0.0) {
            return Err(Error::LinearSolve(format!("non-positive pivot {pivot} at row {i}")));
        }
        c[i] = off / pivot;
        out[i] = (rhs[i] - off * out[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        out[i] -= c[i] * out[i + 1];
    }
    Ok(())
}

fn axis_operator(h: f64, v: &[f64]) -> DMatrix<f64> {
    let n = v.len();
    let c = 0.5 / (h * h);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = 2.0 * c + v[i];
        if i + 1 < n {
            m[(i, i + 1)] = -c;
            m[(i + 1, i)] = -c;
        }
    }
    m
}

/// Exact inverse of `I + dt (K_x (+) K_y)` on a 2D grid, where
/// `K_j = -1/2 D_jj + V_j`, by fast diagonalization.
#[derive(Clone, Debug)]
pub struct FastDiagonalization {
    qx: DMatrix<f64>,
    qy_t: DMatrix<f64>,
    qy: DMatrix<f64>,
    lx: Vec<f64>,
    ly: Vec<f64>,
}

impl FastDiagonalization {
    pub fn new(grid: &Grid, parts: &[Vec<f64>]) -> Result<Self> {
        if grid.dim() != 2 || parts.len() != 2 {
            return Err(Error::InvalidGrid("fast diagonalization needs a 2D grid".into()));
        }
        let ex = SymmetricEigen::new(axis_operator(grid.axis(0).h(), &parts[0]));
        let ey = SymmetricEigen::new(axis_operator(grid.axis(1).h(), &parts[1]));
        Ok(Self {
            qy_t: ey.eigenvectors.transpose(),
            qx: ex.eigenvectors,
            qy: ey.eigenvectors,
            lx: ex.eigenvalues.iter().copied().collect(),
            ly: ey.eigenvalues.iter().copied().collect(),
        })
    }

    pub fn apply(&self, dt: f64, r: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.lx.len(), self.ly.len());
        let rm = DMatrix::from_row_slice(nx, ny, r);
        let mut t = self.qx.tr_mul(&rm) * &self.qy;
        for j in 0..ny {
            for i in 0..nx {
                t[(i, j)] /= 1.0 + dt * (self.lx[i] + self.ly[j]);
            }
        }
        let m = (&self.qx * t) * &self.qy_t;
        for i in 0..nx {
            for j in 0..ny {
                out[i * ny + j] = m[(i, j)];
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned conjugate gradients. `x` holds the initial guess on entry.
/// Stops when `||b - A x|| <= tol ||b||`; returns the iteration count.
pub fn pcg<A, P>(apply: A, precond: P, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<usize>
where
    A: Fn(&[f64], &mut [f64]),
    P: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let mut r = vec![0.0; n];
    apply(x, &mut r);
    r.iter_mut().zip(b).for_each(|(r, b)| *r = b - *r);
    let mut z = vec![0.0; n];
    precond(&r, &mut z);
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        if dot(&r, &r).sqrt() <= tol * bnorm {
            return Ok(it);
        }
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::LinearSolve(format!(
                "operator lost positive definiteness (p'Ap = {pap})"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        precond(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if dot(&r, &r).sqrt() <= tol * bnorm {
        return Ok(max_iter);
    }
    Err(Error::LinearSolve(format!(
        "conjugate gradients did not reach {tol:e} in {max_iter} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::neg_half_laplacian;

    #[test]
    fn thomas_matches_dense_solve() {
        let diag = [4.0, 5.0, 3.0, 6.0, 4.5];
        let off = -1.2;
        let rhs = [1.0, -2.0, 0.5, 3.0, 1.0];
        let mut x = [0.0; 5];
        thomas_spd(&diag, off, &rhs, &mut x).unwrap();
        for i in 0..5 {
            let mut ax = diag[i] * x[i];
            if i > 0 {
                ax += off * x[i - 1];
            }
            if i < 4 {
                ax += off * x[i + 1];
            }
            assert!((ax - rhs[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn thomas_flags_indefinite() {
        let mut x = [0.0; 3];
        assert!(thomas_spd(&[1.0, 1.0, 1.0], -2.0, &[1.0; 3], &mut x).is_err());
    }

    #[test]
    fn fast_diagonalization_inverts_separable_operator() {
        let g = Grid::rectangle((-2.0, 2.0), (-1.0, 3.0), [11, 14]).unwrap();
        let parts = vec![
            g.axis(0).coords().iter().map(|x| x * x).collect::<Vec<_>>(),
            g.axis(1).coords().iter().map(|y| 0.3 * y * y).collect::<Vec<_>>(),
        ];
        let fd = FastDiagonalization::new(&g, &parts).unwrap();
        let dt = 0.07;
        let b = g.sample(|p| (p[0] * 2.0).sin() + p[1]);
        let mut x = vec![0.0; b.len()];
        fd.apply(dt, &b, &mut x);
        let mut ax = vec![0.0; b.len()];
        neg_half_laplacian(&g, &x, &mut ax);
        for i in 0..b.len() {
            let [ix, iy] = g.unflatten(i);
            let lhs = x[i] + dt * (ax[i] + (parts[0][ix] + parts[1][iy]) * x[i]);
            assert!((lhs - b[i]).abs() < 1e-11, "{lhs} vs {}", b[i]);
        }
    }

    #[test]
    fn pcg_solves_spd_system() {
        let n = 50;
        let apply = |x: &[f64], out: &mut [f64]| {
            for i in 0..n {
                let mut v = (3.0 + i as f64 * 0.1) * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= x[i + 1];
                }
                out[i] = v;
            }
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let mut x = vec![0.0; n];
        pcg(apply, |r, z| z.copy_from_slice(r), &b, &mut x, 1e-13, 200).unwrap();
        let mut ax = vec![0.0; n];
        apply(&x, &mut ax);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-11);
        }
    }
}
