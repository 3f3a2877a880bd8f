//! Sparse symmetric positive-definite systems and their solution.
//!
//! Systems are assembled as triplets, compressed to CSR, constrained by
//! symmetric Dirichlet elimination and solved either by a dense LDLT
//! factorization (small systems) or by conjugate gradients with a symmetric
//! Gauss-Seidel (SSOR) preconditioner. Both paths sit behind [`solve_spd`]
//! and are bit-deterministic for fixed input.

use crate::error::{Error, Result};

/// Problem size below which the dense direct path is used.
const DENSE_LIMIT: usize = 600;

/// Triplet (COO) accumulator for finite-element assembly.
#[derive(Debug, Clone)]
pub struct TripletMatrix {
    n: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl TripletMatrix {
    pub fn new(n: usize) -> Self {
        TripletMatrix {
            n,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        TripletMatrix {
            n,
            entries: Vec::with_capacity(cap),
        }
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.n && col < self.n);
        if value != 0.0 {
            self.entries.push((row as u32, col as u32, value));
        }
    }

    pub fn to_csr(&self) -> CsrMatrix {
        CsrMatrix::from_triplets(self.n, &self.entries)
    }
}

/// Compressed sparse row matrix with sorted column indices per row.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    /// Compresses triplets, summing duplicates.
    pub fn from_triplets(n: usize, entries: &[(u32, u32, f64)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in entries {
            counts[r as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0u32; entries.len()];
        let mut vals = vec![0.0f64; entries.len()];
        let mut cursor = counts.clone();
        for &(r, c, v) in entries {
            let k = cursor[r as usize];
            cols[k] = c;
            vals[k] = v;
            cursor[r as usize] += 1;
        }
        // Sort each row by column and merge duplicates in place.
        let mut out_cols = Vec::with_capacity(entries.len());
        let mut out_vals = Vec::with_capacity(entries.len());
        let mut row_ptr = vec![0usize; n + 1];
        let mut scratch: Vec<(u32, f64)> = Vec::new();
        for i in 0..n {
            scratch.clear();
            scratch.extend(
                cols[counts[i]..counts[i + 1]]
                    .iter()
                    .copied()
                    .zip(vals[counts[i]..counts[i + 1]].iter().copied()),
            );
            scratch.sort_unstable_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < scratch.len() {
                let c = scratch[k].0;
                let mut v = scratch[k].1;
                k += 1;
                while k < scratch.len() && scratch[k].0 == c {
                    v += scratch[k].1;
                    k += 1;
                }
                out_cols.push(c);
                out_vals.push(v);
            }
            row_ptr[i + 1] = out_cols.len();
        }
        CsrMatrix {
            n,
            row_ptr,
            cols: out_cols,
            vals: out_vals,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k] as usize];
            }
            y[i] = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[k] as usize == i {
                    d[i] = self.vals[k];
                }
            }
        }
        d
    }

    /// Largest relative asymmetry max |a_ij - a_ji| / max|a|.
    pub fn symmetry_error(&self) -> f64 {
        let mut amax = 0.0f64;
        for &v in &self.vals {
            amax = amax.max(v.abs());
        }
        if amax == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k] as usize;
                if j < i {
                    continue;
                }
                let aji = self.get(j, i);
                worst = worst.max((self.vals[k] - aji).abs());
            }
        }
        worst / amax
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.cols[lo..hi].binary_search(&(j as u32)) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0.0,
        }
    }
}

/// Linear system `A x = b` with `A` symmetric and an optional set of
/// Dirichlet constraints `x[dof] = value` applied by symmetric elimination.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub dirichlet: Vec<(usize, f64)>,
}

impl SparseSystem {
    pub fn new(matrix: CsrMatrix, rhs: Vec<f64>) -> Self {
        SparseSystem {
            matrix,
            rhs,
            dirichlet: Vec::new(),
        }
    }

    pub fn constrain(&mut self, dof: usize, value: f64) {
        self.dirichlet.push((dof, value));
    }

    /// Eliminates constrained dofs symmetrically: constrained rows/columns
    /// become identity, and known values move to the right-hand side. Keeps
    /// the matrix SPD if it was SPD on the free dofs.
    fn apply_constraints(&mut self) {
        if self.dirichlet.is_empty() {
            return;
        }
        let n = self.matrix.n;
        let mut fixed = vec![false; n];
        let mut value = vec![0.0; n];
        for &(dof, v) in &self.dirichlet {
            fixed[dof] = true;
            value[dof] = v;
        }
        let m = &mut self.matrix;
        for i in 0..n {
            for k in m.row_ptr[i]..m.row_ptr[i + 1] {
                let j = m.cols[k] as usize;
                if fixed[i] {
                    m.vals[k] = if i == j { 1.0 } else { 0.0 };
                } else if fixed[j] {
                    self.rhs[i] -= m.vals[k] * value[j];
                    m.vals[k] = 0.0;
                }
            }
        }
        for i in 0..n {
            if fixed[i] {
                self.rhs[i] = value[i];
            }
        }
    }
}

/// Solves an SPD system. Relative residual of the returned solution is
/// at most 1e-8; the result is deterministic for fixed input.
pub fn solve_spd(mut sys: SparseSystem) -> Result<Vec<f64>> {
    sys.apply_constraints();
    solve_csr_spd(&sys.matrix, &sys.rhs, None)
}

/// Same contract as [`solve_spd`] but with a warm-start guess for the
/// iterative path (used by the time stepper where fields evolve slowly).
pub fn solve_spd_guess(mut sys: SparseSystem, guess: &[f64]) -> Result<Vec<f64>> {
    sys.apply_constraints();
    let mut g = guess.to_vec();
    for &(dof, v) in &sys.dirichlet {
        g[dof] = v;
    }
    solve_csr_spd(&sys.matrix, &sys.rhs, Some(&g))
}

fn solve_csr_spd(a: &CsrMatrix, b: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
    let n = a.n;
    if b.len() != n {
        return Err(Error::numerical("rhs length does not match matrix size"));
    }
    if n <= DENSE_LIMIT {
        dense_ldlt_solve(a, b)
    } else {
        ssor_pcg(a, b, guess)
    }
}

fn dense_ldlt_solve(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n;
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            m[i * n + a.cols[k] as usize] = a.vals[k];
        }
    }
    // In-place LDLT without pivoting (valid for SPD input).
    for j in 0..n {
        let mut d = m[j * n + j];
        for k in 0..j {
            d -= m[j * n + k] * m[j * n + k] * m[k * n + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::numerical(format!(
                "matrix not positive definite at pivot {j} (d = {d})"
            )));
        }
        m[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= m[i * n + k] * m[j * n + k] * m[k * n + k];
            }
            m[i * n + j] = s / d;
        }
    }
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] = x[i] - m[i * n + k] * x[k];
        }
    }
    for i in 0..n {
        x[i] /= m[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            x[i] = x[i] - m[k * n + i] * x[k];
        }
    }
    Ok(x)
}

/// Conjugate gradients preconditioned by one symmetric Gauss-Seidel sweep.
fn ssor_pcg(a: &CsrMatrix, b: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
    let n = a.n;
    let diag = a.diagonal();
    for (i, &d) in diag.iter().enumerate() {
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::numerical(format!(
                "non-positive diagonal {d} at row {i}; system is not SPD"
            )));
        }
    }
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = match guess {
        Some(g) => g.to_vec(),
        None => vec![0.0; n],
    };
    let mut r = vec![0.0; n];
    a.matvec(&x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let target = 1e-10 * bnorm;
    let accept = 1e-8 * bnorm;
    let max_iter = (4 * n).clamp(200, 60_000);

    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];
    sgs_apply(a, &diag, &r, &mut z);
    p.copy_from_slice(&z);
    let mut rz = dot(&r, &z);
    let mut best = (norm2(&r), x.clone());

    for _ in 0..max_iter {
        if norm2(&r) <= target {
            return Ok(x);
        }
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::numerical(format!(
                "conjugate gradient breakdown (pAp = {pap}); system is not SPD"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rn = norm2(&r);
        if rn < best.0 {
            best = (rn, x.clone());
        }
        sgs_apply(a, &diag, &r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if best.0 <= accept {
        Ok(best.1)
    } else {
        Err(Error::numerical(format!(
            "conjugate gradient did not converge: residual {:.3e} of {:.3e} after {} iterations",
            best.0, bnorm, max_iter
        )))
    }
}

/// z = M^-1 r with M = (D+L) D^-1 (D+U), the SSOR preconditioner at omega = 1.
fn sgs_apply(a: &CsrMatrix, diag: &[f64], r: &[f64], z: &mut [f64]) {
    let n = a.n;
    for i in 0..n {
        let mut s = r[i];
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            let j = a.cols[k] as usize;
            if j >= i {
                break;
            }
            s -= a.vals[k] * z[j];
        }
        z[i] = s / diag[i];
    }
    for i in (0..n).rev() {
        let mut s = diag[i] * z[i];
        for k in (a.row_ptr[i]..a.row_ptr[i + 1]).rev() {
            let j = a.cols[k] as usize;
            if j <= i {
                break;
            }
            s -= a.vals[k] * z[j];
        }
        z[i] = s / diag[i];
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
