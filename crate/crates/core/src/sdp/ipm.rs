//! Dense primal-dual interior-point method for the small block SDPs this
//! crate assembles.
//!
//! Solves
//!     minimize    c . s
//!     subject to  sum_blocks <K_row,block, X_block> + sum coef * s = rhs_row
//!                 X_block >= 0 (complex Hermitian PSD), s >= 0 (scalars)
//!
//! with Nesterov-Todd scaling and a Mehrotra predictor-corrector step. The
//! Hermitian cones are handled natively (inner product Tr[A B]); constraint
//! coefficient matrices come from a shared dictionary so the Schur
//! complement assembles from per-block Gram tables instead of repeated
//! dense congruences. Problem sizes here stay tiny (blocks of dimension at
//! most 16, a few thousand rows), so everything is dense.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64 as C64;

/// One linear equality row. Matrix terms carry an implicit coefficient of 1
/// and reference the shared dictionary; a block may appear at most once.
#[derive(Debug, Clone, Default)]
pub(crate) struct Row {
    pub mat_terms: Vec<(usize, usize)>,
    pub scalar_terms: Vec<(usize, f64)>,
}

/// Conic problem data. Scalars are nonnegative one-dimensional cone
/// variables; the objective is linear in the scalars only.
#[derive(Debug, Clone)]
pub(crate) struct ConicProblem {
    pub mat_dims: Vec<usize>,
    pub words: Vec<DMatrix<C64>>,
    pub n_scalars: usize,
    pub objective_scalar: Vec<f64>,
    pub rows: Vec<Row>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IpmStatus {
    Converged,
    MaxIterations,
    NumericalTrouble,
}

#[derive(Debug, Clone)]
pub(crate) struct IpmSolution {
    pub status: IpmStatus,
    pub mat_blocks: Vec<DMatrix<C64>>,
    pub scalars: Vec<f64>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct IpmOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IpmOptions {
    fn default() -> Self {
        IpmOptions { tol: 1e-9, max_iter: 100 }
    }
}

struct BlockIndex {
    /// rows touching each matrix block, as (row id, word id)
    block_rows: Vec<Vec<(usize, usize)>>,
    /// rows touching each scalar, as (row id, coefficient)
    scalar_rows: Vec<Vec<(usize, f64)>>,
    /// distinct words used per block, and word id -> local index
    block_words: Vec<Vec<usize>>,
    block_word_local: Vec<Vec<usize>>,
}

fn build_index(p: &ConicProblem) -> BlockIndex {
    let nb = p.mat_dims.len();
    let mut block_rows = vec![Vec::new(); nb];
    let mut scalar_rows = vec![Vec::new(); p.n_scalars];
    let mut block_words = vec![Vec::new(); nb];
    let mut block_word_local = vec![vec![usize::MAX; p.words.len()]; nb];
    for (j, row) in p.rows.iter().enumerate() {
        for &(b, w) in &row.mat_terms {
            if block_word_local[b][w] == usize::MAX {
                block_word_local[b][w] = block_words[b].len();
                block_words[b].push(w);
            }
            block_rows[b].push((j, w));
        }
        for &(s, coef) in &row.scalar_terms {
            scalar_rows[s].push((j, coef));
        }
    }
    BlockIndex { block_rows, scalar_rows, block_words, block_word_local }
}

fn herm_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    // Tr[A B] for Hermitian A, B
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc.re
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest alpha with S + alpha * dS >= 0, given the Cholesky factor of S.
fn max_step(chol_l: &DMatrix<C64>, ds: &DMatrix<C64>) -> f64 {
    let b = chol_l
        .clone()
        .solve_lower_triangular(ds)
        .expect("cholesky factor is nonsingular");
    let c = chol_l
        .clone()
        .solve_lower_triangular(&b.adjoint())
        .expect("cholesky factor is nonsingular");
    let sym = herm_part(&c.adjoint());
    let min_eig = sym.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / min_eig
    }
}

struct Scaling {
    /// R with X = R Sigma R^H scaled coordinates
    r: DMatrix<C64>,
    r_inv: DMatrix<C64>,
    /// W = R R^H
    w: DMatrix<C64>,
    sigma: DVector<f64>,
    chol_x_l: DMatrix<C64>,
    chol_z_l: DMatrix<C64>,
}

fn nt_scaling(x: &DMatrix<C64>, z: &DMatrix<C64>) -> Option<Scaling> {
    let chol_x = Cholesky::new(x.clone())?;
    let chol_z = Cholesky::new(z.clone())?;
    let lx = chol_x.l();
    let lz = chol_z.l();
    let m = lz.adjoint() * &lx;
    let svd = m.svd(true, true);
    let u = svd.u?;
    let v_t = svd.v_t?;
    let sigma = svd.singular_values;
    if sigma.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return None;
    }
    let v = v_t.adjoint();
    let inv_sqrt = DMatrix::<C64>::from_diagonal(
        &sigma.map(|s| C64::new(1.0 / s.sqrt(), 0.0)).column(0).into_owned(),
    );
    // R = L_x V Sigma^{-1/2}; R^{-1} = Sigma^{-1/2} U^H L_z^H
    let r = &lx * &v * &inv_sqrt;
    let r_inv = &inv_sqrt * u.adjoint() * lz.adjoint();
    // consistency guard: R^{-1} X R^{-H} should be Sigma
    let w = &r * r.adjoint();
    let check = &r_inv * x * r_inv.adjoint();
    let mut dev = 0.0f64;
    for i in 0..check.nrows() {
        for j in 0..check.ncols() {
            let expect = if i == j { C64::new(sigma[i], 0.0) } else { C64::new(0.0, 0.0) };
            dev = dev.max((check[(i, j)] - expect).norm());
        }
    }
    if !dev.is_finite() || dev > 1e-6 * (1.0 + sigma.max()) {
        return None;
    }
    Some(Scaling { r, r_inv, w, sigma, chol_x_l: lx, chol_z_l: lz })
}

pub(crate) fn solve(problem: &ConicProblem, opts: IpmOptions) -> IpmSolution {
    let nb = problem.mat_dims.len();
    let p = problem.rows.len();
    let index = build_index(problem);
    let nu: f64 = problem.mat_dims.iter().sum::<usize>() as f64 + problem.n_scalars as f64;

    let b_norm = problem.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let c_norm = problem.objective_scalar.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    // cold start at identity
    let mut x: Vec<DMatrix<C64>> =
        problem.mat_dims.iter().map(|&d| DMatrix::identity(d, d)).collect();
    let mut z = x.clone();
    let mut xs = vec![1.0f64; problem.n_scalars];
    let mut zs = vec![1.0f64; problem.n_scalars];
    let mut y = vec![0.0f64; p];

    let apply_a = |xm: &[DMatrix<C64>], xsc: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; p];
        for (j, row) in problem.rows.iter().enumerate() {
            let mut acc = 0.0;
            for &(bidx, w) in &row.mat_terms {
                acc += inner(&problem.words[w], &xm[bidx]);
            }
            for &(s, coef) in &row.scalar_terms {
                acc += coef * xsc[s];
            }
            out[j] = acc;
        }
        out
    };

    // A^*(y) per block and per scalar
    let apply_at = |yv: &[f64]| -> (Vec<DMatrix<C64>>, Vec<f64>) {
        let mut mats: Vec<DMatrix<C64>> =
            problem.mat_dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        let mut scals = vec![0.0f64; problem.n_scalars];
        for (bidx, rows) in index.block_rows.iter().enumerate() {
            for &(j, w) in rows {
                let yj = yv[j];
                if yj != 0.0 {
                    mats[bidx] += &problem.words[w] * C64::new(yj, 0.0);
                }
            }
        }
        for (s, rows) in index.scalar_rows.iter().enumerate() {
            for &(j, coef) in rows {
                scals[s] += coef * yv[j];
            }
        }
        (mats, scals)
    };

    let mut best: Option<(f64, IpmSolution)> = None;
    let mut stalls = 0usize;
    let mut since_best = 0usize;
    let mut iterations = 0usize;

    for iter in 0..opts.max_iter {
        iterations = iter;
        // residuals
        let ax = apply_a(&x, &xs);
        let r_p: Vec<f64> = problem.rhs.iter().zip(ax.iter()).map(|(b, a)| b - a).collect();
        let (aty_m, aty_s) = apply_at(&y);
        // dual residual: C - A^*(y) - Z (objective on matrix blocks is zero)
        let r_d_m: Vec<DMatrix<C64>> =
            (0..nb).map(|i| -&aty_m[i] - &z[i]).collect();
        let r_d_s: Vec<f64> = (0..problem.n_scalars)
            .map(|s| problem.objective_scalar[s] - aty_s[s] - zs[s])
            .collect();

        let gap: f64 = (0..nb).map(|i| inner(&x[i], &z[i])).sum::<f64>()
            + xs.iter().zip(zs.iter()).map(|(a, b)| a * b).sum::<f64>();
        let mu = gap / nu;

        let pobj: f64 =
            problem.objective_scalar.iter().zip(xs.iter()).map(|(c, v)| c * v).sum();
        let dobj: f64 = problem.rhs.iter().zip(y.iter()).map(|(b, v)| b * v).sum();

        let rp_norm = r_p.iter().fold(0.0f64, |m, v| m.max(v.abs())) / (1.0 + b_norm);
        let rd_norm = (r_d_m.iter().map(max_abs).fold(0.0f64, f64::max))
            .max(r_d_s.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            / (1.0 + c_norm);
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs()));

        let snapshot = |status: IpmStatus| IpmSolution {
            status,
            mat_blocks: x.clone(),
            scalars: xs.clone(),
            primal_obj: pobj,
            dual_obj: dobj,
            primal_residual: rp_norm,
            dual_residual: rd_norm,
            mu,
            iterations: iter,
        };

        let merit = rp_norm.max(rd_norm).max(rel_gap);
        if best.as_ref().map_or(true, |(m, _)| merit < 0.9 * *m) {
            best = Some((merit, snapshot(IpmStatus::MaxIterations)));
            since_best = 0;
        } else {
            since_best += 1;
        }

        #[cfg(not(target_arch = "wasm32"))]
        if std::env::var_os("INCOMPAT_IPM_TRACE").is_some() {
            eprintln!(
                "ipm iter {iter:3}: rp {rp_norm:9.2e} rd {rd_norm:9.2e} gap {rel_gap:9.2e} mu {mu:9.2e}"
            );
        }

        if rp_norm <= opts.tol && rd_norm <= opts.tol && rel_gap <= opts.tol {
            return snapshot(IpmStatus::Converged);
        }

        // ill-conditioning at a degenerate optimum floors the merit; the
        // best recorded iterate is the answer at that point
        if since_best >= 8 || (mu < 1e-14 && since_best >= 2) {
            let (best_merit, mut out) = best.expect("progress was recorded");
            out.status = if best_merit <= opts.tol.max(1e-9) * 10.0 {
                IpmStatus::Converged
            } else {
                IpmStatus::MaxIterations
            };
            return out;
        }

        // NT scalings
        let mut scalings = Vec::with_capacity(nb);
        let mut ok = true;
        for i in 0..nb {
            match nt_scaling(&x[i], &z[i]) {
                Some(s) => scalings.push(s),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            let mut out = best.map(|(_, s)| s).unwrap_or_else(|| snapshot(IpmStatus::NumericalTrouble));
            out.status = IpmStatus::NumericalTrouble;
            return out;
        }
        let w_scal: Vec<f64> = xs.iter().zip(zs.iter()).map(|(a, b)| (a / b).sqrt()).collect();
        let sigma_scal: Vec<f64> = xs.iter().zip(zs.iter()).map(|(a, b)| (a * b).sqrt()).collect();

        // Schur complement from per-block Gram tables
        let mut schur = DMatrix::<f64>::zeros(p, p);
        for i in 0..nb {
            let words = &index.block_words[i];
            let local = &index.block_word_local[i];
            let nw = words.len();
            if nw == 0 {
                continue;
            }
            let w = &scalings[i].w;
            // T_w = W K_w W
            let t: Vec<DMatrix<C64>> =
                words.iter().map(|&wid| w * &problem.words[wid] * w).collect();
            let mut gram = DMatrix::<f64>::zeros(nw, nw);
            for a in 0..nw {
                for bcol in a..nw {
                    let v = inner(&problem.words[words[a]], &t[bcol]);
                    gram[(a, bcol)] = v;
                    gram[(bcol, a)] = v;
                }
            }
            for &(j, wj) in &index.block_rows[i] {
                let lj = local[wj];
                for &(k, wk) in &index.block_rows[i] {
                    if k >= j {
                        schur[(j, k)] += gram[(lj, local[wk])];
                    }
                }
            }
        }
        for (s, rows) in index.scalar_rows.iter().enumerate() {
            let w2 = w_scal[s] * w_scal[s];
            for &(j, cj) in rows {
                for &(k, ck) in rows {
                    if k >= j {
                        schur[(j, k)] += cj * ck * w2;
                    }
                }
            }
        }
        for j in 0..p {
            for k in 0..j {
                schur[(j, k)] = schur[(k, j)];
            }
        }

        let chol_schur = match Cholesky::new(schur.clone()) {
            Some(c) => c,
            None => {
                // tiny diagonal lift; the rows are independent so this only
                // fires from roundoff near convergence
                let scale = (0..p).map(|j| schur[(j, j)]).fold(0.0f64, f64::max);
                for j in 0..p {
                    schur[(j, j)] += 1e-12 * (1.0 + scale);
                }
                match Cholesky::new(schur) {
                    Some(c) => c,
                    None => {
                        let mut out = best
                            .map(|(_, s)| s)
                            .unwrap_or_else(|| snapshot(IpmStatus::NumericalTrouble));
                        out.status = IpmStatus::NumericalTrouble;
                        return out;
                    }
                }
            }
        };

        // shared pieces: A(W R_d W) and the full direction solve
        let wrdw: Vec<DMatrix<C64>> = (0..nb)
            .map(|i| {
                let w = &scalings[i].w;
                herm_part(&(w * &r_d_m[i] * w))
            })
            .collect();
        let wrdw_s: Vec<f64> =
            (0..problem.n_scalars).map(|s| w_scal[s] * w_scal[s] * r_d_s[s]).collect();

        // solve the Newton system for a given scaled complementarity target D
        let solve_direction = |d_mat: &[DMatrix<C64>], d_scal: &[f64]| {
            // E = R D R^H per block, e = W d per scalar
            let e_mat: Vec<DMatrix<C64>> = (0..nb)
                .map(|i| {
                    let r = &scalings[i].r;
                    herm_part(&(r * &d_mat[i] * r.adjoint()))
                })
                .collect();
            // scalar analog of R D R^H: here w_scal is already R^2
            let e_scal: Vec<f64> =
                (0..problem.n_scalars).map(|s| w_scal[s] * d_scal[s]).collect();
            let a_e = apply_a(&e_mat, &e_scal);
            let a_wrdw = apply_a(&wrdw, &wrdw_s);
            let rhs: Vec<f64> =
                (0..p).map(|j| r_p[j] - a_e[j] + a_wrdw[j]).collect();
            let dy = chol_schur.solve(&DVector::from_vec(rhs));
            let (aty_dm, aty_ds) = apply_at(dy.as_slice());
            let dz_m: Vec<DMatrix<C64>> = (0..nb).map(|i| &r_d_m[i] - &aty_dm[i]).collect();
            let dz_s: Vec<f64> = (0..problem.n_scalars).map(|s| r_d_s[s] - aty_ds[s]).collect();
            let dx_m: Vec<DMatrix<C64>> = (0..nb)
                .map(|i| {
                    let w = &scalings[i].w;
                    &e_mat[i] - &herm_part(&(w * &dz_m[i] * w))
                })
                .collect();
            let dx_s: Vec<f64> = (0..problem.n_scalars)
                .map(|s| e_scal[s] - w_scal[s] * w_scal[s] * dz_s[s])
                .collect();
            (dx_m, dx_s, dy, dz_m, dz_s)
        };

        let step_lengths = |dx_m: &[DMatrix<C64>], dx_s: &[f64], dz_m: &[DMatrix<C64>], dz_s: &[f64]| {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for i in 0..nb {
                ap = ap.min(max_step(&scalings[i].chol_x_l, &dx_m[i]));
                ad = ad.min(max_step(&scalings[i].chol_z_l, &dz_m[i]));
            }
            for s in 0..problem.n_scalars {
                if dx_s[s] < 0.0 {
                    ap = ap.min(-xs[s] / dx_s[s]);
                }
                if dz_s[s] < 0.0 {
                    ad = ad.min(-zs[s] / dz_s[s]);
                }
            }
            (ap, ad)
        };

        // predictor: scaled target D = -Sigma
        let d_aff_m: Vec<DMatrix<C64>> = (0..nb)
            .map(|i| {
                -DMatrix::<C64>::from_diagonal(
                    &scalings[i].sigma.map(|s| C64::new(s, 0.0)).column(0).into_owned(),
                )
            })
            .collect();
        let d_aff_s: Vec<f64> = sigma_scal.iter().map(|s| -s).collect();
        let (adx_m, adx_s, _ady, adz_m, adz_s) = solve_direction(&d_aff_m, &d_aff_s);
        let (ap_aff, ad_aff) = step_lengths(&adx_m, &adx_s, &adz_m, &adz_s);
        let ap_aff = (0.99 * ap_aff).min(1.0);
        let ad_aff = (0.99 * ad_aff).min(1.0);

        let mut gap_aff = 0.0;
        for i in 0..nb {
            let xa = &x[i] + &adx_m[i] * C64::new(ap_aff, 0.0);
            let za = &z[i] + &adz_m[i] * C64::new(ad_aff, 0.0);
            gap_aff += inner(&xa, &za);
        }
        for s in 0..problem.n_scalars {
            gap_aff += (xs[s] + ap_aff * adx_s[s]) * (zs[s] + ad_aff * adz_s[s]);
        }
        let mu_aff = gap_aff / nu;
        let centering = ((mu_aff / mu).powi(3)).clamp(1e-10, 1.0);

        // corrector target: (sigma*mu I - Sigma^2 - H(dX~ dZ~)) scaled
        let d_corr_m: Vec<DMatrix<C64>> = (0..nb)
            .map(|i| {
                let sc = &scalings[i];
                let dx_t = &sc.r_inv * &adx_m[i] * sc.r_inv.adjoint();
                let dz_t = sc.r.adjoint() * &adz_m[i] * &sc.r;
                let h = herm_part(&(&dx_t * &dz_t));
                let dim = sc.sigma.len();
                let mut d = DMatrix::<C64>::zeros(dim, dim);
                for a in 0..dim {
                    for bcol in 0..dim {
                        let denom = sc.sigma[a] + sc.sigma[bcol];
                        let target = if a == bcol {
                            C64::new(centering * mu - sc.sigma[a] * sc.sigma[a], 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        };
                        d[(a, bcol)] = (target - h[(a, bcol)]) * C64::new(2.0 / denom, 0.0);
                    }
                }
                d
            })
            .collect();
        let d_corr_s: Vec<f64> = (0..problem.n_scalars)
            .map(|s| {
                (centering * mu - sigma_scal[s] * sigma_scal[s] - adx_s[s] * adz_s[s])
                    / sigma_scal[s]
            })
            .collect();
        let (dx_m, dx_s, dy, dz_m, dz_s) = solve_direction(&d_corr_m, &d_corr_s);
        let (ap, ad) = step_lengths(&dx_m, &dx_s, &dz_m, &dz_s);
        let ap = (0.99 * ap).min(1.0);
        let ad = (0.99 * ad).min(1.0);

        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                let mut out =
                    best.map(|(_, s)| s).unwrap_or_else(|| snapshot(IpmStatus::NumericalTrouble));
                out.status = IpmStatus::NumericalTrouble;
                return out;
            }
        } else {
            stalls = 0;
        }

        for i in 0..nb {
            x[i] = herm_part(&(&x[i] + &dx_m[i] * C64::new(ap, 0.0)));
            z[i] = herm_part(&(&z[i] + &dz_m[i] * C64::new(ad, 0.0)));
        }
        for s in 0..problem.n_scalars {
            xs[s] += ap * dx_s[s];
            zs[s] += ad * dz_s[s];
        }
        for (j, yj) in y.iter_mut().enumerate() {
            *yj += ad * dy[j];
        }
    }

    let mut out = best.map(|(_, s)| s).expect("at least one iterate recorded");
    out.status = IpmStatus::MaxIterations;
    out.iterations = iterations;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(entries: &[f64], dim: usize) -> DMatrix<C64> {
        DMatrix::from_row_slice(dim, dim, &entries.iter().map(|x| C64::new(*x, 0.0)).collect::<Vec<_>>())
    }

    /// max t s.t. diag(1,2) - t I >= 0  =>  t* = 1.
    /// Variables: one 2x2 block Y = diag(1,2) - tI via equality rows, one
    /// scalar t. Rows pin Y + tI = diag(1,2) entrywise.
    #[test]
    fn eigenvalue_bound_problem() {
        let e00 = word(&[1., 0., 0., 0.], 2);
        let e11 = word(&[0., 0., 0., 1.], 2);
        let e01 = word(&[0., 1., 1., 0.], 2);
        let problem = ConicProblem {
            mat_dims: vec![2],
            words: vec![e00, e11, e01],
            n_scalars: 1,
            objective_scalar: vec![-1.0],
            rows: vec![
                Row { mat_terms: vec![(0, 0)], scalar_terms: vec![(0, 1.0)] },
                Row { mat_terms: vec![(0, 1)], scalar_terms: vec![(0, 1.0)] },
                Row { mat_terms: vec![(0, 2)], scalar_terms: vec![] },
            ],
            rhs: vec![1.0, 2.0, 0.0],
        };
        let sol = solve(&problem, IpmOptions::default());
        assert_eq!(sol.status, IpmStatus::Converged);
        assert!((sol.scalars[0] - 1.0).abs() < 1e-7, "t* = {}", sol.scalars[0]);
    }

    /// Complex data: max t s.t. [[2, i],[-i, 2]] - t I >= 0 has eigenvalues
    /// 2 -+ 1, so t* = 1.
    #[test]
    fn complex_eigenvalue_bound() {
        let e00 = word(&[1., 0., 0., 0.], 2);
        let e11 = word(&[0., 0., 0., 1.], 2);
        let e01 = word(&[0., 1., 1., 0.], 2);
        let mut e01i = DMatrix::<C64>::zeros(2, 2);
        e01i[(0, 1)] = C64::new(0.0, 1.0);
        e01i[(1, 0)] = C64::new(0.0, -1.0);
        let problem = ConicProblem {
            mat_dims: vec![2],
            words: vec![e00, e11, e01, e01i],
            n_scalars: 1,
            objective_scalar: vec![-1.0],
            rows: vec![
                Row { mat_terms: vec![(0, 0)], scalar_terms: vec![(0, 1.0)] },
                Row { mat_terms: vec![(0, 1)], scalar_terms: vec![(0, 1.0)] },
                // off-diagonal rows: Tr[e01 Y] = 2 Re Y01 = 0 and
                // Tr[e01i Y] = 2 Im Y01 = 2 pin Y01 = i
                Row { mat_terms: vec![(0, 2)], scalar_terms: vec![] },
                Row { mat_terms: vec![(0, 3)], scalar_terms: vec![] },
            ],
            rhs: vec![2.0, 2.0, 0.0, 2.0],
        };
        let sol = solve(&problem, IpmOptions::default());
        assert_eq!(sol.status, IpmStatus::Converged);
        assert!((sol.scalars[0] - 1.0).abs() < 1e-7, "t* = {}", sol.scalars[0]);
        // extracted block must be the rank-1 residual [[1, i], [-i, 1]]
        let y = &sol.mat_blocks[0];
        assert!((y[(0, 1)] - C64::new(0.0, 1.0)).norm() < 1e-6);
    }

    /// Scalar LP corner case: max s1 s.t. s1 + s2 = 1 => s1* = 1 on the
    /// boundary of the nonnegative cone.
    #[test]
    fn scalar_boundary_optimum() {
        let problem = ConicProblem {
            mat_dims: vec![],
            words: vec![],
            n_scalars: 2,
            objective_scalar: vec![-1.0, 0.0],
            rows: vec![Row { mat_terms: vec![], scalar_terms: vec![(0, 1.0), (1, 1.0)] }],
            rhs: vec![1.0],
        };
        let sol = solve(&problem, IpmOptions::default());
        assert_eq!(sol.status, IpmStatus::Converged);
        assert!((sol.scalars[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn nalgebra_svd_convention_guard() {
        // U Sigma V^H must reconstruct the complex input; nt_scaling relies
        // on it
        let mut m = DMatrix::<C64>::zeros(3, 3);
        let mut seed = 9u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = C64::new(next(), next());
            }
        }
        let svd = m.clone().svd(true, true);
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        let d = DMatrix::<C64>::from_diagonal(
            &svd.singular_values.map(|s| C64::new(s, 0.0)).column(0).into_owned(),
        );
        let rec = u * d * vt;
        assert!(max_abs(&(&rec - &m)) < 1e-12);
    }
}
