//! Grid solver for the Liouville equation `laplace(u) = e^(2u)`.
//!
//! Unknowns are the interior nodes of a square grid over the cap window.
//! Near non-point boundary components the density behaves like `1/delta`,
//! so a band of nodes at distance `< 2h` carries the Dirichlet value
//! `u = log(1/delta)`. Punctures are excised by graft patches where the
//! punctured-disk model is imposed; the model's free constant is fitted
//! from the first solve and the equation is solved once more.
//!
//! The Newton step solves the symmetric positive definite system
//! `(-laplace + 2 e^(2u)) d = residual` by Jacobi-preconditioned conjugate
//! gradients with an inexact forcing term, followed by a damped update.

use super::{DensityField, MetricError, NodeKind, PuncturePatch};
use crate::domain::Domain;

#[derive(Debug, Clone)]
pub struct SolveParams {
    /// Grid spacing; default `min(2 * window / 512, min_gap / 10)`.
    pub grid_h: Option<f64>,
    /// Relative residual target for the Newton iteration.
    pub tol: f64,
    pub max_newton: usize,
    /// Hard cap on grid nodes per side.
    pub max_nodes_per_side: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            grid_h: None,
            tol: 1e-8,
            max_newton: 40,
            max_nodes_per_side: 4096,
        }
    }
}

pub fn solve_density(domain: &Domain, params: &SolveParams) -> Result<DensityField, MetricError> {
    let window = domain.cap_radius().ok_or(MetricError::UnboundedWindow)?;
    let min_gap = domain.min_gap();
    let mut h = params.grid_h.unwrap_or_else(|| {
        let base = 2.0 * window / 512.0;
        if min_gap.is_finite() {
            base.min(min_gap / 10.0)
        } else {
            base
        }
    });
    let nx = (2.0 * window / h).ceil() as usize + 1;
    if nx > params.max_nodes_per_side {
        return Err(MetricError::GridTooCoarse(format!(
            "grid would need {nx} nodes per side (cap {})",
            params.max_nodes_per_side
        )));
    }
    h = 2.0 * window / (nx - 1) as f64;
    let ny = nx;

    // graft patches around point components
    let mut patches = Vec::new();
    for (k, comp) in domain.components().iter().enumerate() {
        if !comp.is_point() {
            continue;
        }
        let p = comp.representative();
        let nearest = domain
            .components()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, c)| c.dist(p))
            .fold(f64::INFINITY, f64::min);
        let radius = nearest.min(0.2) / 2.0;
        if radius < 3.0 * h {
            return Err(MetricError::GridTooCoarse(format!(
                "patch around component {k} spans fewer than 3 cells"
            )));
        }
        patches.push(PuncturePatch {
            component: k,
            center: p,
            radius,
            shift: 0.0,
        });
    }

    let mut field = DensityField {
        window,
        h,
        nx,
        ny,
        u: vec![f64::NAN; nx * ny],
        mask: vec![NodeKind::Outside; nx * ny],
        patches,
        residual: f64::INFINITY,
    };

    // classify nodes and set known values
    for j in 0..ny {
        for i in 0..nx {
            let z = field.node(i, j);
            let idx = j * nx + i;
            if !domain.contains(z) {
                continue;
            }
            if let Some((k, d)) = field
                .patches
                .iter()
                .enumerate()
                .map(|(k, p)| (k, z.dist(p.center)))
                .find(|&(k, d)| d < field.patches[k].radius)
            {
                field.mask[idx] = NodeKind::Patch(k);
                field.u[idx] = patch_u(&field.patches[k], d);
                continue;
            }
            let delta = domain.boundary_dist(z);
            if delta < 2.0 * h {
                field.mask[idx] = NodeKind::Dirichlet;
                field.u[idx] = (1.0 / delta.max(h * 1e-3)).ln();
            } else {
                field.mask[idx] = NodeKind::Interior;
                field.u[idx] = (1.0 / delta).ln();
            }
        }
    }

    newton(&mut field, params)?;

    // fit the patch constants from the outer solution and solve again
    if !field.patches.is_empty() {
        let mut shifts = vec![(0.0, 0usize); field.patches.len()];
        for j in 0..ny {
            for i in 0..nx {
                let idx = j * nx + i;
                if field.mask[idx] != NodeKind::Interior {
                    continue;
                }
                let z = field.node(i, j);
                for (k, p) in field.patches.iter().enumerate() {
                    let d = z.dist(p.center);
                    if d >= p.radius && d < 1.6 * p.radius {
                        let lambda = field.u[idx].exp();
                        shifts[k].0 += 1.0 / (d * lambda) - (1.0 / d).ln();
                        shifts[k].1 += 1;
                    }
                }
            }
        }
        for (k, &(sum, n)) in shifts.iter().enumerate() {
            if n > 0 {
                field.patches[k].shift = sum / n as f64;
            }
        }
        for j in 0..ny {
            for i in 0..nx {
                let idx = j * nx + i;
                if let NodeKind::Patch(k) = field.mask[idx] {
                    let d = field.node(i, j).dist(field.patches[k].center);
                    field.u[idx] = patch_u(&field.patches[k], d);
                }
            }
        }
        newton(&mut field, params)?;
    }

    Ok(field)
}

fn patch_u(p: &PuncturePatch, d: f64) -> f64 {
    let d = d.max(1e-300);
    let denom = ((1.0 / d).ln() + p.shift).max(0.5);
    -(d * denom).ln()
}

/// Damped inexact Newton iteration on the interior nodes of the field.
fn newton(field: &mut DensityField, params: &SolveParams) -> Result<(), MetricError> {
    let (nx, ny, h) = (field.nx, field.ny, field.h);
    let h2 = h * h;

    // local numbering of the unknowns
    let mut local = vec![-1i64; nx * ny];
    let mut ids = Vec::new();
    for idx in 0..nx * ny {
        if field.mask[idx] == NodeKind::Interior {
            local[idx] = ids.len() as i64;
            ids.push(idx);
        }
    }
    let m = ids.len();
    if m == 0 {
        field.residual = 0.0;
        return Ok(());
    }

    // neighbor structure: local index or -1, with known contributions in b
    let mut nbrs = vec![[-1i64; 4]; m];
    let mut b = vec![0.0f64; m];
    for (li, &idx) in ids.iter().enumerate() {
        let (i, j) = (idx % nx, idx / nx);
        let around = [idx - 1, idx + 1, idx - nx, idx + nx];
        debug_assert!(i > 0 && i < nx - 1 && j > 0 && j < ny - 1);
        for (s, &nidx) in around.iter().enumerate() {
            if local[nidx] >= 0 {
                nbrs[li][s] = local[nidx];
            } else {
                let v = field.u[nidx];
                if v.is_nan() {
                    // an interior node should never touch the outside
                    return Err(MetricError::GridTooCoarse(
                        "interior node adjacent to an outside node".into(),
                    ));
                }
                b[li] += v / h2;
            }
        }
    }

    let mut u: Vec<f64> = ids.iter().map(|&idx| field.u[idx]).collect();

    let residual = |u: &[f64], out: &mut [f64]| {
        for li in 0..m {
            let mut lap = b[li] - 4.0 * u[li] / h2;
            for &n in &nbrs[li] {
                if n >= 0 {
                    lap += u[n as usize] / h2;
                }
            }
            out[li] = lap - (2.0 * u[li]).exp();
        }
    };

    let norm_inf = |v: &[f64]| v.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();

    let mut r = vec![0.0; m];
    let mut r_try = vec![0.0; m];
    residual(&u, &mut r);
    let mut res_inf = norm_inf(&r);
    let r0_2 = dot(&r, &r).sqrt().max(1e-300);

    for _ in 0..params.max_newton {
        let scale = u
            .iter()
            .map(|&x| (2.0 * x).exp())
            .fold(1.0f64, f64::max);
        if res_inf <= params.tol * scale {
            break;
        }

        // CG on (-laplace + 2 e^(2u)) d = r, Jacobi preconditioned
        let diag: Vec<f64> = u.iter().map(|&x| 4.0 / h2 + 2.0 * (2.0 * x).exp()).collect();
        let apply = |v: &[f64], out: &mut [f64]| {
            for li in 0..m {
                let mut acc = diag[li] * v[li];
                for &n in &nbrs[li] {
                    if n >= 0 {
                        acc -= v[n as usize] / h2;
                    }
                }
                out[li] = acc;
            }
        };
        let r_2 = dot(&r, &r).sqrt();
        let eta = (r_2 / r0_2).sqrt().clamp(1e-4, 0.1);
        let cg_tol = eta * r_2;
        let max_cg = 20 * (nx + ny);

        let mut d = vec![0.0; m];
        let mut cg_r = r.clone();
        let mut z: Vec<f64> = cg_r.iter().zip(&diag).map(|(x, dg)| x / dg).collect();
        let mut p = z.clone();
        let mut rz = dot(&cg_r, &z);
        let mut ap = vec![0.0; m];
        for _ in 0..max_cg {
            if dot(&cg_r, &cg_r).sqrt() <= cg_tol {
                break;
            }
            apply(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            for li in 0..m {
                d[li] += alpha * p[li];
                cg_r[li] -= alpha * ap[li];
            }
            for li in 0..m {
                z[li] = cg_r[li] / diag[li];
            }
            let rz_new = dot(&cg_r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for li in 0..m {
                p[li] = z[li] + beta * p[li];
            }
        }

        // damped update
        let mut alpha = 1.0;
        let mut accepted = false;
        let mut u_try = vec![0.0; m];
        while alpha >= 1.0 / 256.0 {
            for li in 0..m {
                u_try[li] = u[li] + alpha * d[li];
            }
            residual(&u_try, &mut r_try);
            let new_inf = norm_inf(&r_try);
            if new_inf <= (1.0 - 1e-4 * alpha) * res_inf {
                u.copy_from_slice(&u_try);
                std::mem::swap(&mut r, &mut r_try);
                res_inf = new_inf;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(MetricError::NoConvergence { residual: res_inf });
        }
    }

    let scale = u
        .iter()
        .map(|&x| (2.0 * x).exp())
        .fold(1.0f64, f64::max);
    if res_inf > params.tol * scale {
        return Err(MetricError::NoConvergence { residual: res_inf });
    }

    for (li, &idx) in ids.iter().enumerate() {
        field.u[idx] = u[li];
    }
    field.residual = res_inf;
    Ok(())
}
