//! The curvature -1 (hyperbolic) metric density of a domain.
//!
//! The density lambda = e^u satisfies the Liouville equation
//! `laplace(u) = e^(2u)` with `u -> +infinity` at the boundary. Closed forms
//! exist for the disk, the punctured disk and round annuli; every other
//! domain goes through the grid solver in [`solver`].

mod solver;

pub use solver::{solve_density, SolveParams};

use crate::curve::PolyCurve;
use crate::domain::Domain;
use crate::geom::{pt, Pt, GAUSS4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("Newton iteration did not converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },
    #[error("grid too coarse for the domain features: {0}")]
    GridTooCoarse(String),
    #[error("the domain has no unbounded cap; the grid solver needs a finite window")]
    UnboundedWindow,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("curve touches or leaves the domain")]
    CurveTouchesBoundary,
}

/// Domains whose density is known in closed form.
#[derive(Debug, Clone, Copy)]
pub enum ClosedForm {
    Disk { center: Pt, radius: f64 },
    PuncturedDisk { center: Pt, radius: f64 },
    Annulus { center: Pt, r_in: f64, r_out: f64 },
}

impl ClosedForm {
    /// The density at `z`, or `None` outside the domain.
    pub fn density(&self, z: Pt) -> Option<f64> {
        match *self {
            ClosedForm::Disk { center, radius } => {
                let rho = z.dist(center);
                (rho < radius).then(|| 2.0 * radius / (radius * radius - rho * rho))
            }
            ClosedForm::PuncturedDisk { center, radius } => {
                let rho = z.dist(center);
                (rho > 0.0 && rho < radius).then(|| 1.0 / (rho * (radius / rho).ln()))
            }
            ClosedForm::Annulus { center, r_in, r_out } => {
                let rho = z.dist(center);
                if rho <= r_in || rho >= r_out {
                    return None;
                }
                let l = (r_out / r_in).ln();
                Some(std::f64::consts::PI / (rho * l)
                    / (std::f64::consts::PI * (rho / r_in).ln() / l).sin())
            }
        }
    }
}

/// Length of the core geodesic of the round annulus `r_in < |z| < r_out`.
pub fn annulus_core_length(r_in: f64, r_out: f64) -> f64 {
    2.0 * std::f64::consts::PI * std::f64::consts::PI / (r_out / r_in).ln()
}

/// Classification of a grid node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    /// Outside the domain; no density value.
    Outside,
    /// Dirichlet node in the boundary band; `u = log(1/delta)`.
    Dirichlet,
    /// Unknown solved by the Newton iteration.
    Interior,
    /// Inside the graft patch of the given puncture; `u` from the patch formula.
    Patch(usize),
}

/// A graft patch around a puncture. Inside `radius` the density is the
/// punctured-disk model `1 / (d * (log(1/d) + shift))` where `shift` is the
/// logarithm of the local conformal radius, fitted from the outer solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PuncturePatch {
    pub component: usize,
    pub center: Pt,
    pub radius: f64,
    pub shift: f64,
}

/// The solved density on a square grid over the cap window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityField {
    /// Half-width of the window; the grid covers `[-window, window]^2`.
    pub window: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major `u = log(lambda)`; `NaN` at `Outside` nodes.
    pub u: Vec<f64>,
    pub mask: Vec<NodeKind>,
    pub patches: Vec<PuncturePatch>,
    /// Final sup-norm of the discrete Liouville residual.
    pub residual: f64,
}

/// Catmull-Rom cubic weights and their derivatives at parameter `t`.
fn catmull_rom(t: f64) -> ([f64; 4], [f64; 4]) {
    let t2 = t * t;
    let t3 = t2 * t;
    let w = [
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    ];
    let dw = [
        -1.5 * t2 + 2.0 * t - 0.5,
        4.5 * t2 - 5.0 * t,
        -4.5 * t2 + 4.0 * t + 0.5,
        1.5 * t2 - t,
    ];
    (w, dw)
}

impl DensityField {
    pub fn node(&self, i: usize, j: usize) -> Pt {
        pt(
            -self.window + i as f64 * self.h,
            -self.window + j as f64 * self.h,
        )
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    fn patch_density(&self, p: &PuncturePatch, d: f64) -> f64 {
        let denom = ((1.0 / d).ln() + p.shift).max(0.5);
        1.0 / (d * denom)
    }

    /// Interpolate `u` and its gradient at `z`. Bicubic (Catmull-Rom) where
    /// the full 4x4 stencil is inside the mask -- this makes the interpolant
    /// C^1 across grid lines so curve shortening sees a consistent gradient
    /// -- with a bilinear fallback next to the mask edge. `None` when a
    /// bilinear corner is already outside.
    fn interp_u(&self, z: Pt) -> Option<(f64, f64, f64)> {
        let fx = (z.x + self.window) / self.h;
        let fy = (z.y + self.window) / self.h;
        let i = (fx.floor() as isize).clamp(0, self.nx as isize - 2) as usize;
        let j = (fy.floor() as isize).clamp(0, self.ny as isize - 2) as usize;
        let tx = (fx - i as f64).clamp(0.0, 1.0);
        let ty = (fy - j as f64).clamp(0.0, 1.0);

        if i >= 1 && j >= 1 && i + 2 < self.nx && j + 2 < self.ny {
            let mut full = true;
            'scan: for dj in 0..4 {
                for di in 0..4 {
                    if self.mask[self.idx(i - 1 + di, j - 1 + dj)] == NodeKind::Outside {
                        full = false;
                        break 'scan;
                    }
                }
            }
            if full {
                let (wx, dwx) = catmull_rom(tx);
                let (wy, dwy) = catmull_rom(ty);
                let mut val = 0.0;
                let mut dx = 0.0;
                let mut dy = 0.0;
                for dj in 0..4 {
                    let mut row = 0.0;
                    let mut drow = 0.0;
                    for di in 0..4 {
                        let uu = self.u[self.idx(i - 1 + di, j - 1 + dj)];
                        row += wx[di] * uu;
                        drow += dwx[di] * uu;
                    }
                    val += wy[dj] * row;
                    dx += wy[dj] * drow;
                    dy += dwy[dj] * row;
                }
                return Some((val, dx / self.h, dy / self.h));
            }
        }

        let c = [
            self.idx(i, j),
            self.idx(i + 1, j),
            self.idx(i, j + 1),
            self.idx(i + 1, j + 1),
        ];
        if c.iter().any(|&k| self.mask[k] == NodeKind::Outside) {
            return None;
        }
        let (u00, u10, u01, u11) = (self.u[c[0]], self.u[c[1]], self.u[c[2]], self.u[c[3]]);
        let val = u00 * (1.0 - tx) * (1.0 - ty)
            + u10 * tx * (1.0 - ty)
            + u01 * (1.0 - tx) * ty
            + u11 * tx * ty;
        let ux = ((u10 - u00) * (1.0 - ty) + (u11 - u01) * ty) / self.h;
        let uy = ((u01 - u00) * (1.0 - tx) + (u11 - u10) * tx) / self.h;
        Some((val, ux, uy))
    }

    /// The density at `z`: the patch model near punctures, otherwise
    /// interpolation of `u` followed by `exp`.
    pub fn density_at(&self, domain: &Domain, z: Pt) -> Result<f64, MetricError> {
        for p in &self.patches {
            let d = z.dist(p.center);
            if d < p.radius {
                if d == 0.0 {
                    return Err(MetricError::OutsideDomain);
                }
                return Ok(self.patch_density(p, d));
            }
        }
        if !domain.contains(z) {
            return Err(MetricError::OutsideDomain);
        }
        match self.interp_u(z) {
            Some((u, _, _)) => Ok(u.exp()),
            // inside the domain but next to a boundary node: use the
            // boundary asymptotics directly
            None => Ok(1.0 / domain.boundary_dist(z)),
        }
    }

    /// The density and its euclidean gradient at `z`, from the interpolant
    /// of `u` (or the patch model), with a finite-difference fallback next
    /// to the boundary band.
    pub fn density_and_grad_at(
        &self,
        domain: &Domain,
        z: Pt,
    ) -> Result<(f64, Pt), MetricError> {
        for p in &self.patches {
            let d = z.dist(p.center);
            if d < p.radius {
                if d == 0.0 {
                    return Err(MetricError::OutsideDomain);
                }
                let g = ((1.0 / d).ln() + p.shift).max(0.5);
                let lambda = 1.0 / (d * g);
                let dl = (1.0 - g) / (d * d * g * g);
                return Ok((lambda, (z - p.center).scale(dl / d)));
            }
        }
        if !domain.contains(z) {
            return Err(MetricError::OutsideDomain);
        }
        if let Some((u, ux, uy)) = self.interp_u(z) {
            let lambda = u.exp();
            Ok((lambda, pt(lambda * ux, lambda * uy)))
        } else {
            let s = self.h / 2.0;
            let lambda = self.density_at(domain, z)?;
            let dx = (self.density_at(domain, pt(z.x + s, z.y))?
                - self.density_at(domain, pt(z.x - s, z.y))?)
                / (2.0 * s);
            let dy = (self.density_at(domain, pt(z.x, z.y + s))?
                - self.density_at(domain, pt(z.x, z.y - s))?)
                / (2.0 * s);
            Ok((lambda, pt(dx, dy)))
        }
    }

    /// Hyperbolic length of the curve under this density, by Gauss-Legendre
    /// quadrature on each segment, with adaptive splitting of segments that
    /// pass close to a puncture.
    pub fn hyperbolic_length(
        &self,
        domain: &Domain,
        curve: &PolyCurve,
    ) -> Result<f64, MetricError> {
        let mut total = 0.0;
        for (a, b) in curve.segments() {
            total += self.segment_hyperbolic_length(domain, a, b, 0)?;
        }
        Ok(total)
    }

    fn segment_hyperbolic_length(
        &self,
        domain: &Domain,
        a: Pt,
        b: Pt,
        depth: u32,
    ) -> Result<f64, MetricError> {
        let len = a.dist(b);
        if len == 0.0 {
            return Ok(0.0);
        }
        let split = depth < 48
            && self.patches.iter().any(|p| {
                let dm = crate::geom::dist_point_segment(p.center, a, b);
                dm < 2.0 * p.radius && len > 0.7 * dm.max(1e-300)
            });
        if split {
            let m = a.lerp(b, 0.5);
            return Ok(self.segment_hyperbolic_length(domain, a, m, depth + 1)?
                + self.segment_hyperbolic_length(domain, m, b, depth + 1)?);
        }
        let mut total = 0.0;
        for &(t, w) in GAUSS4.iter() {
            let lambda = self
                .density_at(domain, a.lerp(b, t))
                .map_err(|_| MetricError::CurveTouchesBoundary)?;
            total += w * lambda * len;
        }
        Ok(total)
    }
}

/// Check the two-sided boundary estimate on a solved field: at distance
/// `delta < delta_max` from the boundary,
/// `1 / (K * delta * log(1/delta)) <= lambda <= K / delta`.
/// Returns `(checked, satisfied)` node counts.
pub fn boundary_bounds_check(
    field: &DensityField,
    domain: &Domain,
    k: f64,
    delta_max: f64,
) -> (usize, usize) {
    let mut checked = 0;
    let mut ok = 0;
    for j in 0..field.ny {
        for i in 0..field.nx {
            if field.mask[field.idx(i, j)] == NodeKind::Outside {
                continue;
            }
            let z = field.node(i, j);
            let delta = domain.boundary_dist(z);
            if delta <= 0.0 || delta >= delta_max {
                continue;
            }
            let Ok(lambda) = field.density_at(domain, z) else {
                continue;
            };
            checked += 1;
            let lower = 1.0 / (k * delta * (1.0 / delta).ln());
            let upper = k / delta;
            if lambda >= lower && lambda <= upper {
                ok += 1;
            }
        }
    }
    (checked, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::circle_curve;
    use crate::domain::{make_domain, Comp};
    use approx::assert_relative_eq;

    #[test]
    fn disk_density_closed_form() {
        let d = ClosedForm::Disk {
            center: Pt::ZERO,
            radius: 1.0,
        };
        assert_relative_eq!(d.density(Pt::ZERO).unwrap(), 2.0);
        assert_relative_eq!(d.density(pt(0.5, 0.0)).unwrap(), 8.0 / 3.0);
        assert!(d.density(pt(1.0, 0.0)).is_none());
    }

    #[test]
    fn punctured_disk_density_closed_form() {
        let d = ClosedForm::PuncturedDisk {
            center: Pt::ZERO,
            radius: 1.0,
        };
        let rho = (-1.0f64).exp();
        assert_relative_eq!(
            d.density(pt(rho, 0.0)).unwrap(),
            1.0f64.exp() / 1.0,
            max_relative = 1e-12
        );
        assert!(d.density(Pt::ZERO).is_none());
    }

    #[test]
    fn annulus_density_closed_form() {
        let a = ClosedForm::Annulus {
            center: Pt::ZERO,
            r_in: 0.25,
            r_out: 1.0,
        };
        // at the core circle the sine term is 1
        let l = 4.0f64.ln();
        assert_relative_eq!(
            a.density(pt(0.5, 0.0)).unwrap(),
            std::f64::consts::PI / (0.5 * l),
            max_relative = 1e-12
        );
        assert_relative_eq!(annulus_core_length(0.25, 1.0), 14.2382, max_relative = 1e-4);
        assert_relative_eq!(annulus_core_length(1.0 / 9.0, 1.0), 8.9830, max_relative = 1e-4);
    }

    #[test]
    fn closed_forms_satisfy_liouville() {
        // finite-difference check of laplace(log lambda) = lambda^2
        let forms = [
            ClosedForm::Disk {
                center: pt(0.3, -0.2),
                radius: 1.5,
            },
            ClosedForm::PuncturedDisk {
                center: Pt::ZERO,
                radius: 1.0,
            },
            ClosedForm::Annulus {
                center: Pt::ZERO,
                r_in: 0.25,
                r_out: 1.0,
            },
        ];
        let probes = [pt(0.5, 0.1), pt(0.45, -0.3), pt(-0.4, 0.35)];
        let h = 1e-4;
        for f in forms {
            for z in probes {
                let u = |p: Pt| f.density(p).unwrap().ln();
                let lap = (u(pt(z.x + h, z.y))
                    + u(pt(z.x - h, z.y))
                    + u(pt(z.x, z.y + h))
                    + u(pt(z.x, z.y - h))
                    - 4.0 * u(z))
                    / (h * h);
                let lam = f.density(z).unwrap();
                assert_relative_eq!(lap, lam * lam, max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn solved_disk_matches_closed_form() {
        let d = make_domain(vec![Comp::cap(1.0)]).unwrap();
        let field = solve_density(&d, &SolveParams::default()).unwrap();
        let cf = ClosedForm::Disk {
            center: Pt::ZERO,
            radius: 1.0,
        };
        for z in [Pt::ZERO, pt(0.5, 0.0), pt(-0.3, 0.6), pt(0.0, -0.8)] {
            let got = field.density_at(&d, z).unwrap();
            let want = cf.density(z).unwrap();
            assert_relative_eq!(got, want, max_relative = 0.02);
        }
    }

    #[test]
    fn solved_punctured_disk_matches_closed_form() {
        let d = make_domain(vec![Comp::point(Pt::ZERO), Comp::cap(1.0)]).unwrap();
        let field = solve_density(&d, &SolveParams::default()).unwrap();
        let cf = ClosedForm::PuncturedDisk {
            center: Pt::ZERO,
            radius: 1.0,
        };
        for z in [pt(0.3, 0.0), pt(0.0, 0.5), pt(-0.15, 0.15), pt(0.02, 0.0)] {
            let got = field.density_at(&d, z).unwrap();
            let want = cf.density(z).unwrap();
            assert_relative_eq!(got, want, max_relative = 0.02);
        }
        // the patch shift should come out close to the true conformal radius 1
        assert!(field.patches[0].shift.abs() < 0.1);
    }

    #[test]
    fn solved_annulus_matches_closed_form_and_core_length() {
        let d = make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
        let field = solve_density(&d, &SolveParams::default()).unwrap();
        let cf = ClosedForm::Annulus {
            center: Pt::ZERO,
            r_in: 0.25,
            r_out: 1.0,
        };
        for z in [pt(0.5, 0.0), pt(0.0, 0.6), pt(-0.35, 0.35)] {
            let got = field.density_at(&d, z).unwrap();
            let want = cf.density(z).unwrap();
            assert_relative_eq!(got, want, max_relative = 0.02);
        }
        let core = circle_curve(Pt::ZERO, 0.5, 512);
        let len = field.hyperbolic_length(&d, &core).unwrap();
        assert_relative_eq!(len, annulus_core_length(0.25, 1.0), max_relative = 0.02);
    }

    #[test]
    fn schwarz_pick_monotone() {
        // removing part of a domain increases the density where both exist
        let disk = make_domain(vec![Comp::cap(1.0)]).unwrap();
        let annulus = make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
        let fd = solve_density(&disk, &SolveParams::default()).unwrap();
        let fa = solve_density(&annulus, &SolveParams::default()).unwrap();
        for z in [pt(0.5, 0.0), pt(0.0, 0.7), pt(-0.4, -0.4)] {
            let inner = fa.density_at(&annulus, z).unwrap();
            let outer = fd.density_at(&disk, z).unwrap();
            assert!(inner > outer * 0.999);
        }
    }

    #[test]
    fn boundary_bounds_hold() {
        let d = make_domain(vec![Comp::disk(pt(0.2, 0.0), 0.3), Comp::cap(1.0)]).unwrap();
        let field = solve_density(&d, &SolveParams::default()).unwrap();
        let (checked, ok) = boundary_bounds_check(&field, &d, 20.0, 0.1);
        assert!(checked > 100);
        assert_eq!(checked, ok);
    }

    #[test]
    fn unbounded_domain_rejected() {
        let d = make_domain(vec![
            Comp::point(Pt::ZERO),
            Comp::point(pt(1.0, 0.0)),
            Comp::point(pt(0.0, 1.0)),
        ])
        .unwrap();
        assert!(matches!(
            solve_density(&d, &SolveParams::default()),
            Err(MetricError::UnboundedWindow)
        ));
    }
}
