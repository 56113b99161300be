use super::classify::TwoQubitProjection;
use super::entropy::{entanglement_report, m_prime};
use crate::error::{Error, Result};
use crate::math::{exp, expi, sqrt, wrap_angle, Mat2, C64, ONE};

/// Physical `e–f` weight produced by the projection [`xi_projection`]:
/// `−2·arg(2 + w + 1/w)` with `w = ξe^{iχ_bf/2}`.
pub fn hyperbola_weight(chi_bf: f64, xi: f64) -> f64 {
    let w = expi(chi_bf / 2.0) * xi;
    wrap_angle(-2.0 * (C64::from(2.0) + w + ONE / w).arg())
}

/// `A = 1, B = ξe^{iχ/2}, C = |ξ|, D = sign(ξ)e^{iχ/2}`, normalized.
pub fn xi_projection(chi_bf: f64, xi: f64) -> Result<TwoQubitProjection> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::InvalidProjection);
    }
    let ph = expi(chi_bf / 2.0);
    let p = TwoQubitProjection::new(ONE, ph * xi, C64::from(xi.abs()), ph * xi.signum())?;
    Ok(p.normalized())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiSolution {
    pub xi: f64,
    /// `|weight(ξ) − target|` on the circle.
    pub residual: f64,
}

const T_MAX: f64 = 40.0;
const SCAN_STEPS: usize = 4000;

/// Find a real `ξ ≠ 0` whose projection leaves the weight `χ_target` on the
/// `e–f` edge. Both branches `ξ = ±e^t`, `t ∈ [−40, 40]`, are scanned for sign
/// changes and refined by bisection; of all roots the one with `|ξ|` closest
/// to 1 is returned.
pub fn solve_xi_for_weight(chi_bf: f64, chi_target: f64) -> Result<XiSolution> {
    if !chi_bf.is_finite() || !chi_target.is_finite() {
        return Err(Error::NonFinite);
    }
    if wrap_angle(chi_bf).abs() < 1e-12 {
        return Err(Error::ZeroWeight(0, 1));
    }
    let f = |sign: f64, t: f64| wrap_angle(hyperbola_weight(chi_bf, sign * exp(t)) - chi_target);
    let mut best: Option<XiSolution> = None;
    let mut consider = |xi: f64| {
        let residual = wrap_angle(hyperbola_weight(chi_bf, xi) - chi_target).abs();
        if residual < 1e-9 {
            let better = match best {
                None => true,
                Some(b) => libm::fabs(libm::log(xi.abs())) < libm::fabs(libm::log(b.xi.abs())),
            };
            if better {
                best = Some(XiSolution { xi, residual });
            }
        }
    };
    for sign in [1.0, -1.0] {
        let dt = 2.0 * T_MAX / SCAN_STEPS as f64;
        let mut t0 = -T_MAX;
        let mut f0 = f(sign, t0);
        for k in 1..=SCAN_STEPS {
            let t1 = -T_MAX + dt * k as f64;
            let f1 = f(sign, t1);
            if f0 == 0.0 {
                consider(sign * exp(t0));
            } else if f0 * f1 < 0.0 && (f0 - f1).abs() < core::f64::consts::PI {
                // A genuine crossing, not the ±π wrap.
                let (mut lo, mut hi, mut flo) = (t0, t1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(sign, mid);
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if (fm < 0.0) == (flo < 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-15 {
                        break;
                    }
                }
                consider(sign * exp(0.5 * (lo + hi)));
            }
            t0 = t1;
            f0 = f1;
        }
    }
    best.ok_or(Error::ConvergenceFailure { lo: -exp(T_MAX), hi: exp(T_MAX) })
}

/// Residuals of the three maximal-entanglement conditions:
/// `|A+z*B| − √(1−|z|²)|D|`, `|C+z*D| − √(1−|z|²)|B|` and
/// `|AB* + CD* + z*(|B|²+|D|²)|`, after normalizing so that `M'` has unit
/// Frobenius norm.
pub fn max_entangled_residuals(p: &TwoQubitProjection, z: C64) -> [f64; 3] {
    let s = sqrt((1.0 - z.norm_sqr()).max(0.0));
    let n = sqrt(m_prime(&p.matrix(), z).frobenius_sqr());
    let (a, b, c, d) = (p.a / n, p.b / n, p.c / n, p.d / n);
    let zc = z.conj();
    [
        ((a + zc * b).norm() - s * d.norm()).abs(),
        ((c + zc * d).norm() - s * b.norm()).abs(),
        (a * b.conj() + c * d.conj() + zc * (b.norm_sqr() + d.norm_sqr())).norm(),
    ]
}

/// Projection whose residual has coefficient matrix `M' = seed` in the
/// orthonormalized basis, where `seed` is `1/√2` times a unitary:
/// `A = A' − z*B'/√(1−|z|²)`, `B = B'/√(1−|z|²)`, and likewise for `C, D`.
pub fn max_entangled_family(seed: &Mat2, z: C64) -> Result<TwoQubitProjection> {
    let deviation = seed.scale(C64::from(core::f64::consts::SQRT_2)).unitarity_deviation();
    if !(deviation <= 1e-10) {
        return Err(Error::BadSeed { deviation });
    }
    if !(z.norm() < 1.0 - 1e-12) {
        return Err(Error::DegenerateGram { z_abs: z.norm() });
    }
    let s = sqrt(1.0 - z.norm_sqr());
    let zc = z.conj();
    let (a1, b1, c1, d1) = (seed.at(0, 0), seed.at(0, 1), seed.at(1, 0), seed.at(1, 1));
    let p = TwoQubitProjection::new(a1 - zc * b1 / s, b1 / s, c1 - zc * d1 / s, d1 / s)?;
    let r = max_entangled_residuals(&p, z);
    let report = entanglement_report(&p.matrix(), z)?;
    if r.iter().any(|x| *x > 1e-10) || (report.entropy_bits - 1.0).abs() > 1e-9 {
        return Err(Error::OracleMismatch {
            quantity: "maximal entanglement",
            analytic: 1.0,
            oracle: report.entropy_bits,
        });
    }
    Ok(p)
}
