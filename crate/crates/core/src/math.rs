//! Scalar helpers and a small 2×2 complex matrix type.

use core::f64::consts::PI;
use core::ops::Mul;

use num_complex::Complex;

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn expi(theta: f64) -> C64 {
    C64::new(libm::cos(theta), libm::sin(theta))
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Map an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = x % two_pi;
    if r <= -PI {
        r += two_pi;
    } else if r > PI {
        r -= two_pi;
    }
    r
}

/// Distance between two angles on the circle.
#[inline]
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Binary entropy in bits, safe at the end points.
pub fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * log2(x) };
    h(p) + h(1.0 - p)
}

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.0[r][c]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[0][1].conj(), m[1][0].conj(), m[1][1].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum()
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Largest entry of `|M†M - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut dev = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { ONE } else { ZERO };
                dev = dev.max((p.0[r][c] - target).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        d
    }

    /// Eigen-decomposition of a Hermitian matrix (only the upper triangle and
    /// the real diagonal are read). Eigenvalues are returned in descending
    /// order, eigenvectors as the columns of a unitary.
    pub fn hermitian_eigen(&self) -> ([f64; 2], Mat2) {
        let p = self.0[0][0].re;
        let r = self.0[1][1].re;
        let q = self.0[0][1];
        let mean = 0.5 * (p + r);
        let half = 0.5 * (p - r);
        let d = libm::hypot(half, q.norm());
        let (l1, l2) = (mean + d, mean - d);
        // Two algebraically equivalent eigenvectors for l1; keep the better conditioned one.
        let va = [q, C64::from(l1 - p)];
        let vb = [C64::from(l1 - r), q.conj()];
        let na = va[0].norm_sqr() + va[1].norm_sqr();
        let nb = vb[0].norm_sqr() + vb[1].norm_sqr();
        let scale = (p.abs() + r.abs() + q.norm()).max(f64::MIN_POSITIVE);
        let u1 = if na.max(nb) <= (1e-30 * scale * scale) {
            if p >= r {
                [ONE, ZERO]
            } else {
                [ZERO, ONE]
            }
        } else if na >= nb {
            let n = sqrt(na);
            [va[0] / n, va[1] / n]
        } else {
            let n = sqrt(nb);
            [vb[0] / n, vb[1] / n]
        };
        let u2 = [-u1[1].conj(), u1[0].conj()];
        ([l1, l2], Mat2::new(u1[0], u2[0], u1[1], u2[1]))
    }

    /// Singular value decomposition `M = U diag(s) V†` with `s[0] ≥ s[1] ≥ 0`.
    pub fn svd(&self) -> (Mat2, [f64; 2], Mat2) {
        let h = *self * self.adjoint();
        let (lam, u) = h.hermitian_eigen();
        let s0 = sqrt(lam[0].max(0.0));
        // s1 from the determinant: sqrt of a tiny eigenvalue loses half the digits.
        let s1 = if s0 > 0.0 { (self.det().norm() / s0).min(s0) } else { 0.0 };
        let s = [s0, s1];
        let col = |m: &Mat2, k: usize| [m.0[0][k], m.0[1][k]];
        let adj = self.adjoint();
        let tiny = 1e-300;
        let v1 = if s[0] > tiny {
            let w = adj.apply(col(&u, 0));
            let n = sqrt(w[0].norm_sqr() + w[1].norm_sqr());
            [w[0] / n, w[1] / n]
        } else {
            [ONE, ZERO]
        };
        // Complement of v1, phased so that u2† M v2 = s2 ≥ 0. Dividing by s2
        // instead would amplify rounding for nearly rank-one inputs.
        let perp = [-v1[1].conj(), v1[0].conj()];
        let mp = self.apply(perp);
        let u2 = col(&u, 1);
        let w = u2[0].conj() * mp[0] + u2[1].conj() * mp[1];
        let phase = if w.norm() > tiny { w.conj() / w.norm() } else { ONE };
        let v2 = [perp[0] * phase, perp[1] * phase];
        (u, s, Mat2::new(v1[0], v2[0], v1[1], v2[1]))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}
