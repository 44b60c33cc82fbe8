//! Dense complex 2×2 linear algebra and the `U(2) = U(1)·SU(2)` decomposition.
//!
//! Every unitary `U` is written as
//!
//! ```text
//!        ⎛ g1  -g2* ⎞
//! U = g3 ⎜          ⎟ ,   |g1|² + |g2|² = |g3| = 1,
//!        ⎝ g2   g1* ⎠
//! ```
//!
//! i.e. a unit phase times a unit quaternion. The pair `±(g1, g2, g3)` composes
//! to the same matrix; [`decompose_u2`] always returns the member with
//! `arg g3 ∈ [0, π)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::real::{arg_2pi, cis, cr, is_finite_c, Real};

/// Boundary spinor `(ψ↑, ψ↓)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct C2Vector<T> {
    pub up: Complex<T>,
    pub down: Complex<T>,
}

impl<T: Real> C2Vector<T> {
    pub fn new(up: Complex<T>, down: Complex<T>) -> Self {
        Self { up, down }
    }

    pub fn real(up: T, down: T) -> Self {
        Self::new(cr(up), cr(down))
    }

    pub fn zero() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    pub fn norm(&self) -> T {
        (self.up.norm_sqr() + self.down.norm_sqr()).sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.up.norm().max(self.down.norm())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.up * s, self.down * s)
    }

    /// Unit vector in the same direction; the zero vector maps to itself.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == T::zero() {
            *self
        } else {
            self.scale(cr(T::one() / n))
        }
    }

    /// Hermitian inner product `⟨self|other⟩`, antilinear in `self`.
    pub fn dot(&self, other: &Self) -> Complex<T> {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    /// Up and down components exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.down, self.up)
    }

    pub fn is_finite(&self) -> bool {
        is_finite_c(self.up) && is_finite_c(self.down)
    }
}

impl<T: Real> Add for C2Vector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.up + rhs.up, self.down + rhs.down)
    }
}

impl<T: Real> Sub for C2Vector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.up - rhs.up, self.down - rhs.down)
    }
}

impl<T: Real> Neg for C2Vector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.up, -self.down)
    }
}

/// Complex 2×2 matrix `[[u11, u12], [u21, u22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct C2Matrix<T> {
    pub u11: Complex<T>,
    pub u12: Complex<T>,
    pub u21: Complex<T>,
    pub u22: Complex<T>,
}

impl<T: Real> C2Matrix<T> {
    pub fn new(u11: Complex<T>, u12: Complex<T>, u21: Complex<T>, u22: Complex<T>) -> Self {
        Self { u11, u12, u21, u22 }
    }

    pub fn identity() -> Self {
        let (o, z) = (cr(T::one()), cr(T::zero()));
        Self::new(o, z, z, o)
    }

    pub fn diag(a: Complex<T>, d: Complex<T>) -> Self {
        let z = cr(T::zero());
        Self::new(a, z, z, d)
    }

    /// Matrix whose columns are `c1` and `c2`.
    pub fn from_columns(c1: C2Vector<T>, c2: C2Vector<T>) -> Self {
        Self::new(c1.up, c2.up, c1.down, c2.down)
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.u11, self.u12, self.u21, self.u22]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.u11.conj(), self.u21.conj(), self.u12.conj(), self.u22.conj())
    }

    pub fn det(&self) -> Complex<T> {
        self.u11 * self.u22 - self.u12 * self.u21
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.u11 * s, self.u12 * s, self.u21 * s, self.u22 * s)
    }

    pub fn apply(&self, v: &C2Vector<T>) -> C2Vector<T> {
        C2Vector::new(self.u11 * v.up + self.u12 * v.down, self.u21 * v.up + self.u22 * v.down)
    }

    /// Inverse via the adjugate; `None` when `det` is exactly zero.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm_sqr() == T::zero() {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(self.u22 * inv, -self.u12 * inv, -self.u21 * inv, self.u11 * inv))
    }

    /// Max-norm (largest entry modulus).
    pub fn max_abs(&self) -> T {
        self.entries().iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| is_finite_c(*z))
    }

    /// `max(‖M†M − I‖_max, ‖MM† − I‖_max)`.
    pub fn unitarity_residual(&self) -> T {
        let id = Self::identity();
        let a = (self.adjoint() * *self).max_abs_diff(&id);
        let b = (*self * self.adjoint()).max_abs_diff(&id);
        a.max(b)
    }
}

impl<T: Real> Mul for C2Matrix<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.u11 * r.u11 + self.u12 * r.u21,
            self.u11 * r.u12 + self.u12 * r.u22,
            self.u21 * r.u11 + self.u22 * r.u21,
            self.u21 * r.u12 + self.u22 * r.u22,
        )
    }
}

impl<T: Real> Mul<C2Vector<T>> for C2Matrix<T> {
    type Output = C2Vector<T>;
    fn mul(self, v: C2Vector<T>) -> C2Vector<T> {
        self.apply(&v)
    }
}

impl<T: Real> Add for C2Matrix<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.u11 + r.u11, self.u12 + r.u12, self.u21 + r.u21, self.u22 + r.u22)
    }
}

impl<T: Real> Sub for C2Matrix<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.u11 - r.u11, self.u12 - r.u12, self.u21 - r.u21, self.u22 - r.u22)
    }
}

impl<T: Real> Neg for C2Matrix<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.u11, -self.u12, -self.u21, -self.u22)
    }
}

/// Solves the 2×2 system `A x = b` by Cramer's rule.
///
/// Returns `None` when `|det A| ≤ rel_tol · ‖col1‖ · ‖col2‖`, a scale-free
/// singularity test.
pub(crate) fn solve2<T: Real>(a: &C2Matrix<T>, b: &C2Vector<T>, rel_tol: T) -> Option<C2Vector<T>> {
    let d = a.det();
    let c1 = C2Vector::new(a.u11, a.u21).norm();
    let c2 = C2Vector::new(a.u12, a.u22).norm();
    if !(d.norm() > rel_tol * c1 * c2) {
        return None;
    }
    let x1 = (b.up * a.u22 - a.u12 * b.down) / d;
    let x2 = (a.u11 * b.down - a.u21 * b.up) / d;
    Some(C2Vector::new(x1, x2))
}

pub fn is_unitary<T: Real>(m: &C2Matrix<T>, tol: T) -> bool {
    m.is_finite() && m.unitarity_residual() <= tol
}

/// Membership in `SU(2)`: unitary with unit determinant.
pub fn is_su2<T: Real>(m: &C2Matrix<T>, tol: T) -> bool {
    is_unitary(m, tol) && (m.det() - cr(T::one())).norm() <= tol
}

pub fn is_diagonal<T: Real>(m: &C2Matrix<T>, tol: T) -> bool {
    m.is_finite() && m.u12.norm() <= tol && m.u21.norm() <= tol
}

/// Unit phase times unit quaternion, `g3·[[g1, -g2*], [g2, g1*]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuaternionForm<T> {
    pub g1: Complex<T>,
    pub g2: Complex<T>,
    pub g3: Complex<T>,
}

/// Which determinant-phase construction [`decompose_u2`] used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecomposeBranch {
    /// `u21 ≠ 0`: phase from `arg u12 + arg u21 + π`.
    OffDiagonal,
    /// `u21 = 0`: phase from `arg u11 + arg u22`.
    Diagonal,
}

impl DecomposeBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::OffDiagonal => "off_diagonal",
            Self::Diagonal => "diagonal",
        }
    }
}

impl<T: Real> QuaternionForm<T> {
    /// Validated constructor; the invariants must hold to `T::default_tol()`.
    pub fn new(g1: Complex<T>, g2: Complex<T>, g3: Complex<T>) -> Result<Self> {
        let q = Self { g1, g2, g3 };
        let r = q.invariant_residual();
        if !(r <= T::default_tol()) {
            return Err(Error::InvalidForm { residual: r.as_f64() });
        }
        Ok(q)
    }

    pub const fn new_unchecked(g1: Complex<T>, g2: Complex<T>, g3: Complex<T>) -> Self {
        Self { g1, g2, g3 }
    }

    /// `max(||g1|² + |g2|² − 1|, ||g3| − 1|)`; NaN for non-finite input.
    pub fn invariant_residual(&self) -> T {
        if !(is_finite_c(self.g1) && is_finite_c(self.g2) && is_finite_c(self.g3)) {
            return T::nan();
        }
        let a = (self.g1.norm_sqr() + self.g2.norm_sqr() - T::one()).abs();
        let b = (self.g3.norm() - T::one()).abs();
        a.max(b)
    }

    /// The other member of the sign pair.
    pub fn negated(&self) -> Self {
        Self { g1: -self.g1, g2: -self.g2, g3: -self.g3 }
    }

    /// Returns the sign-pair member with `arg g3 ∈ [0, π)`.
    pub fn canonical(&self) -> Self {
        if arg_2pi(self.g3) < T::PI() {
            *self
        } else {
            self.negated()
        }
    }

    pub fn is_canonical(&self) -> bool {
        arg_2pi(self.g3) < T::PI()
    }

    /// The composed matrix, without validating the invariants.
    pub fn matrix(&self) -> C2Matrix<T> {
        let Self { g1, g2, g3 } = *self;
        C2Matrix::new(g3 * g1, -(g3 * g2.conj()), g3 * g2, g3 * g1.conj())
    }

    /// Largest componentwise distance between two triples.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.g1 - other.g1)
            .norm()
            .max((self.g2 - other.g2).norm())
            .max((self.g3 - other.g3).norm())
    }
}

/// `g3·[[g1, -g2*], [g2, g1*]]`, after checking the invariants.
pub fn compose<T: Real>(q: &QuaternionForm<T>) -> Result<C2Matrix<T>> {
    let r = q.invariant_residual();
    if !(r <= T::default_tol()) {
        return Err(Error::InvalidForm { residual: r.as_f64() });
    }
    Ok(q.matrix())
}

/// Splits a unitary into its canonical quaternion form.
pub fn decompose_u2<T: Real>(m: &C2Matrix<T>, tol: T) -> Result<QuaternionForm<T>> {
    decompose_u2_with_branch(m, tol).map(|(q, _)| q)
}

/// [`decompose_u2`], also reporting which phase construction was used.
pub fn decompose_u2_with_branch<T: Real>(
    m: &C2Matrix<T>,
    tol: T,
) -> Result<(QuaternionForm<T>, DecomposeBranch)> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = m.unitarity_residual();
    if !(residual <= tol) {
        return Err(Error::NotUnitary { residual: residual.as_f64() });
    }
    // det U = e^{i·phase}; dividing by e^{i·phase/2} lands in SU(2).
    let (phase, branch) = if m.u21.norm() > tol {
        (arg_2pi(m.u12) + arg_2pi(m.u21) + T::PI(), DecomposeBranch::OffDiagonal)
    } else {
        (arg_2pi(m.u11) + arg_2pi(m.u22), DecomposeBranch::Diagonal)
    };
    let half = phase / T::lit(2.0);
    let g3 = cis(half);
    let unphase = g3.conj();
    let q = QuaternionForm { g1: unphase * m.u11, g2: unphase * m.u21, g3 };
    Ok((q.canonical(), branch))
}

/// Haar-distributed quaternion form: uniform on `S³ × S¹`, canonicalized.
pub fn random_quaternion_form<T: Real, R: Rng + ?Sized>(rng: &mut R) -> QuaternionForm<T> {
    let v = loop {
        let v: [f64; 4] = std::array::from_fn(|_| standard_normal(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            break v.map(|x| x / n);
        }
    };
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let q = QuaternionForm {
        g1: Complex::new(T::lit(v[0]), T::lit(v[1])),
        g2: Complex::new(T::lit(v[2]), T::lit(v[3])),
        g3: cis(T::lit(theta)),
    };
    q.canonical()
}

/// Random quaternion form with `|g2| ≥ min_g2`, i.e. a non-diagonal unitary
/// bounded away from the diagonal set.
pub fn random_nondiagonal_form<T: Real, R: Rng + ?Sized>(rng: &mut R, min_g2: f64) -> QuaternionForm<T> {
    loop {
        let q = random_quaternion_form::<T, R>(rng);
        if q.g2.norm().as_f64() >= min_g2 {
            return q;
        }
    }
}

/// Random element of `U(2)` (composition of a random quaternion form).
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C2Matrix<T> {
    random_quaternion_form::<T, R>(rng).matrix()
}

/// Box–Muller standard normal draw.
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
