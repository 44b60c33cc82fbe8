//! Separating (ρ) and transmitting (α) boundary conditions at the junction.
//!
//! A transmitting condition ties the two faces together, `ψ(+Λ) = B_α ψ(−Λ)`
//! with `B_α = [[α1, α2], [α3, α4]]`. The class constraints on `α` are
//! exactly what makes `B_α† σx B_α = σx`, so the probability current
//! `2 Re(ψ↑* ψ↓)` is the same on both faces.
//!
//! A separating condition constrains each face on its own:
//! `iρ ψ↑ = ψ↓` for finite `ρ`, `ψ↑ = 0` for `ρ = +∞`.

use std::fmt;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix2::{C2Matrix, C2Vector};
use crate::real::{arg_2pi, c, cis, cr, is_finite_c, wrap_2pi, Real};

/// A real number or `+∞`. There is no `−∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal<T> {
    Finite(T),
    PlusInfinity,
}

impl<T: Real> ExtendedReal<T> {
    /// Maps `+∞` to [`ExtendedReal::PlusInfinity`]; rejects NaN and `−∞`.
    pub fn from_real(x: T) -> Result<Self> {
        if x.is_nan() || x == T::neg_infinity() {
            Err(Error::NonFinite)
        } else if x == T::infinity() {
            Ok(Self::PlusInfinity)
        } else {
            Ok(Self::Finite(x))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::PlusInfinity)
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Self::Finite(x) => Some(x),
            Self::PlusInfinity => None,
        }
    }

    /// `+∞` as `T::infinity()`.
    pub fn to_real(&self) -> T {
        self.finite().unwrap_or_else(T::infinity)
    }
}

impl<T: Real> fmt::Display for ExtendedReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::PlusInfinity => f.write_str("inf"),
        }
    }
}

/// Junction face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    /// `x = −Λ`, edge of the left island.
    Minus,
    /// `x = +Λ`, edge of the right island.
    Plus,
}

/// Separating boundary condition `(ρ₊, ρ₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoBc<T> {
    pub rho_plus: ExtendedReal<T>,
    pub rho_minus: ExtendedReal<T>,
}

impl<T: Real> RhoBc<T> {
    pub fn new(rho_plus: ExtendedReal<T>, rho_minus: ExtendedReal<T>) -> Self {
        Self { rho_plus, rho_minus }
    }

    pub fn finite(rho_plus: T, rho_minus: T) -> Self {
        Self::new(ExtendedReal::Finite(rho_plus), ExtendedReal::Finite(rho_minus))
    }

    pub fn at(&self, face: Face) -> ExtendedReal<T> {
        match face {
            Face::Plus => self.rho_plus,
            Face::Minus => self.rho_minus,
        }
    }

    /// A nonzero face value satisfying the condition at `face`, scaled by `amp`.
    pub fn face_ray(&self, face: Face, amp: Complex<T>) -> C2Vector<T> {
        match self.at(face) {
            ExtendedReal::Finite(rho) => C2Vector::new(amp, amp * c(T::zero(), rho)),
            ExtendedReal::PlusInfinity => C2Vector::new(cr(T::zero()), amp),
        }
    }
}

/// Transmitting boundary condition `α = (α1, α2, α3, α4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBc<T> {
    pub a1: Complex<T>,
    pub a2: Complex<T>,
    pub a3: Complex<T>,
    pub a4: Complex<T>,
}

impl<T: Real> AlphaBc<T> {
    pub fn new(a1: Complex<T>, a2: Complex<T>, a3: Complex<T>, a4: Complex<T>) -> Self {
        Self { a1, a2, a3, a4 }
    }

    pub fn real(a1: T, a2: T, a3: T, a4: T) -> Self {
        Self::new(cr(a1), cr(a2), cr(a3), cr(a4))
    }

    pub fn from_matrix(m: &C2Matrix<T>) -> Self {
        Self::new(m.u11, m.u12, m.u21, m.u22)
    }

    /// The boundary matrix `B_α`.
    pub fn matrix(&self) -> C2Matrix<T> {
        C2Matrix::new(self.a1, self.a2, self.a3, self.a4)
    }

    pub fn to_array(&self) -> [Complex<T>; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix().max_abs_diff(&other.matrix())
    }

    fn norm_sqr(&self) -> T {
        self.to_array().iter().fold(T::zero(), |s, z| s + z.norm_sqr())
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|z| is_finite_c(*z))
    }
}

/// Per-constraint residuals of the transmitting class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassReport<T> {
    pub valid: bool,
    /// `|Re(α1α2*)|, |Re(α1α3*)|, |Re(α2α4*)|, |Re(α3α4*)|,
    /// |α1α4* + α2α3* − 1|, |α1α4* + α2*α3 − 1|`.
    pub residuals: [T; 6],
    /// Residuals are compared against `tol · scale`, `scale = max(1, Σ|αᵢ|²)`.
    pub scale: T,
}

impl<T: Real> ClassReport<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |a, &r| a.max(r))
    }

    /// Largest residual divided by the scale.
    pub fn max_scaled_residual(&self) -> T {
        self.max_residual() / self.scale
    }

    pub const LABELS: [&'static str; 6] = [
        "Re(a1 a2*)",
        "Re(a1 a3*)",
        "Re(a2 a4*)",
        "Re(a3 a4*)",
        "a1 a4* + a2 a3* - 1",
        "a1 a4* + a2* a3 - 1",
    ];
}

pub fn validate_class<T: Real>(a: &AlphaBc<T>, tol: T) -> ClassReport<T> {
    let AlphaBc { a1, a2, a3, a4 } = *a;
    let one = cr(T::one());
    let residuals = [
        (a1 * a2.conj()).re.abs(),
        (a1 * a3.conj()).re.abs(),
        (a2 * a4.conj()).re.abs(),
        (a3 * a4.conj()).re.abs(),
        (a1 * a4.conj() + a2 * a3.conj() - one).norm(),
        (a1 * a4.conj() + a2.conj() * a3 - one).norm(),
    ];
    let scale = T::one().max(a.norm_sqr());
    let valid = a.is_finite() && residuals.iter().all(|&r| r <= tol * scale);
    ClassReport { valid, residuals, scale }
}

fn require_class<T: Real>(a: &AlphaBc<T>, tol: T) -> Result<()> {
    let report = validate_class(a, tol);
    if report.valid {
        Ok(())
    } else {
        Err(Error::NotInClass { residual: report.max_scaled_residual().as_f64() })
    }
}

/// Phase-and-four-reals form `e^{iθ}[[b1, i·b2], [i·b3, b4]]`, `b1b4 + b2b3 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdForm<T> {
    pub theta: T,
    pub b1: T,
    pub b2: T,
    pub b3: T,
    pub b4: T,
}

impl<T: Real> BdForm<T> {
    pub fn new(theta: T, b1: T, b2: T, b3: T, b4: T) -> Self {
        Self { theta, b1, b2, b3, b4 }
    }

    pub fn constraint_residual(&self) -> T {
        (self.b1 * self.b4 + self.b2 * self.b3 - T::one()).abs()
    }

    /// The same matrix written with `θ + π` and every `b` negated.
    pub fn flipped(&self) -> Self {
        Self::new(wrap_2pi(self.theta + T::PI()), -self.b1, -self.b2, -self.b3, -self.b4)
    }

    /// Distance between two forms, treating the joint `(θ+π, −b)` flip as equal.
    pub fn distance_mod_flip(&self, other: &Self) -> T {
        let d = |x: &Self, y: &Self| {
            let dt = (cis(x.theta) - cis(y.theta)).norm();
            dt.max((x.b1 - y.b1).abs())
                .max((x.b2 - y.b2).abs())
                .max((x.b3 - y.b3).abs())
                .max((x.b4 - y.b4).abs())
        };
        d(self, other).min(d(self, &other.flipped()))
    }
}

/// Writes a class-valid `α` in phase-and-four-reals form.
///
/// Uses `θ = arg α1` when `|α1| > tol`, otherwise `θ = arg(−iα3)`.
pub fn alpha_to_bd<T: Real>(a: &AlphaBc<T>, tol: T) -> Result<BdForm<T>> {
    require_class(a, tol)?;
    let AlphaBc { a1, a2, a3, a4 } = *a;
    let i = c(T::zero(), T::one());
    let (theta, b) = if a1.norm() > tol {
        let n = a1.norm();
        let theta = arg_2pi(a1);
        let b = [
            cr(n),
            -i * (a1 * a2.conj()).conj() / n,
            -i * (a1 * a3.conj()).conj() / n,
            (a1 * a4.conj()).conj() / n,
        ];
        (theta, b)
    } else {
        let n = a3.norm();
        if n == T::zero() {
            return Err(Error::NotInClass { residual: 1.0 });
        }
        let theta = arg_2pi(-i * a3);
        let b = [
            i * a1 * a3.conj() / n,
            a2 * a3.conj() / n,
            cr(n),
            i * (a3 * a4.conj()).conj() / n,
        ];
        (theta, b)
    };
    let scale = T::one().max(a.norm_sqr());
    let worst_imag = b.iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()));
    if worst_imag > tol * scale {
        return Err(Error::NotInClass { residual: (worst_imag / scale).as_f64() });
    }
    Ok(BdForm::new(theta, b[0].re, b[1].re, b[2].re, b[3].re))
}

pub fn bd_to_alpha<T: Real>(f: &BdForm<T>, tol: T) -> Result<AlphaBc<T>> {
    let r = f.constraint_residual();
    if !(r <= tol) || !f.theta.is_finite() {
        return Err(Error::InvalidBd { residual: r.as_f64() });
    }
    let phase = cis(f.theta);
    let i_phase = phase * c(T::zero(), T::one());
    Ok(AlphaBc::new(phase * f.b1, i_phase * f.b2, i_phase * f.b3, phase * f.b4))
}

/// `B_α⁻¹ = [[α4*, α2*], [α3*, α1*]]`, valid on the class.
pub fn invert_alpha<T: Real>(a: &AlphaBc<T>, tol: T) -> Result<AlphaBc<T>> {
    require_class(a, tol)?;
    Ok(AlphaBc::new(a.a4.conj(), a.a2.conj(), a.a3.conj(), a.a1.conj()))
}

pub fn apply_alpha<T: Real>(a: &AlphaBc<T>, v_minus: &C2Vector<T>) -> C2Vector<T> {
    a.matrix().apply(v_minus)
}

/// Whether `v` satisfies the separating condition `rho` at a single face.
pub fn satisfies_rho_face<T: Real>(rho: ExtendedReal<T>, v: &C2Vector<T>, tol: T) -> bool {
    let scale = T::one().max(v.up.norm()).max(v.down.norm());
    match rho {
        ExtendedReal::Finite(r) => (v.up * c(T::zero(), r) - v.down).norm() <= tol * scale,
        ExtendedReal::PlusInfinity => v.up.norm() <= tol * scale,
    }
}

/// Whether the face values satisfy the separating condition at both faces.
pub fn satisfies_rho<T: Real>(r: &RhoBc<T>, v_minus: &C2Vector<T>, v_plus: &C2Vector<T>, tol: T) -> bool {
    satisfies_rho_face(r.rho_minus, v_minus, tol) && satisfies_rho_face(r.rho_plus, v_plus, tol)
}

/// Probability current `v† σx v = 2 Re(v↑* v↓)`.
pub fn current<T: Real>(v: &C2Vector<T>) -> T {
    T::lit(2.0) * (v.up.conj() * v.down).re
}

/// Spin-flip condition `e^{i(θ+π/2)}[[0, b2], [1/b2, 0]]`.
pub fn make_spin_flip<T: Real>(theta: T, b2: T) -> Result<AlphaBc<T>> {
    if b2 == T::zero() || !b2.is_finite() {
        return Err(Error::ZeroParameter("b2"));
    }
    let f = BdForm::new(wrap_2pi(theta), T::zero(), b2, T::one() / b2, T::zero());
    bd_to_alpha(&f, T::default_tol())
}

/// Phase-shift condition `e^{iθ} diag(b1, 1/b1)`.
pub fn make_phase_shift<T: Real>(theta: T, b1: T) -> Result<AlphaBc<T>> {
    if b1 == T::zero() || !b1.is_finite() {
        return Err(Error::ZeroParameter("b1"));
    }
    let f = BdForm::new(wrap_2pi(theta), b1, T::zero(), T::zero(), T::one() / b1);
    bd_to_alpha(&f, T::default_tol())
}

/// Magnitude range of the log-uniform draws in [`random_bd_form`].
pub const LOG_UNIFORM_RANGE: (f64, f64) = (0.1, 10.0);

fn log_uniform_signed<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let (lo, hi) = LOG_UNIFORM_RANGE;
    let mag = (rng.gen_range(lo.ln()..hi.ln())).exp();
    if rng.gen::<bool>() {
        mag
    } else {
        -mag
    }
}

/// Random four-parameter form: `θ` uniform, `b2, b3` signed log-uniform on
/// [`LOG_UNIFORM_RANGE`], `b1` signed log-uniform and `b4 = (1 − b2b3)/b1`.
/// One draw in ten takes `b1 = b4 = 0`, `b3 = 1/b2` so the `α1 = 0` case is
/// exercised.
pub fn random_bd_form<T: Real, R: Rng + ?Sized>(rng: &mut R) -> BdForm<T> {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let b2 = log_uniform_signed(rng);
    let (b1, b3, b4) = if rng.gen_range(0..10) == 0 {
        (0.0, 1.0 / b2, 0.0)
    } else {
        let b3 = log_uniform_signed(rng);
        let b1 = log_uniform_signed(rng);
        (b1, b3, (1.0 - b2 * b3) / b1)
    };
    BdForm::new(T::lit(theta), T::lit(b1), T::lit(b2), T::lit(b3), T::lit(b4))
}

/// Random class-valid `α`, via [`random_bd_form`].
pub fn random_alpha<T: Real, R: Rng + ?Sized>(rng: &mut R) -> AlphaBc<T> {
    let f = random_bd_form::<T, R>(rng);
    let phase = cis(f.theta);
    let i_phase = phase * c(T::zero(), T::one());
    AlphaBc::new(phase * f.b1, i_phase * f.b2, i_phase * f.b3, phase * f.b4)
}

/// Random separating condition; each component is `+∞` with probability 1/5,
/// otherwise uniform on `[−5, 5]`.
pub fn random_rho<T: Real, R: Rng + ?Sized>(rng: &mut R) -> RhoBc<T> {
    let mut draw = || {
        if rng.gen_range(0..5) == 0 {
            ExtendedReal::PlusInfinity
        } else {
            ExtendedReal::Finite(T::lit(rng.gen_range(-5.0..5.0)))
        }
    };
    let rho_plus = draw();
    let rho_minus = draw();
    RhoBc::new(rho_plus, rho_minus)
}

/// Random spinor with entries uniform in the unit square.
pub fn random_vector<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C2Vector<T> {
    let mut u = || T::lit(rng.gen_range(-1.0..1.0));
    let (a, b, c_, d) = (u(), u(), u(), u());
    C2Vector::new(c(a, b), c(c_, d))
}
