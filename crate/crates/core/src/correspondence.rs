//! Maps between U(2) extension parameters and junction boundary conditions.
//!
//! A unitary `U` with `γ₂ = 0` (diagonal) gives a separating condition
//! [`RhoBc`]; otherwise it gives a transmitting condition [`AlphaBc`]. The
//! forward transmitting map uses a closed form; the reverse map solves the
//! defining linear system directly: `ψ_j⁺ + Uψ_j⁺` must obey
//! `ψ(+Λ) = B_α ψ(−Λ)`. The boundary-value oracles build the same domain
//! elements from deficiency functions and read the condition off their face
//! values.

use num_complex::Complex;
use rand::Rng;

use crate::boundary::{
    alpha_to_bd, random_alpha, validate_class, AlphaBc, ExtendedReal, RhoBc,
};
use crate::deficiency::{DeficiencyFunction, Island, Sign};
use crate::error::{Error, Result};
use crate::matrix2::{
    decompose_u2, is_diagonal, solve2, C2Matrix, C2Vector, QuaternionForm,
};
use crate::real::{c, cis, cr, Real};

/// Electron mass `m ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Mass<T>(T);

impl<T: Real> Mass<T> {
    pub fn new(m: T) -> Result<Self> {
        if m.is_finite() && m >= T::zero() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidMass(m.as_f64()))
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// `√(1+m²)`
    pub fn root(self) -> T {
        (T::one() + self.0 * self.0).sqrt()
    }

    /// `μ = (1+im)/√(1+m²)`
    pub fn mu(self) -> Complex<T> {
        let s = self.root();
        c(T::one() / s, self.0 / s)
    }
}

/// Every self-adjoint extension is exactly one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtensionClass<T> {
    Separating(RhoBc<T>),
    Transmitting(AlphaBc<T>),
}

impl<T: Real> ExtensionClass<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            ExtensionClass::Separating(_) => "separating",
            ExtensionClass::Transmitting(_) => "transmitting",
        }
    }
}

fn check_unimodular<T: Real>(g: Complex<T>) -> Result<()> {
    let residual = (g.norm() - T::one()).abs();
    if residual <= T::default_tol() {
        Ok(())
    } else {
        Err(Error::NotUnimodular { residual: residual.as_f64() })
    }
}

/// `tan(arg(g)/2)` for unimodular `g`, or `None` when `g = −1`.
fn half_tan<T: Real>(g: Complex<T>) -> Option<T> {
    let g = g / g.norm();
    if (cr(T::one()) + g).norm() <= T::default_tol() {
        None
    } else if g.re >= T::zero() {
        Some(g.im / (T::one() + g.re))
    } else {
        // 1 + Re g cancels near g = −1
        Some((T::one() - g.re) / g.im)
    }
}

/// `(γ_L, γ_R) ↦ (ρ₊, ρ₋)` for diagonal `U = diag(γ_L, γ_R)`.
pub fn diagonal_u2_to_rho<T: Real>(gl: Complex<T>, gr: Complex<T>, m: Mass<T>) -> Result<RhoBc<T>> {
    check_unimodular(gl)?;
    check_unimodular(gr)?;
    let s = m.root();
    let mm = m.value();
    let rho_minus = half_tan(gl).map_or(ExtendedReal::PlusInfinity, |t| ExtendedReal::Finite((t - mm) / s));
    let rho_plus = half_tan(gr).map_or(ExtendedReal::PlusInfinity, |t| ExtendedReal::Finite(-(t - mm) / s));
    Ok(RhoBc::new(rho_plus, rho_minus))
}

/// Inverse of [`diagonal_u2_to_rho`], returning `(γ_L, γ_R)`.
pub fn rho_to_diagonal_u2<T: Real>(r: &RhoBc<T>, m: Mass<T>) -> (Complex<T>, Complex<T>) {
    let s = m.root();
    let mm = m.value();
    let two = T::lit(2.0);
    let gl = match r.rho_minus {
        ExtendedReal::Finite(x) => cis(two * (mm + s * x).atan()),
        ExtendedReal::PlusInfinity => cr(-T::one()),
    };
    let gr = match r.rho_plus {
        ExtendedReal::Finite(x) => cis(two * (mm - s * x).atan()),
        ExtendedReal::PlusInfinity => cr(-T::one()),
    };
    (gl, gr)
}

/// Transmitting condition of a non-diagonal `U = γ₃[[γ₁, −γ₂*], [γ₂, γ₁*]]`.
///
/// The result is unchanged when `(γ₁, γ₂, γ₃)` is replaced by its negative.
pub fn u2_to_alpha<T: Real>(q: &QuaternionForm<T>, m: Mass<T>) -> Result<AlphaBc<T>> {
    if q.g2.norm() <= T::default_tol() {
        return Err(Error::DiagonalInput { gamma2: q.g2.norm().as_f64() });
    }
    let mu = m.mu();
    let s = cr(m.root());
    let (g1, g3) = (q.g1, q.g3);
    let k = s / q.g2;
    let i = c(T::zero(), T::one());
    let a1 = i * k * ((g1.conj() * mu).im + (g3.conj() * mu).im);
    let a2 = k * (g1.re + g3.re);
    let a3 = k * (-g1.re + (g3.conj() * mu * mu).re);
    let a4 = i * k * ((g1 * mu).im + (g3.conj() * mu).im);
    Ok(AlphaBc::new(a1, a2, a3, a4))
}

/// Face values of the four unit-normalized deficiency functions at junction
/// half-length `lambda`: `(ψ_L⁺(−Λ), ψ_L⁻(−Λ), ψ_R⁺(+Λ), ψ_R⁻(+Λ))`.
fn face_traces<T: Real>(m: Mass<T>, lambda: T) -> [C2Vector<T>; 4] {
    let f = |island, sign| DeficiencyFunction::new(island, sign, m, lambda).trace();
    [
        f(Island::Left, Sign::Plus),
        f(Island::Left, Sign::Minus),
        f(Island::Right, Sign::Plus),
        f(Island::Right, Sign::Minus),
    ]
}

/// Boundary-value oracle for the transmitting case.
///
/// Forms `φ_L = ψ_L⁺ + u₁₁ψ_L⁻ + u₁₂ψ_R⁻` and `φ_R = ψ_R⁺ + u₂₁ψ_L⁻ + u₂₂ψ_R⁻`,
/// evaluates them at `∓Λ`, and returns the matrix `V` with
/// `V·[φ_L(−Λ) φ_R(−Λ)] = [φ_L(+Λ) φ_R(+Λ)]`.
pub fn oracle_alpha_from_u2<T: Real>(u: &C2Matrix<T>, m: Mass<T>, lambda: T) -> Result<C2Matrix<T>> {
    let [pl_plus, pl_minus, qr_plus, qr_minus] = face_traces(m, lambda);
    let at_minus = C2Matrix::from_columns(pl_plus + pl_minus.scale(u.u11), pl_minus.scale(u.u21));
    let at_plus = C2Matrix::from_columns(qr_minus.scale(u.u12), qr_plus + qr_minus.scale(u.u22));
    let col = |k: usize| {
        let e = at_minus.entries();
        if k == 0 { C2Vector::new(e[0], e[2]) } else { C2Vector::new(e[1], e[3]) }
    };
    // relative to the column sizes, which scale like e^{−√(1+m²)Λ}
    let size = col(0).norm() * col(1).norm();
    if !(at_minus.det().norm() > T::default_tol() * size) {
        return Err(Error::SingularSystem);
    }
    let inv = at_minus.inverse().ok_or(Error::SingularSystem)?;
    Ok(at_plus * inv)
}

/// Separating condition read off the face values of `ψ_L⁺ + γ_Lψ_L⁻` and
/// `ψ_R⁺ + γ_Rψ_R⁻` as `ρ = Im(ψ↓/ψ↑)`.
pub fn oracle_rho_from_diagonal<T: Real>(
    gl: Complex<T>,
    gr: Complex<T>,
    m: Mass<T>,
    lambda: T,
) -> Result<RhoBc<T>> {
    let [pl_plus, pl_minus, qr_plus, qr_minus] = face_traces(m, lambda);
    let read = |v: C2Vector<T>, g: Complex<T>| -> Result<ExtendedReal<T>> {
        if (cr(T::one()) + g).norm() <= T::default_tol() {
            return Ok(ExtendedReal::PlusInfinity);
        }
        let ratio = v.down / v.up;
        let scale = T::one().max(ratio.norm());
        if ratio.re.abs() > T::lit(1e3) * T::default_tol() * scale {
            return Err(Error::InternalInconsistency { what: "boundary ratio has a real part", residual: ratio.re.as_f64() });
        }
        Ok(ExtendedReal::Finite(ratio.im))
    };
    let rho_minus = read(pl_plus + pl_minus.scale(gl), gl)?;
    let rho_plus = read(qr_plus + qr_minus.scale(gr), gr)?;
    Ok(RhoBc::new(rho_plus, rho_minus))
}

/// Unitary of a transmitting condition at half-length `lambda`, from the
/// linear system that makes both domain basis elements obey the condition.
pub fn alpha_to_u2_matrix<T: Real>(a: &AlphaBc<T>, m: Mass<T>, lambda: T) -> Result<C2Matrix<T>> {
    let report = validate_class(a, T::default_tol());
    if !report.valid {
        return Err(Error::NotInClass { residual: report.max_scaled_residual().as_f64() });
    }
    let [pl_plus, pl_minus, qr_plus, qr_minus] = face_traces(m, lambda);
    let b = a.matrix();
    let b_pl_minus = b.apply(&pl_minus);
    let rel = T::epsilon() * T::lit(16.0);
    // B(ψ_L⁺ + u₁₁ψ_L⁻)(−Λ) = u₁₂ ψ_R⁻(+Λ)
    let row1 = solve2(&C2Matrix::from_columns(-b_pl_minus, qr_minus), &b.apply(&pl_plus), rel)
        .ok_or(Error::SingularSystem)?;
    // B(u₂₁ψ_L⁻)(−Λ) = (ψ_R⁺ + u₂₂ψ_R⁻)(+Λ)
    let row2 = solve2(&C2Matrix::from_columns(b_pl_minus, -qr_minus), &qr_plus, rel)
        .ok_or(Error::SingularSystem)?;
    let u = C2Matrix::new(row1.up, row1.down, row2.up, row2.down);
    let residual = u.unitarity_residual();
    if !(residual <= unitarity_tol::<T>()) {
        return Err(Error::InternalInconsistency { what: "solved U is not unitary", residual: residual.as_f64() });
    }
    Ok(u)
}

fn unitarity_tol<T: Real>() -> T {
    T::default_tol() * T::lit(100.0)
}

/// Quaternion form of the non-diagonal unitary for a transmitting condition.
pub fn alpha_to_u2<T: Real>(a: &AlphaBc<T>, m: Mass<T>) -> Result<QuaternionForm<T>> {
    let u = alpha_to_u2_matrix(a, m, T::zero())?;
    decompose_u2(&u, unitarity_tol())
}

/// The closed-form inverse with `Γ₀ = (4/(1+m²) + |−μ*α₁+α₂−α₃+μα₄|²)^{−1/2}`
/// and the overall phase `θ` of the `e^{iθ}(b₁, ib₂, ib₃, b₄)` form.
///
/// Kept for comparison with [`alpha_to_u2`]; the two disagree in general.
pub fn printed_inverse_formula<T: Real>(a: &AlphaBc<T>, m: Mass<T>) -> Result<QuaternionForm<T>> {
    let bd = alpha_to_bd(a, T::default_tol())?;
    let mu = m.mu();
    let s2 = T::one() + m.value() * m.value();
    let lead = -mu.conj() * a.a1 + a.a2 - a.a3 + mu * a.a4;
    let gamma0 = (T::lit(4.0) / s2 + lead.norm_sqr()).sqrt().recip();
    let e = cis(-(bd.theta - T::FRAC_PI_2())) * gamma0;
    let g1 = e * lead;
    let g2 = e * (T::lit(2.0) / m.root());
    let g3 = e * mu * (a.a1 + mu.conj() * a.a2 + mu * a.a3 + a.a4).conj();
    Ok(QuaternionForm::new_unchecked(g1, g2, g3))
}

/// How the printed inverse relates to the linear-system inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agreement {
    Exact,
    SignPair,
    Mismatch,
}

impl Agreement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Agreement::Exact => "exact",
            Agreement::SignPair => "sign_pair",
            Agreement::Mismatch => "mismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedComparison<T> {
    pub primary: QuaternionForm<T>,
    pub printed: QuaternionForm<T>,
    pub agreement: Agreement,
    /// `|γ₁|²+|γ₂|²` and `|γ₃|` deviations of the printed triple.
    pub printed_unitarity_residual: T,
}

pub fn compare_printed_inverse<T: Real>(a: &AlphaBc<T>, m: Mass<T>, tol: T) -> Result<PrintedComparison<T>> {
    let primary = alpha_to_u2(a, m)?;
    let printed = printed_inverse_formula(a, m)?;
    let agreement = if printed.max_abs_diff(&primary) <= tol {
        Agreement::Exact
    } else if printed.negated().max_abs_diff(&primary) <= tol {
        Agreement::SignPair
    } else {
        Agreement::Mismatch
    };
    Ok(PrintedComparison { primary, printed, agreement, printed_unitarity_residual: printed.invariant_residual() })
}

/// Residuals of the four algebraic identities linking `α` to its inverse
/// image `(γ₁, γ₂, γ₃)`:
///
/// ```text
/// (α₁+μ*α₂)γ₁ + γ₂* = γ₃*(−α₁+μα₂)      (α₁+μ*α₂)γ₂ − γ₁* = γ₃*
/// (α₃+μ*α₄)γ₁ − μ*γ₂* = γ₃*(−α₃+μα₄)    (α₃+μ*α₄)γ₂ + μ*γ₁* = μγ₃*
/// ```
pub fn inverse_identity_residuals<T: Real>(a: &AlphaBc<T>, q: &QuaternionForm<T>, m: Mass<T>) -> [T; 4] {
    let mu = m.mu();
    let mc = mu.conj();
    let (g1, g2, g3) = (q.g1, q.g2, q.g3);
    let p = a.a1 + mc * a.a2;
    let r = a.a3 + mc * a.a4;
    [
        (p * g1 + g2.conj() - g3.conj() * (-a.a1 + mu * a.a2)).norm(),
        (p * g2 - g1.conj() - g3.conj()).norm(),
        (r * g1 - mc * g2.conj() - g3.conj() * (-a.a3 + mu * a.a4)).norm(),
        (r * g2 + mc * g1.conj() - mu * g3.conj()).norm(),
    ]
}

/// Separating or transmitting condition of a unitary `U`.
pub fn classify<T: Real>(u: &C2Matrix<T>, m: Mass<T>, tol: T) -> Result<ExtensionClass<T>> {
    let residual = u.unitarity_residual();
    if !(residual <= tol) {
        return Err(Error::NotUnitary { residual: residual.as_f64() });
    }
    if is_diagonal(u, tol) {
        return Ok(ExtensionClass::Separating(diagonal_u2_to_rho(u.u11, u.u22, m)?));
    }
    let q = decompose_u2(u, tol)?;
    Ok(ExtensionClass::Transmitting(u2_to_alpha(&q, m)?))
}

/// Tally of [`Agreement`] over random class instances.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrataSummary<T> {
    pub samples: usize,
    pub masses: Vec<T>,
    pub exact: usize,
    pub sign_pair: usize,
    pub mismatch: usize,
    pub max_printed_unitarity_residual: T,
    /// First mismatching `(α, m)` if any.
    pub first_mismatch: Option<(AlphaBc<T>, T)>,
}

/// Compares printed and linear-system inverses on `samples` random class
/// instances, cycling through `masses`.
pub fn errata_report<T: Real, R: Rng + ?Sized>(samples: usize, masses: &[T], rng: &mut R) -> Result<ErrataSummary<T>> {
    let mut out = ErrataSummary {
        samples,
        masses: masses.to_vec(),
        exact: 0,
        sign_pair: 0,
        mismatch: 0,
        max_printed_unitarity_residual: T::zero(),
        first_mismatch: None,
    };
    let tol = T::lit(1e3) * T::default_tol();
    for k in 0..samples {
        let mm = masses[k % masses.len().max(1)];
        let m = Mass::new(mm)?;
        let a = random_alpha::<T, R>(rng);
        let cmp = compare_printed_inverse(&a, m, tol)?;
        out.max_printed_unitarity_residual = out.max_printed_unitarity_residual.max(cmp.printed_unitarity_residual);
        match cmp.agreement {
            Agreement::Exact => out.exact += 1,
            Agreement::SignPair => out.sign_pair += 1,
            Agreement::Mismatch => {
                out.mismatch += 1;
                out.first_mismatch.get_or_insert((a, mm));
            }
        }
    }
    Ok(out)
}
