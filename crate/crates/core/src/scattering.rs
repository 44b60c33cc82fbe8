//! Stationary plane-wave scattering through the junction.
//!
//! For energy `E > m` the free spinors are `u± = (1, ±λ)` with
//! `λ = k/(E+m)` and `k = √(E²−m²)`. A wave incident from the left has face
//! values `ψ(−Λ) = u₊ + r u₋` and `ψ(+Λ) = t u₊`; all phases are referenced
//! to the faces so nothing depends on `Λ`.

use num_complex::Complex;

use crate::boundary::{apply_alpha, make_phase_shift, make_spin_flip, AlphaBc, ExtendedReal, RhoBc};
use crate::correspondence::{ExtensionClass, Mass};
use crate::deficiency::Island;
use crate::error::{Error, Result};
use crate::matrix2::{solve2, C2Matrix, C2Vector};
use crate::real::{c, cr, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveBasis<T> {
    pub energy: T,
    pub k: T,
    pub lambda: T,
    pub u_plus: C2Vector<T>,
    pub u_minus: C2Vector<T>,
}

impl<T: Real> PlaneWaveBasis<T> {
    /// `max |(σₓk + mσ_z)u± − E u±|`
    pub fn eigen_residual(&self, m: Mass<T>) -> T {
        let h = |v: &C2Vector<T>, sign: T| {
            let k = cr(self.k * sign);
            let mm = cr(m.value());
            let hv = C2Vector::new(k * v.down + mm * v.up, k * v.up - mm * v.down);
            (hv - v.scale(cr(self.energy))).max_abs()
        };
        h(&self.u_plus, T::one()).max(h(&self.u_minus, -T::one()))
    }
}

pub fn plane_spinors<T: Real>(energy: T, m: Mass<T>) -> Result<PlaneWaveBasis<T>> {
    let mm = m.value();
    if !(energy > mm) || !energy.is_finite() {
        return Err(Error::BelowGap { energy: energy.as_f64(), mass: mm.as_f64() });
    }
    // (E−m)(E+m) keeps precision just above the gap
    let k = ((energy - mm) * (energy + mm)).sqrt();
    let lambda = k / (energy + mm);
    Ok(PlaneWaveBasis {
        energy,
        k,
        lambda,
        u_plus: C2Vector::real(T::one(), lambda),
        u_minus: C2Vector::real(T::one(), -lambda),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult<T> {
    pub energy: T,
    pub k: T,
    pub lambda: T,
    pub r: Complex<T>,
    pub t: Complex<T>,
    pub reflectance: T,
    pub transmittance: T,
    pub incoming_spin: C2Vector<T>,
    /// Unit spinor of the transmitted wave, zero when nothing is transmitted.
    pub transmitted_spin: C2Vector<T>,
    /// `arg t` in `(−π, π]`.
    pub transmission_phase: T,
    /// Face values of the assembled scattering state at `−Λ` and `+Λ`.
    pub face_minus: C2Vector<T>,
    pub face_plus: C2Vector<T>,
}

fn unit_or_zero<T: Real>(v: C2Vector<T>) -> C2Vector<T> {
    if v.norm() > T::zero() {
        v.normalized()
    } else {
        v
    }
}

/// Left incidence through a transmitting condition.
pub fn scatter_alpha<T: Real>(a: &AlphaBc<T>, energy: T, m: Mass<T>) -> Result<ScatteringResult<T>> {
    let basis = plane_spinors(energy, m)?;
    let b = a.matrix();
    let system = C2Matrix::from_columns(basis.u_plus, -b.apply(&basis.u_minus));
    let sol = solve2(&system, &b.apply(&basis.u_plus), T::epsilon() * T::lit(16.0))
        .ok_or(Error::ResonanceSingular { energy: energy.as_f64() })?;
    let (t, r) = (sol.up, sol.down);
    let face_minus = basis.u_plus + basis.u_minus.scale(r);
    let face_plus = basis.u_plus.scale(t);
    Ok(ScatteringResult {
        energy,
        k: basis.k,
        lambda: basis.lambda,
        r,
        t,
        reflectance: r.norm_sqr(),
        transmittance: t.norm_sqr(),
        incoming_spin: basis.u_plus.normalized(),
        transmitted_spin: unit_or_zero(face_plus),
        transmission_phase: t.im.atan2(t.re),
        face_minus,
        face_plus,
    })
}

/// Reflection at a single face with a separating condition. `side` is the
/// island the wave comes from.
pub fn scatter_rho<T: Real>(rho: &RhoBc<T>, energy: T, m: Mass<T>, side: Island) -> Result<ScatteringResult<T>> {
    let basis = plane_spinors(energy, m)?;
    let lam = cr(basis.lambda);
    let (value, incoming, outgoing) = match side {
        Island::Left => (rho.rho_minus, basis.u_plus, basis.u_minus),
        Island::Right => (rho.rho_plus, basis.u_minus, basis.u_plus),
    };
    let r = match value {
        ExtendedReal::PlusInfinity => cr(-T::one()),
        ExtendedReal::Finite(x) => {
            let irho = c(T::zero(), x);
            match side {
                Island::Left => (lam - irho) / (lam + irho),
                Island::Right => (lam + irho) / (lam - irho),
            }
        }
    };
    let face = incoming + outgoing.scale(r);
    let (face_minus, face_plus) = match side {
        Island::Left => (face, C2Vector::zero()),
        Island::Right => (C2Vector::zero(), face),
    };
    Ok(ScatteringResult {
        energy,
        k: basis.k,
        lambda: basis.lambda,
        r,
        t: cr(T::zero()),
        reflectance: r.norm_sqr(),
        transmittance: T::zero(),
        incoming_spin: incoming.normalized(),
        transmitted_spin: C2Vector::zero(),
        transmission_phase: T::zero(),
        face_minus,
        face_plus,
    })
}

/// Scatters a wave from the left through either kind of condition.
pub fn scatter<T: Real>(bc: &ExtensionClass<T>, energy: T, m: Mass<T>) -> Result<ScatteringResult<T>> {
    match bc {
        ExtensionClass::Transmitting(a) => scatter_alpha(a, energy, m),
        ExtensionClass::Separating(r) => scatter_rho(r, energy, m, Island::Left),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub energy: T,
    pub outcome: Result<ScatteringResult<T>>,
}

impl<T: Real> SweepRow<T> {
    pub fn flag(&self) -> &'static str {
        match self.outcome {
            Ok(_) => "OK",
            Err(_) => "RESONANCE",
        }
    }
}

/// Uniform energy grid of `steps` points on `[e_min, e_max]`, in order.
pub fn sweep<T: Real>(bc: &ExtensionClass<T>, e_min: T, e_max: T, steps: usize, m: Mass<T>) -> Result<Vec<SweepRow<T>>> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 steps, got {steps}")));
    }
    if !(m.value() < e_min && e_min < e_max) || !e_max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need m < emin < emax, got m = {}, emin = {}, emax = {}",
            m.value(),
            e_min,
            e_max
        )));
    }
    let last = T::from_usize(steps - 1).expect("step count");
    Ok((0..steps)
        .map(|j| {
            let energy = if j == steps - 1 {
                e_max
            } else {
                e_min + (e_max - e_min) * T::from_usize(j).expect("index") / last
            };
            SweepRow { energy, outcome: scatter(bc, energy, m) }
        })
        .collect())
}

/// One junction unit of the switch demo.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchUnit<T> {
    pub name: String,
    pub alpha: AlphaBc<T>,
    pub scattering: ScatteringResult<T>,
    /// Face spinor imposed at `−Λ`.
    pub input_spin: C2Vector<T>,
    /// Resulting face spinor at `+Λ`.
    pub output_spin: C2Vector<T>,
    pub preserves_spin: bool,
    pub swaps_spin: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchReport<T> {
    pub mass: T,
    pub energy: T,
    pub unit0: SwitchUnit<T>,
    pub unit1: SwitchUnit<T>,
    pub phase_variants: Vec<(T, ScatteringResult<T>)>,
    pub passed: bool,
}

fn switch_unit<T: Real>(name: &str, alpha: AlphaBc<T>, energy: T, m: Mass<T>, input: C2Vector<T>) -> Result<SwitchUnit<T>> {
    let scattering = scatter_alpha(&alpha, energy, m)?;
    let output = apply_alpha(&alpha, &input);
    let tol = T::lit(1e3) * T::default_tol();
    Ok(SwitchUnit {
        name: name.to_string(),
        alpha,
        scattering,
        input_spin: input,
        output_spin: output,
        preserves_spin: (output - input).max_abs() <= tol,
        swaps_spin: (output - input.swapped()).max_abs() <= tol,
    })
}

/// Spin switch with a no-flip unit and a flip unit at `m = 0`, `E = 1`.
///
/// The input is the face spinor `(cos π/8, sin π/8)`, mostly spin up, and
/// the output is the face spinor the condition forces on the other side.
/// `phases` lists extra phase-shift units `make_phase_shift(θ, 1)`.
pub fn switch_demo<T: Real>(phases: &[T]) -> Result<SwitchReport<T>> {
    let m = Mass::zero();
    let energy = T::one();
    let angle = T::PI() / T::lit(8.0);
    let input = C2Vector::real(angle.cos(), angle.sin());
    let unit0 = switch_unit("Unit0", make_phase_shift(T::zero(), T::one())?, energy, m, input)?;
    let unit1 = switch_unit("Unit1", make_spin_flip(-T::FRAC_PI_2(), T::one())?, energy, m, input)?;
    let phase_variants = phases
        .iter()
        .map(|&theta| Ok((theta, scatter_alpha(&make_phase_shift(theta, T::one())?, energy, m)?)))
        .collect::<Result<Vec<_>>>()?;
    let tol = T::lit(1e3) * T::default_tol();
    let full = |s: &ScatteringResult<T>| (s.transmittance - T::one()).abs() <= tol;
    let passed = unit0.preserves_spin
        && unit1.swaps_spin
        && full(&unit0.scattering)
        && full(&unit1.scattering)
        && phase_variants.iter().all(|(theta, s)| full(s) && (s.transmission_phase - *theta).abs() <= tol);
    Ok(SwitchReport { mass: m.value(), energy, unit0, unit1, phase_variants, passed })
}
