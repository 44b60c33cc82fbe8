//! Deficiency subspaces of the minimal Dirac operator and the boundary form.
//!
//! `K±` is spanned by one exponentially decaying spinor per island:
//!
//! ```text
//! ψ_L⁺ = N (1, −μ)  e^{ s x}  on x ≤ −Λ      ψ_L⁻ = N (1,  μ*) e^{ s x}
//! ψ_R⁺ = N (1,  μ)  e^{−s x}  on x ≥ +Λ      ψ_R⁻ = N (1, −μ*) e^{−s x}
//! ```
//!
//! with `s = √(1+m²)` and `μ = (1+im)/s`. Integrating by parts,
//! `⟨H*ψ|φ⟩ − ⟨ψ|H*φ⟩` reduces to the face values only; that expression is
//! [`boundary_form`], and its vanishing on a domain is symmetry.

use num_complex::Complex;
use rand::Rng;

use crate::boundary::{apply_alpha, random_vector, Face, RhoBc};
use crate::correspondence::{ExtensionClass, Mass};
use crate::error::{Error, Result};
use crate::matrix2::C2Vector;
use crate::real::{c, cr, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Island {
    /// `(−∞, −Λ)`
    Left,
    /// `(+Λ, ∞)`
    Right,
}

impl Island {
    pub fn face(self) -> Face {
        match self {
            Island::Left => Face::Minus,
            Island::Right => Face::Plus,
        }
    }
}

/// Which deficiency subspace: `H*ψ = +iψ` or `H*ψ = −iψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Normalization constant of the deficiency functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `N = 1`.
    Unit,
    /// `N = (1+m²)^{1/4} e^{−√(1+m²) Λ}`. Gives `‖ψ‖² = e^{−4√(1+m²)Λ}`,
    /// which is 1 only at `Λ = 0`.
    Decaying,
}

impl Normalization {
    pub fn value<T: Real>(self, m: Mass<T>, lambda: T) -> T {
        match self {
            Normalization::Unit => T::one(),
            Normalization::Decaying => {
                let s = m.root();
                s.sqrt() * (-s * lambda).exp()
            }
        }
    }
}

/// One of the four basis functions `ψ_{L,R}^{±}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficiencyFunction<T> {
    pub island: Island,
    pub sign: Sign,
    pub mass: Mass<T>,
    pub lambda: T,
    pub normalization: T,
}

impl<T: Real> DeficiencyFunction<T> {
    /// Unit-normalized basis function.
    pub fn new(island: Island, sign: Sign, mass: Mass<T>, lambda: T) -> Self {
        Self { island, sign, mass, lambda, normalization: T::one() }
    }

    pub fn with_normalization(mut self, n: Normalization) -> Self {
        self.normalization = n.value(self.mass, self.lambda);
        self
    }

    /// Constant spinor prefactor.
    pub fn spinor(&self) -> C2Vector<T> {
        let mu = self.mass.mu();
        let down = match (self.island, self.sign) {
            (Island::Left, Sign::Plus) => -mu,
            (Island::Right, Sign::Plus) => mu,
            (Island::Left, Sign::Minus) => mu.conj(),
            (Island::Right, Sign::Minus) => -mu.conj(),
        };
        C2Vector::new(cr(T::one()), down)
    }

    /// Signed exponential rate: `+s` on the left island, `−s` on the right.
    fn rate(&self) -> T {
        match self.island {
            Island::Left => self.mass.root(),
            Island::Right => -self.mass.root(),
        }
    }

    /// Whether `x` lies in the closure of this function's island.
    pub fn supports(&self, x: T) -> bool {
        match self.island {
            Island::Left => x <= -self.lambda,
            Island::Right => x >= self.lambda,
        }
    }

    /// The exponential branch, ignoring the island cut-off.
    fn branch(&self, x: T) -> C2Vector<T> {
        self.spinor().scale(cr(self.normalization * (self.rate() * x).exp()))
    }

    /// `ψ(x)`; zero outside the closed island.
    pub fn eval(&self, x: T) -> C2Vector<T> {
        if self.supports(x) {
            self.branch(x)
        } else {
            C2Vector::zero()
        }
    }

    /// `ψ'(x)`, analytic.
    pub fn derivative(&self, x: T) -> C2Vector<T> {
        if self.supports(x) {
            self.branch(x).scale(cr(self.rate()))
        } else {
            C2Vector::zero()
        }
    }

    /// One-sided boundary value at the function's own face.
    pub fn trace(&self) -> C2Vector<T> {
        let x = match self.island {
            Island::Left => -self.lambda,
            Island::Right => self.lambda,
        };
        self.branch(x)
    }

    /// Boundary value at `face`; zero at the face of the other island.
    pub fn trace_at(&self, face: Face) -> C2Vector<T> {
        if self.island.face() == face {
            self.trace()
        } else {
            C2Vector::zero()
        }
    }
}

pub fn eval_deficiency<T: Real>(f: &DeficiencyFunction<T>, x: T) -> C2Vector<T> {
    f.eval(x)
}

/// `H*ψ = σx(−iψ') + mσzψ` from values and derivatives.
pub fn dirac_apply<T: Real>(m: Mass<T>, psi: &C2Vector<T>, dpsi: &C2Vector<T>) -> C2Vector<T> {
    let minus_i = c(T::zero(), -T::one());
    let mm = m.value();
    C2Vector::new(minus_i * dpsi.down + psi.up * mm, minus_i * dpsi.up - psi.down * mm)
}

/// The first-order system satisfied by elements of `K±`:
/// `ψ' = [[0, ∓1 + im], [∓1 − im, 0]] ψ`.
fn eigen_rhs<T: Real>(sign: Sign, m: Mass<T>, v: &C2Vector<T>) -> C2Vector<T> {
    let s = match sign {
        Sign::Plus => -T::one(),
        Sign::Minus => T::one(),
    };
    let mm = m.value();
    C2Vector::new(v.down * c(s, mm), v.up * c(s, -mm))
}

/// Central-difference residual of the `K±` equation for an arbitrary spinor
/// function on the open interval `(x − h, x + h)`.
pub fn ode_residual_of<T: Real, F: Fn(T) -> C2Vector<T>>(f: F, sign: Sign, m: Mass<T>, x: T, h: T) -> T {
    let two_h = h + h;
    let d = (f(x + h) - f(x - h)).scale(cr(T::one() / two_h));
    (d - eigen_rhs(sign, m, &f(x))).max_abs()
}

/// Max-norm residual of the deficiency equation at `x` using a central
/// difference with step `h`. `x ± h` must lie strictly inside the island.
pub fn ode_residual<T: Real>(f: &DeficiencyFunction<T>, x: T, h: T) -> Result<T> {
    let inside = h > T::zero()
        && match f.island {
            Island::Left => x + h < -f.lambda,
            Island::Right => x - h > f.lambda,
        };
    if !inside {
        return Err(Error::OutsideIsland { x: x.as_f64(), h: h.as_f64() });
    }
    Ok(ode_residual_of(|y| f.eval(y), f.sign, f.mass, x, h))
}

/// Composite Simpson rule with `n` (even) intervals on `[a, b]`.
pub fn simpson<T: Real, F: FnMut(T) -> Complex<T>>(mut f: F, a: T, b: T, n: usize) -> Complex<T> {
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let h = (b - a) / T::from_usize(n).expect("interval count");
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let x = a + h * T::from_usize(k).expect("index");
        let w = if k % 2 == 1 { four } else { two };
        acc = acc + f(x) * w;
    }
    acc * (h / T::lit(3.0))
}

/// Simpson with `n` intervals plus the Richardson estimate `|S_n − S_{n/2}|/15`.
fn simpson_with_estimate<T: Real, F: FnMut(T) -> Complex<T>>(mut f: F, a: T, b: T, n: usize) -> (Complex<T>, T) {
    let n = n.max(4).div_ceil(4) * 4;
    let fine = simpson(&mut f, a, b, n);
    let coarse = simpson(&mut f, a, b, n / 2);
    (fine, (fine - coarse).norm() / T::lit(15.0))
}

/// Decay lengths covered by the quadrature window beyond each face.
const WINDOW_DECAY_LENGTHS: f64 = 40.0;

/// Quadrature resolution per island.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadGrid<T> {
    /// Simpson intervals on each island.
    pub intervals: usize,
    /// Tolerance on the Richardson error estimate and on the truncated tail.
    pub tol: T,
}

impl<T: Real> Default for QuadGrid<T> {
    fn default() -> Self {
        Self { intervals: 20_000, tol: T::lit(1e-10) }
    }
}

/// Gram matrix of `{ψ_L^±, ψ_R^±}` over both islands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix<T> {
    pub entries: [[T; 2]; 2],
    pub error_estimate: T,
}

impl<T: Real> GramMatrix<T> {
    /// Numerical rank of the symmetric 2×2 matrix.
    pub fn rank(&self, tol: T) -> usize {
        let [[a, b], [_, d]] = self.entries;
        let half_tr = (a + d) / T::lit(2.0);
        let disc = (((a - d) / T::lit(2.0)).powi(2) + b * b).sqrt();
        let eig = [half_tr + disc, half_tr - disc];
        let top = eig[0].abs().max(eig[1].abs());
        if top == T::zero() {
            return 0;
        }
        eig.iter().filter(|e| e.abs() > tol * top).count()
    }
}

/// Computes the Gram matrix of the two deficiency functions of `sign` by
/// Simpson quadrature on `[−X, −Λ] ∪ [Λ, X]`, `X = Λ + 40/√(1+m²)`.
pub fn gram_matrix<T: Real>(
    sign: Sign,
    m: Mass<T>,
    lambda: T,
    normalization: Normalization,
    grid: QuadGrid<T>,
) -> Result<GramMatrix<T>> {
    let basis = [Island::Left, Island::Right]
        .map(|isl| DeficiencyFunction::new(isl, sign, m, lambda).with_normalization(normalization));
    let s = m.root();
    let reach = T::lit(WINDOW_DECAY_LENGTHS) / s;
    let mut entries = [[T::zero(); 2]; 2];
    let mut worst = T::zero();
    for (i, fi) in basis.iter().enumerate() {
        for (j, fj) in basis.iter().enumerate() {
            let mut total = T::zero();
            for isl in [Island::Left, Island::Right] {
                // only functions living on `isl` contribute there
                if fi.island != isl || fj.island != isl {
                    continue;
                }
                let (a, b) = island_window(isl, lambda, reach);
                let (v, est) = simpson_with_estimate(|x| fi.eval(x).dot(&fj.eval(x)), a, b, grid.intervals);
                // ∫ beyond X relative to the total: e^{−2s·reach}
                let tail = v.norm() * (-(s + s) * reach).exp();
                worst = worst.max(est).max(tail);
                total = total + v.re;
            }
            entries[i][j] = total;
        }
    }
    let scale = T::one().max(entries[0][0].abs()).max(entries[1][1].abs());
    if !(worst <= grid.tol * scale) {
        return Err(Error::QuadratureFailure { estimate: worst.as_f64() });
    }
    Ok(GramMatrix { entries, error_estimate: worst })
}

fn island_window<T: Real>(isl: Island, lambda: T, reach: T) -> (T, T) {
    match isl {
        Island::Left => (-lambda - reach, -lambda),
        Island::Right => (lambda, lambda + reach),
    }
}

/// Face values `ψ(−Λ)` and `ψ(+Λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryPair<T> {
    pub at_minus: C2Vector<T>,
    pub at_plus: C2Vector<T>,
}

impl<T: Real> BoundaryPair<T> {
    pub fn new(at_minus: C2Vector<T>, at_plus: C2Vector<T>) -> Self {
        Self { at_minus, at_plus }
    }

    pub fn at(&self, face: Face) -> C2Vector<T> {
        match face {
            Face::Minus => self.at_minus,
            Face::Plus => self.at_plus,
        }
    }

    fn max_abs(&self) -> T {
        self.at_minus.max_abs().max(self.at_plus.max_abs())
    }
}

/// `⟨H*ψ|φ⟩ − ⟨ψ|H*φ⟩` in terms of face values:
/// `−i{ψ↑(+)*φ↓(+) + ψ↓(+)*φ↑(+) − ψ↑(−)*φ↓(−) − ψ↓(−)*φ↑(−)}`.
pub fn boundary_form<T: Real>(psi: &BoundaryPair<T>, phi: &BoundaryPair<T>) -> Complex<T> {
    let face = |p: &C2Vector<T>, q: &C2Vector<T>| p.up.conj() * q.down + p.down.conj() * q.up;
    let inner = face(&psi.at_plus, &phi.at_plus) - face(&psi.at_minus, &phi.at_minus);
    inner * c(T::zero(), -T::one())
}

/// Smooth bump `amplitude · exp(−1/(1−t²))`, `t = (x − center)/half_width`,
/// supported inside one island so it vanishes at both faces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump<T> {
    pub island: Island,
    pub center: T,
    pub half_width: T,
    pub amplitude: C2Vector<T>,
}

impl<T: Real> Bump<T> {
    fn profile(&self, x: T) -> (T, T) {
        let t = (x - self.center) / self.half_width;
        let one = T::one();
        if t.abs() >= one {
            return (T::zero(), T::zero());
        }
        let q = one - t * t;
        let v = (-one / q).exp();
        let dv = v * (-(t + t) / (q * q)) / self.half_width;
        (v, dv)
    }

    fn inside(&self, lambda: T) -> bool {
        self.half_width > T::zero()
            && match self.island {
                Island::Left => self.center + self.half_width <= -lambda,
                Island::Right => self.center - self.half_width >= lambda,
            }
    }
}

/// Finite combination of deficiency functions and bumps; an element of the
/// maximal domain with known derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialFunction<T> {
    pub mass: Mass<T>,
    pub lambda: T,
    pub terms: Vec<(Complex<T>, Island, Sign)>,
    pub bumps: Vec<Bump<T>>,
}

impl<T: Real> TrialFunction<T> {
    pub fn new(mass: Mass<T>, lambda: T) -> Self {
        Self { mass, lambda, terms: Vec::new(), bumps: Vec::new() }
    }

    pub fn with_term(mut self, coeff: Complex<T>, island: Island, sign: Sign) -> Self {
        self.terms.push((coeff, island, sign));
        self
    }

    pub fn with_bump(mut self, bump: Bump<T>) -> Self {
        self.bumps.push(bump);
        self
    }

    fn basis(&self, island: Island, sign: Sign) -> DeficiencyFunction<T> {
        DeficiencyFunction::new(island, sign, self.mass, self.lambda)
    }

    /// `(ψ(x), ψ'(x))` using only the pieces living on `island`.
    fn value_and_derivative(&self, island: Island, x: T) -> (C2Vector<T>, C2Vector<T>) {
        let mut v = C2Vector::zero();
        let mut d = C2Vector::zero();
        for &(coeff, isl, sign) in &self.terms {
            if isl != island {
                continue;
            }
            let f = self.basis(isl, sign);
            v = v + f.eval(x).scale(coeff);
            d = d + f.derivative(x).scale(coeff);
        }
        for b in self.bumps.iter().filter(|b| b.island == island) {
            let (p, dp) = b.profile(x);
            v = v + b.amplitude.scale(cr(p));
            d = d + b.amplitude.scale(cr(dp));
        }
        (v, d)
    }

    pub fn boundary_values(&self) -> BoundaryPair<T> {
        let mut bp = BoundaryPair::default();
        for &(coeff, isl, sign) in &self.terms {
            let f = self.basis(isl, sign);
            match isl.face() {
                Face::Minus => bp.at_minus = bp.at_minus + f.trace().scale(coeff),
                Face::Plus => bp.at_plus = bp.at_plus + f.trace().scale(coeff),
            }
        }
        bp
    }

    fn reach(&self, island: Island) -> T {
        let mut r = T::lit(WINDOW_DECAY_LENGTHS) / self.mass.root();
        for b in self.bumps.iter().filter(|b| b.island == island) {
            let far = match island {
                Island::Left => -(b.center - b.half_width) - self.lambda,
                Island::Right => b.center + b.half_width - self.lambda,
            };
            r = r.max(far);
        }
        r
    }
}

/// `⟨H*ψ|φ⟩ − ⟨ψ|H*φ⟩` by quadrature, with `H*` applied analytically.
pub fn boundary_form_quadrature<T: Real>(
    psi: &TrialFunction<T>,
    phi: &TrialFunction<T>,
    grid: QuadGrid<T>,
) -> Result<Complex<T>> {
    if psi.mass != phi.mass || psi.lambda != phi.lambda {
        return Err(Error::InvalidGrid("trial functions must share mass and junction half-length".into()));
    }
    if let Some(b) = psi.bumps.iter().chain(&phi.bumps).find(|b| !b.inside(psi.lambda)) {
        return Err(Error::InvalidGrid(format!("bump centred at {} leaves its island", b.center)));
    }
    let m = psi.mass;
    let mut total = Complex::new(T::zero(), T::zero());
    let mut worst = T::zero();
    let mut scale = T::one();
    for isl in [Island::Left, Island::Right] {
        let reach = psi.reach(isl).max(phi.reach(isl));
        let (a, b) = island_window(isl, psi.lambda, reach);
        let integrand = |x: T| {
            let (p, dp) = psi.value_and_derivative(isl, x);
            let (q, dq) = phi.value_and_derivative(isl, x);
            dirac_apply(m, &p, &dp).dot(&q) - p.dot(&dirac_apply(m, &q, &dq))
        };
        let bumps: Vec<&Bump<T>> = psi.bumps.iter().chain(&phi.bumps).filter(|b| b.island == isl).collect();
        let mut cuts = vec![a, b];
        for bump in &bumps {
            cuts.push((bump.center - bump.half_width).max(a).min(b));
            cuts.push((bump.center + bump.half_width).max(a).min(b));
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        cuts.dedup();
        let width = b - a;
        let mut island_sum = Complex::new(T::zero(), T::zero());
        for seg in cuts.windows(2) {
            let (lo, hi) = (seg[0], seg[1]);
            let mid = (lo + hi) / T::lit(2.0);
            let share = ((hi - lo) / width * T::from_usize(grid.intervals).expect("interval count"))
                .to_usize()
                .unwrap_or(0);
            // bump profiles are steep near their edges
            let n = if bumps.iter().any(|bp| (mid - bp.center).abs() < bp.half_width) {
                share.max(grid.intervals / 4)
            } else {
                share.max(64)
            };
            let (v, est) = simpson_with_estimate(&integrand, lo, hi, n);
            worst = worst.max(est);
            island_sum = island_sum + v;
        }
        scale = scale.max(island_sum.norm());
        total = total + island_sum;
    }
    if !(worst <= grid.tol * scale) {
        return Err(Error::QuadratureFailure { estimate: worst.as_f64() });
    }
    Ok(total)
}

/// Outcome of [`verify_selfadjoint_domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct SelfAdjointReport<T> {
    pub samples: usize,
    /// Largest `|boundary_form|` over pairs satisfying the condition.
    pub max_symmetry_residual: T,
    /// Same, divided by `max(1, ‖ψ‖·‖φ‖)` over face values.
    pub max_scaled_residual: T,
    /// Per face, `|boundary_form|` between a condition-violating function and
    /// a condition-satisfying one.
    pub witnesses: Vec<(Face, T)>,
    pub passed: bool,
}

/// Face values of a random element of the domain cut out by `bc`.
pub fn random_domain_pair<T: Real, R: Rng + ?Sized>(bc: &ExtensionClass<T>, rng: &mut R) -> BoundaryPair<T> {
    match bc {
        ExtensionClass::Transmitting(a) => {
            let v = random_vector::<T, R>(rng);
            BoundaryPair::new(v, apply_alpha(a, &v))
        }
        ExtensionClass::Separating(r) => {
            let w = random_vector::<T, R>(rng);
            BoundaryPair::new(r.face_ray(Face::Minus, w.up), r.face_ray(Face::Plus, w.down))
        }
    }
}

fn rho_violator<T: Real>(r: &RhoBc<T>, face: Face) -> C2Vector<T> {
    if r.at(face).is_infinite() {
        C2Vector::real(T::one(), T::zero())
    } else {
        C2Vector::real(T::zero(), T::one())
    }
}

/// Checks symmetry and maximality of the restriction of `H*` to the domain
/// defined by `bc`, at the level of face values.
///
/// Symmetry: the boundary form vanishes on `samples` random pairs from the
/// domain. Maximality: at each face, a function violating the condition
/// there pairs with some domain element to a nonzero form, so it cannot lie
/// in the adjoint's domain.
pub fn verify_selfadjoint_domain<T: Real, R: Rng + ?Sized>(
    bc: &ExtensionClass<T>,
    samples: usize,
    rng: &mut R,
    tol: T,
) -> SelfAdjointReport<T> {
    let pairs: Vec<BoundaryPair<T>> = (0..samples.max(2)).map(|_| random_domain_pair(bc, rng)).collect();
    let mut max_raw = T::zero();
    let mut max_scaled = T::zero();
    for (k, psi) in pairs.iter().enumerate() {
        // each sample against itself and its neighbour
        for phi in [psi, &pairs[(k + 1) % pairs.len()]] {
            let f = boundary_form(psi, phi).norm();
            let scale = T::one().max(psi.max_abs() * phi.max_abs());
            max_raw = max_raw.max(f);
            max_scaled = max_scaled.max(f / scale);
        }
    }

    let one = cr(T::one());
    let zero = C2Vector::zero();
    let witnesses: Vec<(Face, T)> = [Face::Minus, Face::Plus]
        .into_iter()
        .map(|face| {
            let (violator, partner) = match bc {
                ExtensionClass::Transmitting(a) => {
                    let b = a.matrix();
                    let inv = b.inverse().unwrap_or(b);
                    match face {
                        // ψ(−Λ) = (1, 0), ψ(+Λ) = 0 ≠ B ψ(−Λ); partner has φ↓(−Λ) ≠ 0
                        Face::Minus => {
                            let w = C2Vector::new(cr(T::zero()), one);
                            (BoundaryPair::new(C2Vector::new(one, cr(T::zero())), zero), BoundaryPair::new(w, b.apply(&w)))
                        }
                        // ψ(−Λ) = 0, ψ(+Λ) = (1, 0); partner has φ↓(+Λ) ≠ 0
                        Face::Plus => {
                            let w = inv.apply(&C2Vector::new(cr(T::zero()), one));
                            (BoundaryPair::new(zero, C2Vector::new(one, cr(T::zero()))), BoundaryPair::new(w, b.apply(&w)))
                        }
                    }
                }
                ExtensionClass::Separating(r) => {
                    let v = rho_violator(r, face);
                    let ray = r.face_ray(face, one);
                    match face {
                        Face::Minus => (BoundaryPair::new(v, zero), BoundaryPair::new(ray, zero)),
                        Face::Plus => (BoundaryPair::new(zero, v), BoundaryPair::new(zero, ray)),
                    }
                }
            };
            (face, boundary_form(&violator, &partner).norm())
        })
        .collect();

    let passed = max_scaled <= tol && witnesses.iter().all(|&(_, w)| w > tol);
    SelfAdjointReport { samples, max_symmetry_residual: max_raw, max_scaled_residual: max_scaled, witnesses, passed }
}
