//! Acceptance criteria 1 to 10. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::time::Instant;

use junction_core::*;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const MASSES: [f64; 4] = [0.0, 0.5, 1.0, 10.0];
const LAMBDAS: [f64; 3] = [0.0, 0.5, 2.0];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mass(m: f64) -> Mass64 {
    Mass::new(m).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// Test-local boundary-value oracle built from raw complex arithmetic.
// Columns at −Λ: ψ_L⁺ + u11 ψ_L⁻ and u21 ψ_L⁻; at +Λ: u12 ψ_R⁻ and ψ_R⁺ + u22 ψ_R⁻.
fn independent_oracle(u: [C; 4], m: f64, lambda: f64) -> [C; 4] {
    let s = (1.0 + m * m).sqrt();
    let mu = C::new(1.0, m) / s;
    let e = (-s * lambda).exp();
    let pl_p = [C::new(e, 0.0), -mu * e];
    let pl_m = [C::new(e, 0.0), mu.conj() * e];
    let qr_p = [C::new(e, 0.0), mu * e];
    let qr_m = [C::new(e, 0.0), -mu.conj() * e];
    let [u11, u12, u21, u22] = u;
    let p = [
        [pl_p[0] + u11 * pl_m[0], u21 * pl_m[0]],
        [pl_p[1] + u11 * pl_m[1], u21 * pl_m[1]],
    ];
    let q = [
        [u12 * qr_m[0], qr_p[0] + u22 * qr_m[0]],
        [u12 * qr_m[1], qr_p[1] + u22 * qr_m[1]],
    ];
    let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    let inv = [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]];
    let mul = |i: usize, j: usize| q[i][0] * inv[0][j] + q[i][1] * inv[1][j];
    [mul(0, 0), mul(0, 1), mul(1, 0), mul(1, 1)]
}

fn max_diff(a: [C; 4], b: [C; 4]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random_unitary::<f64, _>(&mut r);
        let q = decompose_u2(&u, 1e-10).unwrap();
        worst = worst.max(compose(&q).unwrap().max_abs_diff(&u));
    }
    outcome(worst <= 1e-12, format!("1000 unitaries, max |compose(decompose(U)) - U| = {worst:.3e} (tol 1e-12)"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut worst_scaled = 0.0f64;
    let mut worst_raw = 0.0f64;
    let mut n = 0;
    for &m in &MASSES {
        for _ in 0..1000 {
            let u = random_unitary::<f64, _>(&mut r);
            if is_diagonal(&u, 1e-10) {
                continue;
            }
            let q = decompose_u2(&u, 1e-10).unwrap();
            let a = u2_to_alpha(&q, mass(m)).unwrap();
            let rep = validate_class(&a, 1e-12);
            worst_scaled = worst_scaled.max(rep.max_scaled_residual());
            worst_raw = worst_raw.max(rep.max_residual());
            n += 1;
        }
    }
    outcome(
        worst_scaled <= 1e-12,
        format!(
            "{n} non-diagonal U over m in {{0, 0.5, 1, 10}}, max class residual / max(1, sum|a|^2) = {worst_scaled:.3e} (tol 1e-12; unscaled {worst_raw:.3e})"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut worst_lib = 0.0f64;
    let mut worst_indep = 0.0f64;
    let mut worst_spread = 0.0f64;
    for k in 0..1000 {
        let m = MASSES[k % 4];
        let u = random_unitary::<f64, _>(&mut r);
        let q = decompose_u2(&u, 1e-10).unwrap();
        let a = u2_to_alpha(&q, mass(m)).unwrap().to_array();
        let mut first: Option<[C; 4]> = None;
        for &lambda in &LAMBDAS {
            let v = oracle_alpha_from_u2(&u, mass(m), lambda).unwrap().entries();
            let w = independent_oracle(u.entries(), m, lambda);
            worst_lib = worst_lib.max(max_diff(a, v));
            worst_indep = worst_indep.max(max_diff(a, w));
            if let Some(f) = first {
                worst_spread = worst_spread.max(max_diff(f, v));
            }
            first.get_or_insert(v);
        }
    }
    let worst = worst_lib.max(worst_indep).max(worst_spread);
    outcome(
        worst <= 1e-10,
        format!(
            "1000 U x Lambda in {{0, 0.5, 2}}: |alpha - oracle| = {worst_lib:.3e}, |alpha - test oracle| = {worst_indep:.3e}, spread over Lambda = {worst_spread:.3e} (tol 1e-10)"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    // measured relative to max(1, |alpha|); the unscaled figure is reported too
    let mut worst = 0.0f64;
    let mut worst_abs = 0.0f64;
    let mut over_abs = 0;
    let mut small_abs = 0.0f64;
    for k in 0..1000 {
        let m = mass(MASSES[k % 4]);
        let a = random_alpha::<f64, _>(&mut r);
        let q = alpha_to_u2(&a, m).unwrap();
        let err = u2_to_alpha(&q, m).unwrap().max_abs_diff(&a);
        let size = a.matrix().max_abs();
        worst = worst.max(err / size.max(1.0));
        worst_abs = worst_abs.max(err);
        if err > 1e-10 {
            over_abs += 1;
        }
        if size <= 10.0 {
            small_abs = small_abs.max(err);
        }
    }
    let i = C::new(0.0, 1.0);
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    let fixed = [
        (AlphaBc64::real(1.0, 0.0, 0.0, 1.0), [z, -i, i]),
        (AlphaBc64::real(0.0, 1.0, 1.0, 0.0), [z, o, o]),
        (AlphaBc64::new(-i, z, z, -i), [z, o, i]),
    ];
    let m0 = mass(0.0);
    let mut fixed_worst = 0.0f64;
    for (a, [g1, g2, g3]) in fixed {
        let want = QuaternionForm::new(g1, g2, g3).unwrap();
        let got = alpha_to_u2(&a, m0).unwrap();
        fixed_worst = fixed_worst.max(got.max_abs_diff(&want));
        fixed_worst = fixed_worst.max(u2_to_alpha(&want, m0).unwrap().max_abs_diff(&a));
        let oracle = independent_oracle(want.matrix().entries(), 0.0, 0.0);
        fixed_worst = fixed_worst.max(max_diff(oracle, a.to_array()));
    }
    outcome(
        worst <= 1e-10 && fixed_worst <= 1e-12,
        format!(
            "1000 class alpha, max |alpha -> U -> alpha| / max(1,|alpha|) = {worst:.3e} (tol 1e-10); unscaled {worst_abs:.3e} with {over_abs} samples above 1e-10, unscaled over |alpha| <= 10 {small_abs:.3e}; fixed triples max dev {fixed_worst:.3e}"
        ),
    )
}

// ρ read off ψ_L⁺ + γψ_L⁻ at −Λ and ψ_R⁺ + γψ_R⁻ at +Λ, as Im(ψ↓/ψ↑).
fn ratio_oracle(g: C, m: f64, left: bool) -> Option<(f64, f64)> {
    if (1.0 + g).norm() <= 1e-10 {
        return None;
    }
    let mu = C::new(1.0, m) / (1.0 + m * m).sqrt();
    let ratio = if left { (-mu + g * mu.conj()) / (1.0 + g) } else { (mu - g * mu.conj()) / (1.0 + g) };
    Some((ratio.im, ratio.re))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut gamma_rt = 0.0f64;
    let mut rho_rt = 0.0f64;
    let mut oracle_dev = 0.0f64;
    let mut real_part = 0.0f64;
    let mut infinity_ok = true;
    for k in 0..1000 {
        let m = MASSES[k % 4];
        let (gl, gr) = if k % 50 == 0 {
            (C::new(-1.0, 0.0), C::from_polar(1.0, r.gen_range(0.0..2.0 * PI)))
        } else {
            (C::from_polar(1.0, r.gen_range(0.0..2.0 * PI)), C::from_polar(1.0, r.gen_range(0.0..2.0 * PI)))
        };
        let rho = diagonal_u2_to_rho(gl, gr, mass(m)).unwrap();
        let (gl2, gr2) = rho_to_diagonal_u2(&rho, mass(m));
        gamma_rt = gamma_rt.max((gl - gl2).norm()).max((gr - gr2).norm());
        for (g, val, left) in [(gl, rho.rho_minus, true), (gr, rho.rho_plus, false)] {
            match (ratio_oracle(g, m, left), val) {
                (None, ExtendedReal::PlusInfinity) => {}
                (Some((im, re)), ExtendedReal::Finite(x)) => {
                    oracle_dev = oracle_dev.max(rel(im, x));
                    real_part = real_part.max(re.abs() / 1f64.max(im.abs()));
                }
                _ => infinity_ok = false,
            }
        }
        let lambda = LAMBDAS[k % 3];
        let lib = oracle_rho_from_diagonal(gl, gr, mass(m), lambda).unwrap();
        for (x, y) in [(lib.rho_minus, rho.rho_minus), (lib.rho_plus, rho.rho_plus)] {
            match (x, y) {
                (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => oracle_dev = oracle_dev.max(rel(a, b)),
                (ExtendedReal::PlusInfinity, ExtendedReal::PlusInfinity) => {}
                _ => infinity_ok = false,
            }
        }
        let rr = random_rho::<f64, _>(&mut r);
        let (a, b) = rho_to_diagonal_u2(&rr, mass(m));
        let back = diagonal_u2_to_rho(a, b, mass(m)).unwrap();
        for (x, y) in [(rr.rho_minus, back.rho_minus), (rr.rho_plus, back.rho_plus)] {
            match (x, y) {
                (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => rho_rt = rho_rt.max(rel(a, b)),
                (ExtendedReal::PlusInfinity, ExtendedReal::PlusInfinity) => {}
                _ => infinity_ok = false,
            }
        }
    }
    let inf = RhoBc64::new(ExtendedReal::PlusInfinity, ExtendedReal::PlusInfinity);
    infinity_ok &= rho_to_diagonal_u2(&inf, mass(0.3)) == (C::new(-1.0, 0.0), C::new(-1.0, 0.0));
    let worst = gamma_rt.max(rho_rt).max(oracle_dev).max(real_part);
    outcome(
        worst <= 1e-12 && infinity_ok,
        format!(
            "gamma round trip {gamma_rt:.3e}, rho round trip {rho_rt:.3e}, formula vs ratio oracle {oracle_dev:.3e}, Re(ratio) {real_part:.3e}, gamma=-1 <-> inf {} (tol 1e-12, rho relative to max(1,|rho|))",
            if infinity_ok { "ok" } else { "BROKEN" }
        ),
    )
}

fn random_trial(r: &mut ChaCha8Rng, m: f64, lambda: f64) -> TrialFunction<f64> {
    let mut f = TrialFunction::new(mass(m), lambda);
    let islands = [Island::Left, Island::Right];
    let signs = [Sign::Plus, Sign::Minus];
    for _ in 0..3 {
        let coeff = C::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        f = f.with_term(coeff, islands[r.gen_range(0..2)], signs[r.gen_range(0..2)]);
    }
    let island = islands[r.gen_range(0..2)];
    let half_width = r.gen_range(0.3..1.0);
    let offset = lambda + half_width + r.gen_range(0.0..2.0);
    let center = if island == Island::Left { -offset } else { offset };
    let amplitude = C2Vector::new(C::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)), C::new(r.gen_range(-1.0..1.0), 0.0));
    f.with_bump(Bump { island, center, half_width, amplitude })
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut green = 0.0f64;
    let mut pairs = 0;
    for m in [0.0, 1.0] {
        for lambda in [0.0, 1.0] {
            for _ in 0..6 {
                let psi = random_trial(&mut r, m, lambda);
                let phi = random_trial(&mut r, m, lambda);
                let q = boundary_form_quadrature(&psi, &phi, QuadGrid::default()).unwrap();
                let f = boundary_form(&psi.boundary_values(), &phi.boundary_values());
                green = green.max((q - f).norm());
                pairs += 1;
            }
        }
    }
    let flip = ExtensionClass::Transmitting(AlphaBc64::real(0.0, 1.0, 1.0, 0.0));
    let sep = ExtensionClass::Separating(RhoBc64::finite(0.0, 0.0));
    let a = verify_selfadjoint_domain(&flip, 100, &mut r, 1e-12);
    let b = verify_selfadjoint_domain(&sep, 100, &mut r, 1e-12);
    let mut fuzz = 0.0f64;
    let mut fuzz_ok = true;
    for _ in 0..100 {
        let bc_a = ExtensionClass::Transmitting(random_alpha::<f64, _>(&mut r));
        let bc_r = ExtensionClass::Separating(random_rho::<f64, _>(&mut r));
        for bc in [bc_a, bc_r] {
            let rep = verify_selfadjoint_domain(&bc, 100, &mut r, 1e-12);
            fuzz = fuzz.max(rep.max_scaled_residual);
            fuzz_ok &= rep.passed;
        }
    }
    let sym = a.max_symmetry_residual.max(b.max_symmetry_residual);
    outcome(
        green <= 1e-8 && sym <= 1e-12 && a.passed && b.passed && fuzz_ok,
        format!(
            "Green identity over {pairs} random pairs {green:.3e} (tol 1e-8); form on 100 pairs: alpha=(0,1,1,0) {:.3e}, rho=(0,0) {:.3e} (tol 1e-12); random bc fuzz scaled {fuzz:.3e}; maximality witnesses {}",
            a.max_symmetry_residual,
            b.max_symmetry_residual,
            if a.passed && b.passed && fuzz_ok { "ok" } else { "MISSING" }
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut worst_ratio = 0.0f64;
    let mut ranks_ok = true;
    for &m in &MASSES {
        let s = (1.0 + m * m).sqrt();
        for lambda in [0.0, 1.0] {
            for island in [Island::Left, Island::Right] {
                for sign in [Sign::Plus, Sign::Minus] {
                    let f = DeficiencyFunction::new(island, sign, mass(m), lambda);
                    let x = if island == Island::Left { -lambda - 1.0 / s } else { lambda + 1.0 / s };
                    let h = 1e-2 / s;
                    let r1 = ode_residual(&f, x, h).unwrap();
                    let r2 = ode_residual(&f, x, h / 2.0).unwrap();
                    worst_ratio = worst_ratio.max((r1 / r2 - 4.0).abs());
                }
            }
            for sign in [Sign::Plus, Sign::Minus] {
                let g = gram_matrix(sign, mass(m), lambda, Normalization::Unit, QuadGrid::default()).unwrap();
                ranks_ok &= g.rank(1e-12) == 2 && g.entries[0][1] == 0.0 && g.entries[1][0] == 0.0;
            }
        }
    }
    outcome(
        worst_ratio <= 0.1 && ranks_ok,
        format!(
            "ODE residual h-halving ratio max |ratio - 4| = {worst_ratio:.3e} (tol 0.1) over 4 functions x 4 masses x 2 Lambda; Gram rank 2 {}",
            if ranks_ok { "for both signs" } else { "FAILED" }
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut unitarity = 0.0f64;
    let mut currents = 0.0f64;
    let mut form = 0.0f64;
    for k in 0..1000 {
        let m = MASSES[k % 4];
        let a = random_alpha::<f64, _>(&mut r);
        let e = m + r.gen_range(1e-3..5.0);
        let s = scatter_alpha(&a, e, mass(m)).unwrap();
        unitarity = unitarity.max((s.reflectance + s.transmittance - 1.0).abs());
        let jc = current(&s.face_minus) - current(&s.face_plus);
        currents = currents.max(jc.abs() / 1f64.max(s.face_minus.max_abs().powi(2)));
        let b = a.matrix();
        let sx = C2Matrix64::new(C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0));
        form = form.max((b.adjoint() * sx * b).max_abs_diff(&sx) / 1f64.max(b.max_abs().powi(2)));
    }
    let mut sep = 0.0f64;
    for k in 0..1000 {
        let m = MASSES[k % 4];
        let rho = random_rho::<f64, _>(&mut r);
        let e = m + r.gen_range(1e-3..5.0);
        let side = if k % 2 == 0 { Island::Left } else { Island::Right };
        let s = scatter_rho(&rho, e, mass(m), side).unwrap();
        sep = sep.max(s.transmittance).max((s.r.norm() - 1.0).abs());
    }
    outcome(
        unitarity <= 1e-12 && sep <= 1e-12 && currents <= 1e-12 && form <= 1e-12,
        format!(
            "1000 (alpha, E): max |R+T-1| = {unitarity:.3e}, current mismatch {currents:.3e}, B^+ sx B - sx {form:.3e}; 1000 separating: max dev of T=0,|r|=1 {sep:.3e} (tol 1e-12)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let m0 = mass(0.0);
    let flip = AlphaBc64::real(0.0, 1.0, 1.0, 0.0);
    let s = scatter_alpha(&flip, 1.0, m0).unwrap();
    let flip_ok = s.r.norm() <= 1e-12 && (s.t - 1.0).norm() <= 1e-12;
    let v = C2Vector64::real(0.9, 0.1);
    let swapped = apply_alpha(&flip, &v);
    let swap_ok = (swapped.up - v.down).norm() <= 1e-15 && (swapped.down - v.up).norm() <= 1e-15;
    let demo = switch_demo(&[PI / 4.0, FRAC_PI_2]).unwrap();

    let i = C::new(0.0, 1.0);
    let z = C::new(0.0, 0.0);
    let p = scatter_alpha(&AlphaBc64::new(-i, z, z, -i), 1.0, m0).unwrap();
    let phase_ok = (p.t + i).norm() <= 1e-12 && (p.transmission_phase + FRAC_PI_2).abs() <= 1e-12;

    // hand solve with B = σx: t·u₊ = σx(u₊ + r u₋) gives λ²(1−r) = 1+r
    let lam = SQRT_2 - 1.0;
    let r_hand = (lam * lam - 1.0) / (lam * lam + 1.0);
    let t_hand = 4.0 * lam * lam / (1.0 + lam * lam).powi(2);
    let mm = scatter_alpha(&flip, SQRT_2, mass(1.0)).unwrap();
    let massive_ok = (mm.transmittance - 0.5).abs() <= 1e-12
        && (mm.transmittance - t_hand).abs() <= 1e-12
        && (mm.r - r_hand).norm() <= 1e-12;
    outcome(
        flip_ok && swap_ok && demo.passed && phase_ok && massive_ok,
        format!(
            "spin-flip m=0: r={:.2e}, t={:.6}, spins swapped {}; switch demo {}; phase bc t={:.6}{:+.6}i; massive spin-flip T={:.15} (hand {t_hand:.15})",
            s.r.norm(),
            s.t.re,
            swap_ok && demo.unit1.swaps_spin,
            if demo.passed { "ok" } else { "FAILED" },
            p.t.re,
            p.t.im,
            mm.transmittance
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let summary = match errata_report::<f64, _>(1000, &MASSES, &mut r) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("errata report failed: {e}")),
    };
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("errata_report.json");
    let first = summary.first_mismatch.map(|(a, m)| {
        json!({
            "alpha": a.to_array().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "mass": m,
        })
    });
    let doc = json!({
        "samples": summary.samples,
        "masses": summary.masses,
        "exact": summary.exact,
        "sign_pair": summary.sign_pair,
        "mismatch": summary.mismatch,
        "max_printed_unitarity_residual": summary.max_printed_unitarity_residual,
        "first_mismatch": first,
    });
    let written = std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).is_ok();
    let counted = summary.exact + summary.sign_pair + summary.mismatch == 1000;
    outcome(
        written && counted,
        format!(
            "1000 class instances: exact {}, sign_pair {}, mismatch {}; printed triple unitarity {:.3e}; artifact {}",
            summary.exact,
            summary.sign_pair,
            summary.mismatch,
            summary.max_printed_unitarity_residual,
            path.display()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("U(2) decomposition round trip", criterion_1),
        ("class production", criterion_2),
        ("oracle equivalence and Lambda independence", criterion_3),
        ("full round trip", criterion_4),
        ("diagonal correspondence", criterion_5),
        ("boundary form", criterion_6),
        ("deficiency verification", criterion_7),
        ("scattering unitarity", criterion_8),
        ("device regimes", criterion_9),
        ("errata report", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} [{name}] {} ({:.2}s)",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed in {:.2}s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
