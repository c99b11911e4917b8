//! Finds every critical orbit: combinatorial seeds at the geometrically
//! spread start configuration (s, s^2, ..., s^n), Newton refinement there,
//! predictor-corrector continuation to the target configuration, orbit
//! dedup in symmetric coordinates, and the line families of the dual regime.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fuchsian::{
    associated_equation, associated_equation_from_poly, build_fg, verify_all_polynomial,
    FuchsianEquation, DIVISION_TOL,
};
use crate::linalg::singular_values;
use crate::master::{
    arrangement_check, bethe_residual_unchecked, canonical_orbit, classify_regime,
    elementary_symmetric, hessian_det_scale, hessian_ln_phi, lambda_distance, monic_from_lambda,
    n2_closed_form, relative_residual, residual_scale, CriticalPoint, N2Solution, ProblemInstance,
    RegimeKind, RegimeLabel,
};
use crate::poly::Polynomial;
use crate::rep::{classify_good_pair, ExponentVector};
use crate::scalar::{rationalize_c64, Complex64, Rational, Scalar};

/// An admissible triple {m1, m2; k}: the two-point function with these
/// exponents has exactly k! nondegenerate critical points.
pub fn admissible_triple(m1: &Rational, m2: &Rational, k: u32) -> bool {
    let sum_ok = m1.clone() + m2.clone() - crate::scalar::rat(2 * k as i64) >= Rational::zero();
    if !sum_ok {
        return false;
    }
    for m in [m1, m2] {
        if m.is_integer() && !m.is_negative() {
            if let Some(v) = m.to_integer().to_i64() {
                if (k as i64) > v {
                    return false;
                }
            }
        }
    }
    true
}

/// Seed label I = (i_1 = 0, i_2, ..., i_n) with sum k whose partial-weight
/// triples are all admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSequence {
    pub indices: Vec<u32>,
}

impl AdmissibleSequence {
    /// Partial weight a_l = m_1 + ... + m_{l-1} - 2(i_1 + ... + i_{l-1}).
    pub fn partial_weight(&self, m: &ExponentVector, l: usize) -> Rational {
        let mut acc = Rational::zero();
        for j in 0..l - 1 {
            acc += m.entries()[j].clone() - crate::scalar::rat(2 * self.indices[j] as i64);
        }
        acc
    }
}

/// Enumerate all admissible sequences, branching on larger block sizes
/// first, so the most spread-out seeds come first.
pub fn admissible_sequences(m: &ExponentVector, k: usize) -> Result<Vec<AdmissibleSequence>> {
    let good = classify_good_pair(m, k as i64);
    if !good.is_good {
        return Err(Error::Domain(format!(
            "pair is not good: l(m) = {}, k = {k}",
            m.total()
        )));
    }
    let n = m.n();
    let mut out = Vec::new();
    let mut indices = vec![0u32; n];
    fn rec(
        m: &ExponentVector,
        level: usize,
        remaining: u32,
        a: Rational,
        indices: &mut Vec<u32>,
        out: &mut Vec<AdmissibleSequence>,
    ) {
        let n = m.n();
        if level == n {
            if remaining == 0 {
                out.push(AdmissibleSequence {
                    indices: indices.clone(),
                });
            }
            return;
        }
        let ml = m.entries()[level].clone();
        for i in (0..=remaining).rev() {
            if !admissible_triple(&a, &ml, i) {
                continue;
            }
            indices[level] = i;
            let next_a = a.clone() + ml.clone() - crate::scalar::rat(2 * i as i64);
            rec(m, level + 1, remaining - i, next_a, indices, out);
        }
        indices[level] = 0;
    }
    if n >= 1 {
        // i_1 = 0 by definition; the first block weight is m_1.
        rec(
            m,
            1,
            k as u32,
            m.entries()[0].clone(),
            &mut indices,
            &mut out,
        );
    } else if k == 0 {
        out.push(AdmissibleSequence { indices: vec![] });
    }
    Ok(out)
}

/// Asymptotic seed at z = (s, s^2, ..., s^n): block l places its i_l
/// coordinates at s^l times the critical point of the two-point function
/// with exponents (a_l, m_l), solved exactly in symmetric coordinates.
pub fn seed_point(
    seq: &AdmissibleSequence,
    m: &ExponentVector,
    k: usize,
    s: f64,
) -> Result<Vec<Complex64>> {
    let mut t = Vec::with_capacity(k);
    for l in 1..m.n() {
        let block = seq.indices[l] as usize;
        if block == 0 {
            continue;
        }
        let a = seq.partial_weight(m, l + 1);
        let ml = m.entries()[l].clone();
        let lambda = match n2_closed_form(&a, &ml, block) {
            N2Solution::Unique { lambda } => lambda,
            other => {
                return Err(Error::Domain(format!(
                    "block ({a}, {ml}; {block}) did not produce a unique seed: {other:?}"
                )))
            }
        };
        let lambda_c: Vec<Complex64> = lambda.iter().map(|q| Complex64::from_rational(q)).collect();
        let u = monic_from_lambda(&lambda_c);
        let scale = Complex64::new(s.powi(l as i32 + 1), 0.0);
        for root in u.roots() {
            t.push(root * scale);
        }
    }
    if t.len() != k {
        return Err(Error::Domain(format!(
            "sequence places {} coordinates, expected {k}",
            t.len()
        )));
    }
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct NewtonConfig {
    /// Relative residual defining success.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative arrangement margin the iterates must respect.
    pub margin_rel: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            tol: 1e-12,
            max_iter: 200,
            margin_rel: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonFailure {
    pub reason: String,
    pub last_t: Vec<Complex64>,
    pub last_residual: f64,
    pub iterations: usize,
}

/// Damped Newton iteration on the residual with the log-Hessian as Jacobian.
/// Iterates until the residual stops improving, then succeeds if the best
/// iterate is below tolerance. Coordinates are returned in input order.
pub fn newton_refine(
    t0: &[Complex64],
    inst: &ProblemInstance,
    cfg: &NewtonConfig,
) -> std::result::Result<CriticalPoint, NewtonFailure> {
    if arrangement_check(t0, &inst.z, cfg.margin_rel).is_err() {
        return Err(NewtonFailure {
            reason: "start on the arrangement".into(),
            last_t: t0.to_vec(),
            last_residual: f64::INFINITY,
            iterations: 0,
        });
    }
    let mut t = t0.to_vec();
    let mut rel = relative_residual(&t, inst).unwrap_or(f64::INFINITY);
    let mut best_t = t.clone();
    let mut best_rel = rel;
    let mut iterations = 0;
    for iter in 0..cfg.max_iter {
        iterations = iter;
        if rel == 0.0 {
            break;
        }
        let r = bethe_residual_unchecked(&t, inst);
        let jac = match hessian_ln_phi(&t, inst) {
            Ok(j) => j,
            Err(_) => break,
        };
        let step = match jac.solve(&r) {
            Ok(s) => s,
            Err(_) => break,
        };
        let mut accepted = false;
        let mut factor = 1.0f64;
        for _ in 0..10 {
            let cand: Vec<Complex64> = t
                .iter()
                .zip(&step)
                .map(|(ti, si)| ti - si * factor)
                .collect();
            if arrangement_check(&cand, &inst.z, cfg.margin_rel).is_err() {
                factor *= 0.5;
                continue;
            }
            let cand_rel = {
                let rc = bethe_residual_unchecked(&cand, inst);
                let norm = rc.iter().map(|x| x.norm()).fold(0.0, f64::max);
                norm / residual_scale(&cand, inst)
            };
            if cand_rel < rel {
                t = cand;
                rel = cand_rel;
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if rel < best_rel {
            best_rel = rel;
            best_t = t.clone();
        }
        if !accepted {
            break;
        }
    }
    if best_rel < cfg.tol {
        let hessian_det = hessian_ln_phi(&best_t, inst)
            .map(|h| h.determinant())
            .unwrap_or(Complex64::zero());
        let lambda = elementary_symmetric(&best_t);
        Ok(CriticalPoint {
            t: best_t,
            residual: best_rel,
            hessian_det,
            lambda,
        })
    } else {
        Err(NewtonFailure {
            reason: format!("stalled at relative residual {best_rel:.3e}"),
            last_t: best_t,
            last_residual: best_rel,
            iterations,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TrackConfig {
    pub newton: NewtonConfig,
    /// Step-size floor before a detour is attempted.
    pub min_step: f64,
    /// Randomized complex detours before giving up.
    pub max_detours: usize,
    /// Coordinate-norm guard against escapes to infinity.
    pub escape_factor: f64,
    /// Corrector displacement allowed as a fraction of the predicted motion;
    /// smaller values track tighter through pinched branch geometry.
    pub correction_fraction: f64,
    /// Upper bound on the continuation step.
    pub max_dtau: f64,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig {
            newton: NewtonConfig {
                max_iter: 60,
                ..NewtonConfig::default()
            },
            min_step: 1e-10,
            max_detours: 8,
            escape_factor: 1e9,
            correction_fraction: 0.05,
            max_dtau: 0.08,
        }
    }
}

impl TrackConfig {
    /// Precision variant used when randomized retries keep landing on an
    /// already-taken branch.
    fn tightened(&self) -> Self {
        TrackConfig {
            correction_fraction: 0.01,
            max_dtau: 0.02,
            min_step: 1e-12,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrackFailure {
    pub reason: String,
    pub stuck_tau: f64,
}

enum SegmentOutcome {
    Done(Vec<Complex64>),
    Stuck { t: Vec<Complex64>, tau: f64 },
}

/// Path point z(tau) = (1-tau) a + tau b + tau (1-tau) w: a quadratic arc
/// through complex space. The bump w keeps the interior of the path off the
/// real locus where distinct solution branches can collide.
fn arc_point(a: &[Complex64], b: &[Complex64], w: &[Complex64], tau: f64) -> Vec<Complex64> {
    a.iter()
        .zip(b)
        .zip(w)
        .map(|((x, y), wl)| x * (1.0 - tau) + y * tau + wl * (tau * (1.0 - tau)))
        .collect()
}

fn instance_at(m: &[u32], k: usize, z: &[Complex64]) -> Option<ProblemInstance> {
    ProblemInstance::new(m, k, z).ok()
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm().powi(2)).sum::<f64>().sqrt()
}

fn track_segment(
    t_start: &[Complex64],
    z_a: &[Complex64],
    z_b: &[Complex64],
    arc: &[Complex64],
    m: &[u32],
    k: usize,
    cfg: &TrackConfig,
) -> SegmentOutcome {
    let mut t = t_start.to_vec();
    let mut tau = 0.0f64;
    let mut dtau = 0.05f64;
    let z_scale = z_a.iter().chain(z_b).map(|z| z.norm()).fold(1.0, f64::max);
    while tau < 1.0 {
        let tau_next = (tau + dtau).min(1.0);
        let z_next = arc_point(z_a, z_b, arc, tau_next);
        // None = hard failure; Some((t, err_ratio)) carries the prediction
        // accuracy for step-size control.
        let step_ok = (|| -> Option<(Vec<Complex64>, f64)> {
            let inst_next = instance_at(m, k, &z_next)?;
            // Euler predictor from the implicit function theorem:
            // J dt/dtau = -dr/dtau.
            let predicted = (|| -> Option<Vec<Complex64>> {
                let z_now = arc_point(z_a, z_b, arc, tau);
                let inst_now = instance_at(m, k, &z_now)?;
                let jac = hessian_ln_phi(&t, &inst_now).ok()?;
                let zdot: Vec<Complex64> = z_b
                    .iter()
                    .zip(z_a)
                    .zip(arc)
                    .map(|((b, a), wl)| b - a + wl * (1.0 - 2.0 * tau))
                    .collect();
                let rhs: Vec<Complex64> = (0..k)
                    .map(|i| {
                        let mut acc = Complex64::zero();
                        for (l, zl) in z_now.iter().enumerate() {
                            let d = t[i] - zl;
                            acc -= Complex64::new(m[l] as f64, 0.0) * zdot[l] / (d * d);
                        }
                        -acc
                    })
                    .collect();
                let dt = jac.solve(&rhs).ok()?;
                Some(
                    t.iter()
                        .zip(&dt)
                        .map(|(ti, di)| ti + di * (tau_next - tau))
                        .collect(),
                )
            })();
            let guess = predicted?;
            let refined = newton_refine(&guess, &inst_next, &cfg.newton).ok()?;
            // Prediction-accuracy control, which doubles as the path-jumping
            // guard: near a branch collision the solution curve bends hard,
            // the Euler prediction degrades, and the step shrinks before the
            // corrector can slide onto a different branch.
            let t_scale = t.iter().map(|c| c.norm()).fold(1.0, f64::max);
            let predicted_motion = norm2(
                &guess
                    .iter()
                    .zip(&t)
                    .map(|(g, ti)| g - ti)
                    .collect::<Vec<_>>(),
            );
            let correction = norm2(
                &refined
                    .t
                    .iter()
                    .zip(&guess)
                    .map(|(r, g)| r - g)
                    .collect::<Vec<_>>(),
            );
            // The floor covers corrector noise near ill-conditioned points
            // (a repeated root limits Newton to about sqrt(epsilon) accuracy),
            // where branches are too close for the distinction to matter.
            let allowance = (cfg.correction_fraction * predicted_motion).max(1e-5 * t_scale);
            if correction > allowance {
                return None;
            }
            let escaped = refined
                .t
                .iter()
                .any(|c| c.norm() > cfg.escape_factor * z_scale);
            if escaped {
                return None;
            }
            Some((refined.t, correction / allowance.max(f64::MIN_POSITIVE)))
        })();
        match step_ok {
            Some((next_t, err_ratio)) => {
                t = next_t;
                tau = tau_next;
                if err_ratio < 0.1 {
                    dtau = (dtau * 1.4).min(cfg.max_dtau);
                }
            }
            None => {
                dtau *= 0.5;
                if dtau < cfg.min_step {
                    return SegmentOutcome::Stuck { t, tau };
                }
            }
        }
    }
    SegmentOutcome::Done(t)
}

/// Continuation from a critical point at `z_start` to the target
/// configuration along the straight segment, with randomized complex detours
/// around bad parameter values. The detours draw from the supplied RNG, so a
/// fixed master seed reproduces the path exactly.
pub fn track_path(
    t_start: &[Complex64],
    z_start: &[Complex64],
    z_target: &[Complex64],
    m: &[u32],
    k: usize,
    cfg: &TrackConfig,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<CriticalPoint, TrackFailure> {
    let inst_start = instance_at(m, k, z_start).ok_or_else(|| TrackFailure {
        reason: "start configuration is degenerate".into(),
        stuck_tau: 0.0,
    })?;
    let start = newton_refine(t_start, &inst_start, &cfg.newton).map_err(|f| TrackFailure {
        reason: format!("start point is not critical: {}", f.reason),
        stuck_tau: 0.0,
    })?;
    if z_start == z_target {
        return Ok(start);
    }
    // Arc bumps are sized per coordinate so a hierarchically spread start
    // keeps its scale separation, and drawn with symmetric random signs so
    // repeated attempts explore both sides of the straight segment.
    let coordinate_scales = |a: &[Complex64], b: &[Complex64]| -> Vec<f64> {
        let diam = a
            .iter()
            .chain(b.iter())
            .flat_map(|x| a.iter().chain(b.iter()).map(move |y| (x - y).norm()))
            .fold(1.0f64, f64::max);
        a.iter()
            .zip(b)
            .map(|(x, y)| x.norm().max(y.norm()).max(0.05 * diam))
            .collect()
    };
    let mut cur_t = start.t;
    let mut cur_z = z_start.to_vec();
    let mut goals = vec![z_target.to_vec()];
    let mut detours = 0usize;
    while let Some(goal) = goals.last().cloned() {
        // Randomized complex arc for this segment: bad parameter sets have
        // real codimension two, so the arc misses them almost surely.
        let scales = coordinate_scales(&cur_z, &goal);
        let arc: Vec<Complex64> = scales
            .iter()
            .map(|&sc| {
                let mag = rng.gen_range(0.1..0.35) * sc;
                let phase = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
                Complex64::from_polar(mag, phase)
            })
            .collect();
        match track_segment(&cur_t, &cur_z, &goal, &arc, m, k, cfg) {
            SegmentOutcome::Done(t_end) => {
                cur_t = t_end;
                cur_z = goal;
                goals.pop();
            }
            SegmentOutcome::Stuck { t, tau } => {
                detours += 1;
                if detours > cfg.max_detours {
                    return Err(TrackFailure {
                        reason: "step underflow after all detours".into(),
                        stuck_tau: tau,
                    });
                }
                cur_t = t;
                cur_z = arc_point(&cur_z, &goal, &arc, tau);
                let mut waypoint = None;
                for _ in 0..32 {
                    let cand: Vec<Complex64> = arc_point(&cur_z, &goal, &arc, 0.5)
                        .iter()
                        .zip(&scales)
                        .map(|(zl, &sc)| {
                            let mag = rng.gen_range(0.05..0.35) * sc;
                            let phase = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
                            zl + Complex64::from_polar(mag, phase)
                        })
                        .collect();
                    if instance_at(m, k, &cand).is_some() {
                        waypoint = Some(cand);
                        break;
                    }
                }
                let Some(w) = waypoint else {
                    return Err(TrackFailure {
                        reason: "could not place a detour waypoint".into(),
                        stuck_tau: tau,
                    });
                };
                goals.push(w);
            }
        }
    }
    let inst_target = instance_at(m, k, z_target).ok_or_else(|| TrackFailure {
        reason: "target configuration is degenerate".into(),
        stuck_tau: 1.0,
    })?;
    newton_refine(&cur_t, &inst_target, &cfg.newton).map_err(|f| TrackFailure {
        reason: format!("endpoint refinement failed: {}", f.reason),
        stuck_tau: 1.0,
    })
}

/// Solver knobs; the defaults implement the documented tolerances.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Start scale for the spread configuration (s, s^2, ...).
    pub s: f64,
    /// Automatic doublings of s when a seed fails to converge.
    pub s_doublings: u32,
    pub newton_tol: f64,
    /// Orbit identification threshold on symmetric coordinates.
    pub dedup_tol: f64,
    /// Residual bound for points sampled on critical lines.
    pub line_sample_tol: f64,
    /// Master seed for every randomized choice (detours, multistart).
    pub seed: u64,
    /// Extra random starts when seeds find fewer orbits than expected;
    /// disabled by default to keep the constructive count honest.
    pub multistart: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            s: 32.0,
            s_doublings: 4,
            newton_tol: 1e-12,
            dedup_tol: 1e-6,
            line_sample_tol: 1e-9,
            seed: 0,
            multistart: None,
        }
    }
}

impl SolverConfig {
    fn newton(&self) -> NewtonConfig {
        NewtonConfig {
            tol: self.newton_tol,
            ..NewtonConfig::default()
        }
    }

    fn track(&self) -> TrackConfig {
        TrackConfig {
            newton: NewtonConfig {
                tol: self.newton_tol,
                max_iter: 60,
                ..NewtonConfig::default()
            },
            ..TrackConfig::default()
        }
    }
}

/// A deduplicated orbit with conditioning diagnostics and, when recognized,
/// its exact symmetric coordinates certified by exact division.
#[derive(Debug, Clone)]
pub struct CriticalOrbit {
    pub point: CriticalPoint,
    pub hessian_min_sv: f64,
    pub hessian_cond: f64,
    pub exact_lambda: Option<Vec<Rational>>,
    pub from_multistart: bool,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub regime: RegimeLabel,
    pub expected: i64,
    pub found: usize,
    pub orbits: Vec<CriticalOrbit>,
    pub seeds_used: usize,
    pub seeds_failed: usize,
    pub multistart_used: bool,
    pub genericity_flags: Vec<String>,
}

fn lambda_sort_key(lambda: &[Complex64]) -> Vec<(f64, f64)> {
    lambda.iter().map(|c| (c.re, c.im)).collect()
}

fn dedup_points(
    points: Vec<(CriticalPoint, bool)>,
    inst: &ProblemInstance,
    dedup_tol: f64,
) -> Vec<(CriticalPoint, bool)> {
    let mut kept: Vec<(CriticalPoint, bool)> = Vec::new();
    for (cp, multi) in points {
        let canon = match canonical_orbit(&cp.t, inst) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if let Some(existing) = kept
            .iter_mut()
            .find(|(other, _)| lambda_distance(&other.lambda, &canon.lambda) < dedup_tol)
        {
            if canon.residual < existing.0.residual {
                existing.0 = canon;
            }
            existing.1 &= multi;
        } else {
            kept.push((canon, multi));
        }
    }
    kept.sort_by(|a, b| {
        lambda_sort_key(&a.0.lambda)
            .partial_cmp(&lambda_sort_key(&b.0.lambda))
            .unwrap()
    });
    kept
}

/// Recognize a rational orbit and certify it by exact division: the
/// associated-equation remainder must vanish identically over the rationals.
fn exactify_lambda(lambda: &[Complex64], z: &[Complex64], m: &[u32]) -> Option<Vec<Rational>> {
    let lam_q: Option<Vec<Rational>> = lambda
        .iter()
        .map(|c| rationalize_c64(*c, 1e-10, 1_000_000))
        .collect();
    let z_q: Option<Vec<Rational>> = z
        .iter()
        .map(|c| rationalize_c64(*c, 1e-12, 1_000_000))
        .collect();
    let (lam_q, z_q) = (lam_q?, z_q?);
    let u = monic_from_lambda(&lam_q);
    match associated_equation_from_poly(&u, &z_q, m, DIVISION_TOL) {
        Ok(_) => Some(lam_q),
        Err(_) => None,
    }
}

fn orbit_diagnostics(
    cp: CriticalPoint,
    inst: &ProblemInstance,
    from_multistart: bool,
) -> CriticalOrbit {
    let (min_sv, cond) = match hessian_ln_phi(&cp.t, inst) {
        Ok(h) => {
            let sv = singular_values(&h);
            let min = sv.first().copied().unwrap_or(0.0);
            let max = sv.last().copied().unwrap_or(0.0);
            (min, if min > 0.0 { max / min } else { f64::INFINITY })
        }
        Err(_) => (0.0, f64::INFINITY),
    };
    let exact_lambda = exactify_lambda(&cp.lambda, &inst.z, &inst.m);
    CriticalOrbit {
        point: cp,
        hessian_min_sv: min_sv,
        hessian_cond: cond,
        exact_lambda,
        from_multistart,
    }
}

/// Uniform random points in a disc containing z, rejected off the
/// arrangement: the top-up and no-critical-point search primitive.
pub fn multistart_search(
    inst: &ProblemInstance,
    starts: usize,
    cfg: &SolverConfig,
) -> Vec<CriticalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(MULTISTART_STREAM);
    let center = inst.z.iter().sum::<Complex64>() / Complex64::new(inst.n() as f64, 0.0);
    let radius = inst
        .z
        .iter()
        .map(|z| (z - center).norm())
        .fold(0.0f64, f64::max)
        .mul_add(2.0, 1.0);
    let newton = cfg.newton();
    let mut found = Vec::new();
    for _ in 0..starts {
        let mut t = Vec::with_capacity(inst.k);
        for _ in 0..inst.k {
            loop {
                let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
                let a = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
                let cand = center + Complex64::from_polar(r, a);
                t.push(cand);
                if arrangement_check(&t, &inst.z, 1e-6).is_ok() {
                    break;
                }
                t.pop();
            }
        }
        if let Ok(cp) = newton_refine(&t, inst, &newton) {
            found.push(cp);
        }
    }
    found
}

/// Track every seed from the spread configuration (s, s^2, ...) to the
/// target, one stage of scale halving at a time. After each stage, members
/// that collided in symmetric coordinates are re-tracked along fresh random
/// arcs from their pre-stage positions; a collision that survives the
/// retries is genuine (a degenerate target) and is kept for the dedup pass.
fn track_ensemble(
    inst: &ProblemInstance,
    ev: &ExponentVector,
    seqs: &[AdmissibleSequence],
    s: f64,
    cfg: &SolverConfig,
    round: u64,
) -> Vec<Option<CriticalPoint>> {
    let track_cfg = cfg.track();
    let newton_cfg = cfg.newton();
    let spread = |sv: f64| -> Vec<Complex64> {
        (1..=inst.n())
            .map(|l| Complex64::new(sv.powi(l as i32), 0.0))
            .collect()
    };
    let zs = spread(s);
    let stream = |member: usize, stage: usize, attempt: u64| -> u64 {
        1 + member as u64 + 100 * stage as u64 + 10_000 * attempt + 1_000_000 * round
    };
    let mut members: Vec<Option<Vec<Complex64>>> = seqs
        .iter()
        .map(|seq| {
            let seed_t = seed_point(seq, ev, inst.k, s).ok()?;
            let inst_s = instance_at(&inst.m, inst.k, &zs)?;
            newton_refine(&seed_t, &inst_s, &newton_cfg)
                .ok()
                .map(|cp| cp.t)
        })
        .collect();
    let mut stages = Vec::new();
    let mut sv = s / 2.0;
    while sv > 1.2 {
        stages.push(spread(sv));
        sv /= 2.0;
    }
    // The last hop leaves the spread family for the target geometry, the
    // most rearrangement-heavy part of the path: subdivide it so collisions
    // are caught and retried early.
    let last_spread = stages.last().cloned().unwrap_or_else(|| spread(s));
    for quarter in [0.25, 0.5, 0.75] {
        let mid: Vec<Complex64> = last_spread
            .iter()
            .zip(&inst.z)
            .map(|(a, b)| a * (1.0 - quarter) + b * quarter)
            .collect();
        if instance_at(&inst.m, inst.k, &mid).is_some() {
            stages.push(mid);
        }
    }
    stages.push(inst.z.clone());
    let mut cur_z = zs;
    for (stage_idx, stage) in stages.iter().enumerate() {
        let prev = members.clone();
        for (i, slot) in members.iter_mut().enumerate() {
            let Some(t) = &prev[i] else {
                *slot = None;
                continue;
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream(i, stage_idx, 0));
            *slot = track_path(t, &cur_z, stage, &inst.m, inst.k, &track_cfg, &mut rng)
                .ok()
                .map(|cp| cp.t);
        }
        // Collision resolution: near-coincident members at this stage signal
        // a branch jump. Either member of the pair may be the jumper, so
        // alternate which one is re-tracked from its pre-stage position.
        for attempt in 1..=8u64 {
            let mut collision = None;
            'scan: for i in 0..members.len() {
                for j in i + 1..members.len() {
                    if let (Some(a), Some(b)) = (&members[i], &members[j]) {
                        let la = elementary_symmetric(a);
                        let lb = elementary_symmetric(b);
                        if lambda_distance(&la, &lb) < cfg.dedup_tol.max(1e-4) {
                            collision = Some((i, j));
                            break 'scan;
                        }
                    }
                }
            }
            let Some((i, j)) = collision else { break };
            let target_member = if attempt % 2 == 1 { j } else { i };
            let Some(t) = &prev[target_member] else { break };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream(target_member, stage_idx, attempt));
            // First retries vary the random arc; later ones add precision.
            let retry_cfg = if attempt <= 4 {
                track_cfg.clone()
            } else {
                track_cfg.tightened()
            };
            let retried = track_path(t, &cur_z, stage, &inst.m, inst.k, &retry_cfg, &mut rng)
                .ok()
                .map(|cp| cp.t);
            // A failed retry keeps the collided value; the dedup pass and the
            // count reconciliation report a genuine merge.
            if retried.is_some() {
                members[target_member] = retried;
            }
        }
        cur_z = stage.clone();
    }
    members
        .into_iter()
        .map(|slot| {
            let t = slot?;
            let inst_target = instance_at(&inst.m, inst.k, &inst.z)?;
            newton_refine(&t, &inst_target, &newton_cfg).ok()
        })
        .collect()
}

/// Full pipeline for the isolated regime: seed every admissible sequence at
/// the spread configuration, refine, track to the target, canonicalize and
/// dedup, and reconcile the count against the representation multiplicity.
pub fn solve_all(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<SolveReport> {
    let regime = classify_regime(&inst.m, inst.k);
    match regime.kind {
        RegimeKind::IsolatedPoints => {}
        RegimeKind::CriticalLines => {
            return Err(Error::RegimeMismatch {
                found: regime.kind.to_string(),
                hint: "use critical_lines for the non-isolated regime".into(),
            })
        }
        _ => {
            return Err(Error::RegimeMismatch {
                found: regime.kind.to_string(),
                hint: "no critical points exist in this regime".into(),
            })
        }
    }
    let ev = inst.exponent_vector();
    let seqs = admissible_sequences(&ev, inst.k)?;
    // Seeds are tracked as one ensemble through geometric halvings of the
    // spread scale; stage-level collision detection re-tracks any member
    // that landed on another member's branch before the error can compound.
    // Whole-ensemble rounds (with the start scale doubling) remain as the
    // outer fallback.
    let mut collected: Vec<(CriticalPoint, bool)> = Vec::new();
    let mut seed_succeeded = vec![false; seqs.len()];
    let mut deduped: Vec<(CriticalPoint, bool)> = Vec::new();
    for round in 0..4u64 {
        let s = cfg.s * f64::powi(2.0, (round.min(cfg.s_doublings as u64)) as i32);
        let results = track_ensemble(inst, &ev, &seqs, s, cfg, round);
        for (idx, cp) in results.into_iter().enumerate() {
            if let Some(cp) = cp {
                seed_succeeded[idx] = true;
                collected.push((cp, false));
            }
        }
        deduped = dedup_points(collected.clone(), inst, cfg.dedup_tol);
        if deduped.len() as i64 >= regime.expected {
            break;
        }
    }
    let seeds_failed = seed_succeeded.iter().filter(|ok| !**ok).count();
    let mut multistart_used = false;
    if let Some(starts) = cfg.multistart {
        if (deduped.len() as i64) < regime.expected {
            multistart_used = true;
            let extra = multistart_search(inst, starts, cfg);
            let mut all: Vec<(CriticalPoint, bool)> = deduped;
            all.extend(extra.into_iter().map(|cp| (cp, true)));
            deduped = dedup_points(all, inst, cfg.dedup_tol);
        }
    }
    let orbits: Vec<CriticalOrbit> = deduped
        .into_iter()
        .map(|(cp, multi)| orbit_diagnostics(cp, inst, multi))
        .collect();
    let found = orbits.len();
    let mut flags = Vec::new();
    if (found as i64) != regime.expected {
        flags.push(format!(
            "count-mismatch: found {found}, expected {}",
            regime.expected
        ));
    }
    if seeds_failed > 0 {
        flags.push(format!("seed-failures: {seeds_failed}"));
    }
    for (i, orbit) in orbits.iter().enumerate() {
        if orbit.hessian_cond > 1e8
            || orbit.point.hessian_det.norm() <= 1e-6 * hessian_det_scale(&orbit.point.t, inst)
        {
            flags.push(format!("degenerate-hessian: orbit {i}"));
        }
    }
    if found < seqs.len() && (found as i64) < regime.expected {
        flags.push("orbit-collision: distinct seeds merged".into());
    }
    Ok(SolveReport {
        regime,
        expected: regime.expected,
        found,
        orbits,
        seeds_used: seqs.len(),
        seeds_failed,
        multistart_used,
        genericity_flags: flags,
    })
}

/// A straight one-parameter family of critical points in symmetric
/// coordinates: lambda(c) = base + c * direction.
#[derive(Debug, Clone)]
pub struct CriticalLine {
    pub base_lambda: Vec<Complex64>,
    pub direction_lambda: Vec<Complex64>,
    /// The dual orbit the line came from; absent in the antiderivative case.
    pub source_orbit: Option<CriticalOrbit>,
    pub equation: FuchsianEquation<Complex64>,
    /// Largest relative residual among sampled points on the line.
    pub sample_residual: f64,
}

#[derive(Debug, Clone)]
pub struct LinesReport {
    pub regime: RegimeLabel,
    pub expected: i64,
    pub lines: Vec<CriticalLine>,
    pub dual: Option<SolveReport>,
    pub genericity_flags: Vec<String>,
}

/// Symmetric coordinates read off a degree-<= k polynomial inside the monic
/// degree-k pencil: lambda_i = (-1)^i (coefficient of x^{k-i}). Applied to
/// the monic generic solution this gives the base point; applied to the
/// special solution it gives the direction of the line.
fn lambda_coordinates(u: &Polynomial<Complex64>, k: usize) -> Vec<Complex64> {
    (1..=k)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            u.coeff(k - i) * sign
        })
        .collect()
}

/// Sample points on the line and measure the worst Bethe residual, skipping
/// parameters whose roots graze the arrangement.
fn sample_line_residual(
    u1: &Polynomial<Complex64>,
    u2: &Polynomial<Complex64>,
    inst: &ProblemInstance,
) -> f64 {
    let samples = [
        Complex64::new(1.0, 0.5),
        Complex64::new(-1.3, 0.25),
        Complex64::new(0.75, -2.0),
        Complex64::new(0.2, 3.0),
    ];
    let mut worst: f64 = 0.0;
    let mut measured = 0usize;
    for c in samples {
        let u = u1.add(&u2.scale(&c));
        let roots = u.monic().roots();
        if arrangement_check(&roots, &inst.z, 1e-7).is_err() {
            continue;
        }
        match relative_residual(&roots, inst) {
            Ok(r) => {
                worst = worst.max(r);
                measured += 1;
            }
            Err(_) => continue,
        }
    }
    if measured == 0 {
        f64::INFINITY
    } else {
        worst
    }
}

/// All critical lines of the non-isolated regime. For dual degree zero the
/// single line comes from antiderivatives of the weight divisor; otherwise
/// each dual orbit's associated equation contributes the pencil of its
/// degree-k solutions.
pub fn critical_lines(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<LinesReport> {
    let regime = classify_regime(&inst.m, inst.k);
    if regime.kind != RegimeKind::CriticalLines {
        return Err(Error::RegimeMismatch {
            found: regime.kind.to_string(),
            hint: "critical lines exist only when 0 <= l(m)+1-k < k".into(),
        });
    }
    let k = inst.k;
    let dual_k = inst.dual_k();
    let mut lines = Vec::new();
    let mut dual_report = None;
    let mut flags = Vec::new();
    if dual_k == 0 {
        // H = 0; solutions are antiderivatives of prod (x - z_l)^{m_l} plus
        // constants.
        let mut divisor = Polynomial::<Complex64>::one();
        for (zl, &ml) in inst.z.iter().zip(&inst.m) {
            for _ in 0..ml {
                divisor = divisor.mul(&Polynomial::new(vec![-zl, Complex64::one()]));
            }
        }
        let u1 = divisor.antiderivative().monic();
        let u2 = Polynomial::<Complex64>::one();
        let (f, g) = build_fg(&inst.z, &inst.m)?;
        let equation = FuchsianEquation {
            f,
            g,
            h: Polynomial::zero(),
            z: inst.z.clone(),
            m: inst.m.clone(),
            k,
        };
        let sample_residual = sample_line_residual(&u1, &u2, inst);
        lines.push(CriticalLine {
            base_lambda: lambda_coordinates(&u1, k),
            direction_lambda: lambda_coordinates(&u2, k),
            source_orbit: None,
            equation,
            sample_residual,
        });
    } else {
        let dual_inst = ProblemInstance::new(&inst.m, dual_k as usize, &inst.z)?;
        let report = solve_all(&dual_inst, cfg)?;
        for orbit in &report.orbits {
            let e = associated_equation(&orbit.point.t, &inst.z, &inst.m, DIVISION_TOL)?;
            let space = verify_all_polynomial(&e, dual_k as usize)?;
            let u1 = space.generic.clone();
            let u2 = space.special.clone();
            let sample_residual = sample_line_residual(&u1, &u2, inst);
            lines.push(CriticalLine {
                base_lambda: lambda_coordinates(&u1, k),
                direction_lambda: lambda_coordinates(&u2, k),
                source_orbit: Some(orbit.clone()),
                equation: e,
                sample_residual,
            });
        }
        flags.extend(report.genericity_flags.iter().cloned());
        dual_report = Some(report);
    }
    if (lines.len() as i64) != regime.expected {
        flags.push(format!(
            "count-mismatch: found {} lines, expected {}",
            lines.len(),
            regime.expected
        ));
    }
    for (i, line) in lines.iter().enumerate() {
        if line.sample_residual > cfg.line_sample_tol {
            flags.push(format!(
                "line-residual: line {i} sampled at {:.3e}",
                line.sample_residual
            ));
        }
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines_intersect(&lines[i], &lines[j], 1e-6) {
                flags.push(format!("lines {i} and {j} intersect"));
            }
        }
    }
    lines.sort_by(|a, b| {
        lambda_sort_key(&a.base_lambda)
            .partial_cmp(&lambda_sort_key(&b.base_lambda))
            .unwrap()
    });
    Ok(LinesReport {
        regime,
        expected: regime.expected,
        lines,
        dual: dual_report,
        genericity_flags: flags,
    })
}

/// Least-squares intersection test for two affine lines in C^k: they meet
/// when the 2-unknown normal system leaves no residual.
pub fn lines_intersect(a: &CriticalLine, b: &CriticalLine, rel_tol: f64) -> bool {
    let k = a.base_lambda.len();
    assert_eq!(k, b.base_lambda.len());
    let da = &a.direction_lambda;
    let db = &b.direction_lambda;
    let delta: Vec<Complex64> = (0..k)
        .map(|i| b.base_lambda[i] - a.base_lambda[i])
        .collect();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
    };
    // Minimize |c1 da - c2 db - delta| over complex c1, c2.
    let m11 = dot(da, da);
    let m12 = -dot(da, db);
    let m21 = -dot(db, da);
    let m22 = dot(db, db);
    let r1 = dot(da, &delta);
    let r2 = -dot(db, &delta);
    let det = m11 * m22 - m12 * m21;
    let scale: f64 = a
        .base_lambda
        .iter()
        .chain(b.base_lambda.iter())
        .chain(da.iter())
        .chain(db.iter())
        .map(|c| c.norm())
        .fold(1.0, f64::max);
    let (c1, c2) = if det.norm() > 1e-12 * (m11.norm() * m22.norm()).max(1e-300) {
        ((r1 * m22 - r2 * m12) / det, (m11 * r2 - m21 * r1) / det)
    } else {
        // Parallel directions: project delta on da alone.
        if m11.norm() == 0.0 {
            return delta.iter().all(|d| d.norm() <= rel_tol * scale);
        }
        (r1 / m11, Complex64::zero())
    };
    let residual: f64 = (0..k)
        .map(|i| (da[i] * c1 - db[i] * c2 - delta[i]).norm().powi(2))
        .sum::<f64>()
        .sqrt();
    residual <= rel_tol * scale
}

/// RNG stream id reserved for multistart draws (seed streams 1.. belong to
/// the admissible sequences).
const MULTISTART_STREAM: u64 = 0xB0A7;
