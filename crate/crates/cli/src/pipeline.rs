//! The four command pipelines. Each returns the machine-readable report,
//! human summary lines, and the process exit code:
//! 0 pass, 2 usage or configuration error, 3 count mismatch, 4 verification
//! failure. Code-2 errors are raised as `anyhow` errors by the caller.

use anyhow::{anyhow, bail};
use gaudin_core::bethe::{basis_check, bethe_vector, norm_identity_check};
use gaudin_core::fuchsian::{
    associated_equation, nondegenerate_check, verify_all_polynomial, DIVISION_TOL,
};
use gaudin_core::gaudin::{hamiltonian_matrix, shapovalov_symmetric, Configuration};
use gaudin_core::master::{
    canonical_orbit, classify_regime, relative_residual, ProblemInstance, RegimeKind,
};
use gaudin_core::rep::{
    classify_good_pair, dim_difference, multiplicity_w, sharp_count, singular_basis,
};
use gaudin_core::scalar::{rationalize_c64, Complex64, Rational};
use gaudin_core::solver::{
    admissible_sequences, critical_lines, lines_intersect, solve_all, CriticalOrbit, SolveReport,
};

use crate::config::{Mode, Resolved};
use crate::report::*;

const CHECK_TOL: f64 = 1e-8;

pub struct Outcome {
    pub report: RunReport,
    pub summary: Vec<String>,
    pub exit_code: i32,
}

fn base_report(cfg: &Resolved, command: &str) -> RunReport {
    let regime = classify_regime(&cfg.m, cfg.k);
    RunReport {
        command: command.into(),
        config_digest: cfg.digest(),
        m: cfg.m.clone(),
        k: cfg.k,
        z: cvec(&cfg.z),
        mode: cfg.mode.to_string(),
        seed: cfg.seed,
        regime: regime.kind.to_string(),
        expected: regime.expected,
        found: None,
        counts: None,
        orbits: None,
        fuchsian: None,
        bethe: None,
        basis: None,
        lines: None,
        genericity_flags: vec![],
        seeds_used: None,
        seeds_failed: None,
        multistart_used: None,
    }
}

fn instance(cfg: &Resolved) -> anyhow::Result<ProblemInstance> {
    Ok(ProblemInstance::new(&cfg.m, cfg.k, &cfg.z)?)
}

pub fn cmd_count(cfg: &Resolved) -> anyhow::Result<Outcome> {
    let mut report = base_report(cfg, "count");
    let k = cfg.k as i64;
    let n = cfg.m.len();
    let ints: Vec<i64> = cfg.m.iter().map(|&x| x as i64).collect();
    let ev = gaudin_core::rep::ExponentVector::from_integers(&ints);
    let counts = CountsSection {
        multiplicity: multiplicity_w(&cfg.m, k)?,
        dimension_difference: dim_difference(&ev, k),
        alternating_count: sharp_count(k, n, &ints),
        singular_dimension: singular_basis(&cfg.m, cfg.k).len(),
        admissible_sequences: if classify_good_pair(&ev, k).is_good {
            Some(admissible_sequences(&ev, cfg.k)?.len())
        } else {
            None
        },
    };
    let summary = vec![
        format!("regime: {} (expected {})", report.regime, report.expected),
        format!(
            "multiplicity w = {}, dimension difference d = {}, alternating count = {}",
            counts.multiplicity, counts.dimension_difference, counts.alternating_count
        ),
        format!(
            "dim of the singular subspace = {}, admissible sequences = {}",
            counts.singular_dimension,
            counts
                .admissible_sequences
                .map_or("n/a (pair is not good)".to_string(), |v| v.to_string())
        ),
    ];
    report.counts = Some(counts);
    Ok(Outcome {
        report,
        summary,
        exit_code: 0,
    })
}

fn orbit_report(orbit: &CriticalOrbit) -> OrbitReport {
    OrbitReport {
        t: cvec(&orbit.point.t),
        lambda: cvec(&orbit.point.lambda),
        residual: orbit.point.residual,
        hessian_det: c2(&orbit.point.hessian_det),
        hessian_min_sv: orbit.hessian_min_sv,
        hessian_cond: orbit.hessian_cond,
        exact_lambda: orbit
            .exact_lambda
            .as_ref()
            .map(|lam| lam.iter().map(rational_string).collect()),
        from_multistart: orbit.from_multistart,
    }
}

fn fill_solve_sections(report: &mut RunReport, solve: &SolveReport) {
    report.found = Some(solve.found);
    report.orbits = Some(solve.orbits.iter().map(orbit_report).collect());
    report.genericity_flags = solve.genericity_flags.clone();
    report.seeds_used = Some(solve.seeds_used);
    report.seeds_failed = Some(solve.seeds_failed);
    report.multistart_used = Some(solve.multistart_used);
}

pub fn cmd_solve(cfg: &Resolved) -> anyhow::Result<Outcome> {
    let inst = instance(cfg)?;
    let regime = classify_regime(&inst.m, inst.k);
    if regime.kind != RegimeKind::IsolatedPoints {
        bail!(
            "regime is {}; the solve command handles isolated points only \
             (use `lines` for the non-isolated regime)",
            regime.kind
        );
    }
    let solve = solve_all(&inst, &cfg.solver_config())?;
    let mut report = base_report(cfg, "solve");
    fill_solve_sections(&mut report, &solve);
    let count_ok = solve.found as i64 == solve.expected;
    let residuals_ok = solve
        .orbits
        .iter()
        .all(|o| o.point.residual < cfg.tol_newton * 10.0);
    let mut summary = vec![format!(
        "found {} of {} expected orbits ({} seeds, {} failed)",
        solve.found, solve.expected, solve.seeds_used, solve.seeds_failed
    )];
    for (i, orbit) in solve.orbits.iter().enumerate() {
        summary.push(format!(
            "orbit {i}: residual {:.2e}, |det H| {:.3e}{}",
            orbit.point.residual,
            orbit.point.hessian_det.norm(),
            orbit
                .exact_lambda
                .as_ref()
                .map(|lam| format!(
                    ", exact lambda [{}]",
                    lam.iter()
                        .map(rational_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
                .unwrap_or_default()
        ));
    }
    for flag in &solve.genericity_flags {
        summary.push(format!("flag: {flag}"));
    }
    let exit_code = if !count_ok {
        3
    } else if !residuals_ok {
        4
    } else {
        0
    };
    Ok(Outcome {
        report,
        summary,
        exit_code,
    })
}

/// Rebuild solver orbits from a previously written report.
fn orbits_from_report(
    prior: &RunReport,
    inst: &ProblemInstance,
) -> anyhow::Result<Vec<CriticalOrbit>> {
    let Some(orbits) = &prior.orbits else {
        bail!("prior report carries no orbits; run `solve` with --out first");
    };
    orbits
        .iter()
        .map(|o| {
            let t: Vec<Complex64> = o.t.iter().map(|p| Complex64::new(p[0], p[1])).collect();
            let point = canonical_orbit(&t, inst)?;
            Ok(CriticalOrbit {
                point,
                hessian_min_sv: o.hessian_min_sv,
                hessian_cond: o.hessian_cond,
                exact_lambda: None,
                from_multistart: o.from_multistart,
            })
        })
        .collect::<gaudin_core::Result<Vec<_>>>()
        .map_err(|e| anyhow!(e))
}

pub fn cmd_verify(cfg: &Resolved, prior: Option<&RunReport>) -> anyhow::Result<Outcome> {
    let inst = instance(cfg)?;
    let regime = classify_regime(&inst.m, inst.k);
    if regime.kind != RegimeKind::IsolatedPoints {
        bail!(
            "regime is {}; verification runs on isolated orbits \
             (use `lines` for the non-isolated regime)",
            regime.kind
        );
    }
    // Exact mode certifies the commuting-operator structure, which needs
    // rational marker points.
    let zq: Option<Vec<Rational>> = cfg
        .z
        .iter()
        .map(|z| rationalize_c64(*z, 1e-12, 1_000_000))
        .collect();
    if cfg.mode == Mode::Exact && zq.is_none() {
        bail!("exact mode needs rational marker points; got an irrational configuration");
    }

    let mut report = base_report(cfg, "verify");
    let mut failures: Vec<String> = Vec::new();

    let orbits: Vec<CriticalOrbit> = match prior {
        Some(prior_report) => {
            if prior_report.config_digest != report.config_digest {
                bail!(
                    "stale report: digest {} does not match configuration digest {}",
                    prior_report.config_digest,
                    report.config_digest
                );
            }
            orbits_from_report(prior_report, &inst)?
        }
        None => {
            let solve = solve_all(&inst, &cfg.solver_config())?;
            fill_solve_sections(&mut report, &solve);
            solve.orbits
        }
    };
    report.found = Some(orbits.len());

    if cfg.mode == Mode::Exact {
        // Commutativity and self-adjointness of the Hamiltonians on this
        // weight space, exact over the rationals.
        let zq = zq.expect("checked above");
        let z = Configuration::new(zq)?;
        let h: Vec<_> = (0..inst.n())
            .map(|i| hamiltonian_matrix::<Rational>(i, &z, &inst.m, inst.k))
            .collect::<gaudin_core::Result<_>>()?;
        for a in 0..h.len() {
            for b in a + 1..h.len() {
                if h[a].entries.mul(&h[b].entries) != h[b].entries.mul(&h[a].entries) {
                    failures.push(format!("hamiltonians {a} and {b} do not commute"));
                }
            }
            if !shapovalov_symmetric(&h[a], &inst.m, inst.k) {
                failures.push(format!("hamiltonian {a} is not self-adjoint"));
            }
        }
    }

    let dual_k = inst.dual_k() as usize;
    let dual_inst = ProblemInstance::new(&inst.m, dual_k, &inst.z)?;
    let mut bethe_sections = Vec::new();
    let mut fuchsian_sections = Vec::new();
    let mut vectors = Vec::new();
    for (i, orbit) in orbits.iter().enumerate() {
        let bv = bethe_vector(&orbit.point, &inst)?;
        let ni = norm_identity_check(&bv, &inst)?;
        if !bv.degenerate {
            if bv.e_residual > CHECK_TOL {
                failures.push(format!(
                    "orbit {i}: singular residual {:.2e}",
                    bv.e_residual
                ));
            }
            if bv.eigen_residual > CHECK_TOL {
                failures.push(format!(
                    "orbit {i}: eigenvector residual {:.2e}",
                    bv.eigen_residual
                ));
            }
            if let Some(err) = ni.rel_err {
                if err > CHECK_TOL {
                    failures.push(format!("orbit {i}: norm identity error {err:.2e}"));
                }
            }
        }
        bethe_sections.push(BetheSection {
            e_residual: bv.e_residual,
            eigenvalues: cvec(&bv.eigenvalues),
            eigen_residual: bv.eigen_residual,
            pairing_square: c2(&bv.pairing_square),
            norm_identity_rel_err: ni.rel_err,
            degenerate: bv.degenerate || ni.degenerate,
        });
        let degenerate = bv.degenerate || ni.degenerate;
        vectors.push(bv);

        match associated_equation(&orbit.point.t, &inst.z, &inst.m, DIVISION_TOL) {
            Ok(e) => match verify_all_polynomial(&e, inst.k) {
                Ok(space) => {
                    if space.wronskian_rel_err > CHECK_TOL && !degenerate {
                        failures.push(format!(
                            "orbit {i}: wronskian error {:.2e}",
                            space.wronskian_rel_err
                        ));
                    }
                    // Dual residual on a generic member of the pencil.
                    let mut dual_residual = None;
                    for cc in [
                        Complex64::new(0.7, 0.3),
                        Complex64::new(-1.1, 0.6),
                        Complex64::new(0.35, -1.2),
                    ] {
                        let member = space.generic.add(&space.special.scale(&cc));
                        let roots = member.monic().roots();
                        if let Ok(res) = relative_residual(&roots, &dual_inst) {
                            dual_residual = Some(res);
                            break;
                        }
                    }
                    match dual_residual {
                        Some(res) if res > CHECK_TOL && !degenerate => {
                            failures.push(format!("orbit {i}: dual residual {res:.2e}"));
                        }
                        None if !degenerate => {
                            failures.push(format!("orbit {i}: dual roots on the arrangement"));
                        }
                        _ => {}
                    }
                    let nd = nondegenerate_check(&space, &inst.z);
                    fuchsian_sections.push(FuchsianSection {
                        h_coeffs: e.h.coeffs().to_vec().iter().map(c2).collect(),
                        second_solution_degree: space.generic.degree().unwrap_or(0),
                        second_solution_roots: cvec(&space.generic.roots()),
                        wronskian_rel_err: space.wronskian_rel_err,
                        dual_residual,
                        exact_division: orbit.exact_lambda.is_some(),
                        nondegenerate: nd.nondegenerate,
                    });
                }
                Err(err) => {
                    if !degenerate {
                        failures.push(format!("orbit {i}: {err}"));
                    }
                    fuchsian_sections.push(FuchsianSection {
                        h_coeffs: e.h.coeffs().to_vec().iter().map(c2).collect(),
                        second_solution_degree: 0,
                        second_solution_roots: vec![],
                        wronskian_rel_err: f64::INFINITY,
                        dual_residual: None,
                        exact_division: orbit.exact_lambda.is_some(),
                        nondegenerate: false,
                    });
                }
            },
            Err(err) => {
                failures.push(format!("orbit {i}: {err}"));
            }
        }
    }
    report.bethe = Some(bethe_sections);
    report.fuchsian = Some(fuchsian_sections);

    // Basis test when a full set of nondegenerate eigenvectors is available.
    let sing_dim = singular_basis(&inst.m, inst.k).len();
    if vectors.len() == sing_dim && !vectors.is_empty() && vectors.iter().all(|v| !v.degenerate) {
        let check = basis_check(&vectors, &inst, 1e-6)?;
        if !check.is_basis {
            failures.push(format!(
                "eigenvectors are not independent: det {}",
                check.det
            ));
        }
        report.basis = Some(BasisSection {
            gram_det: c2(&check.det),
            column_norms: check.column_norms,
            is_basis: check.is_basis,
        });
    } else if vectors.len() != sing_dim {
        report.genericity_flags.push(format!(
            "basis check skipped: {} of {sing_dim} eigenvectors",
            vectors.len()
        ));
    }

    let mut summary = vec![format!(
        "verified {} orbits: {}",
        orbits.len(),
        if failures.is_empty() {
            "all checks passed"
        } else {
            "FAILURES"
        }
    )];
    for f in &failures {
        summary.push(format!("failure: {f}"));
    }
    if let Some(basis) = &report.basis {
        summary.push(format!(
            "eigenvector basis: |det| = {:.3e} ({})",
            Complex64::new(basis.gram_det[0], basis.gram_det[1]).norm(),
            if basis.is_basis {
                "independent"
            } else {
                "DEGENERATE"
            }
        ));
    }
    let exit_code = if failures.is_empty() { 0 } else { 4 };
    Ok(Outcome {
        report,
        summary,
        exit_code,
    })
}

pub fn cmd_lines(cfg: &Resolved) -> anyhow::Result<Outcome> {
    let inst = instance(cfg)?;
    let regime = classify_regime(&inst.m, inst.k);
    if regime.kind != RegimeKind::CriticalLines {
        bail!(
            "regime is {}; the lines command handles the non-isolated regime only \
             (use `solve` for isolated points)",
            regime.kind
        );
    }
    let lines = critical_lines(&inst, &cfg.solver_config())?;
    let mut report = base_report(cfg, "lines");
    report.found = Some(lines.lines.len());
    report.genericity_flags = lines.genericity_flags.clone();
    if let Some(dual) = &lines.dual {
        report.orbits = Some(dual.orbits.iter().map(orbit_report).collect());
        report.seeds_used = Some(dual.seeds_used);
        report.seeds_failed = Some(dual.seeds_failed);
    }
    let mut sections = Vec::new();
    let mut residual_ok = true;
    for line in lines.lines.iter() {
        if line.sample_residual > cfg.tol_line_sample {
            residual_ok = false;
        }
        // Locate the dual orbit this line came from in the (sorted) orbit
        // section.
        let source_orbit = line.source_orbit.as_ref().and_then(|src| {
            lines.dual.as_ref().and_then(|dual| {
                dual.orbits.iter().position(|o| {
                    gaudin_core::master::lambda_distance(
                        &o.point.lambda,
                        &src.point.lambda,
                    ) < 1e-9
                })
            })
        });
        sections.push(LineSection {
            base_lambda: cvec(&line.base_lambda),
            direction_lambda: cvec(&line.direction_lambda),
            h_coeffs: line.equation.h.coeffs().to_vec().iter().map(c2).collect(),
            sample_residual: line.sample_residual,
            source_orbit,
        });
    }
    let mut intersections = false;
    for i in 0..lines.lines.len() {
        for j in i + 1..lines.lines.len() {
            if lines_intersect(&lines.lines[i], &lines.lines[j], 1e-6) {
                intersections = true;
            }
        }
    }
    report.lines = Some(sections);
    let count_ok = lines.lines.len() as i64 == lines.expected;
    let mut summary = vec![format!(
        "found {} of {} expected critical lines",
        lines.lines.len(),
        lines.expected
    )];
    for (i, line) in lines.lines.iter().enumerate() {
        summary.push(format!(
            "line {i}: sampled residual {:.2e}",
            line.sample_residual
        ));
    }
    for flag in &lines.genericity_flags {
        summary.push(format!("flag: {flag}"));
    }
    if intersections {
        summary.push("FAILURE: lines intersect".into());
    }
    let exit_code = if !count_ok {
        3
    } else if !residual_ok || intersections {
        4
    } else {
        0
    };
    Ok(Outcome {
        report,
        summary,
        exit_code,
    })
}
