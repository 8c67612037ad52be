//! The acceptance criteria as runnable checks. Shared by the `selftest` CLI
//! verb and the `acceptance` test target.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{
    commutator_table, countertwisting_identities, cyclic_triples,
    linear_dependence_identity, reference_table, spin1_identities, table_identities, Generator,
    IdentityCheck, PairIndex,
};
use crate::bloch::{
    bloch_triple_unchecked, decompose, derived_geometry, det_formula, purity, radii_from_gammas,
    reconstruct, QutritCoefficients,
};
use crate::dynamics::{
    c_rotation_closed_form, oscillation_amplitude, radius_closed_form, radius_oscillation_fit,
    trajectory,
};
use crate::ensemble;
use crate::linalg::{determinant, eigenvalues_hermitian, trace_inner, ComplexMatrix, IndexSet};
use crate::qudit::{converse_probe, decompose_qudit, necessary_conditions, sample_gram};
use crate::validity::{
    derive_seed, is_valid_state, orthogonal_pure_mixed, orthogonal_pure_pure, sample_batch,
};

/// Sample sizes. [`Config::full`] uses the sizes the criteria call for;
/// [`Config::quick`] divides them for a fast smoke run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub oracle_trials: usize,
    pub det_trials: usize,
    pub pure_trials: usize,
    pub identity_trials: usize,
    pub sampler_trials: usize,
    pub dynamics_states: usize,
    pub ortho_pairs: usize,
    pub interlacing_trials: usize,
    pub qudit_trials: usize,
    pub probe_trials: usize,
}

impl Config {
    pub fn full() -> Self {
        Config {
            seed: 2024,
            oracle_trials: 100_000,
            det_trials: 10_000,
            pure_trials: 10_000,
            identity_trials: 10_000,
            sampler_trials: 100_000,
            dynamics_states: 100,
            ortho_pairs: 1_000,
            interlacing_trials: 1_000,
            qudit_trials: 10_000,
            probe_trials: 100_000,
        }
    }

    pub fn quick() -> Self {
        Config {
            seed: 2024,
            oracle_trials: 5_000,
            det_trials: 1_000,
            pure_trials: 1_000,
            identity_trials: 1_000,
            sampler_trials: 5_000,
            dynamics_states: 10,
            ortho_pairs: 200,
            interlacing_trials: 200,
            qudit_trials: 1_000,
            probe_trials: 5_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub const TITLES: [&str; 11] = [
    "oracle equivalence",
    "determinant formula",
    "basis algebra",
    "pure-state geometry",
    "algebraic identities",
    "sampler soundness",
    "dynamics laws",
    "orthogonality",
    "interlacing",
    "qudit necessary conditions",
    "worked example",
];

fn rng_for(cfg: &Config, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed ^ stream.wrapping_mul(0x1000_0000_01B3), index))
}

fn timed(id: u8, f: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (pass, detail) = f();
    CriterionResult {
        id,
        title: TITLES[id as usize - 1],
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |a, x| if x.is_nan() || a.is_nan() { f64::NAN } else { a.max(x) })
}

pub const ORACLE_TOL: f64 = 1e-9;
pub const ORACLE_TIME_LIMIT: f64 = 60.0;

/// Constraint verdict against the eigenvalue oracle on the mixed ensemble.
pub fn oracle_equivalence(cfg: &Config) -> CriterionResult {
    timed(1, || {
        let start = Instant::now();
        let disagreements: Vec<String> = (0..cfg.oracle_trials as u64)
            .into_par_iter()
            .filter_map(|n| {
                let (kind, rho) = ensemble::mixed_draw(&mut rng_for(cfg, 1, n), 3);
                let engine = is_valid_state(&decompose(&rho).ok()?, ORACLE_TOL);
                let oracle = eigenvalues_hermitian(&rho).ok()?[0] >= -ORACLE_TOL;
                (engine != oracle).then(|| format!("#{n} {kind:?}: engine {engine}, oracle {oracle}"))
            })
            .collect();
        let secs = start.elapsed().as_secs_f64();
        let pass = disagreements.is_empty() && secs <= ORACLE_TIME_LIMIT;
        let mut detail = format!(
            "{} matrices, {} disagreements, {:.2} s of {} s budget",
            cfg.oracle_trials,
            disagreements.len(),
            secs,
            ORACLE_TIME_LIMIT
        );
        if let Some(first) = disagreements.first() {
            detail.push_str(&format!("; first {first}"));
        }
        (pass, detail)
    })
}

/// Factored determinant against LU on valid states with every `ω > 1e-3`.
pub fn determinant_formula(cfg: &Config) -> CriterionResult {
    timed(2, || {
        let mut states = Vec::with_capacity(cfg.det_trials);
        let mut n = 0u64;
        while states.len() < cfg.det_trials {
            let batch = sample_batch(cfg.seed.wrapping_add(n), 256);
            n += 1;
            states.extend(batch.into_iter().filter(|c| c.omega.iter().all(|&w| w > 1e-3)));
        }
        states.truncate(cfg.det_trials);
        let worst = max_of(states.par_iter().map(|c| {
            let direct = determinant(&reconstruct(c)).re;
            det_formula(c).map(|f| (f - direct).abs()).unwrap_or(f64::INFINITY)
        }).collect::<Vec<_>>());
        (worst <= 1e-12, format!("{} states, max |Δdet| = {worst:.3e} (tol 1e-12)", states.len()))
    })
}

/// Every algebraic identity the basis checks, in one list.
pub fn basis_identities() -> Vec<IdentityCheck> {
    let mut all = table_identities();
    all.push(linear_dependence_identity());
    all.extend(countertwisting_identities());
    all.extend(spin1_identities());
    all.extend(cyclic_triples().into_iter().map(|t| IdentityCheck {
        name: format!("cyclic {}{}{} (x{})", t.ops[0], t.ops[1], t.ops[2], t.multiplier),
        residual: t.residual(),
    }));
    all
}

pub fn basis_algebra() -> CriterionResult {
    timed(3, || {
        let checks = basis_identities();
        let failed: Vec<&IdentityCheck> = checks.iter().filter(|c| !c.passes(1e-12)).collect();
        let table_ok = commutator_table() == reference_table();
        let worst = max_of(checks.iter().map(|c| c.residual));
        let mut detail = format!(
            "{} of {} identities hold, max residual {worst:.3e}, table {}",
            checks.len() - failed.len(),
            checks.len(),
            if table_ok { "matches" } else { "differs" }
        );
        if let Some(f) = failed.first() {
            detail.push_str(&format!("; first failure {} ({:.3e})", f.name, f.residual));
        }
        (failed.is_empty() && table_ok, detail)
    })
}

pub fn pure_state_geometry(cfg: &Config) -> CriterionResult {
    timed(4, || {
        let worst: Vec<[f64; 5]> = (0..cfg.pure_trials as u64)
            .into_par_iter()
            .map(|n| {
                let v = ensemble::random_pure_vector(&mut rng_for(cfg, 4, n), 3);
                let c = QutritCoefficients::from_state_vector(&[v[0], v[1], v[2]]);
                let g = derived_geometry(&c);
                let t = bloch_triple_unchecked(&c);
                let lengths = t.lengths();
                [
                    max_of(g.d.iter().map(|d| d.map_or(f64::INFINITY, |d| (d - 1.0).abs()))),
                    g.total_phase.abs(),
                    max_of((0..3).map(|k| (lengths[k] - t.radii[k]).abs())),
                    (lengths.iter().sum::<f64>() - 2.0).abs(),
                    (purity(&c) - 1.0).abs(),
                ]
            })
            .collect();
        let m: [f64; 5] = std::array::from_fn(|k| max_of(worst.iter().map(|w| w[k])));
        let pass = m[0] <= 1e-9 && m[1] <= 1e-9 && m[2] <= 1e-10 && m[3] <= 1e-9 && m[4] <= 1e-10;
        (
            pass,
            format!(
                "{} states; max |d-1| {:.1e}, |Φ| {:.1e}, ||u|-R| {:.1e}, |Σ|u|-2| {:.1e}, |purity-1| {:.1e}",
                cfg.pure_trials, m[0], m[1], m[2], m[3], m[4]
            ),
        )
    })
}

/// `ΣR = 2`, the γ cycle, `γ_ij = R_ik - R_jk` and the radius formula from γ.
pub fn identity_residuals(c: &QutritCoefficients) -> [f64; 4] {
    let t = bloch_triple_unchecked(c);
    let g = t.gamma();
    let r = t.radii;
    let from_g = radii_from_gammas(g);
    [
        (r.iter().sum::<f64>() - 2.0).abs(),
        (g[0] - g[1] + g[2]).abs(),
        max_of([
            (g[0] - (r[1] - r[2])).abs(),
            (g[1] - (r[0] - r[2])).abs(),
            (g[2] - (r[0] - r[1])).abs(),
        ]),
        max_of((0..3).map(|k| (from_g[k] - r[k]).abs())),
    ]
}

pub fn algebraic_identities(cfg: &Config) -> CriterionResult {
    timed(5, || {
        let res: Vec<[f64; 4]> = (0..cfg.identity_trials as u64)
            .into_par_iter()
            .map(|n| {
                let (_, rho) = ensemble::mixed_draw(&mut rng_for(cfg, 5, n), 3);
                identity_residuals(&decompose(&rho).expect("trace-1 Hermitian draw"))
            })
            .collect();
        let m: [f64; 4] = std::array::from_fn(|k| max_of(res.iter().map(|r| r[k])));
        (
            m.iter().all(|&x| x <= 1e-14),
            format!(
                "{} states (valid and invalid); max ΣR {:.1e}, cycle {:.1e}, γ=ΔR {:.1e}, R(γ) {:.1e} (tol 1e-14)",
                cfg.identity_trials, m[0], m[1], m[2], m[3]
            ),
        )
    })
}

pub fn sampler_soundness(cfg: &Config) -> CriterionResult {
    timed(6, || {
        let states = sample_batch(cfg.seed, cfg.sampler_trials);
        let lows: Vec<f64> = states
            .par_iter()
            .map(|c| eigenvalues_hermitian(&reconstruct(c)).map_or(f64::NEG_INFINITY, |e| e[0]))
            .collect();
        let bad = lows.iter().filter(|&&l| l < -1e-12).count();
        let lowest = lows.iter().copied().fold(f64::INFINITY, f64::min);
        let n = cfg.sampler_trials.min(1000);
        let a = crate::io::to_json_string(&sample_batch(cfg.seed ^ 0x5eed, n)).unwrap_or_default();
        let b = crate::io::to_json_string(&sample_batch(cfg.seed ^ 0x5eed, n)).unwrap_or_default();
        let deterministic = !a.is_empty() && a == b;
        (
            bad == 0 && deterministic,
            format!(
                "{} samples, {bad} below -1e-12 (lowest eigenvalue {lowest:.3e}); rerun of {n} {}",
                cfg.sampler_trials,
                if deterministic { "byte-identical" } else { "DIFFERS" }
            ),
        )
    })
}

fn dynamics_state(cfg: &Config, n: u64) -> QutritCoefficients {
    sample_batch(derive_seed(cfg.seed, 7_000 + n), 1)[0]
}

pub fn dynamics_laws(cfg: &Config) -> CriterionResult {
    timed(7, || {
        let ab: Vec<Generator> = PairIndex::QUTRIT
            .iter()
            .flat_map(|&p| [Generator::A(p), Generator::B(p)])
            .collect();
        let cs: Vec<Generator> = PairIndex::QUTRIT.iter().map(|&p| Generator::C(p)).collect();
        let per_state: Vec<[f64; 5]> = (0..cfg.dynamics_states as u64)
            .into_par_iter()
            .map(|n| {
                let c = dynamics_state(cfg, n);
                let p0 = purity(&c);
                let (mut radius, mut fit, mut rot, mut drift, mut offset) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
                for &g in &ab {
                    let traj = trajectory(&c, g, PI, 129).expect("valid state");
                    for p in &traj {
                        let law = radius_closed_form(&c, g, p.theta).expect("A/B generator");
                        radius = radius.max(max_of((0..3).map(|k| (law[k] - p.radii[k]).abs())));
                        drift = drift.max((p.purity - p0).abs());
                    }
                    let (ik, jk) = radius_oscillation_fit(&c, g).expect("A/B generator");
                    let amp = oscillation_amplitude(&c, g).expect("A/B generator");
                    let k = g.pair().expect("pair").complement();
                    let off = (1.0 + c.omega[k - 1]) / 2.0;
                    fit = fit.max((ik.amplitude - amp).abs()).max((jk.amplitude - amp).abs());
                    offset = offset.max((ik.offset - off).abs()).max((jk.offset - off).abs());
                }
                for &g in &cs {
                    for p in trajectory(&c, g, 2.0 * PI, 65).expect("valid state") {
                        let law = c_rotation_closed_form(&c, g, p.theta).expect("C generator");
                        let e = &p.coefficients;
                        for k in 0..3 {
                            rot = rot
                                .max((law.alpha[k] - e.alpha[k]).abs())
                                .max((law.beta[k] - e.beta[k]).abs())
                                .max((law.omega[k] - e.omega[k]).abs());
                        }
                        drift = drift.max((p.purity - p0).abs());
                    }
                }
                [radius, fit, offset, rot, drift]
            })
            .collect();
        let m: [f64; 5] = std::array::from_fn(|k| max_of(per_state.iter().map(|r| r[k])));
        let pass = m[0] <= 1e-9 && m[1] <= 1e-9 && m[2] <= 1e-9 && m[3] <= 1e-10 && m[4] <= 1e-10;
        (
            pass,
            format!(
                "{} states x 9 generators; radius law {:.1e}, fitted amplitude {:.1e}, offset {:.1e}, C rotation {:.1e}, purity drift {:.1e}",
                cfg.dynamics_states, m[0], m[1], m[2], m[3], m[4]
            ),
        )
    })
}

fn normalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

fn orthogonal_complement_vector<R: Rng>(rng: &mut R, psi: &[Complex64]) -> Vec<Complex64> {
    let b = ensemble::random_pure_vector(rng, 3);
    let ip: Complex64 = psi.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
    normalize(b.iter().zip(psi).map(|(y, x)| y - ip * x).collect())
}

fn coeffs(v: &[Complex64]) -> QutritCoefficients {
    QutritCoefficients::from_state_vector(&[v[0], v[1], v[2]])
}

pub fn orthogonality(cfg: &Config) -> CriterionResult {
    timed(8, || {
        // (pure-pure verdict ok, pure-mixed verdict ok, gap between forms, construction ok)
        let results: Vec<(bool, bool, f64, bool)> = (0..2 * cfg.ortho_pairs as u64)
            .into_par_iter()
            .map(|n| {
                let mut rng = rng_for(cfg, 8, n);
                let psi = ensemble::random_pure_vector(&mut rng, 3);
                let orthogonal_pair = n < cfg.ortho_pairs as u64;
                let phi = if orthogonal_pair {
                    orthogonal_complement_vector(&mut rng, &psi)
                } else {
                    ensemble::random_pure_vector(&mut rng, 3)
                };
                // mixed partner: a rank-2 state on the complement, or a generic one
                let mixed = if orthogonal_pair {
                    let a = phi.clone();
                    // conj(ψ × a) is orthogonal to both ψ and a
                    let b = {
                        let cross = [
                            (psi[1] * a[2] - psi[2] * a[1]).conj(),
                            (psi[2] * a[0] - psi[0] * a[2]).conj(),
                            (psi[0] * a[1] - psi[1] * a[0]).conj(),
                        ];
                        normalize(cross.to_vec())
                    };
                    let w: f64 = rng.random_range(0.0..1.0);
                    let rho = &ComplexMatrix::outer(&a).scale_real(w) + &ComplexMatrix::outer(&b).scale_real(1.0 - w);
                    decompose(&rho).expect("trace-1 state")
                } else {
                    decompose(&ensemble::gram_state(&mut rng, 3, 3)).expect("trace-1 state")
                };
                let (p, q) = (coeffs(&psi), coeffs(&phi));
                let rp = reconstruct(&p);
                let tr_pure = trace_inner(&rp, &reconstruct(&q)).expect("3x3").re;
                let tr_mixed = trace_inner(&rp, &reconstruct(&mixed)).expect("3x3").re;
                let oracle_pure = tr_pure.abs() <= ORACLE_TOL;
                let oracle_mixed = tr_mixed.abs() <= ORACLE_TOL;
                let pp = orthogonal_pure_pure(&p, &q).expect("pure inputs");
                let pm = orthogonal_pure_mixed(&p, &mixed).expect("pure first input");
                let form_gap = max_of([
                    (pp.population_form - pp.radius_form).abs(),
                    (pm.population_form - pm.radius_form).abs(),
                    (pp.angle_form.unwrap_or(f64::NAN) - pp.population_form).abs(),
                ]);
                let radius_verdict = pm.radius_form.abs() / 2.0 <= ORACLE_TOL;
                (
                    pp.orthogonal == oracle_pure,
                    pm.orthogonal == oracle_mixed && radius_verdict == oracle_mixed,
                    form_gap,
                    oracle_pure == orthogonal_pair,
                )
            })
            .collect();
        let pp_bad = results.iter().filter(|r| !r.0).count();
        let pm_bad = results.iter().filter(|r| !r.1).count();
        let construction_bad = results.iter().filter(|r| !r.3).count();
        let gap = max_of(results.iter().map(|r| r.2));
        (
            pp_bad == 0 && pm_bad == 0 && construction_bad == 0 && gap <= 1e-12,
            format!(
                "{} orthogonal + {} generic pairs; misclassified pure-pure {pp_bad}, pure-mixed {pm_bad}; max gap between forms {gap:.1e}",
                cfg.ortho_pairs, cfg.ortho_pairs
            ),
        )
    })
}

/// Largest interlacing violation of the 2×2 principal submatrices.
pub fn interlacing_violation(m: &ComplexMatrix) -> f64 {
    let l = eigenvalues_hermitian(m).expect("Hermitian input");
    let mut worst = 0.0f64;
    for set in IndexSet::all_nonempty(3).into_iter().filter(|s| s.len() == 2) {
        let mu = eigenvalues_hermitian(&m.submatrix(&set).expect("in range")).expect("Hermitian");
        worst = worst
            .max(l[0] - mu[0])
            .max(mu[0] - l[1])
            .max(l[1] - mu[1])
            .max(mu[1] - l[2]);
    }
    worst
}

pub fn interlacing(cfg: &Config) -> CriterionResult {
    timed(9, || {
        let worst = max_of(
            (0..cfg.interlacing_trials as u64)
                .into_par_iter()
                .map(|n| {
                    let mut rng = rng_for(cfg, 9, n);
                    let m = ComplexMatrix::from_fn(3, |_, _| ensemble::complex_gaussian(&mut rng)).symmetrized();
                    interlacing_violation(&m)
                })
                .collect::<Vec<_>>(),
        );
        (
            worst <= 1e-9,
            format!("{} matrices, max violation {worst:.1e} (tol 1e-9)", cfg.interlacing_trials),
        )
    })
}

pub fn qudit_conditions(cfg: &Config) -> CriterionResult {
    timed(10, || {
        let gram_fail = (0..cfg.qudit_trials as u64)
            .into_par_iter()
            .filter(|&n| {
                let c = sample_gram(derive_seed(cfg.seed ^ 10, n), 4).expect("d = 4");
                let r = necessary_conditions(&c, 1e-10);
                r.entries.len() != 16 || !r.overall
            })
            .count();
        let d3_disagree = (0..cfg.qudit_trials as u64)
            .into_par_iter()
            .filter(|&n| {
                let (_, rho) = ensemble::mixed_draw(&mut rng_for(cfg, 1, n), 3);
                let q = decompose_qudit(&rho, 3).expect("trace-1 Hermitian");
                let c = decompose(&rho).expect("trace-1 Hermitian");
                necessary_conditions(&q, ORACLE_TOL).overall != is_valid_state(&c, ORACLE_TOL)
            })
            .count();
        let probes: Vec<String> = [4usize, 5]
            .iter()
            .map(|&d| match converse_probe(d, cfg.probe_trials, cfg.seed ^ 0xC0, ORACLE_TOL) {
                Ok(p) => format!(
                    "d={d}: {} of {} pass all minors, {} of those not PSD, {} PSD failing a minor",
                    p.minors_pass, p.trials, p.minors_pass_not_psd, p.psd_minor_fails
                ),
                Err(e) => format!("d={d}: {e}"),
            })
            .collect();
        (
            gram_fail == 0 && d3_disagree == 0,
            format!(
                "d=4 Gram: {gram_fail} of {} fail the 16 conditions; d=3 engine disagreements {d3_disagree}; converse probe (informational) {}",
                cfg.qudit_trials,
                probes.join("; ")
            ),
        )
    })
}

/// State vector `(1/2, e^{2πi/3}/√2, 1/2)`.
pub fn worked_example_vector() -> [Complex64; 3] {
    [
        Complex64::new(0.5, 0.0),
        Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, 2.0 * PI / 3.0),
        Complex64::new(0.5, 0.0),
    ]
}

/// Runs `decompose --rho` on the worked example through the CLI and checks
/// the printed JSON.
pub fn worked_example() -> CriterionResult {
    timed(11, || match worked_example_via_cli() {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, format!("CLI path failed: {e}")),
    })
}

fn worked_example_via_cli() -> Result<(bool, String), String> {
    let psi = worked_example_vector();
    let rho = ComplexMatrix::outer(&psi);
    let file = std::env::temp_dir().join(format!(
        "qutrit-worked-example-{}-{:?}.json",
        std::process::id(),
        std::thread::current().id()
    ));
    let body = crate::io::to_json_string(&serde_json::json!({"rho": crate::io::matrix_json(&rho)}))
        .map_err(|e| e.to_string())?;
    std::fs::write(&file, body).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = ["qutrit", "--format", "json", "decompose", "--rho", &file.to_string_lossy()];
    let code = crate::cli::run_with(argv, &mut out, &mut err);
    let _ = std::fs::remove_file(&file);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let get = |path: &[&str]| -> Result<Vec<f64>, String> {
        let mut cur = &v;
        for key in path {
            cur = cur.get(key).ok_or_else(|| format!("missing {}", path.join(".")))?;
        }
        match cur {
            serde_json::Value::Array(a) => a.iter().map(|x| x.as_f64().ok_or("non-number".to_string())).collect(),
            x => x.as_f64().map(|f| vec![f]).ok_or_else(|| format!("{} not numeric", path.join("."))),
        }
    };
    let omega = get(&["coefficients", "omega"])?;
    let radii = get(&["bloch", "radii"])?;
    let d = get(&["geometry", "d"])?;
    let phase = get(&["geometry", "total_phase"])?[0];
    let dev = |got: &[f64], want: &[f64]| max_of(got.iter().zip(want).map(|(a, b)| (a - b).abs()));
    let errs = [
        dev(&omega, &[0.25, 0.5, 0.25]),
        dev(&radii, &[0.75, 0.5, 0.75]),
        dev(&d, &[1.0, 1.0, 1.0]),
        phase.abs(),
    ];
    let worst = max_of(errs);
    let lengths_ok = omega.len() == 3 && radii.len() == 3 && d.len() == 3;
    Ok((
        lengths_ok && worst <= 1e-12,
        format!(
            "ω = {omega:?}, R = {radii:?}, d = {d:?}, Φ = {phase:e}; max deviation {worst:.1e} (tol 1e-12)"
        ),
    ))
}

/// Runs one criterion by number (1–11).
pub fn run_one(cfg: &Config, id: u8) -> Option<CriterionResult> {
    Some(match id {
        1 => oracle_equivalence(cfg),
        2 => determinant_formula(cfg),
        3 => basis_algebra(),
        4 => pure_state_geometry(cfg),
        5 => algebraic_identities(cfg),
        6 => sampler_soundness(cfg),
        7 => dynamics_laws(cfg),
        8 => orthogonality(cfg),
        9 => interlacing(cfg),
        10 => qudit_conditions(cfg),
        11 => worked_example(),
        _ => return None,
    })
}

/// Criteria 1–11 in order, each run when the iterator reaches it.
pub fn run_all_iter(cfg: &Config) -> impl Iterator<Item = CriterionResult> + '_ {
    (1..=TITLES.len() as u8).filter_map(move |id| run_one(cfg, id))
}

pub fn run_all(cfg: &Config) -> Vec<CriterionResult> {
    run_all_iter(cfg).collect()
}
