//! Exponent estimates and plot data from a record file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, StatsError};
use crate::excitation::ExcitationMode;
use crate::lattice::LatticeKind;
use crate::rng::mix_seed;
use crate::statistics::{
    ccdf_points, derive_exponent_relations, fit_epsilon_exponents, fit_scaling_with_correction,
    fit_tail_exponent, fit_winding_kappa, mean_and_error, EpsilonPoint, ExponentSet, FitResult,
    Relations,
};

use super::records::Record;

/// Analysis settings.
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Tail window for the size distribution, as powers of the largest L.
    pub tail_window: (f64, f64),
    pub epsilon_cut: f64,
    /// Restrict winding-angle averages to loops that wrap the torus.
    pub winding_only: bool,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tail_window: (0.5, 1.0),
            epsilon_cut: crate::statistics::DEFAULT_EPSILON_CUT,
            winding_only: false,
            resamples: crate::statistics::DEFAULT_RESAMPLES,
            seed: 1,
        }
    }
}

/// Reference estimates for comparison in the printed report:
/// `(quantity, H, Q, T)`.
pub const REFERENCE_VALUES: &[(&str, f64, f64, f64)] = &[
    ("alpha", 0.576, 0.591, 0.867),
    ("gamma", 1.290, 1.208, 1.507),
    ("zeta_fit", 0.579, 0.602, 0.341),
    ("zeta_derived", 0.552, 0.573, 0.363),
    ("d_f", 1.287, 1.383, 1.360),
    ("kappa", 2.093, 2.035, 2.168),
    ("d_f_from_kappa", 1.262, 1.254, 1.271),
    ("beta", 0.528, 0.535, 0.445),
    ("tau", 3.001, 2.721, 3.119),
    ("tau_from_beta", 2.893, 2.869, 3.247),
];

pub fn reference_value(quantity: &str, kind: LatticeKind) -> Option<f64> {
    REFERENCE_VALUES
        .iter()
        .find(|r| r.0 == quantity)
        .map(|r| match kind {
            LatticeKind::H => r.1,
            LatticeKind::Q => r.2,
            LatticeKind::T => r.3,
        })
}

/// Loop observables of one instance.
#[derive(Debug, Clone, Default)]
struct InstanceLoops {
    s: f64,
    r2: Vec<f64>,
    theta2: Vec<f64>,
    theta2_raw: Vec<f64>,
}

/// Per-size means for one lattice kind.
#[derive(Debug, Clone)]
pub struct SizeMeans {
    pub size: usize,
    pub instances: usize,
    pub s: (f64, f64),
    pub r2: (f64, f64),
    pub theta2: (f64, f64),
    pub theta2_raw: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct LinkReport {
    pub kind: LatticeKind,
    pub sizes: Vec<SizeMeans>,
    pub exponents: ExponentSet,
    pub kappa_raw: Option<FitResult>,
    pub relations: Relations,
    /// Fits that could not be made, with the reason.
    pub missing: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct EpsilonReport {
    pub kind: LatticeKind,
    pub size: usize,
    pub points: Vec<EpsilonPoint>,
    pub exponents: ExponentSet,
    pub relations: Relations,
    pub missing: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub mode: ExcitationMode,
    pub link: Vec<LinkReport>,
    pub epsilon: Vec<EpsilonReport>,
}

/// Means and errors of S, R^2, gauged and raw theta^2.
type LoopMeans = ((f64, f64), (f64, f64), (f64, f64), (f64, f64));

fn loop_means(data: &[InstanceLoops], idx: &[usize]) -> LoopMeans {
    let s: Vec<f64> = idx.iter().map(|&i| data[i].s).collect();
    let pool = |f: &dyn Fn(&InstanceLoops) -> &Vec<f64>| -> (f64, f64) {
        let v: Vec<f64> = idx
            .iter()
            .flat_map(|&i| f(&data[i]).iter().copied())
            .collect();
        mean_and_error(&v)
    };
    (
        mean_and_error(&s),
        pool(&|d| &d.r2),
        pool(&|d| &d.theta2),
        pool(&|d| &d.theta2_raw),
    )
}

/// Bootstrap over instances, resampling every size independently.
fn bootstrap<F>(
    sizes: &[Vec<InstanceLoops>],
    opts: &FitOptions,
    salt: u64,
    mut estimate: F,
) -> Option<f64>
where
    F: FnMut(&[Vec<usize>]) -> Option<f64>,
{
    use rand::Rng;
    let mut rng = crate::rng::SplitMix64::new(mix_seed(&[opts.seed, salt]));
    let mut values = Vec::new();
    for _ in 0..opts.resamples {
        let idx: Vec<Vec<usize>> = sizes
            .iter()
            .map(|d| (0..d.len()).map(|_| rng.random_range(0..d.len())).collect())
            .collect();
        if let Some(v) = estimate(&idx) {
            if v.is_finite() {
                values.push(v);
            }
        }
    }
    if values.len() < 2 {
        return None;
    }
    let (m, _) = mean_and_error(&values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    Some(var.sqrt())
}

fn with_bootstrap(mut fit: FitResult, se: Option<f64>) -> FitResult {
    if let Some(se) = se {
        if se > 0.0 {
            fit.std_error = se;
        }
    }
    fit
}

fn link_report(kind: LatticeKind, rows: &[&Record], opts: &FitOptions) -> LinkReport {
    let mut by_size: BTreeMap<usize, BTreeMap<u64, InstanceLoops>> = BTreeMap::new();
    for r in rows {
        let entry = by_size
            .entry(r.size)
            .or_default()
            .entry(r.instance)
            .or_default();
        if r.is_summary() {
            entry.s = r.s as f64;
        } else {
            if let Some(v) = r.r2 {
                entry.r2.push(v);
            }
            let keep = !opts.winding_only || r.winding.is_some_and(|w| w != (0, 0));
            if keep {
                if let Some(v) = r.theta2_gauged {
                    entry.theta2.push(v);
                }
                if let Some(v) = r.theta2_raw {
                    entry.theta2_raw.push(v);
                }
            }
        }
    }
    let ls: Vec<usize> = by_size.keys().copied().collect();
    let data: Vec<Vec<InstanceLoops>> = by_size
        .values()
        .map(|m| m.values().cloned().collect())
        .collect();
    let full: Vec<Vec<usize>> = data.iter().map(|d| (0..d.len()).collect()).collect();
    let means: Vec<_> = data
        .iter()
        .zip(&full)
        .map(|(d, i)| loop_means(d, i))
        .collect();
    let sizes: Vec<SizeMeans> = ls
        .iter()
        .zip(&means)
        .zip(&data)
        .map(|((&size, m), d)| SizeMeans {
            size,
            instances: d.len(),
            s: m.0,
            r2: m.1,
            theta2: m.2,
            theta2_raw: m.3,
        })
        .collect();
    let lf: Vec<f64> = ls.iter().map(|&l| l as f64).collect();
    let mut missing = Vec::new();
    let mut set = ExponentSet::default();

    type Pick = fn(&((f64, f64), (f64, f64), (f64, f64), (f64, f64))) -> (f64, f64);
    let picks: [(&str, Pick, u64); 2] = [("alpha", |m| m.0, 1), ("gamma", |m| m.1, 2)];
    for (name, pick, salt) in picks {
        let y: Vec<f64> = means.iter().map(|m| pick(m).0).collect();
        let e: Vec<f64> = means.iter().map(|m| pick(m).1).collect();
        match fit_scaling_with_correction(&lf, &y, &e) {
            Ok(fit) => {
                let se = bootstrap(&data, opts, salt, |idx| {
                    let y: Vec<f64> = data
                        .iter()
                        .zip(idx)
                        .map(|(d, i)| pick(&loop_means(d, i)).0)
                        .collect();
                    fit_scaling_with_correction(&lf, &y, &e)
                        .ok()
                        .map(|f| f.exponent)
                });
                let fit = with_bootstrap(fit, se);
                if name == "alpha" {
                    set.alpha = Some(fit);
                } else {
                    set.gamma = Some(fit);
                }
            }
            Err(err) => missing.push((name.to_string(), format!("{kind}: {err}"))),
        }
    }

    let mut kappa_raw = None;
    for raw in [false, true] {
        let pick = |m: &LoopMeans| if raw { m.3 } else { m.2 };
        let y: Vec<f64> = means.iter().map(|m| pick(m).0).collect();
        let e: Vec<f64> = means.iter().map(|m| pick(m).1).collect();
        match fit_winding_kappa(&lf, &y, &e) {
            Ok(fit) => {
                let se = bootstrap(&data, opts, 3 + raw as u64, |idx| {
                    let y: Vec<f64> = data
                        .iter()
                        .zip(idx)
                        .map(|(d, i)| pick(&loop_means(d, i)).0)
                        .collect();
                    fit_winding_kappa(&lf, &y, &e).ok().map(|f| f.exponent)
                });
                let fit = with_bootstrap(fit, se);
                if raw {
                    kappa_raw = Some(fit);
                } else {
                    set.kappa = Some(fit);
                }
            }
            Err(err) => {
                if !raw {
                    missing.push(("kappa".into(), format!("{kind}: {err}")))
                }
            }
        }
    }

    if let (Some(&lmax), Some(d)) = (ls.last(), data.last()) {
        let window = (
            (lmax as f64).powf(opts.tail_window.0),
            (lmax as f64).powf(opts.tail_window.1),
        );
        let samples: Vec<f64> = d.iter().map(|x| x.s).collect();
        let tail = if samples.len() < crate::statistics::MIN_CCDF_SAMPLES {
            Err(StatsError::InsufficientData(format!(
                "{kind} L={lmax}: {} instances, need {}",
                samples.len(),
                crate::statistics::MIN_CCDF_SAMPLES
            )))
        } else {
            fit_tail_exponent(&ccdf_points(&samples), window)
        };
        match tail {
            Ok(fit) => set.zeta_fit = Some(fit),
            Err(err) => missing.push(("zeta_fit".into(), format!("{kind} L={lmax}: {err}"))),
        }
    }
    let relations = derive_exponent_relations(&set);
    LinkReport {
        kind,
        sizes,
        exponents: set,
        kappa_raw,
        relations,
        missing,
    }
}

/// Per-instance `(distance, energy per matched edge)` at every epsilon.
type EpsilonTable = BTreeMap<u64, BTreeMap<u64, (f64, f64)>>;

fn epsilon_points(table: &EpsilonTable, eps: &[f64], idx: &[u64]) -> Vec<EpsilonPoint> {
    eps.iter()
        .map(|&e| {
            let key = e.to_bits();
            let mut d = Vec::with_capacity(idx.len());
            let mut en = Vec::with_capacity(idx.len());
            for i in idx {
                if let Some(&(dist, energy)) = table.get(i).and_then(|m| m.get(&key)) {
                    d.push(dist);
                    en.push(energy);
                }
            }
            let (dm, ds) = mean_and_error(&d);
            let (em, es) = mean_and_error(&en);
            EpsilonPoint {
                epsilon: e,
                distance: dm,
                distance_se: ds,
                energy: em,
                energy_se: es,
            }
        })
        .collect()
}

fn epsilon_report(
    kind: LatticeKind,
    size: usize,
    rows: &[&Record],
    opts: &FitOptions,
) -> EpsilonReport {
    let norm = (size * size) as f64 / 2.0;
    let mut table: EpsilonTable = BTreeMap::new();
    let mut eps_set = std::collections::BTreeSet::new();
    for r in rows.iter().filter(|r| r.is_summary()) {
        let (Some(e), Some(d)) = (r.epsilon, r.distance) else {
            continue;
        };
        if e == 0.0 {
            continue;
        }
        eps_set.insert(e.to_bits());
        table
            .entry(r.instance)
            .or_default()
            .insert(e.to_bits(), (d, r.delta_e / norm));
    }
    let mut eps: Vec<f64> = eps_set.into_iter().map(f64::from_bits).collect();
    eps.sort_by(f64::total_cmp);
    let all: Vec<u64> = table.keys().copied().collect();
    let points = epsilon_points(&table, &eps, &all);
    let mut set = ExponentSet::default();
    let mut missing = Vec::new();
    match fit_epsilon_exponents(&points, opts.epsilon_cut) {
        Ok((beta, tau)) => {
            use rand::Rng;
            let mut rng =
                crate::rng::SplitMix64::new(mix_seed(&[opts.seed, 6, kind.tag(), size as u64]));
            let mut bs = Vec::new();
            let mut ts = Vec::new();
            for _ in 0..opts.resamples {
                let idx: Vec<u64> = (0..all.len())
                    .map(|_| all[rng.random_range(0..all.len())])
                    .collect();
                if let Ok((b, t)) =
                    fit_epsilon_exponents(&epsilon_points(&table, &eps, &idx), opts.epsilon_cut)
                {
                    bs.push(b.exponent);
                    ts.push(t.exponent);
                }
            }
            let sd = |v: &[f64]| {
                (v.len() > 1).then(|| {
                    let (m, _) = mean_and_error(v);
                    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
                })
            };
            set.beta = Some(with_bootstrap(beta, sd(&bs)));
            set.tau = Some(with_bootstrap(tau, sd(&ts)));
        }
        Err(err) => missing.push(("beta/tau".into(), format!("{kind} L={size}: {err}"))),
    }
    let relations = derive_exponent_relations(&set);
    EpsilonReport {
        kind,
        size,
        points,
        exponents: set,
        relations,
        missing,
    }
}

/// Run the statistics pipeline over all records.
pub fn fit_report(records: &[Record], opts: &FitOptions) -> Result<FitReport, HarnessError> {
    let Some(first) = records.first() else {
        return Err(StatsError::InsufficientData("no records".into()).into());
    };
    let mode = first.excitation;
    let mut by_kind: BTreeMap<LatticeKind, Vec<&Record>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.excitation == mode) {
        by_kind.entry(r.kind).or_default().push(r);
    }
    let mut report = FitReport {
        mode,
        link: Vec::new(),
        epsilon: Vec::new(),
    };
    for (kind, rows) in by_kind {
        if mode == ExcitationMode::Epsilon {
            let mut by_size: BTreeMap<usize, Vec<&Record>> = BTreeMap::new();
            for r in rows {
                by_size.entry(r.size).or_default().push(r);
            }
            for (size, rows) in by_size {
                report.epsilon.push(epsilon_report(kind, size, &rows, opts));
            }
        } else {
            report.link.push(link_report(kind, &rows, opts));
        }
    }
    Ok(report)
}

fn fmt_fit(f: &Option<FitResult>) -> String {
    match f {
        Some(f) => format!("{:.4} +/- {:.4}", f.exponent, f.std_error),
        None => "n/a".into(),
    }
}

fn fmt_est(e: &Option<crate::statistics::Estimate>) -> String {
    match e {
        Some(e) => format!("{:.4} +/- {:.4}", e.value, e.error),
        None => "n/a".into(),
    }
}

fn fmt_ref(q: &str, k: LatticeKind) -> String {
    reference_value(q, k).map_or("".into(), |v| format!("{v:.3}"))
}

impl FitReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("excitation mode: {}\n", self.mode);
        for r in &self.link {
            let _ = writeln!(s, "\nlattice {}", r.kind);
            let _ = writeln!(
                s,
                "  {:>4} {:>7} {:>22} {:>22} {:>22}",
                "L", "n", "<S>", "<R2>", "<theta2>"
            );
            for m in &r.sizes {
                let _ = writeln!(
                    s,
                    "  {:>4} {:>7} {:>12.4} +/- {:<6.3} {:>12.4} +/- {:<6.3} {:>12.4} +/- {:<6.3}",
                    m.size, m.instances, m.s.0, m.s.1, m.r2.0, m.r2.1, m.theta2.0, m.theta2.1
                );
            }
            let e = &r.exponents;
            let rel = &r.relations;
            let rows: [(&str, String); 8] = [
                ("alpha", fmt_fit(&e.alpha)),
                ("gamma", fmt_fit(&e.gamma)),
                ("zeta_fit", fmt_fit(&e.zeta_fit)),
                ("zeta_derived", fmt_est(&rel.zeta_derived)),
                ("d_f", fmt_est(&rel.d_f)),
                ("kappa", fmt_fit(&e.kappa)),
                ("d_f_from_kappa", fmt_est(&rel.d_f_from_kappa)),
                ("kappa_raw", fmt_fit(&r.kappa_raw)),
            ];
            let _ = writeln!(
                s,
                "  {:<16} {:>24} {:>10}",
                "quantity", "estimate", "reference"
            );
            for (q, v) in rows {
                let _ = writeln!(s, "  {:<16} {:>24} {:>10}", q, v, fmt_ref(q, r.kind));
            }
            if let Some(t) = rel.zeta_tension {
                let _ = writeln!(s, "  |zeta_fit - zeta_derived| = {t:.2} sigma");
            }
            for (q, why) in &r.missing {
                let _ = writeln!(s, "  {q}: not fitted ({why})");
            }
        }
        for r in &self.epsilon {
            let _ = writeln!(s, "\nlattice {} L={}", r.kind, r.size);
            let rows: [(&str, String); 3] = [
                ("beta", fmt_fit(&r.exponents.beta)),
                ("tau", fmt_fit(&r.exponents.tau)),
                ("tau_from_beta", fmt_est(&r.relations.tau_from_beta)),
            ];
            let _ = writeln!(
                s,
                "  {:<16} {:>24} {:>10}",
                "quantity", "estimate", "reference"
            );
            for (q, v) in rows {
                let _ = writeln!(s, "  {:<16} {:>24} {:>10}", q, v, fmt_ref(q, r.kind));
            }
            if let Some(t) = r.relations.tau_tension {
                let _ = writeln!(s, "  |tau - tau_from_beta| = {t:.2} sigma");
            }
            for (q, why) in &r.missing {
                let _ = writeln!(s, "  {q}: not fitted ({why})");
            }
        }
        s
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let est = |s: &mut String, name: String, e: &Option<crate::statistics::Estimate>| {
            if let Some(e) = e {
                let _ = writeln!(
                    s,
                    "{name}.value={:.10}\n{name}.std_error={:.10}",
                    e.value, e.error
                );
            }
        };
        for r in &self.link {
            let k = r.kind;
            let e = &r.exponents;
            for (q, f) in [
                ("alpha", &e.alpha),
                ("gamma", &e.gamma),
                ("zeta_fit", &e.zeta_fit),
                ("kappa", &e.kappa),
                ("kappa_raw", &r.kappa_raw),
            ] {
                if let Some(f) = f {
                    s.push_str(&f.to_kv(&format!("{k}.{q}")));
                }
            }
            est(&mut s, format!("{k}.d_f"), &r.relations.d_f);
            est(
                &mut s,
                format!("{k}.zeta_derived"),
                &r.relations.zeta_derived,
            );
            est(
                &mut s,
                format!("{k}.d_f_from_kappa"),
                &r.relations.d_f_from_kappa,
            );
            if let Some(t) = r.relations.zeta_tension {
                let _ = writeln!(s, "{k}.zeta_tension_sigma={t:.6}");
            }
        }
        for r in &self.epsilon {
            let p = format!("{}.L{}", r.kind, r.size);
            if let Some(f) = &r.exponents.beta {
                s.push_str(&f.to_kv(&format!("{p}.beta")));
            }
            if let Some(f) = &r.exponents.tau {
                s.push_str(&f.to_kv(&format!("{p}.tau")));
            }
            est(
                &mut s,
                format!("{p}.tau_from_beta"),
                &r.relations.tau_from_beta,
            );
            if let Some(t) = r.relations.tau_tension {
                let _ = writeln!(s, "{p}.tau_tension_sigma={t:.6}");
            }
        }
        s
    }
}

fn write_columns(path: &Path, header: &str, rows: &[(f64, f64)]) -> std::io::Result<()> {
    let mut s = format!("# {header}\n");
    for (x, y) in rows {
        let _ = writeln!(s, "{x:.10e} {y:.10e}");
    }
    fs::write(path, s)
}

/// Two-column data files for every figure-equivalent; returns their paths.
pub fn write_plot_data(
    records: &[Record],
    report: &FitReport,
    dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut emit =
        |name: String, header: &str, rows: Vec<(f64, f64)>| -> Result<(), HarnessError> {
            let p = dir.join(name);
            write_columns(&p, header, &rows)?;
            written.push(p);
            Ok(())
        };
    for r in &report.link {
        let k = r.kind;
        let mut per_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for rec in records.iter().filter(|x| x.kind == k && x.is_summary()) {
            per_size.entry(rec.size).or_default().push(rec.s as f64);
        }
        for (l, s) in per_size {
            let pts = ccdf_points(&s)
                .points
                .into_iter()
                .filter(|p| p.1 > 0.0)
                .collect();
            emit(format!("ccdf_{k}_L{l}.dat"), "s P[S>s]", pts)?;
        }
        emit(
            format!("mean_S_{k}.dat"),
            "L <S>",
            r.sizes.iter().map(|m| (m.size as f64, m.s.0)).collect(),
        )?;
        emit(
            format!("mean_R2_{k}.dat"),
            "L <R2>",
            r.sizes.iter().map(|m| (m.size as f64, m.r2.0)).collect(),
        )?;
        emit(
            format!("theta2_{k}.dat"),
            "lnL <theta2>",
            r.sizes
                .iter()
                .map(|m| ((m.size as f64).ln(), m.theta2.0))
                .collect(),
        )?;
    }
    for r in &report.epsilon {
        let (k, l) = (r.kind, r.size);
        emit(
            format!("distance_{k}_L{l}.dat"),
            "epsilon d",
            r.points.iter().map(|p| (p.epsilon, p.distance)).collect(),
        )?;
        emit(
            format!("energy_{k}_L{l}.dat"),
            "d <dE>/N",
            r.points
                .iter()
                .filter(|p| p.distance > 0.0)
                .map(|p| (p.distance, p.energy))
                .collect(),
        )?;
    }
    Ok(written)
}
