//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use dyspair::angular::Parity;
use dyspair::atomdata::{dy_reference_k, parse_linelist_str};
use dyspair::longrange::{c3_spectra, c6_spectra, full_space_sum, qq_interaction_scale, validate_c6_equivalence};
use dyspair::report::{crossings, ScaleSet};
use dyspair::config::RunConfig;
use dyspair::scattering::{
    barrier, barrier_numeric, born_gamma, h_function, log_energy_grid, partial_rate, total_born_rate, total_rate,
    universal_smatrix, BornParams, CollisionConfig, Flip, RateTableBuilder,
};
use dyspair::units::{gauss_to_au, kelvin_to_hartree, rate_to_cm3_per_s, reduced_mass_au, DY164_MASS_AMU};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn ac1() -> Outcome {
    let (spectra, dt) = timed(|| c6_spectra(&dy_reference_k()).unwrap());
    let all: Vec<f64> = spectra.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    let min = all.iter().copied().fold(f64::INFINITY, f64::min);
    let max = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = max - min;
    let pass = all.len() == 153
        && min >= 1865.0 - 5.0
        && max <= 1890.0 + 5.0
        && (spread - 25.0).abs() <= 3.0
        && dt < Duration::from_secs(1);
    outcome(pass, format!("n = {}, range [{min:.3}, {max:.3}] a.u., spread {spread:.3} a.u., {dt:.2?}", all.len()))
}

fn ac2() -> Outcome {
    let spectra = c6_spectra(&dy_reference_k()).unwrap();
    let count = |p: Parity| spectra.iter().filter(|s| s.parity == p).map(|s| s.eigenvalues.len()).sum::<usize>();
    let (g, u) = (count(Parity::Gerade), count(Parity::Ungerade));
    let top: Vec<_> = spectra.iter().filter(|s| s.omega == 16 && !s.eigenvalues.is_empty()).collect();
    let pass = g == 81 && u == 72 && top.len() == 1 && top[0].parity == Parity::Gerade && top[0].eigenvalues.len() == 1;
    outcome(pass, format!("{g} gerade, {u} ungerade, Omega = 16: {} state(s)", top.iter().map(|s| s.eigenvalues.len()).sum::<usize>()))
}

fn ac3() -> Outcome {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/toy_lines.txt")).unwrap();
    let lines = parse_linelist_str(&text, 8).unwrap();
    let (report, dt) = timed(|| validate_c6_equivalence(&lines, 8).unwrap());
    let pass = lines.len() == 3 && report.agrees && dt < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} blocks, max elementwise deviation {:.2e} (tolerance {:.0e}), {dt:.2?}",
            report.blocks.len(),
            report.max_rel_deviation,
            report.tolerance
        ),
    )
}

fn ac4() -> Outcome {
    let spectra = c3_spectra(8, 1.24159).unwrap();
    let sum = full_space_sum(&spectra);
    let vals: Vec<f64> = spectra.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pos = vals.iter().filter(|v| **v > 1e-12 * scale).count();
    let neg = vals.iter().filter(|v| **v < -1e-12 * scale).count();
    outcome(sum.abs() <= 1e-10 && pos > 0 && neg > 0, format!("full-space sum {sum:.2e}, {pos} positive, {neg} negative"))
}

fn ac5() -> Outcome {
    let cfg = RunConfig::default();
    let r = 50.0;
    let qq = qq_interaction_scale(cfg.atom.quadrupole_au, r).unwrap();
    let disp = cfg.scattering.c6_au / r.powi(6);
    let ratio = qq / disp;
    outcome((1e-8..=1e-6).contains(&ratio), format!("|U_QQ|/|U_disp| at 50 a0 = {ratio:.2e}"))
}

fn ac6() -> Outcome {
    let cfg = RunConfig::default();
    let set = ScaleSet::from_config(&cfg);
    let list = crossings(&set, 5.0, 500.0).unwrap();
    let get = |curve: &str, b: f64| {
        list.iter().find(|c| c.curve == curve && c.b_gauss == Some(b)).and_then(|c| c.r_a0).unwrap_or(f64::NAN)
    };
    let (ad10, mdd10, ad100, mdd100) = (get("ad", 10.0), get("mdd", 10.0), get("ad", 100.0), get("mdd", 100.0));
    let pass = ad100 < 35.0 && mdd100 < 35.0 && (ad10 - 50.0).abs() <= 5.0 && (mdd10 - 50.0).abs() <= 5.0;
    outcome(pass, format!("10 G: AD {ad10:.2}, MDD {mdd10:.2} a0; 100 G: AD {ad100:.2}, MDD {mdd100:.2} a0"))
}

fn ac7() -> Outcome {
    let mu = reduced_mass_au(DY164_MASS_AMU, DY164_MASS_AMU);
    let b = barrier(4, 1890.0, mu).unwrap();
    let n = barrier_numeric(4, 1890.0, mu).unwrap();
    let mk = b.height_kelvin * 1e3;
    let rel = (n.height / b.height - 1.0).abs();
    outcome((mk - 1.5).abs() <= 0.2 && rel <= 1e-8, format!("g-wave barrier {mk:.4} mK at {:.2} a0, grid search rel. diff {rel:.1e}", b.r_barrier))
}

fn ac8() -> Outcome {
    let e = kelvin_to_hartree(500e-6);
    let mut parts = Vec::new();
    let mut pass = true;
    for rc in [35.0, 50.0] {
        let c = CollisionConfig { r_match_inner: rc, ..Default::default() };
        let beta = rate_to_cm3_per_s(total_rate(&c, e).unwrap().total);
        pass &= (5e-11..=2.1e-10).contains(&beta);
        parts.push(format!("R_c = {rc}: {beta:.3e}"));
    }
    let grid = CollisionConfig { l_max: 4, ..Default::default() };
    let (table, dt) = timed(|| RateTableBuilder::new(grid, gauss_to_au(1.0)).build().unwrap());
    pass &= table.energies.len() == 60 && dt < Duration::from_secs(60);
    outcome(pass, format!("beta(500 uK) {} cm3/s; 60-point grid, l <= 4 in {dt:.2?}", parts.join(", ")))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn ac9() -> Outcome {
    let table = RateTableBuilder::new(CollisionConfig::default(), gauss_to_au(1.0)).build().unwrap();
    let mut worst = 0.0f64;
    for (rates, limits) in table.per_l_rates.iter().zip(&table.unitarity_limits) {
        for (b, u) in rates.iter().zip(limits) {
            worst = worst.max(b / u);
        }
    }
    let c = CollisionConfig::default();
    let temps = log_energy_grid(1e-8, 1e-6, 7).unwrap();
    let mut max_dev = 0.0f64;
    let mut slopes = Vec::new();
    for l in 0..=4u32 {
        let pts: Vec<(f64, f64)> = temps.iter().map(|&e| (e.ln(), partial_rate(&c, e, l).unwrap().ln())).collect();
        let s = slope(&pts);
        max_dev = max_dev.max((s - f64::from(l)).abs());
        slopes.push(format!("{s:.3}"));
    }
    outcome(
        worst <= 1.0 && max_dev <= 0.1,
        format!("max beta_l/limit {worst:.4}; threshold slopes l=0..4: [{}]", slopes.join(", ")),
    )
}

fn ac10() -> Outcome {
    let mut min_order = f64::INFINITY;
    for t in [1e-6, 5e-4, 1.5e-3] {
        for l in 0..=4 {
            let p: Vec<f64> = [0.5, 0.25, 0.125]
                .iter()
                .map(|&h| {
                    let c = CollisionConfig { grid_step: h, ..Default::default() };
                    universal_smatrix(&c, kelvin_to_hartree(t), l).unwrap().loss_probability
                })
                .collect();
            min_order = min_order.min(((p[0] - p[1]).abs() / (p[1] - p[2]).abs()).log2());
        }
    }
    let mut worst = 0.0f64;
    for t in [1e-6, 5e-4, 1.5e-3] {
        let e = kelvin_to_hartree(t);
        let base = CollisionConfig::default();
        let r = base.outer_radius(e);
        let beta = |f: f64| total_rate(&CollisionConfig { r_match_outer: Some(f * r), ..base.clone() }, e).unwrap().total;
        let b0 = beta(1.0);
        for f in [0.8, 1.2] {
            worst = worst.max((beta(f) / b0 - 1.0).abs());
        }
    }
    outcome(min_order >= 3.0 && worst < 5e-3, format!("min observed order {min_order:.2}; matching radius +-20%: {:.1e}", worst))
}

fn ac11() -> Outcome {
    let h_low = h_function(1.0 + 1e-6).unwrap();
    let h_high = h_function(1e6).unwrap();
    let p = BornParams::default();
    let (b, e) = (gauss_to_au(1.0), kelvin_to_hartree(500e-6));
    let gamma = rate_to_cm3_per_s(total_born_rate(b, e, &p).unwrap());
    // equal kinematics: the double flip at B/2 releases the same energy
    let ratio = born_gamma(b, e, Flip::Single, &p).unwrap() / born_gamma(b / 2.0, e, Flip::Double, &p).unwrap();
    let pass = (h_low + 0.5).abs() <= 1e-3
        && (h_high - 1.0).abs() <= 1e-5
        && (1e-12..=1e-9).contains(&gamma)
        && (ratio / (2.0 * f64::from(p.j)) - 1.0).abs() < 1e-12;
    outcome(pass, format!("h(1+1e-6) = {h_low:.6}, h(1e6) = {h_high:.8}, gamma(1 G, 500 uK) = {gamma:.3e} cm3/s, gamma1/gamma2 = {ratio:.6}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> (bool, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_dyspair"))
        .args(args)
        .args(["--out", "."])
        .current_dir(dir)
        .env_remove("DYSPAIR_OUT")
        .output()
        .unwrap();
    (out.status.success(), out.stdout)
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn ac12() -> Outcome {
    let commands: [&[&str]; 7] = [
        &["c6"],
        &["c6", "--format", "json"],
        &["c3", "--omega", "3", "--symmetry", "u"],
        &["adiabats", "--points", "50", "--mk"],
        &["scales"],
        &["rates", "--bfield", "1", "--points", "6", "--lmax", "4"],
        &["rates", "--bfield", "1", "--points", "4", "--format", "json"],
    ];
    let mut mismatched = Vec::new();
    for args in commands {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let (ok_a, out_a) = run_cli(a.path(), args);
        let (ok_b, out_b) = run_cli(b.path(), args);
        let (fa, fb) = (snapshot(a.path()), snapshot(b.path()));
        if !(ok_a && ok_b && !fa.is_empty() && fa == fb && out_a == out_b) {
            mismatched.push(args.join(" "));
        }
    }
    let n = commands.len();
    outcome(mismatched.is_empty(), format!("{n} commands run twice; differing: {mismatched:?}"))
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 12] = [
        ("C6 range and spread", ac1),
        ("potential census", ac2),
        ("closed form vs direct second-order sum", ac3),
        ("C3 traceless, both signs", ac4),
        ("quadrupole-quadrupole vs dispersion", ac5),
        ("crossing radii", ac6),
        ("g-wave barrier", ac7),
        ("universal rate at 500 uK", ac8),
        ("unitarity and threshold laws", ac9),
        ("numerical robustness", ac10),
        ("h-function and Born rates", ac11),
        ("deterministic CLI output", ac12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("AC{:<2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
