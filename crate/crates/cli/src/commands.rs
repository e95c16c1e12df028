//! Subcommand implementations. Each builds a [`Report`] from deterministic
//! library calls; all randomness flows through the explicit `--seed`.

use norlund_core::clt::{self, PNorm};
use norlund_core::error::Result;
use norlund_core::families;
use norlund_core::permstat::{
    self, additive_dist_guarded, cycle_type_count_exact, ewens_cycle_count_law, mean_mult_gf,
    sample_cycle_types,
};
use norlund_core::series::required_order;
use norlund_core::voronoi::{lower_ratio_check, WeightSpec};
use norlund_core::Series;

use crate::output::{Cell, Report};

pub struct Ctx {
    pub seed: u64,
    pub override_guard: bool,
}

pub fn weights(d: &str, n: usize, ctx: &Ctx) -> Result<Report> {
    let w = families::weight_spec(d, n.max(1), ctx.seed)?;
    let mut report = Report::new(vec!["n", "p_n"], (0, 1));
    for (i, &p) in w.p()[..=n].iter().enumerate() {
        report.push(vec![Cell::Int(i as u64), Cell::Float(p)]);
    }
    Ok(report)
}

pub fn voronoi(
    d: &str,
    a_spec: &str,
    n_sweep: &[usize],
    tail_mult: usize,
    ctx: &Ctx,
) -> Result<Report> {
    let max_n = n_sweep.iter().copied().max().unwrap_or(0).max(1);
    let order = required_order(max_n).max(tail_mult * max_n);
    let w = families::weight_spec(d, order, ctx.seed)?;
    let a = families::coeff_series(a_spec, order)?;
    let mut report = Report::new(
        vec![
            "n",
            "voronoi_mean",
            "g_at_point",
            "correction",
            "lhs",
            "rhs_sum1",
            "rhs_sum2",
            "ratio",
        ],
        (0, 7),
    );
    for &n in n_sweep {
        let r = w.remainder_report(&a, n, tail_mult * n)?;
        report.push(vec![
            Cell::Int(n as u64),
            Cell::Float(r.voronoi_mean),
            Cell::Float(r.g_at_point),
            Cell::Float(r.correction),
            Cell::Float(r.lhs),
            Cell::Float(r.rhs_sum1),
            Cell::Float(r.rhs_sum2),
            Cell::Float(r.ratio),
        ]);
    }
    Ok(report)
}

pub fn tauber(d: &str, a_spec: &str, n_sweep: &[usize], ctx: &Ctx) -> Result<Report> {
    let max_n = n_sweep.iter().copied().max().unwrap_or(0).max(1);
    let w = families::weight_spec(d, max_n, ctx.seed)?;
    let a = families::coeff_series(a_spec, max_n)?;
    let values: Vec<f64> = w.tauber_trajectory(&a, n_sweep)?;
    let mut report = Report::new(vec!["n", "s_over_np"], (0, 1));
    for (&n, v) in n_sweep.iter().zip(values) {
        report.push(vec![Cell::Int(n as u64), Cell::Float(v)]);
    }
    Ok(report)
}

pub fn mean(d: &str, f_spec: &str, n_sweep: &[usize], u: f64, ctx: &Ctx) -> Result<Report> {
    let max_n = n_sweep.iter().copied().max().unwrap_or(0).max(1);
    let w = families::weight_spec(d, max_n, ctx.seed)?;
    let mut report = Report::new(
        vec![
            "n",
            "mean_re",
            "mean_im",
            "delta_n",
            "delta_rhs",
            "delta_ratio",
            "eu_lhs",
            "eu_majorant",
            "eu_ratio",
        ],
        (0, 5),
    );
    for &n in n_sweep {
        let f = families::mult_family(f_spec, n)?;
        let m = mean_mult_gf(&f, &w)?;
        let delta = clt::delta_bound_report(&f, &w)?;
        let eu = clt::eu_bound_report(&f, &w, u)?;
        report.push(vec![
            Cell::Int(n as u64),
            Cell::Float(m.re),
            Cell::Float(m.im),
            Cell::Float(delta.delta_n),
            Cell::Float(delta.rhs),
            Cell::Float(delta.ratio),
            Cell::Float(eu.lhs),
            Cell::Float(eu.majorant),
            Cell::Float(eu.ratio),
        ]);
    }
    Ok(report)
}

pub fn dist(d: &str, n: usize, hhat: &str, ctx: &Ctx) -> Result<Report> {
    let w = families::weight_spec(d, n.max(1), ctx.seed)?;
    let h = families::additive_shape(hhat, n)?;
    let table = additive_dist_guarded(&h, &w, ctx.override_guard)?;
    let mut report = Report::new(vec!["value", "prob"], (0, 1));
    for &(v, p) in table.atoms() {
        report.push(vec![Cell::Float(v), Cell::Float(p)]);
    }
    Ok(report)
}

pub fn clt_sweep(d: &str, hhat: &str, n_sweep: &[usize], p: PNorm, ctx: &Ctx) -> Result<Report> {
    let mut report = Report::new(
        vec![
            "n",
            "gap",
            "budget",
            "ratio",
            "a_n",
            "c_n",
            "l_n3",
            "l_np",
            "l_n2_prime",
        ],
        (0, 1),
    );
    for &n in n_sweep {
        let w = families::weight_spec(d, n.max(1), ctx.seed)?;
        if !clt::gap_p_hypothesis(p, &w) {
            eprintln!(
                "norlund: warning: p = {p} violates the gap hypothesis p > max(2, 1/{}); computing anyway",
                w.d_minus()
            );
        }
        let h = clt::normalize_additive(&families::additive_shape(hhat, n)?, &w)?;
        let stats = clt::stats_bundle(&h, &w, p)?;
        let gap = clt::corrected_gap(&h, &w, p)?;
        report.push(vec![
            Cell::Int(n as u64),
            Cell::Float(gap.gap),
            Cell::Float(gap.budget),
            Cell::Float(gap.ratio),
            Cell::Float(stats.a_n),
            Cell::Float(stats.c_n),
            Cell::Float(stats.l_n3),
            Cell::Float(stats.l_np),
            Cell::Float(stats.l_n2_prime),
        ]);
    }
    Ok(report)
}

pub fn sample(d: &str, n: usize, count: usize, ctx: &Ctx) -> Result<Report> {
    let w = families::weight_spec(d, n.max(1), ctx.seed)?;
    let samples = sample_cycle_types(&w, n, ctx.seed, count)?;
    let mut report = Report::new(vec!["sample", "cycles", "type", "type_count"], (0, 1));
    for (i, t) in samples.iter().enumerate() {
        let count_cell = match cycle_type_count_exact(t) {
            Some(c) => Cell::Count(c),
            None => Cell::Empty,
        };
        report.push(vec![
            Cell::Int(i as u64),
            Cell::Int(t.cycle_count() as u64),
            Cell::Text(t.to_compact_string()),
            count_cell,
        ]);
    }
    Ok(report)
}

pub fn check(suite: &str, nmax: usize, ctx: &Ctx) -> Result<Report> {
    match suite {
        "voronoi" => check_voronoi(nmax),
        "goncharov" => check_goncharov(nmax),
        "inequalities" => check_inequalities(ctx),
        "clt" => check_clt(nmax),
        _ => Err(norlund_core::Error::Argument(format!(
            "unknown suite '{suite}' (expected voronoi, goncharov, inequalities, clt)"
        ))),
    }
}

/// Remainder ratios over the standard weight and coefficient families.
fn check_voronoi(nmax: usize) -> Result<Report> {
    let sweep = families::standard_n_sweep(nmax);
    let max_n = sweep.iter().copied().max().unwrap_or(16);
    let order = required_order(max_n);
    let weights = families::standard_d_specs(order)?;
    let coeffs = families::standard_coeff_families(order);
    let mut report = Report::new(vec!["d", "a", "n", "ratio"], (2, 3));
    for (d_label, w) in &weights {
        for (a_label, a) in &coeffs {
            for &n in &sweep {
                let r = w.remainder_report(a, n, 8 * n)?;
                report.push(vec![
                    Cell::Text(d_label.clone()),
                    Cell::Text(a_label.clone()),
                    Cell::Int(n as u64),
                    Cell::Float(r.ratio),
                ]);
            }
        }
    }
    Ok(report)
}

/// Kolmogorov distance of the standardized exact cycle-count law to the
/// normal cdf, for flat weights at n in {50, 200, 800} (capped by nmax).
fn check_goncharov(nmax: usize) -> Result<Report> {
    let mut report = Report::new(vec!["n", "kolmogorov"], (0, 1));
    for n in [50usize, 200, 800] {
        if n > nmax {
            continue;
        }
        let law = ewens_cycle_count_law(1.0, n)?;
        let mean = law.mean();
        let sd = law.variance().sqrt();
        let standardized = law.map_values(|v| (v - mean) / sd)?;
        let ks = standardized.sup_gap_to(clt::normal_cdf);
        report.push(vec![Cell::Int(n as u64), Cell::Float(ks)]);
    }
    Ok(report)
}

/// Sampled exact-inequality suites; one row per check with pass counts.
fn check_inequalities(ctx: &Ctx) -> Result<Report> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut report = Report::new(vec!["check", "instances", "passes"], (1, 2));

    let order = required_order(200);
    let mut passes = 0u64;
    let instances = 100u64;
    for s in 0..instances {
        let w = WeightSpec::random_in(0.5, 2.5, order, ctx.seed.wrapping_add(s))?;
        let n = rng.gen_range(1..=200usize);
        let m = rng.gen_range(n..=200usize);
        if w.ratio_bounds_check(m, n)?.pass {
            passes += 1;
        }
    }
    report.push(vec![
        Cell::Text("ratio_bounds".into()),
        Cell::Int(instances),
        Cell::Int(passes),
    ]);

    let mut passes = 0u64;
    for s in 0..instances {
        let w = WeightSpec::random_in(0.5, 2.5, 1200, ctx.seed.wrapping_add(1000 + s))?;
        let n = rng.gen_range((2.0 * w.d_plus()).ceil() as usize..=60);
        let b = Series::from_coeffs(w.p().to_vec())?;
        if lower_ratio_check(&b, w.d_plus(), n)?.pass {
            passes += 1;
        }
    }
    report.push(vec![
        Cell::Text("partial_sum_floor".into()),
        Cell::Int(instances),
        Cell::Int(passes),
    ]);

    let mut passes = 0u64;
    for s in 0..instances {
        let w = WeightSpec::random_in(0.5, 2.5, 40, ctx.seed.wrapping_add(2000 + s))?;
        let j = rng.gen_range(1..=500usize);
        let got = w.v_coeff(0, j)?;
        if (got - 1.0 / j as f64).abs() <= 1e-9 / j as f64 {
            passes += 1;
        }
    }
    report.push(vec![
        Cell::Text("v_coeff_base".into()),
        Cell::Int(instances),
        Cell::Int(passes),
    ]);

    Ok(report)
}

/// Corrected-gap reports over the declared family, capped by nmax.
fn check_clt(nmax: usize) -> Result<Report> {
    let mut report = Report::new(
        vec!["d", "hhat", "n", "p", "gap", "budget", "ratio"],
        (2, 4),
    );
    for &d in &[0.7f64, 1.0, 2.0] {
        for shape in ["flat", "decay:0.1", "sparse"] {
            for &n in &[20usize, 40, 60] {
                if n > nmax || n > permstat::PARTITION_GUARD {
                    continue;
                }
                let w = WeightSpec::constant(d, n)?;
                let h = clt::normalize_additive(&families::additive_shape(shape, n)?, &w)?;
                for p in [PNorm::Finite(4.0), PNorm::Infinity] {
                    let r = clt::corrected_gap(&h, &w, p)?;
                    report.push(vec![
                        Cell::Text(format!("constant:{d}")),
                        Cell::Text(shape.to_string()),
                        Cell::Int(n as u64),
                        Cell::Text(p.to_string()),
                        Cell::Float(r.gap),
                        Cell::Float(r.budget),
                        Cell::Float(r.ratio),
                    ]);
                }
            }
        }
    }
    Ok(report)
}
