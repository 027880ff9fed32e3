//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::time::Instant;

use gns_core::cli;
use gns_core::exponents::{validate, GnsProblem, LebesgueExponent};
use gns_core::feasible::sample_sigma;
use gns_core::optimizer::{equalizing_t0, minimize, objective, two_term_value, OptimizerConfig};
use gns_core::oracle::{
    check_gns, check_parabolic, default_young_widths, heat_l1_deriv_check, standard_parabolic_grid,
    young_extremizer_check, STANDARD_WIDTHS,
};
use gns_core::parabolic::{a_par, heat_kernel_norm, ParabolicParams};
use gns_core::quadrature::tanh_sinh_offsets;
use gns_core::specialfn::{
    bell_complete, bell_via_generating_function, beta_integral, heat_deriv_l1_bound,
    heat_deriv_partition_sum, min_product_power, BellInput,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn exp(p: f64) -> LebesgueExponent {
    LebesgueExponent::new(p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn agmon() -> GnsProblem {
    GnsProblem { d: 1, s: 0.0, p: exp(f64::INFINITY), s1: 1.0, p1: exp(2.0), s2: 0.0, p2: exp(2.0) }
}

fn fractional() -> GnsProblem {
    GnsProblem { d: 1, s: 0.5, p: exp(4.0), s1: 1.0, p1: exp(2.0), s2: 0.0, p2: exp(2.0) }
}

fn closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    for p in [1.0, 2.0, f64::INFINITY] {
        for d in 1..=3 {
            let p = exp(p);
            let zero = a_par(&ParabolicParams { p, r: p, s: 0.0, d }).map_err(|e| e.to_string())?;
            let two = a_par(&ParabolicParams { p, r: p, s: 2.0, d }).map_err(|e| e.to_string())?;
            worst = worst.max((zero - 1.0).abs()).max((two - f64::from(d)).abs());
        }
    }
    for t in [0.1, 1.0, 10.0] {
        for d in 1..=3 {
            let n = heat_kernel_norm(t, exp(1.0), d).map_err(|e| e.to_string())?;
            worst = worst.max((n - 1.0).abs());
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e} > 1e-12"))
    }
}

fn grid_min_product_power(alpha: f64, beta: f64) -> f64 {
    let ln_f = |l: f64| -alpha * l.ln() - beta * (1.0 - l).ln();
    let n = 2000;
    let mut best = 1;
    for i in 1..n {
        if ln_f(i as f64 / n as f64) < ln_f(best as f64 / n as f64) {
            best = i;
        }
    }
    let (mut lo, mut hi) = ((best - 1) as f64 / n as f64, (best + 1) as f64 / n as f64);
    lo = lo.max(1e-300);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if ln_f(a) < ln_f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    ln_f(0.5 * (lo + hi)).exp()
}

fn product_power_and_beta() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_mpp = 0.0f64;
    for _ in 0..100 {
        let alpha = 5.0 * (1.0 - rng.random::<f64>());
        let beta = 5.0 * (1.0 - rng.random::<f64>());
        let v = min_product_power(alpha, beta).map_err(|e| e.to_string())?;
        worst_mpp = worst_mpp.max(rel(v, grid_min_product_power(alpha, beta)));
    }
    let mut worst_beta = 0.0f64;
    for _ in 0..20 {
        let alpha = rng.random_range(-1.0..0.9);
        let beta = 1.0 - alpha + rng.random_range(0.1..3.0);
        let v = beta_integral(alpha, beta).map_err(|e| e.to_string())?;
        // x = u/(1-u) maps the half-line onto (0,1).
        let q = tanh_sinh_offsets(
            |_, left, right| left.powf(-alpha) * right.powf(alpha + beta - 2.0),
            0.0,
            1.0,
            1e-13,
            12,
        );
        worst_beta = worst_beta.max(rel(v, q.value));
    }
    let msg = format!("min_product_power {worst_mpp:.2e}, beta_integral {worst_beta:.2e}");
    if worst_mpp <= 1e-8 && worst_beta <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn heat_derivative_chain() -> Outcome {
    let mut worst_bell = 0.0f64;
    for ell in 1..=12usize {
        for sigma in [0.3, 1.0, 4.0] {
            let x: Vec<f64> = (1..=ell).map(|j| sigma * (1..=j).map(|k| k as f64).product::<f64>()).collect();
            let a = bell_complete(&BellInput::new(x)).map_err(|e| e.to_string())?;
            let b = bell_via_generating_function(ell, sigma).map_err(|e| e.to_string())?;
            worst_bell = worst_bell.max(rel(a, b));
        }
    }
    let mut worst_sum = 0.0f64;
    for n in 0..=6 {
        for d in 1..=3 {
            let sum = heat_deriv_partition_sum(n, d).map_err(|e| e.to_string())?;
            worst_sum = worst_sum.max(rel(sum, heat_deriv_l1_bound(n, d)));
        }
    }
    let mut worst_ratio = 0.0f64;
    for n in 0..=4 {
        for d in 1..=3 {
            for t in [0.5, 1.0, 2.0] {
                let (measured, bound) = heat_l1_deriv_check(n, d, t).map_err(|e| e.to_string())?;
                worst_ratio = worst_ratio.max(measured / bound);
            }
        }
    }
    let msg = format!("bell {worst_bell:.2e}, partition sum {worst_sum:.2e}, max measured/bound {worst_ratio:.6}");
    if worst_bell <= 1e-10 && worst_sum <= 1e-9 && worst_ratio <= 1.0 + 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn young_optimality() -> Outcome {
    let widths = default_young_widths();
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, q, r, d) in [(2.0, 4.0 / 3.0, 4.0 / 3.0, 1), (3.0, 1.5, 1.5, 2)] {
        let (best, a_y) = young_extremizer_check(exp(p), exp(q), exp(r), d, &widths).map_err(|e| e.to_string())?;
        ok &= best >= a_y * (1.0 - 1e-3) && best <= a_y * (1.0 + 1e-6);
        parts.push(format!("d={d}: {best:.9} vs A_Y {a_y:.9}"));
    }
    let msg = parts.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn parabolic_sweep() -> Outcome {
    let grid = standard_parabolic_grid(&[1, 2, 3]);
    let report = check_parabolic(&grid, &STANDARD_WIDTHS).map_err(|e| e.to_string())?;
    let msg = format!(
        "{} rows, {} violations, worst slack {:.3e}",
        report.rows.len(),
        report.violations().len(),
        report.worst_slack()
    );
    if report.passed() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn gns_end_to_end() -> Outcome {
    let dilations: Vec<f64> = (-5..=5).map(|k| 2f64.powi(k)).collect();
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, problem) in [("agmon", agmon()), ("fractional", fractional())] {
        let cert = minimize(&problem, &OptimizerConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        cert.check().map_err(|e| format!("{name}: {e}"))?;
        ok &= cert.margins.ok;
        if name == "agmon" {
            ok &= cert.value >= 1.0;
        }
        let report = check_gns(&cert, &STANDARD_WIDTHS, &dilations).map_err(|e| format!("{name}: {e}"))?;
        let spread = report.dilation_spread.unwrap_or(f64::INFINITY);
        ok &= report.passed() && spread <= 1e-6;
        parts.push(format!(
            "{name}: value {:.6}, {} rows, slack {:.3}, spread {spread:.1e}",
            cert.value,
            report.rows.len(),
            report.worst_slack()
        ));
    }
    let msg = parts.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn objective_cross_check() -> Outcome {
    let swapped = {
        let a = agmon();
        GnsProblem { s1: a.s2, p1: a.p2, s2: a.s1, p2: a.p1, ..a }
    };
    let three_d = GnsProblem { d: 3, s: 1.0, p: exp(3.0), s1: 2.0, p1: exp(2.0), s2: 0.0, p2: exp(2.0) };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut count = 0;
    for problem in [agmon(), fractional(), swapped, three_d] {
        if !validate(&problem).admissible {
            return Err(format!("instance {problem:?} is not admissible"));
        }
        let points = sample_sigma(&problem, 100, 11).map_err(|e| e.to_string())?;
        if points.len() != 100 {
            return Err(format!("only {} feasible points drawn", points.len()));
        }
        for point in &points {
            let n1 = 10f64.powf(rng.random_range(-1.0..1.0));
            let n2 = 10f64.powf(rng.random_range(-1.0..1.0));
            let closed = objective(&problem, point).map_err(|e| e.to_string())?;
            let t0 = equalizing_t0(&problem, point, n1, n2).map_err(|e| e.to_string())?;
            let two = two_term_value(&problem, point, t0, n1, n2).map_err(|e| e.to_string())?;
            worst = worst.max(rel(two, closed));
            count += 1;
        }
    }
    let msg = format!("{count} points, max relative difference {worst:.2e}");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("cert{run}.json"));
        let args = [
            "gns-bounds", "bound", "--d", "1", "--s", "0.5", "--p", "4", "--s1", "1", "--p1", "2", "--s2", "0",
            "--p2", "2", "--seed", "17", "--json-out", path.to_str().unwrap(),
        ];
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run_with(args, &mut out, &mut err);
        if code != 0 {
            return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
        }
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    if bytes[0] == bytes[1] {
        Ok(format!("{} identical bytes", bytes[0].len()))
    } else {
        Err("certificates differ".into())
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form constants", closed_forms),
        ("product-power and beta integrals", product_power_and_beta),
        ("heat derivative L1 chain", heat_derivative_chain),
        ("Young optimality on Gaussians", young_optimality),
        ("parabolic smoothing sweep", parabolic_sweep),
        ("interpolation bound end to end", gns_end_to_end),
        ("objective vs two-term bound", objective_cross_check),
        ("certificate determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({msg}) [{secs:.1}s]", i + 1),
            Err(msg) => {
                println!("criterion {}: FAIL  {name} ({msg}) [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
