use incompat_core::jointmeas::Configuration;
use incompat_core::observables::{sytet, sytri, mub};
use incompat_core::sdp::{assemble_threshold_sdp, solve, DEFAULT_TOL};

fn main() {
    for (set, cfg, expect) in [
        (sytri(), Configuration::Parallel(2), 2.0 * 2f64.sqrt() / 3.0),
        (sytri(), Configuration::AntiParallel, 2.0 * 2f64.sqrt() / 3.0),
        (sytri(), Configuration::Parallel(3), 1.0),
        (sytet(), Configuration::AntiParallel, 1.0),
        (mub(), Configuration::AntiParallel, 1.0),
        (sytet(), Configuration::Single, 1.0 / 3f64.sqrt()),
        (sytet(), Configuration::Parallel(3), 3.0 / (3f64.sqrt() + 2f64.sqrt())),
        (sytet(), Configuration::Parallel(4), 1.0),
    ] {
        let t0 = std::time::Instant::now();
        let model = assemble_threshold_sdp(&set, cfg).unwrap();
        let rep = solve(&model, DEFAULT_TOL).unwrap();
        println!(
            "{:6} {:13} lambda*={:.9} expect={:.9} err={:+.2e} status={} iters={} {:.0} ms",
            set.label(), cfg.to_string(), rep.lambda_star, expect, rep.lambda_star - expect,
            rep.status, rep.iterations, t0.elapsed().as_secs_f64() * 1e3
        );
    }
}
