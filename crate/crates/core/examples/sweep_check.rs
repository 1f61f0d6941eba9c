use incompat_core::sdp::{default_theta_grid, reversal_regions, sweep_theta, DEFAULT_TOL};

fn main() {
    let t0 = std::time::Instant::now();
    let grid = default_theta_grid();
    let table = sweep_theta(&grid, DEFAULT_TOL);
    println!("sweep of {} points in {:.1} s", grid.len(), t0.elapsed().as_secs_f64());
    let mid = &table.rows[99]; // theta = pi/2
    println!("pi/2 row: l2 = {:.9}, l11 = {:.9}, diff = {:.2e}", mid.lambda_parallel2,
        mid.lambda_antiparallel11, (mid.lambda_parallel2 - mid.lambda_antiparallel11).abs());
    let mub_theta = (1.0 / 3f64.sqrt()).acos();
    let regions = reversal_regions(&table, mub_theta, DEFAULT_TOL).unwrap();
    println!("ref ({:.6}): l2_ref = {:.9}, l11_ref = {:.9}", regions.theta_ref, regions.lambda2_ref, regions.lambda11_ref);
    println!("reversal intervals: {:?}", regions.intervals.iter().map(|iv| (format!("{:.4}", iv[0]), format!("{:.4}", iv[1]))).collect::<Vec<_>>());
    let left = regions.intervals.iter().any(|iv| iv[1] < mub_theta);
    let right = regions.intervals.iter().any(|iv| iv[0] > mub_theta);
    println!("regions on both sides of ref: left={left} right={right}");
    // a few sample rows
    for idx in [0, 30, 60, 99, 150, 198] {
        let r = &table.rows[idx];
        println!("theta {:.4}: l2 {:.9} ({}), l11 {:.9} ({})", r.theta, r.lambda_parallel2, r.status2, r.lambda_antiparallel11, r.status11);
    }
}
