use incompat_core::jointmeas::Configuration;
use incompat_core::observables::sytri;
use incompat_core::sdp::{assemble_threshold_sdp, solve, DEFAULT_TOL};

fn main() {
    let model = assemble_threshold_sdp(&sytri(), Configuration::Parallel(2)).unwrap();
    let rep = solve(&model, DEFAULT_TOL).unwrap();
    println!("lambda = {:.12}, iters = {}", rep.lambda_star, rep.iterations);
}
