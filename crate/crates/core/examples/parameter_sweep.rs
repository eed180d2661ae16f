//! Sweeps amplitude and dispersion in parallel and tabulates detection times
//! against the predicted bounds, as `dgh sweep` does.

use std::path::Path;

use dghlab::cli::{run_sweep, trigger_name, RunConfig, SweepConfig};

fn main() -> dghlab::Result<()> {
    let cfg = RunConfig {
        sweep: SweepConfig {
            amplitudes: Some(vec![0.5, 1.0, 2.0]),
            gamma: Some(vec![0.0, 0.5, 1.0]),
            c0: None,
        },
        ..RunConfig::default()
    };
    let rows = run_sweep(&cfg, Path::new("."))?;
    println!(
        "{:>5} {:>6} {:>10} {:>10} {:>16}",
        "a", "gamma", "bound", "t_detect", "trigger"
    );
    for r in rows {
        let bound = r.verdict.and_then(|v| v.time_bound).unwrap_or(f64::NAN);
        match (r.report, r.error) {
            (Some(rep), _) => println!(
                "{:>5} {:>6} {bound:>10.4} {:>10.4} {:>16}",
                r.cell.amplitude,
                r.cell.gamma,
                rep.t_detect.unwrap_or(f64::NAN),
                trigger_name(rep.trigger)
            ),
            (None, e) => println!(
                "{:>5} {:>6} error: {}",
                r.cell.amplitude,
                r.cell.gamma,
                e.unwrap_or_default()
            ),
        }
    }
    Ok(())
}
