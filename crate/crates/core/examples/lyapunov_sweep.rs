//! Lyapunov exponent of the sine-quadratic map against the three comparison
//! maps over a log-spaced parameter range.
//!
//!     cargo run --release --example lyapunov_sweep -- [points]

use chaoscrypt::maps::{le_sweep_grid, sweep_grid, MapKind, Spacing, SweepOptions};

fn main() -> chaoscrypt::Result<()> {
    let points = std::env::args()
        .nth(1)
        .map(|p| p.parse().expect("points"))
        .unwrap_or(25);
    let opts = SweepOptions::default();
    let grid = sweep_grid(0.1, 1e4, points, Spacing::Log)?;

    let columns: Vec<_> = MapKind::ALL
        .iter()
        .map(|&k| le_sweep_grid(k, &grid, 0.7, opts))
        .collect();
    print!("{:>12}", "param");
    for k in MapKind::ALL {
        print!("{:>12}", k.name());
    }
    println!();
    for (i, p) in grid.iter().enumerate() {
        print!("{p:>12.4}");
        for col in &columns {
            match col[i].le {
                Some(le) => print!("{le:>12.4}"),
                None => print!("{:>12}", col[i].status.as_str()),
            }
        }
        println!();
    }

    let sqcm = &columns[0];
    let positive = sqcm
        .iter()
        .filter(|p| p.le.is_some_and(|le| le > 0.0))
        .count();
    println!(
        "\nsqcm: {positive} of {} points with a positive exponent",
        sqcm.len()
    );
    Ok(())
}
