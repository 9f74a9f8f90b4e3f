//! Brute-force oracles against the exact paths on a random monotone graph.

use fitzrep::operators::{BoxProbe, FiniteGraph, OperatorRep};
use fitzrep::oracle::{dot_of, grid_extremum, p_of, simplex_grid_convexhull_value, Mode};
use fitzrep::representatives::{fitzpatrick_value, penot_value};
use fitzrep::PairedPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fitzrep::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // sorted abscissae with sorted values: monotone in one dimension
    let mut xs: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut ys: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let pts: Vec<PairedPoint> = xs.iter().zip(&ys).map(|(x, y)| PairedPoint::from_slices(&[*x], &[*y])).collect::<Result<_, _>>()?;
    let g = FiniteGraph::new(1, pts.clone())?;
    let op = OperatorRep::finite(g.clone());
    let probe = BoxProbe::cube(2, 1.0, 0.5, 1e-9)?;
    let values: Vec<f64> = pts.iter().map(|a| p_of(&a.concat())).collect();

    let mids = pts.windows(2).map(|w| w[0].add(&w[1]).scale(0.5).concat());
    for z in probe.points().into_iter().step_by(6).chain(mids) {
        let zp = PairedPoint::from_concat(&z)?;
        let h = fitzpatrick_value(&op, &zp, &probe)?.to_f64();
        let graph_probe = BoxProbe::new(vec![0.0], vec![(pts.len() - 1) as f64], 1.0, 1e-9)?;
        let h_oracle = grid_extremum(
            |i| {
                let a = pts[i[0] as usize].concat();
                dot_of(&z, &a) - p_of(&a)
            },
            &graph_probe,
            Mode::Sup,
        );
        let phi = penot_value(&g, &zp)?.to_f64();
        let phi_oracle = simplex_grid_convexhull_value(&pts, &values, &zp, 16);
        println!("z = {zp}: h {h:.6} / {h_oracle:.6}   phi {phi:.6} / {phi_oracle:.6}");
    }
    Ok(())
}
