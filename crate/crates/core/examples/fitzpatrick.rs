//! Fitzpatrick and Penot functions of a finite monotone graph, and the
//! conjugacy between them.

use fitzrep::operators::{BoxProbe, FiniteGraph, OperatorRep};
use fitzrep::representatives::{conjugate_value, fitzpatrick_value, penot_value, RepFunction};
use fitzrep::{pairing_p, PairedPoint};

fn main() -> fitzrep::Result<()> {
    let g = FiniteGraph::new(
        1,
        vec![PairedPoint::from_slices(&[0.0], &[0.0])?, PairedPoint::from_slices(&[1.0], &[1.0])?],
    )?;
    let op = OperatorRep::finite(g.clone());
    let probe = BoxProbe::new(vec![0.0, 0.0], vec![1.0, 1.0], 0.5, 1e-9)?;
    let phi = RepFunction::penot(g.clone())?;

    println!("{:>6} {:>6} {:>8} {:>8} {:>8} {:>8}", "x", "x*", "p", "h", "phi", "phi*");
    for z in probe.points() {
        let zp = PairedPoint::from_concat(&z)?;
        let h = fitzpatrick_value(&op, &zp, &probe)?.to_f64();
        let f = penot_value(&g, &zp)?.to_f64();
        let fstar = conjugate_value(&phi, &zp, &probe)?.to_f64();
        println!("{:>6} {:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4}", z[0], z[1], pairing_p(&zp), h, f, fstar);
    }
    Ok(())
}
