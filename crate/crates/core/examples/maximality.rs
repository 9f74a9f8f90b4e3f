//! Maximality certificates: representable plus NI type. Maximal operators
//! pass; graphs with room for a monotone extension are refuted.

use fitzrep::operators::{BoxProbe, FiniteGraph, OperatorRep};
use fitzrep::representatives::maximality_certificate;
use fitzrep::{PairedPoint, Witness};

fn main() -> fitzrep::Result<()> {
    let probe = BoxProbe::cube(2, 2.0, 0.1, 1e-9)?;
    let two_point = FiniteGraph::new(
        1,
        vec![PairedPoint::from_slices(&[0.0], &[0.0])?, PairedPoint::from_slices(&[1.0], &[1.0])?],
    )?;
    let cases = [
        ("identity", OperatorRep::identity(1)),
        ("subdifferential of |t|", OperatorRep::subdiff_l1(1)),
        ("normal cone of [0, 1]", OperatorRep::normal_cone_box(&[0.0], &[1.0])?),
        ("two-point graph", OperatorRep::finite(two_point)),
    ];
    for (name, op) in &cases {
        let r = maximality_certificate(op, &probe)?;
        print!("{name:<26} {}", r.verdict);
        if let Some(Witness::Point { point }) = &r.witness {
            print!("  witness {point}");
        }
        println!();
    }
    Ok(())
}
