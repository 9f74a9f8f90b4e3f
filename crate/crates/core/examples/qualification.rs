//! Relative-interior qualification constraints on polyhedral domains.

use fitzrep::calculus::DiagonalMap;
use fitzrep::operators::{Halfspaces, OperatorRep};
use fitzrep::qualification::{
    difference_map_equivalence, interiority_checks, ncone_sum_check, qualification_sum, ConvexSetRep, Interiority,
};
use fitzrep::vector;

fn main() -> fitzrep::Result<()> {
    let a = OperatorRep::normal_cone_box(&[0.0], &[1.0])?;
    for (lo, hi) in [(0.5, 2.0), (1.0, 2.0)] {
        let b = OperatorRep::normal_cone_box(&[lo], &[hi])?;
        let q = qualification_sum(&a, &b)?;
        let g = interiority_checks(&a, &b, None, Interiority::Gamma)?;
        println!("D(A) = [0, 1], D(B) = [{lo}, {hi}]: relint {}  gamma {}", q.verdict, g.verdict);

        let (u, v) = (ConvexSetRep::interval(0.0, 1.0)?, ConvexSetRep::interval(lo, hi)?);
        let d = difference_map_equivalence(&DiagonalMap::new(1)?, &u, &v)?;
        println!("  difference-map forms agree: {}", d.verdict);

        let (ca, cb) = (Halfspaces::boxed(&[0.0], &[1.0])?, Halfspaces::boxed(&[lo], &[hi])?);
        println!("  normal cone of intersection at 1: {}", ncone_sum_check(&ca, &cb, &[vector(&[1.0])])?.verdict);
    }
    Ok(())
}
