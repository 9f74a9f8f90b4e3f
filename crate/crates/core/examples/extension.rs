//! Recovering a maximal extension from the Fitzpatrick function: a sampled
//! identity with one grid point removed gets it back.

use fitzrep::operators::{discretize_graph, BoxProbe, OperatorRep};
use fitzrep::representatives::extension_from_fitzpatrick;
use fitzrep::PairedPoint;

fn main() -> fitzrep::Result<()> {
    let probe = BoxProbe::cube(2, 1.0, 0.05, 1e-9)?;
    let full = discretize_graph(&OperatorRep::identity(1), &probe)?;
    let hole = PairedPoint::from_slices(&[0.5], &[0.5])?;
    let punctured = full.without(&hole);
    let restored = extension_from_fitzpatrick(&punctured, &probe)?;

    println!("sampled identity: {} points", full.len());
    println!("punctured:        {} points", punctured.len());
    println!("restored:         {} points", restored.len());
    println!("hole recovered:   {}", restored.points().iter().any(|p| p.distance(&hole) < 1e-12));
    Ok(())
}
