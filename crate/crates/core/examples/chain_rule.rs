//! The chain representative for `T = L*ML` with `L x = (x, x)` and `M` a
//! sampled identity on `R²`: its contact set with `p` is the graph of `2·I`.

use fitzrep::calculus::{chain_representative_check, chain_representative_value, convex_graph_chain_check};
use fitzrep::operators::{discretize_graph, BoxProbe, LinearMap, OperatorRep};
use fitzrep::vector;

fn main() -> fitzrep::Result<()> {
    let l = LinearMap::diagonal(1);
    let m = discretize_graph(&OperatorRep::identity(2), &BoxProbe::cube(4, 2.0, 0.5, 1e-9)?)?;
    let probe = BoxProbe::cube(2, 1.0, 0.25, 1e-9)?;

    for (x, xs) in [(0.5, 1.0), (0.5, 0.5), (-0.25, -0.5)] {
        let v = chain_representative_value(&l, &m, &vector(&[x]), &vector(&[xs]))?;
        println!("r({x}, {xs}) = {:?}  p = {}  status {:?}", v.value, x * xs, v.status);
    }
    println!("contact set vs graph: {}", chain_representative_check(&l, &m, &probe)?.verdict);
    let affine = convex_graph_chain_check(&l, &OperatorRep::identity(2), &probe)?;
    println!("affine chain identity: {}", affine.verdict);
    Ok(())
}
