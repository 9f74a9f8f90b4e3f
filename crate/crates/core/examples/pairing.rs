//! The duality pairing and the dual product on `Z = Rⁿ × Rⁿ`.

use fitzrep::{dual_product, pairing_p, PairedPoint};

fn main() -> fitzrep::Result<()> {
    let z = PairedPoint::from_slices(&[1.0, 2.0], &[3.0, -1.0])?;
    let w = PairedPoint::from_slices(&[0.5, 0.0], &[2.0, 1.0])?;

    println!("z = {z}, w = {w}");
    println!("p(z)    = {}", pairing_p(&z));
    println!("z . w   = {}", dual_product(&z, &w)?);
    println!("z . z   = {} (twice p(z))", dual_product(&z, &z)?);

    let lhs = pairing_p(&z.add(&w)) + pairing_p(&z.sub(&w));
    let rhs = 2.0 * (pairing_p(&z) + pairing_p(&w));
    println!("parallelogram: {lhs} = {rhs}");
    Ok(())
}
