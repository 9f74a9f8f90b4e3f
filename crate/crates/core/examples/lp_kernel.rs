//! The dense simplex solver and the pseudo-inverse used by the closed forms.

use fitzrep::lpkernel::{pseudo_inverse_apply, solve_lp, LinearProgram, Matrix};
use fitzrep::vector;

fn main() -> fitzrep::Result<()> {
    // min x + 2y  s.t.  x + y ≥ 1,  x − y ≤ 0.5,  x, y ≥ 0
    let mut lp = LinearProgram::new(2);
    lp.set_objective(vec![1.0, 2.0])?;
    lp.add_ge(vec![1.0, 1.0], 1.0)?;
    lp.add_le(vec![1.0, -1.0], 0.5)?;
    let sol = solve_lp(&lp);
    println!("{:?} at {:?}, value {}", sol.status, sol.point, sol.value);

    let s = Matrix::from_diagonal(&vector(&[1.0, 0.0]));
    for v in [vector(&[3.0, 0.0]), vector(&[3.0, 1.0])] {
        let (in_range, w) = pseudo_inverse_apply(&s, &v)?;
        println!("S⁺ {:?}: in range {in_range}, w = {:?}", v.as_slice(), w.as_slice());
    }
    Ok(())
}
