//! Adding a skew linear map shifts the Fitzpatrick function:
//! `h_{A+B}(x, x*) = h_A(x, x* − Bx)`.

use fitzrep::calculus::{infconv2_value, skew_shift_identity_check, sum_operator};
use fitzrep::lpkernel::Matrix;
use fitzrep::operators::{maximality_probe, BoxProbe, OperatorRep, SkewOp};
use fitzrep::representatives::RepFunction;
use fitzrep::{vector, PairedPoint, Vector};

fn main() -> fitzrep::Result<()> {
    let b = SkewOp::rotation();
    let probe = BoxProbe::cube(4, 1.0, 0.5, 1e-9)?;

    for a in [OperatorRep::identity(2), OperatorRep::subdiff_l1(2)] {
        let r = skew_shift_identity_check(&a, &b, &probe)?;
        println!("{:<12} shift identity {} (max deviation {:.2e})", a.kind_name(), r.verdict, r.extremes["max_deviation"]);
        let s = sum_operator(a, OperatorRep::SkewLinear(b.clone()))?;
        println!("{:<12} maximality probe of A + B: {}", "", maximality_probe(&s, &probe)?.verdict);
    }

    let ha = RepFunction::fitz_affine(Matrix::identity(2, 2), Vector::zeros(2))?;
    let hb = RepFunction::fitz_affine(b.matrix().clone(), Vector::zeros(2))?;
    let (x, xs) = (vector(&[0.3, -0.7]), vector(&[0.2, 0.9]));
    let conv = infconv2_value(&ha, &hb, &x, &xs)?.to_f64();
    let shifted = ha.value(&PairedPoint::new(x.clone(), &xs - b.matrix() * &x)?)?.to_f64();
    println!("infimal convolution {conv:.15} vs shifted value {shifted:.15}");
    Ok(())
}
