//! CSV dumps of representative functions over a probe grid.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{check_dim, Result};
use crate::operators::{BoxProbe, OperatorRep};
use crate::pairing::{pairing_p, PairedPoint};
use crate::representatives::{fitzpatrick_value, penot_value, RepFunction};

/// What to tabulate.
#[derive(Debug, Clone, Copy)]
pub enum SurfaceSource<'a> {
    /// `h_A`, plus `φ_A` when `A` is a finite graph.
    Operator(&'a OperatorRep),
    Function(&'a RepFunction),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSummary {
    pub rows: usize,
    /// Smallest finite `h − p`; `+∞` when no row has a finite value.
    pub min_h_minus_p: f64,
}

/// `{:.16e}` with `inf`/`-inf` spelled out.
pub(crate) fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes one row per grid point, in grid order, with columns
/// `x1..xn, xs1..xsn, p, h, [phi,] h_minus_p`.
pub fn sample_surface(src: SurfaceSource<'_>, probe: &BoxProbe, out: &Path) -> Result<SurfaceSummary> {
    let n = probe.z_dim()?;
    let penot_graph = match src {
        SurfaceSource::Operator(op) => {
            check_dim(op.dim(), n)?;
            match op {
                OperatorRep::FiniteGraph(g) => Some(g),
                _ => None,
            }
        }
        SurfaceSource::Function(f) => {
            check_dim(f.dim(), n)?;
            None
        }
    };
    let mut w = BufWriter::new(File::create(out)?);
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("xs{i}"))).collect();
    header.extend(["p".into(), "h".into()]);
    if penot_graph.is_some() {
        header.push("phi".into());
    }
    header.push("h_minus_p".into());
    writeln!(w, "{}", header.join(","))?;

    let mut summary = SurfaceSummary { rows: 0, min_h_minus_p: f64::INFINITY };
    let mut failure = None;
    let mut line = String::new();
    probe.for_each_point(|z| {
        let row = (|| -> Result<()> {
            let zp = PairedPoint::from_concat(z)?;
            let p = pairing_p(&zp);
            let h = match src {
                SurfaceSource::Operator(op) => fitzpatrick_value(op, &zp, probe)?,
                SurfaceSource::Function(f) => f.value(&zp)?,
            }
            .to_f64();
            line.clear();
            for c in z {
                write!(line, "{},", num(*c)).expect("string write");
            }
            write!(line, "{},{}", num(p), num(h)).expect("string write");
            if let Some(g) = penot_graph {
                write!(line, ",{}", num(penot_value(g, &zp)?.to_f64())).expect("string write");
            }
            let gap = h - p;
            write!(line, ",{}", num(gap)).expect("string write");
            writeln!(w, "{line}")?;
            if gap.is_finite() {
                summary.min_h_minus_p = summary.min_h_minus_p.min(gap);
            }
            summary.rows += 1;
            Ok(())
        })();
        match row {
            Ok(()) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    w.flush()?;
    Ok(summary)
}
