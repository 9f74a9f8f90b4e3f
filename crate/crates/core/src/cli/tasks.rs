//! Runs one task record against the resolved problem.

use std::path::Path;

use crate::calculus::{
    chain_representative_check, convex_graph_chain_check, infconv2_value, precompose, skew_shift_identity_check,
    sum_operator, DiagonalMap,
};
use crate::error::{check_dim, Error, Result};
use crate::operators::{
    discretize_graph, is_monotone_finite, maximality_probe, BoxProbe, FiniteGraph, Halfspaces, LinearMap,
    OperatorRep, DEFAULT_TOL,
};
use crate::pairing::{pairing_p, PairedPoint, Vector};
use crate::qualification::{
    domain_invariance_check, face_samples, interiority_checks, linear_closedness_check, ncone_chain_check,
    ncone_sum_check, qualification_chain, qualification_sum, difference_map_equivalence, ConvexSetRep,
};
use crate::report::{CheckReport, Verdict, Witness};
use crate::representatives::{
    extension_from_fitzpatrick, fitzpatrick_value, maximality_certificate, ni_probe, representability_probe,
    RepFunction,
};

use super::spec::{Resolved, TaskSpec, Verb};
use super::surface::{sample_surface, SurfaceSource};

pub(crate) struct TaskContext<'a> {
    pub resolved: &'a Resolved,
    pub out_dir: &'a Path,
    pub seed: u64,
    pub tol: Option<f64>,
}

pub(crate) struct TaskOutcome {
    pub report: CheckReport,
    pub output: Option<String>,
}

impl TaskContext<'_> {
    fn op(&self, t: &TaskSpec, i: usize) -> &OperatorRep {
        &self.resolved.operators[&t.operands[i]]
    }

    fn map(&self, t: &TaskSpec, i: usize) -> &LinearMap {
        &self.resolved.maps[&t.operands[i]]
    }

    fn probe(&self, t: &TaskSpec) -> Result<&BoxProbe> {
        let name = t
            .probe
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("`{}` needs a probe", t.verb.name())))?;
        Ok(&self.resolved.probes[name])
    }

    fn tol(&self, t: &TaskSpec) -> f64 {
        self.tol
            .or_else(|| t.probe.as_ref().map(|p| self.resolved.probes[p].tol()))
            .unwrap_or(DEFAULT_TOL)
    }

    /// `x` samples given in the task, or else the `x` part of its probe grid.
    fn x_samples(&self, t: &TaskSpec, n: usize) -> Result<Option<Vec<Vector>>> {
        if !t.samples.is_empty() {
            return t
                .samples
                .iter()
                .map(|s| {
                    check_dim(n, s.len())?;
                    Ok(Vector::from_column_slice(s))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some);
        }
        Ok(match &t.probe {
            Some(_) => Some(
                self.probe(t)?
                    .x_part()?
                    .points()
                    .into_iter()
                    .map(|p| Vector::from_vec(p))
                    .collect(),
            ),
            None => None,
        })
    }

    pub fn run(&self, t: &TaskSpec, file_stem: &str) -> Result<TaskOutcome> {
        let plain = |report| Ok(TaskOutcome { report, output: None });
        match t.verb {
            Verb::Monotone => plain(self.monotone(t)?),
            Verb::Ni => plain(ni_probe(self.op(t, 0), self.probe(t)?)?),
            Verb::Representable => plain(representability_probe(self.op(t, 0), self.probe(t)?)?),
            Verb::Maximal => plain(maximality_certificate(self.op(t, 0), self.probe(t)?)?),
            Verb::Extension => plain(self.extension(t)?),
            Verb::Sum => {
                let (a, b) = (self.op(t, 0), self.op(t, 1));
                let qual = qualification_sum(a, b)?;
                let s = sum_operator(a.clone(), b.clone())?;
                plain(maximality_probe(&s, self.probe(t)?)?.with_details(vec![qual]))
            }
            Verb::Compose => {
                let (l, m) = (self.map(t, 0), self.op(t, 1));
                let qual = qualification_chain(l, m)?;
                let c = precompose(l.clone(), m.clone())?;
                plain(maximality_probe(&c, self.probe(t)?)?.with_details(vec![qual]))
            }
            Verb::ChainRepresentative => plain(self.chain_representative(t)?),
            Verb::Infconv2 => plain(self.infconv2(t)?),
            Verb::SkewIdentity => {
                let OperatorRep::SkewLinear(b) = self.op(t, 1) else {
                    return Err(Error::InvalidInput("second operand must be a skew map".into()));
                };
                plain(skew_shift_identity_check(self.op(t, 0), b, self.probe(t)?)?)
            }
            Verb::ChainIdentity => plain(convex_graph_chain_check(self.map(t, 0), self.op(t, 1), self.probe(t)?)?),
            Verb::QualSum => plain(qualification_sum(self.op(t, 0), self.op(t, 1))?),
            Verb::QualChain => plain(qualification_chain(self.map(t, 0), self.op(t, 1))?),
            Verb::Interiority => {
                let family = t.family.expect("checked at resolution").into();
                let first = &t.operands[0];
                let m = self.op(t, 1);
                plain(match self.resolved.maps.get(first) {
                    Some(l) => interiority_checks(m, m, Some(l), family)?,
                    None => interiority_checks(self.op(t, 0), m, None, family)?,
                })
            }
            Verb::NconeSum => {
                let (ca, cb) = (cone_set(self.op(t, 0))?, cone_set(self.op(t, 1))?);
                let samples = match self.x_samples(t, ca.dim())? {
                    Some(s) => s,
                    None => face_samples(&ca.intersect(cb)?)?,
                };
                plain(ncone_sum_check(ca, cb, &samples)?)
            }
            Verb::NconeChain => {
                let (l, cm) = (self.map(t, 0), cone_set(self.op(t, 1))?);
                let samples = match self.x_samples(t, l.input_dim())? {
                    Some(s) => s,
                    None => face_samples(&cm.preimage(l.matrix())?)?,
                };
                plain(ncone_chain_check(l, cm, &samples)?)
            }
            Verb::DomainInvariance => {
                let m = self.op(t, 0);
                let samples = self
                    .x_samples(t, m.dim())?
                    .ok_or_else(|| Error::InvalidInput("domain-invariance needs samples or a probe".into()))?;
                let probe = t.probe.as_ref().map(|p| &self.resolved.probes[p]);
                let probe = probe.filter(|p| p.z_dim().ok() == Some(m.dim()));
                plain(domain_invariance_check(m, &samples, probe, self.seed)?)
            }
            Verb::DiffMap => {
                let u = ConvexSetRep::from_halfspaces(cone_set(self.op(t, 0))?)?;
                let v = ConvexSetRep::from_halfspaces(cone_set(self.op(t, 1))?)?;
                plain(difference_map_equivalence(&DiagonalMap::new(u.dim())?, &u, &v)?)
            }
            Verb::LinearClosedness => plain(linear_closedness_check(self.op(t, 0), self.op(t, 1))?),
            Verb::SampleSurface => {
                let probe = self.probe(t)?;
                let file = format!("{file_stem}.csv");
                let s = sample_surface(SurfaceSource::Operator(self.op(t, 0)), probe, &self.out_dir.join(&file))?;
                let report = CheckReport::new(Verdict::Holds, self.tol(t))
                    .with_resolution(probe.resolution())
                    .with_extreme("rows", s.rows as f64)
                    .with_extreme("min_h_minus_p", s.min_h_minus_p)
                    .with_note(format!("wrote {file}"));
                Ok(TaskOutcome { report, output: Some(file) })
            }
        }
    }

    fn monotone(&self, t: &TaskSpec) -> Result<CheckReport> {
        let tol = self.tol(t);
        match self.op(t, 0) {
            OperatorRep::FiniteGraph(g) => Ok(is_monotone_finite(g, tol)),
            op => {
                let probe = self.probe(t)?;
                let g = discretize_graph(op, probe)?;
                let mut r = is_monotone_finite(&g, tol).with_resolution(probe.resolution());
                if r.verdict == Verdict::Holds {
                    r.verdict = Verdict::HoldsAtResolution;
                }
                Ok(r)
            }
        }
    }

    fn extension(&self, t: &TaskSpec) -> Result<CheckReport> {
        let probe = self.probe(t)?;
        let g = match self.op(t, 0) {
            OperatorRep::FiniteGraph(g) => g.clone(),
            op => discretize_graph(op, probe)?,
        };
        let ext = extension_from_fitzpatrick(&g, probe)?;
        let mut r = is_monotone_finite(&ext, self.tol(t)).with_resolution(probe.resolution());
        if r.verdict == Verdict::Holds {
            r.verdict = Verdict::HoldsAtResolution;
        }
        Ok(r
            .with_extreme("input_points", g.len() as f64)
            .with_extreme("output_points", ext.len() as f64)
            .with_note("monotonicity of the extended graph"))
    }

    fn chain_representative(&self, t: &TaskSpec) -> Result<CheckReport> {
        let (l, m) = (self.map(t, 0), self.op(t, 1));
        let g: FiniteGraph = match m {
            OperatorRep::FiniteGraph(g) => g.clone(),
            op => {
                let name = t
                    .inner_probe
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("a non-finite inner operator needs `inner_probe`".into()))?;
                discretize_graph(op, &self.resolved.probes[name])?
            }
        };
        chain_representative_check(l, &g, self.probe(t)?)
    }

    /// `h_A □₂ h_B ≥ max(p, h_{A+B})` at the samples.
    fn infconv2(&self, t: &TaskSpec) -> Result<CheckReport> {
        let (a, b) = (self.op(t, 0), self.op(t, 1));
        let n = a.dim();
        check_dim(n, b.dim())?;
        let fallback = BoxProbe::default_for(n);
        let probe = match &t.probe {
            Some(p) => &self.resolved.probes[p],
            None => &fallback,
        };
        let points: Vec<Vec<f64>> = if t.samples.is_empty() {
            if t.probe.is_none() {
                return Err(Error::InvalidInput("infconv2 needs samples or a probe".into()));
            }
            probe.points()
        } else {
            t.samples.clone()
        };
        let (ha, hb) = (rep_function(a, probe)?, rep_function(b, probe)?);
        let sum = sum_operator(a.clone(), b.clone())?;
        let tol = self.tol(t);
        let mut min_gap_p = f64::INFINITY;
        let mut min_gap_sum = f64::INFINITY;
        let mut all_exact = true;
        for z in &points {
            check_dim(2 * n, z.len())?;
            let zp = PairedPoint::from_concat(z)?;
            let v = infconv2_value(&ha, &hb, zp.x(), zp.xstar())?;
            all_exact &= v.exact;
            let v = v.to_f64();
            if v == f64::INFINITY {
                continue;
            }
            let hs = fitzpatrick_value(&sum, &zp, probe)?.to_f64();
            let gap_p = v - pairing_p(&zp);
            let gap_sum = if hs == f64::NEG_INFINITY { f64::INFINITY } else { v - hs };
            min_gap_p = min_gap_p.min(gap_p);
            min_gap_sum = min_gap_sum.min(gap_sum);
            let scale = 1.0 + v.abs();
            if gap_p < -tol * scale || gap_sum < -tol * scale {
                let verdict = if v.is_finite() && all_exact { Verdict::Fails } else { Verdict::PossibleFail };
                return Ok(CheckReport::new(verdict, tol)
                    .with_witness(Witness::Point { point: zp })
                    .with_extreme("min_value_minus_p", min_gap_p)
                    .with_extreme("min_value_minus_sum", min_gap_sum));
            }
        }
        Ok(CheckReport::new(Verdict::HoldsAtResolution, tol)
            .with_extreme("samples", points.len() as f64)
            .with_extreme("min_value_minus_p", min_gap_p)
            .with_extreme("min_value_minus_sum", min_gap_sum))
    }
}

fn rep_function(op: &OperatorRep, probe: &BoxProbe) -> Result<RepFunction> {
    if let OperatorRep::FiniteGraph(g) = op {
        return RepFunction::fitz_finite(g.clone());
    }
    if let Some((m, q)) = op.as_affine() {
        return RepFunction::fitz_affine(m, q);
    }
    Ok(RepFunction::FitzOperator { op: op.clone(), probe: probe.clone() })
}

fn cone_set(op: &OperatorRep) -> Result<&Halfspaces> {
    match op {
        OperatorRep::NormalCone(c) => Ok(c),
        _ => Err(Error::InvalidInput(format!("expected a normal-cone operator, got {}", op.kind_name()))),
    }
}
