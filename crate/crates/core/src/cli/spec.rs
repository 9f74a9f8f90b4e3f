//! Problem files: named operators, maps and probes plus an ordered task list.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::lpkernel::Matrix;
use crate::operators::{BoxProbe, FiniteGraph, Halfspaces, LinearMap, OperatorRep};
use crate::pairing::{PairedPoint, Vector};
use crate::qualification::Interiority;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub probes: BTreeMap<String, ProbeSpec>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorSpec {
    Finite {
        points: Vec<PairedPoint>,
    },
    Affine {
        m: Vec<Vec<f64>>,
        q: Option<Vec<f64>>,
    },
    Identity {
        dim: usize,
    },
    Skew {
        b: Vec<Vec<f64>>,
    },
    SubdiffPl {
        slopes: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    SubdiffL1 {
        dim: usize,
    },
    NormalCone {
        lo: Option<Vec<f64>>,
        hi: Option<Vec<f64>>,
        normals: Option<Vec<Vec<f64>>>,
        bounds: Option<Vec<f64>>,
    },
    Sum {
        of: Vec<String>,
    },
    Precomp {
        map: String,
        inner: String,
    },
    Product {
        of: Vec<String>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub lo: Option<Vec<f64>>,
    pub hi: Option<Vec<f64>>,
    /// Shorthand for the cube `[-radius, radius]^dim`.
    pub radius: Option<f64>,
    pub dim: Option<usize>,
    pub resolution: f64,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verb {
    Monotone,
    Ni,
    Representable,
    Maximal,
    Extension,
    Sum,
    Compose,
    ChainRepresentative,
    Infconv2,
    SkewIdentity,
    ChainIdentity,
    QualSum,
    QualChain,
    Interiority,
    NconeSum,
    NconeChain,
    DomainInvariance,
    DiffMap,
    LinearClosedness,
    SampleSurface,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Monotone => "monotone",
            Verb::Ni => "ni",
            Verb::Representable => "representable",
            Verb::Maximal => "maximal",
            Verb::Extension => "extension",
            Verb::Sum => "sum",
            Verb::Compose => "compose",
            Verb::ChainRepresentative => "chain-representative",
            Verb::Infconv2 => "infconv2",
            Verb::SkewIdentity => "skew-identity",
            Verb::ChainIdentity => "chain-identity",
            Verb::QualSum => "qual-sum",
            Verb::QualChain => "qual-chain",
            Verb::Interiority => "interiority",
            Verb::NconeSum => "ncone-sum",
            Verb::NconeChain => "ncone-chain",
            Verb::DomainInvariance => "domain-invariance",
            Verb::DiffMap => "diff-map",
            Verb::LinearClosedness => "linear-closedness",
            Verb::SampleSurface => "sample-surface",
        }
    }

    /// Operand shape: `Op` for operators, `Map` for linear maps.
    pub(crate) fn shape(self) -> &'static [Slot] {
        use Slot::*;
        match self {
            Verb::Monotone
            | Verb::Ni
            | Verb::Representable
            | Verb::Maximal
            | Verb::Extension
            | Verb::DomainInvariance
            | Verb::SampleSurface => &[Op],
            Verb::Sum
            | Verb::Infconv2
            | Verb::SkewIdentity
            | Verb::QualSum
            | Verb::NconeSum
            | Verb::DiffMap
            | Verb::LinearClosedness => &[Op, Op],
            Verb::Compose | Verb::ChainRepresentative | Verb::ChainIdentity | Verb::QualChain | Verb::NconeChain => {
                &[Map, Op]
            }
            Verb::Interiority => &[Either, Op],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Op,
    Map,
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Gamma,
    Delta,
    Epsilon,
}

impl From<Family> for Interiority {
    fn from(f: Family) -> Self {
        match f {
            Family::Gamma => Interiority::Gamma,
            Family::Delta => Interiority::Delta,
            Family::Epsilon => Interiority::Epsilon,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub name: Option<String>,
    pub verb: Verb,
    #[serde(default)]
    pub operands: Vec<String>,
    pub probe: Option<String>,
    /// Window used to sample the inner operator of a chain when it is not
    /// a finite graph.
    pub inner_probe: Option<String>,
    /// Sample points; `x` for domain and cone checks, concatenated `(x, x*)`
    /// for `infconv2`.
    #[serde(default)]
    pub samples: Vec<Vec<f64>>,
    pub family: Option<Family>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    /// Syntax or schema error; exit code 64.
    Parse(String),
    /// A name that does not resolve, or resolves to the wrong kind; exit
    /// code 65.
    Unresolved(String),
}

impl SpecError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SpecError::Parse(_) => 64,
            SpecError::Unresolved(_) => 65,
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Parse(m) => write!(f, "parse error: {m}"),
            SpecError::Unresolved(m) => write!(f, "unresolved name: {m}"),
        }
    }
}

impl std::error::Error for SpecError {}

/// Overrides from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub resolution: Option<f64>,
    pub tol: Option<f64>,
}

/// A problem with every name bound to a built object.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub operators: BTreeMap<String, OperatorRep>,
    pub maps: BTreeMap<String, LinearMap>,
    pub probes: BTreeMap<String, BoxProbe>,
    pub tasks: Vec<TaskSpec>,
}

pub fn parse(text: &str) -> Result<ProblemSpec, SpecError> {
    toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string().trim_end().to_owned()))
}

fn invalid(what: &str, name: &str, e: impl fmt::Display) -> SpecError {
    SpecError::Parse(format!("{what} `{name}`: {e}"))
}

fn matrix(rows: &[Vec<f64>]) -> Result<Matrix, String> {
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.is_empty() || ncols == 0 {
        return Err("matrix has no entries".into());
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err("ragged matrix rows".into());
    }
    Ok(Matrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

impl ProblemSpec {
    pub fn resolve(&self, ov: Overrides) -> Result<Resolved, SpecError> {
        let mut maps = BTreeMap::new();
        for (name, m) in &self.maps {
            let l = LinearMap::from_rows(&m.rows).map_err(|e| invalid("map", name, e))?;
            maps.insert(name.clone(), l);
        }
        let mut probes = BTreeMap::new();
        for (name, p) in &self.probes {
            probes.insert(name.clone(), build_probe(p, ov).map_err(|e| invalid("probe", name, e))?);
        }
        let mut operators = BTreeMap::new();
        for name in self.operators.keys() {
            let mut stack = Vec::new();
            self.build_op(name, &maps, &mut operators, &mut stack)?;
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let label = t.name.clone().unwrap_or_else(|| format!("#{}", i + 1));
            let shape = t.verb.shape();
            if t.operands.len() != shape.len() {
                return Err(SpecError::Parse(format!(
                    "task {label}: `{}` takes {} operand(s), got {}",
                    t.verb.name(),
                    shape.len(),
                    t.operands.len()
                )));
            }
            for (slot, name) in shape.iter().zip(&t.operands) {
                let ok = match slot {
                    Slot::Op => operators.contains_key(name),
                    Slot::Map => maps.contains_key(name),
                    Slot::Either => operators.contains_key(name) || maps.contains_key(name),
                };
                if !ok {
                    return Err(SpecError::Unresolved(format!("task {label}: operand `{name}`")));
                }
            }
            for p in t.probe.iter().chain(&t.inner_probe) {
                if !probes.contains_key(p) {
                    return Err(SpecError::Unresolved(format!("task {label}: probe `{p}`")));
                }
            }
            if t.verb == Verb::Interiority && t.family.is_none() {
                return Err(SpecError::Parse(format!("task {label}: interiority needs a `family`")));
            }
        }
        Ok(Resolved { operators, maps, probes, tasks: self.tasks.clone() })
    }

    fn build_op(
        &self,
        name: &str,
        maps: &BTreeMap<String, LinearMap>,
        done: &mut BTreeMap<String, OperatorRep>,
        stack: &mut Vec<String>,
    ) -> Result<OperatorRep, SpecError> {
        if let Some(op) = done.get(name) {
            return Ok(op.clone());
        }
        let spec = self
            .operators
            .get(name)
            .ok_or_else(|| SpecError::Unresolved(format!("operator `{name}`")))?;
        if stack.iter().any(|s| s == name) {
            return Err(SpecError::Parse(format!("operator `{name}` refers to itself")));
        }
        stack.push(name.to_owned());
        let bad = |e: &dyn fmt::Display| invalid("operator", name, e);
        let op = match spec {
            OperatorSpec::Finite { points } => {
                let dim = points.first().map_or(0, |p| p.dim());
                OperatorRep::finite(FiniteGraph::new(dim, points.clone()).map_err(|e| bad(&e))?)
            }
            OperatorSpec::Affine { m, q } => {
                let m = matrix(m).map_err(|e| bad(&e))?;
                let q = q.as_deref().map_or_else(|| Vector::zeros(m.nrows()), Vector::from_column_slice);
                OperatorRep::affine(m, q).map_err(|e| bad(&e))?
            }
            OperatorSpec::Identity { dim } => OperatorRep::identity(*dim),
            OperatorSpec::Skew { b } => OperatorRep::skew(matrix(b).map_err(|e| bad(&e))?).map_err(|e| bad(&e))?,
            OperatorSpec::SubdiffPl { slopes, offsets } => {
                if slopes.len() != offsets.len() {
                    return Err(bad(&"one offset per slope"));
                }
                let pieces = slopes.iter().zip(offsets).map(|(s, c)| (Vector::from_column_slice(s), *c)).collect();
                OperatorRep::subdiff_pl(pieces).map_err(|e| bad(&e))?
            }
            OperatorSpec::SubdiffL1 { dim } => OperatorRep::subdiff_l1(*dim),
            OperatorSpec::NormalCone { lo, hi, normals, bounds } => match (lo, hi, normals, bounds) {
                (Some(lo), Some(hi), None, None) => OperatorRep::normal_cone_box(lo, hi).map_err(|e| bad(&e))?,
                (None, None, Some(g), Some(c)) => {
                    let dim = g.first().map_or(0, |r| r.len());
                    if g.len() != c.len() {
                        return Err(bad(&"one bound per normal"));
                    }
                    let rows = g.iter().zip(c).map(|(r, b)| (Vector::from_column_slice(r), *b)).collect();
                    let h = Halfspaces::new(dim, rows).map_err(|e| bad(&e))?;
                    OperatorRep::normal_cone(h).map_err(|e| bad(&e))?
                }
                _ => return Err(bad(&"give either `lo`/`hi` or `normals`/`bounds`")),
            },
            OperatorSpec::Sum { of } | OperatorSpec::Product { of } => {
                let [a, b] = of.as_slice() else {
                    return Err(bad(&"needs exactly two operands"));
                };
                let a = self.build_op(a, maps, done, stack)?;
                let b = self.build_op(b, maps, done, stack)?;
                if matches!(spec, OperatorSpec::Sum { .. }) {
                    OperatorRep::sum(a, b).map_err(|e| bad(&e))?
                } else {
                    OperatorRep::product(a, b)
                }
            }
            OperatorSpec::Precomp { map, inner } => {
                let l = maps
                    .get(map)
                    .ok_or_else(|| SpecError::Unresolved(format!("operator `{name}`: map `{map}`")))?
                    .clone();
                let m = self.build_op(inner, maps, done, stack)?;
                OperatorRep::precomp(l, m).map_err(|e| bad(&e))?
            }
        };
        stack.pop();
        done.insert(name.to_owned(), op.clone());
        Ok(op)
    }
}

fn build_probe(p: &ProbeSpec, ov: Overrides) -> crate::Result<BoxProbe> {
    let res = ov.resolution.unwrap_or(p.resolution);
    let tol = ov.tol.or(p.tol).unwrap_or(crate::operators::DEFAULT_TOL);
    match (&p.lo, &p.hi, p.radius, p.dim) {
        (Some(lo), Some(hi), None, None) => BoxProbe::new(lo.clone(), hi.clone(), res, tol),
        (None, None, Some(r), Some(k)) => BoxProbe::cube(k, r, res, tol),
        _ => Err(crate::Error::InvalidInput("give either `lo`/`hi` or `radius`/`dim`".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
[operators.two]
kind = "finite"
points = [{ x = [0.0], xstar = [1.0] }, { x = [1.0], xstar = [0.0] }]

[operators.id]
kind = "identity"
dim = 1

[operators.both]
kind = "sum"
of = ["two", "id"]

[maps.diag]
rows = [[1.0], [1.0]]

[probes.unit]
radius = 1.0
dim = 2
resolution = 0.5

[[tasks]]
verb = "monotone"
operands = ["two"]
"#;

    #[test]
    fn resolves_nested_names() {
        let r = parse(SMALL).unwrap().resolve(Overrides::default()).unwrap();
        assert_eq!(r.operators.len(), 3);
        assert_eq!(r.operators["both"].kind_name(), "sum");
        assert_eq!(r.probes["unit"].resolution(), 0.5);
        let r = parse(SMALL).unwrap().resolve(Overrides { resolution: Some(0.25), tol: None }).unwrap();
        assert_eq!(r.probes["unit"].resolution(), 0.25);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse("[operators.a\nkind = 1").unwrap_err();
        assert_eq!(e.exit_code(), 64);
        assert!(e.to_string().contains("line"), "{e}");
        let e = parse("[[tasks]]\nverb = \"frobnicate\"\n").unwrap_err();
        assert_eq!(e.exit_code(), 64);
    }

    #[test]
    fn unresolved_names() {
        let text = SMALL.replace("operands = [\"two\"]", "operands = [\"three\"]");
        let e = parse(&text).unwrap().resolve(Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 65);
        let text = SMALL.replace("of = [\"two\", \"id\"]", "of = [\"two\", \"nope\"]");
        let e = parse(&text).unwrap().resolve(Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 65);
    }
}
