//! Problem files: a TOML document with a ring block, named objects and
//! command parameters. Matrices are nested lists of expression strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use mfsing_core::koszul::new_koszul;
use mfsing_core::mf::new_mf;
use mfsing_core::poly::parse_poly;
use mfsing_core::{
    Error, Field, GradedHom, KoszulModule, LGPair, MatrixFactorization, MonomialOrder, Parity, PolyMatrix, RingCtx,
};
use serde::{Deserialize, Serialize};

pub type MatrixSpec = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default = "default_potential")]
    pub potential: String,
}

fn default_field() -> String {
    "Q".into()
}

fn default_potential() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectSpec {
    /// A matrix factorization `(d0 | d1)`.
    Mf {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ring: Option<String>,
        d0: MatrixSpec,
        d1: MatrixSpec,
    },
    /// A Koszul module: `d[j]` maps degree `lo + j` to `lo + j + 1` and
    /// `h[j]` maps degree `lo + j + 1` back to `lo + j`.
    Koszul {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ring: Option<String>,
        lo: i64,
        ranks: Vec<usize>,
        d: Vec<MatrixSpec>,
        h: Vec<MatrixSpec>,
    },
    /// A graded morphism between two `mf` objects.
    Hom { source: String, target: String, parity: String, m0: MatrixSpec, m1: MatrixSpec },
    /// A contraction `k[j]: M^(lo+j) -> M^(lo+j-1)` of a `koszul` object.
    Contraction { module: String, k: Vec<MatrixSpec> },
    /// A presentation matrix of a module over `B/(f)`.
    Module {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ring: Option<String>,
        presentation: MatrixSpec,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
}

impl Params {
    fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ring: RingSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rings: BTreeMap<String, RingSpec>,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

/// A failure while reading or building a problem file, with its location.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadError {
    Format(String),
    Math { location: String, error: Error },
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Format(msg) => write!(f, "{msg}"),
            LoadError::Math { location, error } => write!(f, "{location}: {error}"),
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, LoadError> {
        toml::from_str(text).map_err(|e| LoadError::Format(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files always serialize")
    }
}

pub fn parse_field(s: &str) -> Result<Field, Error> {
    let t = s.trim();
    let p = match t {
        "Q" | "QQ" | "q" => return Ok(Field::Rational),
        _ => t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .unwrap_or(t),
    };
    let p: u32 = p.parse().map_err(|_| Error::InvalidRing(format!("unknown field `{s}`")))?;
    Field::prime(p)
}

pub fn parse_order(s: Option<&str>) -> Result<MonomialOrder, Error> {
    match s.map(str::to_ascii_lowercase).as_deref() {
        None | Some("degrevlex") | Some("grevlex") => Ok(MonomialOrder::DegRevLex),
        Some("deglex") | Some("grlex") => Ok(MonomialOrder::DegLex),
        Some("lex") => Ok(MonomialOrder::Lex),
        Some(other) => Err(Error::InvalidRing(format!("unknown monomial order `{other}`"))),
    }
}

impl RingSpec {
    pub fn build(&self) -> Result<LGPair, Error> {
        let ctx = RingCtx::new(parse_field(&self.field)?, &self.vars, parse_order(self.order.as_deref())?)?;
        Ok(LGPair::new(parse_poly(&self.potential, &ctx)?))
    }
}

#[derive(Debug, Clone)]
pub enum Object {
    Mf(MatrixFactorization),
    Koszul(KoszulModule),
    Hom(GradedHom),
    Contraction { module: KoszulModule, k: Vec<PolyMatrix> },
    Module { lg: LGPair, presentation: PolyMatrix },
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Mf(_) => "mf",
            Object::Koszul(_) => "koszul",
            Object::Hom(_) => "hom",
            Object::Contraction { .. } => "contraction",
            Object::Module { .. } => "module",
        }
    }
}

/// Built rings and objects of a problem file.
#[derive(Debug, Clone)]
pub struct Problem {
    pub ring: LGPair,
    pub rings: BTreeMap<String, LGPair>,
    pub objects: BTreeMap<String, Object>,
    pub params: Params,
}

fn matrix(ctx: &Arc<RingCtx>, spec: &MatrixSpec, shape: Option<(usize, usize)>, at: &str) -> Result<PolyMatrix, LoadError> {
    let cols = spec.first().map_or(shape.map_or(0, |s| s.1), Vec::len);
    if let Some(bad) = spec.iter().position(|r| r.len() != cols) {
        return Err(LoadError::Format(format!("{at}: row {bad} has {} entries, expected {cols}", spec[bad].len())));
    }
    if let Some((r, c)) = shape {
        if (spec.len(), cols) != (r, c) {
            return Err(LoadError::Format(format!("{at}: matrix is {}x{cols}, expected {r}x{c}", spec.len())));
        }
    }
    let mut out = PolyMatrix::zeros(ctx, spec.len(), cols);
    for (i, row) in spec.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let p = parse_poly(s, ctx).map_err(|error| LoadError::Math { location: format!("{at} entry ({i}, {j})"), error })?;
            out.set(i, j, p);
        }
    }
    Ok(out)
}

impl Problem {
    pub fn load(file: &ProblemFile) -> Result<Problem, LoadError> {
        let ring = file.ring.build().map_err(|error| LoadError::Math { location: "[ring]".into(), error })?;
        let mut rings = BTreeMap::new();
        for (name, spec) in &file.rings {
            let lg = spec.build().map_err(|error| LoadError::Math { location: format!("[rings.{name}]"), error })?;
            rings.insert(name.clone(), lg);
        }
        let mut problem = Problem { ring, rings, objects: BTreeMap::new(), params: file.params.clone() };
        // Objects referring to other objects are built after those they refer to.
        let mut pending: Vec<(&String, &ObjectSpec)> = file.objects.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for (name, spec) in pending {
                if problem.ready(spec) {
                    let obj = problem.build(name, spec)?;
                    problem.objects.insert(name.clone(), obj);
                } else {
                    rest.push((name, spec));
                }
            }
            if rest.len() == before {
                let names: Vec<&str> = rest.iter().map(|(n, _)| n.as_str()).collect();
                return Err(LoadError::Format(format!("objects {names:?} refer to undefined objects")));
            }
            pending = rest;
        }
        Ok(problem)
    }

    fn ready(&self, spec: &ObjectSpec) -> bool {
        match spec {
            ObjectSpec::Hom { source, target, .. } => self.objects.contains_key(source) && self.objects.contains_key(target),
            ObjectSpec::Contraction { module, .. } => self.objects.contains_key(module),
            _ => true,
        }
    }

    fn lg_for(&self, ring: &Option<String>, at: &str) -> Result<LGPair, LoadError> {
        match ring {
            None => Ok(self.ring.clone()),
            Some(r) => self.rings.get(r).cloned().ok_or_else(|| LoadError::Format(format!("{at}: unknown ring `{r}`"))),
        }
    }

    fn build(&self, name: &str, spec: &ObjectSpec) -> Result<Object, LoadError> {
        let at = format!("object `{name}`");
        let math = |error: Error| LoadError::Math { location: at.clone(), error };
        match spec {
            ObjectSpec::Mf { ring, d0, d1 } => {
                let lg = self.lg_for(ring, &at)?;
                let d0 = matrix(lg.ctx(), d0, None, &format!("{at} d0"))?;
                let d1 = matrix(lg.ctx(), d1, Some((d0.cols(), d0.rows())), &format!("{at} d1"))?;
                new_mf(&lg, d0, d1).map(Object::Mf).map_err(math)
            }
            ObjectSpec::Koszul { ring, lo, ranks, d, h } => {
                let lg = self.lg_for(ring, &at)?;
                let rank = |i: usize| ranks.get(i).copied().unwrap_or(0);
                let mut dm = Vec::new();
                for (j, s) in d.iter().enumerate() {
                    dm.push(matrix(lg.ctx(), s, Some((rank(j + 1), rank(j))), &format!("{at} d[{j}]"))?);
                }
                let mut hm = Vec::new();
                for (j, s) in h.iter().enumerate() {
                    hm.push(matrix(lg.ctx(), s, Some((rank(j), rank(j + 1))), &format!("{at} h[{j}]"))?);
                }
                new_koszul(&lg, *lo, ranks.clone(), dm, hm).map(Object::Koszul).map_err(math)
            }
            ObjectSpec::Hom { source, target, parity, m0, m1 } => {
                let (Object::Mf(s), Object::Mf(t)) = (&self.objects[source], &self.objects[target]) else {
                    return Err(LoadError::Format(format!("{at}: source and target must be mf objects")));
                };
                let parity = match parity.as_str() {
                    "even" | "0" => Parity::Even,
                    "odd" | "1" => Parity::Odd,
                    other => return Err(LoadError::Format(format!("{at}: parity `{other}` is not even or odd"))),
                };
                let m0 = matrix(s.ctx(), m0, None, &format!("{at} m0"))?;
                let m1 = matrix(s.ctx(), m1, None, &format!("{at} m1"))?;
                GradedHom::new(s, t, parity, m0, m1).map(Object::Hom).map_err(math)
            }
            ObjectSpec::Contraction { module, k } => {
                let Object::Koszul(m) = &self.objects[module] else {
                    return Err(LoadError::Format(format!("{at}: `{module}` is not a koszul object")));
                };
                let mut ks = Vec::new();
                for (j, s) in k.iter().enumerate() {
                    let i = m.lo() + j as i64;
                    ks.push(matrix(m.ctx(), s, Some((m.rank(i - 1), m.rank(i))), &format!("{at} k[{j}]"))?);
                }
                Ok(Object::Contraction { module: m.clone(), k: ks })
            }
            ObjectSpec::Module { ring, presentation } => {
                let lg = self.lg_for(ring, &at)?;
                let presentation = matrix(lg.ctx(), presentation, None, &format!("{at} presentation"))?;
                Ok(Object::Module { lg, presentation })
            }
        }
    }

    pub fn get(&self, name: &str) -> Result<&Object, LoadError> {
        self.objects.get(name).ok_or_else(|| LoadError::Format(format!("no object named `{name}`")))
    }
}
