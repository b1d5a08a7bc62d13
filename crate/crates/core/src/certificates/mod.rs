//! Refutation certificates: sum_i A_i f_i + sum_j B_j (x_j^2 - x_j) = 1.

mod frobenius;
pub mod instances;
mod lowdegree;
mod nullstellensatz;
mod registry;
mod sparse;
mod symmetric;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldSpec, FieldTower, Level};
use crate::poly::{parse_poly, AxiomKind, Poly, VarLayout};

pub use frobenius::{frobenius_trace, is_unsat_on_cube, refute_linear_frobenius, FrobeniusTrace};
pub use lowdegree::refute_linear_lowdegree;
pub use nullstellensatz::{refute_nullstellensatz, solve_nullstellensatz, DegreeBound, NullstellensatzOutcome};
pub use registry::{RefuteOptions, Refuter, RefuterRegistry};
pub use sparse::{monomial_axiom_expansion, refute_sparse};
pub use symmetric::{refute_symmetric_system, symmetric_pipeline, SymmetricTrace};

/// Which generator an instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceFamily {
    /// sum alpha_i x_i - beta
    Linear,
    /// f(x) - beta with f sparse over the base field
    SparseShifted,
    /// lifted subset-sum instances with auxiliary variables
    LiftedSubsetSum,
    /// multilinear symmetric polynomials with no common cube zero
    SymmetricSystem,
    /// anything read from a file without a tag
    Custom,
}

impl InstanceFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceFamily::Linear => "linear",
            InstanceFamily::SparseShifted => "sparse-shifted",
            InstanceFamily::LiftedSubsetSum => "lifted-subset-sum",
            InstanceFamily::SymmetricSystem => "symmetric-system",
            InstanceFamily::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "linear" => InstanceFamily::Linear,
            "sparse-shifted" => InstanceFamily::SparseShifted,
            "lifted-subset-sum" => InstanceFamily::LiftedSubsetSum,
            "symmetric-system" => InstanceFamily::SymmetricSystem,
            "custom" => InstanceFamily::Custom,
            _ => {
                return Err(Error::Unknown {
                    kind: "instance family",
                    name: s.to_string(),
                })
            }
        })
    }
}

/// Axioms f_1..f_m over one field, in the variables of `layout`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub field: Arc<Field>,
    pub tower: Option<Arc<FieldTower>>,
    pub level: Level,
    pub axioms: Vec<Poly>,
    pub family: InstanceFamily,
    pub layout: VarLayout,
}

impl Instance {
    pub fn new(field: &Arc<Field>, layout: VarLayout, axioms: Vec<Poly>, family: InstanceFamily) -> Result<Self> {
        let n = layout.len();
        for f in &axioms {
            if f.nvars() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: f.nvars(),
                });
            }
            if f.field().spec() != field.spec() {
                return Err(Error::LevelMismatch);
            }
        }
        Ok(Instance {
            field: field.clone(),
            tower: None,
            level: Level::Base,
            axioms,
            family,
            layout,
        })
    }

    pub fn over_tower(mut self, tower: &Arc<FieldTower>, level: Level) -> Result<Self> {
        if tower.field(level).spec() != self.field.spec() {
            return Err(Error::FieldMismatch(format!(
                "instance field {} is not the {level:?} level of the tower",
                self.field.spec()
            )));
        }
        self.tower = Some(tower.clone());
        self.level = level;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.layout.len()
    }

    /// The tower, failing for instances that were built without one.
    pub fn require_tower(&self) -> Result<&Arc<FieldTower>> {
        self.tower
            .as_ref()
            .ok_or_else(|| Error::FieldMismatch("constructor needs a field tower, instance has a single field".into()))
    }

    /// beta = -(constant term) of the single axiom.
    pub fn beta(&self) -> Result<crate::gf::FieldElem> {
        match self.axioms.as_slice() {
            [f] => Ok(self.field.neg(&f.constant_term())),
            _ => Err(Error::OutOfRange(format!(
                "beta is defined for single-axiom instances, got {}",
                self.axioms.len()
            ))),
        }
    }

    pub fn axiom_texts(&self) -> Vec<String> {
        self.axioms.iter().map(|f| f.to_text(&self.layout)).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "field": self.field.spec().to_string(),
            "vars": self.layout.to_string(),
            "family": self.family.as_str(),
            "instance": self.axiom_texts(),
        });
        if let Some(t) = self.tower_json() {
            v["tower"] = t;
        }
        v
    }

    fn tower_json(&self) -> Option<Value> {
        self.tower
            .as_ref()
            .map(|t| json!({"p": t.p(), "k": t.k(), "level": self.level}))
    }

    /// Rebuilds the tower named by a `"tower": {p, k, level}` entry, if any.
    fn attach_tower(self, v: &Value) -> Result<Self> {
        let Some(t) = v.get("tower") else {
            return Ok(self);
        };
        let bad = || Error::parse(1, 1, "malformed \"tower\"");
        let p = t.get("p").and_then(Value::as_u64).ok_or_else(bad)?;
        let k = t.get("k").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let level: Level = serde_json::from_value(t.get("level").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
        let tower = Arc::new(FieldTower::new(p, k)?);
        self.over_tower(&tower, level)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (field, layout) = header(v)?;
        let family = match v.get("family").and_then(Value::as_str) {
            Some(s) => InstanceFamily::parse(s)?,
            None => InstanceFamily::Custom,
        };
        let axioms = poly_list(v, "instance", &field, &layout)?;
        Instance::new(&field, layout, axioms, family)?.attach_tower(v)
    }
}

/// Where a certificate came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub constructor: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl Provenance {
    pub fn new(constructor: &str) -> Self {
        Provenance {
            constructor: constructor.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("plain values serialize"),
        );
        self
    }
}

/// Degree and size figures of a certificate. `modeled_depth` is the depth
/// of the construction it came from, not a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStats {
    pub max_degree: usize,
    pub max_degree_a: usize,
    pub max_degree_b: usize,
    pub total_sparsity: usize,
    pub modeled_depth: u32,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub a: Vec<Poly>,
    pub b: Vec<Poly>,
    pub provenance: Provenance,
    pub modeled_depth: u32,
}

impl Certificate {
    pub fn stats(&self) -> CertStats {
        cert_stats(self)
    }
}

pub fn cert_stats(cert: &Certificate) -> CertStats {
    let max_degree_a = cert.a.iter().map(Poly::degree).max().unwrap_or(0);
    let max_degree_b = cert.b.iter().map(Poly::degree).max().unwrap_or(0);
    CertStats {
        max_degree: max_degree_a.max(max_degree_b),
        max_degree_a,
        max_degree_b,
        total_sparsity: cert.a.iter().chain(&cert.b).map(Poly::sparsity).sum(),
        modeled_depth: cert.modeled_depth,
    }
}

/// Outcome of expanding a claimed certificate.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub valid: bool,
    /// sum A_i f_i + sum B_j (x_j^2 - x_j) - 1; zero exactly when valid
    pub residual: Poly,
    pub stats: CertStats,
}

impl VerificationReport {
    pub fn to_json(&self, layout: &VarLayout) -> Value {
        json!({
            "valid": self.valid,
            "residual_terms": self.residual.sparsity(),
            "residual": self.residual.to_text(layout),
            "stats": self.stats,
        })
    }
}

/// Expands the certificate combination and compares it with 1.
pub fn verify(instance: &Instance, cert: &Certificate) -> Result<VerificationReport> {
    let n = instance.nvars();
    if cert.a.len() != instance.axioms.len() {
        return Err(Error::ArityMismatch {
            expected: instance.axioms.len(),
            got: cert.a.len(),
        });
    }
    if cert.b.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: cert.b.len(),
        });
    }
    for p in cert.a.iter().chain(&cert.b) {
        if p.nvars() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: p.nvars(),
            });
        }
        if p.field().spec() != instance.field.spec() {
            return Err(Error::LevelMismatch);
        }
    }
    let field = &instance.field;
    let parts: Vec<Poly> = cert
        .a
        .par_iter()
        .zip(instance.axioms.par_iter())
        .map(|(a, f)| a * f)
        .chain(
            cert.b
                .par_iter()
                .enumerate()
                .map(|(j, b)| b * &AxiomKind::Boolean.axiom(field, n, j)),
        )
        .collect();
    let mut residual = Poly::constant(field, n, field.from_i64(-1));
    for p in &parts {
        residual = &residual + p;
    }
    Ok(VerificationReport {
        valid: residual.is_zero(),
        residual,
        stats: cert_stats(cert),
    })
}

fn header(v: &Value) -> Result<(Arc<Field>, VarLayout)> {
    let spec: FieldSpec = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(1, 1, "missing \"field\""))?
        .parse()?;
    let field = Arc::new(Field::new(spec));
    let layout = match v.get("vars").and_then(Value::as_str) {
        Some(s) => VarLayout::parse(s)?,
        None => {
            let mut texts = Vec::new();
            for key in ["instance", "A", "B"] {
                if let Some(arr) = v.get(key).and_then(Value::as_array) {
                    texts.extend(arr.iter().filter_map(Value::as_str));
                }
            }
            VarLayout::infer(texts)
        }
    };
    Ok((field, layout))
}

fn poly_list(v: &Value, key: &str, field: &Arc<Field>, layout: &VarLayout) -> Result<Vec<Poly>> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(1, 1, format!("missing array \"{key}\"")))?;
    arr.iter()
        .enumerate()
        .map(|(i, t)| {
            let text = t
                .as_str()
                .ok_or_else(|| Error::parse(1, 1, format!("{key}[{i}] is not a string")))?;
            parse_poly(field, layout, text).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column,
                    message: format!("{key}[{i}]: {message}"),
                },
                other => other,
            })
        })
        .collect()
}

/// `{field, vars, instance, A, B, provenance, stats}`.
pub fn certificate_to_json(instance: &Instance, cert: &Certificate) -> Value {
    let layout = &instance.layout;
    let mut provenance = cert.provenance.clone();
    provenance
        .params
        .insert("family".into(), Value::from(instance.family.as_str()));
    let mut v = json!({
        "field": instance.field.spec().to_string(),
        "vars": layout.to_string(),
        "instance": instance.axiom_texts(),
        "A": cert.a.iter().map(|p| p.to_text(layout)).collect::<Vec<_>>(),
        "B": cert.b.iter().map(|p| p.to_text(layout)).collect::<Vec<_>>(),
        "provenance": provenance,
        "stats": cert_stats(cert),
    });
    if let Some(t) = instance.tower_json() {
        v["tower"] = t;
    }
    v
}

/// Reads back what [`certificate_to_json`] writes.
pub fn certificate_from_json(v: &Value) -> Result<(Instance, Certificate)> {
    let (field, layout) = header(v)?;
    let provenance: Provenance = match v.get("provenance") {
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::parse(1, 1, format!("provenance: {e}")))?,
        None => Provenance::new("unknown"),
    };
    let family = match provenance.params.get("family").and_then(Value::as_str) {
        Some(s) => InstanceFamily::parse(s)?,
        None => InstanceFamily::Custom,
    };
    let modeled_depth = v
        .get("stats")
        .and_then(|s| s.get("modeled_depth"))
        .and_then(Value::as_u64)
        .unwrap_or(0) as u32;
    let axioms = poly_list(v, "instance", &field, &layout)?;
    let instance = Instance::new(&field, layout.clone(), axioms, family)?.attach_tower(v)?;
    let cert = Certificate {
        a: poly_list(v, "A", &field, &layout)?,
        b: poly_list(v, "B", &field, &layout)?,
        provenance,
        modeled_depth,
    };
    Ok((instance, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_example() -> (Instance, Certificate) {
        let tower = Arc::new(FieldTower::new(2, 1).unwrap());
        let ext = tower.ext().clone();
        let layout = VarLayout::x(1);
        let t = ext.generator();
        let x = Poly::var(&ext, 1, 0);
        let l = &x + &Poly::constant(&ext, 1, t.clone());
        let inst = Instance::new(&ext, layout, vec![l], InstanceFamily::Linear)
            .unwrap()
            .over_tower(&tower, Level::Ext)
            .unwrap();
        let a = &(&x + &Poly::constant(&ext, 1, t)) + &Poly::one(&ext, 1);
        let cert = Certificate {
            a: vec![a],
            b: vec![Poly::one(&ext, 1)],
            provenance: Provenance::new("hand"),
            modeled_depth: 0,
        };
        (inst, cert)
    }

    #[test]
    fn trivial_instance() {
        let f = Arc::new(Field::prime(3).unwrap());
        let inst = Instance::new(&f, VarLayout::x(2), vec![Poly::one(&f, 2)], InstanceFamily::Custom).unwrap();
        let cert = Certificate {
            a: vec![Poly::one(&f, 2)],
            b: vec![Poly::zero(&f, 2), Poly::zero(&f, 2)],
            provenance: Provenance::new("hand"),
            modeled_depth: 0,
        };
        let report = verify(&inst, &cert).unwrap();
        assert!(report.valid);
        assert_eq!(report.stats.max_degree, 0);
    }

    #[test]
    fn hand_certificate_over_f4() {
        let (inst, cert) = f4_example();
        assert!(verify(&inst, &cert).unwrap().valid);
    }

    #[test]
    fn every_single_coefficient_mutation_is_caught() {
        let (inst, cert) = f4_example();
        let f = inst.field.clone();
        for (which, poly) in cert.a.iter().chain(&cert.b).enumerate() {
            for (m, c) in poly.terms() {
                let bumped = f.add(c, &f.one());
                let mut mutated = cert.clone();
                let target = if which < cert.a.len() {
                    &mut mutated.a[which]
                } else {
                    &mut mutated.b[which - cert.a.len()]
                };
                let delta = Poly::monomial(&f, m.clone(), f.sub(&bumped, c));
                *target = &*target + &delta;
                let report = verify(&inst, &mutated).unwrap();
                assert!(!report.valid);
                assert!(!report.residual.is_zero());
            }
        }
    }

    #[test]
    fn arity_errors() {
        let (inst, mut cert) = f4_example();
        cert.b.push(Poly::zero(&inst.field, 1));
        assert!(matches!(verify(&inst, &cert), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn json_round_trip_keeps_stats() {
        let (inst, cert) = f4_example();
        let v = certificate_to_json(&inst, &cert);
        let (inst2, cert2) = certificate_from_json(&v).unwrap();
        assert_eq!(inst2.axioms, inst.axioms);
        assert_eq!(cert2.a, cert.a);
        assert_eq!(cert2.b, cert.b);
        assert_eq!(cert_stats(&cert2), cert_stats(&cert));
        assert_eq!(certificate_to_json(&inst2, &cert2), v);
        assert!(verify(&inst2, &cert2).unwrap().valid);
        assert_eq!(inst2.level, Level::Ext);
        assert_eq!(inst2.require_tower().unwrap().k(), 1);
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert!(again.tower.is_some());
    }
}
