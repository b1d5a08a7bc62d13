use std::collections::BTreeMap;

use super::{
    refute_linear_frobenius, refute_linear_lowdegree, refute_nullstellensatz, refute_sparse, refute_symmetric_system,
    Certificate, Instance, InstanceFamily,
};
use crate::error::{Error, Result};
use crate::gf::Level;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefuteOptions {
    /// largest degree a search-based refuter may try
    pub max_degree: usize,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions { max_degree: 6 }
    }
}

/// A named certificate constructor.
pub trait Refuter: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn accepts(&self, family: InstanceFamily) -> bool;
    fn refute(&self, instance: &Instance, options: &RefuteOptions) -> Result<Certificate>;
}

fn single_axiom(instance: &Instance) -> Result<&crate::poly::Poly> {
    match instance.axioms.as_slice() {
        [f] => Ok(f),
        other => Err(Error::OutOfRange(format!(
            "constructor takes a single axiom, got {}",
            other.len()
        ))),
    }
}

struct Frobenius;

impl Refuter for Frobenius {
    fn name(&self) -> &'static str {
        "frobenius"
    }
    fn description(&self) -> &'static str {
        "iterated Frobenius for sum a_i x_i - b with b outside the base field"
    }
    fn accepts(&self, family: InstanceFamily) -> bool {
        family == InstanceFamily::Linear
    }
    fn refute(&self, instance: &Instance, _: &RefuteOptions) -> Result<Certificate> {
        let tower = instance.require_tower()?;
        if instance.level != Level::Ext {
            return Err(Error::LevelMismatch);
        }
        refute_linear_frobenius(single_axiom(instance)?, tower)
    }
}

struct Sparse;

impl Refuter for Sparse {
    fn name(&self) -> &'static str {
        "sparse"
    }
    fn description(&self) -> &'static str {
        "monomials flattened to fresh variables, then the Frobenius certificate pulled back"
    }
    fn accepts(&self, family: InstanceFamily) -> bool {
        matches!(
            family,
            InstanceFamily::Linear | InstanceFamily::SparseShifted | InstanceFamily::LiftedSubsetSum
        )
    }
    fn refute(&self, instance: &Instance, _: &RefuteOptions) -> Result<Certificate> {
        let tower = instance.require_tower()?;
        if instance.level != Level::Ext {
            return Err(Error::LevelMismatch);
        }
        refute_sparse(single_axiom(instance)?, tower)
    }
}

struct LowDegree;

impl Refuter for LowDegree {
    fn name(&self) -> &'static str {
        "lowdegree"
    }
    fn description(&self) -> &'static str {
        "A = ml[L^(q-2)] for linear L over F_q without cube zeros"
    }
    fn accepts(&self, family: InstanceFamily) -> bool {
        family == InstanceFamily::Linear
    }
    fn refute(&self, instance: &Instance, _: &RefuteOptions) -> Result<Certificate> {
        refute_linear_lowdegree(single_axiom(instance)?)
    }
}

struct Symmetric;

impl Refuter for Symmetric {
    fn name(&self) -> &'static str {
        "symmetric"
    }
    fn description(&self) -> &'static str {
        "multilinear symmetric systems via the compressed low-variate system"
    }
    fn accepts(&self, family: InstanceFamily) -> bool {
        family == InstanceFamily::SymmetricSystem
    }
    fn refute(&self, instance: &Instance, _: &RefuteOptions) -> Result<Certificate> {
        refute_symmetric_system(&instance.axioms)
    }
}

struct Nullstellensatz;

impl Refuter for Nullstellensatz {
    fn name(&self) -> &'static str {
        "nullstellensatz"
    }
    fn description(&self) -> &'static str {
        "degree sweep with exact linear algebra over the monomial basis"
    }
    fn accepts(&self, _: InstanceFamily) -> bool {
        true
    }
    fn refute(&self, instance: &Instance, options: &RefuteOptions) -> Result<Certificate> {
        refute_nullstellensatz(instance, options.max_degree).map(|(cert, _)| cert)
    }
}

/// Refuters by name.
pub struct RefuterRegistry {
    entries: BTreeMap<&'static str, Box<dyn Refuter>>,
}

impl RefuterRegistry {
    pub fn empty() -> Self {
        RefuterRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = RefuterRegistry::empty();
        reg.register(Box::new(Frobenius));
        reg.register(Box::new(Sparse));
        reg.register(Box::new(LowDegree));
        reg.register(Box::new(Symmetric));
        reg.register(Box::new(Nullstellensatz));
        reg
    }

    pub fn register(&mut self, refuter: Box<dyn Refuter>) {
        self.entries.insert(refuter.name(), refuter);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Refuter> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "refuter",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Refuter> + '_ {
        self.entries.values().map(|b| b.as_ref())
    }

    /// First refuter (in the order frobenius, sparse, symmetric, lowdegree,
    /// nullstellensatz) that accepts the family and succeeds. On failure the
    /// first mathematical error wins over usage errors.
    pub fn auto(&self, instance: &Instance, options: &RefuteOptions) -> Result<Certificate> {
        let order = ["frobenius", "sparse", "symmetric", "lowdegree", "nullstellensatz"];
        let mut last = None;
        let mut first_math = None;
        for name in order {
            let Ok(r) = self.get(name) else { continue };
            if !r.accepts(instance.family) {
                continue;
            }
            match r.refute(instance, options) {
                Ok(cert) => return Ok(cert),
                Err(e) if e.is_mathematical() => {
                    first_math.get_or_insert(e);
                }
                Err(e) => last = Some(e),
            }
        }
        Err(first_math.or(last).unwrap_or(Error::Unknown {
            kind: "refuter for family",
            name: instance.family.as_str().to_string(),
        }))
    }
}

impl Default for RefuterRegistry {
    fn default() -> Self {
        RefuterRegistry::with_builtins()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::instances::{linear_shifted, symmetric_system};
    use crate::certificates::verify;
    use crate::gf::{Field, FieldTower};
    use std::sync::Arc;

    #[test]
    fn lookup_and_dispatch() {
        let reg = RefuterRegistry::with_builtins();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            ["frobenius", "lowdegree", "nullstellensatz", "sparse", "symmetric"]
        );
        assert!(matches!(reg.get("magic"), Err(Error::Unknown { .. })));
        let tower = Arc::new(FieldTower::new(3, 1).unwrap());
        let inst = linear_shifted(&tower, 3, 2).unwrap();
        for name in ["frobenius", "sparse"] {
            let cert = reg.get(name).unwrap().refute(&inst, &RefuteOptions::default()).unwrap();
            assert!(verify(&inst, &cert).unwrap().valid);
            assert_eq!(cert.provenance.constructor, name);
        }
        let field = Arc::new(Field::prime(2).unwrap());
        let sys = symmetric_system(&field, 4, 2, 3).unwrap();
        let cert = reg.auto(&sys, &RefuteOptions::default()).unwrap();
        assert_eq!(cert.provenance.constructor, "symmetric");
    }
}
