use std::sync::Arc;

use ipsforge_core::certificates::instances::{
    linear_base_unsat, linear_shifted, pairwise_lifted, sparse_shifted, symmetric_system,
};
use ipsforge_core::certificates::{
    certificate_from_json, certificate_to_json, verify, Instance, InstanceFamily, RefuteOptions, RefuterRegistry,
};
use ipsforge_core::gf::{Field, FieldTower, Level};
use ipsforge_core::poly::{parse_poly, Poly, VarLayout};
use ipsforge_core::symfun::elem_sym;
use ipsforge_core::Error;
use serde_json::Value;

use crate::args::{Family, InstanceArgs, RefuteArgs, VerifyArgs};
use crate::output::{read_json, CliError, Outcome, RunConfig};

pub fn base_field(p: u64, k: usize) -> Result<Arc<Field>, CliError> {
    Ok(Arc::new(Field::with_degree(p, k)?))
}

pub fn tower(p: u64, k: usize) -> Result<Arc<FieldTower>, CliError> {
    Ok(Arc::new(FieldTower::new(p, k)?))
}

/// Rewrites e1, e2, ... to y1, y2, ... so the text parses over a y layout.
fn elementary_names_to_y(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    for (i, ch) in text.char_indices() {
        let next_digit = bytes.get(i + 1).is_some_and(u8::is_ascii_digit);
        if ch == 'e' && next_digit {
            out.push('y');
        } else {
            out.push(ch);
        }
    }
    out
}

/// Parses a polynomial in e_1..e_n and returns its multilinear form in x_1..x_n.
pub fn parse_symmetric(field: &Arc<Field>, n: usize, text: &str) -> Result<Poly, CliError> {
    let in_e = parse_poly(field, &VarLayout::y(n), &elementary_names_to_y(text))?;
    let images = (1..=n).map(|d| elem_sym(field, n, d)).collect::<Result<Vec<_>, _>>()?;
    Ok(in_e.compose(&images)?.ml())
}

fn family_tag(family: Family, axioms: &[Poly]) -> InstanceFamily {
    match family {
        Family::LinearShifted | Family::LinearBase if axioms.iter().all(|f| f.degree() <= 1) => InstanceFamily::Linear,
        Family::SparseShifted => InstanceFamily::SparseShifted,
        Family::LiftedPairwise => InstanceFamily::LiftedSubsetSum,
        Family::Symmetric => InstanceFamily::SymmetricSystem,
        _ => InstanceFamily::Custom,
    }
}

fn from_texts(config: &RunConfig, family: Family, texts: &[String]) -> Result<Instance, CliError> {
    let (p, k, n) = (config.p, config.k, config.n);
    if family == Family::Symmetric {
        let field = base_field(p, k)?;
        let axioms = texts
            .iter()
            .map(|t| parse_symmetric(&field, n, t))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Instance::new(
            &field,
            VarLayout::x(n),
            axioms,
            InstanceFamily::SymmetricSystem,
        )?);
    }
    let layout = VarLayout::infer(texts.iter().map(String::as_str));
    let parse_all = |field: &Arc<Field>| {
        texts
            .iter()
            .map(|t| parse_poly(field, &layout, t))
            .collect::<Result<Vec<_>, Error>>()
    };
    if family == Family::LinearBase {
        let field = base_field(p, k)?;
        let axioms = parse_all(&field)?;
        let tag = family_tag(family, &axioms);
        return Ok(Instance::new(&field, layout, axioms, tag)?);
    }
    let tower = tower(p, k)?;
    let axioms = parse_all(tower.ext())?;
    let tag = family_tag(family, &axioms);
    Ok(Instance::new(tower.ext(), layout, axioms, tag)?.over_tower(&tower, Level::Ext)?)
}

/// The instance named by `--instance`, `--poly` or a seeded `--family` generator.
pub fn build_instance(config: &mut RunConfig, args: &InstanceArgs) -> Result<Instance, CliError> {
    if let Some(path) = &args.instance {
        config.set("instance", path);
        return Ok(Instance::from_json(&read_json(path)?)?);
    }
    let family = args
        .family
        .ok_or_else(|| CliError::Usage("one of --family or --instance is required".into()))?;
    config.set("family", family);
    if !args.polys.is_empty() {
        config.set("poly", &args.polys);
        return from_texts(config, family, &args.polys);
    }
    let (p, k, n, seed) = (config.p, config.k, config.n, config.seed);
    let instance = match family {
        Family::LinearShifted => linear_shifted(&tower(p, k)?, n, seed)?,
        Family::LinearBase => linear_base_unsat(&base_field(p, k)?, n, seed)?,
        Family::SparseShifted => {
            config.set("sparsity", args.sparsity);
            config.set("degree", args.degree);
            sparse_shifted(&tower(p, k)?, n, args.sparsity, args.degree, seed)?
        }
        Family::LiftedPairwise => pairwise_lifted(&tower(p, k)?, n, seed)?,
        Family::Symmetric => {
            config.set("m", args.m);
            symmetric_system(&base_field(p, k)?, n, args.m, seed)?
        }
    };
    Ok(instance)
}

fn with_config(mut report: Value, config: &RunConfig) -> Value {
    report["config"] = config.to_json();
    report
}

pub fn cmd_gen(mut config: RunConfig, args: &InstanceArgs) -> Result<Outcome, CliError> {
    let instance = build_instance(&mut config, args)?;
    Ok(Outcome::ok(with_config(instance.to_json(), &config)))
}

pub fn cmd_refute(mut config: RunConfig, args: &RefuteArgs) -> Result<Outcome, CliError> {
    let instance = build_instance(&mut config, &args.instance)?;
    config.set("constructor", &args.constructor);
    config.set("max_degree", args.max_degree);
    let registry = RefuterRegistry::with_builtins();
    let options = RefuteOptions {
        max_degree: args.max_degree,
    };
    let cert = if args.constructor == "auto" {
        registry.auto(&instance, &options)?
    } else {
        let refuter = registry.get(&args.constructor)?;
        if instance.family != InstanceFamily::Custom && !refuter.accepts(instance.family) {
            return Err(CliError::Usage(format!(
                "constructor '{}' does not handle {} instances",
                refuter.name(),
                instance.family.as_str()
            )));
        }
        refuter.refute(&instance, &options)?
    };
    let report = verify(&instance, &cert)?;
    let mut out = certificate_to_json(&instance, &cert);
    out["verification"] = report.to_json(&instance.layout);
    Ok(Outcome {
        report: with_config(out, &config),
        exit_code: if report.valid { 0 } else { 3 },
    })
}

pub fn cmd_verify(mut config: RunConfig, args: &VerifyArgs) -> Result<Outcome, CliError> {
    config.set("certificate", &args.certificate);
    let (embedded, cert) = certificate_from_json(&read_json(&args.certificate)?)?;
    let instance = match &args.instance {
        Some(path) => {
            config.set("instance", path);
            let given = Instance::from_json(&read_json(path)?)?;
            if given.field.spec() != embedded.field.spec() {
                return Err(Error::FieldMismatch(format!(
                    "certificate is over {}, instance is over {}",
                    embedded.field.spec(),
                    given.field.spec()
                ))
                .into());
            }
            given
        }
        None => embedded,
    };
    let report = verify(&instance, &cert)?;
    let mut out = report.to_json(&instance.layout);
    out["provenance"] = serde_json::to_value(&cert.provenance).expect("provenance serializes");
    Ok(Outcome {
        report: with_config(out, &config),
        exit_code: if report.valid { 0 } else { 2 },
    })
}
