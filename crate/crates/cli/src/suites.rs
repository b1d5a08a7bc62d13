//! The acceptance criteria as runnable checks, each reporting a pass flag and
//! a deterministic detail object.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ipsforge_core::certificates::instances::{linear_base_unsat, linear_shifted, pairwise_lifted, symmetric_system};
use ipsforge_core::certificates::{
    monomial_axiom_expansion, refute_linear_frobenius, refute_linear_lowdegree, refute_nullstellensatz, refute_sparse,
    symmetric_pipeline, verify,
};
use ipsforge_core::gf::{Field, FieldElem, FieldTower, Level};
use ipsforge_core::lowerbounds::{
    degree_trial, eval_dimension, inverse_on_cube, lifted_instance, numerator_monomial_check, roabp_width,
    sparsity_probe, top_coeff, Budget, LiftKind, PRIME_64,
};
use ipsforge_core::poly::{cube_point, AxiomKind, Monomial, Poly};
use ipsforge_core::symfun::{ben_or_coeffs, compress_char_p, ehat, elem_sym, lucas_binom};
use ipsforge_core::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// Inputs shared by every criterion.
#[derive(Debug, Clone)]
pub struct SuiteContext {
    pub seed: u64,
    /// the `ipsforge` executable, for the process-level determinism check
    pub binary: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

type Check = fn(&SuiteContext) -> Result<(bool, Value), Error>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub time_limit: Option<Duration>,
    check: Check,
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        name: "frobenius certificates",
        time_limit: Some(Duration::from_secs(30)),
        check: frobenius_certificates,
    },
    Criterion {
        id: 2,
        name: "low-degree certificates",
        time_limit: None,
        check: lowdegree_certificates,
    },
    Criterion {
        id: 3,
        name: "sparse lifting",
        time_limit: None,
        check: sparse_lifting,
    },
    Criterion {
        id: 4,
        name: "symmetric pipeline",
        time_limit: None,
        check: symmetric_systems,
    },
    Criterion {
        id: 5,
        name: "degree lower bound",
        time_limit: Some(Duration::from_secs(10)),
        check: degree_lower_bound,
    },
    Criterion {
        id: 6,
        name: "top coefficient agreement",
        time_limit: None,
        check: top_coefficients,
    },
    Criterion {
        id: 7,
        name: "numerator monomial",
        time_limit: None,
        check: numerator_monomial,
    },
    Criterion {
        id: 8,
        name: "fixed-order roabp bound",
        time_limit: Some(Duration::from_secs(5)),
        check: fixed_order_roabp,
    },
    Criterion {
        id: 9,
        name: "sparsity probe",
        time_limit: None,
        check: sparsity_probes,
    },
    Criterion {
        id: 10,
        name: "nullstellensatz cross-check",
        time_limit: None,
        check: nullstellensatz_cross_check,
    },
    Criterion {
        id: 11,
        name: "property suites",
        time_limit: None,
        check: property_suites,
    },
];

impl Criterion {
    pub fn run(&self, ctx: &SuiteContext) -> CriterionResult {
        let start = Instant::now();
        let outcome = (self.check)(ctx);
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match outcome {
            Ok(r) => r,
            Err(e) => (false, json!({"error": e.code(), "message": e.to_string()})),
        };
        if let Some(limit) = self.time_limit {
            let within = elapsed <= limit;
            passed &= within;
            detail["time_limit_s"] = Value::from(limit.as_secs());
            detail["within_time_limit"] = Value::from(within);
        }
        CriterionResult {
            id: self.id,
            name: self.name,
            passed,
            detail,
            elapsed,
        }
    }
}

pub fn run_all(ctx: &SuiteContext) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c.run(ctx)).collect()
}

fn sub_seed(base: u64, tag: u64, i: u64) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (tag << 40) ^ i
}

fn tower(p: u64, k: usize) -> Result<Arc<FieldTower>, Error> {
    Ok(Arc::new(FieldTower::new(p, k)?))
}

fn field(p: u64, k: usize) -> Result<Arc<Field>, Error> {
    Ok(Arc::new(Field::with_degree(p, k)?))
}

fn frobenius_certificates(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let mut towers = Vec::new();
    for p in [2u64, 3, 5] {
        for k in 1..=3 {
            towers.push((p, k, tower(p, k)?));
        }
    }
    let mut cases = Vec::new();
    for (p, k, t) in &towers {
        for n in 1..=6usize {
            for s in 0..5u64 {
                cases.push((*p, *k, n, s, t.clone()));
            }
        }
    }
    let rows = cases
        .par_iter()
        .map(|(p, k, n, s, t)| {
            let inst = linear_shifted(
                t,
                *n,
                sub_seed(ctx.seed, 1, (*p << 16) | ((*k as u64) << 8) | (*n as u64) << 4 | s),
            )?;
            let cert = refute_linear_frobenius(&inst.axioms[0], t)?;
            let valid = verify(&inst, &cert)?.valid;
            let deg = cert.stats().max_degree_a;
            Ok((*p, *k, *n, *s, valid, deg, deg <= *k * *p as usize))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let failures: Vec<Value> = rows
        .iter()
        .filter(|r| !(r.4 && r.6))
        .map(|r| json!({"p": r.0, "k": r.1, "n": r.2, "seed_index": r.3, "valid": r.4, "max_degree_a": r.5}))
        .collect();
    let worst_ratio = rows
        .iter()
        .map(|r| r.5 as f64 / (r.1 as f64 * r.0 as f64))
        .fold(0.0, f64::max);
    Ok((
        failures.is_empty(),
        json!({
            "instances": rows.len(),
            "valid": rows.iter().filter(|r| r.4).count(),
            "within_degree_bound": rows.iter().filter(|r| r.6).count(),
            "max_degree_over_kp": worst_ratio,
            "failures": failures,
        }),
    ))
}

fn lowdegree_certificates(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let mut combos = Vec::new();
    for p in [2u64, 3] {
        for k in 1..=3usize {
            let f = field(p, k)?;
            for n in 1..=6usize {
                combos.push((p, k, n, f.clone()));
            }
        }
    }
    let mut collected = Vec::new();
    let mut attempts = 0u64;
    while collected.len() < 50 && attempts < 5000 {
        let (p, k, n, f) = &combos[attempts as usize % combos.len()];
        let seed = sub_seed(ctx.seed, 2, attempts);
        attempts += 1;
        let inst = match linear_base_unsat(f, *n, seed) {
            Ok(inst) => inst,
            Err(Error::SatisfiableInstance) => continue,
            Err(e) => return Err(e),
        };
        let cert = refute_linear_lowdegree(&inst.axioms[0])?;
        let valid = verify(&inst, &cert)?.valid;
        let deg = cert.a[0].degree();
        collected.push((*p, *k, *n, valid, deg, deg <= *k * (*p as usize - 1)));
    }
    let ok = collected.len() == 50 && collected.iter().all(|r| r.3 && r.5);
    let at_bound = collected.iter().filter(|r| r.4 == r.1 * (r.0 as usize - 1)).count();
    Ok((
        ok,
        json!({
            "instances": collected.len(),
            "valid": collected.iter().filter(|r| r.3).count(),
            "within_degree_bound": collected.iter().filter(|r| r.5).count(),
            "degree_equal_to_bound": at_bound,
            "fields": collected.iter().map(|r| format!("p={} k={} n={}", r.0, r.1, r.2)).collect::<std::collections::BTreeSet<_>>().len(),
        }),
    ))
}

fn sparse_lifting(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let t = tower(2, 3)?;
    let ext = t.ext();
    let p = t.p();
    let mut valid = 0;
    let mut expansions = 0;
    let mut expansion_failures = 0;
    let mut max_degree = 0;
    for i in 0..20 {
        let inst = pairwise_lifted(&t, 4, sub_seed(ctx.seed, 3, i))?;
        let f = &inst.axioms[0];
        let cert = refute_sparse(f, &t)?;
        valid += usize::from(verify(&inst, &cert)?.valid);
        max_degree = max_degree.max(cert.stats().max_degree);
        let n = f.nvars();
        for (mu, _) in f.terms().filter(|(m, _)| !m.is_one()) {
            let x_mu = Poly::monomial(ext, mu.clone(), ext.one());
            let mut residual = &x_mu.pow(p) - &x_mu;
            for (j, e) in monomial_axiom_expansion(ext, mu).iter().enumerate() {
                residual = &residual - &(e * &AxiomKind::Fermat(p).axiom(ext, n, j));
            }
            expansions += 1;
            expansion_failures += usize::from(!residual.is_zero());
        }
    }
    Ok((
        valid == 20 && expansion_failures == 0,
        json!({
            "instances": 20,
            "valid": valid,
            "max_certificate_degree": max_degree,
            "monomial_expansions": expansions,
            "nonzero_expansion_residuals": expansion_failures,
        }),
    ))
}

fn symmetric_systems(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let mut rows = Vec::new();
    for i in 0..20u64 {
        let p = [2u64, 3][i as usize % 2];
        let n = 2 + (i as usize / 2) % 7;
        let m = 1 + i as usize % 3;
        let f = field(p, 1)?;
        let sys = symmetric_system(&f, n, m, sub_seed(ctx.seed, 4, i))?;
        let (cert, trace) = symmetric_pipeline(&sys.axioms)?;
        let valid = verify(&sys, &cert)?.valid;
        let mut product_residuals = 0;
        for prod in &trace.products {
            product_residuals += usize::from(!prod.residual()?.is_zero());
        }
        let basis = ehat(&f, n)?;
        let mut disagreements = 0;
        for g in &sys.axioms {
            let compressed = compress_char_p(g)?;
            let values = g.eval_on_cube()?;
            for (idx, v) in values.iter().enumerate() {
                let a = cube_point(&f, n, idx as u64);
                let y = basis.iter().map(|e| e.eval(&a)).collect::<Result<Vec<_>, _>>()?;
                disagreements += usize::from(compressed.poly.eval(&y)? != *v);
            }
        }
        rows.push((p, n, m, valid, trace.products.len(), product_residuals, disagreements));
    }
    let ok = rows.iter().all(|r| r.3 && r.5 == 0 && r.6 == 0);
    Ok((
        ok,
        json!({
            "systems": rows.iter().map(|r| json!({
                "p": r.0, "n": r.1, "m": r.2, "valid": r.3,
                "products": r.4, "product_residuals": r.5, "compression_disagreements": r.6,
            })).collect::<Vec<_>>(),
        }),
    ))
}

fn degree_lower_bound(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let t = FieldTower::new(2, 12)?;
    let report = degree_trial(&t, 4, 200, sub_seed(ctx.seed, 5, 0), &Budget::default())?;
    let threshold = report.bound_union - 3.0 * report.sigma;
    Ok((
        report.within(report.bound_union, 3.0),
        json!({"threshold": threshold, "report": report}),
    ))
}

fn top_coefficients(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let towers = [tower(2, 8)?, tower(3, 4)?, tower(5, 3)?, tower(PRIME_64, 1)?];
    let mut agree = 0;
    let mut nonzero = 0;
    for i in 0..100u64 {
        let t = &towers[i as usize % towers.len()];
        let n = 1 + i as usize % 8;
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(ctx.seed, 6, i));
        let alphas: Vec<FieldElem> = (0..n).map(|_| t.embed(&t.sample(Level::Base, &mut rng))).collect();
        let beta = t.sample_beta(&mut rng);
        let top = top_coeff(t.ext(), &alphas, &beta)?;
        agree += usize::from(top.agree());
        nonzero += usize::from(!top.interpolated.is_zero());
    }
    Ok((
        agree == 100,
        json!({"cases": 100, "agree": agree, "nonzero_top_coefficient": nonzero}),
    ))
}

fn numerator_monomial(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let mut rows = Vec::new();
    for (fi, p) in [2u64, 3, PRIME_64].into_iter().enumerate() {
        let f = field(p, 1)?;
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(ctx.seed, 7, fi as u64));
        for n in 1..=4 {
            let beta = f.sample(&mut rng);
            let c = numerator_monomial_check(&f, n, &beta, &Budget::default())?;
            rows.push(json!({"p": p.to_string(), "n": n, "coefficient": f.format_elem(&c), "is_one": c == f.one()}));
        }
    }
    let ok = rows.iter().all(|r| r["is_one"] == true);
    Ok((ok, json!({"cases": rows})))
}

fn fixed_order_roabp(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let t = tower(2, 12)?;
    let lifted = lifted_instance(LiftKind::FixedOrder, 4, &t, sub_seed(ctx.seed, 8, 0))?;
    let inv = inverse_on_cube(lifted.polynomial(), &Budget::default())?;
    let (x, y) = (lifted.x_vars(), lifted.y_vars());
    let dim = eval_dimension(&inv, &x, &y);
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(ctx.seed, 8, 1));
    let mut orders: Vec<Vec<usize>> = vec![
        x.iter().chain(&y).copied().collect(),
        x.iter().rev().chain(&y).copied().collect(),
        x.iter().chain(y.iter().rev()).copied().collect(),
    ];
    for _ in 0..3 {
        let (mut xs, mut ys) = (x.clone(), y.clone());
        xs.shuffle(&mut rng);
        ys.shuffle(&mut rng);
        orders.push(xs.into_iter().chain(ys).collect());
    }
    let widths: Vec<usize> = orders.iter().map(|o| roabp_width(&inv, o)).collect();
    Ok((
        dim == 16 && widths.iter().all(|&w| w >= 16),
        json!({
            "eval_dimension": dim,
            "widths": widths,
            "orders": orders.iter().map(|o| o.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "inverse_sparsity": inv.sparsity(),
        }),
    ))
}

fn sparsity_probes(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let t = tower(2, 12)?;
    let mut sparsities = Vec::new();
    let mut met = 0;
    for i in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(ctx.seed, 9, i));
        let alphas: Vec<FieldElem> = (0..8).map(|_| t.embed(&t.base().sample_nonzero(&mut rng))).collect();
        let beta = t.sample_beta(&mut rng);
        let probe = sparsity_probe(t.ext(), &alphas, &beta, &Budget::default())?;
        met += usize::from(probe.meets_bound);
        sparsities.push(probe.sparsity);
    }
    Ok((
        met == 20,
        json!({"n": 8, "bound": 2, "meets_bound": met, "sparsities": sparsities}),
    ))
}

fn nullstellensatz_cross_check(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let combos = [
        (5u64, 1usize, 2usize),
        (2, 2, 3),
        (2, 3, 3),
        (3, 2, 3),
        (2, 2, 4),
        (7, 1, 2),
    ];
    let mut rows = Vec::new();
    let mut attempt = 0u64;
    while rows.len() < 10 && attempt < 200 {
        let (p, k, n) = combos[attempt as usize % combos.len()];
        let seed = sub_seed(ctx.seed, 10, attempt);
        attempt += 1;
        let f = field(p, k)?;
        let inst = match linear_base_unsat(&f, n, seed) {
            Ok(inst) => inst,
            Err(Error::SatisfiableInstance) => continue,
            Err(e) => return Err(e),
        };
        let low = refute_linear_lowdegree(&inst.axioms[0])?;
        let (cert, d) = refute_nullstellensatz(&inst, 8)?;
        let low_valid = verify(&inst, &low)?.valid;
        let null_valid = verify(&inst, &cert)?.valid;
        rows.push(json!({
            "p": p, "k": k, "n": n,
            "lowdegree_degree": low.a[0].degree(),
            "minimum_degree": d,
            "match": d == low.a[0].degree(),
            "both_valid": low_valid && null_valid,
        }));
    }
    let ok = rows.len() == 10 && rows.iter().all(|r| r["match"] == true && r["both_valid"] == true);
    Ok((ok, json!({"instances": rows})))
}

fn field_axioms(seed: u64) -> Result<Value, Error> {
    let fields = [
        field(2, 8)?,
        field(3, 5)?,
        field(5, 3)?,
        field(7, 1)?,
        field(PRIME_64, 1)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut pairs = 0;
    for i in 0..1000 {
        let f = &fields[i % fields.len()];
        let (a, b, c) = (f.sample(&mut rng), f.sample(&mut rng), f.sample(&mut rng));
        let p = f.characteristic() as u128;
        let mut ok = f.add(&a, &b) == f.add(&b, &a)
            && f.mul(&a, &b) == f.mul(&b, &a)
            && f.mul(&f.mul(&a, &b), &c) == f.mul(&a, &f.mul(&b, &c))
            && f.add(&f.add(&a, &b), &c) == f.add(&a, &f.add(&b, &c))
            && f.mul(&a, &f.add(&b, &c)) == f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            && f.add(&a, &f.neg(&a)).is_zero()
            && f.pow(&f.add(&a, &b), p) == f.add(&f.pow(&a, p), &f.pow(&b, p));
        if !a.is_zero() {
            ok &= f.mul(&a, &f.inv(&a)?) == f.one();
        }
        pairs += 1;
        failures += usize::from(!ok);
    }
    Ok(json!({"pairs": pairs, "failures": failures}))
}

fn random_poly<R: Rng>(f: &Arc<Field>, n: usize, max_exp: u32, terms: usize, rng: &mut R) -> Result<Poly, Error> {
    let t = (0..terms).map(|_| {
        let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
        (Monomial::from_exponents(&exps), f.sample(rng))
    });
    Poly::from_terms(f, n, t)
}

fn polynomial_identities(seed: u64) -> Result<Value, Error> {
    let fields = [field(2, 2)?, field(3, 1)?, field(5, 2)?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ml_fail, mut div_fail) = (0, 0);
    let cases = 60;
    for i in 0..cases {
        let f = &fields[i % fields.len()];
        let p = f.characteristic();
        let g = random_poly(f, 4, 4, 8, &mut rng)?;
        let m = g.ml();
        ml_fail += usize::from(m.ml() != m || !m.is_multilinear() || m.eval_on_cube()? != g.eval_on_cube()?);
        for kind in [AxiomKind::Boolean, AxiomKind::Fermat(p)] {
            let d = g.divide_by_axioms(kind);
            let reduced = d
                .remainder
                .terms()
                .all(|(mon, _)| mon.exponents().iter().all(|&e| e < kind.exponent()));
            div_fail += usize::from(d.reconstruct() != g || !reduced);
        }
    }
    Ok(json!({"polynomials": cases, "ml_failures": ml_fail, "division_failures": div_fail}))
}

fn lucas_table() -> Value {
    let mut failures = 0;
    let mut checked = 0;
    for p in [2u64, 3, 5, 7, 13] {
        let mut row = vec![1u64];
        for a in 0..=200u64 {
            if a > 0 {
                let mut next = vec![1u64; a as usize + 1];
                for b in 1..a as usize {
                    next[b] = (row[b - 1] + row[b]) % p;
                }
                row = next;
            }
            for b in 0..=200u64 {
                let direct = if b <= a { row[b as usize] } else { 0 };
                failures += usize::from(lucas_binom(a, b, p) != direct);
                checked += 1;
            }
        }
    }
    json!({"checked": checked, "failures": failures})
}

fn ben_or_identity() -> Result<Value, Error> {
    let mut failures = 0;
    let mut checked = 0;
    for f in [field(7, 1)?, field(11, 1)?, field(2, 3)?] {
        for n in 1..=6 {
            let form = ben_or_coeffs(&f, n)?;
            for k in 0..=n {
                failures += usize::from(form.expand(k) != elem_sym(&f, n, k)?);
                checked += 1;
            }
        }
    }
    Ok(json!({"checked": checked, "failures": failures}))
}

fn cli_determinism(ctx: &SuiteContext) -> Value {
    let Some(bin) = &ctx.binary else {
        return json!({"available": false, "identical": false});
    };
    let seed = ctx.seed.to_string();
    let runs: [Vec<&str>; 3] = [
        vec![
            "refute",
            "--family",
            "linear-shifted",
            "--p",
            "2",
            "--k",
            "3",
            "--n",
            "4",
            "--seed",
            &seed,
        ],
        vec![
            "refute",
            "--family",
            "symmetric",
            "--p",
            "3",
            "--n",
            "2",
            "--poly",
            "e1+e2+1",
        ],
        vec![
            "oracle",
            "degree-trial",
            "--p",
            "2",
            "--k",
            "6",
            "--n",
            "3",
            "--trials",
            "20",
            "--seed",
            &seed,
        ],
    ];
    let mut identical = 0;
    for args in &runs {
        let once = || {
            Command::new(bin)
                .args(args)
                .env_remove("IPSFORGE_BUDGET_N")
                .output()
                .ok()
                .filter(|o| o.status.success())
                .map(|o| o.stdout)
        };
        let (a, b) = (once(), once());
        identical += usize::from(a.is_some() && a == b);
    }
    json!({"available": true, "commands": runs.len(), "identical": identical == runs.len()})
}

fn property_suites(ctx: &SuiteContext) -> Result<(bool, Value), Error> {
    let fa = field_axioms(sub_seed(ctx.seed, 11, 0))?;
    let pi = polynomial_identities(sub_seed(ctx.seed, 11, 1))?;
    let lucas = lucas_table();
    let ben_or = ben_or_identity()?;
    let det = cli_determinism(ctx);
    let ok = fa["failures"] == 0
        && pi["ml_failures"] == 0
        && pi["division_failures"] == 0
        && lucas["failures"] == 0
        && ben_or["failures"] == 0
        && det["identical"] == true;
    Ok((
        ok,
        json!({
            "field_axioms": fa,
            "polynomial_identities": pi,
            "lucas": lucas,
            "ben_or": ben_or,
            "cli_determinism": det,
        }),
    ))
}
