//! Command execution. Each command resolves its arguments into a canonical
//! request, then computes a JSON body whose `outcome` decides the exit code.

use std::io::Read;

use bogomolov::class2::{certify, CentralFamily, Verdict};
use bogomolov::cohomology::{
    b0_from, verify_coprime_semidirect, verify_frobenius, verify_product, verify_sylow_injectivity, B0Options, H2Data,
    Report, Status,
};
use bogomolov::group::FiniteGroup;
use bogomolov::lattice::{flabby_report, saltman_kernel_lattice, sylow_kernel_lattice};
use bogomolov::spec::{Built, GroupSpec, LatticeSpec};
use bogomolov::{Error, Result};
use serde_json::{json, Map, Value};

use crate::cli::{Check, Command, Family, LatticeKind};

/// Largest acting group for lattice reports.
pub const LATTICE_GROUP_CAP: usize = 48;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub engine_cap: usize,
    pub reduce: bool,
}

/// A command with its arguments resolved.
pub enum Request {
    H2(GroupSpec),
    B0(GroupSpec),
    Certify { family: Family, p: u64, n: u32, pair_cap: u64 },
    Verify { check: Check, specs: Vec<GroupSpec>, degree: Option<u8> },
    SaltmanKernel(GroupSpec),
    SylowKernel(GroupSpec, u64),
    FlabbyReport(LatticeSpec),
}

fn read_arg(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("reading stdin: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn group_spec(arg: &str) -> Result<GroupSpec> {
    let text = read_arg(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        GroupSpec::parse(t)
    } else if !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric()) {
        Ok(GroupSpec::Named { name: t.to_string(), p: None, n: None })
    } else {
        Err(Error::Input(format!("cannot read {arg:?} as a group spec")))
    }
}

impl Request {
    pub fn resolve(cmd: &Command) -> Result<Self> {
        Ok(match cmd {
            Command::H2 { spec } => Request::H2(group_spec(spec)?),
            Command::B0 { spec } => Request::B0(group_spec(spec)?),
            Command::FamilyCertify { name, p, n, pair_cap } => {
                Request::Certify { family: *name, p: *p, n: *n, pair_cap: *pair_cap }
            }
            Command::Verify { check, specs, degree } => {
                if *check == Check::Product && specs.len() % 2 != 0 {
                    return Err(Error::Input("product checks take factor specs in pairs".into()));
                }
                let specs = specs.iter().map(|s| group_spec(s)).collect::<Result<_>>()?;
                Request::Verify { check: *check, specs, degree: *degree }
            }
            Command::Lattice { kind, spec, p } => match kind {
                LatticeKind::SaltmanKernel => Request::SaltmanKernel(group_spec(spec)?),
                LatticeKind::SylowKernel => {
                    let p = p.ok_or_else(|| Error::Input("sylow-kernel needs a prime".into()))?;
                    Request::SylowKernel(group_spec(spec)?, p)
                }
                LatticeKind::FlabbyReport => Request::FlabbyReport(LatticeSpec::parse(read_arg(spec)?.trim())?),
            },
            Command::Cache { .. } => unreachable!("cache commands are not requests"),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Request::H2(_) => "h2",
            Request::B0(_) => "b0",
            Request::Certify { .. } => "family-certify",
            Request::Verify { .. } => "verify",
            Request::SaltmanKernel(_) => "lattice saltman-kernel",
            Request::SylowKernel(..) => "lattice sylow-kernel",
            Request::FlabbyReport(_) => "lattice flabby-report",
        }
    }

    /// Everything that determines the result, in canonical form.
    pub fn canonical(&self, s: Settings) -> Value {
        let spec = |g: &GroupSpec| serde_json::to_value(g).expect("spec serializes");
        let mut v = match self {
            Request::H2(g) => json!({ "spec": spec(g), "engine_cap": s.engine_cap }),
            Request::B0(g) => {
                json!({ "spec": spec(g), "engine_cap": s.engine_cap, "subgroup_reduction": s.reduce })
            }
            Request::Certify { family, p, n, pair_cap } => json!({
                "family": family_name(*family), "p": p, "n": n, "pair_cap": pair_cap
            }),
            Request::Verify { check, specs, degree } => json!({
                "check": check_name(*check),
                "specs": specs.iter().map(spec).collect::<Vec<_>>(),
                "degree": degree,
                "engine_cap": s.engine_cap,
            }),
            Request::SaltmanKernel(g) => json!({ "spec": spec(g) }),
            Request::SylowKernel(g, p) => json!({ "spec": spec(g), "p": p }),
            Request::FlabbyReport(l) => json!({ "lattice": serde_json::to_value(l).expect("spec serializes") }),
        };
        v["command"] = json!(self.name());
        v
    }

    pub fn execute(&self, s: Settings) -> Result<Map<String, Value>> {
        match self {
            Request::H2(g) => h2(g, s),
            Request::B0(g) => b0(g, s),
            Request::Certify { family, p, n, pair_cap } => family_certify(*family, *p, *n, *pair_cap),
            Request::Verify { check, specs, degree } => verify(*check, specs, *degree, s),
            Request::SaltmanKernel(g) => saltman_kernel(g),
            Request::SylowKernel(g, p) => sylow_kernel(g, *p),
            Request::FlabbyReport(l) => {
                let r = flabby_report(&l.build()?, LATTICE_GROUP_CAP)?;
                Ok(body(true, [("tate_report", json!(r))]))
            }
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Saltman => "saltman",
        Family::FourGenerator => "thm54",
    }
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Product => "product",
        Check::CoprimeSemidirect => "coprime-semidirect",
        Check::Frobenius => "frobenius",
        Check::SylowInjectivity => "sylow-injectivity",
    }
}

fn body<const N: usize>(success: bool, fields: [(&str, Value); N]) -> Map<String, Value> {
    let mut m: Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    m.insert("outcome".into(), json!(if success { "success" } else { "failure" }));
    m
}

/// A table group within the engine cap, refusing to materialize large
/// families.
fn engine_group(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    if let Ok(Built::Family(f)) = spec.build() {
        if f.order().is_none_or(|o| o > cap as u128) {
            return Err(Error::SizeCap(format!(
                "group of order {}^{} exceeds the engine cap {cap}",
                f.p,
                f.order_log_p()
            )));
        }
    }
    let g = spec.table_group()?;
    if g.order() > cap {
        return Err(Error::SizeCap(format!("group of order {} exceeds the engine cap {cap}", g.order())));
    }
    Ok(g)
}

fn h2(spec: &GroupSpec, s: Settings) -> Result<Map<String, Value>> {
    let g = engine_group(spec, s.engine_cap)?;
    let h = H2Data::schur_multiplier(&g, s.engine_cap)?;
    Ok(body(true, [("h2", json!(h.invariants())), ("order", json!(g.order())), ("modulus", json!(h.modulus()))]))
}

fn b0(spec: &GroupSpec, s: Settings) -> Result<Map<String, Value>> {
    let g = engine_group(spec, s.engine_cap)?;
    let h = H2Data::schur_multiplier(&g, s.engine_cap)?;
    let r = b0_from(&g, h, B0Options { reduce: s.reduce, cap: s.engine_cap })?;
    Ok(body(
        true,
        [
            ("b0", json!(r.invariants())),
            ("h2", json!(r.h2.invariants())),
            ("order", json!(g.order())),
            ("bicyclic_classes", json!(r.classes.len())),
            ("subgroup_reduction", json!(s.reduce)),
        ],
    ))
}

fn family_certify(family: Family, p: u64, n: u32, pair_cap: u64) -> Result<Map<String, Value>> {
    let fam = match family {
        Family::Saltman => CentralFamily::saltman(p, n)?,
        Family::FourGenerator => CentralFamily::four_generator(p, n)?,
    };
    let cert = certify(&fam, pair_cap)?;
    let ok = cert.verdict == Verdict::Certified;
    Ok(body(ok, [("image", json!(cert.image())), ("verdict", json!(cert.verdict)), ("certificate", json!(cert))]))
}

fn overall(reports: &[&Report]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().all(|r| r.status == Status::VacuousPass) {
        Status::VacuousPass
    } else {
        Status::Pass
    }
}

fn verify(check: Check, specs: &[GroupSpec], degree: Option<u8>, s: Settings) -> Result<Map<String, Value>> {
    let cap = s.engine_cap;
    let mut results: Vec<Value> = Vec::new();
    let mut all: Vec<Report> = Vec::new();
    let mut push = |instance: Value, r: Report| {
        results.push(json!({ "instance": instance, "report": r }));
        all.push(r);
    };
    let val = |g: &GroupSpec| serde_json::to_value(g).expect("spec serializes");
    match check {
        Check::Product => {
            for pair in specs.chunks(2) {
                let (a, b) = (pair[0].table_group()?, pair[1].table_group()?);
                push(json!([val(&pair[0]), val(&pair[1])]), verify_product(&a, &b, cap)?);
            }
        }
        Check::CoprimeSemidirect => {
            let degrees: Vec<u8> = degree.map_or(vec![1, 2], |d| vec![d]);
            for g in specs {
                let (n, g0, sd) = g.semidirect()?;
                for &q in &degrees {
                    push(val(g), verify_coprime_semidirect(&n, &g0, &sd, q, cap)?);
                }
            }
        }
        Check::Frobenius => {
            for g in specs {
                let (n, g0, sd) = g.semidirect()?;
                push(val(g), verify_frobenius(&n, &g0, &sd, cap)?);
            }
        }
        Check::SylowInjectivity => {
            for g in specs {
                push(val(g), verify_sylow_injectivity(&engine_group(g, cap)?, cap)?);
            }
        }
    }
    let refs: Vec<&Report> = all.iter().collect();
    let status = overall(&refs);
    let vacuous = all.iter().filter(|r| r.status == Status::VacuousPass).count();
    Ok(body(
        status.passed(),
        [
            ("check", json!(check_name(check))),
            ("status", json!(status)),
            ("vacuous_instances", json!(vacuous)),
            ("results", json!(results)),
        ],
    ))
}

fn generator_actions(spec: &GroupSpec) -> Result<(FiniteGroup, FiniteGroup, Vec<Vec<u32>>)> {
    let (n, g0, sd) = spec.semidirect()?;
    if g0.order() > LATTICE_GROUP_CAP {
        return Err(Error::SizeCap(format!("acting group of order {} exceeds {LATTICE_GROUP_CAP}", g0.order())));
    }
    let acts = g0.generators().iter().map(|&x| sd.action[x as usize].clone()).collect();
    Ok((n, g0, acts))
}

fn saltman_kernel(spec: &GroupSpec) -> Result<Map<String, Value>> {
    let (n, g0, acts) = generator_actions(spec)?;
    let k = saltman_kernel_lattice(&n, &g0, &acts)?;
    let report = flabby_report(&k.kernel, LATTICE_GROUP_CAP)?;
    let coprime = num_gcd(n.order(), g0.order()) == 1;
    let evidence = report.coh_trivial_evidence;
    Ok(body(
        !coprime || evidence,
        [
            ("coprime", json!(coprime)),
            ("evidence_pass", json!(evidence)),
            ("kernel_lattice", json!(k)),
            ("tate_report", json!(report)),
        ],
    ))
}

fn sylow_kernel(spec: &GroupSpec, p: u64) -> Result<Map<String, Value>> {
    let (n, g0, acts) = generator_actions(spec)?;
    let k = sylow_kernel_lattice(&n, &g0, &acts, p, LATTICE_GROUP_CAP)?;
    Ok(body(
        k.evidence_pass != Some(false),
        [("branch", json!(k.branch)), ("evidence_pass", json!(k.evidence_pass)), ("sylow_kernel", json!(k))],
    ))
}

fn num_gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
