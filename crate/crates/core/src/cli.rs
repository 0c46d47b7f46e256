//! The `torus` command line front end.
//!
//! Exit codes: 0 on success, 2 for input errors, 3 when an internal
//! cross-check fails.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::abelian::FinAbGroup;
use crate::catalog::{group_by_name, norm_one_torus, split_torus, weil_restriction};
use crate::error::TorusError;
use crate::format::{InputDocument, InputError};
use crate::global::{GlobalField, GlobalTorusSpec, PlaceData};
use crate::group::{FiniteGroup, Subgroup};
use crate::isogeny::{isogenous, isogenous_via};
use crate::lattice::GaloisLattice;
use crate::local::LocalTorusData;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CROSS_CHECK: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "torus", version, about = "Exact invariants of algebraic tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local invariants at one place: L-factor, component group, Shyr factor.
    Local {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Global Shyr invariant from the `global` block.
    Global {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// H¹ of the inertia subgroup (the whole group if none is given).
    H1 { file: String },
    /// Whether two lattices over the same group are isogenous.
    Isogeny {
        file1: String,
        file2: String,
        /// Group isomorphism from the first group to the second, as
        /// comma-separated images of 0, 1, ...
        #[arg(long, value_delimiter = ',')]
        map: Option<Vec<usize>>,
    },
    /// Write a catalog torus as an input document.
    ///
    /// split <group> <rank> | weil <group> | norm_one <group> [generator].
    /// Groups are named like 5, C6, D4, S3, Q8, C2xC2.
    Catalog {
        name: CatalogName,
        params: Vec<String>,
        #[arg(short, long)]
        output: String,
        /// Order of the inertia subgroup (a normal subgroup of that order);
        /// the whole group by default.
        #[arg(long)]
        inertia_order: Option<usize>,
        /// Frobenius element; the smallest valid one by default.
        #[arg(long)]
        frobenius: Option<usize>,
        #[arg(long, default_value = "3")]
        q: BigInt,
        /// Also write a global block with one place carrying the local data.
        #[arg(long)]
        global: Option<Case>,
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long, allow_hyphen_values = true)]
        discriminant: Option<BigInt>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogName {
    Split,
    Weil,
    #[value(name = "norm_one", alias = "norm-one")]
    NormOne,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Case {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "N", alias = "n")]
    N,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    CrossCheck(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e.torus_error() {
            Some(t) if t.is_internal() => Failure::CrossCheck(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<TorusError> for Failure {
    fn from(e: TorusError) -> Self {
        if e.is_internal() {
            Failure::CrossCheck(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Local { file, json } => cmd_local(&file, json, out, err),
        Command::Global { file, json } => cmd_global(&file, json, out),
        Command::H1 { file } => cmd_h1(&file, out),
        Command::Isogeny { file1, file2, map } => cmd_isogeny(&file1, &file2, map.as_deref(), out),
        Command::Catalog {
            name,
            params,
            output,
            inertia_order,
            frobenius,
            q,
            global,
            genus,
            discriminant,
        } => cmd_catalog(
            name,
            &params,
            &output,
            CatalogOptions {
                inertia_order,
                frobenius,
                q,
                global,
                genus,
                discriminant,
            },
            out,
        ),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::CrossCheck(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_CROSS_CHECK
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Input(format!("write failed: {e}"))
}

fn group_json(g: &FinAbGroup) -> Value {
    json!({
        "notation": g.to_string(),
        "free_rank": g.free_rank().to_string(),
        "invariant_factors": g.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn rational(r: &BigRational) -> String {
    // BigRational prints integers without a denominator
    format!("{}/{}", r.numer(), r.denom())
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value")).map_err(io)
}

fn cmd_local(file: &str, as_json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let data = InputDocument::read(file)?.local_data()?;
    let report = data.report()?;
    if !report.q_is_prime_power {
        let _ = writeln!(err, "warning: residue_q {} is not a prime power", data.residue_q());
    }
    let point_count = report.point_count.as_ref().map(ToString::to_string);
    if as_json {
        return print_json(
            out,
            &json!({
                "good_reduction": report.good_reduction,
                "q_is_prime_power": report.q_is_prime_power,
                "l_factor_at_1": rational(&report.l_factor_at_1),
                "component_group": group_json(&report.component_group),
                "geometric_component_group": group_json(&report.geometric_component_group),
                "shyr_factor": report.shyr_factor.to_string(),
                "h1_inertia": group_json(&report.h1_inertia),
                "point_count": point_count,
            }),
        );
    }
    let lines = [
        format!("good_reduction: {}", report.good_reduction),
        format!("q_is_prime_power: {}", report.q_is_prime_power),
        format!("l_factor_at_1: {}", rational(&report.l_factor_at_1)),
        format!("component_group: {}", report.component_group),
        format!("geometric_component_group: {}", report.geometric_component_group),
        format!("shyr_factor: {}", report.shyr_factor),
        format!("h1_inertia: {}", report.h1_inertia),
        format!("point_count: {}", point_count.as_deref().unwrap_or("n/a")),
    ];
    writeln!(out, "{}", lines.join("\n")).map_err(io)
}

fn cmd_global(file: &str, as_json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = InputDocument::read(file)?.global_spec()?;
    let reports = spec.local_reports()?;
    let value = spec.shyr_invariant()?;
    let finite = spec.finite_part()?;
    let case = match spec.field() {
        GlobalField::Function { .. } => "F",
        GlobalField::Number { .. } => "N",
    };
    let c_infinity = if value.archimedean_unevaluated { "unevaluated" } else { "absent" };
    if as_json {
        let places: Vec<Value> = reports
            .iter()
            .map(|(label, r)| {
                json!({
                    "label": label,
                    "shyr_factor": r.shyr_factor.to_string(),
                    "component_group": group_json(&r.component_group),
                })
            })
            .collect();
        return print_json(
            out,
            &json!({
                "case": case,
                "places": places,
                "finite_part": finite.to_string(),
                "pole_order": spec.pole_order().to_string(),
                "shyr_invariant": {
                    "coefficient": rational(&value.coefficient),
                    "lnq_exponent": value.lnq_exponent.to_string(),
                    "sqrt_disc_exponent": value.sqrt_disc_exponent.to_string(),
                    "archimedean_unevaluated": value.archimedean_unevaluated,
                },
                "rendered": value.to_string(),
                "quasi_discriminant": value.quasi_discriminant().to_string(),
                "C_infinity": c_infinity,
            }),
        );
    }
    let mut lines = vec![format!("case: {case}")];
    for (label, r) in &reports {
        lines.push(format!(
            "place {label}: shyr_factor {} (component group {})",
            r.shyr_factor, r.component_group
        ));
    }
    lines.extend([
        format!("finite_part: {finite}"),
        format!("pole_order: {}", spec.pole_order()),
        format!("shyr_invariant: {value}"),
        format!("coefficient: {}", rational(&value.coefficient)),
        format!("lnq_exponent: {}", value.lnq_exponent),
        format!("sqrt_disc_exponent: {}", value.sqrt_disc_exponent),
        format!("C_infinity: {c_infinity}"),
        format!("quasi_discriminant: {}", value.quasi_discriminant()),
    ]);
    writeln!(out, "{}", lines.join("\n")).map_err(io)
}

fn cmd_h1(file: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let doc = InputDocument::read(file)?;
    let h1 = if doc.has_local_data() {
        let data = doc.local_data()?;
        data.h1_inertia()?
    } else {
        let lattice = doc.lattice()?;
        lattice.h1(&lattice.group().whole())?
    };
    writeln!(out, "{h1}").map_err(io)
}

fn cmd_isogeny(a: &str, b: &str, map: Option<&[usize]>, out: &mut dyn Write) -> Result<(), Failure> {
    let la = InputDocument::read(a)?.lattice()?;
    let lb = InputDocument::read(b)?.lattice()?;
    let result = match map {
        Some(phi) => isogenous_via(&la, &lb, phi),
        None => isogenous(&la, &lb),
    };
    let result = result.map_err(|e| match e {
        TorusError::GroupMismatch => Failure::Input(format!(
            "{e}; pass --map with an explicit isomorphism to compare across groups"
        )),
        e => e.into(),
    })?;
    writeln!(out, "isogenous: {result}").map_err(io)
}

struct CatalogOptions {
    inertia_order: Option<usize>,
    frobenius: Option<usize>,
    q: BigInt,
    global: Option<Case>,
    genus: u64,
    discriminant: Option<BigInt>,
}

fn group_param(params: &[String], i: usize) -> Result<FiniteGroup, Failure> {
    let name = params
        .get(i)
        .ok_or_else(|| Failure::Input("missing group parameter".into()))?;
    group_by_name(name).ok_or_else(|| Failure::Input(format!("unknown group `{name}`")))
}

fn usize_param(params: &[String], i: usize, what: &str) -> Result<Option<usize>, Failure> {
    params
        .get(i)
        .map(|s| {
            s.parse()
                .map_err(|_| Failure::Input(format!("{what} `{s}` is not a non-negative integer")))
        })
        .transpose()
}

fn catalog_lattice(name: CatalogName, params: &[String]) -> Result<GaloisLattice, Failure> {
    let (lattice, used) = match name {
        CatalogName::Split => {
            let g = group_param(params, 0)?;
            let d = usize_param(params, 1, "rank")?
                .ok_or_else(|| Failure::Input("split needs <group> <rank>".into()))?;
            (split_torus(&g, d), 2)
        }
        CatalogName::Weil => (weil_restriction(&group_param(params, 0)?), 1),
        CatalogName::NormOne => {
            let g = group_param(params, 0)?;
            let generator = match usize_param(params, 1, "generator")? {
                Some(s) => s,
                None => g
                    .elements()
                    .find(|&x| g.element_order(x) == g.order())
                    .ok_or_else(|| Failure::Input("norm_one needs a cyclic group".into()))?,
            };
            (norm_one_torus(&g, generator)?, 2)
        }
    };
    if params.len() > used {
        return Err(Failure::Input(format!("unexpected parameter `{}`", params[used])));
    }
    Ok(lattice)
}

fn cmd_catalog(
    name: CatalogName,
    params: &[String],
    output: &str,
    opts: CatalogOptions,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let lattice = catalog_lattice(name, params)?;
    let group = lattice.group().clone();
    let inertia = match opts.inertia_order {
        None => group.whole(),
        Some(e) => group
            .normal_subgroups()
            .into_iter()
            .find(|h| h.order() == e)
            .ok_or_else(|| Failure::Input(format!("no normal subgroup of order {e}")))?,
    };
    let frobenius = match opts.frobenius {
        Some(f) => f,
        None => first_frobenius(&group, &inertia),
    };
    let local = LocalTorusData::new(lattice.clone(), inertia.clone(), frobenius, opts.q.clone())?;
    let mut doc = InputDocument::from_local(&local);
    if let Some(case) = opts.global {
        let field = match case {
            Case::F => GlobalField::Function {
                q: opts.q.clone(),
                genus: opts.genus,
            },
            Case::N => GlobalField::Number {
                discriminant: opts
                    .discriminant
                    .ok_or_else(|| Failure::Input("--global N needs --discriminant".into()))?,
            },
        };
        let place = PlaceData {
            label: "p".into(),
            decomposition: group.whole(),
            inertia,
            frobenius,
            residue_q: opts.q,
        };
        doc = doc.with_global(&GlobalTorusSpec::new(field, lattice, vec![place])?);
    }
    std::fs::write(output, doc.to_json() + "\n")
        .map_err(|e| Failure::Input(format!("cannot write {output}: {e}")))?;
    writeln!(out, "wrote {output}").map_err(io)
}

fn first_frobenius(group: &FiniteGroup, inertia: &Subgroup) -> usize {
    group
        .elements()
        .find(|&f| inertia.quotient_generated_by(group, &group.whole(), f))
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("torus").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&[]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["local", "/nonexistent/file.json"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn catalog_params() {
        assert!(catalog_lattice(CatalogName::Split, &["C2".into()]).is_err());
        assert!(catalog_lattice(CatalogName::Weil, &["C2".into(), "1".into()]).is_err());
        assert_eq!(catalog_lattice(CatalogName::NormOne, &["C2xC3".into()]).unwrap().rank(), 5);
        assert!(catalog_lattice(CatalogName::NormOne, &["S3".into()]).is_err());
        assert!(catalog_lattice(CatalogName::NormOne, &["C4".into(), "2".into()]).is_err());
    }

    #[test]
    fn cross_check_failures_are_exit_3() {
        let inner = TorusError::CrossCheckFailure("x".into());
        let wrapped = TorusError::AtPlace {
            label: "p".into(),
            source: Box::new(inner.clone()),
        };
        assert!(matches!(Failure::from(inner), Failure::CrossCheck(_)));
        assert!(matches!(Failure::from(wrapped), Failure::CrossCheck(_)));
        assert!(matches!(Failure::from(TorusError::SingularMatrix), Failure::Input(_)));
    }

    #[test]
    fn rationals_always_have_denominators() {
        assert_eq!(rational(&BigRational::from_integer(BigInt::from(4))), "4/1");
    }
}
