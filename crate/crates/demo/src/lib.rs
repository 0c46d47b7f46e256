//! wasm-bindgen entry points for the browser page in `www/`.
//!
//! Every function returns a JSON string with either the result fields or an
//! `error` field, so the same functions are testable natively.

use num_bigint::BigInt;
use serde_json::{json, Value};
use torus_core::abelian::{cokernel_structure, smith_normal_form};
use torus_core::catalog::{cyclic_group, norm_one_torus, split_torus, weil_restriction};
use torus_core::global::{GlobalField, GlobalTorusSpec, PlaceData};
use torus_core::local::LocalTorusData;
use torus_core::{FinAbGroup, IntMatrix, TorusError};
use wasm_bindgen::prelude::*;

const MAX_ORDER: u32 = 24;
const MAX_GENUS: u32 = 1000;

fn group_json(g: &FinAbGroup) -> Value {
    json!({
        "notation": g.to_string(),
        "invariant_factors": g.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "free_rank": g.free_rank().to_string(),
    })
}

fn error(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Local invariants of a torus split by a cyclic extension of degree `n`
/// with ramification index `e`, Frobenius the image of the generator.
/// `kind` is `norm_one`, `weil` or `split`.
#[wasm_bindgen]
pub fn local_invariants(kind: &str, n: u32, e: u32, q: u32) -> String {
    if n == 0 || n > MAX_ORDER {
        return error(format!("degree must be between 1 and {MAX_ORDER}"));
    }
    if e == 0 || !n.is_multiple_of(e) {
        return error("the ramification index must divide the degree");
    }
    let g = cyclic_group(n as usize);
    let lattice = match kind {
        "norm_one" => norm_one_torus(&g, 1 % n as usize),
        "weil" => Ok(weil_restriction(&g)),
        "split" => Ok(split_torus(&g, 1)),
        other => return error(format!("unknown torus `{other}`")),
    };
    let inertia = g.generated(&[(n / e) as usize % n as usize]);
    let result = lattice
        .and_then(|l| LocalTorusData::new(l, inertia, 1 % n as usize, BigInt::from(q)))
        .and_then(|data| data.report());
    match result {
        Ok(r) => json!({
            "rank": match kind { "norm_one" => n - 1, "weil" => n, _ => 1 }.to_string(),
            "good_reduction": r.good_reduction,
            "q_is_prime_power": r.q_is_prime_power,
            "l_factor_at_1": format!("{}/{}", r.l_factor_at_1.numer(), r.l_factor_at_1.denom()),
            "component_group": group_json(&r.component_group),
            "shyr_factor": r.shyr_factor.to_string(),
            "h1_inertia": group_json(&r.h1_inertia),
            "point_count": r.point_count.map(|c| c.to_string()),
        })
        .to_string(),
        Err(e) => error(e),
    }
}

fn parse_matrix(text: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<BigInt>> = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<BigInt>().map_err(|_| format!("`{s}` is not an integer")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err("empty matrix".into());
    }
    if rows.iter().any(|r| r.len() != cols) {
        return Err("rows have different lengths".into());
    }
    Ok(IntMatrix::from_bigint_rows(rows, cols))
}

/// Smith normal form of a matrix written as rows separated by `;` or new
/// lines, entries separated by spaces or commas.
#[wasm_bindgen]
pub fn smith_form(text: &str) -> String {
    let a = match parse_matrix(text) {
        Ok(a) => a,
        Err(e) => return error(e),
    };
    let snf = smith_normal_form(&a);
    let rows = |m: &IntMatrix| -> Vec<Vec<String>> {
        m.row_vecs()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    };
    json!({
        "diagonal": snf.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "u": rows(&snf.u),
        "v": rows(&snf.v),
        "cokernel": group_json(&cokernel_structure(&a)),
    })
    .to_string()
}

/// Shyr invariant of the norm-one torus of a cyclic cover of degree `n` of
/// a curve of genus `genus` over `F_q`, totally ramified at one place with
/// residue field `F_q`.
#[wasm_bindgen]
pub fn function_field_shyr(n: u32, q: u32, genus: u32) -> String {
    if n == 0 || n > MAX_ORDER {
        return error(format!("degree must be between 1 and {MAX_ORDER}"));
    }
    if genus > MAX_GENUS {
        return error(format!("genus must be at most {MAX_GENUS}"));
    }
    let g = cyclic_group(n as usize);
    let result = norm_one_torus(&g, 1 % n as usize).and_then(|t| {
        let place = PlaceData {
            label: "p".into(),
            decomposition: g.whole(),
            inertia: g.whole(),
            frobenius: 0,
            residue_q: BigInt::from(q),
        };
        let field = GlobalField::Function {
            q: BigInt::from(q),
            genus: genus.into(),
        };
        let spec = GlobalTorusSpec::new(field, t, vec![place])?;
        Ok::<_, TorusError>((spec.finite_part()?, spec.pole_order(), spec.shyr_invariant()?))
    });
    match result {
        Ok((finite, pole, v)) => json!({
            "finite_part": finite.to_string(),
            "pole_order": pole.to_string(),
            "coefficient": format!("{}/{}", v.coefficient.numer(), v.coefficient.denom()),
            "lnq_exponent": v.lnq_exponent.to_string(),
            "rendered": v.to_string(),
            "quasi_discriminant": v.quasi_discriminant().to_string(),
        })
        .to_string(),
        Err(e) => error(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn local_examples() {
        let v = parse(&local_invariants("norm_one", 6, 2, 7));
        assert_eq!(v["shyr_factor"], "2");
        assert_eq!(v["component_group"]["notation"], "ℤ/2");
        let v = parse(&local_invariants("norm_one", 5, 1, 4));
        assert_eq!(v["good_reduction"], true);
        // Φ_5(4) = 4^4 + 4^3 + 4^2 + 4 + 1
        assert_eq!(v["point_count"], "341");
        let v = parse(&local_invariants("weil", 4, 4, 3));
        assert_eq!(v["shyr_factor"], "1");
        assert!(parse(&local_invariants("weil", 4, 3, 3))["error"].is_string());
        assert!(parse(&local_invariants("cube", 4, 1, 3))["error"].is_string());
        assert!(parse(&local_invariants("split", 4, 1, 1))["error"].is_string());
    }

    #[test]
    fn smith_examples() {
        let v = parse(&smith_form("2 4; 6 8"));
        assert_eq!(v["diagonal"], json!(["2", "4"]));
        assert_eq!(v["cokernel"]["notation"], "ℤ/2 ⊕ ℤ/4");
        let v = parse(&smith_form("1, 1"));
        assert_eq!(v["cokernel"]["notation"], "0");
        assert!(parse(&smith_form("1 2; 3"))["error"].is_string());
        assert!(parse(&smith_form("x"))["error"].is_string());
    }

    #[test]
    fn shyr_examples() {
        let v = parse(&function_field_shyr(3, 3, 0));
        assert_eq!(v["coefficient"], "27/1");
        assert_eq!(v["lnq_exponent"], "0");
        let v = parse(&function_field_shyr(2, 5, 2));
        // 2 * 5^{-1}
        assert_eq!(v["coefficient"], "2/5");
        assert!(parse(&function_field_shyr(0, 3, 0))["error"].is_string());
        assert!(parse(&function_field_shyr(2, 3, u32::MAX))["error"].is_string());
    }
}
