//! JSON and text renderings of a computation.
//!
//! Integers are decimal strings since matrix entries and Jacobian orders
//! overflow every fixed-width type. Key order is the field order below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{RingCtx, RingMatrix};
use crate::zeta::{CharPolyModP, ZetaNumerator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaReport {
    pub a: Vec<String>,
    pub exact: Vec<bool>,
    pub jacobian_order: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub g: usize,
    pub matrix: Vec<Vec<String>>,
    pub charpoly: Vec<String>,
    pub zeta: ZetaReport,
}

impl Report {
    pub fn new(ctx: &RingCtx, genus: usize, matrix: &RingMatrix, cp: &CharPolyModP, zeta: &ZetaNumerator) -> Self {
        Report {
            p: ctx.p(),
            precision: ctx.exponent(),
            g: genus,
            matrix: (0..matrix.rows())
                .map(|r| matrix.row(r).iter().map(|x| x.to_string()).collect())
                .collect(),
            charpoly: cp.coeffs.iter().map(|c| c.to_string()).collect(),
            zeta: ZetaReport {
                a: zeta.a().iter().map(|x| x.to_string()).collect(),
                exact: zeta.exact.clone(),
                jacobian_order: zeta.jacobian_order().map(|j| j.to_string()),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parses and checks shape consistency against `g`.
    pub fn from_json(s: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = 2 * r.g;
        if r.matrix.len() != dim || r.matrix.iter().any(|row| row.len() != dim) {
            return Err(Error::Parse(format!("matrix is not {dim}x{dim}")));
        }
        if r.charpoly.len() != dim + 1 || r.zeta.a.len() != r.g || r.zeta.exact.len() != r.g {
            return Err(Error::Parse("charpoly or zeta length disagrees with g".into()));
        }
        let unsigned = r.matrix.iter().flatten().chain(&r.charpoly);
        let signed = r.zeta.a.iter().chain(&r.zeta.jacobian_order);
        if !unsigned.clone().all(|s| is_decimal(s, false)) || !signed.clone().all(|s| is_decimal(s, true)) {
            return Err(Error::Parse("entries must be decimal integers".into()));
        }
        Ok(r)
    }
}

fn is_decimal(s: &str, allow_sign: bool) -> bool {
    let digits = if allow_sign {
        s.strip_prefix('-').unwrap_or(s)
    } else {
        s
    };
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Rows as `[a b c]`, each column right-aligned to its widest entry.
pub fn format_matrix(m: &RingMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_string()).collect())
        .collect();
    let widths: Vec<usize> = (0..m.cols())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    cells
        .iter()
        .map(|row| {
            let inner: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            format!("[{}]\n", inner.join(" "))
        })
        .collect()
}

/// The `zeta` text block following the matrix.
pub fn format_zeta(cp: &CharPolyModP, zeta: &ZetaNumerator) -> String {
    let mut out = String::new();
    let coeffs: Vec<String> = cp.coeffs.iter().map(|c| c.to_string()).collect();
    out.push_str(&format!(
        "charpoly mod p^{} (ascending): {}\n",
        cp.precision,
        coeffs.join(" ")
    ));
    for (i, (a, exact)) in zeta.a().iter().zip(&zeta.exact).enumerate() {
        let tag = if *exact { "exact" } else { "mod p^N only" };
        out.push_str(&format!("a_{} = {a} ({tag})\n", i + 1));
    }
    match zeta.jacobian_order() {
        Some(j) => out.push_str(&format!("#J = {j}\n")),
        None => out.push_str("#J = unknown (precision too low)\n"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{charpoly_frobenius, recover_zeta};

    fn sample() -> Report {
        let r = RingCtx::new(7, 2).unwrap();
        let m = RingMatrix::from_u64_rows(&r, &[&[1, 0], &[0, 7]]);
        let cp = charpoly_frobenius(&r, &m).unwrap();
        let z = recover_zeta(&r, &cp).unwrap();
        Report::new(&r, 1, &m, &cp, &z)
    }

    #[test]
    fn json_round_trip() {
        let rep = sample();
        let text = rep.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"p\"").unwrap() < text.find("\"N\"").unwrap());
    }

    #[test]
    fn json_rejects_bad_shapes() {
        let mut rep = sample();
        rep.matrix.pop();
        assert!(Report::from_json(&rep.to_json()).is_err());
        let mut rep = sample();
        rep.charpoly[0] = "x1".into();
        assert!(Report::from_json(&rep.to_json()).is_err());
        assert!(Report::from_json("{").is_err());
    }

    #[test]
    fn text_columns_align() {
        let r = RingCtx::new(101, 1).unwrap();
        let m = RingMatrix::from_u64_rows(&r, &[&[1, 100], &[22, 3]]);
        assert_eq!(format_matrix(&m), "[ 1 100]\n[22   3]\n");
    }
}
