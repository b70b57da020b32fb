//! Command-line front end. Exit codes: 0 success, 2 bad input,
//! 3 precision assumption violated, 4 internal invariant failure.

use std::io::Write;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::count::point_count_naive;
use crate::curve::validate;
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_matrix_with, FrobeniusOptions};
use crate::recurrence::EngineKind;
use crate::report::{format_matrix, format_zeta, Report};
use crate::zeta::{charpoly_frobenius, precision_for_exact_zeta, recover_zeta, ZetaNumerator};

#[derive(Parser, Debug)]
#[command(
    name = "frobzeta",
    version,
    about = "Frobenius matrices and zeta functions of y^2 = Q(x) over F_p"
)]
pub struct Cli {
    /// Worker threads for the reduction phases.
    #[arg(long, global = true, env = "FROBZETA_THREADS", default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Engine {
    Fast,
    Naive,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frobenius matrix mod p^N.
    Frobenius {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        n: u32,
        /// Coefficients c0,c1,...,c_(2g+1), ascending.
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Engine::Fast)]
        engine: Engine,
    },
    /// Matrix, charpoly and the recovered zeta numerator.
    Zeta {
        #[arg(long)]
        p: u64,
        /// Defaults to the smallest precision that makes every coefficient exact.
        #[arg(long = "N")]
        n: Option<u32>,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Engine::Fast)]
        engine: Engine,
    },
    /// Brute-force point count over F_(p^k), k in {1, 2}.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
    },
    /// Reproduce the reference matrix and Jacobian orders.
    Selftest,
}

/// `"c0,c1,..."` into integers; whitespace around entries is ignored.
pub fn parse_coefficients(s: &str) -> Result<Vec<BigInt>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty coefficient list".into()));
    }
    s.split(',')
        .map(|c| {
            let c = c.trim();
            let digits = c.strip_prefix(['-', '+']).unwrap_or(c);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("bad coefficient {c:?}")));
            }
            BigInt::from_str(c).map_err(|e| Error::Parse(format!("{c:?}: {e}")))
        })
        .collect()
}

fn options(threads: usize, engine: Engine) -> FrobeniusOptions {
    FrobeniusOptions {
        engine: match engine {
            Engine::Fast => EngineKind::Fast,
            Engine::Naive => EngineKind::Naive,
        },
        threads,
    }
}

fn zeta_output(p: u64, n: u32, q: &[BigInt], opts: FrobeniusOptions, format: Format, full: bool) -> Result<String> {
    let curve = validate(p, n, q)?;
    let m = frobenius_matrix_with(&curve, opts)?;
    let ctx = curve.ctx_n();
    let cp = charpoly_frobenius(ctx, &m)?;
    let zeta = recover_zeta(ctx, &cp)?;
    Ok(match format {
        Format::Json => Report::new(ctx, curve.genus(), &m, &cp, &zeta).to_json() + "\n",
        Format::Text if full => format_matrix(&m) + &format_zeta(&cp, &zeta),
        Format::Text => format_matrix(&m),
    })
}

const GOLDEN: [[u64; 4]; 4] = [
    [844821791581, 220205295882, 761288372988, 276316151941],
    [380371243619, 656847071320, 602083441024, 781051879529],
    [435515877861, 568305615656, 204167847992, 67069787872],
    [365277275232, 293850471444, 438804747301, 298366229783],
];

fn selftest(threads: usize) -> Result<String> {
    let mut out = String::new();
    let mut ok = true;
    let q = parse_coefficients("1,2,0,0,0,1")?;
    let curve = validate(10007, 3, &q)?;
    let m = frobenius_matrix_with(&curve, options(threads, Engine::Fast))?;
    let golden = (0..4).all(|r| (0..4).all(|c| m.get(r, c).value() == &GOLDEN[r][c].into()));
    ok &= golden;
    out.push_str(&format!(
        "{} frobenius p=10007 N=3 Q=x^5+2x+1\n",
        if golden { "ok  " } else { "FAIL" }
    ));
    let fixtures: [(u64, &[&str], &str); 2] = [
        (
            (1 << 50) - 27,
            &["-8207566", "336549388766991", "17004180735172175425188"],
            "1427247682301531613968301082755745957628851920",
        ),
        (
            (1 << 44) + 7,
            &[
                "2394254",
                "29576915959850",
                "88182558522652238508",
                "536178748943545477971279916",
            ],
            "95780984339838343855809310281601230464609800042292722",
        ),
    ];
    for (p, a, order) in fixtures {
        let a: Vec<BigInt> = a.iter().map(|s| BigInt::from_str(s).unwrap()).collect();
        let got = ZetaNumerator::from_exact(p, &a).jacobian_order().unwrap().to_string();
        let pass = got == order;
        ok &= pass;
        out.push_str(&format!(
            "{} jacobian order genus {} p={p}\n",
            if pass { "ok  " } else { "FAIL" },
            a.len()
        ));
    }
    if ok {
        Ok(out)
    } else {
        Err(Error::InvariantViolated(format!("selftest failed\n{out}")))
    }
}

pub fn execute(cli: Cli) -> Result<String> {
    let threads = cli.threads;
    match cli.command {
        Command::Frobenius {
            p,
            n,
            q,
            format,
            engine,
        } => zeta_output(p, n, &parse_coefficients(&q)?, options(threads, engine), format, false),
        Command::Zeta {
            p,
            n,
            q,
            format,
            engine,
        } => {
            let q = parse_coefficients(&q)?;
            let genus = q.len().saturating_sub(2) / 2;
            let n = n.unwrap_or_else(|| precision_for_exact_zeta(p, genus.max(1)));
            zeta_output(p, n, &q, options(threads, engine), format, true)
        }
        Command::Count { p, k, q } => Ok(format!("{}\n", point_count_naive(p, &parse_coefficients(&q)?, k)?)),
        Command::Selftest => selftest(threads),
    }
}

/// Parses `args`, runs, writes to stdout/stderr and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lists() {
        assert_eq!(
            parse_coefficients("1, -2,+3").unwrap(),
            vec![BigInt::from(1), BigInt::from(-2), BigInt::from(3)]
        );
        for bad in ["", "1,,2", "1,a", "-", "1.5", "1 2"] {
            assert!(parse_coefficients(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn count_subcommand() {
        let cli = Cli::try_parse_from(["frobzeta", "count", "--p", "3", "--k", "1", "--Q", "0,1,0,1"]).unwrap();
        assert_eq!(execute(cli).unwrap(), "4\n");
    }

    #[test]
    fn precision_violation_maps_to_exit_3() {
        let cli = Cli::try_parse_from(["frobzeta", "frobenius", "--p", "7", "--N", "3", "--Q", "1,2,0,0,0,1"]).unwrap();
        let err = execute(cli).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("(2N-1)(2g+1)"), "{err}");
    }
}
