use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tmcf_core::analysis::{
    approx_certificate, baum_sweet_root, epsilon_check, hankel_suite, hyperquadratic_toeplitz,
    mahler_root, omega_quartic_check, reference_roots, riccati_check, spectrum_growth,
    verify_coefficient_support, verify_quartic_at_series, AnalysisError, QuarticInstance, RefRoot,
    SPECTRUM_PRECISION,
};
use tmcf_core::contfrac::{cf_eval, cf_expand, spectrum_window, CfError};
use tmcf_core::guess::{emit_certificate, guess_batch, load_certificate, GuessError, GuessProblem};
use tmcf_core::identity::{verify_identity_suite, verify_ring_eta, verify_sections, IdentityError};
use tmcf_core::{Certificate, PQStream, Report};

#[derive(Parser)]
#[command(
    name = "tmcf",
    version,
    about = "Verifier for Thue-Morse continued fractions over GF(2)"
)]
struct Cli {
    /// Series precision (number of coefficients below z^0); for `guess`, the
    /// number of coefficients required to vanish. Defaults to 2048, and for
    /// `guess` to 5(D+1)+32.
    #[arg(long, global = true, env = "TMCF_PRECISION")]
    prec: Option<usize>,
    /// Write the report to this file instead of stdout. For `guess`, the
    /// certificate file (single pair) or directory (batch); the report then
    /// goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also print the report JSON to stdout when --out is given.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Pair {
    /// First letter, e.g. "z^2+z".
    #[arg(long)]
    a: String,
    /// Second letter.
    #[arg(long)]
    b: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued-fraction expansion of ξ_{a,b} or of a reference series.
    Expand {
        #[arg(long, required_unless_present = "series")]
        a: Option<String>,
        #[arg(long, required_unless_present = "series")]
        b: Option<String>,
        /// mahler or baumsweet
        #[arg(long, conflicts_with_all = ["a", "b"])]
        series: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Polynomial identities of the tower for k = 1..=kmax.
    VerifyIdentities {
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Total-degree cap for the ring-valued fraction check.
        #[arg(long, default_value_t = 64)]
        eta_cap: usize,
    },
    /// The quartic at the series level, or re-verification of a guess
    /// certificate.
    VerifyQuartic {
        #[arg(long, required_unless_present = "cert")]
        a: Option<String>,
        #[arg(long, required_unless_present = "cert")]
        b: Option<String>,
        /// Certificate written by `guess --out`.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        cert: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// The differential equation and the square criterion.
    Riccati {
        #[command(flatten)]
        pair: Pair,
    },
    /// Determinant of the banded Toeplitz matrix of size 2^s - 2.
    Hyperquadratic {
        #[arg(long, default_value_t = 3)]
        s: u32,
    },
    /// Hankel determinants and the apwenian relation for ω.
    Hankel {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 4096)]
        apwenian: usize,
    },
    /// The quartic satisfied by ω and its link to ξ_{z+1,z}.
    Omega,
    /// Approximation by convergents and the degree-2 vanishing search.
    Approx {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 5)]
        lmax: u32,
        /// Coefficient-degree bounds for the degree-2 search.
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16])]
        search: Vec<usize>,
        /// Assert order >= ratio·D in the search.
        #[arg(long)]
        min_ratio: Option<usize>,
    },
    /// Recover the quartic relation by linear algebra.
    Guess {
        #[arg(long, required_unless_present = "batch")]
        a: Option<String>,
        #[arg(long, required_unless_present = "batch")]
        b: Option<String>,
        /// CSV file with one `a,b` pair per line.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        batch: Option<PathBuf>,
        #[arg(long)]
        degbound: Option<usize>,
    },
    /// Support of the (1/a, 1/b) expansion of the Thue-Morse fraction.
    Sections {
        #[arg(long, default_value_t = 13)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Mahler and Baum-Sweet reference series.
    Refroots {
        /// mahler, baumsweet or both
        #[arg(long, default_value = "both")]
        which: String,
        #[arg(long, default_value_t = 500)]
        window: usize,
    },
}

enum Failure {
    Usage(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvalidAlphabet(_) | AnalysisError::OutOfRange(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Internal(e.into()),
        }
    }
}

impl From<GuessError> for Failure {
    fn from(e: GuessError) -> Self {
        match e {
            GuessError::Analysis(a) => a.into(),
            GuessError::Underdetermined { .. } => Failure::Usage(e.to_string()),
            e => Failure::Internal(e.into()),
        }
    }
}

impl From<IdentityError> for Failure {
    fn from(e: IdentityError) -> Self {
        match e {
            IdentityError::IndexOutOfRange { .. } => Failure::Usage(e.to_string()),
            e => Failure::Internal(e.into()),
        }
    }
}

fn pair(a: &str, b: &str) -> Result<QuarticInstance, Failure> {
    Ok(QuarticInstance::parse(a, b)?)
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Internal)
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn expand(
    prec: usize,
    a: Option<String>,
    b: Option<String>,
    series: Option<String>,
    count: usize,
) -> Result<(BTreeMap<String, Value>, Vec<Certificate>), Failure> {
    if let Some(name) = series {
        let which: RefRoot = name.parse()?;
        let p = prec.max(SPECTRUM_PRECISION);
        let x = match which {
            RefRoot::Mahler => mahler_root(p),
            RefRoot::BaumSweet => baum_sweet_root(p),
        };
        let sp = spectrum_growth(&x, &[count])?;
        let label = match which {
            RefRoot::Mahler => "mahler",
            RefRoot::BaumSweet => "baum-sweet",
        };
        let mut c = Certificate::new(format!("expand/{label}"))
            .param("count", count)
            .param("precision", p)
            .param("extracted", sp.extracted);
        match sp.windows.first() {
            Some(w) => {
                c = c.param("max_degree", w.max_degree).param(
                    "histogram",
                    serde_json::to_value(&w.histogram).expect("map"),
                );
                if which == RefRoot::BaumSweet {
                    c.assert(
                        "partial quotients have degree <= 2",
                        w.max_degree <= 2,
                        format!("max degree {}", w.max_degree),
                    );
                }
            }
            None => c.assert(
                format!("{count} partial quotients reachable"),
                false,
                format!("only {}", sp.extracted),
            ),
        }
        return Ok((
            params(&[("series", json!(name)), ("count", json!(count))]),
            vec![c],
        ));
    }
    let (a, b) = (a.unwrap_or_default(), b.unwrap_or_default());
    let inst = pair(&a, &b)?;
    let stream = PQStream::thue_morse(&inst.a, &inst.b, count + 1)
        .map_err(|e| Failure::Internal(e.into()))?;
    let need = 2 * stream.degree_sum(stream.len());
    let x = cf_eval(&stream, need).map_err(|e| Failure::Internal(e.into()))?;
    let back = match cf_expand(&x, count) {
        Ok(s) => s,
        Err(CfError::HorizonExhausted { stream, .. }) => stream,
        Err(e) => return Err(Failure::Internal(e.into())),
    };
    let mut c = Certificate::new(format!("expand/a={},b={}", inst.a, inst.b)).param("count", count);
    c.assert(
        "expansion of the evaluated series returns the Thue-Morse word",
        back.quotients() == &stream.quotients()[..count.min(back.len())] && back.len() == count,
        format!("{} quotients recovered", back.len()),
    );
    if let Ok(sp) = spectrum_window(&back, back.len()) {
        c = c.param(
            "histogram",
            serde_json::to_value(&sp.histogram).expect("map"),
        );
    }
    Ok((
        params(&[("a", json!(a)), ("b", json!(b)), ("count", json!(count))]),
        vec![c],
    ))
}

/// Default series precision.
const DEFAULT_PREC: usize = 2048;

fn run(cli: Cli) -> Result<Report, Failure> {
    let prec = cli.prec.unwrap_or(DEFAULT_PREC);
    let (name, p, certs) = match cli.cmd {
        Cmd::Expand {
            a,
            b,
            series,
            count,
        } => {
            let (p, c) = expand(prec, a, b, series, count)?;
            ("expand", p, c)
        }
        Cmd::VerifyIdentities { kmax, eta_cap } => {
            let mut certs = verify_identity_suite(kmax)?;
            certs.push(verify_ring_eta(eta_cap).map_err(|e| Failure::Internal(e.into()))?);
            (
                "verify-identities",
                params(&[("kmax", json!(kmax)), ("eta_cap", json!(eta_cap))]),
                certs,
            )
        }
        Cmd::VerifyQuartic { a, b, cert, kmax } => {
            if let Some(path) = cert {
                let g = load_certificate(&path)?;
                let c = g.verify(prec)?;
                (
                    "verify-quartic",
                    params(&[
                        ("cert", json!(path.display().to_string())),
                        ("prec", json!(prec)),
                    ]),
                    vec![c],
                )
            } else {
                let (a, b) = (a.unwrap_or_default(), b.unwrap_or_default());
                let inst = pair(&a, &b)?;
                if prec < 64 {
                    return Err(Failure::Usage(format!("precision {prec} < 64")));
                }
                let certs = vec![
                    verify_quartic_at_series(&inst, prec)?,
                    epsilon_check(&inst, kmax)?,
                ];
                (
                    "verify-quartic",
                    params(&[
                        ("a", json!(a)),
                        ("b", json!(b)),
                        ("prec", json!(prec)),
                        ("kmax", json!(kmax)),
                    ]),
                    certs,
                )
            }
        }
        Cmd::Riccati { pair: pr } => {
            let inst = pair(&pr.a, &pr.b)?;
            (
                "riccati",
                params(&[
                    ("a", json!(pr.a)),
                    ("b", json!(pr.b)),
                    ("prec", json!(prec)),
                ]),
                vec![riccati_check(&inst, prec)?],
            )
        }
        Cmd::Hyperquadratic { s } => {
            let (c, det) = hyperquadratic_toeplitz(s)?;
            let c = c.param("determinant_terms", det.len());
            (
                "hyperquadratic",
                params(&[("s", json!(s))]),
                vec![c, verify_coefficient_support()],
            )
        }
        Cmd::Hankel { n, apwenian } => (
            "hankel",
            params(&[("n", json!(n)), ("apwenian", json!(apwenian))]),
            vec![hankel_suite(n, apwenian)?],
        ),
        Cmd::Omega => (
            "omega",
            params(&[("prec", json!(prec))]),
            vec![omega_quartic_check(prec)?],
        ),
        Cmd::Approx {
            pair: pr,
            lmax,
            search,
            min_ratio,
        } => {
            let inst = pair(&pr.a, &pr.b)?;
            let (mut c, recs, found) = approx_certificate(&inst, lmax, &search, min_ratio)?;
            c = c
                .param("records", serde_json::to_value(&recs).expect("records"))
                .param("search", serde_json::to_value(&found).expect("search"));
            (
                "approx",
                params(&[
                    ("a", json!(pr.a)),
                    ("b", json!(pr.b)),
                    ("lmax", json!(lmax)),
                ]),
                vec![c],
            )
        }
        Cmd::Guess {
            a,
            b,
            batch,
            degbound,
        } => {
            let (rows, cert_out) = (cli.prec, cli.out.clone());
            let pairs: Vec<(String, String)> = match &batch {
                Some(path) => read_pairs(path)?,
                None => vec![(a.unwrap_or_default(), b.unwrap_or_default())],
            };
            let mut problems = Vec::new();
            for (a, b) in &pairs {
                let inst = pair(a, b)?;
                let p = match degbound {
                    Some(d) => GuessProblem::new(inst, d, rows)?,
                    None => {
                        let mut p = GuessProblem::with_defaults(inst);
                        if let Some(n) = rows {
                            p.precision = n;
                            p.validate()?;
                        }
                        p
                    }
                };
                problems.push(p);
            }
            let mut certs = Vec::new();
            for (p, r) in problems.iter().zip(guess_batch(&problems)) {
                match r {
                    Ok(r) => {
                        if let Some(dest) = &cert_out {
                            let path = if batch.is_some() {
                                std::fs::create_dir_all(dest)
                                    .with_context(|| format!("creating {}", dest.display()))?;
                                dest.join(format!("guess-{}-{}.json", slug(&r.a), slug(&r.b)))
                            } else {
                                dest.clone()
                            };
                            emit_certificate(&r, &path)?;
                        }
                        certs.push(r.to_certificate());
                    }
                    Err(
                        e @ (GuessError::EmptyKernel { .. } | GuessError::AmbiguousKernel { .. }),
                    ) => {
                        let mut c =
                            Certificate::new(format!("guess/a={},b={}", p.inst.a, p.inst.b))
                                .param("degree_bound", p.degree_bound)
                                .param("precision", p.precision);
                        c.assert("relation found", false, e.to_string());
                        certs.push(c);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let mut pm = params(&[("pairs", json!(pairs.len()))]);
            if let Some(d) = degbound {
                pm.insert("degbound".into(), json!(d));
            }
            ("guess", pm, certs)
        }
        Cmd::Sections { depth, svg, csv } => {
            if depth < 2 {
                return Err(Failure::Usage("depth must be at least 2".into()));
            }
            let (c, report) = verify_sections(depth).map_err(|e| Failure::Internal(e.into()))?;
            if let Some(path) = svg {
                write_file(&path, &report.to_svg())?;
            }
            if let Some(path) = csv {
                write_file(&path, &report.to_csv())?;
            }
            let c = c.param("dots", serde_json::to_value(&report.dots).expect("dots"));
            ("sections", params(&[("depth", json!(depth))]), vec![c])
        }
        Cmd::Refroots { which, window } => {
            let list = match which.as_str() {
                "both" => vec![RefRoot::Mahler, RefRoot::BaumSweet],
                w => vec![w.parse::<RefRoot>()?],
            };
            let mut certs = Vec::new();
            for r in list {
                let (_, c, sp) = reference_roots(r, prec, window)?;
                certs.push(c.param("spectrum", serde_json::to_value(&sp).expect("spectrum")));
            }
            (
                "refroots",
                params(&[
                    ("which", json!(which)),
                    ("prec", json!(prec)),
                    ("window", json!(window)),
                ]),
                certs,
            )
        }
    };
    Ok(Report::new(name, p, certs))
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let body =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.eq_ignore_ascii_case("a,b"))
        {
            continue;
        }
        let Some((a, b)) = line.split_once(',') else {
            return Err(Failure::Usage(format!(
                "{}:{}: expected `a,b`",
                path.display(),
                i + 1
            )));
        };
        out.push((a.trim().to_string(), b.trim().to_string()));
    }
    if out.is_empty() {
        return Err(Failure::Usage(format!("{}: no pairs", path.display())));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Guess { .. } => None,
        _ => cli.out.clone(),
    };
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            let body = report.to_json_pretty();
            match &out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &body) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                    if json {
                        println!("{body}");
                    } else {
                        for c in &report.certificates {
                            println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
                        }
                    }
                }
                None => println!("{body}"),
            }
            if report.overall_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
