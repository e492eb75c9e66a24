//! Command-line front end.
//!
//! Exit codes: 0 success, 1 precondition failure or failed criterion,
//! 2 inconclusive search, 3 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::certificate::{replay, CertificateJson};
use crate::density::{self, DensityCertificate, Parameters, Status};
use crate::error::Error;
use crate::hopf::{self, Coverage};
use crate::ssgraph;
use crate::witt::{FqElement, DEFAULT_PRECISION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "morava-density",
    version,
    about = "Density certificates for quaternionic isogeny groups at height two"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for witnesses and certify the density criteria.
    Certify {
        #[arg(long, required_unless_present = "verify")]
        p: Option<u64>,
        #[arg(long, required_unless_present = "verify")]
        ell: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Extra powers of l tried beyond the minimal denominator.
        #[arg(long, default_value_t = density::DEFAULT_K_EXTRA)]
        k_extra: u32,
        /// Largest m in the search for norm l^(2m+1).
        #[arg(long, default_value_t = density::DEFAULT_M_MAX)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Re-check a saved JSON certificate without searching.
        #[arg(long, conflicts_with_all = ["p", "ell"])]
        verify: Option<PathBuf>,
    },
    /// Supersingular locus and l-isogeny graph for l in {2, 3}.
    Graph {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Coproduct, norm-relation and cocycle checks on truncated groups.
    Hopf {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_OK
            } else {
                let _ = write!(err, "{text}");
                EXIT_FAILURE
            };
        }
    };
    let result = match cli.command {
        Command::Certify { p, ell, precision, k_extra, m_max, format, output, verify } => match verify {
            Some(path) => cmd_verify(&path, format),
            None => {
                let params = Parameters { p: p.unwrap_or(0), ell: ell.unwrap_or(0), precision, k_extra, m_max };
                cmd_certify(&params, format).map(|(s, code)| (s, code, output))
            }
        },
        Command::Graph { p, ell, format, output } => cmd_graph(p, ell, format).map(|(s, c)| (s, c, output)),
        Command::Hopf { p, format, output } => cmd_hopf(p, format).map(|(s, c)| (s, c, output)),
    };
    match result {
        Ok((text, code, None)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
            code
        }
        Ok((text, code, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                EXIT_IO
            }
        },
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::SearchExhausted(_)) {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn verdict_code(c: &DensityCertificate) -> i32 {
    let statuses = [c.thm_lambda.status, c.cor_gamma1.status, c.thm_gamma.status];
    if statuses.contains(&Status::Fail) {
        EXIT_FAILURE
    } else if statuses.contains(&Status::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn cmd_certify(params: &Parameters, format: Format) -> Result<(String, i32), Failure> {
    let cert = density::certify(params)?;
    let text = match format {
        Format::Json => CertificateJson::from(&cert).to_json(),
        Format::Text => render_certificate(&cert),
    };
    Ok((text, verdict_code(&cert)))
}

type Output = (String, i32, Option<PathBuf>);

fn cmd_verify(path: &PathBuf, format: Format) -> Result<Output, Failure> {
    let raw = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let stored = CertificateJson::from_json(&raw)?;
    let r = replay(&stored)?;
    let code = if r.consistent() { verdict_code(&r.certificate) } else { EXIT_FAILURE };
    let text = match format {
        Format::Json => {
            let v = json!({
                "consistent": r.consistent(),
                "mismatches": r.mismatches,
                "verdicts": CertificateJson::from(&r.certificate).verdicts,
            });
            serde_json::to_string_pretty(&v).expect("plain data serializes") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            if r.consistent() {
                let _ = writeln!(s, "replay: consistent ({} witnesses re-checked)", r.certificate.witnesses.len());
            } else {
                let _ = writeln!(s, "replay: MISMATCH in {}", r.mismatches.join(", "));
            }
            s + &render_certificate(&r.certificate)
        }
    };
    Ok((text, code, None))
}

fn fq(x: &FqElement) -> String {
    match x.coeffs() {
        (a, 0) => a.to_string(),
        (0, 1) => "g".into(),
        (0, b) => format!("{b}g"),
        (a, 1) => format!("{a}+g"),
        (a, b) => format!("{a}+{b}g"),
    }
}

fn render_certificate(c: &DensityCertificate) -> String {
    let pr = &c.parameters;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "p = {}, l = {}, precision {}, k_extra {}, m_max {}",
        pr.p, pr.ell, pr.precision, pr.k_extra, pr.m_max
    );
    for (w, r) in &c.witnesses {
        let _ = writeln!(s, "{}: {}", w.role.name(), w.element);
        let mut line = format!("    N = {}, Tr = {}", r.norm, r.trace);
        if let Some(a) = &w.alpha {
            let _ = write!(line, ", alpha = {a}");
        }
        if let Some(e) = r.denominator_exponent {
            let _ = write!(line, ", l-denominator exponent {e}");
        }
        let _ = writeln!(s, "{line}");
        if let Some(d) = &r.digits {
            let _ = writeln!(s, "    t = [{}]", d.iter().map(fq).collect::<Vec<_>>().join(", "));
        }
        let checks: Vec<String> =
            r.checks.iter().map(|k| format!("{} {}", k.name, if k.ok { "ok" } else { "FAILED" })).collect();
        let _ = writeln!(s, "    checks: {}", checks.join(", "));
    }
    for f in &c.failures {
        let _ = writeln!(s, "search {}: {}", f.stage, f.message);
    }
    let target = if pr.p == 2 { "t~S_2" } else { "S_2" };
    let _ = writeln!(s, "Frattini rank {}", c.span_rank);
    let _ = writeln!(s, "thm_lambda (Lambda dense in Sl^0_2): {}", c.thm_lambda.label());
    let _ = writeln!(s, "cor_gamma1 (Gamma^1 dense in Sl_2): {}", c.cor_gamma1.label());
    let _ = writeln!(s, "thm_gamma (Gamma dense in {target}): {}", c.thm_gamma.label());
    s
}

fn cmd_graph(p: u64, ell: u64, format: Format) -> Result<(String, i32), Failure> {
    if !matches!(ell, 2 | 3) {
        return Err(Error::InvalidParameter(format!("l must be 2 or 3 (got {ell})")).into());
    }
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p).into());
    }
    let g = ssgraph::isogeny_graph(p, ell)?;
    let k = ssgraph::kohel_report(&g);
    let locus = g.locus();
    let mass = ssgraph::mass_formula(p);
    let (rational, pairs) =
        ssgraph::field_split(locus).ok_or_else(|| Error::Internal("locus is not Galois stable".into()))?;
    let ok = k.connected && k.parity_mix && k.regular && locus.len() as u64 == mass;
    let edges: Vec<(usize, usize, u32)> =
        g.edges().iter().enumerate().flat_map(|(a, es)| es.iter().map(move |&(b, m)| (a, b, m))).collect();
    let text = match format {
        Format::Json => {
            let v = json!({
                "p": p,
                "ell": ell,
                "vertices": locus.len(),
                "j_invariants": locus.js().iter().map(|j| { let (a, b) = j.coeffs(); [a, b] }).collect::<Vec<_>>(),
                "mass_formula": mass,
                "field_split": { "in_fp": rational, "conjugate_pairs": pairs },
                "edges": edges,
                "connected": k.connected,
                "diameter": k.diameter,
                "parity_mix": k.parity_mix,
                "regular": k.regular,
            });
            serde_json::to_string_pretty(&v).expect("plain data serializes") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "p = {p}, l = {ell}");
            let _ = writeln!(s, "vertices = {} (mass formula {mass})", locus.len());
            let _ = writeln!(s, "j = {}", locus.js().iter().map(fq).collect::<Vec<_>>().join(", "));
            let _ = writeln!(s, "field split: {rational} in F_p, {pairs} conjugate pairs");
            for (a, b, m) in &edges {
                let _ = writeln!(s, "  {} -> {} x{m}", fq(&locus.js()[*a]), fq(&locus.js()[*b]));
            }
            let _ = writeln!(
                s,
                "connected={}, diameter={}, parity_mix={}, regular={}",
                k.connected, k.diameter, k.parity_mix, k.regular
            );
            s
        }
    };
    Ok((text, if ok { EXIT_OK } else { EXIT_FAILURE }))
}

fn coverage_text(c: &Coverage) -> String {
    match c {
        Coverage::Exhaustive { pairs } => format!("exhaustive, {pairs} pairs"),
        Coverage::Sampled { pairs, seed } => format!("sampled, {pairs} pairs, seed {seed:#x}"),
    }
}

fn coverage_json(c: &Coverage) -> serde_json::Value {
    match c {
        Coverage::Exhaustive { pairs } => json!({ "mode": "exhaustive", "pairs": pairs }),
        Coverage::Sampled { pairs, seed } => json!({ "mode": "sampled", "pairs": pairs, "seed": seed }),
    }
}

fn cmd_hopf(p: u64, format: Format) -> Result<(String, i32), Failure> {
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p).into());
    }
    let ks: &[u32] = if p == 2 { &[1, 2, 3] } else { &[1] };
    let coproducts = ks.iter().map(|&k| hopf::verify_coproduct(k, p)).collect::<Result<Vec<_>, _>>()?;
    let s1 = if p == 2 { Some(hopf::verify_s1_relation(2)?) } else { None };
    let cocycles = hopf::verify_cocycles(p)?;
    let ok = coproducts.iter().all(|c| c.holds) && s1.is_none_or(|s| s.0) && cocycles.all_pass();
    let sampled = cocycles.classes.iter().any(|c| !c.coverage.is_exhaustive())
        || coproducts.iter().any(|c| !c.coverage.is_exhaustive());
    let mode = if sampled { "sampled" } else { "exhaustive" };
    let pass = |b: bool| if b { "pass" } else { "FAIL" };
    let text = match format {
        Format::Json => {
            let v = json!({
                "p": p,
                "mode": mode,
                "coproducts": coproducts.iter().map(|c| json!({
                    "k": c.k, "depth": c.depth, "group_order": c.group_order, "holds": c.holds,
                    "coverage": coverage_json(&c.coverage),
                })).collect::<Vec<_>>(),
                "s1_relation": s1.map(|(holds, n)| json!({ "holds": holds, "elements": n })),
                "cocycles": {
                    "depth": cocycles.depth,
                    "group_order": cocycles.group_order,
                    "classes": cocycles.classes.iter().map(|c| json!({
                        "name": c.name, "additive": c.additive, "image_rank": c.image_rank,
                        "coverage": coverage_json(&c.coverage),
                    })).collect::<Vec<_>>(),
                    "negative_control": cocycles.negative_control,
                },
                "all_pass": ok,
            });
            serde_json::to_string_pretty(&v).expect("plain data serializes") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "p = {p} ({mode} mode)");
            for c in &coproducts {
                let _ = writeln!(
                    s,
                    "coproduct t{}: {} (depth {}, {} elements, {})",
                    c.k,
                    pass(c.holds),
                    c.depth,
                    c.group_order,
                    coverage_text(&c.coverage)
                );
            }
            if let Some((holds, n)) = s1 {
                let _ = writeln!(s, "s1 = t2 + t2^2 + t1^3: {} ({n} elements)", pass(holds));
            }
            let _ = writeln!(
                s,
                "cocycles on the norm-one truncation (depth {}, {} elements):",
                cocycles.depth, cocycles.group_order
            );
            for c in &cocycles.classes {
                let _ = writeln!(
                    s,
                    "  {}: {} (image rank {}, {})",
                    c.name,
                    pass(c.additive),
                    c.image_rank,
                    coverage_text(&c.coverage)
                );
            }
            if let Some(nc) = cocycles.negative_control {
                let _ = writeln!(s, "negative control t3+t1t2 off the norm-one subgroup: {}", pass(nc));
            }
            s
        }
    };
    Ok((text, if ok { EXIT_OK } else { EXIT_FAILURE }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["morava-density"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn certify_exit_codes() {
        let (code, out, _) = run_str(&["certify", "--p", "3", "--ell", "2", "--precision", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"thm_lambda\""));
        let (code, out, _) = run_str(&["certify", "--p", "3", "--ell", "7"]);
        assert_eq!(code, 0);
        assert!(out.contains("hypothesis_failed: not a topological generator"));
        let (code, _, err) = run_str(&["certify", "--p", "4", "--ell", "2"]);
        assert_eq!(code, 1);
        assert!(err.contains("p must be prime"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["certify", "--p", "3"]).0, 1);
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn graph_command() {
        let (code, out, _) = run_str(&["graph", "--p", "11", "--ell", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("vertices = 2") && out.contains("connected=true"));
        let (code, out, _) = run_str(&["graph", "--p", "13", "--ell", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("vertices = 1"));
        assert_eq!(run_str(&["graph", "--p", "11", "--ell", "5"]).0, 1);
        assert_eq!(run_str(&["graph", "--p", "3", "--ell", "3"]).0, 1);
    }

    #[test]
    fn hopf_command() {
        let (code, out, _) = run_str(&["hopf", "--p", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("t1: pass") && out.contains("t1^3: pass"));
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let (code, _, _) = run_str(&["graph", "--p", "11", "--ell", "2", "--output", "/nonexistent/dir/x.txt"]);
        assert_eq!(code, 3);
        assert_eq!(run_str(&["certify", "--verify", "/nonexistent/cert.json"]).0, 3);
    }
}
