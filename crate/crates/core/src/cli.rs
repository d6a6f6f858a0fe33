//! Command-line frontend. Exit codes: 0 success, 1 verification failure,
//! 2 usage or domain error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::adele::{Idele, Place};
use crate::arith::{kronecker, legendre, parse_rat, SymbolValue};
use crate::characters::{hecke_eval, well_definedness_sweep, QuadHeckeChar};
use crate::duality::{self, parse_wilson, Case, Engine, InsertionConfig};
use crate::error::{Error, Result};
use crate::fields::{class_group, conformal_block_dim, quad_ext};
use crate::kummer::{self, failure_case_report, kummer_conductor_exponent};
use crate::zeta::{self, ArchProfile, TestFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tate-reciprocity", version, about = "Tate's thesis, S-duality and quadratic reciprocity over Q")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Also write the report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Legendre or Kronecker symbol.
    Symbol(SymbolArgs),
    /// Idele arithmetic on literals `real=<rat>;p=<rat>;...`.
    #[command(subcommand)]
    Idele(IdeleCommand),
    /// Evaluate the quadratic Hecke character of discriminant D on an idele.
    HeckeEval {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        idele: String,
    },
    /// Check that the character is trivial on principal ideles r ≡ 1 mod |D|.
    HeckeSweep {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        rmax: u64,
    },
    /// Local and global zeta integrals.
    #[command(subcommand)]
    Zeta(ZetaCommand),
    /// L(s, χ_D), recovered from the completed L-function.
    Lfunction {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Complex point: `re`, `re,im` or `re+imi`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = zeta::MIN_TOL)]
        tol: f64,
    },
    /// |Λ(s) - Λ(1-s)|; exit 0 iff below 1e-8.
    Funceq {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// Complex point: `re`, `re,im` or `re+imi`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Fourier transform of x ↦ f(ax) against |a|^{-1} f̂(x/a); exit 0 iff below 1e-6.
    FourierCheck {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Ramification data of Q(√d).
    Quadext {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Class number and group structure of an imaginary quadratic field.
    Classnumber {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Dimension of the space of conformal blocks (D = 1 for Q).
    Blocks {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Amplitude of Wilson insertions in the presence of a t'Hooft insertion.
    Amplitude(ConfigArgs),
    /// S-duality: verify the reciprocity identities or transform a configuration.
    #[command(subcommand)]
    Sduality(SdualityCommand),
    /// Cubic Kummer extensions of Q(ζ₃).
    #[command(subcommand)]
    Kummer(KummerCommand),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "kind")]
struct SymbolKind {
    #[arg(long)]
    kronecker: bool,
    #[arg(long)]
    legendre: bool,
}

#[derive(Debug, Args)]
struct SymbolArgs {
    #[command(flatten)]
    kind: SymbolKind,
    /// Discriminant (Kronecker).
    #[arg(short = 'D', allow_hyphen_values = true, requires = "n")]
    d: Option<i64>,
    /// Modulus (Kronecker).
    #[arg(short = 'n', allow_hyphen_values = true)]
    n: Option<i64>,
    /// Residue (Legendre).
    #[arg(short = 'a', allow_hyphen_values = true, requires = "p")]
    a: Option<i64>,
    /// Odd prime (Legendre).
    #[arg(short = 'p')]
    p: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum IdeleCommand {
    /// Norm of an idele.
    Norm {
        /// Idele literal `real=..;p=..;rest=..`.
        #[arg(long)]
        x: String,
    },
    /// Product of two ideles.
    Mul {
        /// Idele literal `real=..;p=..;rest=..`.
        #[arg(long)]
        x: String,
        /// Idele literal `real=..;p=..;rest=..`.
        #[arg(long)]
        y: String,
    },
    /// Inverse of an idele.
    Inv {
        /// Idele literal `real=..;p=..;rest=..`.
        #[arg(long)]
        x: String,
    },
    /// Diagonal image of a nonzero rational.
    Tau {
        /// Nonzero rational, e.g. `-3/4`.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Wilson idele at a place (a prime or `inf`).
    Alpha {
        /// A prime or `inf`.
        #[arg(long)]
        place: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Profile {
    Gaussian,
    Signed,
}

impl From<Profile> for ArchProfile {
    fn from(p: Profile) -> ArchProfile {
        match p {
            Profile::Gaussian => ArchProfile::Gaussian,
            Profile::Signed => ArchProfile::SignedGaussian,
        }
    }
}

#[derive(Debug, Subcommand)]
enum ZetaCommand {
    /// Local factor at a prime: ∫ over p^n Z_p of χ(x)|x|^s d^×x.
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        level: i64,
        #[arg(long, allow_hyphen_values = true, default_value = "+1")]
        chi: String,
        /// Complex point: `re`, `re,im` or `re+imi`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Local factor at the real place.
    Real {
        #[arg(long, value_enum, default_value = "gaussian")]
        profile: Profile,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        scale: f64,
        /// Complex point: `re`, `re,im` or `re+imi`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Global zeta integral for a test function with the given levels.
    Global {
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        disc: i64,
        /// Complex point: `re`, `re,im` or `re+imi`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Levels `p:n,...` of the finite test-function factors.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        levels: String,
        /// Defaults to the profile matching the sign of D.
        #[arg(long, value_enum)]
        profile: Option<Profile>,
        #[arg(long, default_value_t = zeta::MIN_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Wilson insertions `place:mult,...`, e.g. `13:1` or `inf:1,2:2`.
    #[arg(long, default_value = "")]
    wilson: String,
    /// t'Hooft insertion Q(√d).
    #[arg(long = "thooft-d", allow_hyphen_values = true)]
    thooft_d: i64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    A,
    B,
    C,
    D,
    E,
    All,
}

#[derive(Debug, Subcommand)]
enum SdualityCommand {
    /// Run the reciprocity identities for all prime pairs up to pmax.
    Verify {
        #[arg(long)]
        pmax: u64,
        #[arg(long, value_enum, ignore_case = true, default_value = "all")]
        case: CaseArg,
    },
    /// Print the S-dual configuration.
    Transform(ConfigArgs),
}

#[derive(Debug, Subcommand)]
enum KummerCommand {
    /// Conductor and discriminant exponents of Q(ζ₃, ∛q) at 1 - ζ₃.
    Conductor {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Divisibility obstruction; exit 0 iff present.
    Failure {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Cubic reciprocity on random primary prime pairs.
    CubicCheck {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Formats with 10 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let sci = format!("{x:.9e}");
    let exp: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..10).contains(&exp) {
        format!("{:.*}", (9 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return fmt_f64(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
}

/// Parses `RE` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {t:?}")))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => parse(s)
            .map(|re| Complex64::new(re, 0.0))
            .or_else(|e| s.trim().parse::<Complex64>().map_err(|_| e)),
    }
}

fn parse_real(s: &str) -> Result<f64> {
    if let Ok(x) = s.trim().parse::<f64>() {
        return Ok(x);
    }
    parse_rat(s)?
        .to_f64()
        .ok_or_else(|| Error::Parse(format!("not a number: {s:?}")))
}

fn parse_chi(s: &str) -> Result<SymbolValue> {
    match s.trim() {
        "1" | "+1" => Ok(SymbolValue::One),
        "-1" => Ok(SymbolValue::MinusOne),
        other => Err(Error::Parse(format!("chi must be +1 or -1, got {other:?}"))),
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

struct Report {
    json: bool,
    text: String,
    code: i32,
}

impl Report {
    fn new(json: bool) -> Report {
        Report {
            json,
            text: String::new(),
            code: EXIT_OK,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn emit<T: Serialize>(&mut self, value: &T) {
        let s = serde_json::to_string(value).expect("report values serialize");
        self.line(s);
    }

    /// Text line in human mode, JSON object otherwise.
    fn either<T: Serialize>(&mut self, human: impl FnOnce() -> String, value: &T) {
        if self.json {
            self.emit(value);
        } else {
            self.line(human());
        }
    }

    fn fail_if(&mut self, failed: bool) {
        if failed {
            self.code = EXIT_FAIL;
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut report = Report::new(cli.json);
    if let Err(e) = dispatch(cli.command, &mut report) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &report.text) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if out.write_all(report.text.as_bytes()).is_err() {
        return EXIT_USAGE;
    }
    report.code
}

fn dispatch(command: Command, r: &mut Report) -> Result<()> {
    match command {
        Command::Symbol(args) => symbol(args, r),
        Command::Idele(cmd) => idele(cmd, r),
        Command::HeckeEval { disc, idele } => {
            let chi = QuadHeckeChar::new(disc)?;
            let x: Idele = idele.parse()?;
            let v = hecke_eval(&chi, &x)?;
            r.either(|| v.to_string(), &json!({ "disc": disc, "idele": x.to_string(), "value": v }));
            Ok(())
        }
        Command::HeckeSweep { disc, rmax } => {
            let rep = well_definedness_sweep(disc, rmax)?;
            r.either(
                || {
                    let verdict = if rep.passed() { "PASS" } else { "FAIL" };
                    let mut s = format!("{verdict} D={} rmax={} checked={}", rep.disc, rep.r_max, rep.checked);
                    if let Some(c) = rep.first_counterexample {
                        let _ = write!(s, " counterexample r={c}");
                    }
                    s
                },
                &rep,
            );
            r.fail_if(!rep.passed());
            Ok(())
        }
        Command::Zeta(cmd) => zeta_cmd(cmd, r),
        Command::Lfunction { disc, s, tol } => {
            let s = parse_complex(&s)?;
            let v = zeta::dirichlet_l(disc, s, tol)?;
            r.either(|| fmt_complex(v), &json!({ "disc": disc, "s": complex_json(s), "value": complex_json(v) }));
            Ok(())
        }
        Command::Funceq { disc, s } => {
            let s = parse_complex(&s)?;
            let res = zeta::functional_eq_residual(disc, s)?;
            let ok = res < 1e-8;
            r.either(
                || format!("{} {}", fmt_f64(res), if ok { "OK" } else { "FAIL" }),
                &json!({ "disc": disc, "s": complex_json(s), "residual": res, "ok": ok }),
            );
            r.fail_if(!ok);
            Ok(())
        }
        Command::FourierCheck { a } => {
            let a = parse_real(&a)?;
            let rep = zeta::fourier_scaling_check(a, &zeta::default_fourier_samples())?;
            let ok = rep.max_residual < 1e-6;
            r.either(
                || {
                    format!(
                        "a={} residual={} without_prefactor={} {}",
                        fmt_f64(a),
                        fmt_f64(rep.max_residual),
                        fmt_f64(rep.max_residual_without_prefactor),
                        if ok { "OK" } else { "FAIL" }
                    )
                },
                &rep,
            );
            r.fail_if(!ok);
            Ok(())
        }
        Command::Quadext { d } => {
            let ext = quad_ext(d)?;
            r.either(|| ext.to_string(), &ext);
            Ok(())
        }
        Command::Classnumber { disc } => {
            let g = class_group(disc)?;
            r.either(|| format!("h={} structure={}", g.h, g.structure()), &g);
            Ok(())
        }
        Command::Blocks { disc } => {
            let n = conformal_block_dim(disc)?;
            r.either(|| n.to_string(), &json!({ "disc": disc, "blocks": n }));
            Ok(())
        }
        Command::Amplitude(args) => {
            let cfg = config(&args)?;
            let amp = duality::amplitude(&cfg)?;
            if r.json {
                r.emit(&amp);
            } else {
                r.line(amp.value.to_string());
                for f in &amp.derivation {
                    r.line(format!("  {}^{} -> {}", f.place, f.multiplicity, f.symbol));
                }
            }
            Ok(())
        }
        Command::Sduality(SdualityCommand::Verify { pmax, case }) => {
            let cases: Vec<Case> = match case {
                CaseArg::A => vec![Case::A],
                CaseArg::B => vec![Case::B],
                CaseArg::C => vec![Case::C],
                CaseArg::D => vec![Case::D],
                CaseArg::E => vec![Case::E],
                CaseArg::All => Case::ALL.to_vec(),
            };
            let rep = Engine::default().sweep(pmax, &cases)?;
            for c in &rep.checks {
                r.either(|| c.to_string(), c);
            }
            r.either(|| rep.summary.to_string(), &json!({ "summary": rep.summary }));
            r.fail_if(!rep.passed());
            Ok(())
        }
        Command::Sduality(SdualityCommand::Transform(args)) => {
            let cfg = config(&args)?;
            let dual = duality::s_dual(&cfg)?;
            r.either(|| dual.to_string(), &dual);
            Ok(())
        }
        Command::Kummer(cmd) => kummer_cmd(cmd, r),
    }
}

fn config(args: &ConfigArgs) -> Result<InsertionConfig> {
    let wilson = parse_wilson(&args.wilson)?;
    Ok(InsertionConfig {
        wilson,
        thooft: Some(quad_ext(args.thooft_d)?),
    })
}

fn symbol(args: SymbolArgs, r: &mut Report) -> Result<()> {
    let (name, x, m, v) = if args.kind.kronecker {
        let (d, n) = args
            .d
            .zip(args.n)
            .ok_or_else(|| Error::Parse("--kronecker needs -D and -n".into()))?;
        ("kronecker", d, n, kronecker(d, n)?)
    } else {
        let (a, p) = args
            .a
            .zip(args.p)
            .ok_or_else(|| Error::Parse("--legendre needs -a and -p".into()))?;
        ("legendre", a, p as i64, legendre(a, p)?)
    };
    r.either(|| v.to_string(), &json!({ "symbol": name, "top": x, "bottom": m, "value": v }));
    Ok(())
}

fn idele_out(r: &mut Report, x: &Idele) {
    let norm = x.norm();
    r.either(
        || format!("{x} norm={norm}"),
        &json!({ "idele": x.to_string(), "norm": norm.to_string() }),
    );
}

fn idele(cmd: IdeleCommand, r: &mut Report) -> Result<()> {
    let x = match cmd {
        IdeleCommand::Norm { x } => {
            let x: Idele = x.parse()?;
            let norm = x.norm();
            r.either(|| norm.to_string(), &json!({ "idele": x.to_string(), "norm": norm.to_string() }));
            return Ok(());
        }
        IdeleCommand::Mul { x, y } => x.parse::<Idele>()? * y.parse::<Idele>()?,
        IdeleCommand::Inv { x } => x.parse::<Idele>()?.inv(),
        IdeleCommand::Tau { r: q } => Idele::principal(&parse_rat(&q)?)?,
        IdeleCommand::Alpha { place } => Idele::alpha_at(place.parse::<Place>()?)?,
    };
    idele_out(r, &x);
    Ok(())
}

fn zeta_cmd(cmd: ZetaCommand, r: &mut Report) -> Result<()> {
    let (s, v) = match cmd {
        ZetaCommand::Local { p, level, chi, s } => {
            let s = parse_complex(&s)?;
            (s, zeta::local_zeta_finite(p, level, parse_chi(&chi)?, s)?)
        }
        ZetaCommand::Real { profile, scale, s } => {
            let s = parse_complex(&s)?;
            (s, zeta::local_zeta_real_scaled(profile.into(), scale, s)?)
        }
        ZetaCommand::Global {
            disc,
            s,
            levels,
            profile,
            tol,
        } => {
            let s = parse_complex(&s)?;
            let arch = profile.map_or(ArchProfile::matching(disc), Into::into);
            let mut f = TestFunction::standard(arch);
            for item in levels.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (p, n) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected p:n, got {item:?}")))?;
                let p = p.trim().parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
                let n = n.trim().parse().map_err(|_| Error::Parse(format!("bad level {n:?}")))?;
                f.set_level(p, n)?;
            }
            let z = zeta::global_zeta(&f, disc, s, tol)?;
            r.either(
                || fmt_complex(z.value),
                &json!({ "s": complex_json(s), "value": complex_json(z.value), "region": z.region }),
            );
            return Ok(());
        }
    };
    r.either(|| fmt_complex(v), &json!({ "s": complex_json(s), "value": complex_json(v) }));
    Ok(())
}

fn kummer_cmd(cmd: KummerCommand, r: &mut Report) -> Result<()> {
    match cmd {
        KummerCommand::Conductor { q } => {
            let c = kummer_conductor_exponent(q)?;
            r.either(
                || {
                    format!(
                        "q={} w={} f_v={} disc_exp_v={} tame_disc_exp={}",
                        c.q, c.w, c.f_v, c.disc_exp_v, c.tame_disc_exp
                    )
                },
                &c,
            );
        }
        KummerCommand::Failure { q } => {
            let rep = failure_case_report(q)?;
            r.either(|| rep.to_string(), &rep);
            r.fail_if(!rep.obstruction);
        }
        KummerCommand::CubicCheck { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let checks = kummer::cubic_reciprocity_sweep(&mut rng, count)?;
            for c in &checks {
                r.either(|| c.to_string(), c);
            }
            let failures = checks.iter().filter(|c| !c.equal).count();
            let verdict = if failures == 0 { "ALL PASS" } else { "FAIL" };
            r.either(
                || format!("{verdict} ({} pairs, {failures} failures, seed {seed})", checks.len()),
                &json!({ "summary": { "pairs": checks.len(), "failures": failures, "seed": seed } }),
            );
            r.fail_if(failures > 0);
        }
    }
    Ok(())
}
