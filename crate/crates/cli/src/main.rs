use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use glmn::character::{CharCache, FormalChar, Variant};
use glmn::dimension::dim_breakdown;
use glmn::kl::{comp_factors, k_tuple, kl_oracle, kl_poly, phi, phi_inverse, DecompRow};
use glmn::verify::{run_suite, Suite, VerifyConfig, DEFAULT_SEED};
use glmn::weight::{analyze, BlockKey, RhoShifted, TypTuple};
use glmn::{Error, Weight};

#[derive(Parser, Debug)]
#[command(
    name = "glmn",
    version,
    about = "Characters, Kazhdan-Lusztig polynomials and dimensions for gl(m|n)"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Required shape `m,n` of every weight argument.
    #[arg(long, global = true, value_parser = parse_shape)]
    shape: Option<(usize, usize)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    /// Lexical floors of the permuted weights.
    For2,
    /// Ceilings of those floors.
    For2prime,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::For2 => Variant::Floor,
            VariantArg::For2prime => Variant::Ceiling,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Atypicality data of a weight.
    Analyze { weight: String },
    /// Kazhdan-Lusztig polynomial K_{LAMBDA,MU}(q).
    Kl {
        lambda: String,
        mu: String,
        /// Also count raising paths and fail unless both agree.
        #[arg(long)]
        oracle: bool,
    },
    /// Composition factors of the Kac module.
    Factors {
        lambda: String,
        /// Search depth below LAMBDA; defaults to mn.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Character of the irreducible module.
    Character {
        lambda: String,
        #[arg(long, value_enum, default_value = "for2")]
        variant: VariantArg,
    },
    /// Dimension of the irreducible module.
    Dimension {
        lambda: String,
        /// Show every (sigma, pi) term.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value = "for2")]
        variant: VariantArg,
    },
    /// Image in the principal block of gl(r|r), or the inverse with --inverse-in.
    Map {
        weight: String,
        /// Treat WEIGHT as a gl(r|r) weight and return the weight with its heights
        /// in the block of this weight.
        #[arg(long, value_name = "BLOCK_WEIGHT")]
        inverse_in: Option<String>,
    },
    /// Run a named property suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Lower bound of the entry box.
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        lo: i64,
        /// Upper bound of the entry box.
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        hi: i64,
        /// Cone window depth; defaults to r + 3.
        #[arg(long)]
        depth: Option<i64>,
        /// Random cases for sampling suites.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn parse_shape(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected m,n")?;
    let m: usize = a.trim().parse().map_err(|_| "bad m")?;
    let n: usize = b.trim().parse().map_err(|_| "bad n")?;
    if m == 0 || n == 0 {
        return Err("m and n must be positive".into());
    }
    Ok((m, n))
}

#[derive(Serialize)]
struct AnalyzeReport {
    weight: Weight,
    shifted: RhoShifted,
    dominant: bool,
    r: usize,
    /// 1-based `(i, z)` of each atypical root `eps_i - delta_z`.
    roots: Vec<(usize, usize)>,
    aty: Vec<i64>,
    typ: TypTuple,
    h: Vec<i64>,
    c: Vec<Vec<bool>>,
    chat: Vec<Vec<bool>>,
    /// 1-based.
    maxs: Vec<usize>,
    /// `k_1, ..., k_r`.
    k_tuple: Option<Vec<i64>>,
    block: BlockKey,
}

struct Output {
    text: String,
    json: String,
}

fn out<T: Serialize>(text: String, value: &T) -> Result<Output, Error> {
    let json = serde_json::to_string(value).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Output { text, json })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn bool_rows(rows: &[Vec<bool>]) -> String {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn character_text(ch: &FormalChar) -> String {
    let mut s = String::new();
    for (w, c) in ch.sorted_terms() {
        let _ = writeln!(s, "{c} {w}");
    }
    let _ = write!(s, "dimension {}", ch.coefficient_sum());
    s
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let parse = |s: &str| Weight::parse_with_shape(s, cli.shape);
    match &cli.command {
        Command::Analyze { weight } => {
            let w = parse(weight)?;
            let st = analyze(&w)?;
            let k = if w.is_dominant() && st.r > 0 {
                Some(k_tuple(&w)?.k)
            } else {
                None
            };
            let report = AnalyzeReport {
                weight: w.clone(),
                shifted: w.shifted(),
                dominant: w.is_dominant(),
                r: st.r,
                roots: st.roots.iter().map(|&(i, z)| (i + 1, z + 1)).collect(),
                aty: st.aty.clone(),
                typ: st.typ.clone(),
                h: st.h.clone(),
                c: st.c.clone(),
                chat: st.chat.clone(),
                maxs: st.maxs.iter().map(|x| x + 1).collect(),
                k_tuple: k.clone(),
                block: st.block(),
            };
            let mut t = String::new();
            let _ = writeln!(t, "weight    {w}");
            let sh = w.shifted();
            let _ = writeln!(t, "shifted   ({}|{})", join(sh.eps()), join(sh.delta()));
            let _ = writeln!(t, "dominant  {}", report.dominant);
            let _ = writeln!(t, "r         {}", st.r);
            let _ = writeln!(t, "aty       ({})", join(&st.aty));
            let _ = writeln!(t, "typ       {}", st.typ);
            let _ = writeln!(t, "h         ({})", join(&st.h));
            let _ = writeln!(t, "c         {}", bool_rows(&st.c));
            let _ = writeln!(t, "chat      {}", bool_rows(&st.chat));
            let _ = writeln!(t, "maxs      ({})", join(&report.maxs));
            match &k {
                Some(k) => {
                    let rev: Vec<i64> = k.iter().rev().copied().collect();
                    let _ = write!(t, "k-tuple   (k_r..k_1) = ({})", join(&rev));
                }
                None => {
                    let _ = write!(t, "k-tuple   -");
                }
            }
            out(t, &report)
        }
        Command::Kl { lambda, mu, oracle } => {
            let (l, m) = (parse(lambda)?, parse(mu)?);
            l.check_shape(&m)?;
            l.require_dominant()?;
            m.require_dominant()?;
            let k = kl_poly(&l, &m)?;
            let mut agrees = None;
            if *oracle {
                let o = kl_oracle(&l, &m)?;
                if o != k {
                    return Err(Error::Internal(format!("closed form {k} but oracle {o}")));
                }
                agrees = Some(true);
            }
            #[derive(Serialize)]
            struct Kl {
                lambda: Weight,
                mu: Weight,
                poly: String,
                coefficients: glmn::kl::KLPoly,
                #[serde(skip_serializing_if = "Option::is_none")]
                oracle_agrees: Option<bool>,
            }
            let v = Kl {
                lambda: l,
                mu: m,
                poly: k.to_string(),
                coefficients: k.clone(),
                oracle_agrees: agrees,
            };
            out(k.to_string(), &v)
        }
        Command::Factors { lambda, window } => {
            let row: DecompRow = comp_factors(&parse(lambda)?, *window)?;
            let text = row
                .factors
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("\n");
            out(text, &row)
        }
        Command::Character { lambda, variant } => {
            let ch = CharCache::new().irr_char(&parse(lambda)?, (*variant).into())?;
            #[derive(Serialize)]
            struct Ch<'a> {
                character: &'a FormalChar,
                dimension: i128,
            }
            out(
                character_text(&ch),
                &Ch {
                    character: &ch,
                    dimension: ch.coefficient_sum(),
                },
            )
        }
        Command::Dimension {
            lambda,
            verbose,
            variant,
        } => {
            let l = parse(lambda)?;
            let b = dim_breakdown(&l, (*variant).into(), *verbose)?;
            let mut t = b.dimension.to_string();
            if *verbose {
                let _ = write!(
                    t,
                    "\nr = {}; terms (sigma, pi, nu, signed multinomial, contribution):",
                    b.r
                );
                for term in &b.terms {
                    let _ = write!(
                        t,
                        "\n{} {} {} {} {}",
                        term.sigma, term.pi, term.nu, term.coefficient, term.value
                    );
                }
            }
            #[derive(Serialize)]
            struct Dim<'a> {
                weight: &'a Weight,
                dimension: i128,
                #[serde(skip_serializing_if = "Option::is_none")]
                terms: Option<&'a [glmn::dimension::DimTerm]>,
            }
            let terms = verbose.then_some(b.terms.as_slice());
            out(
                t,
                &Dim {
                    weight: &l,
                    dimension: b.dimension,
                    terms,
                },
            )
        }
        Command::Map { weight, inverse_in } => {
            let res = match inverse_in {
                None => phi(&parse(weight)?)?,
                Some(b) => {
                    let base = parse(b)?;
                    let target = Weight::parse_with_shape(weight, None)?;
                    phi_inverse(&analyze(&base)?.block(), &target)?
                }
            };
            out(res.to_string(), &res)
        }
        Command::Verify {
            suite,
            m,
            n,
            lo,
            hi,
            depth,
            samples,
            seed,
            jobs,
        } => {
            let suite: Suite = suite.parse()?;
            if *m == 0 || *n == 0 {
                return Err(Error::Parse("m and n must be positive".into()));
            }
            let cfg = VerifyConfig {
                m: *m,
                n: *n,
                lo: *lo,
                hi: *hi,
                depth: *depth,
                samples: *samples,
                seed: *seed,
                jobs: *jobs,
            };
            let rep = run_suite(suite, &cfg)?;
            let mut t = format!(
                "{}: {} passed, {} failed",
                rep.suite, rep.passed, rep.failed
            );
            for f in &rep.failures {
                let _ = write!(t, "\n  {f}");
            }
            if !rep.ok() {
                println!(
                    "{}",
                    if cli.json {
                        serde_json::to_string(&rep).unwrap_or_default()
                    } else {
                        t
                    }
                );
                return Err(Error::Internal(format!("suite {} failed", rep.suite)));
            }
            out(t, &rep)
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    let v = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{v}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            emit_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(o) => {
            if cli.json {
                println!("{}", o.json);
            } else {
                println!("{}", o.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit_error(e.kind(), &e.to_string());
            ExitCode::from(if e.is_parse() { 2 } else { 1 })
        }
    }
}
