use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsemi::dp::DEFAULT_CAP;
use qsemi::error::{DpError, GeneratorError, PolyError, QuiverError, VerifyError};
use qsemi::generator::{format_blocks, generate_all, parse_blocks, GeneratorEntry};
use qsemi::verify::{bilinear_example_suite, BASIS_CAP};
use qsemi::*;

const PARSE: u8 = 2;
const INVALID: u8 = 3;
const CAP: u8 = 4;
const CHECK: u8 = 5;

#[derive(Parser)]
#[command(name = "qsemi", version, about = "Semi-invariants of mixed quiver representations")]
struct Cli {
    /// Worker threads for parallel generator evaluation.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a quiver file and report whether it is zigzag.
    Validate { quiver: PathBuf },
    /// Reduce a mixed quiver to a zigzag quiver and print the arrow table.
    Reduce {
        quiver: PathBuf,
        /// Write the target quiver JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the substitution of every source coordinate.
        #[arg(long)]
        substitution: bool,
    },
    /// Solve for the admissible weight of a multidegree.
    Admissible(DegreeArgs),
    /// List the admissible quintuples of a multidegree.
    Enumerate {
        #[command(flatten)]
        degree: DegreeArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Build generators: one quintuple given by --a/--b, or every quintuple with --all.
    Generate {
        #[command(flatten)]
        degree: DegreeArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// First-class blocks, e.g. "({1,2},{3,4})".
        #[arg(long, conflicts_with = "all")]
        a: Option<String>,
        /// Second-class blocks.
        #[arg(long, conflicts_with = "all")]
        b: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Largest permutation size a DP evaluation may enumerate.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every generator of a report for invariance and weight by sampling.
    Verify {
        quiver: PathBuf,
        report: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Dimension of the semi-invariant space of a multidegree.
    Oracle {
        #[command(flatten)]
        degree: DegreeArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Largest monomial basis the oracle may build.
        #[arg(long, default_value_t = BASIS_CAP)]
        basis_cap: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Compare the span of the generators with the oracle dimension.
    Span {
        #[command(flatten)]
        degree: DegreeArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap_size: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Run the bilinear-form checks on the plane with `forms` loops.
    ExampleBilinear {
        #[arg(long, default_value_t = 2)]
        forms: usize,
        #[arg(long, default_value_t = 3)]
        max_s: usize,
    },
}

#[derive(Args)]
struct DegreeArgs {
    quiver: PathBuf,
    /// Multidegree as "t:1,0;r:1;s:0,2".
    #[arg(long)]
    degrees: String,
}

#[derive(Args)]
struct FieldArgs {
    /// 0 for the rationals, otherwise a prime greater than 2.
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Derivations over the rationals, sampling otherwise.
    Auto,
    Derivations,
    RandomKernel,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

type Res<T> = Result<T, Failure>;

impl From<QuiverError> for Failure {
    fn from(e: QuiverError) -> Self {
        let code = match e {
            QuiverError::Parse(_) => PARSE,
            QuiverError::SingularSample(_) => CHECK,
            _ => INVALID,
        };
        Failure::new(code, e)
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        let code = match e {
            PolyError::Parse(_) | PolyError::NotPrime(_) => PARSE,
            _ => INVALID,
        };
        Failure::new(code, e)
    }
}

impl From<DpError> for Failure {
    fn from(e: DpError) -> Self {
        let code = match e {
            DpError::CapExceeded { .. } => CAP,
            DpError::Shape(_) => INVALID,
        };
        Failure::new(code, e)
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Dp(e) => e.into(),
            GeneratorError::Poly(e) => e.into(),
            e => Failure::new(INVALID, e),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::CapExceeded { .. } => Failure::new(CAP, e),
            VerifyError::Quiver(e) => e.into(),
            VerifyError::Poly(e) => e.into(),
            VerifyError::Generator(e) => e.into(),
        }
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_mixed(path: &Path) -> Res<MixedQuiver> {
    let q = MixedQuiver::from_json(&read(path)?)?;
    q.check()?;
    Ok(q)
}

fn load_zigzag(path: &Path) -> Res<ZigzagQuiver> {
    classify_zigzag(&load_mixed(path)?).map_err(|e| Failure::new(INVALID, format!("{e}\n(run `qsemi reduce --out` first)")))
}

fn parse_degree(zz: &ZigzagQuiver, text: &str) -> Res<MultiDegree> {
    let d: MultiDegree = text.parse().map_err(|e| Failure::new(PARSE, format!("bad multidegree {text:?}: {e}")))?;
    if d.arrows() != zz.arrow_counts() {
        return Err(Failure::new(
            INVALID,
            format!("multidegree has {:?} entries but the quiver has {:?} arrows per family", d.arrows(), zz.arrow_counts()),
        ));
    }
    Ok(d)
}

fn field(args: &FieldArgs) -> Res<Field> {
    Ok(Field::from_characteristic(args.characteristic)?)
}

fn blocks(text: &str) -> Res<Vec<Vec<usize>>> {
    parse_blocks(text).map_err(|e| Failure::new(PARSE, format!("bad blocks {text:?}: {e}")))
}

fn run(cli: Cli) -> Res<()> {
    match cli.command {
        Command::Validate { quiver } => {
            let q = MixedQuiver::from_json(&read(&quiver)?)?;
            let issues = q.validate();
            if !issues.is_empty() {
                return Err(QuiverError::Invalid(issues).into());
            }
            match classify_zigzag(&q) {
                Ok(zz) => {
                    let [x, y, z] = zz.arrow_counts();
                    println!("valid zigzag quiver: {} first-class, {} second-class pairs; arrows x={x} y={y} z={z}", zz.l1(), zz.l2());
                }
                Err(e) => println!("valid mixed quiver, {e}"),
            }
        }
        Command::Reduce { quiver, out, substitution } => {
            let map = reduce(&load_mixed(&quiver)?)?;
            print!("{map}");
            if substitution {
                for (v, image) in map.substitution_table(Field::Rational) {
                    println!("{v} -> {image}");
                }
            }
            if let Some(path) = out {
                write_or_print(Some(&path), &map.target().quiver().to_json())?;
            }
        }
        Command::Admissible(args) => {
            let zz = load_zigzag(&args.quiver)?;
            let d = parse_degree(&zz, &args.degrees)?;
            match solve_admissible(&zz, &d)? {
                Some(w) => println!("admissible {w}"),
                None => println!("not admissible"),
            }
        }
        Command::Enumerate { degree, limit } => {
            let zz = load_zigzag(&degree.quiver)?;
            let d = parse_degree(&zz, &degree.degrees)?;
            let en = enumerate_quintuples(&zz, &d, limit)?;
            match &en.weight {
                Some(w) => println!("weight {w}"),
                None => println!("not admissible"),
            }
            for q in &en.quintuples {
                println!("A={} B={}", format_blocks(q.a().blocks()), format_blocks(q.b().blocks()));
            }
            println!("{} quintuples{}", en.quintuples.len(), if en.truncated { " (truncated)" } else { "" });
        }
        Command::Generate {
            degree,
            field: f,
            a,
            b,
            all,
            limit,
            cap_size,
            out,
        } => {
            let zz = load_zigzag(&degree.quiver)?;
            let d = parse_degree(&zz, &degree.degrees)?;
            let field = field(&f)?;
            let report = if all {
                let (en, entries) = generate_all(&zz, &d, field, cap_size, limit)?;
                GeneratorReport {
                    field,
                    degree: d,
                    weight: en.weight,
                    truncated: en.truncated,
                    entries,
                }
            } else {
                let (Some(a), Some(b)) = (a, b) else {
                    return Err(Failure::new(PARSE, "give --a and --b, or --all"));
                };
                let quint = Quintuple::new(&zz, d.clone(), blocks(&a)?, blocks(&b)?)?;
                let poly = build_generator(&zz, &quint, field, cap_size)?;
                GeneratorReport {
                    field,
                    degree: d,
                    weight: Some(quint.weight().clone()),
                    truncated: false,
                    entries: vec![GeneratorEntry {
                        a: quint.a().blocks().to_vec(),
                        b: quint.b().blocks().to_vec(),
                        sign: generator::block_sign(&quint),
                        poly,
                    }],
                }
            };
            write_or_print(out.as_deref(), &report.to_text())?;
        }
        Command::Verify { quiver, report, samples, seed } => {
            let zz = load_zigzag(&quiver)?;
            let report = GeneratorReport::parse(&read(&report)?).map_err(|e| Failure::new(PARSE, e))?;
            if report.degree.arrows() != zz.arrow_counts() {
                return Err(Failure::new(INVALID, "report degree does not match the quiver"));
            }
            let coords = zz.coordinates();
            let weight = report.weight.as_ref().map(|w| w.relative());
            let mut failed = 0;
            for (i, e) in report.entries.iter().enumerate() {
                let inv = check_invariance(&e.poly, &coords, samples, seed.wrapping_add(i as u64), report.field)?;
                let wt = match &weight {
                    Some(w) => Some(check_weight(&e.poly, &coords, w, samples, seed.wrapping_add(i as u64), report.field)?),
                    None => None,
                };
                let mut problems = Vec::new();
                if let Some(c) = &inv.counterexample {
                    problems.push(format!("not invariant under {c}"));
                }
                if let Some(c) = wt.as_ref().and_then(|w| w.counterexample.as_ref()) {
                    problems.push(format!("wrong weight under {c}"));
                }
                if problems.is_empty() {
                    println!("generator {}: ok ({samples} samples)", i + 1);
                } else {
                    failed += 1;
                    println!("generator {}: FAIL {}", i + 1, problems.join("; "));
                }
            }
            if failed > 0 {
                return Err(Failure::new(CHECK, format!("{failed} of {} generators failed", report.entries.len())));
            }
        }
        Command::Oracle {
            degree,
            field: f,
            method,
            basis_cap,
            seed,
        } => {
            let zz = load_zigzag(&degree.quiver)?;
            let d = parse_degree(&zz, &degree.degrees)?;
            let field = field(&f)?;
            let method = match method {
                Method::Auto if field == Field::Rational => OracleMethod::Derivations,
                Method::Auto | Method::RandomKernel => OracleMethod::RandomKernel,
                Method::Derivations => OracleMethod::Derivations,
            };
            let outcome = oracle_dimension(&zz.coordinates(), &d, method, field, basis_cap, seed)?;
            println!("method {method}");
            println!("monomials {}", outcome.basis.len());
            println!("samples {}", outcome.samples_used);
            println!("dimension {}", outcome.dimension());
        }
        Command::Span {
            degree,
            field: f,
            limit,
            cap_size,
            seed,
        } => {
            let zz = load_zigzag(&degree.quiver)?;
            let d = parse_degree(&zz, &degree.degrees)?;
            let report = spanning_check(&zz, &d, field(&f)?, cap_size, limit, seed)?;
            print!("{report}");
            if report.verdict == Verdict::Deficient || !report.contained {
                return Err(Failure::new(CHECK, report.verdict));
            }
        }
        Command::ExampleBilinear { forms, max_s } => {
            let report = bilinear_example_suite(forms, max_s)?;
            print!("{report}");
            if !report.passed() {
                return Err(Failure::new(CHECK, "bilinear checks failed"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        std::env::set_var("RAYON_NUM_THREADS", jobs.to_string());
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
