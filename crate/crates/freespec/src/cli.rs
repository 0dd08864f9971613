//! Command-line entry point: one thin binary dispatching to the library.
//!
//! Matrices are passed as JSON 2x2 arrays whose entries are bare reals or
//! `[re, im]` pairs; `--A` is always the first free copy, `--B` the second.
//! CSV output is RFC-4180 with `#`-prefixed metadata lines; JSON output is
//! UTF-8 with a `"schema": 1` field and no NaN (infinities become the
//! strings "inf"/"-inf"). Exit codes: 0 success, 1 precondition/domain
//! errors, 2 i/o errors, 64 usage errors.

use crate::brown;
use crate::error::{Error, Result};
use crate::freeprod;
use crate::mat2::Mat2;
use crate::matrixmodel::{self, ModelConfig, Observable};
use crate::measures::MeasureR;
use crate::moments::{self, WordKind};
use crate::spectra;
use crate::transforms;
use crate::verify;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "freespec",
    version,
    about = "Spectra and Brown measures of products and sums of free 2x2 matrices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Brown measures: radial CDF tables plus JSON support descriptors.
    Brown {
        #[command(subcommand)]
        which: BrownCmd,
    },
    /// Spectra: regions, boundary samplers, the ellipse-family check.
    Spectrum {
        #[command(subcommand)]
        which: SpectrumCmd,
    },
    /// Symbolic 2x2 decomposition over words in the free generators.
    Decompose(DecomposeArgs),
    /// Moment sequences of products and sums.
    Moments(MomentsArgs),
    /// Support classification of a product or sum.
    Classify(ClassifyArgs),
    /// Evaluate the S-transform of a measure read from CSV.
    #[command(name = "s-transform")]
    STransform(STransformArgs),
    /// Random-matrix simulation: eigenvalue or singular-value clouds.
    Simulate(SimulateArgs),
    /// Run the cross-validation suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum BrownCmd {
    /// Brown measure of A B for traceless factors.
    Product {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brown measure of alpha E12 + beta F12.
    SumNilpotent {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brown measure of the compression E11 (alpha + beta F12).
    Example64 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brown measure of E12 diag(alpha, beta).
    Example65 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Annulus/disk spectrum of A B for traceless factors.
    Product {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        /// Angle resolution: sample the representation-family eigenvalue
        /// cloud at this many angles per parameter and emit it as CSV.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Implicit region of (1 + alpha E12)(1 + beta F12) with boundary CSV.
    Example66 {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Number of boundary angles to sample.
        #[arg(long, default_value_t = 360)]
        boundary: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rasterized equality check of the two ellipse families.
    VerifyEllipses {
        #[arg(long)]
        b1: f64,
        #[arg(long)]
        b2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long = "B")]
    b: String,
    /// Also evaluate the decomposition in the matrix model.
    #[arg(long)]
    evaluate: bool,
    #[arg(long = "N", default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    kind: KindArg,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    kind: KindArg,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct STransformArgs {
    /// CSV file with the measure (atoms in `# atom` lines, then t,density).
    #[arg(long)]
    measure: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    w: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    kind: KindArg,
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: String,
    #[arg(long = "N", default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 16)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = WhatArg::Eigenvalues)]
    what: WhatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "paper")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Product,
    Sum,
}

impl From<KindArg> for WordKind {
    fn from(k: KindArg) -> WordKind {
        match k {
            KindArg::Product => WordKind::Product,
            KindArg::Sum => WordKind::Sum,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Eigenvalues,
    SingularValues,
}

/// Parse and execute; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return 0;
                }
                _ => 64,
            };
            eprint!("{e}");
            return code;
        }
    };
    match execute(cli.cmd) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// FREESPEC_THREADS caps the worker pool.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("FREESPEC_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn execute(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Brown { which } => run_brown(which),
        Cmd::Spectrum { which } => run_spectrum(which),
        Cmd::Decompose(args) => run_decompose(args),
        Cmd::Moments(args) => run_moments(args),
        Cmd::Classify(args) => run_classify(args),
        Cmd::STransform(args) => run_s_transform(args),
        Cmd::Simulate(args) => run_simulate(args),
        Cmd::Verify(args) => run_verify(args),
    }
}

// -- parsing helpers --------------------------------------------------------

fn parse_entry(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(x) => Ok(Complex64::new(
            x.as_f64().ok_or_else(|| Error::Usage("bad number".into()))?,
            0.0,
        )),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Usage("bad [re, im] pair".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Usage("bad [re, im] pair".into()))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(Error::Usage(format!("bad complex entry: {v}"))),
    }
}

fn parse_mat2(s: &str) -> Result<Mat2> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Error::Usage(format!("bad matrix JSON: {e}")))?;
    let rows = v
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| Error::Usage("matrix must be a 2x2 JSON array".into()))?;
    let mut e = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::Usage("matrix must be a 2x2 JSON array".into()))?;
        for (j, entry) in cols.iter().enumerate() {
            e[i][j] = parse_entry(entry)?;
        }
    }
    Ok(Mat2::new(e))
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Error::Usage(format!("bad complex JSON: {e}")))?;
    parse_entry(&v)
}

fn json_real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn json_complex(z: Complex64) -> Value {
    json!([json_real(z.re), json_real(z.im)])
}

fn write_text(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = File::create(path)?;
            f.write_all(content.as_bytes())?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn radial_csv(nu: &crate::measures::RadialMeasure) -> Result<String> {
    let mut buf = Vec::new();
    nu.to_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn print_json(value: &Value) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

// -- subcommand bodies ------------------------------------------------------

fn radial_descriptor(nu: &crate::measures::RadialMeasure) -> Value {
    json!({
        "schema": 1,
        "kind": if nu.r_inner() > 0.0 { "annulus" } else { "disk" },
        "atom_at_zero": json_real(nu.atom_at_zero()),
        "r_inner": json_real(nu.r_inner()),
        "r_outer": json_real(nu.r_outer()),
    })
}

fn run_brown(cmd: BrownCmd) -> Result<()> {
    match cmd {
        BrownCmd::Product { a, b, out } => {
            let a = parse_mat2(&a)?;
            let b = parse_mat2(&b)?;
            let nu = brown::brown_product(&a, &b)?;
            write_text(&out, &radial_csv(&nu)?)?;
            if out.is_some() {
                print_json(&radial_descriptor(&nu))?;
            }
        }
        BrownCmd::SumNilpotent { alpha, beta, out } => {
            let alpha = parse_complex(&alpha)?;
            let beta = parse_complex(&beta)?;
            let nu = brown::brown_sum_nilpotents(alpha, beta);
            write_text(&out, &radial_csv(&nu)?)?;
            if out.is_some() {
                print_json(&radial_descriptor(&nu))?;
            }
        }
        BrownCmd::Example64 { alpha, beta, out } => {
            let alpha = parse_complex(&alpha)?;
            let beta = parse_complex(&beta)?;
            let mix = brown::brown_example_64(alpha, beta);
            let comp = &mix.components[0];
            write_text(&out, &radial_csv(&comp.radial)?)?;
            let descriptor = json!({
                "schema": 1,
                "kind": "mixture",
                "atoms": mix.atoms.iter().map(|&(z, m)| json!({
                    "location": json_complex(z),
                    "mass": json_real(m),
                })).collect::<Vec<_>>(),
                "component": {
                    "center": json_complex(comp.center),
                    "weight": json_real(comp.weight),
                    "radius": json_real(comp.radial.r_outer()),
                },
            });
            print_json(&descriptor)?;
        }
        BrownCmd::Example65 { alpha, beta, out } => {
            let alpha = parse_complex(&alpha)?;
            let beta = parse_complex(&beta)?;
            let nu = brown::brown_example_65(alpha, beta);
            write_text(&out, &radial_csv(&nu)?)?;
            if out.is_some() {
                print_json(&radial_descriptor(&nu))?;
            }
        }
    }
    Ok(())
}

fn run_spectrum(cmd: SpectrumCmd) -> Result<()> {
    match cmd {
        SpectrumCmd::Product { a, b, grid, out } => {
            let a = parse_mat2(&a)?;
            let b = parse_mat2(&b)?;
            let s = spectra::spectrum_product_traceless(&a, &b)?;
            let mut v = serde_json::to_value(&s)?;
            v.as_object_mut()
                .expect("object")
                .insert("schema".into(), json!(1));
            if let Some(grid) = grid {
                let cloud = spectra::representation_spectrum_sampler(&a, &b, grid)?;
                let mut csv = String::from("re,im\n");
                for z in &cloud {
                    csv.push_str(&format!("{:.17e},{:.17e}\n", z.re, z.im));
                }
                write_text(&out, &csv)?;
                print_json(&v)?;
            } else {
                match &out {
                    Some(_) => write_text(&out, &serde_json::to_string_pretty(&v)?)?,
                    None => print_json(&v)?,
                }
            }
        }
        SpectrumCmd::Example66 {
            alpha,
            beta,
            boundary,
            out,
        } => {
            let alpha = parse_complex(&alpha)?;
            let beta = parse_complex(&beta)?;
            let s = spectra::spectrum_example_66(alpha, beta);
            let pts = s.region.boundary_points(boundary);
            let mut csv = String::from("re,im\n");
            for p in &pts {
                csv.push_str(&format!("{:.17e},{:.17e}\n", p.re, p.im));
            }
            write_text(&out, &csv)?;
            if out.is_some() {
                let mut v = serde_json::to_value(&s)?;
                v.as_object_mut()
                    .expect("object")
                    .insert("schema".into(), json!(1));
                print_json(&v)?;
            }
        }
        SpectrumCmd::VerifyEllipses { b1, b2, out } => {
            let verdict = spectra::ellipse_families_equal(b1, b2)?;
            let v = json!({
                "schema": 1,
                "equal": verdict.equal,
                "hausdorff": json_real(verdict.hausdorff),
            });
            match &out {
                Some(_) => write_text(&out, &serde_json::to_string_pretty(&v)?)?,
                None => print_json(&v)?,
            }
        }
    }
    Ok(())
}

fn run_decompose(args: DecomposeArgs) -> Result<()> {
    let b = parse_mat2(&args.b)?;
    let d = freeprod::decompose(&b);
    let mut text = String::new();
    for (name, i, j) in [("b11", 0, 0), ("b12", 0, 1), ("b21", 1, 0), ("b22", 1, 1)] {
        text.push_str(&format!("{name} = {}\n", d.entry(i, j)));
    }
    if !args.evaluate {
        write_text(&args.out, &text)?;
        return Ok(());
    }
    let symbolic = freeprod::symbolic_trace(&d)?;
    let model = freeprod::evaluate_matrix_model(&d, args.n, args.seed);
    let dim = 2 * args.n;
    let mut tr = ndarray_linalg::c64::new(0.0, 0.0);
    for i in 0..dim {
        tr += model[[i, i]];
    }
    let empirical = Complex64::new(tr.re, tr.im) / dim as f64;
    let v = json!({
        "schema": 1,
        "n": args.n,
        "seed": args.seed,
        "entries": {
            "b11": d.entry(0, 0).to_string(),
            "b12": d.entry(0, 1).to_string(),
            "b21": d.entry(1, 0).to_string(),
            "b22": d.entry(1, 1).to_string(),
        },
        "symbolic_trace": json_complex(symbolic),
        "empirical_trace": json_complex(empirical),
    });
    match &args.out {
        Some(_) => write_text(&args.out, &serde_json::to_string_pretty(&v)?)?,
        None => print_json(&v)?,
    }
    Ok(())
}

fn run_moments(args: MomentsArgs) -> Result<()> {
    let a = parse_mat2(&args.a)?;
    let b = parse_mat2(&args.b)?;
    let m = moments::moment_sequence(args.kind.into(), &a, &b, args.n)?;
    let v = json!({
        "schema": 1,
        "kind": match args.kind { KindArg::Product => "product", KindArg::Sum => "sum" },
        "moments": m.iter().map(|&z| json_complex(z)).collect::<Vec<_>>(),
    });
    match &args.out {
        Some(_) => write_text(&args.out, &serde_json::to_string_pretty(&v)?)?,
        None => print_json(&v)?,
    }
    Ok(())
}

fn run_classify(args: ClassifyArgs) -> Result<()> {
    let a = parse_mat2(&args.a)?;
    let b = parse_mat2(&args.b)?;
    let cls = moments::classify_support(args.kind.into(), &a, &b);
    let mut v = serde_json::to_value(&cls)?;
    v.as_object_mut()
        .expect("object")
        .insert("schema".into(), json!(1));
    match &args.out {
        Some(_) => write_text(&args.out, &serde_json::to_string_pretty(&v)?)?,
        None => print_json(&v)?,
    }
    Ok(())
}

fn run_s_transform(args: STransformArgs) -> Result<()> {
    let file = File::open(&args.measure)?;
    let mu = MeasureR::from_csv(&mut BufReader::new(file))?;
    let s = transforms::STransform::for_measure(&mu)?;
    let value = s.evaluate(args.w)?;
    let v = json!({
        "schema": 1,
        "w": json_real(args.w),
        "s": json_real(value),
        "method": s.method_tag(),
    });
    match &args.out {
        Some(_) => write_text(&args.out, &serde_json::to_string_pretty(&v)?)?,
        None => print_json(&v)?,
    }
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let a = parse_mat2(&args.a)?;
    let b = parse_mat2(&args.b)?;
    let mut cfg = ModelConfig::new(args.n, args.trials, args.seed);
    let spec = match args.what {
        WhatArg::Eigenvalues => {
            cfg.what = Observable::Eigenvalues;
            matrixmodel::empirical_brown(&a, &b, args.kind.into(), &cfg)?
        }
        WhatArg::SingularValues => {
            cfg.what = Observable::SingularValues;
            matrixmodel::empirical_singular_values(&a, &b, args.kind.into(), &cfg)?
        }
    };
    let per_trial = 2 * cfg.n;
    let mut csv = String::new();
    match args.what {
        WhatArg::Eigenvalues => {
            csv.push_str("trial,re,im\n");
            for (i, z) in spec.samples.iter().enumerate() {
                csv.push_str(&format!("{},{:.17e},{:.17e}\n", i / per_trial, z.re, z.im));
            }
        }
        WhatArg::SingularValues => {
            csv.push_str("trial,sigma\n");
            for (i, z) in spec.samples.iter().enumerate() {
                csv.push_str(&format!("{},{:.17e}\n", i / per_trial, z.re));
            }
        }
    }
    write_text(&args.out, &csv)?;
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    if args.suite != "paper" {
        return Err(Error::Usage(format!(
            "unknown suite '{}' (only 'paper' exists)",
            args.suite
        )));
    }
    let reports = verify::run_suite(args.seed);
    let mut all_pass = true;
    for r in &reports {
        println!("{}", r.line());
        all_pass &= r.pass;
    }
    if all_pass {
        println!("all {} criteria passed", reports.len());
        Ok(())
    } else {
        Err(Error::Precondition("verification suite failed".into()))
    }
}
