use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sztwist::chainmaps::boundary_cell;
use sztwist::homology::augmentation::{base_filtered, fibre_filtered, twisted_complex};
use sztwist::homology::spectral::{require_field, PageSummary};
use sztwist::homology::{Field, FiniteComplex, Homology, SpectralSequence};
use sztwist::io::{eval, load_path, parse_expr, Bundle, Loaded};
use sztwist::suites::{run_suite, SUITES};
use sztwist::twist::{GSpace, TwistedProduct};
use sztwist::twisted_tensor::TwistedTensor;
use sztwist::Basis;

#[derive(Parser)]
#[command(name = "sztwist", version, about = "Exact chain-level computations for twisted products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Dimension bound for suites, bases and complexes.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    dim: u32,
    /// Truncation level for loop groups (overrides the file).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    truncation: Option<u32>,
    /// Coefficient field: q or fp:<prime>.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filtration {
    /// Powers of the augmentation ideal acting on the fibre.
    Fibre,
    /// Base degree.
    Base,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exits 1 on failure.
    Check {
        file: PathBuf,
        /// twisting, comultiplicativity, baues, degeneracy or psi-dgc.
        suite: String,
    },
    /// Evaluate t(x), Delta[x], psi(x,y) or Sz((i..),x).
    Eval { file: PathBuf, expr: String },
    /// Integral homology of the base, the twisted tensor product or the twisted Cartesian product.
    Homology {
        file: PathBuf,
        #[arg(long, conflicts_with = "total")]
        twisted: bool,
        #[arg(long)]
        total: bool,
    },
    /// Spectral sequence pages of the twisted tensor product over a field.
    Ss {
        file: PathBuf,
        /// Defaults to fibre for group fibres, base otherwise.
        #[arg(long, value_enum)]
        filtration: Option<Filtration>,
    },
    /// Nondegenerate simplices of the base by dimension.
    ListBasis { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(cli: &Cli, file: &PathBuf) -> Result<Loaded> {
    load_path(file, cli.truncation.map(|t| t as usize)).with_context(|| format!("loading {}", file.display()))
}

fn run(cli: &Cli) -> Result<bool> {
    let dim = cli.dim as usize;
    match &cli.command {
        Command::Check { file, suite } => {
            if !SUITES.contains(&suite.as_str()) {
                bail!("unknown suite {suite}; expected one of {}", SUITES.join(", "));
            }
            let l = load(cli, file)?;
            let r = run_suite(&l, suite, dim)?;
            match cli.format {
                Format::Text => println!("{}", r.render()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r)?),
            }
            Ok(r.passed())
        }
        Command::Eval { file, expr } => {
            let l = load(cli, file)?;
            let e = eval(&l, &parse_expr(expr)?)?;
            match cli.format {
                Format::Text => println!("{}", e.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&e.json)?),
            }
            Ok(true)
        }
        Command::Homology { file, twisted, total } => {
            let l = load(cli, file)?;
            // One extra degree so that the top group sees its boundaries.
            let c = if *twisted || *total {
                match l.bundle()? {
                    Bundle::Group(tp) => bundle_complex(&tp, *twisted, dim + 1)?,
                    Bundle::Set(tp) => bundle_complex(&tp, *twisted, dim + 1)?,
                }
            } else {
                let bases: Vec<_> = (0..=dim + 1).map(|d| l.base.nondegenerate(d)).collect();
                FiniteComplex::from_bases(0, &bases, |x| boundary_cell(&*l.base, x))?
            };
            let hs: Vec<Homology> = (0..=dim as i64).map(|n| c.homology(n)).collect();
            print_homology(cli.format, &hs)?;
            Ok(true)
        }
        Command::Ss { file, filtration } => {
            let field = require_field(cli.field.as_deref().map(Field::parse).transpose()?)?;
            let l = load(cli, file)?;
            let (filtration, bundle) = match l.bundle()? {
                b @ Bundle::Group(_) => (filtration.unwrap_or(Filtration::Fibre), b),
                b @ Bundle::Set(_) => (filtration.unwrap_or(Filtration::Base), b),
            };
            let (ss, note) = match bundle {
                Bundle::Group(tp) => spectral(&tp, field.clone(), dim, filtration)?,
                Bundle::Set(tp) => spectral(&tp, field.clone(), dim, filtration)?,
            };
            let problems = ss.check_pages();
            let name = match filtration {
                Filtration::Fibre => "fibre",
                Filtration::Base => "base",
            };
            match cli.format {
                Format::Text => {
                    println!("filtration: {name}, field: {}", field_name(&field));
                    if let Some(n) = &note {
                        println!("note: {n}");
                    }
                    print!("{}", render_pages(&ss.summary()));
                    for p in &problems {
                        println!("inconsistent: {p}");
                    }
                }
                Format::Json => {
                    let v = json!({"filtration": name, "field": field_name(&field), "note": note, "pages": ss.summary(), "problems": problems});
                    println!("{}", serde_json::to_string_pretty(&v)?);
                }
            }
            Ok(problems.is_empty())
        }
        Command::ListBasis { file } => {
            let l = load(cli, file)?;
            let rows: Vec<Vec<String>> = (0..=dim).map(|d| l.base.nondegenerate(d).iter().map(|x| l.base.render(x)).collect()).collect();
            match cli.format {
                Format::Text => {
                    for (d, r) in rows.iter().enumerate() {
                        println!("{d}: {}", r.join(" "));
                    }
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
            }
            Ok(true)
        }
    }
}

fn bundle_complex<F: GSpace>(tp: &TwistedProduct<F>, twisted: bool, max: usize) -> Result<FiniteComplex>
where
    F::Cell: Basis,
{
    if twisted {
        let tt = TwistedTensor::new(tp);
        return Ok(twisted_complex(&tt, max)?.0);
    }
    let bases: Vec<_> = (0..=max).map(|d| tp.nondegenerate(d)).collect::<sztwist::Result<_>>()?;
    Ok(FiniteComplex::from_bases(0, &bases, |c| boundary_cell(tp, c))?)
}

/// The pages, plus a caveat when the fibre filtration is not nilpotent.
fn spectral<F: GSpace>(tp: &TwistedProduct<F>, field: Field, dim: usize, f: Filtration) -> Result<(SpectralSequence, Option<String>)>
where
    F::Cell: Basis,
{
    Ok(match f {
        Filtration::Fibre => {
            let ff = fibre_filtered(tp, field, dim)?;
            let note = (!ff.aug.nilpotent).then(|| "augmentation filtration is not nilpotent; convergence holds only for the truncated complex".to_string());
            (ff.ss, note)
        }
        Filtration::Base => (base_filtered(tp, field, dim)?.0, None),
    })
}

fn field_name(f: &Field) -> String {
    match f {
        Field::Rational => "q".into(),
        Field::Prime(p) => format!("fp:{p}"),
    }
}

fn print_homology(format: Format, hs: &[Homology]) -> Result<()> {
    match format {
        Format::Text => {
            for h in hs {
                println!("{h}");
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(hs)?),
    }
    Ok(())
}

/// One grid per page: columns are filtration levels `s`, rows are total degrees `n`
/// (highest first); entries are dimensions, with `d` ranks listed underneath.
fn render_pages(pages: &[PageSummary]) -> String {
    let all = pages.iter().flat_map(|p| p.entries.iter());
    let (mut smin, mut smax, mut nmin, mut nmax) = (0i64, 0i64, 0i64, 0i64);
    for (i, &(s, n, _, _)) in all.enumerate() {
        if i == 0 {
            (smin, smax, nmin, nmax) = (s, s, n, n);
        }
        (smin, smax, nmin, nmax) = (smin.min(s), smax.max(s), nmin.min(n), nmax.max(n));
    }
    let w = 4;
    let mut out = String::new();
    for (k, p) in pages.iter().enumerate() {
        let label = if k + 1 == pages.len() { format!("E^{} = E^inf", p.r) } else { format!("E^{}", p.r) };
        out.push_str(&format!("{label}\n"));
        out.push_str(&format!("{:>w$} |", "n\\s"));
        for s in smin..=smax {
            out.push_str(&format!("{s:>w$}"));
        }
        out.push('\n');
        out.push_str(&format!("{}-+{}\n", "-".repeat(w), "-".repeat(w * (smax - smin + 1) as usize)));
        for n in (nmin..=nmax).rev() {
            out.push_str(&format!("{n:>w$} |"));
            for s in smin..=smax {
                let d = p.entries.iter().find(|e| e.0 == s && e.1 == n).map_or(0, |e| e.2);
                let cell = if d == 0 { ".".to_string() } else { d.to_string() };
                out.push_str(&format!("{cell:>w$}"));
            }
            out.push('\n');
        }
        for &(s, n, _, rk) in &p.entries {
            if rk > 0 {
                out.push_str(&format!("  d^{} ({s},{n}) -> ({},{}): rank {rk}\n", p.r, s - p.r, n - 1));
            }
        }
        out.push('\n');
    }
    out
}
