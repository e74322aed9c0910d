//! `groupring`: batch front end for group ring matrices.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 numeric-quality failure.

mod render;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use groupring::abelian::{abelian_diagonalizer, AbelianFactors};
use groupring::blockdiag::{
    block_transform, build_diagonalizer, group_block_representation, transform_multiply, Diagonalizer, Provenance,
    BLOCK_TOL,
};
use groupring::idempotents::{character_table, idempotents_for, verify_idempotent_set, CharacterSource, IDEMPOTENT_TOL};
use groupring::io::{self, CharacterTableFile, DiagonalizerFile, GroupTableFile, IdempotentSetFile};
use groupring::ring::{is_rg_matrix, sigma, GroupRingElement};
use groupring::{build_group, CMatrix, Error, FiniteGroup, GroupSpec, Result};

#[derive(Parser, Debug)]
#[command(name = "groupring", version, about = "Group ring matrices and their block diagonalization")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Options,
}

#[derive(clap::Args, Debug, Clone)]
struct Options {
    /// Tolerance for checks (default: 1e-9 scaled by size and magnitude)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for the numeric character table
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Orthonormalize the columns of P within each block (P⁻¹ = P*)
    #[arg(long, global = true)]
    orthonormal: bool,
    /// Output format; defaults to pretty on stdout, json when --output is given
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Character table source
    #[arg(long, global = true, value_enum, default_value_t = Source::Builtin)]
    source: Source,
    /// Character table file, for --source file
    #[arg(long, global = true)]
    table: Option<PathBuf>,
    /// How to build P: from central idempotents, or the explicit abelian construction
    #[arg(long, global = true, value_enum, default_value_t = Method::Idempotents)]
    method: Method,
    /// Load P from a diagonalizer file instead of constructing it
    #[arg(long, global = true)]
    diagonalizer: Option<PathBuf>,
    /// Write machine output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Builtin,
    Numeric,
    File,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Idempotents,
    Abelian,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Listing, labels and multiplication table
    Group { group: String },
    /// Irreducible character table
    Chartable { group: String },
    /// Central primitive idempotents and their ranks
    Idempotents { group: String },
    /// The matrix P that block diagonalizes every group ring matrix
    Diagonalizer { group: String },
    /// P⁻¹AP for a group element, a coefficient vector, or a matrix file
    Transform {
        group: String,
        /// Group element by label (e.g. a, a^2b, #3)
        #[arg(long, conflicts_with_all = ["coeffs", "matrix"])]
        element: Option<String>,
        /// Coefficient vector file
        #[arg(long, conflicts_with = "matrix")]
        coeffs: Option<PathBuf>,
        /// Matrix file (json or csv)
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Product of two group ring elements through the block transform
    Convolve { group: String, left: PathBuf, right: PathBuf },
    /// Check an idempotent set, diagonalizer, character table or group table file
    Verify { group: String, file: PathBuf },
    /// Images of group elements in one block of the transform
    Rep {
        group: String,
        /// 0-based block index
        #[arg(long)]
        block: usize,
        /// Restrict to one element
        #[arg(long)]
        element: Option<String>,
    },
}

/// Machine output with its pretty rendering.
struct Output {
    json: Value,
    csv: Option<String>,
    pretty: String,
}

/// Outcome of `verify`: printed either way, exit 1 when failed.
struct Failed(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Failed(report))) => {
            eprintln!("{report}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification { .. } | Error::OffBlock { .. } | Error::ZeroDivisor { .. } | Error::RankDeficient { .. } => 1,
        Error::NumericQuality(_) | Error::EigenClustering { .. } | Error::Internal(_) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Option<Failed>> {
    let opts = &cli.opts;
    let out = match &cli.verb {
        Verb::Group { group } => cmd_group(&load_group(group)?),
        Verb::Chartable { group } => cmd_chartable(&load_group(group)?, opts)?,
        Verb::Idempotents { group } => cmd_idempotents(&load_group(group)?, opts)?,
        Verb::Diagonalizer { group } => cmd_diagonalizer(&load_group(group)?, opts)?,
        Verb::Transform {
            group,
            element,
            coeffs,
            matrix,
        } => {
            let g = load_group(group)?;
            let a = transform_input(&g, element.as_deref(), coeffs.as_deref(), matrix.as_deref())?;
            cmd_transform(&g, &a, opts)?
        }
        Verb::Convolve { group, left, right } => cmd_convolve(&load_group(group)?, left, right, opts)?,
        Verb::Verify { group, file } => {
            let g = load_group(group)?;
            let (ok, report) = cmd_verify(&g, file, opts)?;
            println!("{report}");
            return Ok(if ok { None } else { Some(Failed(format!("verification of {} failed", file.display()))) });
        }
        Verb::Rep { group, block, element } => cmd_rep(&load_group(group)?, *block, element.as_deref(), opts)?,
    };
    emit(&out, opts)?;
    Ok(None)
}

fn emit(out: &Output, opts: &Options) -> Result<()> {
    let format = opts
        .format
        .unwrap_or(if opts.output.is_some() { Format::Json } else { Format::Pretty });
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json)?;
            s.push('\n');
            s
        }
        Format::Csv => out
            .csv
            .clone()
            .ok_or_else(|| Error::Format("this output has no csv form; use --format json".into()))?,
        Format::Pretty => out.pretty.clone(),
    };
    match &opts.output {
        Some(path) => io::write_text(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn load_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    let spec: GroupSpec = spec.parse()?;
    Ok(Arc::new(build_group(&spec)?))
}

fn source(opts: &Options) -> Result<CharacterSource> {
    Ok(match opts.source {
        Source::Builtin => CharacterSource::Builtin,
        Source::Numeric => CharacterSource::Numeric { seed: opts.seed },
        Source::File => CharacterSource::File(
            opts.table
                .clone()
                .ok_or_else(|| Error::Format("--source file needs --table <path>".into()))?,
        ),
    })
}

fn find(group: &FiniteGroup, name: &str) -> Result<usize> {
    group
        .find_element(name)
        .ok_or_else(|| Error::Format(format!("no element named {name:?} in this group")))
}

fn diagonalizer(group: &Arc<FiniteGroup>, opts: &Options) -> Result<Diagonalizer> {
    if let Some(path) = &opts.diagonalizer {
        let d = io::parse_diagonalizer(&io::read_to_string(path)?)?;
        if d.dim() != group.order() {
            return Err(Error::dimension(group.order(), d.dim()));
        }
        return Ok(d);
    }
    match opts.method {
        Method::Idempotents => build_diagonalizer(&idempotents_for(group, &source(opts)?)?, opts.orthonormal),
        Method::Abelian => {
            let factors = AbelianFactors::from_group(group)?;
            let d = abelian_diagonalizer(&factors);
            if !opts.orthonormal {
                return Ok(d);
            }
            let q = Complex64::new((factors.order() as f64).sqrt(), 0.0);
            Diagonalizer::new(
                d.matrix() / q,
                d.block_sizes().to_vec(),
                true,
                Provenance::Abelian {
                    factors: factors.orders().to_vec(),
                },
            )
        }
    }
}

fn pairs(z: &[Complex64]) -> Value {
    json!(z.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
}

fn matrix_json(m: &CMatrix) -> Value {
    json!(io::matrix_to_pairs(m))
}

fn cmd_group(g: &Arc<FiniteGroup>) -> Output {
    let file = GroupTableFile::from(&**g);
    let labels = g.labels().to_vec();
    let rows: Vec<(String, Vec<String>)> = (0..g.order())
        .map(|i| (labels[i].clone(), (0..g.order()).map(|j| g.label(g.mul(i, j)).to_string()).collect()))
        .collect();
    let classes = groupring::conjugacy_classes(g);
    let mut pretty = format!("order {}\n\n", g.order());
    pretty.push_str(&render::grid(Some(&labels), &rows));
    pretty.push_str("\nconjugacy classes\n");
    for class in classes.classes() {
        let names: Vec<&str> = class.iter().map(|&x| g.label(x)).collect();
        pretty.push_str(&format!("  {{{}}}\n", names.join(", ")));
    }
    let csv = file
        .table
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    Output {
        json: serde_json::to_value(&file).expect("table serializes"),
        csv: Some(csv),
        pretty,
    }
}

fn cmd_chartable(g: &Arc<FiniteGroup>, opts: &Options) -> Result<Output> {
    let t = character_table(g, &source(opts)?)?;
    let file = CharacterTableFile::from_table(&t, g);
    let header: Vec<String> = file.classes.representatives.clone();
    let mut rows: Vec<(String, Vec<String>)> = vec![(
        "class size".into(),
        file.classes.sizes.iter().map(|s| s.to_string()).collect(),
    )];
    rows.extend((0..t.len()).map(|i| {
        (
            format!("χ{i}"),
            (0..t.len()).map(|j| render::complex(t.value(i, j))).collect(),
        )
    }));
    Ok(Output {
        json: serde_json::to_value(&file)?,
        csv: Some(io::matrix_to_csv(t.values())),
        pretty: render::grid(Some(&header), &rows),
    })
}

fn cmd_idempotents(g: &Arc<FiniteGroup>, opts: &Options) -> Result<Output> {
    let set = idempotents_for(g, &source(opts)?)?;
    let file = IdempotentSetFile::from(&set);
    let header: Vec<String> = g.labels().to_vec();
    let rows: Vec<(String, Vec<String>)> = set
        .elements()
        .iter()
        .zip(set.ranks())
        .enumerate()
        .map(|(i, (e, r))| {
            (
                format!("e{i} (rank {r})"),
                e.coeffs().iter().map(|&z| render::complex(z)).collect(),
            )
        })
        .collect();
    let csv = set
        .elements()
        .iter()
        .map(|e| e.coeffs().iter().map(|&z| io::format_csv_cell(z)).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    Ok(Output {
        json: serde_json::to_value(&file)?,
        csv: Some(csv),
        pretty: render::grid(Some(&header), &rows),
    })
}

fn cmd_diagonalizer(g: &Arc<FiniteGroup>, opts: &Options) -> Result<Output> {
    let d = diagonalizer(g, opts)?;
    let pretty = format!(
        "block sizes {:?}{}\n\nP\n{}\nP⁻¹\n{}",
        d.block_sizes(),
        if d.is_unitary() { " (unitary)" } else { "" },
        render::matrix(d.matrix()),
        render::matrix(d.inverse()),
    );
    Ok(Output {
        json: serde_json::to_value(DiagonalizerFile::from(&d))?,
        csv: Some(io::matrix_to_csv(d.matrix())),
        pretty,
    })
}

fn transform_input(
    g: &Arc<FiniteGroup>,
    element: Option<&str>,
    coeffs: Option<&Path>,
    matrix: Option<&Path>,
) -> Result<CMatrix> {
    match (element, coeffs, matrix) {
        (Some(name), _, _) => Ok(sigma(&GroupRingElement::basis(g.clone(), find(g, name)?)).into_inner()),
        (_, Some(path), _) => Ok(sigma(&io::read_coeffs(path, g)?).into_inner()),
        (_, _, Some(path)) => {
            let m = io::read_matrix(path)?;
            if m.shape() != (g.order(), g.order()) {
                return Err(Error::dimension(
                    format!("{0}x{0}", g.order()),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            Ok(m)
        }
        _ => Err(Error::Format("transform needs --element, --coeffs or --matrix".into())),
    }
}

fn cmd_transform(g: &Arc<FiniteGroup>, a: &CMatrix, opts: &Options) -> Result<Output> {
    let d = diagonalizer(g, opts)?;
    let bd = block_transform(a, &d, opts.tol)?;
    let full = bd.assemble();
    let rg = is_rg_matrix(g, a, opts.tol)?.is_some();
    let mut pretty = format!(
        "block sizes {:?}, off-block residual {:.3e}{}\n\n",
        bd.sizes(),
        bd.off_block_residual(),
        if rg { "" } else { " (input is not a group ring matrix)" }
    );
    pretty.push_str(&render::matrix(&full));
    Ok(Output {
        json: json!({
            "block_sizes": bd.sizes(),
            "off_block_residual": bd.off_block_residual(),
            "blocks": bd.blocks().iter().map(matrix_json).collect::<Vec<_>>(),
            "matrix": matrix_json(&full),
        }),
        csv: Some(io::matrix_to_csv(&full)),
        pretty,
    })
}

fn cmd_convolve(g: &Arc<FiniteGroup>, left: &Path, right: &Path, opts: &Options) -> Result<Output> {
    let w = io::read_coeffs(left, g)?;
    let v = io::read_coeffs(right, g)?;
    let d = diagonalizer(g, opts)?;
    let product = transform_multiply(&w, &v, &d)?;
    let header: Vec<String> = g.labels().to_vec();
    let cells = product.coeffs().iter().map(|&z| render::complex(z)).collect();
    Ok(Output {
        json: pairs(product.coeffs()),
        csv: Some(
            product
                .coeffs()
                .iter()
                .map(|&z| io::format_csv_cell(z))
                .collect::<Vec<_>>()
                .join(",")
                + "\n",
        ),
        pretty: render::grid(Some(&header), &[("wv".into(), cells)]),
    })
}

fn cmd_rep(g: &Arc<FiniteGroup>, block: usize, element: Option<&str>, opts: &Options) -> Result<Output> {
    let d = diagonalizer(g, opts)?;
    let images = group_block_representation(g, &d, block)?;
    let chosen: Vec<usize> = match element {
        Some(name) => vec![find(g, name)?],
        None => (0..g.order()).collect(),
    };
    let mut pretty = String::new();
    let mut entries = Vec::new();
    for &x in &chosen {
        pretty.push_str(&format!("{}\n{}\n", g.label(x), render::matrix(&images[x])));
        entries.push(json!({ "element": g.label(x), "matrix": matrix_json(&images[x]) }));
    }
    Ok(Output {
        json: json!({ "block": block, "images": entries }),
        csv: None,
        pretty,
    })
}

/// Detects the artifact kind by its keys and checks it.
fn cmd_verify(g: &Arc<FiniteGroup>, path: &Path, opts: &Options) -> Result<(bool, String)> {
    let text = io::read_to_string(path)?;
    let doc: Value = serde_json::from_str(&text)?;
    let has = |k: &str| doc.get(k).is_some();
    if has("idempotents") {
        let file: IdempotentSetFile = serde_json::from_value(doc)?;
        let elements = io::idempotent_elements(&file, g)?;
        let tol = opts.tol.unwrap_or(IDEMPOTENT_TOL);
        let report = verify_idempotent_set(&elements, tol)?;
        let mut ok = report.passed();
        let mut out = format!("idempotent set, {} elements\n{report}", elements.len());
        if ok {
            match groupring::idempotents::idempotent_ranks(&elements) {
                Ok(ranks) => {
                    let stated: Vec<usize> = file.idempotents.iter().map(|e| e.rank).collect();
                    ok = ranks == stated;
                    out.push_str(&format!("\nranks {ranks:?}, stated {stated:?}"));
                }
                Err(e) => {
                    ok = false;
                    out.push_str(&format!("\nranks: {e}"));
                }
            }
        }
        Ok((ok, out))
    } else if has("block_sizes") {
        let d = io::parse_diagonalizer(&text)?;
        if d.dim() != g.order() {
            return Err(Error::dimension(g.order(), d.dim()));
        }
        let tol = opts.tol.unwrap_or(BLOCK_TOL);
        // Every group ring matrix is a combination of the σ(g), so checking
        // each basis element suffices.
        let mut worst = 0.0f64;
        for x in 0..g.order() {
            let image = sigma(&GroupRingElement::basis(g.clone(), x));
            match block_transform(image.matrix(), &d, Some(f64::INFINITY)) {
                Ok(bd) => worst = worst.max(bd.off_block_residual()),
                Err(e) => return Err(e),
            }
        }
        let ok = worst <= tol;
        Ok((
            ok,
            format!(
                "diagonalizer, block sizes {:?}\ninverse residual   {:.3e}\noff-block residual {:.3e}\n{} at tolerance {:.3e}",
                d.block_sizes(),
                d.inverse_residual(),
                worst,
                if ok { "PASS" } else { "FAIL" },
                tol
            ),
        ))
    } else if has("rows") {
        match io::parse_character_table(&text, g) {
            Ok(t) => Ok((true, format!("character table, {} classes, degrees {:?}\nPASS", t.len(), t.degrees()))),
            Err(e @ Error::Verification { .. }) => Ok((false, format!("character table\n{e}\nFAIL"))),
            Err(e) => Err(e),
        }
    } else if has("table") {
        let other = io::parse_group_table(&text)?;
        let ok = other == **g;
        Ok((
            ok,
            format!(
                "group table of order {}: {}",
                other.order(),
                if ok { "PASS (matches)" } else { "FAIL (differs from the named group)" }
            ),
        ))
    } else {
        Err(Error::Format(format!("{}: unrecognized artifact", path.display())))
    }
}
