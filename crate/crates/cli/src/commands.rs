use std::ffi::OsString;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use polyassoc_core::complex::{build_complex, flip_graph};
use polyassoc_core::visibility::visibility_graph;
use polyassoc_core::Region;

use crate::analysis::{
    analyze, complex_dot, move_log, parse_move, parse_point, parse_products, parse_root, parse_star_path, read_region,
    resolve_cap, star_log, triangulations_json, with_threads, AppError, Options, Product, Result,
};
use crate::server::{self, ServiceConfig};

#[derive(Debug, Parser)]
#[command(
    name = "polyassoc",
    version,
    about = "Exact convex-diagonalization complexes and visibility deformations of polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Polygon JSON file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Cap on enumerated faces or triangulations (default: $POLYASSOC_CAP, then 1000000).
    #[arg(long, value_name = "N")]
    cap: Option<usize>,
    /// Single-threaded, no timing metadata.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Several products for one polygon in a single JSON object.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Comma-separated: visibility, complex, flipgraph, realize, secondary, theta, rank.
        #[arg(long, value_name = "LIST", default_value = "visibility,rank")]
        products: String,
        /// Root edge for realize/secondary, as labels I,J.
        #[arg(long, value_name = "I,J")]
        root: Option<String>,
        /// `dot` needs exactly one of visibility, complex, flipgraph.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Every triangulation as a list of diagonals.
    Triangulations {
        #[command(flatten)]
        common: Common,
    },
    /// Face poset of the convex-diagonalization complex.
    Complex {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Flip graph of the triangulations.
    Flipgraph {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Integer points of the dual-tree realization.
    Realize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "I,J")]
        root: Option<String>,
    },
    /// Area vectors with height certificates.
    Secondary {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "I,J")]
        root: Option<String>,
    },
    /// Deform a star polygon to a convex one and report visibility events.
    DeformStar {
        #[command(flatten)]
        common: Common,
        /// Kernel point X,Y (default: a computed kernel point).
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        center: Option<String>,
        /// reciprocal or linear.
        #[arg(long, default_value = "reciprocal")]
        path: String,
    },
    /// Move vertices one at a time along straight segments and log visibility events.
    Move {
        #[command(flatten)]
        common: Common,
        /// Vertex label and target, e.g. `2:2,-1`; repeat for a chain.
        #[arg(long = "move", value_name = "L:X,Y", required = true, allow_hyphen_values = true)]
        moves: Vec<String>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Per-request time budget in seconds.
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
    },
}

/// Parses `args` (program name first), runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<Region> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    read_region(&text)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| AppError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| AppError::Io(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn options(common: &Common, root: Option<&str>) -> Result<Options> {
    Ok(Options {
        cap: resolve_cap(common.cap)?,
        root: root.map(parse_root).transpose()?,
        deterministic: common.deterministic,
    })
}

fn single(common: &Common, root: Option<&str>, product: Product) -> Result<()> {
    let region = load(&common.input)?;
    let v = analyze(&region, &[product], &Options { deterministic: true, ..options(common, root)? })?;
    emit_json(common.out.as_deref(), &v[product.name()])
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Analyze { common, products, root, format } => {
            let products = parse_products(&products)?;
            let opts = options(&common, root.as_deref())?;
            let region = load(&common.input)?;
            match format {
                Format::Json => emit_json(common.out.as_deref(), &analyze(&region, &products, &opts)?),
                Format::Dot => match products.as_slice() {
                    [Product::Visibility] => emit(common.out.as_deref(), &visibility_graph(&region).to_dot()),
                    [Product::Complex] => emit(common.out.as_deref(), &complex_dot(&build_complex(&region, opts.cap)?)),
                    [Product::FlipGraph] => emit(common.out.as_deref(), &flip_graph(&region, opts.cap)?.to_dot()),
                    _ => {
                        Err(AppError::Usage("--format dot needs exactly one of visibility, complex, flipgraph".into()))
                    }
                },
            }
        }
        Command::Triangulations { common } => {
            let region = load(&common.input)?;
            emit_json(common.out.as_deref(), &triangulations_json(&region, resolve_cap(common.cap)?)?)
        }
        Command::Complex { common, format } => {
            let region = load(&common.input)?;
            let k = build_complex(&region, resolve_cap(common.cap)?)?;
            match format {
                Format::Json => emit_json(common.out.as_deref(), &k.to_json()),
                Format::Dot => emit(common.out.as_deref(), &complex_dot(&k)),
            }
        }
        Command::Flipgraph { common, format } => {
            let region = load(&common.input)?;
            let g = flip_graph(&region, resolve_cap(common.cap)?)?;
            match format {
                Format::Json => emit_json(common.out.as_deref(), &g.to_json()),
                Format::Dot => emit(common.out.as_deref(), &g.to_dot()),
            }
        }
        Command::Realize { common, root } => single(&common, root.as_deref(), Product::Realize),
        Command::Secondary { common, root } => {
            let opts = options(&common, root.as_deref())?;
            let region = load(&common.input)?;
            let v = analyze(&region, &[Product::Secondary], &Options { deterministic: false, ..opts.clone() })?;
            emit_json(common.out.as_deref(), &v["secondary"])
        }
        Command::DeformStar { common, center, path } => {
            let region = load(&common.input)?;
            let center = center.as_deref().map(parse_point).transpose()?;
            let path = parse_star_path(&path)?;
            let v = with_threads(common.deterministic, || star_log(&region, center, path))?;
            emit_json(common.out.as_deref(), &v)
        }
        Command::Move { common, moves } => {
            let region = load(&common.input)?;
            let moves = moves.iter().map(|m| parse_move(m)).collect::<Result<Vec<_>>>()?;
            emit_json(common.out.as_deref(), &move_log(&region, &moves)?)
        }
        Command::Serve { port, bind, timeout_secs, cap } => {
            let config = ServiceConfig { budget: Duration::from_secs(timeout_secs), cap: resolve_cap(cap)? };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| AppError::Io(e.to_string()))?;
            runtime
                .block_on(server::serve(SocketAddr::new(bind, port), config))
                .map_err(|e| AppError::Io(e.to_string()))
        }
    }
}
