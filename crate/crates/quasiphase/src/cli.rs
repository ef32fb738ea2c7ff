//! Command-line front end.
//!
//! Every subcommand writes plot-ready data to `--out` (or standard output) as
//! CSV or JSON. CSV files get a `<out>.manifest.json` sidecar; JSON documents
//! embed the manifest. Exit status is 0 on success, 1 for usage and input
//! errors, and 2 when a numerical tolerance check fails.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analytic::{
    interference_term, regularized_delta, spats_p, spats_regularized, state_p_regularized,
    KernelSpec, StateP,
};
use crate::click::{g_classical, g_state, monte_carlo_g, ClassicalState, DetectionConfig};
use crate::entanglement::{
    ent_quasiprob, negativity_report, PauliEigenstate, SolveMode, TwoQubitState,
};
use crate::error::Error;
use crate::fock::CoherentSuperposition;
use crate::grid::{Grid2D, GridAxes};
use crate::hybrid::{eigenvalue_field, min_eig_scan, OffDiagonal};
use crate::io::{
    parse_axis_spec, parse_grid_spec, table_payload, write_complex_grid_csv, write_grid_csv,
    write_json, write_points_csv, write_table_csv, GridDocument, RunManifest, TableDocument,
};
use crate::multimode::{ghz_w_limits, tripartite_state_p};
use crate::validation;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "QUASIPHASE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "quasiphase",
    version,
    about = "Regularized quasiprobabilities of quantum-optical states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P function of the single-photon-added thermal state on a grid.
    Spats(SpatsArgs),
    /// Regularized interference term or cat-state distribution on a grid.
    CatP(CatArgs),
    /// Click-detection generating function along a cut or on a grid.
    Clicks(ClickArgs),
    /// Minimum eigenvalue of the hybrid quasiprobability matrix.
    Hybrid(HybridArgs),
    /// Tripartite cat-state slice and its GHZ/W limits.
    Tripartite(TripartiteArgs),
    /// Entanglement quasiprobability table of a two-qubit state.
    EntBell(EntArgs),
    /// Run the oracle-equivalence suite twice and compare payloads.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct SpatsArgs {
    /// Mean thermal photon number before photon addition.
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: f64,
    /// `min:max:count,min:max:count` for Re α and Im α.
    #[arg(long, default_value = "-3:3:201,-3:3:201", allow_hyphen_values = true)]
    pub grid: String,
    /// `p` (unregularized), `q`, `wigner`, `s:<order>` or `sinc2:<width>`.
    #[arg(long, default_value = "p")]
    pub kernel: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CatView {
    /// The single term `|−β⟩⟨β|`, complex valued.
    Interference,
    Even,
    Odd,
}

#[derive(Debug, Args, Serialize)]
pub struct CatArgs {
    /// Coherent amplitude, e.g. `1`, `0.5-1.2i`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, value_enum, default_value_t = CatView::Interference)]
    pub view: CatView,
    #[arg(long, default_value = "sinc2:3")]
    pub kernel: String,
    #[arg(long, default_value = "-3:3:201,-3:3:201", allow_hyphen_values = true)]
    pub grid: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalState {
    Even,
    Odd,
    Coherent,
    Thermal,
}

#[derive(Debug, Args, Serialize)]
pub struct ClickArgs {
    #[arg(long, value_enum, default_value_t = SignalState::Even)]
    pub state: SignalState,
    /// Coherent amplitude of the cat or coherent signal.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    /// Mean photon number of the thermal signal.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub nbar: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub eta: f64,
    /// Number of on-off detectors (a power of two).
    #[arg(long = "N", default_value_t = 2)]
    pub detectors: usize,
    /// Beam-splitter transmission amplitude; `r = √(1 − t²)`.
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_hyphen_values = true)]
    pub t: f64,
    /// `re=<x>` or `im=<y>`: fix one coordinate and sweep the other over `--range`.
    #[arg(long, conflicts_with = "grid", allow_hyphen_values = true)]
    pub cut: Option<String>,
    #[arg(long, default_value = "-3:3:121", allow_hyphen_values = true)]
    pub range: String,
    /// Full grid instead of a cut.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Check every point against a Monte Carlo estimate (classical states only).
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct HybridArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value = "sinc2:3")]
    pub kernel: String,
    #[arg(long, default_value = "-4:4:101,-4:4:101", allow_hyphen_values = true)]
    pub grid: String,
    /// Zero the off-diagonal entries (classical mixture of the two branches).
    #[arg(long)]
    pub drop_coherences: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct TripartiteArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value = "sinc2:3")]
    pub kernel: String,
    /// Grid over α₁; α₂ and α₃ stay fixed.
    #[arg(long, default_value = "-3:3:121,-3:3:121", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha2: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha3: String,
    /// Amplitude for the W-state fidelity.
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub small: f64,
    /// Amplitude for the GHZ branch overlap.
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    pub large: f64,
    #[arg(long, default_value_t = 16)]
    pub cutoff: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    NnlsFirst,
    MinNorm,
}

#[derive(Debug, Args, Serialize)]
pub struct EntArgs {
    /// `singlet`, `werner:<p>` or `product:<a>,<b>` with labels like `z+`.
    #[arg(long, default_value = "singlet")]
    pub state: String,
    #[arg(long, value_enum, default_value_t = ModeArg::NnlsFirst)]
    pub mode: ModeArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Why a subcommand stopped.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ImaginaryResidual { .. } | Error::NotRepresentable { .. } => {
                Failure::Tolerance(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> std::result::Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number `{text}`");
    let num = |t: &str| -> std::result::Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse().map_err(|_| bad()),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(
            body[..k].parse().map_err(|_| bad())?,
            num(&body[k..])?,
        )),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

/// `None` selects the unregularized P function.
fn parse_kernel(text: &str) -> std::result::Result<Option<KernelSpec>, Failure> {
    let usage = || {
        Failure::Usage(format!(
            "unknown kernel `{text}`; use p, q, wigner, s:<order> or sinc2:<width>"
        ))
    };
    let value = |v: &str| v.parse::<f64>().map_err(|_| usage());
    Ok(match text.split_once(':') {
        None => match text {
            "p" => None,
            "q" | "husimi" => Some(KernelSpec::husimi()),
            "wigner" => Some(KernelSpec::wigner()),
            _ => return Err(usage()),
        },
        Some(("s", v)) => Some(KernelSpec::gaussian_s(value(v)?)?),
        Some(("sinc2", v)) => Some(KernelSpec::sinc2(value(v)?)?),
        _ => return Err(usage()),
    })
}

fn require_kernel(text: &str) -> std::result::Result<KernelSpec, Failure> {
    parse_kernel(text)?
        .ok_or_else(|| Failure::Usage("this subcommand needs a regularizing kernel".into()))
}

fn complex_arg(text: &str) -> std::result::Result<C64, Failure> {
    parse_complex(text).map_err(Failure::Usage)
}

fn open_sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest_sidecar(output: &Output, manifest: &RunManifest) -> Outcome {
    if let Some(path) = &output.out {
        write_json(File::create(sidecar(path))?, manifest)?;
    }
    Ok(())
}

fn emit_real(output: &Output, manifest: RunManifest, grid: &Grid2D<f64>) -> Outcome {
    let mut sink = open_sink(output.out.as_deref())?;
    match output.format {
        Format::Csv => {
            write_grid_csv(&mut sink, grid)?;
            write_manifest_sidecar(output, &manifest)?;
        }
        Format::Json => write_json(&mut sink, &GridDocument::real(manifest, grid))?,
    }
    sink.flush()?;
    Ok(())
}

fn emit_complex(output: &Output, manifest: RunManifest, grid: &Grid2D<C64>) -> Outcome {
    let mut sink = open_sink(output.out.as_deref())?;
    match output.format {
        Format::Csv => {
            write_complex_grid_csv(&mut sink, grid)?;
            write_manifest_sidecar(output, &manifest)?;
        }
        Format::Json => write_json(&mut sink, &GridDocument::complex(manifest, grid))?,
    }
    sink.flush()?;
    Ok(())
}

fn manifest<A: Serialize>(
    name: &str,
    args: &A,
    grid: Option<&str>,
    payload: &[f64],
    start: Instant,
) -> RunManifest {
    let mut m = RunManifest::new(
        name,
        serde_json::to_value(args).unwrap_or(serde_json::Value::Null),
        payload,
        start.elapsed(),
    );
    m.grid = grid.map(str::to_string);
    m
}

fn grid_of(spec: &str) -> std::result::Result<GridAxes, Failure> {
    Ok(parse_grid_spec(spec)?)
}

fn try_grid(
    axes: GridAxes,
    f: impl Fn(C64) -> crate::Result<f64> + Sync,
) -> std::result::Result<Grid2D<f64>, Failure> {
    Ok(Grid2D::try_from_fn(axes, f)?)
}

fn run_spats(args: &SpatsArgs) -> Outcome {
    let start = Instant::now();
    let axes = grid_of(&args.grid)?;
    let kernel = parse_kernel(&args.kernel)?;
    let nbar = args.nbar;
    let grid = match kernel {
        None => try_grid(axes, |a| spats_p(nbar, a))?,
        Some(k) => try_grid(axes, |a| spats_regularized(nbar, &k, a))?,
    };
    eprintln!(
        "spats: minimum {:.6e}, maximum {:.6e}",
        grid.min(),
        grid.max()
    );
    emit_real(
        &args.output,
        manifest("spats", args, Some(&args.grid), grid.values(), start),
        &grid,
    )
}

fn run_cat(args: &CatArgs) -> Outcome {
    let start = Instant::now();
    let axes = grid_of(&args.grid)?;
    let kernel = require_kernel(&args.kernel)?;
    let beta = complex_arg(&args.beta)?;
    match args.view {
        CatView::Interference => {
            let term = interference_term(-beta, beta);
            let grid = Grid2D::from_fn(axes, |a| regularized_delta(&term, &kernel, a));
            let payload: Vec<f64> = grid.values().iter().flat_map(|v| [v.re, v.im]).collect();
            emit_complex(
                &args.output,
                manifest("cat-p", args, Some(&args.grid), &payload, start),
                &grid,
            )
        }
        view => {
            let state = if view == CatView::Even {
                CoherentSuperposition::even_cat(beta)?
            } else {
                CoherentSuperposition::odd_cat(beta)?
            };
            let p = StateP::from_superposition(&state);
            let grid = try_grid(axes, |a| state_p_regularized(&p, &kernel, a))?;
            eprintln!("cat-p: minimum {:.6e}", grid.min());
            emit_real(
                &args.output,
                manifest("cat-p", args, Some(&args.grid), grid.values(), start),
                &grid,
            )
        }
    }
}

/// Standard errors allowed between Monte Carlo and closed form per point.
const MC_SIGMAS: f64 = 5.0;

fn run_clicks(args: &ClickArgs) -> Outcome {
    let start = Instant::now();
    if !(0.0..=1.0).contains(&args.t) {
        return Err(Failure::Usage(format!(
            "t must lie in [0, 1], got {}",
            args.t
        )));
    }
    let cfg = DetectionConfig::new(
        args.detectors,
        args.eta,
        args.t,
        (1.0 - args.t * args.t).sqrt(),
        args.z,
    )?;
    let beta = complex_arg(&args.beta)?;
    enum Signal {
        Quantum(CoherentSuperposition),
        Classical(ClassicalState),
    }
    let signal = match args.state {
        SignalState::Even => Signal::Quantum(CoherentSuperposition::even_cat(beta)?),
        SignalState::Odd => Signal::Quantum(CoherentSuperposition::odd_cat(beta)?),
        SignalState::Coherent => Signal::Classical(ClassicalState::coherent(beta)),
        SignalState::Thermal => Signal::Classical(ClassicalState::Thermal { nbar: args.nbar }),
    };
    let classical = match &signal {
        Signal::Classical(c) => Some(c.clone()),
        Signal::Quantum(s) if args.mc => Some(ClassicalState::from_superposition(s)?),
        Signal::Quantum(_) => None,
    };
    let value = |a: C64| -> crate::Result<f64> {
        match &signal {
            Signal::Quantum(s) => g_state(s, a, &cfg),
            Signal::Classical(c) => g_classical(c, a, &cfg),
        }
    };

    let points: Vec<C64> = if let Some(spec) = &args.grid {
        let axes = parse_grid_spec(spec)?;
        (0..axes.len())
            .map(|k| axes.point(k % axes.re.count(), k / axes.re.count()))
            .collect()
    } else {
        let cut = args.cut.as_deref().unwrap_or("re=0");
        let (which, at) = cut.split_once('=').ok_or_else(|| {
            Failure::Usage(format!("cut `{cut}` must look like re=<x> or im=<y>"))
        })?;
        let at: f64 = at
            .parse()
            .map_err(|_| Failure::Usage(format!("bad cut position in `{cut}`")))?;
        let axis = parse_axis_spec(&args.range)?;
        match which {
            "re" => axis.nodes().map(|y| C64::new(at, y)).collect(),
            "im" => axis.nodes().map(|x| C64::new(x, at)).collect(),
            _ => {
                return Err(Failure::Usage(format!(
                    "cut axis must be re or im, got `{which}`"
                )))
            }
        }
    };

    let mut rows = Vec::with_capacity(points.len());
    let mut violations = Vec::new();
    for (k, &a) in points.iter().enumerate() {
        let g = value(a)?;
        let mut vals = vec![g];
        if let Some(state) = &classical {
            let (est, err) =
                monte_carlo_g(state, a, &cfg, args.shots, args.seed.wrapping_add(k as u64))?;
            let ok = if err > 0.0 {
                (est - g).abs() <= MC_SIGMAS * err
            } else {
                (est - g).abs() <= 1e-12
            };
            if !ok {
                violations.push(format!(
                    "α = {a}: Monte Carlo {est} ± {err} vs closed form {g}"
                ));
            }
            vals.extend([est, err]);
        }
        rows.push((a, vals));
    }
    let payload: Vec<f64> = rows.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let min = rows.iter().map(|(_, v)| v[0]).fold(f64::INFINITY, f64::min);
    eprintln!(
        "clicks: minimum generating function {min:.6e} over {} points",
        rows.len()
    );
    let mut m = manifest("clicks", args, args.grid.as_deref(), &payload, start);
    if args.mc {
        m.seed = Some(args.seed);
    }
    let extra: &[&str] = if args.mc {
        &["mc_value", "mc_stderr"]
    } else {
        &[]
    };
    let mut sink = open_sink(args.output.out.as_deref())?;
    match args.output.format {
        Format::Csv => {
            write_points_csv(&mut sink, extra, &rows)?;
            write_manifest_sidecar(&args.output, &m)?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                manifest: RunManifest,
                columns: Vec<&'a str>,
                points: Vec<[f64; 2]>,
                values: Vec<Vec<f64>>,
            }
            let mut columns = vec!["value"];
            columns.extend_from_slice(extra);
            write_json(
                &mut sink,
                &Doc {
                    manifest: m,
                    columns,
                    points: rows.iter().map(|(a, _)| [a.re, a.im]).collect(),
                    values: rows.iter().map(|(_, v)| v.clone()).collect(),
                },
            )?;
        }
    }
    sink.flush()?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!(
            "Monte Carlo disagrees with the closed form beyond {MC_SIGMAS}σ at {} point(s): {}",
            violations.len(),
            violations.join("; ")
        )))
    }
}

fn run_hybrid(args: &HybridArgs) -> Outcome {
    let start = Instant::now();
    let axes = grid_of(&args.grid)?;
    let kernel = require_kernel(&args.kernel)?;
    let beta = complex_arg(&args.beta)?;
    let off = if args.drop_coherences {
        OffDiagonal::Drop
    } else {
        OffDiagonal::Keep
    };
    let grid = Grid2D::from_values(axes, eigenvalue_field(beta, &kernel, &axes, off))?;
    let scan = min_eig_scan(beta, &kernel, &axes, off);
    eprintln!(
        "hybrid: minimum eigenvalue {:.6e} at α = {}",
        scan.min_eigenvalue,
        scan.argmin()
    );
    emit_real(
        &args.output,
        manifest("hybrid", args, Some(&args.grid), grid.values(), start),
        &grid,
    )
}

fn run_tripartite(args: &TripartiteArgs) -> Outcome {
    let start = Instant::now();
    let axes = grid_of(&args.grid)?;
    let kernel = require_kernel(&args.kernel)?;
    let beta = complex_arg(&args.beta)?;
    let (a2, a3) = (complex_arg(&args.alpha2)?, complex_arg(&args.alpha3)?);
    let p = tripartite_state_p(beta)?;
    let grid = try_grid(axes, |a| p.evaluate(&kernel, &[a, a2, a3]))?;
    let (f_w, cross) = ghz_w_limits(args.small, args.large, args.cutoff)?;
    let b = args.small;
    let f_closed = 6.0 * b * b * (-3.0 * b * b).exp() / -(-6.0 * b * b).exp_m1();
    let cross_closed = (-6.0 * args.large * args.large).exp();
    eprintln!(
        "tripartite: W fidelity {f_w:.10} at β = {b}, branch overlap {cross:.6e} at β = {}",
        args.large
    );
    emit_real(
        &args.output,
        manifest("tripartite", args, Some(&args.grid), grid.values(), start),
        &grid,
    )?;
    if (f_w - f_closed).abs() > 1e-9 {
        return Err(Failure::Tolerance(format!(
            "W fidelity {f_w} differs from its closed form {f_closed}; raise --cutoff"
        )));
    }
    if (cross - cross_closed).abs() > 1e-9 {
        return Err(Failure::Tolerance(format!(
            "branch overlap {cross} differs from {cross_closed}"
        )));
    }
    Ok(())
}

fn parse_label(text: &str) -> std::result::Result<PauliEigenstate, Failure> {
    PauliEigenstate::ALL
        .into_iter()
        .find(|s| s.label() == text)
        .ok_or_else(|| Failure::Usage(format!("unknown Pauli eigenstate `{text}`")))
}

fn parse_two_qubit(text: &str) -> std::result::Result<TwoQubitState, Failure> {
    match text.split_once(':') {
        None if text == "singlet" => Ok(TwoQubitState::singlet()),
        Some(("werner", p)) => {
            let p: f64 = p
                .parse()
                .map_err(|_| Failure::Usage(format!("bad Werner weight `{p}`")))?;
            Ok(TwoQubitState::werner(p)?)
        }
        Some(("product", ab)) => {
            let (a, b) = ab.split_once(',').ok_or_else(|| {
                Failure::Usage("product state needs two labels, e.g. product:z+,x-".into())
            })?;
            Ok(TwoQubitState::product(parse_label(a)?, parse_label(b)?))
        }
        _ => Err(Failure::Usage(format!("unknown state `{text}`"))),
    }
}

fn run_ent(args: &EntArgs) -> Outcome {
    let start = Instant::now();
    let rho = parse_two_qubit(&args.state)?;
    let mode = match args.mode {
        ModeArg::NnlsFirst => SolveMode::NnlsFirst,
        ModeArg::MinNorm => SolveMode::MinNorm,
    };
    let table = ent_quasiprob(&rho, mode);
    let report = negativity_report(&table);
    let negativity = report.as_ref().ok().map(|r| r.total_negativity);
    match &report {
        Ok(r) => eprintln!(
            "ent-bell: residual {:.3e}, total negativity {:.6}, {} negative cell(s)",
            table.residual,
            r.total_negativity,
            r.negative_cells.len()
        ),
        Err(e) => eprintln!("ent-bell: {e}"),
    }
    let m = manifest("ent-bell", args, None, &table_payload(&table), start);
    let mut sink = open_sink(args.output.out.as_deref())?;
    match args.output.format {
        Format::Csv => {
            write_table_csv(&mut sink, &table)?;
            write_manifest_sidecar(&args.output, &m)?;
        }
        Format::Json => write_json(
            &mut sink,
            &TableDocument {
                manifest: m,
                labels: PauliEigenstate::ALL
                    .iter()
                    .map(|s| s.label().to_string())
                    .collect(),
                table: table.clone(),
                total_negativity: negativity,
            },
        )?,
    }
    sink.flush()?;
    report.map(|_| ()).map_err(Failure::from)
}

fn run_validate(args: &ValidateArgs) -> Outcome {
    let report = validation::validate_twice();
    for check in &report.checks {
        println!(
            "{} {:<28} {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    println!(
        "{} determinism: payloads {} (sha256 {})",
        if report.deterministic { "PASS" } else { "FAIL" },
        if report.deterministic {
            "byte-identical"
        } else {
            "differ"
        },
        report.checksum
    );
    if let Some(path) = &args.out {
        write_json(File::create(path)?, &report)?;
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    if !report.deterministic {
        return Err(Failure::Tolerance(
            "determinism: repeated runs produced different payloads".into(),
        ));
    }
    if !failed.is_empty() {
        return Err(Failure::Tolerance(format!(
            "failed checks: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

/// Applies the thread cap from [`THREADS_ENV`], if set.
fn configure_threads() -> Outcome {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    if rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_err()
    {
        log::debug!("global thread pool already initialized; {THREADS_ENV} ignored");
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
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
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Spats(a) => run_spats(a),
        Command::CatP(a) => run_cat(a),
        Command::Clicks(a) => run_clicks(a),
        Command::Hybrid(a) => run_hybrid(a),
        Command::Tripartite(a) => run_tripartite(a),
        Command::EntBell(a) => run_ent(a),
        Command::Validate(a) => run_validate(a),
    });
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Tolerance(msg)) => {
            eprintln!("tolerance failure: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), C64::new(-2.5, 0.0));
        assert_eq!(parse_complex("0.5-1.2i").unwrap(), C64::new(0.5, -1.2));
        assert_eq!(parse_complex("-1+i").unwrap(), C64::new(-1.0, 1.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C64::new(1e-3, 20.0));
        assert!(parse_complex("one").is_err());
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn kernel_names() {
        assert!(parse_kernel("p").unwrap().is_none());
        assert_eq!(parse_kernel("q").unwrap(), Some(KernelSpec::husimi()));
        assert_eq!(parse_kernel("s:0").unwrap(), Some(KernelSpec::wigner()));
        assert_eq!(
            parse_kernel("sinc2:3").unwrap(),
            Some(KernelSpec::sinc2(3.0).unwrap())
        );
        assert!(parse_kernel("sinc2:-1").is_err());
        assert!(parse_kernel("gauss").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["quasiphase", "spats"]), 1);
        assert_eq!(run(["quasiphase", "spats", "--nbar", "1", "--bogus"]), 1);
        assert_eq!(
            run([
                "quasiphase",
                "spats",
                "--nbar",
                "1",
                "--grid",
                "3:-3:10,0:1:2"
            ]),
            1
        );
        assert_eq!(run(["quasiphase", "nonsense"]), 1);
    }
}
