//! Command-line frontend: every computation behind one thin binary with
//! machine-readable output.
//!
//! Exit codes: 0 success, 2 parse or usage failure, 3 internal consistency
//! failure, 4 domain error, 5 invariant violation in the input.

use crate::assembly::{self, AssemblyError};
use crate::cech::{self, CechError, CoverError, SampleOpts, StructuredCover};
use crate::geometry::bs_set_in_band;
use crate::jsonio::{self, JsonError};
use crate::spectral::{self, SpectralError};
use crate::toric::{self, ToricError};
use serde_json::{json, Value};
use std::path::PathBuf;

pub mod exit_code {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const INCONSISTENT: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const INVARIANT: i32 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    BsSet,
    CechBand,
    LerayBand,
    QuantizeToric,
    SpectralTurn,
    SpectralStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

/// Parsed invocation: command, input source and knobs.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub inline_json: Option<String>,
    pub out_path: Option<PathBuf>,
    pub format: OutputFormat,
    /// Float tolerance for numeric verification paths; must lie in (0, 1e-4].
    pub tolerance: f64,
    /// Generic-sample density per unit interval; must be ≥ 1.
    pub samples_per_unit: u32,
    /// Parallelism hint for the lattice scan (default from BSQ_JOBS).
    pub jobs: usize,
    pub decompose: bool,
    pub verify: bool,
    pub points: bool,
}

/// A terminal failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

const USAGE: &str = "usage: bsq <command> (--in FILE | --json TEXT) [options]

commands:
  bs-set           list the Bohr-Sommerfeld leaves of a band
  cech-band        cohomology of a cylinder band, disc or annulus cover
  leray-band       band cohomology through the fibration tables
  quantize-toric   interior/total lattice counts of a moment polytope
  spectral turn    turn a bigraded page once
  spectral stable  report whether a bigraded page is stable

options:
  --in FILE        read the input object from FILE
  --json TEXT      inline input object
  --out FILE       write output to FILE instead of stdout
  --format F       json (default) or table
  --tolerance X    numeric tolerance in (0, 1e-4], default 1e-10
  --samples N      generic samples per unit interval, default 5
  --jobs N         parallelism hint (default from BSQ_JOBS)
  --decompose      cech-band: also emit the overlapping decomposition
  --verify         leray-band: cross-check against the direct computation
  --points         quantize-toric: include the classified point lists";

pub fn parse_args(args: &[String], env_jobs: Option<usize>) -> Result<RunConfig, Failure> {
    let usage = |msg: &str| Failure::new(exit_code::PARSE, format!("{msg}\n{USAGE}"));
    let mut iter = args.iter().peekable();
    let command = match iter.next().map(String::as_str) {
        Some("bs-set") => Command::BsSet,
        Some("cech-band") => Command::CechBand,
        Some("leray-band") => Command::LerayBand,
        Some("quantize-toric") => Command::QuantizeToric,
        Some("spectral") => match iter.next().map(String::as_str) {
            Some("turn") => Command::SpectralTurn,
            Some("stable") => Command::SpectralStable,
            other => return Err(usage(&format!("spectral needs turn|stable, got {other:?}"))),
        },
        Some("--help") | Some("-h") | None => return Err(usage("")),
        Some(other) => return Err(usage(&format!("unknown command `{other}`"))),
    };
    let mut config = RunConfig {
        command,
        input_path: None,
        inline_json: None,
        out_path: None,
        format: OutputFormat::Json,
        tolerance: 1e-10,
        samples_per_unit: 5,
        jobs: env_jobs.unwrap_or(1).max(1),
        decompose: false,
        verify: false,
        points: false,
    };
    while let Some(flag) = iter.next() {
        let mut value = |name: &str| {
            iter.next()
                .cloned()
                .ok_or_else(|| usage(&format!("{name} needs a value")))
        };
        match flag.as_str() {
            "--in" => config.input_path = Some(PathBuf::from(value("--in")?)),
            "--json" => config.inline_json = Some(value("--json")?),
            "--out" => config.out_path = Some(PathBuf::from(value("--out")?)),
            "--format" => {
                config.format = match value("--format")?.as_str() {
                    "json" => OutputFormat::Json,
                    "table" => OutputFormat::Table,
                    other => return Err(usage(&format!("unknown format `{other}`"))),
                }
            }
            "--tolerance" => {
                config.tolerance = value("--tolerance")?
                    .parse()
                    .map_err(|_| usage("--tolerance needs a float"))?
            }
            "--samples" => {
                config.samples_per_unit = value("--samples")?
                    .parse()
                    .map_err(|_| usage("--samples needs an integer"))?
            }
            "--jobs" => {
                config.jobs = value("--jobs")?
                    .parse()
                    .map_err(|_| usage("--jobs needs an integer"))?
            }
            "--decompose" => config.decompose = true,
            "--verify" => config.verify = true,
            "--points" => config.points = true,
            other => return Err(usage(&format!("unknown flag `{other}`"))),
        }
    }
    if !(config.tolerance > 0.0 && config.tolerance <= 1e-4) {
        return Err(usage("--tolerance must lie in (0, 1e-4]"));
    }
    if config.samples_per_unit < 1 {
        return Err(usage("--samples must be at least 1"));
    }
    if config.input_path.is_none() && config.inline_json.is_none() {
        return Err(usage("an input is required (--in FILE or --json TEXT)"));
    }
    Ok(config)
}

fn read_input(config: &RunConfig) -> Result<Value, Failure> {
    let text = if let Some(path) = &config.input_path {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::new(exit_code::PARSE, format!("reading {path:?}: {e}")))?
    } else {
        config.inline_json.clone().expect("validated in parse_args")
    };
    jsonio::parse_value(&text).map_err(from_json_err)
}

fn from_json_err(e: JsonError) -> Failure {
    Failure::new(exit_code::PARSE, e.to_string())
}

fn from_cech_err(e: CechError) -> Failure {
    let code = match e {
        CechError::GenericInconsistency { .. } => exit_code::INCONSISTENT,
        _ => exit_code::DOMAIN,
    };
    Failure::new(code, e.to_string())
}

fn from_cover_err(e: CoverError) -> Failure {
    // a cover that cannot be built is a bad input spec
    Failure::new(exit_code::PARSE, e.to_string())
}

fn from_toric_err(e: ToricError) -> Failure {
    let code = match e {
        ToricError::Unbounded(_)
        | ToricError::NotFullDimensional
        | ToricError::TooManyCandidates(_)
        | ToricError::Overflow => exit_code::DOMAIN,
        _ => exit_code::INVARIANT,
    };
    Failure::new(code, e.to_string())
}

fn from_spectral_err(e: SpectralError) -> Failure {
    let code = match e {
        SpectralError::Unstable => exit_code::DOMAIN,
        _ => exit_code::INVARIANT,
    };
    Failure::new(code, e.to_string())
}

fn from_assembly_err(e: AssemblyError) -> Failure {
    let code = match e {
        AssemblyError::NonAcyclicOverlap { .. } => exit_code::INCONSISTENT,
        _ => exit_code::DOMAIN,
    };
    Failure::new(code, e.to_string())
}

/// Executes the command and returns the rendered output.
pub fn run(config: &RunConfig) -> Result<String, Failure> {
    let input = read_input(config)?;
    let value = match config.command {
        Command::BsSet => cmd_bs_set(&input)?,
        Command::CechBand => cmd_cech_band(config, &input)?,
        Command::LerayBand => cmd_leray_band(config, &input)?,
        Command::QuantizeToric => cmd_quantize_toric(config, &input)?,
        Command::SpectralTurn => cmd_spectral(&input, true)?,
        Command::SpectralStable => cmd_spectral(&input, false)?,
    };
    Ok(match config.format {
        OutputFormat::Json => jsonio::to_text(&value),
        OutputFormat::Table => render_table(&value),
    })
}

fn cmd_bs_set(input: &Value) -> Result<Value, Failure> {
    let band = jsonio::band_from_value(input).map_err(from_json_err)?;
    let leaves = bs_set_in_band(&band);
    Ok(jsonio::leaves_to_value(&leaves))
}

fn sample_opts(config: &RunConfig) -> SampleOpts {
    SampleOpts {
        samples_per_unit: config.samples_per_unit,
    }
}

fn cmd_cech_band(config: &RunConfig, input: &Value) -> Result<Value, Failure> {
    let opts = sample_opts(config);
    if let Some(disc) = input.get("disc") {
        let cover = jsonio::plane_cover_from_value(disc).map_err(from_json_err)?;
        let report = cech::disc_cohomology(&cover, &opts).map_err(from_cech_err)?;
        return Ok(with_warnings(
            jsonio::report_to_value(&report),
            cover.warnings(),
        ));
    }
    if let Some(ann) = input.get("annulus") {
        let inner = jsonio::q_from_value(
            ann.get("inner")
                .ok_or_else(|| Failure::new(exit_code::PARSE, "annulus needs `inner`"))?,
            "inner",
        )
        .map_err(from_json_err)?;
        let outer = jsonio::q_from_value(
            ann.get("outer")
                .ok_or_else(|| Failure::new(exit_code::PARSE, "annulus needs `outer`"))?,
            "outer",
        )
        .map_err(from_json_err)?;
        let cover = match input.get("cover") {
            Some(c) => jsonio::wall_from_value(c).map_err(from_json_err)?,
            None => cech::single_layer_cover(3, (inner.clone(), outer.clone()))
                .map_err(from_cover_err)?,
        };
        let report =
            cech::annulus_cohomology(&inner, &outer, &cover, &opts).map_err(from_cech_err)?;
        return Ok(with_warnings(
            jsonio::report_to_value(&report),
            cover.warnings(),
        ));
    }
    let band = jsonio::band_from_value(
        input
            .get("band")
            .ok_or_else(|| Failure::new(exit_code::PARSE, "expected `band`, `disc` or `annulus`"))?,
    )
    .map_err(from_json_err)?;
    let interval = band
        .single_interval()
        .map_err(|e| Failure::new(exit_code::DOMAIN, e.to_string()))?;
    let cover = match input.get("cover") {
        Some(c) => jsonio::wall_from_value(c).map_err(from_json_err)?,
        None => cech::single_layer_cover(3, interval).map_err(from_cover_err)?,
    };
    let report = cech::band_cohomology(&band, &cover, &opts).map_err(from_cech_err)?;
    let mut out = with_warnings(jsonio::report_to_value(&report), cover.warnings());
    if config.decompose {
        let decomposition =
            assembly::decompose_band(&band, &bs_set_in_band(&band)).map_err(from_assembly_err)?;
        let mut piece_values = Vec::new();
        let mut piece_reports = Vec::new();
        for piece in &decomposition.pieces {
            let piece_cover = piece.default_cover().map_err(from_cover_err)?;
            let rep = cech::band_cohomology(&piece.band, &piece_cover, &opts)
                .map_err(from_cech_err)?;
            piece_values.push(json!({
                "band": jsonio::band_to_value(&piece.band),
                "leaf": piece.bs_leaf.as_ref().map(jsonio::leaf_to_value),
                "report": jsonio::report_to_value(&rep),
            }));
            piece_reports.push(rep);
        }
        let zero = cech::CohomologyReport::zero("overlap".into(), "t");
        let assembled =
            assembly::assemble_chain(&piece_reports, &zero).map_err(from_assembly_err)?;
        if !assembled.same_cohomology(&report) {
            return Err(Failure::new(
                exit_code::INCONSISTENT,
                "assembled decomposition disagrees with the direct computation",
            ));
        }
        let overlaps: Vec<Value> = decomposition
            .overlaps
            .iter()
            .map(jsonio::band_to_value)
            .collect();
        out.as_object_mut().expect("report object").insert(
            "decomposition".into(),
            json!({ "pieces": piece_values, "overlaps": overlaps }),
        );
    }
    Ok(out)
}

fn with_warnings(mut value: Value, warnings: &[String]) -> Value {
    if !warnings.is_empty() {
        value
            .as_object_mut()
            .expect("report object")
            .insert("warnings".into(), json!(warnings));
    }
    value
}

fn cmd_leray_band(config: &RunConfig, input: &Value) -> Result<Value, Failure> {
    let band = jsonio::band_from_value(input).map_err(from_json_err)?;
    let report = spectral::band_cohomology_leray(&band).map_err(from_spectral_err)?;
    let mut out = jsonio::report_to_value(&report);
    if config.verify {
        let interval = band.single_interval().map_err(|e| {
            Failure::new(
                exit_code::DOMAIN,
                format!("--verify needs an m=1, k=0 band: {e}"),
            )
        })?;
        let cover = cech::single_layer_cover(3, interval).map_err(from_cover_err)?;
        let direct =
            cech::band_cohomology(&band, &cover, &sample_opts(config)).map_err(from_cech_err)?;
        if !direct.same_cohomology(&report) {
            return Err(Failure::new(
                exit_code::INCONSISTENT,
                "fibration-table result disagrees with the direct computation",
            ));
        }
        out.as_object_mut()
            .expect("report object")
            .insert("verified".into(), json!(true));
    }
    Ok(out)
}

fn cmd_quantize_toric(config: &RunConfig, input: &Value) -> Result<Value, Failure> {
    let poly = jsonio::polytope_from_value(input).map_err(from_json_err)?;
    let report = toric::enumerate_lattice_points_jobs(&poly, config.jobs).map_err(from_toric_err)?;
    let quant = toric::Quantization {
        real_dim: report.real_dim(),
        kahler_dim: report.kahler_dim(),
        discrepancy: report.boundary_points.len(),
    };
    let mut out = jsonio::quantization_to_value(&quant);
    let diagnostics = toric::delzant_validate(&poly);
    if !diagnostics.is_empty() {
        out.as_object_mut()
            .expect("object")
            .insert("diagnostics".into(), json!(diagnostics));
    }
    if config.points {
        let pts = jsonio::lattice_report_to_value(&report);
        out.as_object_mut()
            .expect("object")
            .insert("points".into(), pts);
    }
    Ok(out)
}

fn cmd_spectral(input: &Value, turn: bool) -> Result<Value, Failure> {
    let page = jsonio::page_from_value(input).map_err(from_json_err)?;
    if turn {
        let next = page.turn_page().map_err(from_spectral_err)?;
        Ok(jsonio::page_to_value(&next))
    } else {
        Ok(json!({ "stable": page.is_stable() }))
    }
}

fn render_table(value: &Value) -> String {
    let mut lines = Vec::new();
    render_into(value, "", &mut lines);
    lines.join("\n")
}

fn render_into(value: &Value, prefix: &str, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_into(v, &key, lines);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                lines.push(format!("{prefix}: (none)"));
            }
            for (i, v) in items.iter().enumerate() {
                render_into(v, &format!("{prefix}[{i}]"), lines);
            }
        }
        other => lines.push(format!("{prefix}: {other}")),
    }
}

/// Full entry point: parses argv and the environment, runs, prints.
pub fn main_from_env() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let env_jobs = std::env::var("BSQ_JOBS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok());
    let config = match parse_args(&args, env_jobs) {
        Ok(c) => c,
        Err(f) => {
            eprintln!("{}", f.message);
            return f.code;
        }
    };
    match run(&config) {
        Ok(output) => {
            if let Some(path) = &config.out_path {
                if let Err(e) = std::fs::write(path, format!("{output}\n")) {
                    eprintln!("writing {path:?}: {e}");
                    return exit_code::PARSE;
                }
            } else {
                println!("{output}");
            }
            exit_code::OK
        }
        Err(f) => {
            eprintln!("{}", f.message);
            f.code
        }
    }
}
