//! Command-line surface over the cantor-atlas library: encoding/decoding,
//! digit-map analysis, Salem-family evaluation, the run-decoding fractal
//! map, dimension solvers, and exact graph/cover data emission.
//!
//! Exact rationals are serialized as `"p/q"` strings with 12-significant-
//! digit decimal companions; output is byte-deterministic for identical
//! inputs. Exit codes: 0 success, 1 internal error, 2 input error,
//! 3 resource bound exceeded.

use std::process::ExitCode;

use cantor_atlas::basis::BaseSpec;
use cantor_atlas::cells::GraphCell;
use cantor_atlas::codec::{
    self, decode, format_digit_string, parse_digit_string, Polarity, Representation,
};
use cantor_atlas::error::Error as AtlasError;
use cantor_atlas::fractalh::{
    box_dim_estimate, count_graph_squares, dim_d, dim_e, h_forward, h_graph_cells, h_inverse,
    monotonicity_class, parse_run_structure, raw_representation, x_value, FractalParams,
    ParseOutcome, RunDigits, RunTail,
};
use cantor_atlas::mapf::{
    classify_discontinuities, eval_f, f_graph_cells, integral_closed_form, integral_riemann,
    jump_at, jump_closed_form, DiscontinuityClass,
};
use cantor_atlas::numerics::{decimal_string, parse_rational, Enclosure, Rational};
use cantor_atlas::salem::{
    eval_salem, point_value, salem_graph_cells, theorem_conditions, ProductClass, SalemMatrix,
    SwapMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

const DEFAULT_MAX_CELLS: u64 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "cantor-atlas",
    version,
    about = "Exact Cantor-series numeral systems, singular-function families, and digit-restriction fractals"
)]
struct Cli {
    /// Output format for stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    /// positive Cantor series
    #[value(alias = "+")]
    Positive,
    /// alternating Cantor series (negative bases)
    #[value(alias = "-")]
    Alternating,
    /// nega-q expansion with the constant cap base
    Nega,
}

impl PolarityArg {
    fn into_polarity(self) -> Polarity {
        match self {
            PolarityArg::Positive => Polarity::Positive,
            PolarityArg::Alternating => Polarity::Alternating,
            PolarityArg::Nega => Polarity::NegaConstant,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    EvenSwap,
    OddSwap,
}

impl ModeArg {
    fn into_mode(self) -> SwapMode {
        match self {
            ModeArg::Plain => SwapMode::Plain,
            ModeArg::EvenSwap => SwapMode::EvenSwap,
            ModeArg::OddSwap => SwapMode::OddSwap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    F,
    Salem,
    H,
}

#[derive(Args)]
struct SpecArgs {
    /// Base sequence as inline JSON {"preperiod":[...],"period":[...],"cap":n}
    #[arg(long, conflicts_with = "spec_file")]
    spec: Option<String>,
    /// Path to a JSON file with the same schema
    #[arg(long)]
    spec_file: Option<String>,
}

#[derive(Args)]
struct MatrixArgs {
    /// Column matrix as inline JSON {"columns":[["1/4","3/4"],...],"period_start":0}
    #[arg(long, conflicts_with = "matrix_file")]
    matrix: Option<String>,
    /// Path to a JSON file with the same schema
    #[arg(long)]
    matrix_file: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a rational into digits of the chosen system
    Encode {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        polarity: PolarityArg,
        /// The number to encode, e.g. "-1/5" or "0.4"
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 64)]
        max_digits: usize,
    },
    /// Decode a digit string ("0,2,0,2", "1,2|1,2" periodic, "1,2,.." truncated)
    Decode {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        polarity: PolarityArg,
        #[arg(long)]
        digits: String,
    },
    /// Evaluate the digit map f on an alternating representation
    EvalF {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        digits: String,
    },
    /// One-sided limits and jump of f at a dual point
    Jump {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        digits: String,
        /// Switch level of the dual pair
        #[arg(long)]
        level: usize,
    },
    /// Classify the discontinuity set of f (empty / finite / infinite)
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Integral of f: closed-form series and/or certified Darboux enclosure
    Integral {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        riemann: bool,
        /// Report both routes and whether they disagree
        #[arg(long)]
        both: bool,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Evaluate a Salem-type family on a digit string
    SalemEval {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        #[arg(long)]
        digits: String,
        /// Digit budget for truncated tails
        #[arg(long, default_value_t = 64)]
        trunc: usize,
    },
    /// Validate a column matrix and report the theorem-condition predicates
    SalemCheck {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Apply the run-decoding map h to a point (raw digits or block values)
    HMap {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: u32,
        /// Raw nega-q digits to parse into run blocks
        #[arg(long, conflicts_with = "alphas")]
        raw: Option<String>,
        /// Block values directly, e.g. "2,3|2,3"
        #[arg(long)]
        alphas: Option<String>,
    },
    /// Pull a digit string over the block alphabet back through h
    HInverse {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        digits: String,
    },
    /// Hausdorff dimension of the domain (Moran root) or image (log ratio)
    Dim {
        #[arg(long, conflicts_with = "log_ratio")]
        moran: bool,
        #[arg(long)]
        log_ratio: bool,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: u32,
        /// Enclosure width target (default 1e-9 Moran, 1e-6 log ratio)
        #[arg(long)]
        tol: Option<String>,
    },
    /// Count the rank-m cover rectangles of the graph of h (equals |Θ|^m)
    CountSquares {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        m: u32,
    },
    /// Grid box-counting slope of the graph of h over scales q^-m
    Boxdim {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        m_lo: u32,
        #[arg(long)]
        m_hi: u32,
    },
    /// Emit exact per-cylinder graph rows (x_lo, x_hi, y_lo, y_hi)
    GraphData {
        #[arg(long, value_enum)]
        target: TargetArg,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        u: Option<u32>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &AtlasError) -> u8 {
    match e {
        AtlasError::ResourceBound(_) => 3,
        AtlasError::IterationLimit(_) | AtlasError::Internal(_) => 1,
        _ => 2,
    }
}

fn max_cells() -> u64 {
    std::env::var("CANTOR_ATLAS_MAX_CELLS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

fn load_spec(args: &SpecArgs) -> Result<BaseSpec, AtlasError> {
    let text = match (&args.spec, &args.spec_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| AtlasError::Domain(format!("cannot read {path}: {e}")))?,
        (None, None) => return Err(AtlasError::Domain("missing --spec or --spec-file".into())),
    };
    let spec: BaseSpec = serde_json::from_str(&text)
        .map_err(|e| AtlasError::Domain(format!("bad base-spec JSON: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn load_matrix(args: &MatrixArgs) -> Result<SalemMatrix, AtlasError> {
    let text = match (&args.matrix, &args.matrix_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| AtlasError::Domain(format!("cannot read {path}: {e}")))?,
        (None, None) => {
            return Err(AtlasError::Domain("missing --matrix or --matrix-file".into()))
        }
    };
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| AtlasError::Domain(format!("bad matrix JSON: {e}")))?;
    let cols_v = v
        .get("columns")
        .and_then(Value::as_array)
        .ok_or_else(|| AtlasError::Domain("matrix JSON needs a \"columns\" array".into()))?;
    let mut columns = Vec::new();
    for col in cols_v {
        let entries = col
            .as_array()
            .ok_or_else(|| AtlasError::Domain("each column must be an array".into()))?;
        let mut parsed = Vec::new();
        for e in entries {
            let r = match e {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) if n.is_i64() => {
                    Rational::from_integer(n.as_i64().unwrap().into())
                }
                other => {
                    return Err(AtlasError::Domain(format!(
                        "matrix entries must be \"p/q\" strings or integers, got {other}"
                    )))
                }
            };
            parsed.push(r);
        }
        columns.push(parsed);
    }
    let period_start = v
        .get("period_start")
        .map(|p| {
            p.as_u64()
                .ok_or_else(|| AtlasError::Domain("period_start must be an integer".into()))
        })
        .transpose()?
        .unwrap_or(0) as usize;
    SalemMatrix::new(columns, period_start)
}

fn representation_from(
    spec: &BaseSpec,
    polarity: Polarity,
    digits: &str,
) -> Result<Representation, AtlasError> {
    let (digits, tail) = parse_digit_string(digits)?;
    Representation::new(spec.clone(), polarity, digits, tail)
}

fn put_rational(map: &mut Map<String, Value>, key: &str, r: &Rational) {
    map.insert(key.to_string(), Value::String(r.to_string()));
    map.insert(format!("{key}_approx"), Value::String(decimal_string(r, 12)));
}

fn put_enclosure(map: &mut Map<String, Value>, prefix: &str, enc: &Enclosure) {
    put_rational(map, &format!("{prefix}_lo"), enc.lo());
    put_rational(map, &format!("{prefix}_hi"), enc.hi());
}

fn run_tail_string(run: &RunDigits) -> String {
    match run.tail() {
        RunTail::Periodic(b) => {
            format_digit_string(run.alphas(), &codec::Tail::Periodic(b.clone()))
        }
        RunTail::Truncated => format_digit_string(run.alphas(), &codec::Tail::Truncated),
    }
}

fn cells_to_values(cells: &[GraphCell]) -> Vec<Value> {
    cells
        .iter()
        .map(|c| {
            let mut m = Map::new();
            put_rational(&mut m, "x_lo", &c.x_lo);
            put_rational(&mut m, "x_hi", &c.x_hi);
            put_rational(&mut m, "y_lo", &c.y_lo);
            put_rational(&mut m, "y_hi", &c.y_hi);
            Value::Object(m)
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), AtlasError> {
    let out = dispatch(&cli.cmd)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Csv => print!("{}", to_csv(&out)?),
    }
    Ok(())
}

fn dispatch(cmd: &Cmd) -> Result<Value, AtlasError> {
    match cmd {
        Cmd::Encode { spec, polarity, x, max_digits } => {
            let spec = load_spec(spec)?;
            let x = parse_rational(x)?;
            let rep = match polarity.into_polarity() {
                Polarity::Positive => codec::encode_positive(&x, &spec, *max_digits)?,
                Polarity::Alternating => codec::encode_alternating(&x, &spec, *max_digits)?,
                Polarity::NegaConstant => {
                    return Err(AtlasError::Domain(
                        "nega encoding: use polarity alternating with a constant sequence".into(),
                    ))
                }
            };
            let mut m = Map::new();
            m.insert(
                "digits".into(),
                Value::String(format_digit_string(rep.digits(), rep.tail())),
            );
            m.insert("exact".into(), Value::Bool(rep.value().is_exact()));
            put_enclosure(&mut m, "value", &rep.value());
            Ok(Value::Object(m))
        }
        Cmd::Decode { spec, polarity, digits } => {
            let spec = load_spec(spec)?;
            let rep = representation_from(&spec, polarity.into_polarity(), digits)?;
            let enc = decode(&rep);
            let mut m = Map::new();
            m.insert("digits".into(), Value::String(digits.trim().to_string()));
            m.insert("lo".into(), Value::String(enc.lo().to_string()));
            m.insert("hi".into(), Value::String(enc.hi().to_string()));
            m.insert("lo_approx".into(), Value::String(decimal_string(enc.lo(), 12)));
            m.insert("hi_approx".into(), Value::String(decimal_string(enc.hi(), 12)));
            m.insert("width".into(), Value::String(enc.width().to_string()));
            Ok(Value::Object(m))
        }
        Cmd::EvalF { spec, digits } => {
            let spec = load_spec(spec)?;
            let rep = representation_from(&spec, Polarity::Alternating, digits)?;
            let enc = eval_f(&rep)?;
            let mut m = Map::new();
            m.insert("digits".into(), Value::String(digits.trim().to_string()));
            put_enclosure(&mut m, "f", &enc);
            put_enclosure(&mut m, "x", &rep.value());
            Ok(Value::Object(m))
        }
        Cmd::Jump { spec, digits, level } => {
            let spec = load_spec(spec)?;
            let rep = representation_from(&spec, Polarity::Alternating, digits)?;
            let report = jump_at(&rep, *level)?;
            let closed = jump_closed_form(&spec, *level);
            let mut m = Map::new();
            m.insert("level".into(), json!(*level as u64));
            m.insert(
                "position_digits".into(),
                Value::String(format_digit_string(
                    report.position.digits(),
                    report.position.tail(),
                )),
            );
            put_enclosure(&mut m, "left", &report.left_limit);
            put_enclosure(&mut m, "right", &report.right_limit);
            put_enclosure(&mut m, "jump", &report.jump);
            put_rational(&mut m, "closed_form", &closed);
            Ok(Value::Object(m))
        }
        Cmd::Classify { spec } => {
            let spec = load_spec(spec)?;
            let class = match classify_discontinuities(&spec) {
                DiscontinuityClass::Empty => "empty",
                DiscontinuityClass::Finite => "finite",
                DiscontinuityClass::Infinite => "infinite",
            };
            let mut m = Map::new();
            m.insert("class".into(), Value::String(class.into()));
            m.insert("cap".into(), json!(spec.cap));
            Ok(Value::Object(m))
        }
        Cmd::Integral { spec, closed, riemann, both, depth } => {
            let spec = load_spec(spec)?;
            let want_closed = *closed || *both || !*riemann;
            let want_riemann = *riemann || *both;
            let mut m = Map::new();
            m.insert("depth".into(), json!(*depth as u64));
            let closed_enc = integral_closed_form(&spec);
            if want_closed {
                put_rational(&mut m, "closed_form", closed_enc.lo());
            }
            if want_riemann {
                let enc = integral_riemann(&spec, *depth, max_cells())?;
                put_enclosure(&mut m, "riemann", &enc);
                if *both {
                    let agree = enc.abs().contains(closed_enc.lo());
                    m.insert("discrepancy".into(), Value::Bool(!agree));
                }
            }
            Ok(Value::Object(m))
        }
        Cmd::SalemEval { matrix, spec, mode, digits, trunc } => {
            let spec = load_spec(spec)?;
            let p = load_matrix(matrix)?;
            let mode = mode.into_mode();
            let rep = representation_from(&spec, mode.polarity(), digits)?;
            let enc = eval_salem(&rep, &p, mode, *trunc)?;
            let xv = point_value(&rep, mode)?;
            let mut m = Map::new();
            m.insert("digits".into(), Value::String(digits.trim().to_string()));
            put_enclosure(&mut m, "value", &enc);
            put_enclosure(&mut m, "x", &xv);
            Ok(Value::Object(m))
        }
        Cmd::SalemCheck { matrix, spec } => {
            let spec = load_spec(spec)?;
            let p = load_matrix(matrix)?;
            let mut m = Map::new();
            match p.validate() {
                Ok(()) => {
                    m.insert("valid".into(), Value::Bool(true));
                    m.insert("violations".into(), Value::Array(vec![]));
                }
                Err(AtlasError::Validation(msgs)) => {
                    m.insert("valid".into(), Value::Bool(false));
                    m.insert(
                        "violations".into(),
                        Value::Array(msgs.into_iter().map(Value::String).collect()),
                    );
                    return Ok(Value::Object(m));
                }
                Err(e) => return Err(e),
            }
            let rep = theorem_conditions(&p, &spec)?;
            let class_str = |c: ProductClass| match c {
                ProductClass::ToZero => "to-zero",
                ProductClass::NonZeroConstant => "nonzero-constant",
                ProductClass::Divergent => "divergent",
                ProductClass::Oscillating => "oscillating",
            };
            m.insert("alternation_holds".into(), Value::Bool(rep.alternation_holds));
            m.insert(
                "alternation_violations".into(),
                Value::Array(
                    rep.alternation_violations
                        .iter()
                        .map(|(lvl, d)| json!({ "digit": d, "level": lvl }))
                        .collect(),
                ),
            );
            m.insert(
                "product_first".into(),
                Value::String(class_str(rep.product_first).into()),
            );
            m.insert(
                "product_last".into(),
                Value::String(class_str(rep.product_last).into()),
            );
            m.insert(
                "endpoint_slope_disjunction".into(),
                Value::Bool(rep.endpoint_slope_disjunction),
            );
            m.insert("satisfied".into(), Value::Bool(rep.satisfied));
            Ok(Value::Object(m))
        }
        Cmd::HMap { q, u, raw, alphas } => {
            let params = FractalParams::new(*q, *u)?;
            let run = match (raw, alphas) {
                (Some(raw_str), None) => {
                    let (digits, tail) = parse_digit_string(raw_str)?;
                    if !matches!(tail, codec::Tail::Zeros) {
                        return Err(AtlasError::Domain(
                            "raw input takes a plain digit list; use --alphas for periodic tails"
                                .into(),
                        ));
                    }
                    match parse_run_structure(&digits, params)? {
                        ParseOutcome::Member(r) => r,
                        ParseOutcome::NotMember { position } => {
                            let mut m = Map::new();
                            m.insert("member".into(), Value::Bool(false));
                            m.insert("position".into(), json!(position as u64));
                            return Ok(Value::Object(m));
                        }
                    }
                }
                (None, Some(alpha_str)) => {
                    let (alphas, tail) = parse_digit_string(alpha_str)?;
                    let tail = match tail {
                        codec::Tail::Periodic(b) => RunTail::Periodic(b),
                        codec::Tail::Truncated | codec::Tail::Zeros => RunTail::Truncated,
                    };
                    RunDigits::new(params, alphas, tail)?
                }
                _ => {
                    return Err(AtlasError::Domain(
                        "exactly one of --raw or --alphas is required".into(),
                    ))
                }
            };
            let y = h_forward(&run)?;
            let raw_rep = raw_representation(&run)?;
            let mut m = Map::new();
            m.insert("member".into(), Value::Bool(true));
            m.insert("alphas".into(), Value::String(run_tail_string(&run)));
            m.insert(
                "raw_digits".into(),
                Value::String(format_digit_string(raw_rep.digits(), raw_rep.tail())),
            );
            put_enclosure(&mut m, "x", &x_value(&run)?);
            put_enclosure(&mut m, "y", &y.value());
            Ok(Value::Object(m))
        }
        Cmd::HInverse { q, u, digits } => {
            let params = FractalParams::new(*q, *u)?;
            let spec = BaseSpec::constant(*q)?;
            let rep = representation_from(&spec, Polarity::NegaConstant, digits)?;
            let (run, xv) = h_inverse(&rep, params)?;
            let mut m = Map::new();
            m.insert("alphas".into(), Value::String(run_tail_string(&run)));
            put_enclosure(&mut m, "x", &xv);
            put_enclosure(&mut m, "y", &rep.value());
            Ok(Value::Object(m))
        }
        Cmd::Dim { moran, log_ratio, q, u, tol } => {
            let params = FractalParams::new(*q, *u)?;
            let use_moran = *moran || !*log_ratio;
            let tol = match tol {
                Some(t) => parse_rational(t)?,
                None if use_moran => parse_rational("1e-9").unwrap(),
                None => parse_rational("1e-6").unwrap(),
            };
            let result = if use_moran { dim_d(params, &tol)? } else { dim_e(params, &tol)? };
            let mut m = Map::new();
            m.insert("q".into(), json!(*q));
            m.insert("u".into(), json!(*u));
            m.insert(
                "method".into(),
                Value::String(if use_moran { "moran-root" } else { "log-ratio" }.into()),
            );
            m.insert("alpha_lo".into(), Value::String(result.value.lo().to_string()));
            m.insert("alpha_hi".into(), Value::String(result.value.hi().to_string()));
            m.insert(
                "alpha_lo_approx".into(),
                Value::String(decimal_string(result.value.lo(), 12)),
            );
            m.insert(
                "alpha_hi_approx".into(),
                Value::String(decimal_string(result.value.hi(), 12)),
            );
            put_rational(&mut m, "residual_bound", &result.residual);
            Ok(Value::Object(m))
        }
        Cmd::CountSquares { q, u, m: rank } => {
            let params = FractalParams::new(*q, *u)?;
            let count = count_graph_squares(params, *rank, max_cells())?;
            let mut m = Map::new();
            m.insert("q".into(), json!(*q));
            m.insert("u".into(), json!(*u));
            m.insert("m".into(), json!(*rank));
            m.insert("count".into(), json!(count));
            Ok(Value::Object(m))
        }
        Cmd::Boxdim { q, u, m_lo, m_hi } => {
            let params = FractalParams::new(*q, *u)?;
            let result = box_dim_estimate(params, *m_lo, *m_hi, max_cells())?;
            let mut m = Map::new();
            m.insert("q".into(), json!(*q));
            m.insert("u".into(), json!(*u));
            m.insert("m_lo".into(), json!(*m_lo));
            m.insert("m_hi".into(), json!(*m_hi));
            m.insert(
                "class".into(),
                Value::String(format!("{:?}", monotonicity_class(params)).to_lowercase()),
            );
            put_enclosure(&mut m, "slope", &result.value);
            Ok(Value::Object(m))
        }
        Cmd::GraphData { target, spec, matrix, mode, q, u, depth } => {
            let cells = match target {
                TargetArg::F => {
                    let spec = load_spec(spec)?;
                    f_graph_cells(&spec, *depth, max_cells())?
                }
                TargetArg::Salem => {
                    let spec = load_spec(spec)?;
                    let p = load_matrix(matrix)?;
                    salem_graph_cells(&p, mode.into_mode(), &spec, *depth, max_cells())?
                }
                TargetArg::H => {
                    let (q, u) = match (q, u) {
                        (Some(q), Some(u)) => (*q, *u),
                        _ => return Err(AtlasError::Domain("target h needs --q and --u".into())),
                    };
                    let params = FractalParams::new(q, u)?;
                    h_graph_cells(params, *depth as u32, max_cells())?
                }
            };
            Ok(Value::Array(cells_to_values(&cells)))
        }
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar_to_string(v: &Value) -> Result<String, AtlasError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Null => Ok(String::new()),
        other => Err(AtlasError::Domain(format!("cannot flatten nested value {other} to CSV"))),
    }
}

/// Flattens the JSON output to CSV: one row for an object, one row per
/// element for an array of objects. The header lists the keys in the same
/// (sorted) order as the JSON serialization.
fn to_csv(out: &Value) -> Result<String, AtlasError> {
    let rows: Vec<&Map<String, Value>> = match out {
        Value::Object(m) => vec![m],
        Value::Array(items) => items
            .iter()
            .map(|i| {
                i.as_object()
                    .ok_or_else(|| AtlasError::Domain("array rows must be objects".into()))
            })
            .collect::<Result<_, _>>()?,
        _ => return Err(AtlasError::Domain("cannot render scalar output as CSV".into())),
    };
    if rows.is_empty() {
        return Ok(String::new());
    }
    let keys: Vec<&String> = rows[0].keys().collect();
    let mut s = String::new();
    s.push_str(&keys.iter().map(|k| csv_quote(k)).collect::<Vec<_>>().join(","));
    s.push('\n');
    for row in rows {
        let mut fields = Vec::with_capacity(keys.len());
        for k in &keys {
            let v = row.get(*k).unwrap_or(&Value::Null);
            // nested arrays (e.g. violation lists) travel as JSON text
            let text = match v {
                Value::Array(_) | Value::Object(_) => v.to_string(),
                _ => scalar_to_string(v)?,
            };
            fields.push(csv_quote(&text));
        }
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    Ok(s)
}
