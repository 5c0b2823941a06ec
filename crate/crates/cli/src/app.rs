//! Argument parsing and the pd / gpd / landscape / dist commands.

use crate::formats::{self, ModuleInput};
use crate::{verify, CliError};
use gpd_core::transport::{signed_wasserstein, wasserstein, Cost, CostParams, Mate, Norm};
use gpd_core::util::{coord_to_f64, format_coord, par_map};
use gpd_core::{
    diagram_from_rank, graded_diagram, graded_rank, landscape_from_graded, rank_from_barcode,
    rank_from_mapchain, Coord, GradedDiagram, Grid, Landscape, PlaneDiagram, RankTable,
    SignedDiagram,
};
use std::io::Read;

pub const USAGE: &str = "usage: gpd <command> [options]

commands:
  pd <input>               persistence diagram of a barcode or map chain
  gpd <input>              graded persistence diagrams (all levels or -k)
  landscape <input>        persistence landscape critical points
  dist <a> <b>             (p,q)-Wasserstein distance between two inputs
  verify <suite>           consistency | stability | triangle | geodesic

common options:
  -o, --output FILE        write to FILE instead of stdout
  --format text|json       output format (default text)
  --grid FILE|identity     grid placement for real coordinates
  -v                       verbose notes on stderr

pd / gpd options:
  --inf-deaths             render deaths at index m+1 as `inf`
  -k N                     (gpd) emit only level N
  --sum-check              (gpd) verify levels sum to the diagram; exit 3 on mismatch

landscape options:
  --plot-data FILE         also write sampled `k t h` polylines

dist options:
  --p P  --q Q             cost exponents in [1, inf] (default 1, 1)
  --grid-b FILE|identity   grid for the second input (default: --grid)
  --graded                 per-level signed distances plus their sum
  --witness                print an optimal coupling

verify options:
  --seed N --count N       random sweep controls
  --m N --max-bars N       instance size (defaults 10, 8)
  --sharp-K K              (stability) also run the sharp K-family
  --eps E --p P --q Q      (triangle) counterexample parameters
  --level K                (triangle) graded level (default 2)
  --samples N              (geodesic) sample pairs per instance (default 10)

Inputs accept `-` for stdin. Exit codes: 0 ok, 1 usage, 2 parse error,
3 verification failure.";

/// Parsed command line: positionals plus `--flag [value]` options.
pub struct Opts {
    pub positional: Vec<String>,
    flags: std::collections::BTreeMap<String, String>,
    pub verbose: bool,
}

impl Opts {
    pub fn parse(args: &[String], boolean_flags: &[&str]) -> Result<Opts, CliError> {
        let mut positional = Vec::new();
        let mut flags = std::collections::BTreeMap::new();
        let mut verbose = false;
        let mut it = args.iter().peekable();
        while let Some(arg) = it.next() {
            if arg == "-v" || arg == "--verbose" {
                verbose = true;
                continue;
            }
            let key = match arg.strip_prefix("--") {
                Some(k) => k.to_string(),
                None => {
                    if arg == "-o" {
                        "output".to_string()
                    } else if arg == "-k" {
                        "k".to_string()
                    } else if arg.starts_with('-')
                        && arg.len() > 1
                        && !arg[1..].starts_with(|c: char| c.is_ascii_digit())
                    {
                        return Err(CliError::Usage(format!("unknown option `{arg}`")));
                    } else {
                        positional.push(arg.clone());
                        continue;
                    }
                }
            };
            if boolean_flags.contains(&key.as_str()) {
                flags.insert(key, "1".to_string());
            } else {
                let value = it
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("option `--{key}` needs a value")))?;
                flags.insert(key, value.clone());
            }
        }
        Ok(Opts {
            positional,
            flags,
            verbose,
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.flags.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.flags.contains_key(key)
    }

    pub fn parse_u64(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Usage(format!("`--{key}` expects an integer, got `{v}`"))),
        }
    }

    pub fn parse_usize(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.parse_u64(key, default as u64)? as usize)
    }
}

pub fn run(args: &[String]) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    let rest = &args[1..];
    match command.as_str() {
        "pd" => cmd_pd(rest),
        "gpd" => cmd_gpd(rest),
        "landscape" => cmd_landscape(rest),
        "dist" => cmd_dist(rest),
        "verify" => verify::run(rest),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

pub fn read_input(path: &str) -> Result<(String, String), CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(("<stdin>".to_string(), buf))
    } else {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
        Ok((path.to_string(), text))
    }
}

pub fn write_output(opts: &Opts, content: &str) -> Result<(), CliError> {
    match opts.get("output") {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, content).map_err(|e| CliError::Parse(format!("{path}: {e}")))
        }
    }
}

fn load_module(opts: &Opts) -> Result<(ModuleInput, RankTable), CliError> {
    let input = opts
        .positional
        .first()
        .cloned()
        .unwrap_or_else(|| "-".to_string());
    let (name, text) = read_input(&input)?;
    let module = formats::parse_module(&name, &text)?;
    let rt = match &module {
        ModuleInput::Barcode(bc) => rank_from_barcode(bc),
        ModuleInput::Chain(mc) => rank_from_mapchain(mc),
    };
    Ok((module, rt))
}

fn load_grid(opts: &Opts, key: &str, m: usize) -> Result<Grid, CliError> {
    match opts.get(key) {
        None => Ok(Grid::identity(m)),
        Some("identity") => Ok(Grid::identity(m)),
        Some(path) => {
            let (name, text) = read_input(path)?;
            formats::parse_grid(&name, &text, m)
        }
    }
}

fn json_format(opts: &Opts) -> Result<bool, CliError> {
    match opts.get("format") {
        None | Some("text") => Ok(false),
        Some("json") => Ok(true),
        Some(other) => Err(CliError::Usage(format!("unknown format `{other}`"))),
    }
}

fn cmd_pd(args: &[String]) -> Result<(), CliError> {
    let opts = Opts::parse(args, &["inf-deaths"])?;
    let (_, rt) = load_module(&opts)?;
    let grid = load_grid(&opts, "grid", rt.m())?;
    let pd = diagram_from_rank(&rt)?;
    let inf = opts.has("inf-deaths");
    if json_format(&opts)? {
        let body = serde_json::json!({
            "command": "pd",
            "m": rt.m(),
            "points": formats::diagram_json(&pd, &grid, inf),
        });
        write_output(
            &opts,
            &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        )
    } else {
        let mut out = String::new();
        formats::render_diagram(&pd, &grid, inf, &mut out);
        write_output(&opts, &out)
    }
}

fn render_graded_text(
    gd: &GradedDiagram,
    grid: &Grid,
    inf: bool,
    only: Option<usize>,
) -> Result<String, CliError> {
    let mut out = String::new();
    match only {
        Some(k) => {
            let level = gd
                .level(k)
                .cloned()
                .unwrap_or_else(|| SignedDiagram::empty(gd.m()));
            formats::render_diagram(&level, grid, inf, &mut out);
        }
        None => {
            for (idx, level) in gd.levels().iter().enumerate() {
                if idx > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("# k {}\n", idx + 1));
                formats::render_diagram(level, grid, inf, &mut out);
            }
        }
    }
    Ok(out)
}

fn cmd_gpd(args: &[String]) -> Result<(), CliError> {
    let opts = Opts::parse(args, &["inf-deaths", "sum-check"])?;
    let (_, rt) = load_module(&opts)?;
    let grid = load_grid(&opts, "grid", rt.m())?;
    let gd = graded_diagram(&graded_rank(&rt))?;
    let inf = opts.has("inf-deaths");
    let only =
        match opts.get("k") {
            None => None,
            Some(v) => Some(v.parse::<usize>().map_err(|_| {
                CliError::Usage(format!("`-k` expects a positive level, got `{v}`"))
            })?),
        };
    if matches!(only, Some(0)) {
        return Err(CliError::Usage("`-k` levels start at 1".into()));
    }

    if opts.has("sum-check") {
        let pd = diagram_from_rank(&rt)?;
        let sum = gd.sum()?;
        let mut pd_text = String::new();
        formats::render_diagram(&pd, &grid, inf, &mut pd_text);
        let mut sum_text = String::new();
        formats::render_diagram(&sum, &grid, inf, &mut sum_text);
        if pd_text != sum_text {
            return Err(CliError::Verification(
                "sum of graded levels differs from the persistence diagram".into(),
            ));
        }
        if opts.verbose {
            eprintln!("gpd: sum-check ok ({} levels)", gd.max_rank());
        }
    }

    if json_format(&opts)? {
        let levels: Vec<serde_json::Value> = gd
            .levels()
            .iter()
            .enumerate()
            .filter(|(idx, _)| only.is_none_or(|k| k == idx + 1))
            .map(|(idx, level)| {
                serde_json::json!({
                    "k": idx + 1,
                    "points": formats::diagram_json(level, &grid, inf),
                })
            })
            .collect();
        let body = serde_json::json!({
            "command": "gpd",
            "m": gd.m(),
            "max_rank": gd.max_rank(),
            "levels": levels,
        });
        write_output(
            &opts,
            &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        )
    } else {
        let out = render_graded_text(&gd, &grid, inf, only)?;
        write_output(&opts, &out)
    }
}

fn landscape_text(ls: &Landscape) -> String {
    let mut out = String::new();
    for (idx, level) in ls.levels().iter().enumerate() {
        for &(t, h) in level.points() {
            out.push_str(&format!(
                "{} {} {}\n",
                idx + 1,
                format_coord(t),
                format_coord(h)
            ));
        }
    }
    out
}

fn plot_data_text(ls: &Landscape) -> String {
    // Uniformly sampled polylines, 256 intervals per level.
    let mut out = String::new();
    for (idx, level) in ls.levels().iter().enumerate() {
        let pts = level.points();
        if pts.is_empty() {
            continue;
        }
        let lo = pts[0].0;
        let hi = pts[pts.len() - 1].0;
        for step in 0..=256i64 {
            let t = lo + (hi - lo) * Coord::new(step, 256);
            let h = level.eval(t);
            out.push_str(&format!(
                "{} {:.6} {:.6}\n",
                idx + 1,
                coord_to_f64(t),
                coord_to_f64(h)
            ));
        }
        out.push('\n');
    }
    out
}

fn cmd_landscape(args: &[String]) -> Result<(), CliError> {
    let opts = Opts::parse(args, &[])?;
    let (_, rt) = load_module(&opts)?;
    let grid = load_grid(&opts, "grid", rt.m())?;
    let gd = graded_diagram(&graded_rank(&rt))?;
    let ls = landscape_from_graded(&gd, &grid)?;

    if let Some(path) = opts.get("plot-data") {
        std::fs::write(path, plot_data_text(&ls))
            .map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    }

    if json_format(&opts)? {
        let levels: Vec<serde_json::Value> = ls
            .levels()
            .iter()
            .enumerate()
            .map(|(idx, level)| {
                let pts: Vec<serde_json::Value> = level
                    .points()
                    .iter()
                    .map(|&(t, h)| serde_json::json!([format_coord(t), format_coord(h)]))
                    .collect();
                serde_json::json!({ "k": idx + 1, "critical_points": pts })
            })
            .collect();
        let body = serde_json::json!({
            "command": "landscape",
            "m": gd.m(),
            "max_rank": ls.max_rank(),
            "levels": levels,
        });
        write_output(
            &opts,
            &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        )
    } else {
        write_output(&opts, &landscape_text(&ls))
    }
}

pub fn parse_cost_params(opts: &Opts) -> Result<CostParams, CliError> {
    let p = match opts.get("p") {
        None => Norm::ONE,
        Some(v) => Norm::parse(v).ok_or_else(|| CliError::Usage(format!("bad `--p {v}`")))?,
    };
    let q = match opts.get("q") {
        None => Norm::ONE,
        Some(v) => Norm::parse(v).ok_or_else(|| CliError::Usage(format!("bad `--q {v}`")))?,
    };
    CostParams::new(p, q).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cost_json(c: Cost) -> serde_json::Value {
    serde_json::json!({
        "value": c.as_f64(),
        "exact": c.exact().map(format_coord),
    })
}

fn mate_text(m: &Mate) -> String {
    match m {
        Mate::Point(x, y) => format!("({}, {})", format_coord(*x), format_coord(*y)),
        Mate::Diagonal(at) => format!("diagonal@{}", format_coord(*at)),
    }
}

fn witness_lines(c: &gpd_core::Coupling, out: &mut String) {
    for (a, b) in &c.pairs {
        out.push_str(&format!("  match {} -> {}\n", mate_text(a), mate_text(b)));
    }
}

fn cmd_dist(args: &[String]) -> Result<(), CliError> {
    let opts = Opts::parse(args, &["graded", "witness"])?;
    if opts.positional.len() != 2 {
        return Err(CliError::Usage("dist needs two inputs".into()));
    }
    let cp = parse_cost_params(&opts)?;

    let load =
        |path: &str, grid_key: &str| -> Result<(PlaneDiagram, GradedDiagram, Grid), CliError> {
            let (name, text) = read_input(path)?;
            let module = formats::parse_module(&name, &text)?;
            let rt = match &module {
                ModuleInput::Barcode(bc) => rank_from_barcode(bc),
                ModuleInput::Chain(mc) => rank_from_mapchain(mc),
            };
            let grid = load_grid(&opts, grid_key, rt.m())?;
            let pd = diagram_from_rank(&rt)?;
            let gd = graded_diagram(&graded_rank(&rt))?;
            Ok((pd.embed(&grid)?, gd, grid))
        };
    let (pd_a, gd_a, grid_a) = load(&opts.positional[0].clone(), "grid")?;
    let grid_b_key = if opts.has("grid-b") { "grid-b" } else { "grid" };
    let (pd_b, gd_b, grid_b) = load(&opts.positional[1].clone(), grid_b_key)?;

    let (plain, plain_coupling) = wasserstein(&pd_a, &pd_b, cp)?;

    let graded = opts.has("graded");
    let witness = opts.has("witness");
    let non_metric = graded && !cp.p.is_one();

    let mut level_results: Vec<(Cost, gpd_core::Coupling)> = Vec::new();
    if graded {
        let mut levels_a = gd_a.embed(&grid_a)?;
        let mut levels_b = gd_b.embed(&grid_b)?;
        let k_max = levels_a.len().max(levels_b.len());
        levels_a.resize(k_max, PlaneDiagram::empty());
        levels_b.resize(k_max, PlaneDiagram::empty());
        let pairs: Vec<(PlaneDiagram, PlaneDiagram)> = levels_a.into_iter().zip(levels_b).collect();
        level_results = par_map(pairs, |(a, b)| signed_wasserstein(&a, &b, cp))
            .into_iter()
            .collect::<gpd_core::Result<_>>()?;
    }

    if json_format(&opts)? {
        let mut body = serde_json::json!({
            "command": "dist",
            "p": cp.p.to_string(),
            "q": cp.q.to_string(),
            "plain": cost_json(plain),
        });
        if graded {
            let obj = body.as_object_mut().unwrap();
            let sum = level_results
                .iter()
                .fold(Cost::zero(), |acc, (c, _)| acc + *c);
            obj.insert(
                "levels".into(),
                serde_json::Value::Array(
                    level_results
                        .iter()
                        .enumerate()
                        .map(|(idx, (c, _))| {
                            serde_json::json!({ "k": idx + 1, "distance": cost_json(*c) })
                        })
                        .collect(),
                ),
            );
            obj.insert("sum".into(), cost_json(sum));
            obj.insert("non_metric".into(), serde_json::Value::Bool(non_metric));
        }
        write_output(
            &opts,
            &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
        )
    } else {
        let mut out = String::new();
        if non_metric {
            out.push_str(
                "warning: p > 1 on graded diagrams is not a metric (triangle inequality can fail)\n",
            );
        }
        out.push_str(&format!("plain W[p={},q={}] = {}\n", cp.p, cp.q, plain));
        if witness && !graded {
            witness_lines(&plain_coupling, &mut out);
        }
        if graded {
            let mut sum = Cost::zero();
            for (idx, (c, coupling)) in level_results.iter().enumerate() {
                out.push_str(&format!("level {} W = {}\n", idx + 1, c));
                if witness {
                    witness_lines(coupling, &mut out);
                }
                sum = sum + *c;
            }
            out.push_str(&format!("sum = {sum}\n"));
        }
        write_output(&opts, &out)
    }
}
