//! Verification suites: mechanical checks of the consistency theorem, the
//! stability bounds, the triangle-inequality failure at p > 1, and the
//! coordinate-geodesic property, on seeded random sweeps and the sharp
//! fixed families. Any violated bound exits with code 3 and names the
//! offending instance and seed.

use crate::app::{cost_json, parse_cost_params, write_output, Opts};
use crate::CliError;
use gpd_core::oracles::{random_barcode, RandomModuleSpec, SplitMix64};
use gpd_core::poset::{mobius_convolve, zeta_convolve, IntervalFunction};
use gpd_core::transport::{triangle_counterexample, verify_stability};
use gpd_core::util::{coord_to_f64, format_coord, parse_coord};
use gpd_core::{
    coordinate_geodesic_path, diagram_from_rank, graded_diagram, graded_rank, rank_from_barcode,
    signed_wasserstein, staircase_decompose, Barcode, Coord, CostParams, Grid, PlaneDiagram,
};

struct Check {
    name: String,
    ok: bool,
    detail: serde_json::Value,
}

struct Report {
    suite: &'static str,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Report {
    fn new(suite: &'static str) -> Self {
        Report {
            suite,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, ok: bool, detail: serde_json::Value) {
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail,
        });
    }

    fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn emit(&self, opts: &Opts, json: bool) -> Result<(), CliError> {
        if json {
            let body = serde_json::json!({
                "command": "verify",
                "suite": self.suite,
                "all_ok": self.all_ok(),
                "checks": self.checks.iter().map(|c| serde_json::json!({
                    "name": c.name,
                    "ok": c.ok,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
                "notes": self.notes,
            });
            write_output(
                opts,
                &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
            )?;
        } else {
            let mut out = String::new();
            out.push_str(&format!("verify {}\n", self.suite));
            for c in &self.checks {
                let flag = if c.ok { "ok  " } else { "FAIL" };
                out.push_str(&format!("{flag} {} {}\n", c.name, compact(&c.detail)));
            }
            for note in &self.notes {
                out.push_str(&format!("note: {note}\n"));
            }
            out.push_str(if self.all_ok() {
                "result: PASS\n"
            } else {
                "result: FAIL\n"
            });
            write_output(opts, &out)?;
        }
        if self.all_ok() {
            Ok(())
        } else {
            let first = self.checks.iter().find(|c| !c.ok).unwrap();
            Err(CliError::Verification(format!(
                "suite {} failed at `{}`: {}",
                self.suite,
                first.name,
                compact(&first.detail)
            )))
        }
    }
}

fn compact(v: &serde_json::Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

pub fn run(args: &[String]) -> Result<(), CliError> {
    let opts = Opts::parse(args, &[])?;
    let Some(suite) = opts.positional.first() else {
        return Err(CliError::Usage(
            "verify needs a suite: consistency | stability | triangle | geodesic".into(),
        ));
    };
    let json = matches!(opts.get("format"), Some("json"));
    match suite.as_str() {
        "consistency" => consistency(&opts, json),
        "stability" => stability(&opts, json),
        "triangle" => triangle(&opts, json),
        "geodesic" => geodesic(&opts, json),
        other => Err(CliError::Usage(format!("unknown verify suite `{other}`"))),
    }
}

fn sweep_specs(opts: &Opts) -> Result<(u64, Vec<RandomModuleSpec>), CliError> {
    let seed = opts.parse_u64("seed", 7)?;
    let count = opts.parse_u64("count", 100)?;
    let m = opts.parse_usize("m", 10)?;
    let max_bars = opts.parse_usize("max-bars", 8)?;
    let specs = (0..count)
        .map(|i| RandomModuleSpec {
            m: 2 + ((seed + i) as usize % (m.max(3) - 1)),
            max_bars,
            max_multiplicity: 3,
            seed: seed.wrapping_add(i.wrapping_mul(0x9E37_79B9)),
        })
        .collect();
    Ok((seed, specs))
}

fn consistency(opts: &Opts, json: bool) -> Result<(), CliError> {
    let (seed, specs) = sweep_specs(opts)?;
    let mut report = Report::new("consistency");
    let total = specs.len();

    let mut sums_ok = true;
    let mut round_trips_ok = true;
    let mut unit_values_ok = true;
    let mut structure_ok = true;
    let mut first_failure: Option<String> = None;
    let record =
        |flag: &mut bool, spec: &RandomModuleSpec, what: &str, first: &mut Option<String>| {
            *flag = false;
            first.get_or_insert_with(|| format!("{what} (seed {})", spec.seed));
        };

    for spec in &specs {
        let bc = random_barcode(spec);
        let rt = rank_from_barcode(&bc);
        let pd = diagram_from_rank(&rt).map_err(|e| CliError::Verification(e.to_string()))?;
        let gr = graded_rank(&rt);
        let gd = graded_diagram(&gr).map_err(|e| CliError::Verification(e.to_string()))?;

        let mut rank_sum = IntervalFunction::zeros(rt.m());
        for level in gr.levels() {
            rank_sum = rank_sum.add(level).unwrap();
        }
        if &rank_sum != rt.as_function() || gd.sum().unwrap() != pd {
            record(&mut sums_ok, spec, "level sums", &mut first_failure);
        }
        if mobius_convolve(rt.as_function()) != pd.to_function()
            || &zeta_convolve(&pd.to_function()) != rt.as_function()
            || gr.levels().iter().zip(gd.levels()).any(|(rk, dk)| {
                mobius_convolve(rk) != dk.to_function() || &zeta_convolve(&dk.to_function()) != rk
            })
        {
            record(&mut round_trips_ok, spec, "round trips", &mut first_failure);
        }
        for level in gd.levels() {
            if !level.values_in_unit_range() {
                record(&mut unit_values_ok, spec, "unit values", &mut first_failure);
            }
            match staircase_decompose(level) {
                Err(_) => record(&mut structure_ok, spec, "staircase", &mut first_failure),
                Ok(sc) => {
                    let plus = level.points().filter(|&(_, v)| v == 1).count();
                    let minus = level.points().filter(|&(_, v)| v == -1).count();
                    if minus != plus - sc.component_count() {
                        record(
                            &mut structure_ok,
                            spec,
                            "component counts",
                            &mut first_failure,
                        );
                    }
                }
            }
        }
    }

    report.push(
        "rank_and_diagram_level_sums",
        sums_ok,
        serde_json::json!({ "instances": total, "seed": seed }),
    );
    report.push(
        "zeta_mobius_round_trips",
        round_trips_ok,
        serde_json::json!({ "instances": total }),
    );
    report.push(
        "graded_values_in_unit_range",
        unit_values_ok,
        serde_json::json!({ "instances": total }),
    );
    report.push(
        "antichain_meets_and_counts",
        structure_ok,
        serde_json::json!({ "instances": total }),
    );
    if let Some(f) = first_failure {
        report.notes.push(format!("first failure: {f}"));
    }
    report.emit(opts, json)
}

fn plane_of(bc: &Barcode) -> Result<PlaneDiagram, CliError> {
    Ok(diagram_from_rank(&rank_from_barcode(bc))?.embed(&Grid::identity(bc.m()))?)
}

fn stability(opts: &Opts, json: bool) -> Result<(), CliError> {
    let (seed, specs) = sweep_specs(opts)?;
    let mut report = Report::new("stability");

    let mut bounds_ok = true;
    let mut first_failure: Option<String> = None;
    let mut max_level_ratio = 0.0f64;
    let mut max_sum_ratio = 0.0f64;
    for (i, spec) in specs.iter().enumerate() {
        let other = RandomModuleSpec {
            seed: spec.seed ^ 0x5DEE_CE66,
            ..*spec
        };
        let d = plane_of(&random_barcode(spec))?;
        let e = plane_of(&random_barcode(&other))?;
        let r = verify_stability(&d, &e).map_err(|e| CliError::Verification(e.to_string()))?;
        if !r.all_ok() {
            bounds_ok = false;
            first_failure.get_or_insert_with(|| {
                format!("instance {i} (seeds {}, {}): {r:?}", spec.seed, other.seed)
            });
        }
        for ratio in r.ratios.iter().flatten() {
            max_level_ratio = max_level_ratio.max(*ratio);
        }
        if let (Some(sum), Some(plain)) = (r.sum.exact(), r.plain.exact()) {
            if plain > Coord::from_integer(0) {
                max_sum_ratio =
                    max_sum_ratio.max(coord_to_f64(sum / plain) / (2.0 * r.k_max as f64 - 1.0));
            }
        }
    }
    report.push(
        "random_sweep_bounds",
        bounds_ok,
        serde_json::json!({
            "instances": specs.len(),
            "seed": seed,
            "max_level_ratio": max_level_ratio,
            "max_sum_utilization": max_sum_ratio,
        }),
    );
    if let Some(f) = first_failure {
        report.notes.push(format!("first failure: {f}"));
    }

    if let Some(k_str) = opts.get("sharp-K") {
        let k: i64 = k_str
            .parse()
            .map_err(|_| CliError::Usage(format!("bad `--sharp-K {k_str}`")))?;
        if k < 2 {
            return Err(CliError::Usage("--sharp-K needs K >= 2".into()));
        }
        let mut d = PlaneDiagram::empty();
        let mut e = PlaneDiagram::empty();
        let c = Coord::from_integer;
        for i in 1..k {
            d.add_value(c(i), c(2 * k + i), 1);
            e.add_value(c(i), c(2 * k + i), 1);
        }
        d.add_value(c(k), c(3 * k), 1);
        e.add_value(c(k + 1), c(3 * k), 1);
        let r = verify_stability(&d, &e).map_err(|e| CliError::Verification(e.to_string()))?;
        let mut expected: Vec<Coord> = vec![c(2); (k - 1) as usize];
        expected.push(c(1));
        let values_ok = r.plain.exact() == Some(c(1))
            && r.per_level
                .iter()
                .zip(&expected)
                .all(|(got, want)| got.exact() == Some(*want));
        let sum_sharp = r.sum.exact() == Some(c(2 * k - 1));
        report.push(
            "sharp_family_values",
            values_ok && r.all_ok(),
            serde_json::json!({
                "K": k,
                "plain": cost_json(r.plain),
                "per_level": r.per_level.iter().map(|c| cost_json(*c)).collect::<Vec<_>>(),
                "ratios": r.ratios,
            }),
        );
        report.push(
            "sharpness_attained",
            sum_sharp,
            serde_json::json!({
                "sum": cost_json(r.sum),
                "bound": format!("(2K-1)*W = {}", 2 * k - 1),
            }),
        );
    }
    report.emit(opts, json)
}

fn triangle(opts: &Opts, json: bool) -> Result<(), CliError> {
    let cp = parse_cost_params(opts)?;
    if cp.p.is_one() {
        return Err(CliError::Usage(
            "triangle: no counterexample exists at p = 1 (the distance is a metric there); use --p > 1".into(),
        ));
    }
    let eps = match opts.get("eps") {
        None => Coord::new(1, 2),
        Some(v) => parse_coord(v)
            .filter(|e| *e > Coord::from_integer(0) && *e <= Coord::from_integer(1))
            .ok_or_else(|| CliError::Usage(format!("`--eps {v}` must lie in (0, 1]")))?,
    };
    let level = opts.parse_usize("level", 2)?.max(1);
    let r = triangle_counterexample(eps, level, cp).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut report = Report::new("triangle");
    report.push(
        "graded_levels_match_construction",
        r.levels_match,
        serde_json::json!({ "eps": format_coord(eps), "k": level }),
    );
    report.push(
        "distances_match_closed_forms",
        r.matches_closed_forms,
        serde_json::json!({
            "W_DF": cost_json(r.w_df), "closed_DF": r.cf_df,
            "W_DE": cost_json(r.w_de), "closed_DE": r.cf_de,
            "W_EF": cost_json(r.w_ef), "closed_EF": r.cf_ef,
        }),
    );
    report.push(
        "violation_matches_prediction",
        r.violated == r.predicted_violation,
        serde_json::json!({
            "violated": r.violated,
            "predicted": r.predicted_violation,
            "margin": r.margin,
        }),
    );
    report.notes.push(if r.violated {
        format!(
            "triangle inequality violated: W(D_k,F_k) = {} > {} = W(D_k,E_k) + W(E_k,F_k)",
            r.w_df,
            r.w_de.as_f64() + r.w_ef.as_f64()
        )
    } else {
        "triangle inequality not violated at these parameters (matches the closed-form prediction)"
            .to_string()
    });
    report.emit(opts, json)
}

fn geodesic(opts: &Opts, json: bool) -> Result<(), CliError> {
    let (seed, specs) = sweep_specs(opts)?;
    let samples = opts.parse_u64("samples", 10)?;
    let mut report = Report::new("geodesic");
    let mut rng = SplitMix64(seed ^ 0x6A09_E667);

    let mut property_ok = true;
    let mut endpoints_ok = true;
    let mut first_failure: Option<String> = None;
    for (i, spec) in specs.iter().enumerate() {
        let other = RandomModuleSpec {
            seed: spec.seed ^ 0xB7E1_5162,
            ..*spec
        };
        let d = plane_of(&random_barcode(spec))?;
        let e = plane_of(&random_barcode(&other))?;
        let path = coordinate_geodesic_path(&d, &e)?;
        let tau = path.total();
        if path.sample(Coord::from_integer(0)) != d || path.sample(tau) != e {
            endpoints_ok = false;
            first_failure
                .get_or_insert_with(|| format!("endpoints, instance {i} (seed {})", spec.seed));
        }
        if tau == Coord::from_integer(0) {
            continue;
        }
        for _ in 0..samples {
            let (mut lo, mut hi) = (rng.below(1000) as i64, rng.below(1000) as i64);
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            let s = tau * Coord::new(lo, 999);
            let t = tau * Coord::new(hi, 999);
            let dist = signed_wasserstein(&path.sample(s), &path.sample(t), CostParams::one_one())
                .map_err(|e| CliError::Verification(e.to_string()))?
                .0;
            let expected = t - s;
            if (dist.as_f64() - coord_to_f64(expected)).abs() > 1e-9 {
                property_ok = false;
                first_failure.get_or_insert_with(|| {
                    format!(
                        "instance {i} (seed {}): W(gamma(s),gamma(t)) = {} at s = {}, t = {}",
                        spec.seed,
                        dist,
                        format_coord(s),
                        format_coord(t)
                    )
                });
            }
        }
    }
    report.push(
        "endpoints_are_input_diagrams",
        endpoints_ok,
        serde_json::json!({ "instances": specs.len(), "seed": seed }),
    );
    report.push(
        "constant_speed_property",
        property_ok,
        serde_json::json!({ "instances": specs.len(), "samples_per_instance": samples }),
    );
    if let Some(f) = first_failure {
        report.notes.push(format!("first failure: {f}"));
    }
    report.emit(opts, json)
}
