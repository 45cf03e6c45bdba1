use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use durfee_core::persist::{read_partition_table, write_partition_table, CACHE_FILE_NAME};
use durfee_core::{
    max_h, parse_profiles, read_cohort_csv, reproduce, rule_of_thumb, Assessment, Engine,
    IntervalRule, Limits, Probability, SamplerConfig, ScatterPoint, ScholarRecord, Target,
};

use crate::output::{render, Cell, Section};
use crate::{Cli, Command};

pub const CACHE_ENV: &str = "DURFEE_CACHE_DIR";

pub fn run(cli: &Cli) -> Result<()> {
    let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let (engine, loaded) = open_engine(cache.as_deref())?;
    let sections = execute(cli, &engine);
    // keep whatever was computed, even when the command itself failed
    if let Some(dir) = &cache {
        if let Err(e) = save_cache(&engine, dir, loaded) {
            eprintln!(
                "warning: could not update cache in {}: {e:#}",
                dir.display()
            );
        }
    }
    let (sections, deferred) = sections?;
    render(&sections, cli.format, &mut io::stdout().lock())?;
    match deferred {
        Some(message) => Err(anyhow!(message)),
        None => Ok(()),
    }
}

fn open_engine(cache: Option<&Path>) -> Result<(Engine, usize)> {
    let engine = Engine::new(Limits::default());
    let Some(dir) = cache else {
        return Ok((engine, 0));
    };
    let path = dir.join(CACHE_FILE_NAME);
    if !path.exists() {
        return Ok((engine, 0));
    }
    let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
    match read_partition_table(BufReader::new(file)) {
        Ok(table) => {
            let max = table.max_n();
            Ok((engine.with_partition_table(table), max))
        }
        Err(e) => {
            eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
            Ok((engine, 0))
        }
    }
}

fn save_cache(engine: &Engine, dir: &Path, loaded: usize) -> Result<()> {
    let Some(table) = engine.cached_partition_table() else {
        return Ok(());
    };
    if table.max_n() <= loaded && dir.join(CACHE_FILE_NAME).exists() {
        return Ok(());
    }
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{CACHE_FILE_NAME}.{}.tmp", std::process::id()));
    write_partition_table(&table, BufWriter::new(File::create(&tmp)?))?;
    fs::rename(&tmp, dir.join(CACHE_FILE_NAME))?;
    Ok(())
}

/// Sections to print, plus an error to report after printing them.
type Outcome = (Vec<Section>, Option<String>);

fn execute(cli: &Cli, engine: &Engine) -> Result<Outcome> {
    let eps = cli.epsilon;
    let rule: IntervalRule = cli.rule.into();
    let done = |s: Vec<Section>| Ok((s, None));
    match &cli.command {
        Command::Pn { n } => done(vec![pn(engine, n)?]),
        Command::Dist { n } => done(vec![dist(engine, *n)?]),
        Command::Interval { n } => done(vec![interval(engine, n, eps, rule)?]),
        Command::Tail { n, t } => done(vec![tail(engine, *n, *t)?]),
        Command::Estimate { n } => done(vec![estimate(n)]),
        Command::Analyze {
            profile_file,
            citations,
            h,
            nonbook_citations,
            nonbook_h,
            name,
        } => {
            let records = match (profile_file, citations, h) {
                (Some(path), _, _) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    parse_profiles(&text)?
                        .into_iter()
                        .map(|(name, p)| ScholarRecord::from_profile(name, p))
                        .collect()
                }
                (None, Some(c), Some(h)) => {
                    let mut r = ScholarRecord::new(name.clone(), *c, *h);
                    if let (Some(nc), Some(nh)) = (nonbook_citations, nonbook_h) {
                        r = r.with_nonbook(*nc, *nh);
                    }
                    vec![r]
                }
                _ => bail!("give a profile file or both --citations and --h"),
            };
            done(analyze(engine, &records, eps, rule)?)
        }
        Command::Cohort {
            csv,
            nonbook,
            scatter,
        } => cohort(engine, csv, *nonbook, scatter.as_deref(), eps, rule),
        Command::Sample {
            n,
            samples,
            seed,
            method,
            compare_exact,
        } => done(sample(
            engine,
            SamplerConfig::new(*n, *seed, (*method).into()),
            *samples,
            *compare_exact,
        )?),
        Command::Reproduce { target } => done(reproduce_target(engine, *target)?),
    }
}

fn probability_cells(p: &Probability) -> [Cell; 3] {
    [
        Cell::Float(p.to_f64()),
        Cell::Float(p.log10()),
        Cell::Big(format!("{}/{}", p.numerator(), p.denominator())),
    ]
}

fn hardy_ramanujan_cell(ln_value: f64) -> Cell {
    let value = ln_value.exp();
    if value.is_finite() {
        return Cell::Float(value);
    }
    let log10 = ln_value / std::f64::consts::LN_10;
    let exponent = log10.floor();
    Cell::Text(format!("{:.12}e{}", 10f64.powf(log10 - exponent), exponent))
}

fn pn(engine: &Engine, ns: &[u64]) -> Result<Section> {
    let mut s = Section::new(
        "partition_numbers",
        &["n", "p_n", "hardy_ramanujan", "ratio"],
    );
    for &n in ns {
        let exact = engine.partition_count(n)?;
        let (approx, ratio) = if n == 0 {
            (Cell::Empty, Cell::Empty)
        } else {
            let hr = engine.hardy_ramanujan_estimate(n)?;
            (
                hardy_ramanujan_cell(hr.ln_value),
                Cell::Float(hr.ratio_to(&exact)),
            )
        };
        s.push(vec![n.into(), Cell::Big(exact.to_string()), approx, ratio]);
    }
    Ok(s)
}

fn dist(engine: &Engine, n: u64) -> Result<Section> {
    let d = engine.durfee_distribution(n)?;
    let mut s = Section::new("distribution", &["k", "count", "probability", "cumulative"]);
    let mut cumulative = 0.0;
    for (k, count) in d.counts().counts.iter().enumerate() {
        let p = d.probabilities[k];
        cumulative += p;
        s.push(vec![
            (k as u64).into(),
            Cell::Big(count.to_string()),
            p.into(),
            cumulative.min(1.0).into(),
        ]);
    }
    Ok(s)
}

fn interval(engine: &Engine, ns: &[u64], eps: f64, rule: IntervalRule) -> Result<Section> {
    let mut s = Section::new(
        "intervals",
        &[
            "n",
            "epsilon",
            "rule",
            "low",
            "high",
            "mass",
            "mode",
            "estimate",
            "estimate_exact",
        ],
    );
    for &n in ns {
        let iv = engine.confidence_interval(n, eps, rule)?;
        let est = rule_of_thumb(n);
        s.push(vec![
            n.into(),
            eps.into(),
            rule.to_string().into(),
            iv.low.into(),
            iv.high.into(),
            iv.mass.to_f64().into(),
            engine.mode_h(n)?.into(),
            est.display_value().into(),
            est.value.into(),
        ]);
    }
    Ok(s)
}

fn tail(engine: &Engine, n: u64, t: u64) -> Result<Section> {
    let p = engine.tail_probability(n, t)?;
    let mut s = Section::new("tail", &["n", "t", "probability", "log10", "exact"]);
    let [value, log10, exact] = probability_cells(&p);
    s.push(vec![n.into(), t.into(), value, log10, exact]);
    Ok(s)
}

fn estimate(ns: &[u64]) -> Section {
    let mut s = Section::new("estimates", &["n", "estimate", "estimate_exact", "max_h"]);
    for &n in ns {
        let est = rule_of_thumb(n);
        s.push(vec![
            n.into(),
            est.display_value().into(),
            est.value.into(),
            max_h(n).into(),
        ]);
    }
    s
}

const ASSESSMENT_COLUMNS: [&str; 14] = [
    "name",
    "citations",
    "h",
    "estimate",
    "estimate_exact",
    "low",
    "high",
    "in_interval",
    "distance",
    "ratio",
    "shortfall",
    "hirsch_a",
    "anomaly",
    "issues",
];

fn assessment_row(a: &Assessment) -> Vec<Cell> {
    let issues: Vec<String> = a.issues.iter().map(ToString::to_string).collect();
    vec![
        a.name.clone().into(),
        a.citations.into(),
        a.h.into(),
        a.estimate.display_value().into(),
        a.estimate.value.into(),
        a.interval.low.into(),
        a.interval.high.into(),
        a.in_interval.into(),
        a.distance.into(),
        a.ratio.into(),
        a.shortfall().into(),
        a.hirsch_a.into(),
        a.anomaly.to_string().into(),
        issues.join("; ").into(),
    ]
}

fn analyze(
    engine: &Engine,
    records: &[ScholarRecord],
    eps: f64,
    rule: IntervalRule,
) -> Result<Vec<Section>> {
    let mut main = Section::new("assessments", &ASSESSMENT_COLUMNS);
    let mut revised = Section::new("non_book", &ASSESSMENT_COLUMNS);
    for r in records {
        let a = engine.assess(r, eps, rule)?;
        main.push(assessment_row(&a));
        if let Some(rev) = &a.revised {
            revised.push(assessment_row(rev));
        }
    }
    let mut out = vec![main];
    if !revised.rows.is_empty() {
        out.push(revised);
    }
    Ok(out)
}

fn cohort(
    engine: &Engine,
    path: &Path,
    nonbook: bool,
    scatter: Option<&Path>,
    eps: f64,
    rule: IntervalRule,
) -> Result<Outcome> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let records = read_cohort_csv(BufReader::new(file))
        .with_context(|| format!("reading {}", path.display()))?;
    let report = engine.analyze_cohort(&records, eps, rule)?;

    let mut columns = ASSESSMENT_COLUMNS.to_vec();
    if nonbook {
        columns.extend([
            "citations_nonbook",
            "h_nonbook",
            "revised_estimate",
            "revised_low",
            "revised_high",
            "revised_in_interval",
        ]);
    }
    let mut rows = Section::new("assessments", &columns);
    for (a, r) in report.assessments.iter().zip(&records) {
        let mut row = assessment_row(a);
        if nonbook {
            let rev = a.revised.as_deref();
            row.extend([
                r.citations_nonbook.into(),
                r.h_nonbook.into(),
                rev.map(|v| v.estimate.display_value()).into(),
                rev.map(|v| v.interval.low).into(),
                rev.map(|v| v.interval.high).into(),
                rev.map(|v| v.in_interval).into(),
            ]);
        }
        rows.push(row);
    }

    let outside: Vec<&Assessment> = report.out_of_interval().collect();
    let mut summary = vec![
        ("records", Cell::Int(records.len() as u64)),
        ("epsilon", eps.into()),
        ("rule", rule.to_string().into()),
        ("pearson_r", report.pearson_r.into()),
        ("out_of_interval", Cell::Int(outside.len() as u64)),
        (
            "out_by_one",
            Cell::Int(outside.iter().filter(|a| a.distance == 1).count() as u64),
        ),
    ];
    let mut deferred = report.correlation_error.clone();
    if nonbook {
        let excluded: Vec<String> = report
            .excluded_from_nonbook
            .iter()
            .map(|e| {
                let why: Vec<String> = e.issues.iter().map(ToString::to_string).collect();
                format!("{} ({})", e.name, why.join("; "))
            })
            .collect();
        summary.push(("pearson_r_nonbook", report.pearson_r_nonbook.into()));
        summary.push((
            "nonbook_records",
            Cell::Int(report.nonbook_scatter.len() as u64),
        ));
        summary.push(("excluded_from_nonbook", excluded.join("; ").into()));
        if deferred.is_none() {
            deferred = report
                .nonbook_correlation_error
                .as_ref()
                .map(|e| format!("non-book: {e}"));
        }
    }

    if let Some(out) = scatter {
        let mut w =
            csv::Writer::from_path(out).with_context(|| format!("creating {}", out.display()))?;
        w.write_record(["name", "series", "estimate", "h"])?;
        let series: [(&str, &[ScatterPoint]); 2] = [
            ("raw", &report.scatter_points),
            ("nonbook", &report.nonbook_scatter),
        ];
        for (label, points) in series {
            if label == "nonbook" && !nonbook {
                continue;
            }
            for p in points {
                w.write_record([
                    p.name.as_str(),
                    label,
                    &p.estimate.to_string(),
                    &p.h.to_string(),
                ])?;
            }
        }
        w.flush()?;
    }

    Ok((vec![rows, Section::pairs("summary", summary)], deferred))
}

fn sample(
    engine: &Engine,
    config: SamplerConfig,
    samples: u64,
    compare: bool,
) -> Result<Vec<Section>> {
    let emp = engine.empirical_durfee_distribution(config, samples)?;
    let freqs = emp.frequencies();
    let exact = if compare {
        Some(engine.durfee_distribution(config.n)?)
    } else {
        None
    };

    let mut columns = vec!["k", "count", "frequency"];
    if compare {
        columns.push("exact");
    }
    let mut hist = Section::new("histogram", &columns);
    for (k, &f) in freqs.iter().enumerate() {
        let count = emp.histogram.get(&(k as u64)).copied().unwrap_or(0);
        let exact_zero = exact
            .as_ref()
            .map_or(true, |d| d.probabilities.get(k).map_or(true, |&p| p == 0.0));
        if count == 0 && exact_zero {
            continue;
        }
        let mut row = vec![(k as u64).into(), count.into(), f.into()];
        if let Some(d) = &exact {
            row.push(d.probabilities.get(k).copied().unwrap_or(0.0).into());
        }
        hist.push(row);
    }
    let mut summary = vec![
        ("n", Cell::Int(emp.n)),
        ("samples", Cell::Int(emp.samples)),
        ("seed", Cell::Int(emp.seed)),
        ("method", emp.method.to_string().into()),
        ("rng", emp.rng.into()),
    ];
    if let Some(d) = &exact {
        summary.push(("total_variation", d.total_variation(&freqs).into()));
    }
    Ok(vec![hist, Section::pairs("summary", summary)])
}

fn reproduce_target(engine: &Engine, target: Target) -> Result<Vec<Section>> {
    let rep = reproduce(engine, target)?;
    let mut cells = Section::new(
        "cells",
        &[
            "row",
            "column",
            "published",
            "computed",
            "matches",
            "excluded",
        ],
    );
    for c in &rep.cells {
        cells.push(vec![
            c.row.clone().into(),
            c.column.clone().into(),
            c.published.clone().into(),
            c.computed.clone().into(),
            c.matches.into(),
            c.excluded.into(),
        ]);
    }
    let mut flagged = Section::new("flagged", &["row", "reason"]);
    for f in &rep.flagged {
        flagged.push(vec![f.row.clone().into(), f.reason.clone().into()]);
    }
    let mut summary = Section::new("summary", &["column", "matched", "compared"]);
    for s in rep.summary() {
        summary.push(vec![
            s.column.into(),
            (s.matched as u64).into(),
            (s.compared as u64).into(),
        ]);
    }
    let mut notes = Section::new("notes", &["note"]);
    for n in &rep.notes {
        notes.push(vec![n.clone().into()]);
    }
    Ok(vec![cells, flagged, summary, notes])
}
