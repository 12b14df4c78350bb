use std::collections::BTreeMap;

use fermiorder::entanglement::{
    effective_dimensions, negativity as qubit_negativity, ppt_separable, two_qubit_measures,
};
use fermiorder::fock::{random_state, Sector};
use fermiorder::numerics::trace_distance;
use fermiorder::ordering::{is_physical, qubit_image};
use fermiorder::reduction::{
    all_orderings, fermionic_partial_trace, ordering_scan as scan, qubit_route_reduction, theorem_check,
    OrderingClass, ScanReport,
};
use fermiorder::{states, BipartitionSpec, ComplexMatrix, Error, FockVector, ModeOrdering, ModeSystem};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{bipartition, load_state, ordering};
use crate::render;
use crate::{Format, NegativityArgs, Report, ScanArgs, SweepArgs, UsageError};

// ---------------------------------------------------------------- sweep

#[derive(Serialize)]
struct TrialRecord {
    seed: u64,
    n: usize,
    m: usize,
    ordering: String,
    #[serde(rename = "maxEntryDiff")]
    max_entry_diff: f64,
    #[serde(rename = "traceDistance")]
    trace_distance: f64,
    ssr: bool,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    command: &'static str,
    modes: [usize; 2],
    trials_per_sector: u64,
    seed: u64,
    tolerance: f64,
    bipartition: &'a BipartitionSpec,
    ordering: &'a ModeOrdering,
    max_entry_diff: f64,
    worst_seed: u64,
    max_trace_distance: f64,
    violations: Vec<u64>,
    pass: bool,
    trials: &'a [TrialRecord],
}

pub fn theorem_sweep(args: &SweepArgs, seed: u64, format: Format, tol: f64) -> Result<Report, UsageError> {
    let (n, m) = (args.modes.n, args.modes.m);
    let system = ModeSystem::standard(n, m)?;
    let bp = BipartitionSpec::from_system(&system)?;
    let order = ordering(args.ordering.as_deref(), &system)?;
    if !is_physical(&order, &bp) {
        return Err(Error::NonPhysicalOrdering(order.labels().to_vec()).into());
    }

    let t = args.trials;
    let jobs: Vec<(u64, Sector)> = (0..t)
        .map(|i| (seed.wrapping_add(i), Sector::Even))
        .chain((0..t).map(|i| (seed.wrapping_add(t).wrapping_add(i), Sector::Odd)))
        .collect();
    let label = render::labels(&order);
    // collect() keeps seed order regardless of scheduling
    let records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(s, sector)| {
            let rho = random_state(&system, sector, s).density();
            let r = theorem_check(&rho, &bp, &order, false)?;
            Ok(TrialRecord {
                seed: s,
                n,
                m,
                ordering: label.clone(),
                max_entry_diff: r.max_entry_diff,
                trace_distance: r.trace_distance,
                ssr: r.ssr_compliant,
            })
        })
        .collect::<Result<_, Error>>()?;

    let worst = records
        .iter()
        .fold(&records[0], |w, r| if r.max_entry_diff > w.max_entry_diff { r } else { w });
    let max_td = records.iter().map(|r| r.trace_distance).fold(0.0, f64::max);
    let violations: Vec<u64> = records.iter().filter(|r| !(r.max_entry_diff < tol)).map(|r| r.seed).collect();
    let pass = violations.is_empty();
    let notes = violations
        .iter()
        .map(|s| format!("violation: seed {s} exceeds tolerance {tol:e}"))
        .collect();

    let body = match format {
        Format::Json => render::json(&SweepReport {
            command: "theorem-sweep",
            modes: [n, m],
            trials_per_sector: t,
            seed,
            tolerance: tol,
            bipartition: &bp,
            ordering: &order,
            max_entry_diff: worst.max_entry_diff,
            worst_seed: worst.seed,
            max_trace_distance: max_td,
            violations: violations.clone(),
            pass,
            trials: &records,
        })?,
        Format::Csv => render::csv(&records)?,
        Format::Text => {
            let mut s = format!(
                "theorem sweep  modes ({n},{m})  {t} even + {t} odd trials  seed {seed}\n\
                 bipartition     {}\n\
                 ordering        {label}\n\
                 max entry diff  {:.3e}  (seed {})\n\
                 max trace dist  {max_td:.3e}\n\
                 tolerance       {tol:e}\n",
                render::split(&bp),
                worst.max_entry_diff,
                worst.seed,
            );
            if !pass {
                let seeds: Vec<String> = violations.iter().map(u64::to_string).collect();
                s.push_str(&format!("violating seeds {}\n", seeds.join(",")));
            }
            s.push_str(&format!("result          {}\n", if pass { "PASS" } else { "FAIL" }));
            s
        }
    };
    Ok(Report {
        body,
        violation: !pass,
        notes,
    })
}

// ---------------------------------------------------------------- scan

#[derive(Serialize)]
struct ClassRow {
    class: usize,
    representative: String,
    members: usize,
    physical_members: usize,
    contiguous_members: usize,
    matches_fermionic: bool,
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    command: &'static str,
    state: &'a str,
    modes: &'a [String],
    physical_orderings: usize,
    physical_in_fermionic_class: usize,
    pass: bool,
    #[serde(flatten)]
    scan: &'a ScanReport,
}

/// Every kept-before-traced ordering of an SSR state must land in the class
/// matching the fermionic trace, and each signature bucket must be uniform.
fn scan_verdict(report: &ScanReport) -> (usize, usize, bool) {
    let physical: usize = report.classes.iter().map(|c| c.physical_members).sum();
    let in_fermionic = report.fermionic_class().map_or(0, |c| c.physical_members);
    let ok = report.invariance_holds && (!report.ssr_compliant || in_fermionic == physical);
    (physical, in_fermionic, ok)
}

fn class_text(i: usize, c: &OrderingClass) -> String {
    format!(
        "  class {:<3} members {:<6} physical {:<5} contiguous {:<6} fermionic {:<3}  e.g. {}\n{}",
        i + 1,
        c.members,
        c.physical_members,
        c.contiguous_members,
        render::yes_no(c.matches_fermionic),
        render::labels(&c.representative),
        render::matrix(&c.reduced, "      "),
    )
}

pub fn ordering_scan(args: &ScanArgs, seed: u64, format: Format, tol: f64) -> Result<Report, UsageError> {
    let state = load_state(&args.state, seed)?;
    let system = state.vector.system().clone();
    let bp = bipartition(&args.state, &system)?;
    let report = scan(&state.vector.density(), &bp, tol)?;
    let (physical, in_fermionic, pass) = scan_verdict(&report);

    let body = match format {
        Format::Json => render::json(&ScanOutput {
            command: "ordering-scan",
            state: &state.source,
            modes: system.labels(),
            physical_orderings: physical,
            physical_in_fermionic_class: in_fermionic,
            pass,
            scan: &report,
        })?,
        Format::Csv => {
            let rows: Vec<ClassRow> = report
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| ClassRow {
                    class: i + 1,
                    representative: render::labels(&c.representative),
                    members: c.members,
                    physical_members: c.physical_members,
                    contiguous_members: c.contiguous_members,
                    matches_fermionic: c.matches_fermionic,
                })
                .collect();
            render::csv(&rows)?
        }
        Format::Text => {
            let mut s = format!(
                "ordering scan  state {}\n\
                 modes           {}\n\
                 bipartition     {}\n\
                 SSR compliant   {}\n\
                 orderings       {}  ({} signatures, {} re-checked, uniform {})\n\
                 classes         {}\n\
                 kept-before-traced orderings in fermionic class  {in_fermionic} of {physical}\n\
                 fermionic partial trace\n{}",
                state.source,
                system.labels().join(","),
                render::split(&bp),
                render::yes_no(report.ssr_compliant),
                report.orderings_total,
                report.signatures,
                report.invariance_samples,
                render::yes_no(report.invariance_holds),
                report.classes.len(),
                render::matrix(&report.fermionic, "      "),
            );
            for (i, c) in report.classes.iter().enumerate() {
                s.push_str(&class_text(i, c));
            }
            s.push_str(&format!("result          {}\n", if pass { "PASS" } else { "FAIL" }));
            s
        }
    };
    Ok(Report {
        body,
        violation: !pass,
        notes: Vec::new(),
    })
}

// ---------------------------------------------------------------- negativity

#[derive(Serialize)]
struct NegativityOutput<'a> {
    command: &'static str,
    state: &'a str,
    modes: &'a [String],
    bipartition: &'a BipartitionSpec,
    ordering: &'a ModeOrdering,
    ssr_compliant: bool,
    effective_dimensions: [usize; 2],
    negativity: f64,
    /// `null` when the PPT test is inconclusive for these dimensions.
    ppt_separable: Option<bool>,
    concurrence: Option<f64>,
    eof: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), |v| format!("{v:.12}"))
}

pub fn negativity(args: &NegativityArgs, seed: u64, format: Format) -> Result<Report, UsageError> {
    let state = load_state(&args.state, seed)?;
    let system = state.vector.system().clone();
    let bp = bipartition(&args.state, &system)?;
    let order = ordering(Some(&args.ordering), &system)?;
    let q = qubit_image(&state.vector.density(), &order)?;
    let neg = qubit_negativity(&q, &bp)?.value;
    let (dk, dt) = effective_dimensions(&q.density_matrix(), &bp);
    let ppt = match ppt_separable(&q, &bp) {
        Ok(b) => Some(b),
        Err(Error::UnsupportedDimensions { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let (conc, eof) = match two_qubit_measures(&q, &bp) {
        Ok((c, e)) => (Some(c.value), Some(e.value)),
        Err(Error::UnsupportedDimensions { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let out = NegativityOutput {
        command: "negativity",
        state: &state.source,
        modes: system.labels(),
        bipartition: &bp,
        ordering: &order,
        ssr_compliant: state.vector.ssr_compliant(),
        effective_dimensions: [dk, dt],
        negativity: neg,
        ppt_separable: ppt,
        concurrence: conc,
        eof,
    };
    let body = match format {
        Format::Json => render::json(&out)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                state: &'a str,
                kept: String,
                traced: String,
                ordering: String,
                negativity: f64,
                ppt_separable: Option<bool>,
                concurrence: Option<f64>,
                eof: Option<f64>,
            }
            render::csv(&[Row {
                state: &state.source,
                kept: bp.kept().join(","),
                traced: bp.traced().join(","),
                ordering: render::labels(&order),
                negativity: neg,
                ppt_separable: ppt,
                concurrence: conc,
                eof,
            }])?
        }
        Format::Text => format!(
            "negativity  state {}\n\
             bipartition     {}\n\
             ordering        {}\n\
             SSR compliant   {}\n\
             effective dims  {dk} x {dt}\n\
             negativity      {neg:.12}\n\
             PPT separable   {}\n\
             concurrence     {}\n\
             EoF             {}\n",
            state.source,
            render::split(&bp),
            render::labels(&order),
            render::yes_no(out.ssr_compliant),
            ppt.map_or("inconclusive", render::yes_no),
            opt(conc),
            opt(eof),
        ),
    };
    Ok(Report {
        body,
        violation: false,
        notes: Vec::new(),
    })
}

// ---------------------------------------------------------------- examples

#[derive(Clone, Serialize)]
struct Check {
    state: &'static str,
    check: &'static str,
    ordering: Option<ModeOrdering>,
    expected: Value,
    actual: Value,
    tolerance: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct ClassSummary {
    representative: ModeOrdering,
    members: usize,
    physical_members: usize,
    matches_fermionic: bool,
    reduced: ComplexMatrix,
}

#[derive(Serialize)]
struct NegativityGroup {
    value: f64,
    orderings: usize,
    example: ModeOrdering,
}

#[derive(Serialize)]
struct Example {
    name: &'static str,
    modes: Vec<String>,
    bipartition: BipartitionSpec,
    ssr_compliant: bool,
    classes: Vec<ClassSummary>,
    negativity_by_ordering: Vec<NegativityGroup>,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct ExamplesReport {
    command: &'static str,
    tolerance: f64,
    pass: bool,
    states: Vec<Example>,
}

struct Checker {
    state: &'static str,
    checks: Vec<Check>,
}

impl Checker {
    fn number(&mut self, check: &'static str, ordering: Option<&ModeOrdering>, expected: f64, actual: f64, tol: f64) {
        self.checks.push(Check {
            state: self.state,
            check,
            ordering: ordering.cloned(),
            expected: json!(expected),
            actual: json!(actual),
            tolerance: Some(tol),
            pass: (actual - expected).abs() <= tol,
        });
    }

    fn exact<T: Serialize + PartialEq>(&mut self, check: &'static str, expected: T, actual: T) {
        self.checks.push(Check {
            state: self.state,
            check,
            ordering: None,
            pass: expected == actual,
            expected: json!(expected),
            actual: json!(actual),
            tolerance: None,
        });
    }
}

/// Negativity under every ordering, grouped by value.
fn negativity_groups(v: &FockVector, bp: &BipartitionSpec) -> Result<Vec<NegativityGroup>, UsageError> {
    let rho = v.density();
    let mut groups: BTreeMap<i64, NegativityGroup> = BTreeMap::new();
    for o in all_orderings(v.system())? {
        let value = qubit_negativity(&qubit_image(&rho, &o)?, bp)?.value;
        let key = (value * 1e9).round() as i64;
        groups
            .entry(key)
            .and_modify(|g| g.orderings += 1)
            .or_insert(NegativityGroup {
                value,
                orderings: 1,
                example: o,
            });
    }
    Ok(groups.into_values().collect())
}

fn fermionic_negativity(v: &FockVector, bp: &BipartitionSpec, o: &ModeOrdering) -> Result<f64, UsageError> {
    Ok(qubit_negativity(&qubit_image(&v.density(), o)?, bp)?.value)
}

fn example(name: &'static str, tol: f64) -> Result<Example, UsageError> {
    let v = states::named(name).ok_or_else(|| UsageError(format!("unknown state `{name}`")))??;
    let system = v.system().clone();
    let bp = BipartitionSpec::from_system(&system)?;
    let rho = v.density();
    let report = scan(&rho, &bp, tol)?;
    let (physical, in_fermionic, _) = scan_verdict(&report);
    let identity = ModeOrdering::identity(&system);
    let mut c = Checker {
        state: name,
        checks: Vec::new(),
    };

    match name {
        "four-mode-product" => {
            c.exact("ssr compliant", true, v.ssr_compliant());
            let n = fermionic_negativity(&v, &bp, &identity)?;
            c.number("negativity", Some(&identity), 0.0, n, tol);
            let braided = ModeOrdering::new(&system, &["a", "d", "b", "c"])?;
            let n = fermionic_negativity(&v, &bp, &braided)?;
            c.number("negativity", Some(&braided), 0.5, n, 1e-10);
            c.exact("kept-before-traced orderings in fermionic class", physical, in_fermionic);
        }
        "mixed-parity" => {
            c.exact("ssr compliant", false, v.ssr_compliant());
            let ab = ModeOrdering::new(&system, &["a", "b"])?;
            let ba = ModeOrdering::new(&system, &["b", "a"])?;
            let x = qubit_route_reduction(&rho, &bp, &ab)?;
            let y = qubit_route_reduction(&rho, &bp, &ba)?;
            let d = trace_distance(x.matrix(), y.matrix())?;
            c.number("trace distance between (a,b) and (b,a) reductions", None, 0.5, d, 1e-10);
            c.exact("ordering classes", 2, report.classes.len());
        }
        "grassmann-pair" => {
            c.exact("ssr compliant", true, v.ssr_compliant());
            let n = fermionic_negativity(&v, &bp, &identity)?;
            c.number("negativity", Some(&identity), 0.5, n, 1e-10);
            let red = fermionic_partial_trace(&rho, &bp)?;
            let diff = red.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.5]))?;
            c.number("marginal distance from maximally mixed", None, 0.0, diff, tol);
            c.exact("ordering classes", 1, report.classes.len());
        }
        "dirac-singlet" => {
            c.exact("ssr compliant", true, v.ssr_compliant());
            let n = fermionic_negativity(&v, &bp, &identity)?;
            c.number("negativity", Some(&identity), 0.5, n, 1e-10);
            let half = ComplexMatrix::from_diagonal(&[0.0, 0.5, 0.5, 0.0]);
            for kept in [["uA", "dA"], ["uR", "dR"]] {
                let side = BipartitionSpec::keeping(&system, &kept)?;
                let red = fermionic_partial_trace(&rho, &side)?;
                c.number(
                    "marginal distance from maximally mixed one-particle state",
                    None,
                    0.0,
                    red.matrix().max_abs_diff(&half)?,
                    tol,
                );
            }
            let (conc, eof) = two_qubit_measures(&qubit_image(&rho, &identity)?, &bp)?;
            c.number("concurrence", Some(&identity), 1.0, conc.value, 1e-10);
            c.number("entanglement of formation", Some(&identity), 1.0, eof.value, 1e-10);
            c.exact("kept-before-traced orderings in fermionic class", physical, in_fermionic);
        }
        _ => {}
    }

    Ok(Example {
        name,
        modes: system.labels().to_vec(),
        ssr_compliant: v.ssr_compliant(),
        classes: report
            .classes
            .into_iter()
            .map(|k| ClassSummary {
                representative: k.representative,
                members: k.members,
                physical_members: k.physical_members,
                matches_fermionic: k.matches_fermionic,
                reduced: k.reduced,
            })
            .collect(),
        negativity_by_ordering: negativity_groups(&v, &bp)?,
        bipartition: bp,
        checks: c.checks,
    })
}

fn example_text(e: &Example) -> String {
    let total: usize = e.classes.iter().map(|c| c.members).sum();
    let mut s = format!(
        "== {}\nmodes           {}\nbipartition     {}\nSSR compliant   {}\n\
         reduced state by ordering class ({total} orderings)\n",
        e.name,
        e.modes.join(","),
        render::split(&e.bipartition),
        render::yes_no(e.ssr_compliant),
    );
    for (i, c) in e.classes.iter().enumerate() {
        s.push_str(&format!(
            "  class {:<2} members {:<4} physical {:<4} fermionic {:<3}  e.g. {}\n{}",
            i + 1,
            c.members,
            c.physical_members,
            render::yes_no(c.matches_fermionic),
            render::labels(&c.representative),
            render::matrix(&c.reduced, "      "),
        ));
    }
    s.push_str("negativity by ordering\n");
    for g in &e.negativity_by_ordering {
        s.push_str(&format!(
            "  {:.6}  {:>3} orderings  e.g. {}\n",
            g.value,
            g.orderings,
            render::labels(&g.example)
        ));
    }
    s.push_str("checks\n");
    for c in &e.checks {
        let under = c.ordering.as_ref().map(|o| format!(" ({})", render::labels(o))).unwrap_or_default();
        s.push_str(&format!(
            "  {}  {}{under}: expected {}, got {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.expected,
            c.actual
        ));
    }
    s.push('\n');
    s
}

pub fn examples(format: Format, tol: f64) -> Result<Report, UsageError> {
    let states = states::NAMES.iter().map(|n| example(n, tol)).collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<&Check> = states.iter().flat_map(|e| &e.checks).filter(|c| !c.pass).collect();
    let notes = failed.iter().map(|c| format!("mismatch: {} / {}", c.state, c.check)).collect();
    let pass = failed.is_empty();
    let body = match format {
        Format::Json => render::json(&ExamplesReport {
            command: "examples",
            tolerance: tol,
            pass,
            states,
        })?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                state: &'static str,
                check: &'static str,
                ordering: String,
                expected: String,
                actual: String,
                tolerance: Option<f64>,
                pass: bool,
            }
            let rows: Vec<Row> = states
                .iter()
                .flat_map(|e| &e.checks)
                .map(|c| Row {
                    state: c.state,
                    check: c.check,
                    ordering: c.ordering.as_ref().map(render::labels).unwrap_or_default(),
                    expected: c.expected.to_string(),
                    actual: c.actual.to_string(),
                    tolerance: c.tolerance,
                    pass: c.pass,
                })
                .collect();
            render::csv(&rows)?
        }
        Format::Text => {
            let mut s: String = states.iter().map(example_text).collect();
            let total: usize = states.iter().map(|e| e.checks.len()).sum();
            s.push_str(&format!("{} of {total} checks passed\n", total - failed.len()));
            s
        }
    };
    Ok(Report {
        body,
        violation: !pass,
        notes,
    })
}
