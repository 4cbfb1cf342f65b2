//! Command-line surface: solving, oracles, translations, work-factor
//! queries, instance generation, and the benchmark harness.
//!
//! Exit codes: 0 = solution found, 1 = unsatisfiable, 2 = unknown,
//! 64 = usage or parse error. Reports are line-oriented `key value` text
//! with a versioned header, written to the path given by `--stats`.

use crate::csp::{parse_instance, write_instance, Assignment, CspInstance};
use crate::edgecolor::{
    brute_force_edge_coloring, parse_edge_instance, solve_edge_instance, EdgeColoring,
    EdgeInstance,
};
use crate::gen;
use crate::graph::{parse_dimacs_with_extensions, write_dimacs, Graph};
use crate::randsolver::{solve_random_pairs, solve_random_restrict4, RandomVerdict, TrialPolicy};
use crate::sat::{brute_force_sat, parse_dimacs_cnf, solve_3sat, translate_3sat, write_dimacs_cnf};
use crate::solver::{solve, SearchStats};
use crate::vertexcolor::{brute_force_3color, three_color, Coloring};
use crate::workfactor::{derived_constants, optimize_epsilon, work_factor_of};
use crate::csp::Color;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

/// Prints to stdout ignoring a closed pipe, so `trichrome ... | head`
/// exits quietly instead of panicking.
fn say(text: impl AsRef<str>) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_ref().as_bytes());
}

fn sayln(text: impl AsRef<str>) {
    say(text);
    say("\n");
}

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const REPORT_HEADER: &str = "trichrome-report 1";

/// Ordered key/value report. Keys repeat only for list-like entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Report, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == REPORT_HEADER => {}
            other => return Err(format!("bad report header: {other:?}")),
        }
        let mut entries = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            match line.split_once(' ') {
                Some((k, v)) => entries.push((k.to_string(), v.to_string())),
                None => return Err(format!("line {}: expected `key value`", i + 2)),
            }
        }
        Ok(Report { entries })
    }

    fn add_search_stats(&mut self, stats: &SearchStats) {
        self.push("calls", stats.calls);
        self.push("base_cases", stats.base_case_count);
        self.push("root_size", format!("{:.6}", stats.root_size));
        self.push(
            "effective_work_factor",
            format!("{:.6}", stats.effective_work_factor()),
        );
        for (rule, rs) in &stats.rules {
            self.push(&format!("rule.{rule}.triggers"), rs.triggers);
            self.push(&format!("rule.{rule}.branches"), rs.branches);
            self.push(
                &format!("rule.{rule}.min_decrement"),
                format!("{:.6}", rs.min_decrement),
            );
            self.push(
                &format!("rule.{rule}.mean_decrement"),
                format!(
                    "{:.6}",
                    if rs.branches == 0 {
                        0.0
                    } else {
                        rs.sum_decrement / rs.branches as f64
                    }
                ),
            );
            self.push(
                &format!("rule.{rule}.worst_shortfall"),
                format!("{:.6}", rs.worst_shortfall),
            );
        }
    }
}

struct Options {
    positional: Vec<String>,
    stats_path: Option<String>,
    seed: Option<u64>,
    max_trials: u64,
    randomized: Option<String>,
    parallel: bool,
    n: usize,
    density: f64,
    count: usize,
    k: usize,
    out: Option<String>,
}

impl Options {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

fn parse_options(args: &[String]) -> Result<Options, String> {
    let mut o = Options {
        positional: Vec::new(),
        stats_path: None,
        seed: None,
        max_trials: 1000,
        randomized: None,
        parallel: false,
        n: 8,
        density: 1.0,
        count: 50,
        k: 3,
        out: None,
    };
    if o.seed.is_none() {
        if let Ok(env_seed) = std::env::var("TRICHROME_SEED") {
            o.seed = Some(
                env_seed
                    .parse()
                    .map_err(|_| format!("TRICHROME_SEED is not an integer: {env_seed}"))?,
            );
        }
    }
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut grab = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{name} expects a value"))
        };
        match arg.as_str() {
            "--stats" => o.stats_path = Some(grab("--stats")?),
            "--seed" => {
                o.seed = Some(
                    grab("--seed")?
                        .parse()
                        .map_err(|_| "--seed expects an integer".to_string())?,
                )
            }
            "--max-trials" => {
                o.max_trials = grab("--max-trials")?
                    .parse()
                    .map_err(|_| "--max-trials expects an integer".to_string())?
            }
            "--randomized" => {
                let v = grab("--randomized")?;
                if v != "restrict4" && v != "pairs" {
                    return Err("--randomized expects restrict4 or pairs".into());
                }
                o.randomized = Some(v);
            }
            "--parallel" => o.parallel = true,
            "--n" => {
                o.n = grab("--n")?
                    .parse()
                    .map_err(|_| "--n expects an integer".to_string())?
            }
            "--density" => {
                o.density = grab("--density")?
                    .parse()
                    .map_err(|_| "--density expects a number".to_string())?
            }
            "--count" => {
                o.count = grab("--count")?
                    .parse()
                    .map_err(|_| "--count expects an integer".to_string())?
            }
            "--k" => {
                o.k = grab("--k")?
                    .parse()
                    .map_err(|_| "--k expects an integer".to_string())?
            }
            "--out" => o.out = Some(grab("--out")?),
            other if other.starts_with("--") => return Err(format!("unknown flag {other}")),
            other => o.positional.push(other.to_string()),
        }
    }
    Ok(o)
}

const USAGE: &str = "\
usage: trichrome <command> ...

commands:
  solve csp|color|listcolor|edgecolor|sat <file>
        [--stats <file>] [--seed N] [--max-trials N]
        [--randomized restrict4|pairs] [--parallel]
  oracle csp|color|listcolor|edgecolor|sat <file>
  translate csp|color|listcolor|edgecolor|sat <file>
  workfactor <r1> <r2> ...
  epsilon
  generate csp|csp4|graph|regular|subcubic|cnf
        [--n N] [--density D] [--k K] [--seed S] [--out FILE]
  bench csp|csp4|color|edgecolor|sat
        [--n N] [--density D] [--count C] [--seed S] [--stats FILE] [--parallel]

exit codes: 0 solution found, 1 unsatisfiable, 2 unknown, 64 usage/parse error
environment: TRICHROME_SEED is the fallback when --seed is absent";

pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!("{USAGE}");
            EXIT_USAGE
        }
    }
}

fn dispatch(args: &[String]) -> Result<i32, String> {
    let Some(command) = args.first() else {
        return Err("missing command".into());
    };
    let opts = parse_options(&args[1..])?;
    match command.as_str() {
        "solve" => cmd_solve(&opts),
        "oracle" => cmd_oracle(&opts),
        "translate" => cmd_translate(&opts),
        "workfactor" => cmd_workfactor(&opts),
        "epsilon" => cmd_epsilon(&opts),
        "generate" => cmd_generate(&opts),
        "bench" => cmd_bench(&opts),
        other => Err(format!("unknown command `{other}`")),
    }
}

fn read_file(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), String> {
    match path {
        None => {
            say(content);
            Ok(())
        }
        Some(p) => std::fs::write(p, content).map_err(|e| format!("cannot write {p}: {e}")),
    }
}

fn emit_report(opts: &Options, report: &Report) -> Result<(), String> {
    if let Some(path) = &opts.stats_path {
        std::fs::write(path, report.render()).map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    Ok(())
}

/// Parses a DIMACS graph with optional `l <v> <k> <colors...>` list lines;
/// vertices without a list default to {1, 2, 3}.
fn parse_listcolor(text: &str) -> Result<(Graph, Vec<Vec<Color>>), String> {
    let (g, extra) = parse_dimacs_with_extensions(text, &["l"]).map_err(|e| e.to_string())?;
    let mut lists = vec![vec![1u32, 2, 3]; g.vertex_count()];
    for (_, toks) in extra {
        if toks.len() < 2 {
            return Err("expected `l <v> <k> <colors...>`".into());
        }
        let v: usize = toks[0].parse().map_err(|_| "bad vertex in l line".to_string())?;
        let k: usize = toks[1].parse().map_err(|_| "bad count in l line".to_string())?;
        if v == 0 || v > g.vertex_count() {
            return Err(format!("l line vertex {v} out of range"));
        }
        if toks.len() != 2 + k {
            return Err(format!("l line for vertex {v} expects {k} colors"));
        }
        let mut colors = Vec::with_capacity(k);
        for t in &toks[2..] {
            colors.push(t.parse().map_err(|_| "bad color in l line".to_string())?);
        }
        if colors.len() > 3 {
            return Err(format!("vertex {v} lists more than three colors"));
        }
        lists[v - 1] = colors;
    }
    Ok((g, lists))
}

fn render_assignment(a: &Assignment) -> String {
    let mut out = String::new();
    for (v, c) in a.iter() {
        let _ = writeln!(out, "v {} {}", v.0 + 1, c);
    }
    out
}

fn render_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (&v, &color) in c {
        let _ = writeln!(out, "{} {}", v + 1, color);
    }
    out
}

fn render_edge_coloring(c: &EdgeColoring) -> String {
    let mut out = String::new();
    for (&(u, v), &color) in c {
        let _ = writeln!(out, "{} {} {}", u + 1, v + 1, color);
    }
    out
}

fn render_model(model: &[bool]) -> String {
    let mut out = String::from("v");
    for (i, &b) in model.iter().enumerate() {
        let lit = if b { i as i64 + 1 } else { -(i as i64 + 1) };
        let _ = write!(out, " {lit}");
    }
    out.push_str(" 0\n");
    out
}

fn cmd_solve(opts: &Options) -> Result<i32, String> {
    let [kind, path] = opts.positional.as_slice() else {
        return Err("solve expects `solve <kind> <file>`".into());
    };
    let text = read_file(path)?;
    let started = Instant::now();
    let mut report = Report::default();
    report.push("kind", format!("solve.{kind}"));
    report.push("instance", path);

    let code = match kind.as_str() {
        "csp" => {
            let inst = parse_instance(&text).map_err(|e| e.to_string())?;
            report.push("size", format!("{:.6}", if inst.max_domain() <= 4 { inst.size() } else { f64::NAN }));
            match &opts.randomized {
                None => {
                    if inst.max_domain() > 4 {
                        return Err(format!(
                            "instance has {}-color domains; use --randomized restrict4 or pairs",
                            inst.max_domain()
                        ));
                    }
                    let (solution, stats) = solve(&inst);
                    report.add_search_stats(&stats);
                    report.push("csp_base", format!("{:.6}", derived_constants().csp_base));
                    finish_csp_solution(&inst, solution, &mut report)
                }
                Some(mode) => {
                    let policy = TrialPolicy::new(opts.max_trials, opts.seed(), 1e-3);
                    let verdict = run_randomized(&inst, mode, &policy, opts.parallel)
                        .map_err(|e| e.to_string())?;
                    report.push("randomized", mode);
                    report.push("max_trials", policy.max_trials);
                    report.push("seed", policy.seed);
                    match verdict {
                        RandomVerdict::Sat(a) => {
                            report.push("verdict", "SAT");
                            sayln("s SAT");
                            say(render_assignment(&a));
                            EXIT_SAT
                        }
                        RandomVerdict::UnsatLikely { trials, residual } => {
                            report.push("verdict", "UNSAT-likely");
                            report.push("trials", trials);
                            report.push("residual", format!("{residual:.3e}"));
                            sayln(format!("s UNSAT-likely trials={trials} residual={residual:.3e}"));
                            EXIT_UNSAT
                        }
                        RandomVerdict::Unknown { trials, residual } => {
                            report.push("verdict", "UNKNOWN");
                            report.push("trials", trials);
                            report.push("residual", format!("{residual:.3e}"));
                            sayln(format!("s UNKNOWN trials={trials} residual={residual:.3e}"));
                            EXIT_UNKNOWN
                        }
                    }
                }
            }
        }
        "color" => {
            let g = crate::graph::parse_dimacs(&text).map_err(|e| e.to_string())?;
            let (coloring, stats) = three_color(&g);
            report.push("n", g.vertex_count());
            report.push("m", g.edge_count());
            report.push("degree3_branchings", stats.degree3_branchings);
            report.push("enumerations", stats.enumerations);
            report.push(
                "vertex_coloring_base",
                format!("{:.6}", derived_constants().vertex_coloring_base),
            );
            for (i, acc) in stats.covers.iter().enumerate() {
                report.push(
                    &format!("cover.{i}.predicted_base"),
                    format!("{:.6}", acc.predicted_base),
                );
            }
            report.add_search_stats(&stats.csp);
            match coloring {
                Some(c) => {
                    report.push("verdict", "SAT");
                    sayln("s SAT");
                    say(render_coloring(&c));
                    EXIT_SAT
                }
                None => {
                    report.push("verdict", "UNSAT");
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "listcolor" => {
            let (g, lists) = parse_listcolor(&text)?;
            let inst = crate::csp::from_graph_coloring(&g, &lists, Default::default())
                .map_err(|e| e.to_string())?;
            let (solution, stats) = solve(&inst);
            report.add_search_stats(&stats);
            match solution {
                Some(a) => {
                    report.push("verdict", "SAT");
                    sayln("s SAT");
                    let coloring: Coloring =
                        a.iter().map(|(v, c)| (v.0, c)).collect();
                    say(render_coloring(&coloring));
                    EXIT_SAT
                }
                None => {
                    report.push("verdict", "UNSAT");
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "edgecolor" => {
            let inst = parse_edge_instance(&text).map_err(|e| e.to_string())?;
            let (coloring, stats) = solve_edge_instance(&inst);
            report.push("m3", stats.m3);
            report.push("m4", stats.m4);
            report.push("splices_selected", stats.splices_selected);
            report.push("splice_target", format!("{:.3}", stats.splice_target));
            report.push("residues_solved", stats.residues_solved);
            report.add_search_stats(&stats.csp);
            match coloring {
                Some(c) => {
                    report.push("verdict", "SAT");
                    sayln("s SAT");
                    say(render_edge_coloring(&c));
                    EXIT_SAT
                }
                None => {
                    report.push("verdict", "UNSAT");
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "sat" => {
            let f = parse_dimacs_cnf(&text).map_err(|e| e.to_string())?;
            let (model, stats) = solve_3sat(&f);
            report.push("vars", f.num_vars());
            report.push("three_clauses", stats.three_clauses);
            report.push("translated_vars", stats.translated_vars);
            report.add_search_stats(&stats.csp);
            match model {
                Some(m) => {
                    report.push("verdict", "SAT");
                    sayln("s SATISFIABLE");
                    say(render_model(&m));
                    EXIT_SAT
                }
                None => {
                    report.push("verdict", "UNSAT");
                    sayln("s UNSATISFIABLE");
                    EXIT_UNSAT
                }
            }
        }
        other => return Err(format!("unknown solve kind `{other}`")),
    };
    report.push("wall_ms", format!("{:.3}", started.elapsed().as_secs_f64() * 1e3));
    emit_report(opts, &report)?;
    Ok(code)
}

fn finish_csp_solution(
    inst: &CspInstance,
    solution: Option<Assignment>,
    report: &mut Report,
) -> i32 {
    match solution {
        Some(a) => {
            debug_assert_eq!(inst.is_solution(&a), Ok(true));
            report.push("verdict", "SAT");
            sayln("s SAT");
            say(render_assignment(&a));
            EXIT_SAT
        }
        None => {
            report.push("verdict", "UNSAT");
            sayln("s UNSAT");
            EXIT_UNSAT
        }
    }
}

/// Randomized solve with optional windowed parallel trials. First success
/// by trial index wins, so the parallel mode reproduces the sequential
/// verdict bit for bit.
fn run_randomized(
    inst: &CspInstance,
    mode: &str,
    policy: &TrialPolicy,
    parallel: bool,
) -> Result<RandomVerdict, crate::csp::CspError> {
    if !parallel {
        return match mode {
            "restrict4" => solve_random_restrict4(inst, policy),
            _ => solve_random_pairs(inst, policy),
        };
    }
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(4)
        .min(16) as u64;
    if mode == "restrict4" {
        let d = inst.max_domain();
        if d <= 4 {
            return solve_random_restrict4(inst, policy);
        }
    }
    let mut t = 0u64;
    while t < policy.max_trials {
        let window = threads.min(policy.max_trials - t);
        let hits: Vec<Option<Assignment>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..window)
                .map(|w| {
                    let trial = t + w;
                    scope.spawn(move || match mode {
                        "restrict4" => crate::randsolver::restrict4_trial(inst, policy.seed, trial),
                        _ => crate::randsolver::pairs_trial(inst, policy.seed, trial),
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for a in hits.into_iter().flatten() {
            if inst.is_solution(&a)? {
                return Ok(RandomVerdict::Sat(a));
            }
        }
        t += window;
    }
    // No success: delegate the residual computation to the sequential
    // path with a single-trial... the bound only depends on the counts.
    let keep = if mode == "restrict4" { 4 } else { 2 };
    let p: f64 = inst
        .var_ids()
        .map(|v| {
            let k = inst.domain(v).unwrap().len();
            if k <= keep {
                1.0
            } else {
                keep as f64 / k as f64
            }
        })
        .product();
    let residual = (1.0 - p).powf(policy.max_trials as f64);
    Ok(if residual <= policy.confidence {
        RandomVerdict::UnsatLikely {
            trials: policy.max_trials,
            residual,
        }
    } else {
        RandomVerdict::Unknown {
            trials: policy.max_trials,
            residual,
        }
    })
}

fn cmd_oracle(opts: &Options) -> Result<i32, String> {
    let [kind, path] = opts.positional.as_slice() else {
        return Err("oracle expects `oracle <kind> <file>`".into());
    };
    let text = read_file(path)?;
    let code = match kind.as_str() {
        "csp" => {
            let inst = parse_instance(&text).map_err(|e| e.to_string())?;
            match inst.brute_force_solve() {
                Some(a) => {
                    sayln("s SAT");
                    say(render_assignment(&a));
                    EXIT_SAT
                }
                None => {
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "color" => {
            let g = crate::graph::parse_dimacs(&text).map_err(|e| e.to_string())?;
            match brute_force_3color(&g) {
                Some(c) => {
                    sayln("s SAT");
                    say(render_coloring(&c));
                    EXIT_SAT
                }
                None => {
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "listcolor" => {
            let (g, lists) = parse_listcolor(&text)?;
            let inst = crate::csp::from_graph_coloring(&g, &lists, Default::default())
                .map_err(|e| e.to_string())?;
            match inst.brute_force_solve() {
                Some(a) => {
                    sayln("s SAT");
                    let coloring: Coloring = a.iter().map(|(v, c)| (v.0, c)).collect();
                    say(render_coloring(&coloring));
                    EXIT_SAT
                }
                None => {
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "edgecolor" => {
            let inst = parse_edge_instance(&text).map_err(|e| e.to_string())?;
            match brute_force_edge_coloring(&inst) {
                Some(c) => {
                    sayln("s SAT");
                    say(render_edge_coloring(&c));
                    EXIT_SAT
                }
                None => {
                    sayln("s UNSAT");
                    EXIT_UNSAT
                }
            }
        }
        "sat" => {
            let f = parse_dimacs_cnf(&text).map_err(|e| e.to_string())?;
            match brute_force_sat(&f) {
                Some(m) => {
                    sayln("s SATISFIABLE");
                    say(render_model(&m));
                    EXIT_SAT
                }
                None => {
                    sayln("s UNSATISFIABLE");
                    EXIT_UNSAT
                }
            }
        }
        other => return Err(format!("unknown oracle kind `{other}`")),
    };
    Ok(code)
}

fn cmd_translate(opts: &Options) -> Result<i32, String> {
    let [kind, path] = opts.positional.as_slice() else {
        return Err("translate expects `translate <kind> <file>`".into());
    };
    let text = read_file(path)?;
    let csp = match kind.as_str() {
        "csp" => parse_instance(&text).map_err(|e| e.to_string())?,
        "color" | "listcolor" => {
            let (g, lists) = if kind == "color" {
                let g = crate::graph::parse_dimacs(&text).map_err(|e| e.to_string())?;
                let lists = vec![vec![1, 2, 3]; g.vertex_count()];
                (g, lists)
            } else {
                parse_listcolor(&text)?
            };
            crate::csp::from_graph_coloring(&g, &lists, Default::default())
                .map_err(|e| e.to_string())?
        }
        "edgecolor" => {
            let inst = parse_edge_instance(&text).map_err(|e| e.to_string())?;
            edge_line_csp(&inst)
        }
        "sat" => {
            let f = parse_dimacs_cnf(&text).map_err(|e| e.to_string())?;
            translate_3sat(&f).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown translate kind `{other}`")),
    };
    write_output(opts.out.as_deref(), &write_instance(&csp))?;
    Ok(EXIT_SAT)
}

/// Line translation of an edge instance: one three-color variable per
/// edge class, same-color forbidden for adjacent classes and constrained
/// pairs.
fn edge_line_csp(inst: &EdgeInstance) -> CspInstance {
    let ids: Vec<_> = inst.class_ids().collect();
    let index: std::collections::BTreeMap<_, usize> =
        ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &id in &ids {
        for other in inst.adjacent_classes(id) {
            let (a, b) = (index[&id], index[&other]);
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let domains = vec![vec![1u32, 2, 3]; ids.len()];
    let mut constraints = Vec::new();
    for (a, b) in pairs {
        for c in 1..=3u32 {
            constraints.push(((a, c), (b, c)));
        }
    }
    CspInstance::build(&domains, &constraints, Default::default()).unwrap()
}

fn cmd_workfactor(opts: &Options) -> Result<i32, String> {
    if opts.positional.is_empty() {
        return Err("workfactor expects one or more decrements".into());
    }
    let rs: Result<Vec<f64>, _> = opts.positional.iter().map(|s| s.parse::<f64>()).collect();
    let rs = rs.map_err(|_| "decrements must be numbers".to_string())?;
    let value = work_factor_of(&rs).map_err(|e| e.to_string())?;
    sayln(format!("{value:.5}"));
    Ok(EXIT_SAT)
}

fn cmd_epsilon(opts: &Options) -> Result<i32, String> {
    let (eps, lambda) = optimize_epsilon();
    sayln(format!("epsilon {eps:.6}"));
    sayln(format!("lambda {lambda:.5}"));
    let mut report = Report::default();
    report.push("kind", "epsilon");
    report.push("epsilon", format!("{eps:.6}"));
    report.push("lambda", format!("{lambda:.6}"));
    for (name, value) in derived_constants().rows() {
        sayln(format!("{name} {value:.5}"));
        report.push(&name, format!("{value:.6}"));
    }
    emit_report(opts, &report)?;
    Ok(EXIT_SAT)
}

fn cmd_generate(opts: &Options) -> Result<i32, String> {
    let [kind] = opts.positional.as_slice() else {
        return Err("generate expects `generate <kind>`".into());
    };
    let seed = opts.seed();
    let content = match kind.as_str() {
        "csp" => write_instance(&gen::random_csp(opts.n, 3, opts.density, seed)),
        "csp4" => write_instance(&gen::random_csp(opts.n, 4, opts.density, seed)),
        "graph" => write_dimacs(&gen::random_graph(opts.n, opts.density.min(1.0), seed)),
        "regular" => {
            let g = gen::k_regular_graph(opts.n, opts.k, seed)
                .ok_or_else(|| format!("no simple {}-regular graph found for n={}", opts.k, opts.n))?;
            write_dimacs(&g)
        }
        "subcubic" => write_dimacs(&gen::random_subcubic(opts.n, 2 * opts.n, seed)),
        "cnf" => {
            let t = (opts.density * opts.n as f64).round() as usize;
            write_dimacs_cnf(&gen::random_3cnf(opts.n.max(3), t, 0, seed))
        }
        other => return Err(format!("unknown generate kind `{other}`")),
    };
    write_output(opts.out.as_deref(), &content)?;
    Ok(EXIT_SAT)
}

fn cmd_bench(opts: &Options) -> Result<i32, String> {
    let [kind] = opts.positional.as_slice() else {
        return Err("bench expects `bench <kind>`".into());
    };
    let report = bench(kind, opts.n, opts.density, opts.count, opts.seed(), opts.parallel)?;
    say(report.render());
    emit_report(opts, &report)?;
    Ok(EXIT_SAT)
}

/// Runs the solver (and the oracle, where the size permits) over a
/// generated corpus, aggregating verdict agreement, rule triggers, and
/// effective work factors against the analytic bases.
pub fn bench(
    kind: &str,
    n: usize,
    density: f64,
    count: usize,
    seed: u64,
    parallel: bool,
) -> Result<Report, String> {
    let mut report = Report::default();
    report.push("kind", format!("bench.{kind}"));
    report.push("n", n);
    report.push("density", format!("{density:.3}"));
    report.push("count", count);
    report.push("seed", seed);
    let started = Instant::now();
    match kind {
        "csp" | "csp4" => {
            let dmax = if kind == "csp4" { 4 } else { 3 };
            let run_one = |i: usize| {
                let inst = gen::random_csp(n, dmax, density, seed.wrapping_add(i as u64));
                let (solution, stats) = solve(&inst);
                let oracle = if n <= 8 {
                    Some(inst.brute_force_solve().is_some())
                } else {
                    None
                };
                (solution.is_some(), stats, oracle)
            };
            let results: Vec<(bool, SearchStats, Option<bool>)> = if parallel {
                std::thread::scope(|scope| {
                    let handles: Vec<_> =
                        (0..count).map(|i| scope.spawn(move || run_one(i))).collect();
                    handles.into_iter().map(|h| h.join().unwrap()).collect()
                })
            } else {
                (0..count).map(run_one).collect()
            };
            let mut agree = 0usize;
            let mut checked = 0usize;
            let mut sat = 0usize;
            let mut total = SearchStats::default();
            let mut factor_sum = 0.0;
            let mut factor_max = 0.0f64;
            for (is_sat, stats, oracle) in &results {
                if *is_sat {
                    sat += 1;
                }
                if let Some(want) = oracle {
                    checked += 1;
                    if want == is_sat {
                        agree += 1;
                    }
                }
                let f = stats.effective_work_factor();
                factor_sum += f;
                factor_max = factor_max.max(f);
                total.merge(stats);
            }
            report.push("sat_count", sat);
            report.push("oracle_checked", checked);
            report.push("oracle_agreements", agree);
            report.push(
                "effective_work_factor_mean",
                format!("{:.6}", factor_sum / count.max(1) as f64),
            );
            report.push("effective_work_factor_max", format!("{factor_max:.6}"));
            report.push("csp_base", format!("{:.6}", derived_constants().csp_base));
            report.add_search_stats(&total);
        }
        "color" => {
            let mut agree = 0;
            let mut checked = 0;
            let mut sat = 0;
            let base = derived_constants().vertex_coloring_base;
            let mut predicted = Vec::new();
            for i in 0..count {
                let g = gen::random_graph(n, density.min(1.0), seed.wrapping_add(i as u64));
                let (coloring, stats) = three_color(&g);
                if coloring.is_some() {
                    sat += 1;
                }
                if n <= 10 {
                    checked += 1;
                    if coloring.is_some() == brute_force_3color(&g).is_some() {
                        agree += 1;
                    }
                }
                predicted.extend(stats.covers.iter().map(|c| c.predicted_base));
            }
            report.push("sat_count", sat);
            report.push("oracle_checked", checked);
            report.push("oracle_agreements", agree);
            report.push("vertex_coloring_base", format!("{base:.6}"));
            if !predicted.is_empty() {
                let mean = predicted.iter().sum::<f64>() / predicted.len() as f64;
                report.push("cover_predicted_base_mean", format!("{mean:.6}"));
            }
        }
        "edgecolor" => {
            let mut agree = 0;
            let mut checked = 0;
            let mut sat = 0;
            for i in 0..count {
                let g = gen::random_subcubic(n, (density * n as f64 * 2.0) as usize, seed.wrapping_add(i as u64));
                let inst = EdgeInstance::from_graph(&g);
                let (coloring, _) = solve_edge_instance(&inst);
                if coloring.is_some() {
                    sat += 1;
                }
                if n <= 10 {
                    checked += 1;
                    if coloring.is_some() == brute_force_edge_coloring(&inst).is_some() {
                        agree += 1;
                    }
                }
            }
            report.push("sat_count", sat);
            report.push("oracle_checked", checked);
            report.push("oracle_agreements", agree);
            report.push(
                "two_to_half",
                format!("{:.6}", 2f64.sqrt()),
            );
        }
        "sat" => {
            let mut agree = 0;
            let mut checked = 0;
            let mut sat = 0;
            let vars = n.max(3);
            let t = (density * vars as f64).round() as usize;
            for i in 0..count {
                let f = gen::random_3cnf(vars, t, t / 2, seed.wrapping_add(i as u64));
                let (model, _) = solve_3sat(&f);
                if model.is_some() {
                    sat += 1;
                }
                if vars <= 6 {
                    checked += 1;
                    if model.is_some() == brute_force_sat(&f).is_some() {
                        agree += 1;
                    }
                }
            }
            report.push("sat_count", sat);
            report.push("oracle_checked", checked);
            report.push("oracle_agreements", agree);
            report.push("csp_base", format!("{:.6}", derived_constants().csp_base));
        }
        other => return Err(format!("unknown bench kind `{other}`")),
    }
    report.push("wall_ms", format!("{:.3}", started.elapsed().as_secs_f64() * 1e3));
    Ok(report)
}
