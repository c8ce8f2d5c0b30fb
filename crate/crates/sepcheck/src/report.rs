//! Batch driver and report rendering for the command-line front end.
//!
//! Four run modes over the same parsed input: `check` prints one verdict
//! line per declaration, `explain` adds the derivation trace, `oracle`
//! validates accepted signatures against the ground semantics, and
//! `diff` compares against the expansion-based check. Text and JSON
//! outputs carry the same verdict and mode content, and both are
//! deterministic for a given input.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::blocks::{check_program, check_program_traced, BlockReport, BlockResult};
use crate::checker::TraceLog;
use crate::diag::Diagnostic;
use crate::legacy::{diff_report, DiffEntry, Fuel};
use crate::oracle::{semantic_signature_check, Budget, GroundEnv, SemanticVerdict};
use crate::parser::{parse_program, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    #[default]
    Check,
    Explain,
    Oracle,
    Diff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoolChoice {
    Small,
    #[default]
    Default,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub mode: RunMode,
    pub format: OutputFormat,
    pub oracle_depth: Option<usize>,
    pub oracle_pool: PoolChoice,
    pub legacy_fuel: Option<u32>,
}

impl RunConfig {
    fn budget(&self) -> Budget {
        let mut budget = match self.oracle_pool {
            PoolChoice::Default => Budget::default_budget(),
            PoolChoice::Small => Budget::small_pool_budget(),
        };
        if let Some(depth) = self.oracle_depth {
            budget.value_depth = depth;
        }
        budget
    }

    fn fuel(&self) -> Fuel {
        self.legacy_fuel.map(Fuel).unwrap_or_default()
    }
}

/// Exit status: 0 all accepted (and no oracle failure), 1 any rejection
/// or oracle failure, 2 parse/config error.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if cfg.inputs.is_empty() {
        let _ = writeln!(err, "error: no input files");
        return 2;
    }
    let mut exit = 0i32;
    let mut json_blocks: Vec<Value> = Vec::new();
    let mut json_diffs: Vec<Value> = Vec::new();
    for path in &cfg.inputs {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "{}: {e}", path.display());
                exit = 2;
                continue;
            }
        };
        let program = match parse_program(&text) {
            Ok(p) => p,
            Err(e) => {
                let _ = writeln!(err, "{}:{e}", path.display());
                exit = 2;
                continue;
            }
        };
        let code = match cfg.format {
            OutputFormat::Text => {
                let rendered = render_text(cfg, &program);
                let _ = out.write_all(rendered.text.as_bytes());
                rendered.exit
            }
            OutputFormat::Json => {
                let rendered = render_json(cfg, &program);
                match cfg.mode {
                    RunMode::Diff => json_diffs.extend(rendered.values),
                    _ => json_blocks.extend(rendered.values),
                }
                rendered.exit
            }
        };
        if exit != 2 {
            exit = exit.max(code);
        }
    }
    if cfg.format == OutputFormat::Json {
        let doc = match cfg.mode {
            RunMode::Diff => Value::Array(json_diffs),
            _ => Value::Array(json_blocks),
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("valid json"));
    }
    exit
}

struct TextReport {
    text: String,
    exit: i32,
}

struct JsonReport {
    values: Vec<Value>,
    exit: i32,
}

fn signature_line(report: &BlockReport, decl_name: &str) -> String {
    match &report.result {
        BlockResult::Accepted { signature, .. } => {
            let entry = signature.get(decl_name).expect("accepted decl in signature");
            if entry.arity() == 0 {
                format!("{decl_name} : accepted")
            } else {
                format!("{decl_name}{entry} : accepted")
            }
        }
        BlockResult::Rejected { decl, diagnostic } => {
            if decl == decl_name {
                format!(
                    "{decl_name} : rejected ({} at {})",
                    diagnostic.kind.label(),
                    diagnostic.path_string()
                )
            } else {
                format!("{decl_name} : rejected (mutually recursive with {decl})")
            }
        }
    }
}

fn diagnostic_json(d: &Diagnostic) -> Value {
    json!({
        "kind": d.kind.label(),
        "path": d.path_string(),
        "message": d.kind.to_string(),
        "judgment": {
            "subject": d.judgment.subject.to_string(),
            "mode": d.judgment.mode.to_string(),
            "context": d.judgment.context.to_string(),
        },
    })
}

fn block_json(report: &BlockReport, oracle: Option<&SemanticVerdict>) -> Value {
    let decls: Vec<Value> = report
        .decls
        .iter()
        .map(|d| Value::String(d.name.clone()))
        .collect();
    let mut obj = Map::new();
    obj.insert("decls".into(), Value::Array(decls));
    match &report.result {
        BlockResult::Accepted {
            signature,
            iterations,
        } => {
            obj.insert("status".into(), json!("accepted"));
            let mut sig = Map::new();
            for d in &report.decls {
                let entry = signature.get(&d.name).expect("decl in signature");
                let params: Vec<Value> = entry
                    .params
                    .iter()
                    .map(|(v, m)| json!({"param": v.to_string(), "mode": m.to_string()}))
                    .collect();
                sig.insert(d.name.clone(), Value::Array(params));
            }
            obj.insert("signature".into(), Value::Object(sig));
            obj.insert("iterations".into(), json!(iterations));
        }
        BlockResult::Rejected { decl, diagnostic } => {
            obj.insert("status".into(), json!("rejected"));
            obj.insert("signature".into(), Value::Object(Map::new()));
            obj.insert("rejected_decl".into(), json!(decl));
            obj.insert("diagnostic".into(), diagnostic_json(diagnostic));
            obj.insert("iterations".into(), Value::Null);
        }
    }
    if let Some(verdict) = oracle {
        let mut o = Map::new();
        o.insert("verdict".into(), json!(verdict.verdict_str()));
        if let SemanticVerdict::Fails(ce) = verdict {
            o.insert(
                "counterexample".into(),
                json!({
                    "constructor": ce.constructor,
                    "instantiation": ce
                        .instantiation
                        .iter()
                        .map(|(v, t)| json!({"param": v.to_string(), "type": t.to_string()}))
                        .collect::<Vec<_>>(),
                    "float_value": ce.float_value.to_string(),
                    "non_float_value": ce.non_float_value.to_string(),
                }),
            );
        }
        obj.insert("oracle".into(), Value::Object(o));
    }
    Value::Object(obj)
}

/// Oracle verdicts for the accepted blocks of a program, threading the
/// ground environment across blocks in order.
fn oracle_verdicts(
    report: &crate::blocks::ProgramReport,
    budget: &Budget,
) -> Vec<Option<SemanticVerdict>> {
    let mut env = GroundEnv::new();
    let mut verdicts = Vec::new();
    for block in &report.blocks {
        match &block.result {
            BlockResult::Accepted { signature, .. } => {
                for d in &block.decls {
                    env.insert(d.name.clone(), d.params.clone(), d.body.clone());
                }
                verdicts.push(Some(semantic_signature_check(&env, signature, budget)));
            }
            BlockResult::Rejected { .. } => verdicts.push(None),
        }
    }
    verdicts
}

fn render_text(cfg: &RunConfig, program: &Program) -> TextReport {
    let mut text = String::new();
    let mut exit = 0;
    match cfg.mode {
        RunMode::Check | RunMode::Explain | RunMode::Oracle => {
            let (report, traces) = if cfg.mode == RunMode::Explain {
                let (r, t) = check_program_traced(program);
                (r, t)
            } else {
                (check_program(program), Vec::new())
            };
            let oracle = if cfg.mode == RunMode::Oracle {
                oracle_verdicts(&report, &cfg.budget())
            } else {
                Vec::new()
            };
            for (i, block) in report.blocks.iter().enumerate() {
                if !block.result.is_accepted() {
                    exit = 1;
                }
                for d in &block.decls {
                    let _ = writeln!(text, "{}", signature_line(block, &d.name));
                    if cfg.mode == RunMode::Explain {
                        if let Some((_, log)) =
                            traces.iter().find(|(name, _)| name == &d.name)
                        {
                            text.push_str(&log.render());
                        }
                    }
                }
                if cfg.mode == RunMode::Oracle {
                    if let Some(Some(verdict)) = oracle.get(i) {
                        let names: Vec<&str> =
                            block.decls.iter().map(|d| d.name.as_str()).collect();
                        match verdict {
                            SemanticVerdict::Fails(ce) => {
                                exit = 1;
                                let _ = writeln!(
                                    text,
                                    "oracle [{}] : fails: {ce}",
                                    names.join(", ")
                                );
                            }
                            v => {
                                let _ = writeln!(
                                    text,
                                    "oracle [{}] : {}",
                                    names.join(", "),
                                    v.verdict_str()
                                );
                            }
                        }
                    }
                }
            }
        }
        RunMode::Diff => {
            let entries = diff_report(program, cfg.fuel());
            for e in &entries {
                if !e.new_accepted {
                    exit = 1;
                }
                let _ = writeln!(text, "{}", diff_line(e));
            }
        }
    }
    TextReport { text, exit }
}

fn diff_line(e: &DiffEntry) -> String {
    format!(
        "{} : legacy {} / new {} [{}]",
        e.decl,
        e.legacy,
        if e.new_accepted { "accept" } else { "reject" },
        e.classification.label()
    )
}

fn trace_json(log: &TraceLog) -> Value {
    Value::Array(
        log.entries
            .iter()
            .map(|e| {
                json!({
                    "depth": e.depth,
                    "rule": e.rule,
                    "judgment": e.judgment,
                    "outcome": e.outcome,
                })
            })
            .collect(),
    )
}

fn render_json(cfg: &RunConfig, program: &Program) -> JsonReport {
    let mut values = Vec::new();
    let mut exit = 0;
    match cfg.mode {
        RunMode::Check | RunMode::Explain | RunMode::Oracle => {
            let (report, traces) = if cfg.mode == RunMode::Explain {
                let (r, t) = check_program_traced(program);
                (r, t)
            } else {
                (check_program(program), Vec::new())
            };
            let oracle = if cfg.mode == RunMode::Oracle {
                oracle_verdicts(&report, &cfg.budget())
            } else {
                Vec::new()
            };
            for (i, block) in report.blocks.iter().enumerate() {
                if !block.result.is_accepted() {
                    exit = 1;
                }
                let verdict = oracle.get(i).and_then(|v| v.as_ref());
                if matches!(verdict, Some(SemanticVerdict::Fails(_))) {
                    exit = 1;
                }
                let mut value = block_json(block, verdict);
                if cfg.mode == RunMode::Explain {
                    let obj = value.as_object_mut().expect("block object");
                    let mut trace_obj = Map::new();
                    for d in &block.decls {
                        if let Some((_, log)) =
                            traces.iter().find(|(name, _)| name == &d.name)
                        {
                            trace_obj.insert(d.name.clone(), trace_json(log));
                        }
                    }
                    obj.insert("trace".into(), Value::Object(trace_obj));
                }
                values.push(value);
            }
        }
        RunMode::Diff => {
            for e in diff_report(program, cfg.fuel()) {
                if !e.new_accepted {
                    exit = 1;
                }
                values.push(json!({
                    "decl": e.decl,
                    "legacy": e.legacy.to_string(),
                    "new": if e.new_accepted { "accept" } else { "reject" },
                    "classification": e.classification.label(),
                }));
            }
        }
    }
    JsonReport { values, exit }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_on(src: &str, mode: RunMode, format: OutputFormat) -> (String, i32) {
        let dir = std::env::temp_dir().join(format!(
            "sepcheck-report-test-{}-{:p}",
            std::process::id(),
            &src
        ));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("input.ml");
        std::fs::write(&path, src).unwrap();
        let cfg = RunConfig {
            inputs: vec![path],
            mode,
            format,
            ..RunConfig::default()
        };
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&cfg, &mut out, &mut err);
        (String::from_utf8(out).unwrap(), code)
    }

    #[test]
    fn check_text_prints_signature_lines() {
        let (out, code) = run_on(
            "type ('a, 'b) second = 'b",
            RunMode::Check,
            OutputFormat::Text,
        );
        assert_eq!(out, "second('a:Ind, 'b:Sep) : accepted\n");
        assert_eq!(code, 0);
    }

    #[test]
    fn rejection_exits_one() {
        let (out, code) = run_on(
            "type any = Any : 'a -> any [@@unboxed]",
            RunMode::Check,
            OutputFormat::Text,
        );
        assert!(out.starts_with("any : rejected (unguarded-existential"), "{out}");
        assert_eq!(code, 1);
    }

    #[test]
    fn json_carries_the_same_content() {
        let (out, code) = run_on(
            "type ('a, 'b) second = 'b",
            RunMode::Check,
            OutputFormat::Json,
        );
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        let block = &doc.as_array().unwrap()[0];
        assert_eq!(block["status"], "accepted");
        assert_eq!(block["iterations"], 2);
        assert_eq!(block["signature"]["second"][1]["mode"], "Sep");
    }

    #[test]
    fn parse_errors_exit_two() {
        let (_, code) = run_on("type = :::", RunMode::Check, OutputFormat::Text);
        assert_eq!(code, 2);
    }

    #[test]
    fn oracle_mode_reports_holds() {
        let (out, code) = run_on(
            "type ('a, 'b) second = 'b",
            RunMode::Oracle,
            OutputFormat::Text,
        );
        assert!(out.contains("oracle [second] : holds"), "{out}");
        assert_eq!(code, 0);
    }

    #[test]
    fn diff_mode_flags_mutual_recursion() {
        let src = "type ('a, 'r) tree =\n\
                   | Root : 'a -> ('a, int) tree\n\
                   | Inner : 'a node -> ('a, bool) tree\n\
                   and 'a node = Node : ('a, _) tree -> 'a node [@@unboxed]";
        let (out, code) = run_on(src, RunMode::Diff, OutputFormat::Text);
        let diverging: Vec<&str> = out
            .lines()
            .filter(|l| l.contains("new-accepts-legacy-rejects"))
            .collect();
        assert_eq!(diverging.len(), 1, "{out}");
        assert!(diverging[0].starts_with("node"), "{out}");
        assert_eq!(code, 0);
    }

    #[test]
    fn explain_mode_shows_rules() {
        let (out, code) = run_on(
            "type 'a t = 'a * int",
            RunMode::Explain,
            OutputFormat::Text,
        );
        assert!(out.contains("[synonym]"), "{out}");
        assert!(out.contains("[product]"), "{out}");
        assert!(out.contains("[var]"), "{out}");
        assert_eq!(code, 0);
    }

    #[test]
    fn output_is_deterministic() {
        let src = "type ('a, 'b) pair = 'a * 'b\n\
                   type u = U of (int, float) pair | V of bool\n\
                   type any = Any : 'a -> any [@@unboxed]";
        let (a, _) = run_on(src, RunMode::Check, OutputFormat::Json);
        let (b, _) = run_on(src, RunMode::Check, OutputFormat::Json);
        assert_eq!(a, b);
    }
}
