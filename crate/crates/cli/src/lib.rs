//! Command-line front end: `check`, `parse`, `chart`, `oracle` and `bench`.
//!
//! [`run`] does all the work and returns the exit code with the text that
//! belongs on stdout and stderr, so the binary is a thin wrapper.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use idlp::{
    enumerate_language, load_grammar, oracle_recognize, Bounds, Grammar, Outcome, ParseOptions, ParseTree, Restrictor,
    Status, TreeChild, TreeNode,
};
use serde::Serialize;
use serde_json::json;

/// Directories searched for grammar files given by a relative name that
/// does not exist from the working directory.
pub const GRAMMAR_PATH_VAR: &str = "IDLP_GRAMMAR_PATH";

pub const EXIT_ACCEPTED: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_PENDING: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "idlp",
    version,
    about = "Typed unification ID/LP grammars: check, parse and inspect"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a grammar and summarize it.
    Check(CheckArgs),
    /// Parse a sentence and print the result and its trees.
    Parse(RunArgs),
    /// Parse a sentence and dump every stored edge.
    Chart(RunArgs),
    /// Decide a sentence by exhaustive derivation and list the language.
    Oracle(OracleArgs),
    /// Parse a sentence and report edge counters and wall time.
    Bench(RunArgs),
}

#[derive(Args, Debug)]
struct GrammarArgs {
    /// Grammar file.
    grammar: PathBuf,
    /// Close the LP rules under transitivity before use.
    #[arg(long)]
    lp_closure: bool,
    /// Restrictor paths replacing the grammar's, e.g. `F.F1,F2`; `.` keeps
    /// only the root.
    #[arg(long, value_name = "PATHS")]
    restrict: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    grammar: GrammarArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    grammar: GrammarArgs,
    /// Words of the sentence.
    #[arg(required = true, num_args = 1..)]
    words: Vec<String>,
    /// Do not reject daughters that a remaining daughter must precede.
    #[arg(long)]
    no_rhs_filter: bool,
    /// Keep edges subsumed by stored ones.
    #[arg(long)]
    no_dedup: bool,
    /// Number edges and show how each was made.
    #[arg(long)]
    trace: bool,
    /// Seed all words up front instead of predicting lexical edges.
    #[arg(long)]
    scan_first: bool,
    /// Process the agenda last in, first out.
    #[arg(long)]
    lifo: bool,
    /// Give up after this many edges.
    #[arg(long, value_name = "N")]
    max_edges: Option<usize>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    grammar: GrammarArgs,
    #[arg(required = true, num_args = 1..)]
    words: Vec<String>,
    /// Rule applications allowed on a root-to-leaf path.
    #[arg(long, default_value_t = Bounds::default().max_depth)]
    max_depth: usize,
    /// Longest sentence listed in the language.
    #[arg(long, default_value_t = Bounds::default().max_len)]
    max_len: usize,
    /// Widest rule used.
    #[arg(long, default_value_t = Bounds::default().max_width)]
    max_width: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// JSON on one line.
    Structured,
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn error(msg: impl Into<String>) -> Output {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Output {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Accepted => EXIT_ACCEPTED,
        Status::AcceptedPending => EXIT_PENDING,
        Status::Rejected => EXIT_REJECTED,
    }
}

/// Runs the command line `args`, whose first item is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output::error(text)
            } else {
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let search = std::env::var_os(GRAMMAR_PATH_VAR);
    match execute(cli.command, search.as_deref()) {
        Ok(out) => out,
        Err(msg) => Output::error(msg),
    }
}

fn execute(cmd: Command, search: Option<&std::ffi::OsStr>) -> Result<Output, String> {
    match cmd {
        Command::Check(a) => {
            let g = load(&a.grammar, search)?;
            Ok(check(&g, a.grammar.format))
        }
        Command::Parse(a) => {
            let g = load(&a.grammar, search)?;
            let out = parse(&g, &a)?;
            Ok(report_parse(&g, &out, a.grammar.format))
        }
        Command::Chart(a) => {
            let g = load(&a.grammar, search)?;
            let out = parse(&g, &a)?;
            Ok(report_chart(&g, &out, a.grammar.format, a.trace))
        }
        Command::Bench(a) => {
            let g = load(&a.grammar, search)?;
            let t = Instant::now();
            let out = parse(&g, &a)?;
            let micros = t.elapsed().as_micros();
            Ok(report_bench(&out, micros, a.grammar.format))
        }
        Command::Oracle(a) => {
            let g = load(&a.grammar, search)?;
            oracle(&g, &a)
        }
    }
}

/// Finds `path` as given or, if relative and missing, in the search path.
fn locate(path: &Path, search: Option<&std::ffi::OsStr>) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    if let Some(dirs) = search {
        for dir in std::env::split_paths(dirs) {
            let cand = dir.join(path);
            if cand.exists() {
                return cand;
            }
        }
    }
    path.to_path_buf()
}

fn load(a: &GrammarArgs, search: Option<&std::ffi::OsStr>) -> Result<Grammar, String> {
    let path = locate(&a.grammar, search);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut g = load_grammar(&text).map_err(|e| {
        let msg = e.to_string();
        if msg.starts_with(|c: char| c.is_ascii_digit()) {
            format!("{}:{msg}", path.display())
        } else {
            format!("{}: {msg}", path.display())
        }
    })?;
    if a.lp_closure {
        g = g.with_lp_closure().map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(spec) = &a.restrict {
        g.restrictor = restrictor(&g, spec)?;
        g.explicit_restrictor = true;
    }
    Ok(g)
}

fn restrictor(g: &Grammar, spec: &str) -> Result<Restrictor, String> {
    let spec = spec.trim();
    if spec == "." || spec.is_empty() {
        return Ok(Restrictor::default());
    }
    let mut paths = Vec::new();
    for p in spec.split(',') {
        let mut path = Vec::new();
        for name in p.trim().split('.') {
            let f = g
                .sig
                .approp
                .feature(name)
                .filter(|&f| !g.sig.sys.is_system_feature(f))
                .ok_or_else(|| format!("--restrict: unknown feature `{name}`"))?;
            path.push(f);
        }
        paths.push(path);
    }
    Ok(Restrictor::new(paths))
}

fn options(a: &RunArgs) -> ParseOptions {
    let mut o = ParseOptions {
        rhs_filter: !a.no_rhs_filter,
        dedup: !a.no_dedup,
        scan_first: a.scan_first,
        ..ParseOptions::default()
    };
    if a.lifo {
        o.agenda = idlp::AgendaOrder::Lifo;
    }
    if let Some(n) = a.max_edges {
        o.max_edges = n;
    }
    o
}

fn parse(g: &Grammar, a: &RunArgs) -> Result<Outcome, String> {
    idlp::parse(g, &a.words, &options(a)).map_err(|e| e.to_string())
}

fn check(g: &Grammar, format: Format) -> Output {
    let restrictor = g.restrictor.describe(&g.sig);
    let stdout = match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "types: {}", g.sig.user_types().count());
            let _ = writeln!(s, "features: {}", g.sig.user_features().count());
            let _ = writeln!(s, "ID rules: {}", g.id_rules.len());
            let _ = writeln!(s, "lexical entries: {}", g.lexicon.len());
            let _ = writeln!(s, "empty categories: {}", g.empties.len());
            let _ = writeln!(s, "LP rules: {}", g.lp_rules.len());
            let _ = writeln!(s, "restrictor: {{{}}}", restrictor.join(", "));
            s
        }
        Format::Structured => line(&json!({
            "types": g.sig.user_types().count(),
            "features": g.sig.user_features().count(),
            "id_rules": g.id_rules.len(),
            "lexical_entries": g.lexicon.len(),
            "empty_categories": g.empties.len(),
            "lp_rules": g.lp_rules.len(),
            "restrictor": restrictor,
        })),
    };
    Output {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

fn line(v: &serde_json::Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TreeJson {
    label: String,
    start: usize,
    end: usize,
    children: Vec<ChildJson>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum ChildJson {
    Node(TreeJson),
    Word { word: String },
}

fn tree_json(g: &Grammar, t: &ParseTree, n: &TreeNode) -> TreeJson {
    TreeJson {
        label: idlp::serialize_avm(&g.sig, &t.label_graph(n)),
        start: n.span.0,
        end: n.span.1,
        children: n
            .children
            .iter()
            .map(|c| match c {
                TreeChild::Node(d) => ChildJson::Node(tree_json(g, t, d)),
                TreeChild::Word(w) => ChildJson::Word { word: w.clone() },
            })
            .collect(),
    }
}

const PENDING_NOTE: &str =
    "warning: some LP checks were still open at the end of the parse; the result depends on information the grammar never supplied. Report this to the grammar writer.";

fn report_parse(g: &Grammar, out: &Outcome, format: Format) -> Output {
    let pending = out.pending(&g.sig).len();
    let mut stderr = String::new();
    if out.chart.truncated {
        stderr.push_str("warning: edge limit reached; the chart is incomplete\n");
    }
    if out.status == Status::AcceptedPending {
        stderr.push_str(PENDING_NOTE);
        stderr.push('\n');
    }
    let stdout = match format {
        Format::Text => {
            let mut s = format!("status: {}\n", out.status.as_str());
            for (i, t) in out.trees.iter().enumerate() {
                let _ = writeln!(s, "tree {}:", i + 1);
                s.push_str(&t.render(&g.sig));
            }
            if pending > 0 {
                let _ = writeln!(s, "pending witnesses: {pending}");
            }
            s
        }
        Format::Structured => {
            let trees: Vec<TreeJson> = out.trees.iter().map(|t| tree_json(g, t, &t.root)).collect();
            line(&json!({
                "status": out.status,
                "trees": trees,
                "pending_witnesses": pending,
                "truncated": out.chart.truncated,
            }))
        }
    };
    Output {
        code: exit_code(out.status),
        stdout,
        stderr,
    }
}

fn report_chart(g: &Grammar, out: &Outcome, format: Format, trace: bool) -> Output {
    let stdout = match format {
        Format::Text => {
            let mut s = out.chart.dump(&g.sig, trace);
            let _ = writeln!(s, "status: {}", out.status.as_str());
            s
        }
        Format::Structured => {
            let edges: Vec<_> = out.chart.stored.iter().map(|&id| out.chart.view(&g.sig, id)).collect();
            line(&json!({
                "words": out.chart.words,
                "status": out.status,
                "edges": edges,
                "counters": out.chart.counters,
                "truncated": out.chart.truncated,
            }))
        }
    };
    Output {
        code: exit_code(out.status),
        stdout,
        stderr: String::new(),
    }
}

fn report_bench(out: &Outcome, micros: u128, format: Format) -> Output {
    let c = &out.chart.counters;
    let stdout = match format {
        Format::Text => {
            let mut s = format!("status: {}\n", out.status.as_str());
            let rows = [
                ("enqueued", c.enqueued),
                ("processed", c.processed),
                ("stored", c.stored),
                ("rejected (subsumed)", c.rejected_subsumed),
                ("rejected (unproductive)", c.rejected_unproductive),
                ("rejected (unification)", c.rejected_unification),
                ("rejected (store union)", c.rejected_store_union),
                ("rejected (store violation)", c.rejected_store_violation),
                ("rejected (LP violation)", c.rejected_lp_violation),
                ("rejected (precedence filter)", c.rejected_precede_filter),
                ("memo hits", c.memo_hits),
                ("failed predictions", c.failed_predictions),
            ];
            for (name, v) in rows {
                let _ = writeln!(s, "{name}: {v}");
            }
            let _ = writeln!(s, "time: {micros} us");
            s
        }
        Format::Structured => line(&json!({
            "status": out.status,
            "counters": c,
            "micros": micros,
            "truncated": out.chart.truncated,
        })),
    };
    Output {
        code: exit_code(out.status),
        stdout,
        stderr: String::new(),
    }
}

fn oracle(g: &Grammar, a: &OracleArgs) -> Result<Output, String> {
    let bounds = Bounds {
        max_depth: a.max_depth,
        max_width: a.max_width,
        max_len: a.max_len,
    };
    let r = oracle_recognize(g, &a.words, &bounds).map_err(|e| e.to_string())?;
    let lang = enumerate_language(g, &bounds);
    let sentences: Vec<String> = lang.sentences.iter().map(|s| s.join(" ")).collect();
    let bound_hit = r.bound_hit || lang.bound_hit;
    let stdout = match a.grammar.format {
        Format::Text => {
            let mut s = format!("accepted: {}\n", r.accepted);
            let _ = writeln!(s, "trees: {}", r.trees.len());
            let _ = writeln!(s, "language up to {} words:", bounds.max_len);
            for w in &sentences {
                let _ = writeln!(s, "  {w}");
            }
            if bound_hit {
                s.push_str("note: some derivations were cut by the depth or width bound\n");
            }
            s
        }
        Format::Structured => line(&json!({
            "accepted": r.accepted,
            "trees": r.trees.len(),
            "language": sentences,
            "bound_hit": bound_hit,
        })),
    };
    Ok(Output {
        code: if r.accepted { EXIT_ACCEPTED } else { EXIT_REJECTED },
        stdout,
        stderr: String::new(),
    })
}
