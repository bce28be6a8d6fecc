use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cube_core::error::KernelError;
use cube_core::eta_long::{eta_long, plus_translate};
use cube_core::gen::{Generator, Sample};
use cube_core::marked::star_translate;
use cube_core::order::{
    descend, descend_prime, measure_marked, measure_unmarked, measure_violations,
};
use cube_core::props::{shrink, Props, PROPERTIES};
use cube_core::reduce::{normalize, FuelExhausted, DEFAULT_FUEL};
use cube_core::syntax::{
    parse_context, parse_marked, parse_marked_context, parse_term, print_context, print_marked,
    print_term, ParseError,
};
use cube_core::term::{Context, LabeledTerm, Term};
use cube_core::typing::{named_system, Checker, SystemSpec, TypeError};

/// Type checker and toolbox for the eight systems of the lambda cube.
#[derive(Parser)]
#[command(name = "cube", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// System name (stlc, lambda-p, f, f-omega-weak, f-omega, lambda-p2,
    /// lambda-p-omega-weak, cc).
    #[arg(long, global = true, default_value = "cc", value_parser = named_system)]
    system: SystemSpec,
    /// Explicit rule pairs such as `PP,TP`; overrides --system.
    #[arg(long, global = true, value_parser = named_system)]
    rules: Option<SystemSpec>,
    /// File holding a context `x : T; y : U; ...`.
    #[arg(long, global = true)]
    context: Option<String>,
    /// Reduction step budget.
    #[arg(long, global = true, env = "CUBE_FUEL", default_value_t = DEFAULT_FUEL,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Marked output (t*, or t+ with --plus).
    #[arg(long, global = true)]
    marked: bool,
    /// Use the eta-long translation t+ and the order <'.
    #[arg(long, global = true)]
    plus: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Infer the type of a term.
    Check { term: String },
    /// Beta-eta normal form.
    Nf { term: String },
    /// Eta-long normal form.
    EtaLong { term: String },
    /// Marked translation of a well-typed term.
    Mark { term: String },
    /// Erase the marks of a marked term.
    Contents { term: String },
    /// The measure of a term.
    Measure { term: String },
    /// Explore the down-set of a term under < (or <' with --plus).
    Descend { term: String },
    /// Run the property suites on generated terms.
    Fuzz {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Nf { .. } => "nf",
            Command::EtaLong { .. } => "eta-long",
            Command::Mark { .. } => "mark",
            Command::Contents { .. } => "contents",
            Command::Measure { .. } => "measure",
            Command::Descend { .. } => "descend",
            Command::Fuzz { .. } => "fuzz",
        }
    }
}

enum Fail {
    Input(String),
    Parse(ParseError),
    Type(TypeError),
    Kernel(KernelError),
    Fuel,
    /// Command ran but its checks did not hold.
    Report,
}

impl Fail {
    fn exit(&self) -> u8 {
        match self {
            Fail::Input(_) | Fail::Parse(_) => 2,
            Fail::Fuel => 3,
            Fail::Type(e) if e.is_fuel() => 3,
            Fail::Kernel(e) if e.is_fuel() => 3,
            _ => 1,
        }
    }

    fn diagnostic(&self) -> Option<Value> {
        Some(match self {
            Fail::Input(m) => json!({"kind": "InputError", "message": m}),
            Fail::Parse(e) => json!({
                "kind": "ParseError",
                "message": e.to_string(),
                "span": e.span,
                "expected": e.expected,
            }),
            Fail::Type(e) => json!({
                "kind": e.root_cause().kind_name(),
                "message": e.to_string(),
                "path": e.path,
            }),
            Fail::Kernel(KernelError::Type(e)) => return Fail::Type(e.clone()).diagnostic(),
            Fail::Kernel(e) => json!({
                "kind": match e {
                    KernelError::Precondition(_) => "Precondition",
                    _ => "Violation",
                },
                "message": e.to_string(),
            }),
            Fail::Fuel => json!({"kind": "FuelExhausted", "message": "fuel exhausted"}),
            Fail::Report => return None,
        })
    }
}

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Self {
        Fail::Parse(e)
    }
}

impl From<TypeError> for Fail {
    fn from(e: TypeError) -> Self {
        Fail::Type(e)
    }
}

impl From<KernelError> for Fail {
    fn from(e: KernelError) -> Self {
        Fail::Kernel(e)
    }
}

impl From<FuelExhausted> for Fail {
    fn from(_: FuelExhausted) -> Self {
        Fail::Fuel
    }
}

/// What a command produced: text lines, a structured result, and
/// diagnostics that do not change the exit status.
struct Output {
    text: String,
    result: Value,
    notes: Vec<Value>,
}

impl Output {
    fn new(text: impl Into<String>, result: Value) -> Self {
        Output {
            text: text.into(),
            result,
            notes: vec![],
        }
    }
}

struct Run {
    sys: SystemSpec,
    opts: Opts,
}

fn read_source(src: &str) -> Result<String, Fail> {
    match src.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Fail::Input(format!("cannot read {path}: {e}"))),
        None => Ok(src.to_string()),
    }
}

impl Run {
    fn context_source(&self) -> Result<String, Fail> {
        match &self.opts.context {
            Some(path) => fs::read_to_string(path)
                .map_err(|e| Fail::Input(format!("cannot read {path}: {e}"))),
            None => Ok(String::new()),
        }
    }

    fn context(&self) -> Result<Context, Fail> {
        Ok(parse_context(&self.context_source()?)?)
    }

    fn inputs(&self, src: &str) -> Result<(Context, Term), Fail> {
        let ctx = self.context()?;
        let t = parse_term(src, &ctx)?;
        Ok((ctx, t))
    }

    /// Parses, type checks and normalizes.
    fn normal_input(&self, src: &str) -> Result<(Context, Term), Fail> {
        let (ctx, t) = self.inputs(src)?;
        let ck = Checker::new(self.sys, self.opts.fuel);
        ck.wf_context(&ctx)?;
        ck.infer(&ctx, &t)?;
        let n = normalize(&t, self.opts.fuel)?;
        Ok((ctx, n))
    }

    fn check(&self, src: &str) -> Result<Output, Fail> {
        let (ctx, t) = self.inputs(src)?;
        let ck = Checker::new(self.sys, self.opts.fuel);
        ck.wf_context(&ctx)?;
        let ty = ck.infer(&ctx, &t)?;
        let nf = normalize(&ty, self.opts.fuel)?;
        let ty_s = print_term(&ty, &ctx);
        let mut text = format!("type: {ty_s}\n");
        let nf_s = (nf != ty).then(|| print_term(&nf, &ctx));
        if let Some(n) = &nf_s {
            writeln!(text, "normal form: {n}").unwrap();
        }
        Ok(Output::new(
            text,
            json!({"type": ty_s, "normal_form": nf_s.unwrap_or_else(|| ty_s.clone())}),
        ))
    }

    fn nf(&self, src: &str) -> Result<Output, Fail> {
        let (ctx, t) = self.inputs(src)?;
        let s = print_term(&normalize(&t, self.opts.fuel)?, &ctx);
        Ok(Output::new(format!("{s}\n"), json!({ "term": s })))
    }

    fn marked_translation(&self, ctx: &Context, t: &Term) -> Result<(String, String), Fail> {
        let (mctx, a) = if self.opts.plus {
            plus_translate(ctx, t, self.sys, self.opts.fuel)?
        } else {
            let (mctx, a, _) = star_translate(ctx, t, self.sys, self.opts.fuel)?;
            (mctx, a)
        };
        Ok((
            print_marked(&a, &mctx),
            cube_core::syntax::print_marked_context(&mctx),
        ))
    }

    fn eta_long(&self, src: &str) -> Result<Output, Fail> {
        let (ctx, n) = self.normal_input(src)?;
        if self.opts.marked {
            let (s, c) = self.marked_translation(&ctx, &n)?;
            return Ok(Output::new(
                format!("{s}\n"),
                json!({"term": s, "context": c}),
            ));
        }
        let e = eta_long(&ctx, &n, self.sys, self.opts.fuel)?;
        let s = print_term(&e, &ctx);
        Ok(Output::new(format!("{s}\n"), json!({ "term": s })))
    }

    fn mark(&self, src: &str) -> Result<Output, Fail> {
        let (ctx, t) = self.inputs(src)?;
        let (s, c) = self.marked_translation(&ctx, &t)?;
        Ok(Output::new(
            format!("{s}\n"),
            json!({"term": s, "context": c}),
        ))
    }

    fn contents(&self, src: &str) -> Result<Output, Fail> {
        let csrc = self.context_source()?;
        let (names, ctx) = match parse_marked_context(&csrc) {
            Ok(m) => (m.names(), m.contents()),
            Err(_) => {
                let c = parse_context(&csrc)?;
                let names = c
                    .entries()
                    .iter()
                    .map(|(n, _)| n.as_str().to_string())
                    .collect();
                (names, c)
            }
        };
        let a = parse_marked(src, &names)?;
        let s = print_term(&a.contents(), &ctx);
        Ok(Output::new(format!("{s}\n"), json!({ "term": s })))
    }

    fn measure(&self, src: &str) -> Result<Output, Fail> {
        let (ctx, n) = self.normal_input(src)?;
        let m = if self.opts.marked {
            let (_, a, _) = star_translate(&ctx, &n, self.sys, self.opts.fuel)?;
            measure_marked(&a)
        } else {
            measure_unmarked(&ctx, &n, self.sys, self.opts.fuel)?
        };
        Ok(Output::new(format!("{m}\n"), json!({ "measure": m })))
    }

    fn descend(&self, src: &str) -> Result<(Output, bool), Fail> {
        let (ctx, n) = self.normal_input(src)?;
        let root = LabeledTerm::new(ctx.clone(), n);
        let (sys, fuel) = (self.sys, self.opts.fuel);
        let d = if self.opts.plus {
            descend_prime(&root, sys, fuel)?
        } else {
            descend(&root, sys, fuel)?
        };
        let members: Vec<String> = d.members().iter().map(|l| print_labeled(l, &ctx)).collect();
        let bad = measure_violations(&d, sys, fuel)?;
        let edges: Vec<Value> = bad
            .iter()
            .map(|&(a, b, ma, mb)| {
                json!({
                    "from": print_labeled(&d.nodes[a], &ctx),
                    "to": print_labeled(&d.nodes[b], &ctx),
                    "from_measure": ma,
                    "to_measure": mb,
                })
            })
            .collect();
        // under <' the measure may grow along type edges; those are only reported
        let ok = bad.is_empty() || self.opts.plus;
        let verdict = match (bad.is_empty(), self.opts.plus) {
            (true, _) => "OK",
            (false, true) => "INCREASES",
            (false, false) => "FAILED",
        };
        let mut text = format!(
            "down-set: {{{}}}\nsize: {}\ndepth: {}\nmu-descent: {verdict}\n",
            members.join(", "),
            members.len(),
            d.depth
        );
        for e in &edges {
            writeln!(
                text,
                "  {} ({}) -> {} ({})",
                e["from"].as_str().unwrap(),
                e["from_measure"],
                e["to"].as_str().unwrap(),
                e["to_measure"]
            )
            .unwrap();
        }
        let order = if self.opts.plus { "<'" } else { "<" };
        let mut out = Output::new(
            text,
            json!({
                "order": order,
                "members": members,
                "size": members.len(),
                "depth": d.depth,
                "mu_descent": verdict,
                "increases": edges,
            }),
        );
        if !bad.is_empty() {
            out.notes.push(json!({
                "kind": if ok { "MeasureIncrease" } else { "MeasureViolation" },
                "message": format!("{} edge(s) do not decrease the measure", bad.len()),
            }));
        }
        Ok((out, ok))
    }

    fn fuzz(&self, count: u64, seed: u64) -> (Output, bool) {
        let props = Props::new(self.sys, self.opts.fuel);
        let mut g = Generator::new(self.sys, seed);
        let mut text = format!(
            "fuzz: system {}, seed {seed}, {count} case(s), {} properties\n",
            self.sys,
            PROPERTIES.len()
        );
        let mut failures = Vec::new();
        let mut failed_cases = 0;
        for case in 0..count {
            let s = g.sample();
            let fails = props.run(&s);
            if !fails.is_empty() {
                failed_cases += 1;
            }
            for f in fails {
                let small = shrink(&props, f.property, &s);
                let detail = props.check(f.property, &small).err().unwrap_or(f.detail);
                writeln!(text, "case {case}: FAIL {}: {detail}", f.property).unwrap();
                writeln!(text, "  term: {}", show_sample(&s)).unwrap();
                writeln!(text, "  shrunk: {}", show_sample(&small)).unwrap();
                failures.push(json!({
                    "case": case,
                    "property": f.property,
                    "detail": detail,
                    "term": show_sample(&s),
                    "shrunk": show_sample(&small),
                }));
            }
        }
        let passed = count - failed_cases;
        writeln!(
            text,
            "summary: {passed}/{count} cases passed, {} failure(s)",
            failures.len()
        )
        .unwrap();
        let ok = failures.is_empty();
        let result = json!({
            "cases": count,
            "passed": passed,
            "properties": PROPERTIES,
            "failures": failures,
        });
        (Output::new(text, result), ok)
    }
}

fn show_sample(s: &Sample) -> String {
    format!(
        "{} |- {}",
        print_context(&s.ctx),
        print_term(&s.term, &s.ctx)
    )
}

/// A member of a down-set, with the binders it lives under beyond `base`.
fn print_labeled(l: &LabeledTerm, base: &Context) -> String {
    let term = print_term(&l.term, &l.ctx);
    if l.ctx.len() <= base.len() {
        return term;
    }
    let mut ext = Vec::new();
    for i in base.len()..l.ctx.len() {
        let (n, ty) = &l.ctx.entries()[i];
        ext.push(format!(
            "{} : {}",
            n.as_str(),
            print_term(ty, &l.ctx.prefix(i))
        ));
    }
    format!("{term} in [{}]", ext.join("; "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sys = cli.opts.rules.unwrap_or(cli.opts.system);
    let format = cli.opts.format;
    let name = cli.command.name();
    let run = Run {
        sys,
        opts: cli.opts,
    };

    let mut input = json!({
        "context": run.opts.context,
        "fuel": run.opts.fuel,
        "marked": run.opts.marked,
        "plus": run.opts.plus,
    });
    let outcome: Result<(Output, bool), Fail> = match &cli.command {
        Command::Fuzz { count, seed } => {
            input["count"] = json!(count);
            input["seed"] = json!(seed);
            Ok(run.fuzz(*count, *seed))
        }
        Command::Check { term }
        | Command::Nf { term }
        | Command::EtaLong { term }
        | Command::Mark { term }
        | Command::Contents { term }
        | Command::Measure { term }
        | Command::Descend { term } => {
            input["term"] = json!(term);
            read_source(term).and_then(|src| {
                input["term"] = json!(src);
                let done = |o: Output| (o, true);
                match &cli.command {
                    Command::Check { .. } => run.check(&src).map(done),
                    Command::Nf { .. } => run.nf(&src).map(done),
                    Command::EtaLong { .. } => run.eta_long(&src).map(done),
                    Command::Mark { .. } => run.mark(&src).map(done),
                    Command::Contents { .. } => run.contents(&src).map(done),
                    Command::Measure { .. } => run.measure(&src).map(done),
                    _ => run.descend(&src),
                }
            })
        }
    };

    let (out, fail) = match outcome {
        Ok((out, true)) => (Some(out), None),
        Ok((out, false)) => (Some(out), Some(Fail::Report)),
        Err(f) => (None, Some(f)),
    };
    let code = fail.as_ref().map_or(0, Fail::exit);
    match format {
        Format::Text => {
            if let Some(o) = &out {
                print!("{}", o.text);
            }
            if let Some(d) = fail.as_ref().and_then(Fail::diagnostic) {
                let kind = d["kind"].as_str().unwrap_or_default();
                let msg = d["message"].as_str().unwrap_or_default();
                if msg.starts_with(kind) {
                    eprintln!("error: {msg}");
                } else {
                    eprintln!("error: {kind}: {msg}");
                }
            }
        }
        Format::Structured => {
            let mut diagnostics: Vec<Value> =
                out.as_ref().map(|o| o.notes.clone()).unwrap_or_default();
            if let Some(d) = fail.as_ref().and_then(Fail::diagnostic) {
                diagnostics.push(d);
            }
            let record = json!({
                "command": name,
                "system": {"name": sys.name(), "rules": sys.rules_string()},
                "input": input,
                "result": out.map_or(Value::Null, |o| o.result),
                "diagnostics": diagnostics,
                "exit": code,
            });
            println!("{record}");
        }
    }
    ExitCode::from(code)
}
