//! Command-line front end.
//!
//! Exit codes: 0 success or pass, 1 domain failure (verification fails, a
//! precondition does not hold), 2 usage or parse error, 3 budget exhausted.

use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::constructions::{
    base_digits, golomb_set, modular_reduce, moment_curve, translate_union, Constructed,
};
use crate::error::Error;
use crate::finite_field::{format_modulus, prime_power, FieldElement, FieldSpec};
use crate::groups::{BhgSet, GroupElement, GroupSpec};
use crate::search::{bound_gap_report, exhaustive_max, greedy_bhg, SearchOptions, SearchResult, DEFAULT_NODE_BUDGET};
use crate::setfile::SetFile;
use crate::verifier::{is_bhg, rep_profile, VerifyOptions, CONVENTION, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bhg", version, about = "Construct, verify and search B_h[g] sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a set with one of the explicit constructions
    Construct {
        #[command(subcommand)]
        which: Construct,
    },
    /// Count representations and decide B_h[g]
    Verify(VerifyArgs),
    /// Extremal values and greedy sequences
    Search {
        #[command(subcommand)]
        which: Search,
    },
    /// Finite-field utilities
    Field {
        #[command(subcommand)]
        which: FieldCmd,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the set file here instead of standard output
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Read the input set file from here instead of standard input
    #[arg(long)]
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Moment curve {(x, x^2, ..., x^h)} over GF(p^n)
    Moment {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        h: usize,
        /// Modulus coefficients high-to-low, with or without the leading 1
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
        /// Map field coordinates into Z_p^{hn}
        #[arg(long)]
        vectorize: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Base-N digit lifting of a one-dimensional set
    Digits {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Union of translates A + c*m
    Union {
        #[arg(long)]
        m: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coordinatewise reduction modulo m_i / g_i
    Reduce {
        #[arg(long, value_delimiter = ',', required = true)]
        divisors: Vec<u64>,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// {(i, log_beta(a - alpha^i))} in Z_{q-1} x Z_{q-1}
    Golomb {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        a: String,
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Summand count; defaults to the set file's h
    #[arg(long)]
    h: Option<usize>,
    /// Bound to test; defaults to the set file's claimed g
    #[arg(long)]
    g: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Search {
    /// Exact F_h(G, g) by branch and bound
    Max {
        /// product:m1,...,md or box:d,N
        #[arg(long)]
        group: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        g: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
        /// Also write the witness as a set file
        #[arg(long)]
        output: Option<String>,
    },
    /// Greedy B_h[g] sequence starting from 1
    Greedy {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<String>,
    },
    /// Compare F_h(N^d, g) with F_h^d(N, g)
    Gap {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        g: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    /// Modulus, order and smallest primitive element
    Info {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
        #[arg(long)]
        json: bool,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Parse { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn io_failure(path: &str, e: std::io::Error) -> Failure {
    Failure { code: EXIT_USAGE, msg: format!("{path}: {e}") }
}

type CmdResult = std::result::Result<(), Failure>;

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    out: Outcome,
}

impl Ctx<'_> {
    fn print(&mut self, s: &str) {
        self.out.stdout.push_str(s);
    }

    fn eprint(&mut self, s: &str) {
        self.out.stderr.push_str(s);
    }

    fn read_input(&mut self, input: &InputArgs) -> std::result::Result<SetFile, Failure> {
        let text = match &input.input {
            Some(path) => fs::read_to_string(path).map_err(|e| io_failure(path, e))?,
            None => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| io_failure("<stdin>", e))?;
                s
            }
        };
        Ok(SetFile::parse(&text)?)
    }

    fn emit(&mut self, file: &SetFile, output: &Option<String>) -> CmdResult {
        let text = file.render();
        match output {
            Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
            None => {
                self.print(&text);
                Ok(())
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let mut ctx = Ctx { stdin, out: Outcome::default() };
    let res = match cli.command {
        Command::Construct { which } => construct(&mut ctx, which),
        Command::Verify(args) => verify(&mut ctx, args),
        Command::Search { which } => search(&mut ctx, which),
        Command::Field { which } => field(&mut ctx, which),
    };
    if let Err(f) = res {
        ctx.out.code = f.code;
        if !f.msg.is_empty() {
            ctx.eprint(&format!("error: {}\n", f.msg));
        }
    }
    ctx.out
}

/// Accepts either the tail `(c_{n-1}, ..., c_0)` or the full monic list
/// with its leading 1.
fn modulus_tail(n: usize, given: Vec<u64>) -> std::result::Result<Vec<u64>, Failure> {
    if given.len() == n {
        Ok(given)
    } else if given.len() == n + 1 && given[0] == 1 {
        Ok(given[1..].to_vec())
    } else {
        Err(Failure {
            code: EXIT_USAGE,
            msg: format!("modulus for degree {n} needs {n} tail coefficients or {} monic ones", n + 1),
        })
    }
}

fn make_field(p: u64, n: usize, modulus: Option<Vec<u64>>) -> std::result::Result<FieldSpec, Failure> {
    Ok(match modulus {
        Some(m) => {
            let tail = modulus_tail(n, m)?;
            FieldSpec::new(p, tail)?
        }
        None => FieldSpec::canonical(p, n)?,
    })
}

/// Integer (`3`), polynomial in `t` (`t+1`) or high-to-low tuple (`1,1`).
fn parse_field_arg(field: &FieldSpec, s: &str) -> std::result::Result<FieldElement, Failure> {
    let usage = |_| Failure { code: EXIT_USAGE, msg: format!("cannot read field element {s:?}") };
    if s.contains('t') {
        return field.parse_element(s).map_err(usage);
    }
    if s.contains(',') {
        let coeffs: Vec<u64> = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Failure { code: EXIT_USAGE, msg: format!("cannot read field element {s:?}") })?;
        return Ok(field.devectorize(&coeffs)?);
    }
    let v: u64 = s.trim().parse().map_err(|_| Failure { code: EXIT_USAGE, msg: format!("cannot read field element {s:?}") })?;
    if v >= field.p() {
        return Err(Failure { code: EXIT_FAIL, msg: format!("{v} is not an element of GF({})", field.p()) });
    }
    Ok(field.from_int(v))
}

fn constructed_file(c: &Constructed) -> SetFile {
    SetFile::from_set(&c.set, c.certificate.as_ref().map(|cert| cert.to_string()))
}

fn construct(ctx: &mut Ctx<'_>, which: Construct) -> CmdResult {
    match which {
        Construct::Moment { p, n, h, modulus, vectorize, out } => {
            let field = make_field(p, n, modulus)?;
            let mc = moment_curve(&field, h)?;
            let file = if vectorize || n == 1 {
                constructed_file(&mc.vectorize()?)
            } else {
                SetFile::from_moment_curve(&mc)
            };
            ctx.emit(&file, &out.output)
        }
        Construct::Digits { base, dim, input, out } => {
            let src = ctx.read_input(&input)?.to_bhg_set(None)?;
            let c = base_digits(&src, base, dim)?;
            ctx.emit(&constructed_file(&c), &out.output)
        }
        Construct::Union { m, coeffs, input, out } => {
            let src = ctx.read_input(&input)?.to_bhg_set(None)?;
            let c = translate_union(&src, m, &coeffs)?;
            let coeffs_s: Vec<String> = coeffs.iter().map(u64::to_string).collect();
            let prov = format!("union m={m} coeffs={} source=[{} h={}]", coeffs_s.join(","), src.spec, src.h);
            ctx.emit(&SetFile::from_set(&c.set, Some(prov)), &out.output)
        }
        Construct::Reduce { divisors, input, out } => {
            let src = ctx.read_input(&input)?.to_bhg_set(None)?;
            let r = modular_reduce(&src, &divisors)?;
            let mut file = SetFile::from_set(&r.set, Some(r.certificate.to_string()));
            file.construction = Some(format!("{} collisions={}", r.certificate, r.collisions));
            ctx.emit(&file, &out.output)
        }
        Construct::Golomb { q, alpha, beta, a, modulus, out } => {
            let (p, n) = prime_power(q).ok_or_else(|| Failure { code: EXIT_FAIL, msg: format!("{q} is not a prime power") })?;
            let field = make_field(p, n, modulus)?;
            let alpha = parse_field_arg(&field, &alpha)?;
            let beta = parse_field_arg(&field, &beta)?;
            let a = parse_field_arg(&field, &a)?;
            let c = golomb_set(&field, &alpha, &beta, &a)?;
            ctx.emit(&constructed_file(&c), &out.output)
        }
    }
}

/// Ordered key/value report rendered either as `key=value` lines or as one
/// JSON object. Array values become repeated lines.
#[derive(Default)]
struct Report(Map<String, Value>);

impl Report {
    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.0.insert(key.to_string(), v.into());
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&Value::Object(self.0.clone())).expect("json");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for (k, v) in &self.0 {
            match v {
                Value::Array(items) => {
                    for item in items {
                        out.push_str(&format!("{k}={}\n", scalar(item)));
                    }
                }
                other => out.push_str(&format!("{k}={}\n", scalar(other))),
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// `11` for one-dimensional elements, `(1,6)` otherwise.
pub fn fmt_element(e: &GroupElement) -> String {
    if e.dim() == 1 {
        e.0[0].to_string()
    } else {
        format!("({e})")
    }
}

fn fmt_elements(set: &BhgSet) -> String {
    set.elements().iter().map(fmt_element).collect::<Vec<_>>().join(" ")
}

fn verify(ctx: &mut Ctx<'_>, args: VerifyArgs) -> CmdResult {
    let file = ctx.read_input(&args.input)?;
    let set = file.to_bhg_set(args.h)?;
    let h = set.h;
    let opts = VerifyOptions { budget: args.budget, threads: args.threads.max(1) };
    let prof = rep_profile(&set, h, &opts)?;
    let mut r = Report::default();
    r.put("group", set.spec.to_string());
    r.put("h", h);
    r.put("convention", CONVENTION);
    r.put("size", set.len());
    r.put("multisets", u64::try_from(prof.multisets).unwrap_or(u64::MAX));
    r.put("distinct_sums", prof.counts.len());
    r.put("min_g", prof.max_count);
    if let Some(w) = &prof.witness {
        r.put("witness_sum", fmt_element(&w.sum));
        let reps: Vec<Value> = w
            .representations
            .iter()
            .map(|rep| Value::String(rep.iter().map(fmt_element).collect::<Vec<_>>().join("+")))
            .collect();
        r.put("representation", reps);
    }
    let target = args.g.or(file.g);
    let mut code = EXIT_OK;
    if let Some(g) = target {
        let check = is_bhg(&set, h, g, &opts)?;
        r.put("g", g);
        r.put("result", if check.holds { "pass" } else { "fail" });
        if !check.holds {
            code = EXIT_FAIL;
        }
    }
    ctx.print(&r.render(args.json));
    if code != EXIT_OK {
        return Err(Failure { code, msg: String::new() });
    }
    Ok(())
}

fn search_report(r: &mut Report, prefix: &str, res: &SearchResult) {
    r.put(&format!("{prefix}group"), res.spec.to_string());
    r.put(&format!("{prefix}best_size"), res.best_size);
    r.put(&format!("{prefix}exhaustive"), res.exhaustive);
    r.put(&format!("{prefix}nodes"), res.nodes_explored);
    r.put(&format!("{prefix}witness"), fmt_elements(&res.witness));
}

fn search(ctx: &mut Ctx<'_>, which: Search) -> CmdResult {
    match which {
        Search::Max { group, h, g, budget, threads, json, output } => {
            let spec: GroupSpec = group.parse().map_err(|e: Error| Failure { code: EXIT_USAGE, msg: e.to_string() })?;
            let opts = SearchOptions { node_budget: budget, threads: threads.max(1) };
            let res = exhaustive_max(&spec, h, g, &opts)?;
            let mut r = Report::default();
            r.put("h", h);
            r.put("g", g);
            search_report(&mut r, "", &res);
            ctx.print(&r.render(json));
            ctx.eprint(&format!("elapsed_ms={}\n", res.elapsed.as_millis()));
            if let Some(path) = output {
                let prov = format!("search-max group={spec} exhaustive={}", res.exhaustive);
                ctx.emit(&SetFile::from_set(&res.witness, Some(prov)), &Some(path))?;
            }
            if !res.exhaustive {
                return Err(Failure { code: EXIT_BUDGET, msg: "node budget exhausted; best_size is a lower bound".into() });
            }
            Ok(())
        }
        Search::Greedy { h, g, count, json, output } => {
            let set = greedy_bhg(h, g, count)?;
            let mut r = Report::default();
            r.put("h", h);
            r.put("g", g);
            r.put("count", count);
            r.put("terms", set.ints().iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
            ctx.print(&r.render(json));
            if let Some(path) = output {
                ctx.emit(&SetFile::from_set(&set, Some(format!("greedy count={count}"))), &Some(path))?;
            }
            Ok(())
        }
        Search::Gap { n, d, h, g, budget, threads, json } => {
            let opts = SearchOptions { node_budget: budget, threads: threads.max(1) };
            let rep = bound_gap_report(n, d, h, g, &opts)?;
            let mut r = Report::default();
            r.put("side", n);
            r.put("dim", d);
            r.put("h", h);
            r.put("g", g);
            search_report(&mut r, "one_dim_", &rep.one_dim);
            r.put("lifted_witness", fmt_elements(&rep.lifted_witness));
            r.put("lifted_is_bhg", rep.lifted_is_bhg);
            search_report(&mut r, "multi_dim_", &rep.multi_dim);
            r.put("gap", rep.gap);
            r.put("inequality", if rep.holds { "holds" } else { "violated" });
            ctx.print(&r.render(json));
            ctx.eprint(&format!(
                "elapsed_ms={}\n",
                (rep.one_dim.elapsed + rep.multi_dim.elapsed).as_millis()
            ));
            if !(rep.one_dim.exhaustive && rep.multi_dim.exhaustive) {
                return Err(Failure { code: EXIT_BUDGET, msg: "node budget exhausted".into() });
            }
            if !rep.holds {
                return Err(Failure { code: EXIT_FAIL, msg: "inequality violated".into() });
            }
            Ok(())
        }
    }
}

fn field(ctx: &mut Ctx<'_>, which: FieldCmd) -> CmdResult {
    let FieldCmd::Info { p, n, modulus, json } = which;
    let f = make_field(p, n, modulus)?;
    let prim = f.find_primitive()?;
    let mut r = Report::default();
    r.put("p", p);
    r.put("n", n);
    r.put("order", f.order());
    r.put("modulus", format_modulus(f.modulus()));
    r.put("modulus_tail", f.modulus().iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    r.put("primitive", f.format_element(&prim));
    r.put("primitive_coeffs", f.vectorize(&prim)?.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    ctx.print(&r.render(json));
    Ok(())
}
