#![allow(dead_code)]

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::Rng;

use sidekick::builtin::{arith_dialect, builtin_dialect, cf_dialect, func_dialect, scf_dialect};
use sidekick::ir::{
    verify, AttrDefinition, Attribute, Context, DiagnosticKind, DialectDefinition, FloatType, Ir,
    OpId,
};
use sidekick::irdl::{
    export_dialect_to_irdl, load_dialects_from_irdl, register_irdl_dialect, ConstraintExpr,
};
use sidekick::textual::{parse_module, print_module, ParseOptions};

pub const CMATH_IRDL: &str = include_str!("../data/cmath.irdl.mlir");

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

/// `(file name, contents)` of every `.mlir` file in `dir`, sorted by name.
pub fn read_mlir_dir(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = std::fs::read_dir(dir)
        .expect("readable directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "mlir"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("readable file"))
        })
        .collect();
    files.sort();
    files
}

pub fn corpus() -> Vec<(String, String)> {
    read_mlir_dir(&corpus_dir())
}

pub fn listings() -> Vec<(String, String)> {
    read_mlir_dir(&data_dir().join("listings"))
}

/// The cmath dialect written directly in Rust: one type `complex` whose
/// single parameter is f32 or f64.
pub fn native_cmath() -> DialectDefinition {
    let mut d = DialectDefinition::new("cmath");
    d.attributes.push(AttrDefinition {
        mnemonic: "complex".into(),
        is_type: true,
        parameters: vec![ConstraintExpr::any_of([
            ConstraintExpr::Is(Attribute::FloatType(FloatType::F32)),
            ConstraintExpr::Is(Attribute::FloatType(FloatType::F64)),
        ])],
    });
    d
}

pub fn native_dialects() -> Vec<DialectDefinition> {
    vec![
        builtin_dialect(),
        func_dialect(),
        arith_dialect(),
        scf_dialect(),
        cf_dialect(),
        native_cmath(),
    ]
}

/// Builtins plus cmath loaded from the bundled IRDL file.
pub fn cmath_context() -> Context {
    let mut ctx = Context::with_builtins();
    let m = parse_module(CMATH_IRDL, &ctx, &ParseOptions::default()).expect("cmath parses");
    assert!(verify(&m.ir, m.top, &ctx).is_empty());
    load_dialects_from_irdl(&m.ir, m.top, &mut ctx).expect("cmath loads");
    ctx
}

/// Every native dialect registered directly.
pub fn native_context() -> Context {
    let mut ctx = Context::new();
    register_irdl_dialect(&mut ctx).unwrap();
    for d in native_dialects() {
        ctx.register_dialect(d).unwrap();
    }
    ctx.allow_unregistered = true;
    ctx
}

/// Like [`native_context`], except `dialect` goes through export, print,
/// parse and load.
pub fn reloaded_context(dialect: &str) -> Context {
    let mut ctx = Context::new();
    register_irdl_dialect(&mut ctx).unwrap();
    let mut target = None;
    for d in native_dialects() {
        if d.name == dialect {
            target = Some(d);
        } else {
            ctx.register_dialect(d).unwrap();
        }
    }
    let target = target.expect("known dialect");
    let full = Context::with_builtins();
    let exported = export_dialect_to_irdl(&target);
    let text = print_module(&exported.ir, exported.top, &full);
    let m = parse_module(&text, &full, &ParseOptions::default()).expect("export parses");
    let diags = verify(&m.ir, m.top, &full);
    assert!(diags.is_empty(), "exported {dialect} does not verify: {diags:?}");
    load_dialects_from_irdl(&m.ir, m.top, &mut ctx).expect("export loads");
    ctx.allow_unregistered = true;
    ctx
}

/// Parse error kind, or the sorted distinct kinds reported by the verifier.
pub fn outcome(text: &str, ctx: &Context) -> Result<Vec<DiagnosticKind>, DiagnosticKind> {
    let opts = ParseOptions {
        allow_unregistered: true,
    };
    let m = parse_module(text, ctx, &opts).map_err(|d| d.kind)?;
    let mut kinds: Vec<DiagnosticKind> = verify(&m.ir, m.top, ctx).iter().map(|d| d.kind).collect();
    kinds.sort_by_key(|k| format!("{k:?}"));
    kinds.dedup();
    Ok(kinds)
}

/// Two's-complement truncation of `v` to `width` bits, computed by
/// reduction modulo 2^width.
pub fn wrap(v: i128, width: u32) -> i128 {
    let m = 1i128 << width;
    let r = v.rem_euclid(m);
    if r >= m / 2 {
        r - m
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Node {
    Const(i128),
    Arg(usize),
    Add(usize, usize),
}

/// A pure integer DAG over one width, returned from a function.
#[derive(Debug, Clone)]
pub struct Dag {
    pub width: u32,
    pub args: usize,
    pub nodes: Vec<Node>,
    pub outputs: Vec<usize>,
}

impl Dag {
    pub fn random(rng: &mut StdRng, max_ops: usize, all_constant: bool) -> Dag {
        let width = *[8u32, 32, 64].choose(rng).unwrap();
        let args = if all_constant { 0 } else { rng.random_range(1..=3) };
        let n = rng.random_range(1..=max_ops);
        let half = 1i128 << (width - 1);
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let node = if i == 0 || rng.random_bool(0.3) {
                if args > 0 && rng.random_bool(0.3) {
                    Node::Arg(rng.random_range(0..args))
                } else if rng.random_bool(0.2) {
                    Node::Const(*[-half, half - 1, 0, -1, 1].choose(rng).unwrap())
                } else {
                    Node::Const(rng.random_range(-half..half))
                }
            } else {
                Node::Add(rng.random_range(0..i), rng.random_range(0..i))
            };
            nodes.push(node);
        }
        let k = rng.random_range(1..=3.min(n));
        let outputs = (0..k).map(|_| rng.random_range(0..n)).collect();
        Dag {
            width,
            args,
            nodes,
            outputs,
        }
    }

    pub fn to_text(&self) -> String {
        let t = format!("i{}", self.width);
        let mut s = String::from("\"func.func\"() ({\n");
        let arg_list: Vec<String> = (0..self.args).map(|a| format!("%arg{a}: {t}")).collect();
        if self.args > 0 {
            writeln!(s, "^bb0({}):", arg_list.join(", ")).unwrap();
        }
        let name = |i: usize| match self.nodes[i] {
            Node::Arg(a) => format!("%arg{a}"),
            _ => format!("%v{i}"),
        };
        for (i, node) in self.nodes.iter().enumerate() {
            match *node {
                Node::Const(c) => writeln!(
                    s,
                    "  %v{i} = \"arith.constant\"() {{value = {c} : {t}}} : () -> {t}"
                )
                .unwrap(),
                Node::Add(a, b) => writeln!(
                    s,
                    "  %v{i} = \"arith.addi\"({}, {}) : ({t}, {t}) -> {t}",
                    name(a),
                    name(b)
                )
                .unwrap(),
                Node::Arg(_) => {}
            }
        }
        let outs: Vec<String> = self.outputs.iter().map(|&o| name(o)).collect();
        let types = vec![t.clone(); self.outputs.len()].join(", ");
        writeln!(s, "  \"func.return\"({}) : ({types}) -> ()", outs.join(", ")).unwrap();
        let ins = vec![t.clone(); self.args].join(", ");
        writeln!(
            s,
            "}}) {{sym_name = \"dag\", function_type = ({ins}) -> ({types})}} : () -> ()"
        )
        .unwrap();
        s
    }

    /// Reference semantics: evaluate in i128 and truncate after each add.
    pub fn eval(&self, args: &[i128]) -> Vec<i128> {
        let mut vals = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            vals.push(match *node {
                Node::Const(c) => wrap(c, self.width),
                Node::Arg(a) => wrap(args[a], self.width),
                Node::Add(a, b) => wrap(vals[a] + vals[b], self.width),
            });
        }
        self.outputs.iter().map(|&o| vals[o]).collect()
    }
}

/// Interprets the first `func.func` under `root`: arith.constant and
/// arith.addi only, straight-line.
pub fn eval_function(ir: &Ir, root: OpId, args: &[i128]) -> Vec<i128> {
    let func = ir
        .collect_preorder(root)
        .into_iter()
        .find(|&o| ir.op(o).name() == "func.func")
        .expect("a function");
    let region = ir.op(func).regions()[0];
    let entry = ir.region(region).entry().expect("entry block");
    let width = |v| match ir.value_type(v) {
        Attribute::IntegerType(t) => t.width(),
        other => panic!("unexpected type {other}"),
    };
    let mut env = HashMap::new();
    for (i, &a) in ir.block(entry).arguments().iter().enumerate() {
        env.insert(a, wrap(args[i], width(a)));
    }
    for op in ir.block_ops(entry) {
        let o = ir.op(op);
        match o.name() {
            "arith.constant" => {
                let v = o.attribute("value").and_then(Attribute::as_integer).unwrap();
                env.insert(o.result(0), wrap(v.value() as i128, width(o.result(0))));
            }
            "arith.addi" => {
                let sum = env[&o.operands()[0]] + env[&o.operands()[1]];
                env.insert(o.result(0), wrap(sum, width(o.result(0))));
            }
            "func.return" => return o.operands().iter().map(|v| env[v]).collect(),
            other => panic!("unexpected op {other}"),
        }
    }
    panic!("function without return")
}

/// Generator of single-operation test programs for the differential
/// verifier check. Each program holds one operation of the target dialect,
/// built from a valid template and then perturbed.
pub struct InstanceGen {
    pub rng: StdRng,
}

const TYPES: [&str; 10] = [
    "i1",
    "i8",
    "i32",
    "i64",
    "index",
    "f16",
    "f32",
    "f64",
    "!cmath.complex<f32>",
    "!cmath.complex<f64>",
];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Wrapper {
    None,
    Func,
    If,
    For,
}

#[derive(Debug, Clone)]
struct Inst {
    name: String,
    operands: Vec<String>,
    results: Vec<String>,
    attrs: Vec<(String, String)>,
    regions: Vec<String>,
    successors: usize,
    wrapper: Wrapper,
    /// Types the wrapping function returns, when wrapped in one.
    func_results: Vec<String>,
    /// Whether an op follows the instance in its block.
    trailing: bool,
    /// Types of the `%yN` holder arguments yielded from regions.
    yields: Vec<String>,
}

impl Inst {
    fn new(name: &str) -> Inst {
        Inst {
            name: name.to_string(),
            operands: Vec::new(),
            results: Vec::new(),
            attrs: Vec::new(),
            regions: Vec::new(),
            successors: 0,
            wrapper: Wrapper::None,
            func_results: Vec::new(),
            trailing: true,
            yields: Vec::new(),
        }
    }
}

fn tuple(types: &[String]) -> String {
    format!("({})", types.join(", "))
}

fn result_list(types: &[String]) -> String {
    if types.len() == 1 && !types[0].contains("->") {
        types[0].clone()
    } else {
        tuple(types)
    }
}

impl InstanceGen {
    pub fn new(rng: StdRng) -> Self {
        InstanceGen { rng }
    }

    fn ty(&mut self) -> String {
        TYPES.choose(&mut self.rng).unwrap().to_string()
    }

    fn int_ty(&mut self) -> String {
        ["i1", "i8", "i32", "i64", "index"]
            .choose(&mut self.rng)
            .unwrap()
            .to_string()
    }

    fn literal(&mut self, ty: &str) -> String {
        match ty {
            "f16" | "f32" | "f64" => format!("{}.5 : {ty}", self.rng.random_range(-8..8)),
            t if t.starts_with('i') || t == "index" => {
                format!("{} : {ty}", self.rng.random_range(-100..100))
            }
            _ => "\"oops\"".to_string(),
        }
    }

    fn yield_region(&mut self, term: &str, values: &[(String, String)], args: &[String]) -> String {
        let names: Vec<String> = values.iter().map(|(n, _)| n.clone()).collect();
        let types: Vec<String> = values.iter().map(|(_, t)| t.clone()).collect();
        let head = if args.is_empty() {
            String::new()
        } else {
            let a: Vec<String> = args
                .iter()
                .enumerate()
                .map(|(i, t)| format!("%r{i}: {t}"))
                .collect();
            format!("^bb0({}):\n", a.join(", "))
        };
        format!(
            "{head}\"{term}\"({}) : {} -> ()\n",
            names.join(", "),
            tuple(&types)
        )
    }

    fn template(&mut self, name: &str) -> Inst {
        let mut inst = Inst::new(name);
        match name {
            "arith.constant" => {
                let t = if self.rng.random_bool(0.5) {
                    self.int_ty()
                } else {
                    ["f16", "f32", "f64"].choose(&mut self.rng).unwrap().to_string()
                };
                inst.attrs.push(("value".into(), self.literal(&t)));
                inst.results.push(t);
            }
            "arith.addi" => {
                let t = self.int_ty();
                inst.operands = vec![t.clone(), t.clone()];
                inst.results.push(t);
            }
            "func.func" => {
                let ins: Vec<String> = (0..self.rng.random_range(0..3)).map(|_| self.ty()).collect();
                let outs: Vec<String> = ins.iter().take(self.rng.random_range(0..=ins.len())).cloned().collect();
                let values: Vec<(String, String)> =
                    outs.iter().enumerate().map(|(i, t)| (format!("%r{i}"), t.clone())).collect();
                let body = self.yield_region("func.return", &values, &ins);
                inst.regions.push(body);
                inst.attrs.push(("sym_name".into(), "\"f\"".into()));
                inst.attrs.push((
                    "function_type".into(),
                    format!("{} -> {}", tuple(&ins), tuple(&outs)),
                ));
            }
            "func.return" => {
                inst.operands = (0..self.rng.random_range(0..3)).map(|_| self.ty()).collect();
                inst.func_results = inst.operands.clone();
                inst.wrapper = Wrapper::Func;
                inst.trailing = false;
            }
            "scf.if" => {
                inst.operands.push("i1".into());
                let outs: Vec<String> = (0..self.rng.random_range(0..3)).map(|_| self.ty()).collect();
                // Regions yield values passed in as holder arguments.
                let values: Vec<(String, String)> = outs
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (format!("%y{i}"), t.clone()))
                    .collect();
                inst.regions.push(self.yield_region("scf.yield", &values, &[]));
                inst.regions.push(self.yield_region("scf.yield", &values, &[]));
                inst.yields = outs.clone();
                inst.results = outs;
            }
            "scf.for" => {
                inst.operands = vec!["index".into(); 3];
                let body = self.yield_region("scf.yield", &[], &["index".to_string()]);
                inst.regions.push(body);
            }
            "scf.yield" => {
                inst.wrapper = if self.rng.random_bool(0.5) {
                    Wrapper::If
                } else {
                    Wrapper::For
                };
                inst.trailing = false;
            }
            "cf.br" => {
                inst.operands = (0..self.rng.random_range(0..3)).map(|_| self.ty()).collect();
                inst.successors = 1;
                inst.trailing = false;
            }
            "cf.cond_br" => {
                inst.operands.push("i1".into());
                inst.successors = 2;
                inst.trailing = false;
            }
            "builtin.module" => {
                inst.regions.push(String::new());
            }
            "cmath.value" => {
                inst.name = "test.v".into();
                let p = if self.rng.random_bool(0.5) { "f32" } else { "f64" };
                inst.results.push(format!("!cmath.complex<{p}>"));
            }
            other => panic!("no template for {other}"),
        }
        inst
    }

    fn mutate(&mut self, inst: &mut Inst) {
        match self.rng.random_range(0..10) {
            0 => {
                if inst.operands.is_empty() || self.rng.random_bool(0.5) {
                    let t = self.ty();
                    inst.operands.push(t);
                } else {
                    inst.operands.pop();
                }
            }
            1 if !inst.operands.is_empty() => {
                let i = self.rng.random_range(0..inst.operands.len());
                inst.operands[i] = self.ty();
            }
            2 => {
                if inst.results.is_empty() || self.rng.random_bool(0.5) {
                    let t = self.ty();
                    inst.results.push(t);
                } else {
                    let i = self.rng.random_range(0..inst.results.len());
                    inst.results[i] = self.ty();
                }
            }
            3 if !inst.attrs.is_empty() => {
                let i = self.rng.random_range(0..inst.attrs.len());
                if self.rng.random_bool(0.5) {
                    inst.attrs.remove(i);
                } else {
                    let t = self.ty();
                    inst.attrs[i].1 = [
                        self.literal(&t),
                        "\"text\"".to_string(),
                        t.clone(),
                        format!("[{}]", self.literal(&t)),
                        "(i32) -> i64".to_string(),
                    ]
                    .choose(&mut self.rng)
                    .unwrap()
                    .clone();
                }
            }
            4 => {
                if inst.regions.is_empty() || self.rng.random_bool(0.5) {
                    inst.regions.push("\"test.end\"() : () -> ()\n".into());
                } else {
                    inst.regions.pop();
                }
            }
            5 => inst.successors = (inst.successors + self.rng.random_range(1..3)) % 3,
            6 => inst.trailing = !inst.trailing,
            7 => {
                inst.wrapper = *[Wrapper::None, Wrapper::Func, Wrapper::If, Wrapper::For]
                    .choose(&mut self.rng)
                    .unwrap();
            }
            8 => {
                if self.rng.random_bool(0.5) {
                    inst.func_results.push(self.ty());
                } else {
                    inst.func_results.pop();
                }
            }
            _ => {
                let t = self.ty();
                let lit = self.literal(&t);
                let key = ["extra", "value", "sym_name"].choose(&mut self.rng).unwrap();
                inst.attrs.retain(|(k, _)| k != key);
                inst.attrs.push((key.to_string(), lit));
            }
        }
    }

    /// Renders the instance inside a holder operation whose entry block
    /// provides every operand as an argument.
    fn render(&mut self, inst: &Inst) -> String {
        let mut holder_args: Vec<String> = inst.operands.clone();
        let yield_decls: Vec<String> = inst
            .yields
            .iter()
            .enumerate()
            .map(|(i, t)| format!("%y{i}: {t}"))
            .collect();
        let operand_names: Vec<String> = (0..inst.operands.len()).map(|i| format!("%a{i}")).collect();
        let result_names: Vec<String> = (0..inst.results.len()).map(|i| format!("%o{i}")).collect();
        let mut op = String::new();
        if !result_names.is_empty() {
            write!(op, "{} = ", result_names.join(", ")).unwrap();
        }
        write!(op, "\"{}\"({})", inst.name, operand_names.join(", ")).unwrap();
        if inst.successors > 0 {
            let s: Vec<&str> = ["^bb1", "^bb1"][..inst.successors].to_vec();
            write!(op, "[{}]", s.join(", ")).unwrap();
        }
        if !inst.regions.is_empty() {
            let rs: Vec<String> = inst
                .regions
                .iter()
                .map(|r| format!("{{\n{r}}}"))
                .collect();
            write!(op, " ({})", rs.join(", ")).unwrap();
        }
        if !inst.attrs.is_empty() {
            let a: Vec<String> = inst.attrs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            write!(op, " {{{}}}", a.join(", ")).unwrap();
        }
        write!(op, " : {} -> {}\n", tuple(&inst.operands), result_list(&inst.results)).unwrap();
        if inst.trailing {
            op.push_str("\"test.end\"() : () -> ()\n");
        }

        let mut body = match inst.wrapper {
            Wrapper::None => op,
            Wrapper::Func => {
                // Function arguments replace the holder arguments, since
                // functions cannot see outside values.
                let args: Vec<String> = inst
                    .operands
                    .iter()
                    .enumerate()
                    .map(|(i, t)| format!("%a{i}: {t}"))
                    .collect();
                let head = if args.is_empty() {
                    String::new()
                } else {
                    format!("^bb0({}):\n", args.join(", "))
                };
                let ft = format!("{} -> {}", tuple(&inst.operands), tuple(&inst.func_results));
                holder_args.clear();
                format!(
                    "\"func.func\"() ({{\n{head}{op}}}) {{sym_name = \"w\", function_type = {ft}}} : () -> ()\n"
                )
            }
            Wrapper::If => {
                holder_args.push("i1".into());
                let c = format!("%a{}", holder_args.len() - 1);
                format!(
                    "\"scf.if\"({c}) ({{\n{op}}}, {{\n\"scf.yield\"() : () -> ()\n}}) : (i1) -> ()\n"
                )
            }
            Wrapper::For => {
                let base = holder_args.len();
                holder_args.extend(["index".to_string(), "index".into(), "index".into()]);
                format!(
                    "\"scf.for\"(%a{base}, %a{}, %a{}) ({{\n^bb0(%iv: index):\n{op}}}) : (index, index, index) -> ()\n",
                    base + 1,
                    base + 2
                )
            }
        };
        if inst.wrapper != Wrapper::None {
            body.push_str("\"test.end\"() : () -> ()\n");
        }
        let mut decls: Vec<String> = holder_args
            .iter()
            .enumerate()
            .map(|(i, t)| format!("%a{i}: {t}"))
            .collect();
        decls.extend(yield_decls);
        let head = if decls.is_empty() {
            String::new()
        } else {
            format!("^bb0({}):\n", decls.join(", "))
        };
        format!(
            "\"test.holder\"() ({{\n{head}{body}^bb1:\n\"test.end\"() : () -> ()\n}}) : () -> ()\n"
        )
    }

    /// One program exercising `op_name`: the template unchanged about half
    /// the time, otherwise with one to three perturbations.
    pub fn instance(&mut self, op_name: &str) -> String {
        let mut inst = self.template(op_name);
        if self.rng.random_bool(0.5) {
            for _ in 0..self.rng.random_range(1..=3) {
                self.mutate(&mut inst);
            }
        }
        self.render(&inst)
    }

    /// A program mentioning a cmath type with a random parameter list, in a
    /// random position.
    pub fn cmath_type_instance(&mut self) -> String {
        let params = match self.rng.random_range(0..6) {
            0 => String::new(),
            1 => format!("<{}, {}>", self.ty(), self.ty()),
            2 => "<\"s\">".to_string(),
            _ => format!("<{}>", TYPES[..8].choose(&mut self.rng).unwrap()),
        };
        let sigil = if self.rng.random_bool(0.9) { '!' } else { '#' };
        let ty = format!("{sigil}cmath.complex{params}");
        match self.rng.random_range(0..4) {
            0 => format!("%0 = \"test.v\"() : () -> {ty}\n"),
            1 => format!("\"test.h\"() ({{\n^bb0(%x: {ty}):\n\"test.end\"() : () -> ()\n}}) : () -> ()\n"),
            2 => format!("\"test.a\"() {{t = {ty}}} : () -> ()\n"),
            _ => format!("\"test.a\"() {{t = [{ty}, i32]}} : () -> ()\n"),
        }
    }
}

/// Operation names of each dialect covered by the differential check.
pub fn differential_targets() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("builtin", vec!["builtin.module"]),
        ("arith", vec!["arith.constant", "arith.addi"]),
        ("func", vec!["func.func", "func.return"]),
        ("scf", vec!["scf.if", "scf.for", "scf.yield"]),
        ("cf", vec!["cf.br", "cf.cond_br"]),
        ("cmath", vec!["cmath.value"]),
    ]
}

/// Runs the differential check with `per_op` programs per operation name
/// and `per_op` type programs for cmath. Returns
/// `(total, accepted, disagreements)`.
pub fn run_differential(seed: u64, per_op: usize) -> (usize, usize, Vec<String>) {
    use rand::SeedableRng;
    let native = native_context();
    let mut gen = InstanceGen::new(StdRng::seed_from_u64(seed));
    let mut total = 0;
    let mut accepted = 0;
    let mut failures = Vec::new();
    for (dialect, ops) in differential_targets() {
        let reloaded = reloaded_context(dialect);
        let mut programs = Vec::new();
        for op in &ops {
            for _ in 0..per_op {
                programs.push(gen.instance(op));
            }
        }
        if dialect == "cmath" {
            for _ in 0..per_op {
                programs.push(gen.cmath_type_instance());
            }
        }
        for p in programs {
            let a = outcome(&p, &native);
            let b = outcome(&p, &reloaded);
            total += 1;
            if a == Ok(Vec::new()) {
                accepted += 1;
            }
            if a != b {
                failures.push(format!("{dialect}: native {a:?}, reloaded {b:?}\n{p}"));
            }
        }
    }
    (total, accepted, failures)
}
