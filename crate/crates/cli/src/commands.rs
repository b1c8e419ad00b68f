use std::collections::BTreeSet;
use std::fmt::Display;

use amalgamation::{free_amalgam, tree_amalgam, AmalgamationProblem, TreeAmalgamSpec, TreeRecipe};
use arrows::{check_arrow, ramsey_degree_in, tangent_numbers, ArrowError, ArrowResult, ColoringWitness, WitnessProperty};
use clap::{Args, Parser, Subcommand, ValueEnum};
use completion::{
    ba_embedding_correspondence, check_c_relation, complete_equivalence, complete_metric, complete_poset_linext,
    extend_linear_order, CompletionError, EdgeLabelledGraph, EquivalenceOutcome, MetricOutcome, OrderWitness,
};
use eppa::{
    check_coherence, is_eppa_witness, npartite_tournament_witness, Coherence, EppaError, EppaInstance, EppaVerdict,
};
use halesjewett::{find_bad_coloring, hj_number, HjError, HjNumber};
use orientations::{
    class_membership, find_2orientation, predimension, substructure_order, Class, OrientError, OrientOptions, SubOrder,
    DEFAULT_BOUND,
};
use partite::{
    induced_construction, induced_partite_lemma, partite_lemma, picture_lemma, recursive_closed_construction, sparsen,
    validate_partite, Caps, ClosedOptions, ConstructionOptions, ExponentPolicy, ExtensionPolicy, Mode, PartiteError,
    PartiteSystem, PictureOptions, TargetSource,
};
use structures::{resolve_symbols, Constraints, Language, MapSearch, SearchError, SearchKind, Structure, SymbolKind};

use crate::cert::{parse_certificate, Certificate, Verdict};
use crate::checks::{closed_copies_ok, construction_checks, lemma_checks, sparsen_checks};
use crate::format::{parse_structure_file, structure_to_file, Section};
use crate::replay::check_witness;

pub const DEFAULT_NODE_CAP: u64 = 10_000_000;
pub const DEFAULT_MAX_VERTICES: usize = 100_000;

/// Exit code and everything written to standard output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

enum Fail {
    Invalid(String),
    Cap(String),
}

type R<T> = Result<T, Fail>;

fn invalid<T>(msg: impl Display) -> R<T> {
    Err(Fail::Invalid(msg.to_string()))
}

impl From<SearchError> for Fail {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::CapExceeded(_) => Fail::Cap(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<ArrowError> for Fail {
    fn from(e: ArrowError) -> Self {
        match e {
            ArrowError::SearchCapExceeded(_) => Fail::Cap(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<PartiteError> for Fail {
    fn from(e: PartiteError) -> Self {
        match e {
            PartiteError::SizeCapExceeded { .. } | PartiteError::StepCapExceeded(_) => Fail::Cap(e.to_string()),
            PartiteError::Search(s) => s.into(),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<EppaError> for Fail {
    fn from(e: EppaError) -> Self {
        match e {
            EppaError::Search(s) => s.into(),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<CompletionError> for Fail {
    fn from(e: CompletionError) -> Self {
        match e {
            CompletionError::TooLarge(_) => Fail::Cap(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<OrientError> for Fail {
    fn from(e: OrientError) -> Self {
        match e {
            OrientError::BoundExceeded(..) => Fail::Cap(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<HjError> for Fail {
    fn from(e: HjError) -> Self {
        match e {
            HjError::SearchCapExceeded(_) => Fail::Cap(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ramsey", version, about = "Structural Ramsey toolkit with replayable certificates")]
struct Cli {
    /// Worker threads; results never depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Also write the certificate to this path.
    #[arg(long, global = true)]
    cert: Option<String>,
    /// Node budget for each exhaustive search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,
    /// Vertex cap for constructed structures.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a structure file and summarize it.
    Validate { file: String },
    /// Enumerate embeddings of A into B.
    Emb {
        a: String,
        b: String,
        /// Treat unary `@p` relations as partite predicates and preserve them.
        #[arg(long)]
        projection: bool,
        /// Only embeddings whose image is closed under these symbols.
        #[arg(long, value_delimiter = ',')]
        closed: Vec<String>,
    },
    /// Free amalgam of LEFT and RIGHT over BASE, or a tree amalgam from a recipe file.
    Amalgam {
        #[arg(long)]
        free: bool,
        #[arg(long, conflicts_with = "free")]
        tree: Option<String>,
        inputs: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        alpha1: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        alpha2: Vec<usize>,
    },
    /// Decide C -> (B)^A_r.
    Arrow {
        a: String,
        b: String,
        c: String,
        #[arg(long)]
        colors: usize,
        /// Also compute the least t with C -> (B)^A_{r,t}.
        #[arg(long)]
        degree: bool,
    },
    /// Partite lemmas, pictures and constructions.
    #[command(subcommand)]
    Partite(PartiteCmd),
    /// Completions: metric, equivalence, order, poset, C-relation.
    #[command(subcommand)]
    Complete(CompleteCmd),
    /// Compare embeddings of ordered Boolean algebras with rigid surjections.
    BaCorr { m: usize, k: usize },
    /// Extension property for partial automorphisms.
    #[command(subcommand)]
    Eppa(EppaCmd),
    /// Predimension classes and 2-orientations.
    #[command(subcommand)]
    Orient(OrientCmd),
    /// The first k tangent numbers.
    Tangent { k: usize },
    /// Hales-Jewett number by exhaustive search.
    Hj {
        sigma: usize,
        r: usize,
        #[arg(long)]
        cap: usize,
    },
    /// Replay a certificate.
    Verify { cert: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Extension {
    Words,
    All,
}

#[derive(Args, Debug)]
struct Construction {
    /// `witness:N`, `hj:FALLBACK` or `steps:N1,N2,...`.
    #[arg(long, default_value = "witness:1")]
    exponent_policy: String,
    #[arg(long, value_enum, default_value = "words")]
    extension: Extension,
    /// Comma-separated `vertices=N`, `tuples=N`, `steps=N`, `nodes=N`.
    #[arg(long)]
    caps: Option<String>,
}

#[derive(Subcommand, Debug)]
enum PartiteCmd {
    /// Partite lemma for A and an A-partite B (predicates as unary `@p` relations).
    Lemma {
        a: String,
        b: String,
        #[arg(long)]
        exponent: usize,
        /// Non-induced variant: A is read as a transversal system.
        #[arg(long)]
        non_induced: bool,
        #[arg(long)]
        caps: Option<String>,
    },
    /// One picture step for alpha: A -> D on a D-partite B.
    Picture {
        a: String,
        d: String,
        b: String,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<usize>,
        #[arg(long)]
        exponent: usize,
        #[arg(long, value_enum, default_value = "words")]
        extension: Extension,
        #[arg(long)]
        caps: Option<String>,
    },
    /// Iterated induced construction for A ⊆ B into the target D.
    Induced {
        a: String,
        b: String,
        d: String,
        #[command(flatten)]
        opts: Construction,
        /// Certify the output with check_arrow using this many colors.
        #[arg(long)]
        arrow_colors: Option<usize>,
    },
    /// Sparsening of C0 with tree-like witnesses.
    Sparsen {
        a: String,
        b: String,
        c0: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        opts: Construction,
    },
    /// Closed construction for ordered A ⊆ B.
    Closed {
        a: String,
        b: String,
        #[arg(long, value_delimiter = ',')]
        closed: Vec<String>,
        #[arg(long, conflicts_with = "predicates")]
        target: Option<String>,
        #[arg(long)]
        predicates: Option<usize>,
        #[command(flatten)]
        opts: Construction,
    },
}

#[derive(Subcommand, Debug)]
enum CompleteCmd {
    /// Shortest-path metric completion of a distance-labelled graph.
    Metric { input: String },
    /// Equivalence completion of an {E, N} graph.
    Equiv { input: String },
    /// Extend `<` to a linear order.
    Order { input: String },
    /// Linear extension respecting `ll`.
    Poset { input: String },
    /// Check the C-relation axioms.
    Crel { input: String },
}

#[derive(Subcommand, Debug)]
enum EppaCmd {
    /// Is B an EPPA witness for A?
    Check {
        a: String,
        b: String,
        #[arg(long, value_delimiter = ',')]
        inclusion: Option<Vec<usize>>,
    },
    /// Are the found extensions coherent?
    Coherence {
        a: String,
        b: String,
        #[arg(long, value_delimiter = ',')]
        inclusion: Option<Vec<usize>>,
    },
    /// Product witness for an n-partite tournament.
    Npartite {
        a: String,
        #[arg(long, value_delimiter = ',')]
        parts: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    C0,
    Cf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WhichOrder {
    S,
    D,
}

#[derive(Subcommand, Debug)]
enum OrientCmd {
    /// Predimension 2|V| - |E|.
    Delta { g: String },
    /// Membership in C0 or C_F.
    Class {
        g: String,
        #[arg(long, value_enum, default_value = "c0")]
        class: ClassArg,
        #[arg(long)]
        base: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Find a 2-orientation.
    Orient {
        g: String,
        #[arg(long, value_delimiter = ',')]
        closed: Option<Vec<usize>>,
        #[arg(long)]
        d_closed: bool,
    },
    /// Decide H ≤_s G or H ≤_d G.
    Order {
        g: String,
        #[arg(long, value_delimiter = ',')]
        sub: Vec<usize>,
        #[arg(long, value_enum)]
        which: WhichOrder,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
}

struct Report {
    kind: String,
    verdict: Verdict,
    lines: Vec<String>,
    certify: bool,
}

impl Report {
    fn new(kind: &str, holds: bool, lines: Vec<String>) -> Self {
        let verdict = if holds { Verdict::Holds } else { Verdict::Fails };
        Report { kind: kind.to_string(), verdict, lines, certify: true }
    }

    fn plain(lines: Vec<String>) -> Self {
        Report { kind: String::new(), verdict: Verdict::Holds, lines, certify: false }
    }
}

struct Ctx {
    embedded: Option<Vec<Structure>>,
    loaded: Vec<(String, Structure)>,
    node_cap: u64,
    max_vertices: usize,
}

fn read_file(path: &str) -> R<String> {
    std::fs::read_to_string(path).or_else(|e| invalid(format!("cannot read {path}: {e}")))
}

impl Ctx {
    /// Resolves `path[:name]` (or `@i` when replaying) to a structure.
    fn load(&mut self, token: &str) -> R<Structure> {
        if let Some((_, s)) = self.loaded.iter().find(|(t, _)| t == token) {
            return Ok(s.clone());
        }
        let s = match &self.embedded {
            Some(inputs) => {
                let i: usize = match token.strip_prefix('@').and_then(|i| i.parse().ok()) {
                    Some(i) => i,
                    None => return invalid(format!("expected an embedded input `@i`, found `{token}`")),
                };
                match inputs.get(i) {
                    Some(s) => s.clone(),
                    None => return invalid(format!("no embedded input {token}")),
                }
            }
            None => {
                let (path, name) = match token.rsplit_once(':') {
                    Some((p, n)) if !std::path::Path::new(token).exists() => (p, Some(n)),
                    _ => (token, None),
                };
                let file = parse_structure_file(&read_file(path)?).or_else(|e| invalid(format!("{path}: {e}")))?;
                match name {
                    Some(n) => match file.structure(n) {
                        Some(s) => s.clone(),
                        None => return invalid(format!("{path}: no structure `{n}`")),
                    },
                    None => {
                        let all: Vec<_> = file.structures().collect();
                        match all.as_slice() {
                            [(_, s)] => (*s).clone(),
                            [] => return invalid(format!("{path}: no structure")),
                            _ => return invalid(format!("{path}: several structures, name one as {path}:NAME")),
                        }
                    }
                }
            }
        };
        self.loaded.push((token.to_string(), s.clone()));
        Ok(s)
    }

    fn caps(&self, spec: Option<&str>) -> R<Caps> {
        let mut caps = Caps { max_vertices: self.max_vertices, max_nodes: self.node_cap, ..Caps::default() };
        for item in spec.unwrap_or("").split(',').filter(|s| !s.is_empty()) {
            let Some((k, v)) = item.split_once('=') else { return invalid(format!("bad cap `{item}`")) };
            let v: u64 = v.parse().or_else(|_| invalid(format!("bad cap value `{item}`")))?;
            match k {
                "vertices" => caps.max_vertices = v as usize,
                "tuples" => caps.max_tuples = v as usize,
                "steps" => caps.max_steps = v as usize,
                "nodes" => caps.max_nodes = v,
                _ => return invalid(format!("unknown cap `{k}`")),
            }
        }
        Ok(caps)
    }

    fn construction(&self, c: &Construction) -> R<ConstructionOptions> {
        let exponent = parse_policy(&c.exponent_policy)?;
        let extension = match c.extension {
            Extension::Words => ExtensionPolicy::ParameterWords,
            Extension::All => ExtensionPolicy::AllEmbeddings,
        };
        let caps = self.caps(c.caps.as_deref())?;
        Ok(ConstructionOptions { exponent, picture: PictureOptions { extension, closed: None, caps } })
    }
}

fn parse_policy(s: &str) -> R<ExponentPolicy> {
    let bad = || Fail::Invalid(format!("bad exponent policy `{s}`"));
    let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
    let nums: Vec<usize> = arg.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<R<_>>()?;
    match (kind, nums.as_slice()) {
        ("witness", [n]) => Ok(ExponentPolicy::Witness(*n)),
        ("hj", [f]) => Ok(ExponentPolicy::HjAttempt { fallback: *f }),
        ("steps", v) if !v.is_empty() => Ok(ExponentPolicy::PerStep(v.to_vec())),
        _ => Err(bad()),
    }
}

fn ids(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Full => "full",
        Mode::Witness => "witness",
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn structure_lines(name: &str, s: &Structure) -> Vec<String> {
    structure_to_file(name, s).lines().map(str::to_string).collect()
}

/// Splits unary `@p` relations off as a projection.
fn split_partite(s: &Structure) -> R<(Structure, Vec<usize>, usize)> {
    let l = s.language();
    let mut base = Language::new();
    let mut preds: Vec<(usize, usize)> = Vec::new();
    for sym in l.symbols() {
        match sym.name.strip_prefix('@') {
            Some(p) if sym.kind == SymbolKind::Relation && sym.arity == 1 => {
                let p: usize = p.parse().or_else(|_| invalid(format!("bad predicate name `{}`", sym.name)))?;
                preds.push((p, l.rel_index(&sym.name).expect("declared")));
            }
            _ => {
                let added = match sym.kind {
                    SymbolKind::Relation => base.add_relation(&sym.name, sym.arity),
                    SymbolKind::Function => base.add_function(&sym.name, sym.arity),
                };
                added.or_else(|e| invalid(e))?;
            }
        }
    }
    preds.sort_unstable();
    if preds.iter().enumerate().any(|(i, &(p, _))| i != p) {
        return invalid("predicates must be named @0, @1, ... without gaps");
    }
    let mut projection = vec![usize::MAX; s.size()];
    for &(p, r) in &preds {
        for t in s.tuples(r) {
            if projection[t[0]] != usize::MAX {
                return invalid(format!("vertex {} lies in two predicates", t[0]));
            }
            projection[t[0]] = p;
        }
    }
    if let Some(v) = projection.iter().position(|&p| p == usize::MAX) {
        return invalid(format!("vertex {v} lies in no predicate"));
    }
    let reduct = s.reduct(&base).or_else(|e| invalid(e))?;
    Ok((reduct, projection, preds.len()))
}

fn coloring_lines(w: &ColoringWitness, prefix: &str) -> Vec<String> {
    let property = match w.property {
        WitnessProperty::NoMonochromatic => "no-monochromatic".to_string(),
        WitnessProperty::Rigidity => "rigidity".to_string(),
        WitnessProperty::EveryCopyExceeds(t) => format!("every-copy-exceeds {t}"),
    };
    vec![format!("{prefix}property {property}"), format!("{prefix}coloring {}", ids(&w.assignment))]
}

fn cmd_validate(file: &str) -> R<Report> {
    let f = parse_structure_file(&read_file(file)?).or_else(|e| invalid(format!("{file}: {e}")))?;
    let mut lines = Vec::new();
    for s in &f.sections {
        match s {
            Section::Language { name, language } => {
                lines.push(format!("language {name}: {} relations, {} functions", language.rel_count(), language.fun_count()))
            }
            Section::Structure { name, over, structure } => lines.push(format!(
                "structure {name} over {over}: {} vertices, {} tuples{}",
                structure.size(),
                structure.tuple_count(),
                if structure.is_ordered() { ", ordered" } else { "" }
            )),
        }
    }
    Ok(Report::plain(lines))
}

fn cmd_emb(ctx: &mut Ctx, a: &str, b: &str, projection: bool, closed: &[String]) -> R<Report> {
    let (mut a, mut b) = (ctx.load(a)?, ctx.load(b)?);
    let mut c = Constraints::default();
    if projection {
        let (ra, pa, _) = split_partite(&a)?;
        let (rb, pb, _) = split_partite(&b)?;
        c = Constraints::projection(&pa, &pb);
        (a, b) = (ra, rb);
    }
    if !closed.is_empty() {
        c = c.with_u_closed(resolve_symbols(b.language(), closed).or_else(|e| invalid(e))?);
    }
    let maps = MapSearch::new(&a, &b, SearchKind::Embedding).constraints(c).node_cap(ctx.node_cap).collect()?;
    let mut lines: Vec<String> = maps.iter().map(|f| format!("embedding {}", ids(f))).collect();
    lines.push(format!("count {}", maps.len()));
    Ok(Report::new("emb", true, lines))
}

fn parse_list(s: &str) -> R<Vec<usize>> {
    s.split(',').filter(|x| !x.is_empty()).map(|x| x.parse().or_else(|_| invalid(format!("bad list `{s}`")))).collect()
}

/// Recipe file: `leaf STRUCT`, then one node per line, `leaf` or
/// `join I J over STRUCT f1 LIST f2 LIST`; the last node is the root.
fn parse_tree(ctx: &mut Ctx, text: &str) -> R<TreeAmalgamSpec> {
    let mut leaf = None;
    let mut nodes: Vec<Option<TreeRecipe>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let w: Vec<&str> = line.split_whitespace().collect();
        let take = |nodes: &mut Vec<Option<TreeRecipe>>, k: &str| -> R<TreeRecipe> {
            let k: usize = k.parse().or_else(|_| invalid(format!("recipe line {}: bad node `{k}`", i + 1)))?;
            nodes.get_mut(k).and_then(Option::take).ok_or_else(|| Fail::Invalid(format!("recipe line {}: node {k} unavailable", i + 1)))
        };
        match w.as_slice() {
            ["leaf", s] if leaf.is_none() => leaf = Some(ctx.load(s)?),
            ["leaf"] => nodes.push(Some(TreeRecipe::Leaf)),
            ["join", l, r, "over", s, "f1", f1, "f2", f2] => {
                let (left, right) = (take(&mut nodes, l)?, take(&mut nodes, r)?);
                let overlap = ctx.load(s)?;
                nodes.push(Some(TreeRecipe::join(left, right, overlap, parse_list(f1)?, parse_list(f2)?)));
            }
            _ => return invalid(format!("recipe line {}: cannot parse `{line}`", i + 1)),
        }
    }
    let leaf = leaf.ok_or_else(|| Fail::Invalid("recipe has no `leaf STRUCT` line".into()))?;
    let recipe = nodes.pop().flatten().ok_or_else(|| Fail::Invalid("recipe has no nodes".into()))?;
    if nodes.iter().any(Option::is_some) {
        return invalid("recipe leaves unused nodes");
    }
    Ok(TreeAmalgamSpec { leaf, recipe })
}

fn cmd_amalgam(ctx: &mut Ctx, tree: Option<&str>, inputs: &[String], alpha1: &[usize], alpha2: &[usize]) -> R<Report> {
    if let Some(path) = tree {
        if !inputs.is_empty() {
            return invalid("--tree takes no positional structures");
        }
        let spec = parse_tree(ctx, &read_file(path)?)?;
        let t = tree_amalgam(&spec).or_else(|e| invalid(e))?;
        let mut lines = structure_lines("amalgam", &t.structure);
        lines.extend(t.copies.iter().map(|c| format!("copy {}", ids(c))));
        return Ok(Report::plain(lines));
    }
    let [base, left, right] = inputs else { return invalid("amalgam needs BASE LEFT RIGHT") };
    let (base, left, right) = (ctx.load(base)?, ctx.load(left)?, ctx.load(right)?);
    let p = AmalgamationProblem::new(base, left, right, alpha1.to_vec(), alpha2.to_vec()).or_else(|e| invalid(e))?;
    let am = free_amalgam(&p);
    let mut lines = structure_lines("amalgam", &am.structure);
    lines.push(format!("beta1 {}", ids(&am.beta1)));
    lines.push(format!("beta2 {}", ids(&am.beta2)));
    Ok(Report::new("amalgam", true, lines))
}

fn cmd_arrow(ctx: &mut Ctx, a: &str, b: &str, c: &str, r: usize, degree: bool) -> R<Report> {
    let (a, b, c) = (ctx.load(a)?, ctx.load(b)?, ctx.load(c)?);
    let res = check_arrow(&a, &b, &c, r, ctx.node_cap)?;
    let mut lines = vec![format!("arrow {} with {r} colors", if res.holds() { "holds" } else { "fails" })];
    if let ArrowResult::Fails(w) = &res {
        lines.extend(coloring_lines(w, ""));
    }
    if degree {
        let d = ramsey_degree_in(&a, &b, &c, r, ctx.node_cap)?;
        lines.push(match d.degree {
            Some(t) => format!("degree {t}"),
            None => "degree none".to_string(),
        });
        lines.push(format!("automorphisms-of-a {}", d.automorphisms_of_a));
        if let Some(cd) = d.copy_degree() {
            lines.push(format!("copy-degree {cd}"));
        }
        if let Some(w) = &d.below {
            lines.extend(coloring_lines(w, "below-"));
        }
    }
    Ok(Report::new("arrow", res.holds(), lines))
}

fn cmd_partite(ctx: &mut Ctx, cmd: &PartiteCmd) -> R<Report> {
    match cmd {
        PartiteCmd::Lemma { a, b, exponent, non_induced, caps } => {
            let a = ctx.load(a)?;
            let (rb, proj, preds) = split_partite(&ctx.load(b)?)?;
            let caps = ctx.caps(caps.as_deref())?;
            let bs = PartiteSystem::new(rb.clone(), proj, preds);
            let out = if *non_induced {
                partite_lemma(&PartiteSystem::transversal(&a), &bs, *exponent, &caps)?
            } else {
                induced_partite_lemma(&a, &bs, *exponent, None, &caps)?
            };
            let ch = lemma_checks(&a, &rb, &out, !non_induced);
            let valid = validate_partite(&out.system, None, None).is_valid();
            let lines = vec![
                format!("alphabet {}", out.witnesses.sigma.len()),
                format!("exponent {exponent}"),
                format!("mode {}", mode_name(out.mode)),
                format!("vertices {}", out.system.size()),
                format!("tuples {}", out.system.structure.tuple_count()),
                format!("partite-system {}", ok(valid)),
                format!("e-embeddings {} ({} words)", ok(ch.e_embeddings), ch.words),
                format!("f-embeddings {} ({} parameter words)", ok(ch.f_embeddings), ch.parameter_words),
                format!("composition {}", ok(ch.composition)),
                format!("projection {}", ok(ch.projection)),
            ];
            Ok(Report::new("partite-lemma", valid && ch.all(), lines))
        }
        PartiteCmd::Picture { a, d, b, alpha, exponent, extension, caps } => {
            let (a, d) = (ctx.load(a)?, ctx.load(d)?);
            let (rb, proj, preds) = split_partite(&ctx.load(b)?)?;
            let extension = match extension {
                Extension::Words => ExtensionPolicy::ParameterWords,
                Extension::All => ExtensionPolicy::AllEmbeddings,
            };
            let opts = PictureOptions { extension, closed: None, caps: ctx.caps(caps.as_deref())? };
            let step = picture_lemma(&a, &d, &PartiteSystem::new(rb, proj, preds), alpha, *exponent, &opts)?;
            let valid = validate_partite(&step.system, Some(&d), None).is_valid();
            let rec = &step.record;
            let lines = vec![
                format!("alphabet {}", rec.sigma),
                format!("exponent {}", rec.exponent),
                format!("mode {}", mode_name(rec.mode)),
                format!("core {}", rec.core_size),
                format!("extensions {}", rec.extensions.len()),
                format!("vertices {}", step.system.size()),
                format!("partite-system {}", ok(valid)),
            ];
            Ok(Report::new("partite-picture", valid, lines))
        }
        PartiteCmd::Induced { a, b, d, opts, arrow_colors } => {
            let (a, b, d) = (ctx.load(a)?, ctx.load(b)?, ctx.load(d)?);
            let o = ctx.construction(opts)?;
            let t = induced_construction(&a, &b, &d, &o)?;
            let ch = construction_checks(&t, &d);
            let mut lines = vec![format!("copies-of-b {}", t.betas.len()), format!("steps {}", t.steps.len())];
            for (i, s) in t.steps.iter().enumerate() {
                lines.push(format!(
                    "step {i}: alphabet {} exponent {} mode {} vertices {}",
                    s.sigma,
                    s.exponent,
                    mode_name(s.mode),
                    t.pictures[i + 1].size()
                ));
            }
            let c = t.final_structure();
            lines.push(format!("mode {}", mode_name(t.mode())));
            lines.push(format!("vertices {}", c.size()));
            lines.push(format!("tuples {}", c.tuple_count()));
            lines.push(format!("partite-systems {}", ok(ch.pictures_valid)));
            lines.push(format!("order-acyclic {}", ok(ch.order_acyclic)));
            match &ch.unprojected {
                None => lines.push("irreducible-projection ok".into()),
                Some((p, v)) => lines.push(format!("irreducible-projection FAILED picture {p} set {}", ids(v))),
            }
            let mut holds = ch.all();
            if let Some(r) = arrow_colors {
                let res = check_arrow(&a, &b, c, *r, ctx.node_cap)?;
                lines.push(format!("arrow {} with {r} colors", if res.holds() { "holds" } else { "fails" }));
                if let ArrowResult::Fails(w) = &res {
                    lines.extend(coloring_lines(w, ""));
                }
                holds &= res.holds();
            }
            Ok(Report::new("partite-induced", holds, lines))
        }
        PartiteCmd::Sparsen { a, b, c0, n, opts } => {
            let (a, b, c0) = (ctx.load(a)?, ctx.load(b)?, ctx.load(c0)?);
            let o = ctx.construction(opts)?;
            let r = sparsen(&a, &b, &c0, *n, &o)?;
            let ch = sparsen_checks(&a, &b, &c0, *n, &r);
            let mut lines = vec![
                format!("iterations {}", r.traces.len()),
                format!("vertices {}", r.structure.size()),
                format!("tuples {}", r.structure.tuple_count()),
                format!("projection {}", ids(&r.projection)),
                format!("homomorphism-embedding {}", ok(ch.projection)),
                format!("extensions {} {}", r.extensions.len(), ok(ch.extensions)),
                format!("irreducible-cover {}", ok(ch.covered)),
                format!("tree-witnesses {} checked {} {}", r.witnesses.len(), ch.treelike_checked, ok(ch.treelike)),
                format!("unresolved {}", ch.unresolved),
            ];
            for w in &r.unresolved {
                lines.push(format!("unresolved-set {}", ids(w)));
            }
            Ok(Report::new("partite-sparsen", ch.all(), lines))
        }
        PartiteCmd::Closed { a, b, closed, target, predicates, opts } => {
            let (a, b) = (ctx.load(a)?, ctx.load(b)?);
            let source = match (target, predicates) {
                (Some(d), _) => TargetSource::Given(ctx.load(d)?),
                (None, Some(k)) => TargetSource::NonInduced { predicates: *k },
                (None, None) => return invalid("give --target D or --predicates K"),
            };
            let u = resolve_symbols(b.language(), closed).or_else(|e| invalid(e))?;
            let o = ClosedOptions { target: source, construction: ctx.construction(opts)? };
            let c = recursive_closed_construction(&a, &b, &u, &o)?;
            let copies_ok = closed_copies_ok(&b, &c.structure, &c.copies, &u);
            let transversal = c.transversal.iter().all(|&t| t);
            let lines = vec![
                format!("target-vertices {}", c.target.size()),
                format!("outer-steps {}", c.alphas.len()),
                format!("vertices {}", c.structure.size()),
                format!("tuples {}", c.structure.tuple_count()),
                format!("transversal {}", ok(transversal)),
                format!("copies {} {}", c.copies.len(), ok(copies_ok)),
            ];
            Ok(Report::new("partite-closed", copies_ok && transversal, lines))
        }
    }
}

fn cmd_complete(ctx: &mut Ctx, cmd: &CompleteCmd) -> R<Report> {
    match cmd {
        CompleteCmd::Metric { input } => {
            let g = EdgeLabelledGraph::from_structure(&ctx.load(input)?)?;
            Ok(match complete_metric(&g) {
                MetricOutcome::Completed(m) => {
                    let mut lines = vec!["metric completion".to_string()];
                    lines.extend(m.labels.iter().map(|((u, v), q)| format!("distance {u} {v} {q}")));
                    Report::new("complete-metric", true, lines)
                }
                MetricOutcome::NonMetric(c) => {
                    let labels: Vec<String> = c.labels.iter().map(|q| q.to_string()).collect();
                    let lines =
                        vec!["non-metric cycle".to_string(), format!("cycle {}", ids(&c.cycle)), format!("labels {}", labels.join(" "))];
                    Report::new("complete-metric", false, lines)
                }
            })
        }
        CompleteCmd::Equiv { input } => Ok(match complete_equivalence(&ctx.load(input)?)? {
            EquivalenceOutcome::Completed(s) => {
                let mut lines = vec!["equivalence completion".to_string()];
                lines.extend(structure_lines("completion", &s));
                Report::new("complete-equiv", true, lines)
            }
            EquivalenceOutcome::Conflict { n_pair, path } => Report::new(
                "complete-equiv",
                false,
                vec![format!("conflict N {} {}", n_pair.0, n_pair.1), format!("path {}", ids(&path))],
            ),
        }),
        CompleteCmd::Order { input } | CompleteCmd::Poset { input } => {
            let s = ctx.load(input)?;
            let (kind, res) = match cmd {
                CompleteCmd::Order { .. } => ("complete-order", extend_linear_order(&s)?),
                _ => ("complete-poset", complete_poset_linext(&s)?),
            };
            Ok(match res {
                Ok(t) => {
                    let mut lines = vec!["linear extension".to_string()];
                    lines.extend(structure_lines("completion", &t));
                    Report::new(kind, true, lines)
                }
                Err(w) => Report::new(kind, false, vec![order_witness(&w)]),
            })
        }
        CompleteCmd::Crel { input } => {
            let rep = check_c_relation(&ctx.load(input)?)?;
            let mut lines = vec![format!("convexity-checked {}", rep.checked_convexity)];
            match &rep.violation {
                None => lines.push("c-relation axioms hold".into()),
                Some((ax, t)) => lines.push(format!("violation {ax:?} {}", ids(t))),
            }
            Ok(Report::new("complete-crel", rep.holds(), lines))
        }
    }
}

fn order_witness(w: &OrderWitness) -> String {
    match w {
        OrderWitness::ReflexivePair(v) => format!("reflexive {v}"),
        OrderWitness::SymmetricPair(u, v) => format!("symmetric {u} {v}"),
        OrderWitness::Cycle(c) => format!("cycle {}", ids(c)),
        OrderWitness::InvariantViolation { clause, pair } => format!("clause {clause} pair {} {}", pair.0, pair.1),
    }
}

fn cmd_ba(m: usize, k: usize) -> R<Report> {
    let c = ba_embedding_correspondence(m, k)?;
    let lines = vec![
        format!("rigid-surjections {}", c.surjections.len()),
        format!("embeddings-searched {}", c.searched),
        format!("induced-maps-certified {}", c.certified),
        format!("round-trip {}", c.round_trip),
    ];
    Ok(Report::new("ba-corr", c.holds(), lines))
}

fn eppa_instance(ctx: &mut Ctx, a: &str, b: &str, inclusion: &Option<Vec<usize>>) -> R<EppaInstance> {
    let (a, b) = (ctx.load(a)?, ctx.load(b)?);
    let inc = inclusion.clone().unwrap_or_else(|| (0..a.size()).collect());
    Ok(EppaInstance::new(a, b, inc)?)
}

fn pa_line(domain: &[usize], map: &[usize]) -> String {
    format!("{} -> {}", ids(domain), ids(map))
}

fn cmd_eppa(ctx: &mut Ctx, cmd: &EppaCmd) -> R<Report> {
    match cmd {
        EppaCmd::Check { a, b, inclusion } => {
            let inst = eppa_instance(ctx, a, b, inclusion)?;
            Ok(match is_eppa_witness(&inst, ctx.node_cap)? {
                EppaVerdict::Verified(t) => {
                    let mut lines = vec![format!("eppa witness verified, {} partial automorphisms", t.entries.len())];
                    lines.extend(t.entries.iter().map(|(p, g)| format!("extend {} by {}", pa_line(&p.domain, &p.map), ids(g))));
                    Report::new("eppa-check", true, lines)
                }
                EppaVerdict::Fails(p) => {
                    Report::new("eppa-check", false, vec![format!("no extension for {}", pa_line(&p.domain, &p.map))])
                }
            })
        }
        EppaCmd::Coherence { a, b, inclusion } => {
            let inst = eppa_instance(ctx, a, b, inclusion)?;
            let table = match is_eppa_witness(&inst, ctx.node_cap)? {
                EppaVerdict::Verified(t) => t,
                EppaVerdict::Fails(p) => {
                    return Ok(Report::new(
                        "eppa-coherence",
                        false,
                        vec![format!("no extension for {}", pa_line(&p.domain, &p.map))],
                    ))
                }
            };
            Ok(match check_coherence(&inst, &table)? {
                Coherence::Coherent => Report::new("eppa-coherence", true, vec!["extensions coherent".into()]),
                Coherence::Violation(f, g) => Report::new(
                    "eppa-coherence",
                    false,
                    vec![format!("incoherent f {} g {}", pa_line(&f.domain, &f.map), pa_line(&g.domain, &g.map))],
                ),
            })
        }
        EppaCmd::Npartite { a, parts } => {
            let a = ctx.load(a)?;
            let w = npartite_tournament_witness(&a, parts)?;
            let inst = EppaInstance::new(a, w.b.clone(), w.psi.clone())?;
            let verdict = is_eppa_witness(&inst, ctx.node_cap)?;
            let mut lines = vec![
                format!("part-size {}", w.part_size),
                format!("witness-vertices {}", w.b.size()),
                format!("witness-arcs {}", w.b.tuple_count()),
                format!("psi {}", ids(&w.psi)),
            ];
            let holds = match &verdict {
                EppaVerdict::Verified(t) => {
                    lines.push(format!("eppa witness verified, {} partial automorphisms", t.entries.len()));
                    true
                }
                EppaVerdict::Fails(p) => {
                    lines.push(format!("no extension for {}", pa_line(&p.domain, &p.map)));
                    false
                }
            };
            Ok(Report::new("eppa-npartite", holds, lines))
        }
    }
}

fn cmd_orient(ctx: &mut Ctx, cmd: &OrientCmd) -> R<Report> {
    match cmd {
        OrientCmd::Delta { g } => {
            let d = predimension(&ctx.load(g)?)?;
            Ok(Report::new("orient-delta", true, vec![format!("delta {d}")]))
        }
        OrientCmd::Class { g, class, base, bound } => {
            let which = match class {
                ClassArg::C0 => Class::C0,
                ClassArg::Cf => base.map_or(Class::cf(), |b| Class::CF { base: b }),
            };
            let m = class_membership(&ctx.load(g)?, which, *bound)?;
            let lines = match &m.violation {
                None => vec!["member".to_string()],
                Some(v) => vec!["not a member".to_string(), format!("violation {}", ids(v))],
            };
            Ok(Report::new("orient-class", m.member, lines))
        }
        OrientCmd::Orient { g, closed, d_closed } => {
            let g = ctx.load(g)?;
            let opts = OrientOptions {
                closed: closed.as_ref().map(|c| c.iter().copied().collect::<BTreeSet<usize>>()),
                d_closed: *d_closed,
                fixed: Vec::new(),
            };
            Ok(match find_2orientation(&g, &opts)? {
                Some(o) => {
                    let mut lines = vec![format!("delta {}", predimension(&g)?)];
                    lines.extend(o.arcs.iter().map(|(u, v)| format!("arc {u} {v}")));
                    lines.push(format!("root-multiplicity {}", o.root_multiplicity()));
                    Report::new("orient-orient", true, lines)
                }
                None => {
                    let mut lines = vec!["no 2-orientation".to_string()];
                    if opts.closed.is_none() && !opts.d_closed {
                        if let Some(v) = class_membership(&g, Class::C0, g.size().max(DEFAULT_BOUND))?.violation {
                            lines.push(format!("violation {}", ids(&v)));
                        }
                    }
                    Report::new("orient-orient", false, lines)
                }
            })
        }
        OrientCmd::Order { g, sub, which, bound } => {
            let which_o = match which {
                WhichOrder::S => SubOrder::LeqS,
                WhichOrder::D => SubOrder::LeqD,
            };
            let h: BTreeSet<usize> = sub.iter().copied().collect();
            let rep = substructure_order(&ctx.load(g)?, &h, which_o, *bound)?;
            let lines = match &rep.witness {
                None => vec!["order holds".to_string()],
                Some(w) => vec!["order fails".to_string(), format!("witness {}", ids(w))],
            };
            Ok(Report::new("orient-order", rep.holds, lines))
        }
    }
}

fn cmd_tangent(k: usize) -> Report {
    let t: Vec<String> = tangent_numbers(k).iter().map(|x| x.to_string()).collect();
    Report::new("tangent", true, vec![t.join(" ")])
}

fn cmd_hj(ctx: &Ctx, sigma: usize, r: usize, cap: usize) -> R<Report> {
    if sigma == 0 {
        return invalid("the alphabet must be non-empty");
    }
    match hj_number(sigma, r, cap, Some(ctx.node_cap))? {
        HjNumber::Exact(n) => {
            let below = find_bad_coloring(sigma, n - 1, r, Some(ctx.node_cap))?.expect("n is least");
            Ok(Report::new("hj", true, vec![format!("hj {n}"), format!("bad-coloring-below {}", ids(&below))]))
        }
        HjNumber::ExceedsCap => Err(Fail::Cap(format!("hj({sigma},{r}) exceeds {cap}"))),
    }
}

fn cmd_verify(path: &str) -> R<Report> {
    let text = read_file(path)?;
    let cert = parse_certificate(&text).or_else(|e| invalid(e))?;
    if cert.argv.first().map(String::as_str) == Some("verify") {
        return invalid("certificates cannot nest verify");
    }
    let original = certificate_block(&text);
    let (outcome, fresh) = run_inner(&cert.argv, Some(cert.inputs.clone()));
    let mut lines = vec![format!("certificate {} verdict {}", cert.kind, cert.verdict.as_str())];
    let identical = match &fresh {
        Some(f) => {
            let t = f.to_text();
            if t == original {
                lines.push("rerun identical".into());
                true
            } else {
                let at = t.lines().zip(original.lines()).position(|(x, y)| x != y).unwrap_or(t.lines().count().min(original.lines().count()));
                lines.push(format!("rerun differs at certificate line {}", at + 1));
                false
            }
        }
        None => {
            lines.push(format!("rerun produced no certificate (exit {})", outcome.code));
            false
        }
    };
    let witness = match check_witness(&cert) {
        Ok(Some(what)) => {
            lines.push(format!("witness replayed: {what}"));
            true
        }
        Ok(None) => {
            lines.push("witness replayed by rerun".into());
            true
        }
        Err(why) => {
            lines.push(format!("witness rejected: {why}"));
            false
        }
    };
    Ok(Report { kind: String::new(), verdict: if identical && witness { Verdict::Holds } else { Verdict::Fails }, lines, certify: false })
}

/// The certificate text from its header through `end inputs`.
fn certificate_block(text: &str) -> String {
    let mut out = String::new();
    let mut on = false;
    for l in text.lines() {
        on |= l.starts_with("cert ");
        if on {
            out.push_str(l);
            out.push('\n');
            if l == "end inputs" {
                break;
            }
        }
    }
    out
}

fn dispatch(ctx: &mut Ctx, cmd: &Cmd) -> R<Report> {
    match cmd {
        Cmd::Validate { file } => cmd_validate(file),
        Cmd::Emb { a, b, projection, closed } => cmd_emb(ctx, a, b, *projection, closed),
        Cmd::Amalgam { free: _, tree, inputs, alpha1, alpha2 } => cmd_amalgam(ctx, tree.as_deref(), inputs, alpha1, alpha2),
        Cmd::Arrow { a, b, c, colors, degree } => cmd_arrow(ctx, a, b, c, *colors, *degree),
        Cmd::Partite(p) => cmd_partite(ctx, p),
        Cmd::Complete(c) => cmd_complete(ctx, c),
        Cmd::BaCorr { m, k } => cmd_ba(*m, *k),
        Cmd::Eppa(e) => cmd_eppa(ctx, e),
        Cmd::Orient(o) => cmd_orient(ctx, o),
        Cmd::Tangent { k } => Ok(cmd_tangent(*k)),
        Cmd::Hj { sigma, r, cap } => cmd_hj(ctx, *sigma, *r, *cap),
        Cmd::Verify { cert } => cmd_verify(cert),
    }
}

/// Arguments as recorded in a certificate: output-only flags dropped,
/// structure arguments replaced by their input index.
fn recorded_argv(args: &[String], loaded: &[(String, Structure)]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--cert" || a == "--threads" {
            skip = true;
            continue;
        }
        if a.starts_with("--cert=") || a.starts_with("--threads=") {
            continue;
        }
        match loaded.iter().position(|(t, _)| t == a) {
            Some(i) => out.push(format!("@{i}")),
            None => out.push(a.clone()),
        }
    }
    out
}

fn run_inner(args: &[String], embedded: Option<Vec<Structure>>) -> (Outcome, Option<Certificate>) {
    let cli = match Cli::try_parse_from(std::iter::once("ramsey".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { crate::EXIT_INVALID } else { crate::EXIT_HOLDS };
            return (Outcome { code, stdout: e.to_string() }, None);
        }
    };
    if cli.threads == 0 {
        return (Outcome { code: crate::EXIT_INVALID, stdout: "error: --threads must be at least 1\n".into() }, None);
    }
    let mut ctx = Ctx { embedded, loaded: Vec::new(), node_cap: cli.node_cap, max_vertices: cli.max_vertices };
    let report = match dispatch(&mut ctx, &cli.cmd) {
        Ok(r) => r,
        Err(Fail::Invalid(m)) => return (Outcome { code: crate::EXIT_INVALID, stdout: format!("error: {m}\n") }, None),
        Err(Fail::Cap(m)) => return (Outcome { code: crate::EXIT_CAP, stdout: format!("cap exceeded: {m}\n") }, None),
    };
    let mut stdout: String = report.lines.iter().map(|l| format!("{l}\n")).collect();
    let cert = report.certify.then(|| Certificate {
        kind: report.kind.clone(),
        argv: recorded_argv(args, &ctx.loaded),
        verdict: report.verdict,
        result: report.lines.clone(),
        inputs: ctx.loaded.iter().map(|(_, s)| s.clone()).collect(),
    });
    if let Some(c) = &cert {
        let text = c.to_text();
        if report.verdict == Verdict::Fails {
            stdout.push_str(&text);
        }
        if let Some(path) = &cli.cert {
            if let Err(e) = std::fs::write(path, &text) {
                return (Outcome { code: crate::EXIT_INVALID, stdout: format!("{stdout}error: cannot write {path}: {e}\n") }, None);
            }
        }
    }
    (Outcome { code: report.verdict.code(), stdout }, cert)
}

/// Runs one command; `args` excludes the program name.
pub fn run_command<S: AsRef<str>>(args: &[S]) -> Outcome {
    let args: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
    run_inner(&args, None).0
}

/// Runs one command with structure arguments `@i` resolved to `inputs[i]`.
pub fn run_command_with_inputs<S: AsRef<str>>(args: &[S], inputs: Vec<Structure>) -> Outcome {
    let args: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
    run_inner(&args, Some(inputs)).0
}
