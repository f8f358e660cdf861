//! JSON problem files in, homology reports and verdicts out.
//!
//! Exit codes: 0 success, 2 rejected input, 3 internal invariant breach.
//! Directory inputs are processed in file-name order; machine output is
//! one JSON document per line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use varbook::chainkit::{homology, homology_all, ChainComplex};
use varbook::json::{
    ComplexWire, GroupWire, HypothesesWire, IntText, LoopWire, MatrixWire, MonodromyInput,
    ObstructionWire, OpenBookWire, PageWire, ProblemFile, ProblemKind,
};
use varbook::obstruct::{
    flexible_obstruction, hyperbolic_form, loop_verdict, preserves_form, Order,
};
use varbook::openbook::{
    build_double, double_action_blocks, formula_path_eligible, middle_homology_from_variation,
    open_book_homology, twisted_double_complex, MethodTag, Monodromy, PageData,
};
use varbook::zlinalg::IntMatrix;

#[derive(Parser)]
#[command(
    name = "varbook",
    version,
    about = "integral homology of open books, exactly"
)]
struct Cli {
    /// Emit machine-readable JSON instead of prose
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a chain complex, or of the double of a page
    Homology(InputArgs),
    /// Closed-manifold homology of an open book, with variation and blocks
    Openbook(OpenbookArgs),
    /// Torsion obstruction verdict for a middle homology group
    Obstruct(ObstructArgs),
    /// Loop detection for a middle-homology automorphism
    Loop(InputArgs),
    /// Run the bundled fixtures against their expected outputs
    Selftest,
}

#[derive(Args)]
struct InputArgs {
    /// Problem file, or a directory of problem files
    input: PathBuf,
}

#[derive(Args)]
struct OpenbookArgs {
    /// Problem file, or a directory of problem files
    input: PathBuf,
    /// Recompute the middle homology from the glued model and report agreement
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Args)]
struct ObstructArgs {
    /// Problem file, or a directory of problem files
    input: PathBuf,
    /// Report the torsion data even when a hypothesis gate fails
    #[arg(long)]
    force: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<varbook::Error> for Failure {
    fn from(e: varbook::Error) -> Self {
        Failure {
            code: if e.is_internal() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("VARBOOK_LOG", "off"))
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Prints one line, exiting quietly when the reader has closed the pipe.
fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{}", line).is_err() {
        std::process::exit(0);
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Homology(args) => for_each_problem(&args.input, cli.json, cmd_homology),
        Command::Openbook(args) => {
            for_each_problem(&args.input, cli.json, |p| cmd_openbook(p, args.oracle_check))
        }
        Command::Obstruct(args) => {
            for_each_problem(&args.input, cli.json, |p| cmd_obstruct(p, args.force))
        }
        Command::Loop(args) => for_each_problem(&args.input, cli.json, cmd_loop),
        Command::Selftest => cmd_selftest(),
    }
}

type Rendered = (serde_json::Value, Vec<String>);

fn for_each_problem(
    input: &Path,
    json: bool,
    mut f: impl FnMut(&ProblemFile) -> Result<Rendered, Failure>,
) -> Result<(), Failure> {
    let files = problem_paths(input)?;
    let many = files.len() > 1;
    for path in files {
        log::debug!("reading {}", path.display());
        let problem = parse_problem(&path)?;
        let (value, lines) =
            f(&problem).map_err(|e| Failure {
                code: e.code,
                message: format!("{}: {}", path.display(), e.message),
            })?;
        if json {
            emit(&serde_json::to_string(&value).expect("report serializes"));
        } else {
            if many {
                emit(&format!("== {} ==", path.display()));
            }
            for line in lines {
                emit(&line);
            }
            if many {
                emit("");
            }
        }
    }
    Ok(())
}

fn problem_paths(input: &Path) -> Result<Vec<PathBuf>, Failure> {
    if input.is_dir() {
        let entries = fs::read_dir(input)
            .map_err(|e| Failure::input(format!("{}: {}", input.display(), e)))?;
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(Failure::input(format!(
                "{}: no .json problem files",
                input.display()
            )));
        }
        Ok(files)
    } else {
        Ok(vec![input.to_path_buf()])
    }
}

fn parse_problem(path: &Path) -> Result<ProblemFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
    let problem: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))?;
    problem.check_version()?;
    Ok(problem)
}

fn payload<T: serde::de::DeserializeOwned>(problem: &ProblemFile) -> Result<T, Failure> {
    serde_json::from_value(problem.payload.clone())
        .map_err(|e| Failure::input(format!("payload for kind {}: {}", problem.kind, e)))
}

fn matrix_text(m: &IntMatrix) -> String {
    let mut s = String::from("[");
    for i in 0..m.rows() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{}", m[(i, j)]);
        }
        s.push(']');
    }
    s.push(']');
    s
}

fn tag_name(tag: MethodTag) -> &'static str {
    match tag {
        MethodTag::Formula => "formula",
        MethodTag::GluedComplex => "glued_complex",
        MethodTag::Closedness => "closedness",
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeGroupReport {
    degree: usize,
    group: GroupWire,
    pretty: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomologyReport {
    kind: String,
    source: String,
    euler_characteristic: i64,
    degrees: Vec<DegreeGroupReport>,
}

fn cmd_homology(problem: &ProblemFile) -> Result<Rendered, Failure> {
    let (source, complex): (&str, ChainComplex) = match problem.kind {
        ProblemKind::ChainHomology => {
            let wire: ComplexWire = payload(problem)?;
            ("chain_complex", wire.to_complex()?)
        }
        ProblemKind::Double => {
            let wire: PageWire = payload(problem)?;
            let page = wire.to_page()?;
            ("double_of_page", build_double(&page)?.complex().clone())
        }
        kind => {
            return Err(Failure::input(format!(
                "homology command cannot read {} problems",
                kind
            )))
        }
    };
    let groups = homology_all(&complex)?;
    let report = HomologyReport {
        kind: problem.kind.to_string(),
        source: source.to_string(),
        euler_characteristic: complex.euler_characteristic(),
        degrees: groups
            .iter()
            .enumerate()
            .map(|(i, g)| DegreeGroupReport {
                degree: i,
                group: GroupWire::from_group(g),
                pretty: g.to_string(),
            })
            .collect(),
    };
    let mut lines = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        lines.push(format!("H_{} = {}", i, g));
    }
    lines.push(format!(
        "euler characteristic: {}",
        report.euler_characteristic
    ));
    Ok((serde_json::to_value(&report).expect("report serializes"), lines))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BookDegreeReport {
    degree: usize,
    group: GroupWire,
    pretty: String,
    method: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockReport {
    degree: usize,
    absolute: GroupWire,
    relative: GroupWire,
    upper_left: MatrixWire,
    upper_right: MatrixWire,
    lower_left: MatrixWire,
    lower_right: MatrixWire,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleReport {
    formula_eligible: bool,
    glued_middle: GroupWire,
    cokernel_middle: Option<GroupWire>,
    agree: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpenBookReport {
    kind: String,
    q: usize,
    dimension: usize,
    groups: Vec<BookDegreeReport>,
    variation_domain: GroupWire,
    variation_codomain: GroupWire,
    variation_matrix: MatrixWire,
    blocks: Vec<BlockReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn cmd_openbook(problem: &ProblemFile, oracle_check: bool) -> Result<Rendered, Failure> {
    if problem.kind != ProblemKind::OpenBook {
        return Err(Failure::input(format!(
            "openbook command cannot read {} problems",
            problem.kind
        )));
    }
    let wire: OpenBookWire = payload(problem)?;
    let page = wire.page.to_page()?;
    match wire.monodromy.to_input(&page)? {
        MonodromyInput::Map(f) => openbook_from_map(problem, &page, &f, oracle_check),
        MonodromyInput::Variation(var) => {
            if oracle_check {
                return Err(Failure::input(
                    "oracle check needs a chain-level monodromy, not a variation matrix",
                ));
            }
            openbook_from_variation(problem, &page, &var)
        }
    }
}

fn openbook_from_map(
    problem: &ProblemFile,
    page: &PageData,
    f: &Monodromy,
    oracle_check: bool,
) -> Result<Rendered, Failure> {
    let obh = open_book_homology(page, f)?;
    let q = page.q();
    let var = obh.variation();

    let groups: Vec<BookDegreeReport> = obh
        .groups()
        .iter()
        .zip(obh.method_tags())
        .enumerate()
        .map(|(i, (g, &tag))| BookDegreeReport {
            degree: i,
            group: GroupWire::from_group(g),
            pretty: g.to_string(),
            method: tag_name(tag).to_string(),
        })
        .collect();

    let mut blocks = Vec::new();
    for i in 0..page.complex().ranks().len() {
        let b = double_action_blocks(page, f, i)?;
        blocks.push(BlockReport {
            degree: i,
            absolute: GroupWire::from_group(b.upper_left().domain()),
            relative: GroupWire::from_group(b.lower_right().domain()),
            upper_left: MatrixWire::from_matrix(b.upper_left().matrix()),
            upper_right: MatrixWire::from_matrix(b.upper_right().matrix()),
            lower_left: MatrixWire::from_matrix(b.lower_left().matrix()),
            lower_right: MatrixWire::from_matrix(b.lower_right().matrix()),
        });
    }

    let oracle = if oracle_check {
        let cone = twisted_double_complex(page, f)?;
        let glued = homology(&cone, q)?;
        let eligible = formula_path_eligible(page)?;
        let cokernel = if eligible {
            Some(middle_homology_from_variation(page, var)?)
        } else {
            None
        };
        let agree = &glued == obh.middle_group()
            && cokernel.as_ref().is_none_or(|c| c == obh.middle_group());
        if !agree {
            return Err(Failure::internal(format!(
                "middle homology routes disagree: report {}, glued {}, cokernel {}",
                obh.middle_group(),
                glued,
                cokernel.map_or("n/a".to_string(), |c| c.to_string())
            )));
        }
        Some(OracleReport {
            formula_eligible: eligible,
            glued_middle: GroupWire::from_group(&glued),
            cokernel_middle: cokernel.as_ref().map(GroupWire::from_group),
            agree,
        })
    } else {
        None
    };

    let report = OpenBookReport {
        kind: problem.kind.to_string(),
        q,
        dimension: 2 * q + 1,
        groups,
        variation_domain: GroupWire::from_group(var.domain()),
        variation_codomain: GroupWire::from_group(var.codomain()),
        variation_matrix: MatrixWire::from_matrix(var.matrix()),
        blocks,
        oracle,
    };

    let mut lines = vec![format!(
        "open book: q = {}, closed manifold of dimension {}",
        q, report.dimension
    )];
    for d in &report.groups {
        lines.push(format!("H_{}(M) = {}  [{}]", d.degree, d.pretty, d.method));
    }
    lines.push(format!(
        "variation {} -> {}: {}",
        var.domain(),
        var.codomain(),
        matrix_text(var.matrix())
    ));
    lines.push("doubled action blocks [[upper_left, upper_right], [lower_left, lower_right]]:".to_string());
    for (i, b) in report.blocks.iter().enumerate() {
        let bm = double_action_blocks(page, f, i)?;
        lines.push(format!(
            "  degree {}: [[{}, {}], [{}, {}]]",
            b.degree,
            matrix_text(bm.upper_left().matrix()),
            matrix_text(bm.upper_right().matrix()),
            matrix_text(bm.lower_left().matrix()),
            matrix_text(bm.lower_right().matrix()),
        ));
    }
    if let Some(o) = &report.oracle {
        lines.push(format!(
            "oracle: glued middle = {}, formula eligible = {}, agreement = {}",
            obh.middle_group(),
            o.formula_eligible,
            o.agree
        ));
    }
    Ok((serde_json::to_value(&report).expect("report serializes"), lines))
}

/// Variation-only input: the formula route gives the groups up to the
/// middle degree; everything above needs a chain-level monodromy.
fn openbook_from_variation(
    problem: &ProblemFile,
    page: &PageData,
    var: &varbook::abgroup::GroupHom,
) -> Result<Rendered, Failure> {
    if !formula_path_eligible(page)? {
        return Err(Failure::input(
            "variation-only input needs a page with handles at most in the middle degree \
             and no relative homology below it",
        ));
    }
    let q = page.q();
    let mut groups = Vec::new();
    for i in 0..q {
        let g = homology(page.complex(), i)?;
        groups.push(BookDegreeReport {
            degree: i,
            group: GroupWire::from_group(&g),
            pretty: g.to_string(),
            method: tag_name(MethodTag::Formula).to_string(),
        });
    }
    let middle = middle_homology_from_variation(page, var)?;
    groups.push(BookDegreeReport {
        degree: q,
        group: GroupWire::from_group(&middle),
        pretty: middle.to_string(),
        method: tag_name(MethodTag::Formula).to_string(),
    });

    let report = OpenBookReport {
        kind: problem.kind.to_string(),
        q,
        dimension: 2 * q + 1,
        groups,
        variation_domain: GroupWire::from_group(var.domain()),
        variation_codomain: GroupWire::from_group(var.codomain()),
        variation_matrix: MatrixWire::from_matrix(var.matrix()),
        blocks: Vec::new(),
        oracle: None,
    };
    let mut lines = vec![format!(
        "open book: q = {}, closed manifold of dimension {}",
        q, report.dimension
    )];
    for d in &report.groups {
        lines.push(format!("H_{}(M) = {}  [{}]", d.degree, d.pretty, d.method));
    }
    lines.push(format!(
        "variation {} -> {}: {}",
        var.domain(),
        var.codomain(),
        matrix_text(var.matrix())
    ));
    lines.push("degrees above the middle need a chain-level monodromy".to_string());
    Ok((serde_json::to_value(&report).expect("report serializes"), lines))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForcedReport {
    torsion: Vec<IntText>,
    would_obstruct: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstructionReport {
    kind: String,
    status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<IntText>>,
    reason: String,
    rule_tags: Vec<String>,
    hypotheses: HypothesesWire,
    q: usize,
    middle_homology: GroupWire,
    middle_pretty: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forced: Option<ForcedReport>,
}

fn cmd_obstruct(problem: &ProblemFile, force: bool) -> Result<Rendered, Failure> {
    if problem.kind != ProblemKind::Obstruction {
        return Err(Failure::input(format!(
            "obstruct command cannot read {} problems",
            problem.kind
        )));
    }
    let wire: ObstructionWire = payload(problem)?;
    wire.check_one_source()?;
    let hyp = wire.hypotheses.to_hypotheses()?;
    let middle = if let Some(gw) = &wire.middle_homology {
        gw.to_group()?
    } else {
        let book = wire.open_book.as_ref().expect("one source is present");
        let page = book.page.to_page()?;
        if page.q() != hyp.q() {
            return Err(Failure::input(format!(
                "open book has q = {} but the hypotheses give dimension {} with q = {}",
                page.q(),
                hyp.dim(),
                hyp.q()
            )));
        }
        match book.monodromy.to_input(&page)? {
            MonodromyInput::Map(f) => open_book_homology(&page, &f)?.middle_group().clone(),
            MonodromyInput::Variation(var) => middle_homology_from_variation(&page, &var)?,
        }
    };

    let verdict = flexible_obstruction(&middle, &hyp);
    let forced = force.then(|| ForcedReport {
        torsion: middle.torsion().iter().cloned().map(IntText).collect(),
        would_obstruct: !middle.torsion().is_empty(),
    });
    let report = ObstructionReport {
        kind: problem.kind.to_string(),
        status: verdict.status().to_string(),
        witness: verdict
            .witness()
            .map(|w| w.iter().cloned().map(IntText).collect()),
        reason: verdict.reason().to_string(),
        rule_tags: verdict.rule_tags().iter().map(|t| t.to_string()).collect(),
        hypotheses: wire.hypotheses.clone(),
        q: hyp.q(),
        middle_homology: GroupWire::from_group(&middle),
        middle_pretty: middle.to_string(),
        forced,
    };

    let mut lines = vec![format!("verdict: {}", report.status)];
    if let Some(w) = verdict.witness() {
        let parts: Vec<String> = w.iter().map(|t| t.to_string()).collect();
        lines.push(format!("witness torsion: [{}]", parts.join(", ")));
    }
    lines.push(format!("reason: {}", report.reason));
    lines.push(format!(
        "assumed: dim = {} (q = {}), c1 vanishes on spheres = {}, page flexible = {}",
        hyp.dim(),
        hyp.q(),
        hyp.c1_vanishes_on_spheres(),
        hyp.page_flexible()
    ));
    lines.push(format!("middle homology: {}", middle));
    if let Some(f) = &report.forced {
        let parts: Vec<String> = f.torsion.iter().map(|t| t.0.to_string()).collect();
        lines.push(format!(
            "forced torsion report: [{}] (would obstruct with all gates passed: {})",
            parts.join(", "),
            f.would_obstruct
        ));
    }
    Ok((serde_json::to_value(&report).expect("report serializes"), lines))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopReport {
    kind: String,
    status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    finite_order: Option<IntText>,
    preserves_form: bool,
    formal_class_preserved: bool,
    reason: String,
    rule_tags: Vec<String>,
}

fn cmd_loop(problem: &ProblemFile) -> Result<Rendered, Failure> {
    if problem.kind != ProblemKind::Loop {
        return Err(Failure::input(format!(
            "loop command cannot read {} problems",
            problem.kind
        )));
    }
    let wire: LoopWire = payload(problem)?;
    let a = wire.automorphism.to_matrix()?;
    let j = hyperbolic_form(wire.g, wire.q_odd)?;
    let preserves = preserves_form(&a, &j)?;
    let verdict = loop_verdict(&a, &j, wire.formal_class_preserved)?;
    let report = LoopReport {
        kind: problem.kind.to_string(),
        status: verdict.status().to_string(),
        order: verdict.order().map(|o| o.to_string()),
        finite_order: verdict.order().and_then(|o| match o {
            Order::Finite(k) => Some(IntText(k.clone())),
            Order::Infinite => None,
        }),
        preserves_form: preserves,
        formal_class_preserved: verdict.formal_class_preserved(),
        reason: verdict.reason().to_string(),
        rule_tags: verdict.rule_tags().iter().map(|t| t.to_string()).collect(),
    };
    let mut lines = vec![format!("verdict: {}", report.status)];
    if let Some(order) = verdict.order() {
        lines.push(format!("automorphism order: {}", order));
    }
    lines.push(format!(
        "form preserved: {}, formal class preserved: {}",
        report.preserves_form, report.formal_class_preserved
    ));
    lines.push(format!("reason: {}", report.reason));
    Ok((serde_json::to_value(&report).expect("report serializes"), lines))
}

struct SelfCheck {
    name: &'static str,
    text: &'static str,
    run: fn(&ProblemFile) -> Result<Rendered, Failure>,
    expect: fn(&serde_json::Value) -> bool,
}

fn cmd_selftest() -> Result<(), Failure> {
    let checks: Vec<SelfCheck> = vec![
        SelfCheck {
            name: "projective plane homology",
            text: include_str!("../fixtures/rp2_homology.json"),
            run: cmd_homology,
            expect: |v| {
                v["degrees"][1]["pretty"] == "Z/2" && v["degrees"][0]["pretty"] == "Z"
            },
        },
        SelfCheck {
            name: "empty complex",
            text: include_str!("../fixtures/empty_homology.json"),
            run: cmd_homology,
            expect: |v| v["degrees"][0]["pretty"] == "0",
        },
        SelfCheck {
            name: "double of a wedge page",
            text: include_str!("../fixtures/double_wedge.json"),
            run: cmd_homology,
            expect: |v| v["degrees"][2]["group"]["free_rank"] == 4,
        },
        SelfCheck {
            name: "disk with identity monodromy",
            text: include_str!("../fixtures/disk_identity.json"),
            run: |p| cmd_openbook(p, true),
            expect: |v| {
                v["groups"][0]["pretty"] == "Z"
                    && v["groups"][1]["pretty"] == "0"
                    && v["groups"][2]["pretty"] == "0"
                    && v["groups"][3]["pretty"] == "Z"
                    && v["oracle"]["agree"] == true
            },
        },
        SelfCheck {
            name: "annulus with a triple twist",
            text: include_str!("../fixtures/annulus_twist3.json"),
            run: |p| cmd_openbook(p, true),
            expect: |v| v["groups"][1]["pretty"] == "Z/3" && v["oracle"]["agree"] == true,
        },
        SelfCheck {
            name: "spine with a variation matrix",
            text: include_str!("../fixtures/spine_twist5_variation.json"),
            run: |p| cmd_openbook(p, false),
            expect: |v| v["groups"][1]["pretty"] == "Z/5",
        },
        SelfCheck {
            name: "two-torsion obstruction at dimension 7",
            text: include_str!("../fixtures/rp7_obstruction.json"),
            run: |p| cmd_obstruct(p, false),
            expect: |v| v["status"] == "OBSTRUCTED" && v["witness"][0] == "2",
        },
        SelfCheck {
            name: "same torsion at dimension 5",
            text: include_str!("../fixtures/dim5_obstruction.json"),
            run: |p| cmd_obstruct(p, false),
            expect: |v| v["status"] == "INAPPLICABLE",
        },
        SelfCheck {
            name: "obstruction computed from an open book",
            text: include_str!("../fixtures/obstruct_from_book.json"),
            run: |p| cmd_obstruct(p, false),
            expect: |v| v["status"] == "OBSTRUCTED" && v["middle_pretty"] == "Z/2",
        },
        SelfCheck {
            name: "infinite-order shear loop",
            text: include_str!("../fixtures/loop_shear.json"),
            run: cmd_loop,
            expect: |v| v["status"] == "NONTRIVIAL_LOOP" && v["order"] == "INFINITE",
        },
        SelfCheck {
            name: "order-four rotation loop",
            text: include_str!("../fixtures/loop_rotation.json"),
            run: cmd_loop,
            expect: |v| v["status"] == "NONTRIVIAL_LOOP" && v["finite_order"] == "4",
        },
        SelfCheck {
            name: "identity gives no conclusion",
            text: include_str!("../fixtures/loop_identity.json"),
            run: cmd_loop,
            expect: |v| v["status"] == "NO_CONCLUSION" && v["order"].is_null(),
        },
        SelfCheck {
            name: "genus-two mixed-order loop",
            text: include_str!("../fixtures/loop_genus2.json"),
            run: cmd_loop,
            expect: |v| v["status"] == "NONTRIVIAL_LOOP" && v["finite_order"] == "12",
        },
    ];
    for check in checks {
        let problem: ProblemFile = serde_json::from_str(check.text)
            .map_err(|e| Failure::internal(format!("fixture {}: {}", check.name, e)))?;
        problem.check_version()?;
        let (value, _) = (check.run)(&problem)?;
        if !(check.expect)(&value) {
            return Err(Failure::internal(format!(
                "selftest {}: unexpected report {}",
                check.name, value
            )));
        }
        emit(&format!("SELFTEST {}: OK", check.name));
    }
    emit("all selftests passed");
    Ok(())
}
