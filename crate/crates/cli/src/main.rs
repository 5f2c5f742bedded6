//! `pgarc`: command-line front end for partial geometries, maximal arcs and
//! the planes they come from.
//!
//! Structure arguments accept a file in the `incidence v b` format,
//! `builtin:G1`, `builtin:G2`, `builtin:W2`, or `desarguesian:q` for the
//! plane PG(2,q) with q ∈ {2,4,8,16}.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pgarc::arcs::{
    construction1, desarguesian_plane, dual_arc, regular_hyperoval, verify_plane, MaximalArc, ProjectivePlane,
};
use pgarc::autiso::canonical_form;
use pgarc::catalog::{self, builtin, convert_blocks, format_structure, read_arcs, read_structure, survey};
use pgarc::classify::{classify_pg463, matching_cover_search, Checkpoint, ClassifyOptions, CoverSearchOptions};
use pgarc::gf2::rank2;
use pgarc::incidence::{dual, verify_pg, IncidenceStructure, PgParams};
use pgarc::parallel::{
    all_parallel_classes, check_tightness, max_orthogonal_family, orthogonal_family_bound, Side,
};
use pgarc::reconstruct::{find_families, reconstruct};
use pgarc::Error;

#[derive(Parser)]
#[command(name = "pgarc", version, about = "Partial geometries from maximal arcs: verification, parallel classes, reconstruction and classification")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap the number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// File, builtin:NAME or desarguesian:Q.
    #[arg(value_name = "STRUCTURE")]
    source: String,
    /// Use the dual structure (points and lines exchanged).
    #[arg(long)]
    dual: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the partial-geometry or projective-plane axioms.
    Verify(Input),
    /// Rank of the incidence matrix over GF(2).
    Rank2(Input),
    /// List all parallel classes (1-based line indices).
    Parallel {
        #[command(flatten)]
        input: Input,
        /// Also find a largest family of pairwise orthogonal classes.
        #[arg(long)]
        max_orthogonal: bool,
    },
    /// Build the partial geometry of a maximal arc.
    Construct {
        /// Plane reference.
        #[arg(long)]
        plane: String,
        /// Arc file (first record is used), `hyperoval`, or `dual-hyperoval`
        /// (the dual arc of the regular hyperoval, in the dual plane).
        #[arg(long)]
        arc: String,
        /// Write the geometry here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rebuild the projective plane of an arc geometry.
    Reconstruct {
        #[command(flatten)]
        input: Input,
        /// Write the plane here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Order of the automorphism group.
    Aut(Input),
    /// Enumerate and classify the pg(4,6,3) with point graph T̄(10).
    #[command(name = "classify-pg463")]
    ClassifyPg463 {
        /// Members per class checked for isomorphism with the representative.
        #[arg(long, default_value_t = 50)]
        sample: usize,
        /// Skip the brute-force check over all permutations of ten symbols.
        #[arg(long)]
        no_s10: bool,
    },
    /// Geometry invariants for every arc in a file.
    Survey {
        #[arg(long)]
        plane: String,
        #[arg(long)]
        arcs: Option<PathBuf>,
        /// Skip automorphism groups and isomorphism tests.
        #[arg(long)]
        no_iso: bool,
    },
    /// Write a structure in the canonical file format.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a plain block list (one block per line) to the canonical format.
    Convert {
        file: PathBuf,
        /// Indices in the input start at 1.
        #[arg(long)]
        one_based: bool,
        /// Number of points, if larger than the largest index + 1.
        #[arg(long)]
        points: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for sets of perfect matchings of K_m covering every pair of
    /// disjoint edges exactly once (best effort, resumable).
    #[command(name = "tbar-search")]
    TbarSearch {
        /// Number of symbols (even, at least 6).
        #[arg(long, default_value_t = 18)]
        m: usize,
        /// Stop after expanding this many nodes.
        #[arg(long)]
        node_budget: Option<u64>,
        /// Stop after this many solutions.
        #[arg(long)]
        max_solutions: Option<u64>,
        /// Continue from a checkpoint file.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Where to write the checkpoint when stopping early.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
}

/// Failure with its exit status: 1 for failed verification, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Io(_) | Error::InvalidParameters(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type Outcome = std::result::Result<Report, Failure>;

/// Command output: text for people, JSON for machines. `ok = false` means
/// the command ran but the object failed verification.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn report(text: String, json: Value) -> Outcome {
    Ok(Report { text, json, ok: true })
}

fn load(source: &str) -> Result<IncidenceStructure, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    if let Some(q) = source.strip_prefix("desarguesian:") {
        let q: usize = q.parse().map_err(|_| usage(format!("bad plane order in {source:?}")))?;
        return Ok(desarguesian_plane(q)?.into_structure());
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(usage(format!(
            "{source:?} is neither a file nor builtin:NAME / desarguesian:Q"
        )));
    }
    Ok(read_structure(path)?)
}

fn load_input(input: &Input) -> Result<IncidenceStructure, Failure> {
    let s = load(&input.source)?;
    Ok(if input.dual { dual(&s) } else { s })
}

fn load_plane(source: &str) -> Result<Arc<ProjectivePlane>, Failure> {
    Ok(Arc::new(ProjectivePlane::new(load(source)?)?))
}

fn emit_structure(s: &IncidenceStructure, output: &Option<PathBuf>, what: &str) -> Outcome {
    let text = format_structure(s);
    let json = json!({ "points": s.num_points(), "lines": s.lines() });
    match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::from(Error::from(e)))?;
            report(
                format!("wrote {what} with {} points and {} lines to {}", s.num_points(), s.num_lines(), path.display()),
                json!({ "written": path.display().to_string(), "points": s.num_points(), "lines": s.num_lines() }),
            )
        }
        None => report(text.trim_end().to_string(), json),
    }
}

fn one_based(lines: &[usize]) -> Vec<usize> {
    lines.iter().map(|l| l + 1).collect()
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_verify(input: &Input) -> Outcome {
    let s = load_input(input)?;
    if let Ok(q) = verify_plane(&s) {
        return report(
            format!("projective plane of order {q} ({} points, {} lines)", s.num_points(), s.num_lines()),
            json!({ "kind": "plane", "order": q, "points": s.num_points(), "lines": s.num_lines() }),
        );
    }
    let verdict = verify_pg(&s);
    match verdict.params() {
        Some((st, t, a)) => {
            let arc = PgParams::from_sta(st, t, a);
            let mut text = format!("pg({st},{t},{a}) with {} points and {} lines", s.num_points(), s.num_lines());
            if let Some(p) = arc {
                text.push_str(&format!("; arc parameters d = {}, d' = {}, q = {}", p.d, p.d_prime, p.q));
            }
            report(
                text,
                json!({
                    "kind": "partial_geometry",
                    "s": st, "t": t, "alpha": a,
                    "points": s.num_points(), "lines": s.num_lines(),
                    "arc_parameters": arc.map(|p| json!({ "d": p.d, "d_prime": p.d_prime, "q": p.q })),
                }),
            )
        }
        None => {
            let v = verdict.violation.expect("failed verdict carries a violation");
            Ok(Report {
                text: format!(
                    "not a partial geometry: axiom {} fails ({}); points {:?}, lines {:?}",
                    v.axiom, v.message, v.points, v.lines
                ),
                json: json!({ "kind": "none", "violation": v }),
                ok: false,
            })
        }
    }
}

fn cmd_rank2(input: &Input) -> Outcome {
    let s = load_input(input)?;
    let r = rank2(&s);
    report(format!("{r}"), json!({ "rank2": r }))
}

fn cmd_parallel(input: &Input, max_orthogonal: bool) -> Outcome {
    let s = load_input(input)?;
    let classes = all_parallel_classes(&s)?;
    let mut text = format!(
        "{} parallel class{}",
        classes.len(),
        if classes.len() == 1 { "" } else { "es" }
    );
    for c in &classes {
        text.push('\n');
        text.push_str(&join(&one_based(c.lines())));
    }
    let listed: Vec<Vec<usize>> = classes.iter().map(|c| one_based(c.lines())).collect();
    let mut json = json!({ "count": classes.len(), "classes": listed });
    if max_orthogonal {
        let verdict = verify_pg(&s);
        let (st, t, a) = verdict.params().ok_or_else(|| failed("not a partial geometry"))?;
        let fam = max_orthogonal_family(&s)?;
        let params = PgParams::from_sta(st, t, a);
        let bound = params.map(|p| orthogonal_family_bound(&p, Side::Primal));
        let tight = params.is_some_and(|p| check_tightness(&fam, &p));
        text.push_str(&format!(
            "\nlargest orthogonal family: {} classes (bound {}){}\nfamily: {}",
            fam.len(),
            bound.map_or("n/a".to_string(), |b| b.to_string()),
            if tight { ", tight" } else { "" },
            fam.classes()
                .iter()
                .map(|c| classes.iter().position(|x| x == c).map_or(0, |i| i + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
        json["max_orthogonal"] = json!({
            "size": fam.len(),
            "bound": bound,
            "tight": tight,
            "multiplicities": fam.multiplicities(),
            "identities_hold": fam.identities_hold(),
        });
    }
    report(text, json)
}

fn load_arc(plane: &Arc<ProjectivePlane>, spec: &str) -> Result<MaximalArc, Failure> {
    match spec {
        "hyperoval" => Ok(regular_hyperoval(plane)?),
        "dual-hyperoval" => Ok(dual_arc(&regular_hyperoval(plane)?)?),
        path => {
            let recs = read_arcs(path)?;
            let rec = recs.first().ok_or_else(|| usage(format!("{path}: no arcs in file")))?;
            Ok(MaximalArc::new(Arc::clone(plane), rec.points.clone())?)
        }
    }
}

fn cmd_construct(plane: &str, arc: &str, output: &Option<PathBuf>) -> Outcome {
    let p = load_plane(plane)?;
    let a = load_arc(&p, arc)?;
    let p = Arc::clone(a.plane());
    let g = construction1(&p, &a)?.geometry;
    emit_structure(&g, output, "geometry")
}

fn cmd_reconstruct(input: &Input, output: &Option<PathBuf>) -> Outcome {
    let g = load_input(input)?;
    let rec = reconstruct(&find_families(&g)?)?;
    let plane = rec.plane.structure();
    let r = rank2(plane);
    let mut text = format!(
        "projective plane of order {} rebuilt: 2-rank {r}, arc degree {}, dual arc degree {}",
        rec.plane.order(),
        rec.arc.degree(),
        rec.dual_arc.degree()
    );
    let mut json = json!({
        "order": rec.plane.order(),
        "rank2": r,
        "arc_degree": rec.arc.degree(),
        "dual_arc_degree": rec.dual_arc.degree(),
        "arc_points": rec.arc.points(),
    });
    if let Some(path) = output {
        catalog::write_structure(plane, path)?;
        text.push_str(&format!("\nwrote plane to {}", path.display()));
        json["written"] = json!(path.display().to_string());
    }
    report(text, json)
}

fn cmd_aut(input: &Input) -> Outcome {
    let s = load_input(input)?;
    let n = canonical_form(&s).aut_order;
    report(format!("{n}"), json!({ "aut_order": n.to_string() }))
}

fn cmd_classify(sample: usize, no_s10: bool) -> Outcome {
    let opts = ClassifyOptions {
        sample_size: sample,
        s10_check: !no_s10,
        ..Default::default()
    };
    let r = classify_pg463(&opts)?;
    let mut text = r.summary();
    text.push_str(&format!("\nΩ: {} vertices", r.omega_vertices));
    for (i, c) in r.classes.iter().enumerate() {
        text.push_str(&format!(
            "\nclass {}: {} parallel classes, 2-rank {}, |Aut| = {}, orbit {} (counted {}), sample of {} isomorphic: {}{}{}",
            i + 1,
            c.fingerprint.parallel_classes,
            c.fingerprint.rank2,
            c.aut_order,
            c.orbit_size,
            c.count,
            c.sample_size,
            c.sample_isomorphic,
            c.matches_builtin.as_ref().map_or(String::new(), |n| format!(", isomorphic to {n}")),
            c.s10_stabilizer.map_or(String::new(), |n| format!(", stabilizer in S10: {n}")),
        ));
    }
    text.push_str(&format!(
        "\nall geometric: {}, classes distinct: {}, accounting valid: {}\nenumeration {:.1} s, total {:.1} s",
        r.all_geometric, r.representatives_distinct, r.accounting_valid, r.enumeration_seconds, r.total_seconds
    ));
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "parallel_classes": c.fingerprint.parallel_classes,
                "rank2": c.fingerprint.rank2,
                "aut_order": c.aut_order.to_string(),
                "orbit_size": c.orbit_size.to_string(),
                "count": c.count,
                "sample_size": c.sample_size,
                "sample_isomorphic": c.sample_isomorphic,
                "matches_builtin": c.matches_builtin,
                "s10_stabilizer": c.s10_stabilizer,
                "representative": c.representative.lines(),
            })
        })
        .collect();
    let ok = r.accounting_valid && r.representatives_distinct && r.classes.iter().all(|c| c.sample_isomorphic);
    Ok(Report {
        text,
        json: json!({
            "summary": r.summary(),
            "omega_vertices": r.omega_vertices,
            "total_cliques": r.total_cliques,
            "all_geometric": r.all_geometric,
            "representatives_distinct": r.representatives_distinct,
            "accounting_valid": r.accounting_valid,
            "classes": classes,
        }),
        ok,
    })
}

fn cmd_survey(plane: &str, arcs: &Option<PathBuf>, no_iso: bool) -> Outcome {
    let p = load_plane(plane)?;
    let Some(path) = arcs else {
        return report(
            "no arcs supplied; pass --arcs FILE to survey arcs of this plane".to_string(),
            json!({ "notice": "no arcs supplied", "rows": [] }),
        );
    };
    let recs = read_arcs(path)?;
    let rows = survey(&p, &recs, catalog::SurveyOptions { isomorphism: !no_iso })?;
    let mut text = format!(
        "{:<12} {:>3} {:>12} {:>10} {:>6} {:>6} {:>16} {:>6} {:>10}",
        "arc", "d", "pg(s,t,a)", "|Aut|", "rank2", "plane", "# of par. clas.", "bound", "iso to"
    );
    for r in &rows {
        text.push_str(&format!(
            "\n{:<12} {:>3} {:>12} {:>10} {:>6} {:>6} {:>16} {:>6} {:>10}",
            r.label,
            r.degree,
            format!("({},{},{})", r.s, r.t, r.alpha),
            r.aut_order.map_or("-".to_string(), |n| n.to_string()),
            r.rank2,
            r.plane_rank2,
            r.parallel_classes,
            r.bound,
            if r.isomorphic_to.is_empty() { "-".to_string() } else { join(&r.isomorphic_to) },
        ));
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "index": r.index, "label": r.label, "degree": r.degree,
                "s": r.s, "t": r.t, "alpha": r.alpha,
                "aut_order": r.aut_order.map(|n| n.to_string()),
                "rank2": r.rank2, "plane_rank2": r.plane_rank2,
                "parallel_classes": r.parallel_classes, "bound": r.bound,
                "self_dual": r.self_dual, "isomorphic_to": r.isomorphic_to,
            })
        })
        .collect();
    report(text, json!({ "rows": json_rows }))
}

fn cmd_convert(file: &Path, one_based: bool, points: Option<usize>, output: &Option<PathBuf>) -> Outcome {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::from(Error::from(e)))?;
    let s = convert_blocks(&text, one_based, points)?;
    emit_structure(&s, output, "structure")
}

fn cmd_tbar(
    m: usize,
    node_budget: Option<u64>,
    max_solutions: Option<u64>,
    resume: &Option<PathBuf>,
    checkpoint: &Option<PathBuf>,
) -> Outcome {
    let resume = match resume {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::from(Error::from(e)))?;
            let cp: Checkpoint = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: bad checkpoint: {e}", path.display())))?;
            Some(cp)
        }
        None => None,
    };
    let out = matching_cover_search(
        m,
        &CoverSearchOptions {
            node_budget,
            max_solutions,
            keep: 1,
            resume,
        },
    )?;
    let mut text = format!(
        "m = {m}: {} lines per cover, {} nodes, {} covers found, {}",
        out.lines_needed,
        out.nodes,
        out.solutions_found,
        if out.finished { "search complete" } else { "stopped early" }
    );
    if let (Some(cp), Some(path)) = (&out.checkpoint, checkpoint) {
        let body = serde_json::to_string_pretty(cp).expect("checkpoint serializes");
        std::fs::write(path, body).map_err(|e| Failure::from(Error::from(e)))?;
        text.push_str(&format!("\ncheckpoint written to {}", path.display()));
    }
    if let Some(sol) = out.solutions.first() {
        text.push_str("\nfirst cover:");
        for mt in sol {
            let pairs: Vec<String> = mt.iter().map(|(a, b)| format!("{a}{b}")).collect();
            text.push_str(&format!("\n  {}", pairs.join(" ")));
        }
    }
    report(text, serde_json::to_value(&out).expect("outcome serializes"))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Verify(input) => cmd_verify(input),
        Command::Rank2(input) => cmd_rank2(input),
        Command::Parallel { input, max_orthogonal } => cmd_parallel(input, *max_orthogonal),
        Command::Construct { plane, arc, output } => cmd_construct(plane, arc, output),
        Command::Reconstruct { input, output } => cmd_reconstruct(input, output),
        Command::Aut(input) => cmd_aut(input),
        Command::ClassifyPg463 { sample, no_s10 } => cmd_classify(*sample, *no_s10),
        Command::Survey { plane, arcs, no_iso } => cmd_survey(plane, arcs, *no_iso),
        Command::Export { input, output } => emit_structure(&load_input(input)?, output, "structure"),
        Command::Convert {
            file,
            one_based,
            points,
            output,
        } => cmd_convert(file, *one_based, *points, output),
        Command::TbarSearch {
            m,
            node_budget,
            max_solutions,
            resume,
            checkpoint,
        } => cmd_tbar(*m, *node_budget, *max_solutions, resume, checkpoint),
    }
}

/// Writes a report to stdout. A reader that closes the pipe early (`| head`)
/// is not an error worth a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                let mut body = json!({ "ok": r.ok });
                if let Value::Object(map) = r.json {
                    body.as_object_mut().expect("object").extend(map);
                }
                emit(&serde_json::to_string_pretty(&body).expect("report serializes"));
            } else {
                emit(&r.text);
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(f) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&json!({ "ok": false, "error": f.message })).expect("serializes"));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
