use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shardlab::cambrian::{build_nc, cambrian_congruence};
use shardlab::congruence::{generate_congruence, quotient_shard_order};
use shardlab::coxeter::{CoxGroup, CoxeterType, GroupGeom};
use shardlab::export;
use shardlab::ingest::IngestedArrangement;
use shardlab::shardorder::ShardOrder;
use shardlab::shards::{ShardDigraph, ShardSet};
use shardlab::triangulation::{quotient_triangulation, simplex_closure};
use shardlab::verify::{self, Check, GeometryMode, Suite};

#[derive(Parser)]
#[command(
    name = "shardlab",
    about = "Exact shard, lattice-congruence and pulling-triangulation engine for finite Coxeter groups and simplicial arrangements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group or arrangement and write its reports.
    Build(BuildArgs),
    /// Run the verification suites; exit 1 on any failed check.
    Verify(VerifyArgs),
    /// Export a single artifact (DOT, JSON or OFF-like).
    Export(ExportArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Coxeter type, e.g. A3, B3, I2(5), A1xA1.
    #[arg(long = "type")]
    ctype: Option<String>,
    /// Arrangement file (first line base point, then one normal per line).
    #[arg(long)]
    arrangement: Option<PathBuf>,
    /// Coxeter element as a generator order, e.g. s1,s3,s2.
    #[arg(long = "coxeter-element")]
    coxeter_element: Option<String>,
    /// Congruence generator, a join-irreducible as a reduced word
    /// (e.g. s2,s1); repeatable.
    #[arg(long = "contract")]
    contract: Vec<String>,
    /// Geometric validators: on, off, or auto (rank ≤ 3, few hyperplanes).
    #[arg(long, default_value = "auto")]
    geometry: GeometryArg,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Auto,
    On,
    Off,
}

impl From<GeometryArg> for GeometryMode {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Auto => GeometryMode::Auto,
            GeometryArg::On => GeometryMode::On,
            GeometryArg::Off => GeometryMode::Off,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Summary format on stdout.
    #[arg(long, default_value = "text")]
    format: SummaryFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum SummaryFormat {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Parallelism bound for independent suites.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which artifact to export.
    #[arg(long)]
    what: ExportWhat,
    /// Export format (dot for posets and the digraph, json everywhere,
    /// off for rank ≤ 3 triangulations).
    #[arg(long, default_value = "dot")]
    format: ExportFormat,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ExportWhat {
    Weak,
    ShardOrder,
    Nc,
    Digraph,
    Triangulation,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ExportFormat {
    Dot,
    Json,
    Off,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_word(s: &str) -> Result<Vec<u8>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let idx = tok
                .strip_prefix('s')
                .ok_or_else(|| format!("bad generator {tok:?} (expected s1, s2, ...)"))?;
            let n: u8 = idx
                .parse()
                .map_err(|_| format!("bad generator index in {tok:?}"))?;
            if n == 0 {
                return Err(format!("generators are 1-based, got {tok:?}"));
            }
            Ok(n - 1)
        })
        .collect()
}

struct Built {
    group: CoxGroup,
    order_word: Option<Vec<u8>>,
    contract_elems: Vec<u32>,
}

fn build_group(common: &CommonArgs) -> Result<Built, String> {
    let Some(tstr) = &common.ctype else {
        return Err("--type is required for this command".into());
    };
    let ctype = CoxeterType::parse(tstr).map_err(|e| format!("--type: {e}"))?;
    let group = CoxGroup::build(&ctype).map_err(|e| format!("--type: {e}"))?;
    let order_word = match &common.coxeter_element {
        Some(s) => {
            let w = parse_word(s).map_err(|e| format!("--coxeter-element: {e}"))?;
            let mut sorted = w.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != group.n_gens || w.len() != group.n_gens {
                return Err(format!(
                    "--coxeter-element: expected a permutation of s1..s{}",
                    group.n_gens
                ));
            }
            Some(w)
        }
        None => None,
    };
    let mut contract_elems = Vec::new();
    for c in &common.contract {
        let w = parse_word(c).map_err(|e| format!("--contract: {e}"))?;
        if w.iter().any(|&s| s as usize >= group.n_gens) {
            return Err(format!("--contract: generator out of range in {c:?}"));
        }
        let elem = group.element_from_word(&w);
        if group.lattice.down[elem as usize].len() != 1 {
            return Err(format!("--contract: {c:?} is not join-irreducible"));
        }
        contract_elems.push(elem);
    }
    Ok(Built {
        group,
        order_word,
        contract_elems,
    })
}

fn write_file(out_dir: &Path, name: &str, data: &str) -> Result<(), String> {
    std::fs::create_dir_all(out_dir).map_err(|e| format!("--out: {e}"))?;
    std::fs::write(out_dir.join(name), data).map_err(|e| format!("--out: {e}"))
}

fn cmd_build(args: &BuildArgs) -> Result<(), String> {
    if let Some(file) = &args.common.arrangement {
        return build_arrangement(file, args);
    }
    let built = build_group(&args.common)?;
    let g = &built.group;
    let shards = ShardSet::compute(&g.lattice);
    let span = |hyps: &[u8]| g.span_closure(hyps);
    let dg = ShardDigraph::build(&g.lattice, &shards, &span);
    let order = ShardOrder::build(&g.lattice, &shards);

    let mut summary: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    summary.insert("type".into(), g.ctype.to_string().into());
    summary.insert("order".into(), g.order().into());
    summary.insert("positive_roots".into(), g.lattice.n_hyp.into());
    summary.insert("join_irreducibles".into(), g.lattice.join_irreducibles().len().into());
    summary.insert("shards".into(), shards.len().into());
    summary.insert("psi_size".into(), g.order().into());
    summary.insert(
        "rank_polynomial".into(),
        serde_json::to_value(order.rank_polynomial()).unwrap(),
    );
    summary.insert("mobius".into(), order.mobius_direct().into());
    summary.insert(
        "maximal_chains".into(),
        order.maximal_chain_count_direct().into(),
    );

    if let Some(dir) = &args.common.out {
        write_file(
            dir,
            "group.json",
            &serde_json::to_string_pretty(&export::group_report(g)).unwrap(),
        )?;
        write_file(
            dir,
            "weak.json",
            &serde_json::to_string_pretty(&export::weak_report(&g.lattice)).unwrap(),
        )?;
        write_file(dir, "weak.dot", &export::dot_weak_order(&g.lattice, Some(g)))?;
        write_file(
            dir,
            "shards.json",
            &serde_json::to_string_pretty(&export::shard_table(&shards, Some(g))).unwrap(),
        )?;
        write_file(
            dir,
            "shard_order.json",
            &serde_json::to_string_pretty(&export::shard_order_report(&order, Some(g))).unwrap(),
        )?;
        write_file(dir, "digraph.dot", &export::dot_shard_digraph(&shards, &dg, Some(g)))?;
    }

    if !built.contract_elems.is_empty() {
        let cong = generate_congruence(&g.lattice, &shards, &dg, &built.contract_elems)
            .map_err(|e| e.to_string())?;
        let qso = quotient_shard_order(&g.lattice, &shards, &cong);
        summary.insert("congruence_classes".into(), cong.n_classes().into());
        if let Some(dir) = &args.common.out {
            write_file(
                dir,
                "congruence.json",
                &serde_json::to_string_pretty(&export::congruence_report(
                    &cong,
                    &qso,
                    &shards,
                    Some(g),
                ))
                .unwrap(),
            )?;
            let qposet = cong.quotient_poset(&g.lattice);
            write_file(
                dir,
                "congruence_quotient.dot",
                &export::dot_hasse(&qposet, "quotient", &|v| {
                    export::element_label(Some(g), cong.bottoms[v])
                }),
            )?;
        }
    }

    if let Some(order_word) = &built.order_word {
        let camb = cambrian_congruence(g, &shards, &dg, order_word).map_err(|e| e.to_string())?;
        let nc = build_nc(g, camb.c);
        summary.insert("sortables".into(), camb.sortables.len().into());
        summary.insert("noncrossing_partitions".into(), nc.elements.len().into());
        if let Some(dir) = &args.common.out {
            write_file(
                dir,
                "nc.json",
                &serde_json::to_string_pretty(&export::nc_report(g, &nc)).unwrap(),
            )?;
            let qso = quotient_shard_order(&g.lattice, &shards, &camb.theta);
            write_file(
                dir,
                "cambrian.json",
                &serde_json::to_string_pretty(&export::congruence_report(
                    &camb.theta,
                    &qso,
                    &shards,
                    Some(g),
                ))
                .unwrap(),
            )?;
        }
    }

    match args.format {
        SummaryFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
        }
        SummaryFormat::Text => {
            for (k, v) in &summary {
                println!("{k} = {v}");
            }
        }
    }
    Ok(())
}

fn build_arrangement(file: &Path, args: &BuildArgs) -> Result<(), String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("--arrangement: {e}"))?;
    let ia = IngestedArrangement::from_file_text(&text).map_err(|e| format!("--arrangement: {e}"))?;
    let shards = ShardSet::compute(&ia.lattice);
    let span = |hyps: &[u8]| ia.span_closure(hyps);
    let dg = ShardDigraph::build(&ia.lattice, &shards, &span);
    let order = ShardOrder::build(&ia.lattice, &shards);
    let mut summary: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    summary.insert("hyperplanes".into(), ia.lattice.n_hyp.into());
    summary.insert("regions".into(), ia.lattice.len().into());
    summary.insert("shards".into(), shards.len().into());
    summary.insert("digraph_acyclic".into(), dg.acyclic.into());
    summary.insert("mobius".into(), order.mobius_direct().into());
    summary.insert(
        "rank_polynomial".into(),
        serde_json::to_value(order.rank_polynomial()).unwrap(),
    );
    if let Some(dir) = &args.common.out {
        write_file(dir, "weak.dot", &export::dot_weak_order(&ia.lattice, None))?;
        write_file(
            dir,
            "shards.json",
            &serde_json::to_string_pretty(&export::shard_table(&shards, None)).unwrap(),
        )?;
        write_file(dir, "digraph.dot", &export::dot_shard_digraph(&shards, &dg, None))?;
        write_file(
            dir,
            "shard_order.json",
            &serde_json::to_string_pretty(&export::shard_order_report(&order, None)).unwrap(),
        )?;
    }
    match args.format {
        SummaryFormat::Json => println!("{}", serde_json::to_string_pretty(&summary).unwrap()),
        SummaryFormat::Text => {
            for (k, v) in &summary {
                println!("{k} = {v}");
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, String> {
    let built = build_group(&args.common)?;
    let g = &built.group;
    let mode: GeometryMode = args.common.geometry.into();
    let suite = Suite::new(g);

    // independent sub-suites, run under the --jobs bound
    type Job<'a> = Box<dyn FnOnce() -> Vec<Check> + Send + 'a>;
    let mut jobs: Vec<(String, Job)> = Vec::new();
    let s = &suite;
    jobs.push((
        "core".into(),
        Box::new(move || verify::verify_core(s, mode)),
    ));
    jobs.push((
        "fiber-posets".into(),
        Box::new(move || verify::verify_fiber_posets(s)),
    ));
    jobs.push((
        "subcomplex-probe".into(),
        Box::new(move || verify::verify_subcomplex_probe(s)),
    ));
    let basics = g.lattice.basic.clone();
    for i in 0..basics.len() {
        let k: Vec<u8> = basics
            .iter()
            .copied()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, b)| b)
            .collect();
        jobs.push((
            format!("parabolic-{i}"),
            Box::new(move || verify::verify_parabolic(s, &k)),
        ));
    }
    if !built.contract_elems.is_empty() {
        let gens = built.contract_elems.clone();
        jobs.push((
            "congruence".into(),
            Box::new(move || verify::verify_congruence(s, &gens, mode)),
        ));
    }
    let orders: Vec<Vec<u8>> = match &built.order_word {
        Some(w) => vec![w.clone()],
        None if g.order() <= 48 => g
            .all_coxeter_elements()
            .into_iter()
            .map(|(_, order)| order)
            .collect(),
        None => vec![(0..g.n_gens as u8).collect()],
    };
    for (i, ow) in orders.into_iter().enumerate() {
        jobs.push((
            format!("cambrian-{i}"),
            Box::new(move || verify::verify_cambrian(s, &ow, mode)),
        ));
    }

    let jobs_bound = args.jobs.max(1);
    let mut results: Vec<(String, Vec<Check>)> = Vec::new();
    let mut queue: Vec<(String, Job)> = jobs;
    while !queue.is_empty() {
        let batch: Vec<(String, Job)> = queue
            .drain(..queue.len().min(jobs_bound))
            .collect();
        let batch_results: Vec<(String, Vec<Check>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .into_iter()
                .map(|(name, job)| (name, scope.spawn(job)))
                .collect();
            handles
                .into_iter()
                .map(|(name, h)| (name, h.join().expect("suite thread")))
                .collect()
        });
        results.extend(batch_results);
    }

    let mut all = Vec::new();
    for (suite_name, checks) in results {
        for c in checks {
            println!(
                "{} [{}] {}{}",
                if c.passed { "PASS" } else { "FAIL" },
                suite_name,
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" — {}", c.detail)
                }
            );
            all.push(c);
        }
    }
    let failures = all.iter().filter(|c| !c.passed).count();
    println!(
        "{} checks, {} failed ({})",
        all.len(),
        failures,
        g.ctype
    );
    if let Some(dir) = &args.common.out {
        write_file(dir, "verify.xml", &junit_report(&all))?;
    }
    Ok(failures == 0)
}

fn junit_report(checks: &[Check]) -> String {
    let failures = checks.iter().filter(|c| !c.passed).count();
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<testsuite name=\"shardlab-verify\" tests=\"{}\" failures=\"{}\">",
        checks.len(),
        failures
    );
    let escape = |s: &str| {
        s.replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;")
            .replace('"', "&quot;")
    };
    for c in checks {
        if c.passed {
            let _ = writeln!(out, "  <testcase name=\"{}\"/>", escape(&c.name));
        } else {
            let _ = writeln!(
                out,
                "  <testcase name=\"{}\"><failure message=\"{}\"/></testcase>",
                escape(&c.name),
                escape(&c.detail)
            );
        }
    }
    out.push_str("</testsuite>\n");
    out
}

fn cmd_export(args: &ExportArgs) -> Result<(), String> {
    let built = build_group(&args.common)?;
    let g = &built.group;
    let shards = ShardSet::compute(&g.lattice);
    let span = |hyps: &[u8]| g.span_closure(hyps);

    let payload: String = match args.what {
        ExportWhat::Weak => match args.format {
            ExportFormat::Dot => export::dot_weak_order(&g.lattice, Some(g)),
            ExportFormat::Json => {
                serde_json::to_string_pretty(&export::group_report(g)).unwrap()
            }
            ExportFormat::Off => return Err("--format off applies to triangulations".into()),
        },
        ExportWhat::ShardOrder => {
            let order = ShardOrder::build(&g.lattice, &shards);
            match args.format {
                ExportFormat::Dot => export::dot_hasse(&order.poset, "shard_order", &|v| {
                    export::element_label(Some(g), v as u32)
                }),
                ExportFormat::Json => {
                    serde_json::to_string_pretty(&export::shard_order_report(&order, Some(g)))
                        .unwrap()
                }
                ExportFormat::Off => return Err("--format off applies to triangulations".into()),
            }
        }
        ExportWhat::Nc => {
            let order_word: Vec<u8> = built
                .order_word
                .clone()
                .unwrap_or_else(|| (0..g.n_gens as u8).collect());
            let c = g.coxeter_element(&order_word);
            let nc = build_nc(g, c);
            match args.format {
                ExportFormat::Dot => export::dot_hasse(&nc.poset, "noncrossing", &|v| {
                    export::element_label(Some(g), nc.elements[v])
                }),
                ExportFormat::Json => {
                    serde_json::to_string_pretty(&export::nc_report(g, &nc)).unwrap()
                }
                ExportFormat::Off => return Err("--format off applies to triangulations".into()),
            }
        }
        ExportWhat::Digraph => {
            let dg = ShardDigraph::build(&g.lattice, &shards, &span);
            match args.format {
                ExportFormat::Dot => export::dot_shard_digraph(&shards, &dg, Some(g)),
                ExportFormat::Json => {
                    let arrows: Vec<(usize, usize)> = dg.arrows.iter().copied().collect();
                    serde_json::to_string_pretty(&arrows).unwrap()
                }
                ExportFormat::Off => return Err("--format off applies to triangulations".into()),
            }
        }
        ExportWhat::Triangulation => {
            let dg = ShardDigraph::build(&g.lattice, &shards, &span);
            let gens = built.contract_elems.clone();
            let cong = generate_congruence(&g.lattice, &shards, &dg, &gens)
                .map_err(|e| e.to_string())?;
            let tri = match &g.geom {
                GroupGeom::Rat(l) => quotient_triangulation(&l.arrangement, &g.lattice, &cong),
                GroupGeom::Rt5(l) => quotient_triangulation(&l.arrangement, &g.lattice, &cong),
            }
            .map_err(|e| e.to_string())?;
            match args.format {
                ExportFormat::Json => {
                    serde_json::to_string_pretty(&export::triangulation_report(&tri)).unwrap()
                }
                ExportFormat::Off => {
                    if g.ctype.rank() > 3 {
                        return Err("OFF-like export is limited to rank ≤ 3".into());
                    }
                    let mut verts: Vec<u32> = simplex_closure(&tri)
                        .iter()
                        .flatten()
                        .copied()
                        .collect::<std::collections::BTreeSet<_>>()
                        .into_iter()
                        .collect();
                    verts.sort_unstable();
                    let coords: Vec<Vec<String>> = match &g.geom {
                        GroupGeom::Rat(l) => vertex_coords(&l.arrangement, &g.lattice, &verts),
                        GroupGeom::Rt5(l) => vertex_coords(&l.arrangement, &g.lattice, &verts),
                    };
                    export::off_like_export(&verts, &coords, &tri)
                }
                ExportFormat::Dot => return Err("triangulations export as json or off".into()),
            }
        }
    };

    match &args.common.out {
        Some(dir) => write_file(dir, export_file_name(args), &payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn vertex_coords<F: shardlab::num::Scalar>(
    arr: &shardlab::geom::Arrangement<F>,
    lat: &shardlab::weak::RegionLattice,
    verts: &[u32],
) -> Vec<Vec<String>> {
    verts
        .iter()
        .map(|&v| {
            let sep = shardlab::poset::BitSet::from_iter_bits(
                lat.n_hyp,
                (0..lat.n_hyp).filter(|&i| lat.sep[v as usize] & (1 << i) != 0),
            );
            arr.region_cone(&sep)
                .interior_rep()
                .iter()
                .map(|x| x.to_string())
                .collect()
        })
        .collect()
}

fn export_file_name(args: &ExportArgs) -> &'static str {
    match (args.what, args.format) {
        (ExportWhat::Weak, ExportFormat::Dot) => "weak.dot",
        (ExportWhat::Weak, _) => "weak.json",
        (ExportWhat::ShardOrder, ExportFormat::Dot) => "shard_order.dot",
        (ExportWhat::ShardOrder, _) => "shard_order.json",
        (ExportWhat::Nc, ExportFormat::Dot) => "nc.dot",
        (ExportWhat::Nc, _) => "nc.json",
        (ExportWhat::Digraph, ExportFormat::Dot) => "digraph.dot",
        (ExportWhat::Digraph, _) => "digraph.json",
        (ExportWhat::Triangulation, ExportFormat::Off) => "triangulation.off",
        (ExportWhat::Triangulation, _) => "triangulation.json",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Build(args) => match cmd_build(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(&e),
        },
        Command::Verify(args) => match cmd_verify(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => usage_error(&e),
        },
        Command::Export(args) => match cmd_export(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(&e),
        },
    }
}
