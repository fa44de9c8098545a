use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use deldyn::deldyn::DeligneDynkinDiagram;
use deldyn::diagram_file::{read_diagram, InstanceFile};
use deldyn::hodge::{deligne_construct, DeligneReport};
use deldyn::localglobal::{
    chebotarev_family, component_maps, decide_isom_oracle, run_campaign, verify_theorem, Bounds, CampaignReport,
    Instance, Verdict,
};
use deldyn::rootsys::{
    oppinv_bruteforce_oracle, opposition_involution, special_nodes, DynkinDiagram, Family, SimpleType,
};
use deldyn::table::{deligne_table, TableRow};
use deldyn::tannaka::{goursat_sweep, hyperadjoint, GoursatSweep, HyperadjointChain, ReductiveDatum, TannakianObject};
use deldyn::{Error, Result};
use serde::Serialize;

use crate::{Cli, Command, Format};

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Consistency(_) => 1,
        _ => 2,
    }
}

fn emit<T: Serialize>(format: Format, value: &T, failed: bool, text: impl FnOnce(&T) -> String) -> Output {
    let stdout = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("plain data") + "\n",
        Format::Text => text(value),
    };
    Output {
        stdout,
        code: u8::from(failed),
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{path}: {e}")))
}

fn load(path: &str) -> Result<DeligneDynkinDiagram> {
    let text = read(path)?;
    read_diagram(&text).map(|(_, d)| d).map_err(|e| with_path(path, e))
}

fn with_path(path: &str, e: Error) -> Error {
    match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{path}: {message}"),
        },
        other => other,
    }
}

fn simple_type(family: &str, rank: usize) -> Result<SimpleType> {
    SimpleType::new(family.parse()?, rank)
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

pub fn run(cli: &Cli) -> Result<Output> {
    let fmt = cli.format;
    match &cli.command {
        Command::Table { max_rank } => table(fmt, *max_rank),
        Command::Classify { file } => classify(fmt, file),
        Command::Special { family, rank } => special(fmt, family, *rank),
        Command::Oppinv { family, rank, oracle } => oppinv(fmt, family, *rank, *oracle),
        Command::Isom {
            file1,
            file2,
            local,
            all_locals,
        } => isom(fmt, file1, file2, *local, *all_locals),
        Command::VerifyLocalGlobal {
            max_order,
            max_rank,
            max_components,
            types,
            jobs,
            explore,
            dump_dir,
        } => {
            let families = types
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse)
                .collect::<Result<Vec<Family>>>()?;
            let bounds = Bounds {
                max_order: *max_order,
                max_rank: *max_rank,
                families,
                max_components: *max_components,
            };
            verify_local_global(fmt, &bounds, *jobs, *explore, Path::new(dump_dir))
        }
        Command::Replay { file } => replay(fmt, file),
        Command::Deligne { file, n } => deligne(fmt, file, *n),
        Command::Hyperadjoint { spec, dim } => hyperadjoint_cmd(fmt, spec, *dim),
        Command::Goursat { max_order, jobs } => goursat(fmt, *max_order, *jobs),
    }
}

fn table(fmt: Format, max_rank: usize) -> Result<Output> {
    let rows = deligne_table(max_rank)?;
    let failed = !rows.iter().all(TableRow::matches);
    Ok(emit(fmt, &rows, failed, |rows| {
        let mut s = String::new();
        for r in rows {
            let labels: Vec<String> = r.labels.iter().map(|l| l.to_string()).collect();
            let _ = writeln!(
                s,
                "{:<18} special {:<2} symplectic {{{}}}  labels {}  {}",
                r.row,
                r.special,
                join(&r.symplectic),
                labels.join(", "),
                if r.matches() { "ok" } else { "MISMATCH" }
            );
        }
        s
    }))
}

#[derive(Serialize)]
struct Classification {
    valid: bool,
    components: Vec<String>,
    group_order: usize,
    irreducible: bool,
    populated: bool,
    symplectic: bool,
    #[serde(rename = "type")]
    ty: String,
    s: Vec<usize>,
    u_set: Option<Vec<usize>>,
    aut_id: usize,
    expected_aut_id: Option<usize>,
}

fn classify(fmt: Format, file: &str) -> Result<Output> {
    let d = load(file)?;
    let ty = d.type_of()?;
    let isp = ty.is_symplectic_populated();
    let c = Classification {
        valid: true,
        components: d
            .base()
            .diagram()
            .components()
            .iter()
            .map(|c| c.kind.simple_type().to_string())
            .collect(),
        group_order: d.base().group().order(),
        irreducible: d.is_irreducible(),
        populated: d.is_populated(),
        symplectic: d.is_symplectic().unwrap_or(false),
        ty: ty.to_string(),
        s: d.symplectic_set()?.into_iter().collect(),
        u_set: if isp {
            Some(d.u_set()?.into_iter().collect())
        } else {
            None
        },
        aut_id: d.aut_id()?.len(),
        expected_aut_id: if isp { Some(d.expected_aut_id_count()?) } else { None },
    };
    Ok(emit(fmt, &c, false, |c| {
        let mut s = String::new();
        let _ = writeln!(s, "type         {}", c.ty);
        let _ = writeln!(s, "components   {}", c.components.join(" + "));
        let _ = writeln!(s, "group order  {}", c.group_order);
        let _ = writeln!(
            s,
            "flags        irreducible={} populated={} symplectic={}",
            c.irreducible, c.populated, c.symplectic
        );
        let _ = writeln!(s, "S            {{{}}}", join(&c.s));
        if let Some(u) = &c.u_set {
            let _ = writeln!(s, "U            {{{}}}", join(u));
        }
        let _ = write!(s, "Aut_id       {}", c.aut_id);
        if let Some(e) = c.expected_aut_id {
            let _ = write!(s, " (expected {e})");
        }
        s.push('\n');
        s
    }))
}

#[derive(Serialize)]
struct SpecialNodes {
    #[serde(rename = "type")]
    ty: SimpleType,
    special: Vec<usize>,
}

fn special(fmt: Format, family: &str, rank: usize) -> Result<Output> {
    let t = simple_type(family, rank)?;
    let d = DynkinDiagram::build(&[t]);
    let out = SpecialNodes {
        ty: t,
        special: one_based(&special_nodes(&d, 0)?),
    };
    Ok(emit(fmt, &out, false, |o| {
        if o.special.is_empty() {
            format!("{}: no special nodes\n", o.ty)
        } else {
            format!("{}: {}\n", o.ty, join(&o.special))
        }
    }))
}

#[derive(Serialize)]
struct Oppinv {
    #[serde(rename = "type")]
    ty: SimpleType,
    /// Image of node `i + 1` at position `i`.
    images: Vec<usize>,
    trivial: bool,
    oracle: Option<Vec<usize>>,
}

fn oppinv(fmt: Format, family: &str, rank: usize, with_oracle: bool) -> Result<Output> {
    let t = simple_type(family, rank)?;
    let d = DynkinDiagram::build(&[t]);
    let tau = opposition_involution(&d)?;
    let oracle = if with_oracle {
        Some(one_based(oppinv_bruteforce_oracle(&d)?.perm().images()))
    } else {
        None
    };
    let out = Oppinv {
        ty: t,
        images: one_based(tau.perm().images()),
        trivial: tau.is_identity(),
        oracle,
    };
    let failed = out.oracle.as_ref().is_some_and(|o| *o != out.images);
    Ok(emit(fmt, &out, failed, |o| {
        let pairs: Vec<String> = o
            .images
            .iter()
            .enumerate()
            .map(|(i, j)| format!("{}->{}", i + 1, j))
            .collect();
        let mut s = format!(
            "{}: {}{}\n",
            o.ty,
            pairs.join(" "),
            if o.trivial { " (trivial)" } else { "" }
        );
        if let Some(or) = &o.oracle {
            let verdict = if *or == o.images { "agrees" } else { "DISAGREES" };
            let _ = writeln!(s, "oracle {verdict}: {}", join(or));
        }
        s
    }))
}

#[derive(Serialize)]
struct LocalWitness {
    index: usize,
    generator: String,
    witness: Option<String>,
}

#[derive(Serialize)]
struct MapReport {
    f: Vec<usize>,
    global: Option<String>,
    locals: Vec<LocalWitness>,
    local_global: Option<Verdict>,
}

#[derive(Serialize)]
struct IsomReport {
    joint_group_order: usize,
    locals: usize,
    maps: Vec<MapReport>,
}

fn isom(fmt: Format, file1: &str, file2: &str, local: Option<usize>, all_locals: bool) -> Result<Output> {
    let (d1, d2) = (load(file1)?, load(file2)?);
    if d1.node_count() != d2.node_count() {
        return Err(Error::input("the diagrams have different numbers of nodes"));
    }
    let maps = component_maps(&d1, &d2);
    let mut reports = Vec::new();
    let mut joint = None;
    for f in maps {
        let inst = Instance::new("isom", d1.clone(), d2.clone(), f.clone())?;
        let family = chebotarev_family(&inst.joint_group());
        if let Some(k) = local {
            if k >= family.len() {
                return Err(Error::input(format!(
                    "local index {k} out of range (0..{})",
                    family.len()
                )));
            }
        }
        let wanted: Vec<usize> = match (local, all_locals) {
            (Some(k), _) => vec![k],
            (None, true) => (0..family.len()).collect(),
            (None, false) => Vec::new(),
        };
        let mut locals = Vec::new();
        for k in wanted {
            let g = &family.locals()[k].generator;
            let (l1, l2) = inst.restrict(g)?;
            locals.push(LocalWitness {
                index: k,
                generator: g.to_cycle_string(),
                witness: decide_isom_oracle(&l1, &l2, &f)?.map(|p| p.to_cycle_string()),
            });
        }
        let local_global = if inst.in_hypothesis() {
            Some(verify_theorem(&inst, &family)?)
        } else {
            None
        };
        joint.get_or_insert((inst.joint_group().order(), family.len()));
        reports.push(MapReport {
            f: f.images().to_vec(),
            global: decide_isom_oracle(&d1, &d2, &f)?.map(|p| p.to_cycle_string()),
            locals,
            local_global,
        });
    }
    let (order, nlocals) = joint.unwrap_or((0, 0));
    let report = IsomReport {
        joint_group_order: order,
        locals: nlocals,
        maps: reports,
    };
    let failed = report
        .maps
        .iter()
        .any(|m| matches!(m.local_global, Some(Verdict::Counterexample { .. })));
    Ok(emit(fmt, &report, failed, |r| {
        let mut s = String::new();
        if r.maps.is_empty() {
            s.push_str("no equivariant component map\n");
        }
        for m in &r.maps {
            let _ = writeln!(s, "f = [{}]", join(&m.f));
            let _ = writeln!(s, "  global: {}", m.global.as_deref().unwrap_or("none"));
            for l in &m.locals {
                let _ = writeln!(
                    s,
                    "  local {} <{}>: {}",
                    l.index,
                    l.generator,
                    l.witness.as_deref().unwrap_or("none")
                );
            }
            if let Some(v) = &m.local_global {
                let _ = writeln!(s, "  local-global: {}", verdict_text(v));
            }
        }
        s
    }))
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "PASS".into(),
        Verdict::Vacuous { missing_local } => format!("VACUOUS (no witness at local {missing_local})"),
        Verdict::Counterexample { reason } => format!("COUNTEREXAMPLE: {reason}"),
    }
}

fn dump_name(label: &str) -> String {
    let safe: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("counterexample-{safe}.json")
}

fn verify_local_global(fmt: Format, bounds: &Bounds, jobs: usize, explore: bool, dump_dir: &Path) -> Result<Output> {
    eprintln!(
        "campaign: order <= {}, rank <= {}, <= {} components, jobs {}",
        bounds.max_order, bounds.max_rank, bounds.max_components, jobs
    );
    let start = Instant::now();
    let report = run_campaign(bounds, jobs, explore)?;
    eprintln!(
        "campaign: {} diagrams, {} instances in {:.1}s",
        report.diagrams,
        report.instances,
        start.elapsed().as_secs_f64()
    );
    for (o, inst) in report.counterexamples.iter().zip(&report.counterexample_instances) {
        let path = dump_dir.join(dump_name(&inst.label));
        let file = InstanceFile::from_instance(inst, Some(o.verdict.clone()));
        std::fs::write(&path, file.to_json() + "\n").map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
        eprintln!("dumped {}", path.display());
    }
    let failed = !report.all_ok();
    Ok(emit(fmt, &report, failed, campaign_text))
}

fn campaign_text(r: &CampaignReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "diagrams             {}", r.diagrams);
    let _ = writeln!(s, "in hypothesis        {}", r.in_hypothesis_diagrams);
    let _ = writeln!(s, "Aut_id mismatches    {}", r.aut_id_mismatches.len());
    let _ = writeln!(s, "same-type failures   {}", r.same_type_failures.len());
    let _ = writeln!(s, "same-aut failures    {}", r.same_aut_failures.len());
    let _ = writeln!(s, "instances            {}", r.instances);
    let _ = writeln!(s, "PASS                 {}", r.pass);
    for (ty, n) in &r.pass_by_type {
        let _ = writeln!(s, "  {ty:<18} {n}");
    }
    let _ = writeln!(s, "  used involution    {}", r.used_involution);
    let _ = writeln!(s, "  realigned          {}", r.realigned);
    let _ = writeln!(s, "VACUOUS              {}", r.vacuous);
    let _ = writeln!(s, "COUNTEREXAMPLE       {}", r.counterexamples.len());
    for c in &r.counterexamples {
        let _ = writeln!(s, "  {}: {}", c.label, verdict_text(&c.verdict));
    }
    if let Some(p) = &r.probe {
        let _ = writeln!(
            s,
            "probe                {} pairs, {} locally isomorphic, {} globally, {} local-only",
            p.instances, p.locals_complete, p.global_exists, p.local_global_failures
        );
    }
    s
}

#[derive(Serialize)]
struct ReplayReport {
    label: String,
    in_hypothesis: bool,
    verdict: Option<Verdict>,
    recorded: Option<Verdict>,
}

fn replay(fmt: Format, file: &str) -> Result<Output> {
    let text = read(file)?;
    let dump = InstanceFile::from_json(&text).map_err(|e| with_path(file, e))?;
    let inst = dump.instance()?;
    let in_hypothesis = inst.in_hypothesis();
    let verdict = if in_hypothesis {
        Some(verify_theorem(&inst, &chebotarev_family(&inst.joint_group()))?)
    } else {
        None
    };
    let r = ReplayReport {
        label: dump.label,
        in_hypothesis,
        verdict,
        recorded: dump.verdict,
    };
    let failed = matches!(r.verdict, Some(Verdict::Counterexample { .. }));
    Ok(emit(fmt, &r, failed, |r| match &r.verdict {
        Some(v) => format!("{}: {}\n", r.label, verdict_text(v)),
        None => format!("{}: outside the hypothesis\n", r.label),
    }))
}

fn deligne(fmt: Format, file: &str, n: u64) -> Result<Output> {
    let text = read(file)?;
    let (df, d) = read_diagram(&text).map_err(|e| with_path(file, e))?;
    let cover = df.cover(&d, &text).map_err(|e| with_path(file, e))?;
    let phi = df.phi(&d, &cover, &text).map_err(|e| with_path(file, e))?;
    let report = deligne_construct(&d, &cover, &phi, n)?;
    Ok(emit(fmt, &report, false, deligne_text))
}

fn deligne_text(r: &DeligneReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "type      {}", r.ty);
    let _ = writeln!(s, "n         {}", r.n);
    let _ = writeln!(s, "S         {{{}}}", join(&r.s));
    let _ = writeln!(s, "Phi       {{{}}}", join(&r.phi.phi));
    for p in &r.points {
        let rr = p.r.map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(
            s,
            "  node {:<3} component {} r = {:<5} dim {:<4} V(s) = {}  F_S = ({}, {})",
            p.node, p.component, rr, p.dim, p.v, p.f_s.0, p.f_s.1
        );
    }
    let _ = writeln!(s, "V         {}", r.v);
    let _ = writeln!(s, "W_F       {}", r.w_f_hodge);
    let _ = writeln!(s, "V'        {}", r.v_prime);
    let _ = writeln!(s, "dim V'    {}", r.dim_v_prime);
    let _ = writeln!(s, "dim A     {}", r.abelian_variety_dim);
    s
}

fn hyperadjoint_cmd(fmt: Format, spec: &str, dim: Option<u64>) -> Result<Output> {
    let acting: ReductiveDatum = spec.parse()?;
    let dim = dim.unwrap_or(acting.lie_dim() + 1);
    let v = TannakianObject::new(acting, dim)?;
    let chain = hyperadjoint(&v)?;
    Ok(emit(fmt, &chain, false, |c: &HyperadjointChain| {
        let mut s = String::new();
        for (i, o) in c.chain.iter().enumerate() {
            let _ = writeln!(s, "V^({i})  dim {:<6} group {}", o.dim, o.acting);
        }
        let _ = writeln!(s, "index {}", c.index);
        s
    }))
}

fn goursat(fmt: Format, max_order: usize, jobs: usize) -> Result<Output> {
    if max_order == 0 {
        return Err(Error::input("max order must be positive"));
    }
    let start = Instant::now();
    let sweep = goursat_sweep(max_order, jobs);
    eprintln!(
        "goursat: {} pairs in {:.1}s",
        sweep.pairs.len(),
        start.elapsed().as_secs_f64()
    );
    let failed = sweep.failures > 0;
    Ok(emit(fmt, &sweep, failed, |w: &GoursatSweep| {
        let mut s = String::new();
        for p in &w.pairs {
            if !p.failures.is_empty() {
                for f in &p.failures {
                    let _ = writeln!(s, "{} x {}: {f}", p.g1, p.g2);
                }
            }
        }
        let _ = writeln!(
            s,
            "{} group pairs, {} subdirect subgroups, {} failures",
            w.pairs.len(),
            w.subdirect,
            w.failures
        );
        s
    }))
}
