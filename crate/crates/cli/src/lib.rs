//! Command-line front end for enumeration, generating sets, certification
//! and the reproduction table.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use polargen::embedding::{embed, su_submodule_closure, EmbeddedGeometry};
use polargen::genset::{build_genset, certify, GenSet, GreedyOptions, RankCertificate, Verdict};
use polargen::geometry::export::SCHEMA;
use polargen::geometry::{classify_relation, closure, parallel_lines};
use polargen::linalg::binomial;
use polargen::{enumerate, Elem, FormKind, FormSpace, Geometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "polargen", version, about = "Generating sets of polar Grassmannians over finite fields")]
pub struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "POLARGEN_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the points and lines of a polar Grassmannian
    Enumerate {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build or certify generating sets
    #[command(subcommand)]
    Genset(GensetCommand),
    /// Grassmann embedding of a saved geometry
    Embed {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Span of random seeds under the unitary group acting on ⋀^k V
    IrrepCheck {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full pipeline for one instance, with a table row and a JSON report
    Reproduce {
        #[command(flatten)]
        geom: GeomArgs,
        #[command(flatten)]
        greedy: GreedyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relation code of two points of Γ_2
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        x: u32,
        y: u32,
    },
    /// Subspace spanned by the listed points
    Closure {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(required = true)]
        points: Vec<u32>,
    },
    /// Parallel pair of lines through two points of Γ_2
    Parallel {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(value_name = "P")]
        first: u32,
        #[arg(value_name = "Q")]
        second: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum GensetCommand {
    /// Build the inductive generating set
    Build {
        #[command(flatten)]
        geom: GeomArgs,
        #[command(flatten)]
        greedy: GreedyArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a saved generating set against a saved geometry
    Certify {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GeomArgs {
    /// Form: sp (symplectic) or her (Hermitian)
    #[arg(long)]
    pub form: FormKind,
    /// Field order; Hermitian forms live over GF(q²)
    #[arg(long)]
    pub q: u32,
    /// Witt index (dim V = 2n)
    #[arg(long)]
    pub n: usize,
    /// Dimension of the t.i. subspaces
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Clone)]
pub struct GreedyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Saved geometry; otherwise --form/--q/--n/--k
    #[arg(long, conflicts_with_all = ["form", "q", "n", "k"])]
    pub geometry: Option<PathBuf>,
    #[arg(long)]
    pub form: Option<FormKind>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

/// A validated instance: form space, k, and greedy settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub space: FormSpace,
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl RunConfig {
    pub fn new(geom: &GeomArgs, seed: u64, restarts: usize) -> Result<RunConfig> {
        if geom.n == 0 {
            bail!("n must be at least 1");
        }
        if geom.k == 0 || geom.k > geom.n {
            bail!("k must satisfy 1 <= k <= n, got k = {} with n = {}", geom.k, geom.n);
        }
        if restarts == 0 {
            bail!("restarts must be at least 1");
        }
        let space = FormSpace::standard(geom.form, geom.q, geom.n)
            .with_context(|| format!("cannot build the {} form over q = {}", geom.form.short(), geom.q))?;
        Ok(RunConfig { space, k: geom.k, seed, restarts })
    }

    pub fn greedy(&self) -> GreedyOptions {
        GreedyOptions { seed: self.seed, restarts: self.restarts, ..GreedyOptions::default() }
    }
}

impl SourceArgs {
    fn load(&self) -> Result<Geometry> {
        if let Some(path) = &self.geometry {
            return Geometry::load(path).with_context(|| format!("reading {}", path.display()));
        }
        let (Some(form), Some(q), Some(n), Some(k)) = (self.form, self.q, self.n, self.k) else {
            bail!("give --geometry or all of --form, --q, --n, --k");
        };
        let cfg = RunConfig::new(&GeomArgs { form, q, n, k }, 0, 1)?;
        Ok(enumerate(&cfg.space, cfg.k)?)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn check_point(g: &Geometry, p: u32) -> Result<()> {
    if p as usize >= g.num_points() {
        bail!("point {p} out of range (the geometry has {} points)", g.num_points());
    }
    Ok(())
}

#[derive(Serialize)]
struct ReproduceReport<'a> {
    schema: u32,
    seed: u64,
    restarts: usize,
    certificate: &'a RankCertificate,
    line_size: usize,
    members: Vec<u32>,
    tags: &'a [polargen::genset::Provenance],
    embedding_rank: usize,
    embedding_subfield_rank: Option<usize>,
}

pub fn table_header() -> String {
    format!(
        "{:<14} {:>2} {:>8} {:>8} {:>5} {:>5} {:<34} {:>9}",
        "geometry", "k", "points", "lines", "|S|", "d_k", "verdict", "time"
    )
}

fn table_row(c: &RankCertificate, secs: f64) -> String {
    format!(
        "{:<14} {:>2} {:>8} {:>8} {:>5} {:>5} {:<34} {:>8.2}s",
        c.geometry,
        c.k,
        c.points,
        c.lines,
        c.set_size,
        c.lower_bound,
        c.verdict.to_string(),
        secs
    )
}

fn reproduce(cfg: &RunConfig, out: Option<&Path>, w: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let g = enumerate(&cfg.space, cfg.k).context("enumeration")?;
    let s = build_genset(&g, &cfg.greedy()).context("building the generating set")?;
    let members = s.indices_in(&g)?;
    let cert = certify(&g, &members).context("certification")?;
    let emb: EmbeddedGeometry = embed(&g).context("embedding")?;
    let secs = start.elapsed().as_secs_f64();
    writeln!(w, "{}", table_header())?;
    writeln!(w, "{}", table_row(&cert, secs))?;
    if let Some(b) = cert.gf4_bound {
        writeln!(w, "lower bound for the GF(4) dual polar space: (4^n+2)/3 = {b}")?;
    }
    if let Some(note) = &cert.note {
        writeln!(w, "{note}")?;
    }
    if let Some(path) = out {
        let report = ReproduceReport {
            schema: SCHEMA,
            seed: cfg.seed,
            restarts: cfg.restarts,
            certificate: &cert,
            line_size: g.line_size(),
            members,
            tags: &s.tags,
            embedding_rank: emb.rank,
            embedding_subfield_rank: emb.subfield_rank,
        };
        write_json(path, &report)?;
    }
    Ok(if cert.verdict == Verdict::CertifiedMinimal { 0 } else { 1 })
}

fn irrep_check(cfg: &RunConfig, seeds: usize, w: &mut dyn Write) -> Result<i32> {
    let v = &cfg.space;
    if v.kind() != FormKind::Hermitian {
        bail!("irrep-check needs --form her");
    }
    if cfg.k >= v.dim() {
        bail!("k must be below 2n");
    }
    let dim = binomial(v.dim(), cfg.k);
    let q = v.field().order();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dims = Vec::with_capacity(seeds);
    for _ in 0..seeds {
        let x = loop {
            let x: Vec<Elem> = (0..dim).map(|_| Elem(rng.gen_range(0..q) as u16)).collect();
            if x.iter().any(|e| !e.is_zero()) {
                break x;
            }
        };
        dims.push(su_submodule_closure(v, cfg.k, &x)?);
    }
    let full = dims.iter().all(|&d| d == dim);
    let report = json!({
        "schema": SCHEMA,
        "geometry": format!("{} k={}", v.label(), cfg.k),
        "seed": cfg.seed,
        "module_dimension": dim,
        "closure_dimensions": dims,
        "irreducible_on_samples": full,
    });
    writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if full { 0 } else { 1 })
}

/// Runs a parsed command, writing human output to `w`; returns the exit code.
pub fn run(cli: Cli, w: &mut dyn Write) -> Result<i32> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        // a pool may already exist when run is called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match cli.command {
        Command::Enumerate { geom, out } => {
            let cfg = RunConfig::new(&geom, 0, 1)?;
            let g = enumerate(&cfg.space, cfg.k)?;
            g.save(&out).with_context(|| format!("writing {}", out.display()))?;
            writeln!(w, "{}: {} points, {} lines of size {}", g.label(), g.num_points(), g.num_lines(), g.line_size())?;
        }
        Command::Genset(GensetCommand::Build { geom, greedy, out }) => {
            let cfg = RunConfig::new(&geom, greedy.seed, greedy.restarts)?;
            let g = enumerate(&cfg.space, cfg.k)?;
            let s = build_genset(&g, &cfg.greedy())?;
            s.save(&out).with_context(|| format!("writing {}", out.display()))?;
            writeln!(w, "{}: generating set of {} points", g.label(), s.len())?;
        }
        Command::Genset(GensetCommand::Certify { geometry, set, report }) => {
            let t0 = Instant::now();
            let g = Geometry::load(&geometry).with_context(|| format!("reading {}", geometry.display()))?;
            let s = GenSet::load(&set).with_context(|| format!("reading {}", set.display()))?;
            let idx = s.indices_in(&g)?;
            let load = t0.elapsed().as_secs_f64();
            let t1 = Instant::now();
            let cert = certify(&g, &idx)?;
            let secs = t1.elapsed().as_secs_f64();
            let mut value = serde_json::to_value(&cert)?;
            let obj = value.as_object_mut().expect("certificate serializes to an object");
            obj.insert("schema".into(), json!(SCHEMA));
            obj.insert("timings".into(), json!({ "load_seconds": load, "certify_seconds": secs }));
            write_json(&report, &value)?;
            writeln!(w, "{}", table_header())?;
            writeln!(w, "{}", table_row(&cert, secs))?;
            return Ok(if cert.verdict == Verdict::FailsToGenerate { 1 } else { 0 });
        }
        Command::Embed { geometry, out } => {
            let g = Geometry::load(&geometry).with_context(|| format!("reading {}", geometry.display()))?;
            let e = embed(&g)?;
            let mut value = serde_json::to_value(&e)?;
            value.as_object_mut().expect("embedding serializes to an object").insert("schema".into(), json!(SCHEMA));
            write_json(&out, &value)?;
            writeln!(
                w,
                "{}: rank {}{}",
                g.label(),
                e.rank,
                e.subfield_rank.map_or(String::new(), |r| format!(", subfield rank {r}"))
            )?;
        }
        Command::IrrepCheck { geom, seeds, seed } => {
            let cfg = RunConfig::new(&geom, seed, 1)?;
            return irrep_check(&cfg, seeds, w);
        }
        Command::Reproduce { geom, greedy, out } => {
            let cfg = RunConfig::new(&geom, greedy.seed, greedy.restarts)?;
            return reproduce(&cfg, out.as_deref(), w);
        }
        Command::Classify { source, x, y } => {
            let g = source.load()?;
            check_point(&g, x)?;
            check_point(&g, y)?;
            writeln!(w, "{}", classify_relation(&g, x, y)?)?;
        }
        Command::Closure { source, points } => {
            let g = source.load()?;
            for &p in &points {
                check_point(&g, p)?;
            }
            let r = closure(&g, &points)?;
            let report = json!({
                "schema": SCHEMA,
                "geometry": g.label(),
                "seed": r.seed,
                "size": r.size(),
                "full": r.is_full(&g),
                "rounds": r.rounds,
                "lines_triggered": r.lines_triggered,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Command::Parallel { source, first: p, second: q } => {
            let g = source.load()?;
            check_point(&g, p)?;
            check_point(&g, q)?;
            let pair = parallel_lines(&g, p, q)?;
            let report = json!({
                "schema": SCHEMA,
                "relation": pair.relation,
                "cross": pair.cross,
                "l": { "id": pair.l, "points": g.line(pair.l) },
                "m": { "id": pair.m, "points": g.line(pair.m) },
                "p_prime": pair.p_prime,
                "q_prime": pair.q_prime,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
        }
    }
    Ok(0)
}
