use crate::error::{CliError, CliResult};
use crate::files::{self, FrameSpecFile, GridFile, ReportFile, SignalFile};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::json;
use sphereframe::constructions::{curvelet_spec, polar_sample, wavelet_spec, zonal_spec, Window};
use sphereframe::diagnostics::{
    autocorrelation, autocorrelation_closed, localization_report, structure_report, uncertainty_bound,
};
use sphereframe::frames::{
    analysis_all, canonical_dual, dual_residuals, frame_bounds, parseval_check, sigma_profile, synthesis,
    FrameSpec, FrameSystem, Signal,
};
use sphereframe::harmonics::{index_set, CoeffTable, Rotation};
use sphereframe::quadrature::{
    embed_subsphere_rotation, rotation_rule, rotation_rule_size, sphere_rule, sphere_rule_size, Variant,
    DEFAULT_MAX_NODES,
};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "sphereframe", version, about = "Rotated-polynomial frames on spheres")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest rotation grid any command may build.
    #[arg(long, global = true, env = "SPHEREFRAME_MAX_NODES", default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a frame spec file.
    Build(BuildArgs),
    /// Frame bounds, σ profile and optionally the dual-pair residual.
    Check(CheckArgs),
    /// Write the canonical dual of a spec.
    Dual(DualArgs),
    /// Analysis followed by canonical-dual synthesis of a signal.
    Reconstruct(ReconstructArgs),
    /// Centre of mass, variances and uncertainty products per scale.
    Localize(LocalizeArgs),
    /// Autocorrelation at random rotations fixing the north pole.
    Autocorr(AutocorrArgs),
    /// Sample a frame element on a polar grid around the north pole.
    Figure(FigureArgs),
    /// Sizes of sphere rules and rotation grids.
    Quadinfo(QuadinfoArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Wavelet,
    Curvelet,
    Zonal,
    FromFile,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WindowArg {
    Kappa1,
    Kappa2,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Window {
        match w {
            WindowArg::Kappa1 => Window::Kappa1,
            WindowArg::Kappa2 => Window::Kappa2,
        }
    }
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, short)]
    pub d: Option<usize>,
    /// Steerability cutoff for wavelets.
    #[arg(long = "k", short = 'k')]
    pub cutoff: Option<u32>,
    /// Finest scale; bandwidths are 2^j.
    #[arg(long = "levels", short = 'J')]
    pub levels: Option<u32>,
    #[arg(long, value_enum, default_value = "kappa1")]
    pub window: WindowArg,
    /// Spec file to validate and rewrite (kind from-file).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Highest degree to inspect (default: largest bandwidth).
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Second spec for the dual-pair test.
    #[arg(long)]
    pub dual: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DualArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// auto, general, steerable, zonal, so_d2_invariant or steerable_so_d2.
    #[arg(long, default_value = "auto")]
    pub grid_variant: String,
    /// Steerability order for the steerable grid variants.
    #[arg(long = "k", short = 'k')]
    pub cutoff: Option<u32>,
    #[arg(long, conflicts_with = "random")]
    pub signal: Option<PathBuf>,
    /// Random signal of this degree.
    #[arg(long)]
    pub random: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Relative error above which the command fails.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Also write the input signal.
    #[arg(long)]
    pub save_signal: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LocalizeArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// `a..b` (inclusive) or a comma list; default all scales above 0.
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AutocorrArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, short)]
    pub j: usize,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Pgm,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, short)]
    pub j: usize,
    /// Samples along both `t` and `φ`.
    #[arg(long, default_value_t = 256)]
    pub resolution: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Sample `t ∈ [0, π]` instead.
    #[arg(long, conflicts_with = "t_max")]
    pub full_range: bool,
    /// Unit vector on S^{d-3}, comma separated (default e^1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eta2: Option<Vec<f64>>,
    /// Default: from the output extension, csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct QuadinfoArgs {
    #[arg(long, short, required_unless_present = "grid_in")]
    pub d: Option<usize>,
    /// Class degree of the rotation grid.
    #[arg(long, short, required_unless_present = "grid_in")]
    pub n: Option<u32>,
    #[arg(long, default_value = "general")]
    pub variant: String,
    #[arg(long = "k", short = 'k')]
    pub cutoff: Option<u32>,
    /// Build the grid and write it.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Summarise an existing grid file.
    #[arg(long, conflicts_with_all = ["d", "n"])]
    pub grid_in: Option<PathBuf>,
}

pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    let cap = cli.max_nodes;
    match cli.command {
        Command::Build(a) => build(a),
        Command::Check(a) => check(a),
        Command::Dual(a) => dual(a),
        Command::Reconstruct(a) => reconstruct(a, cap),
        Command::Localize(a) => localize(a),
        Command::Autocorr(a) => autocorr(a),
        Command::Figure(a) => figure(a),
        Command::Quadinfo(a) => quadinfo(a, cap),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Input(format!("--{flag} is required for this kind")))
}

fn build(a: BuildArgs) -> CliResult<()> {
    let spec = match a.kind {
        Kind::Wavelet => wavelet_spec(
            need(a.d, "d")?,
            need(a.cutoff, "k")?,
            need(a.levels, "levels")?,
            a.window.into(),
        )?,
        Kind::Curvelet => curvelet_spec(need(a.d, "d")?, need(a.levels, "levels")?)?,
        Kind::Zonal => zonal_spec(need(a.d, "d")?, need(a.levels, "levels")?, a.window.into())?,
        Kind::FromFile => files::read_spec(&need(a.input, "input")?)?,
    };
    files::write(&a.out, &FrameSpecFile::from_spec(&spec))?;
    let n_max = spec.max_bandwidth();
    let b = frame_bounds(&spec, n_max);
    let zeros = sigma_profile(&spec, n_max).zeros();
    let st = structure_report(&spec);
    println!("wrote {} (d = {}, {} scales)", a.out.display(), spec.dim(), spec.scales().len());
    println!("sigma on n <= {n_max}: C1 = {:e}, C2 = {:e}", b.c1, b.c2);
    if !zeros.is_empty() {
        println!("sigma vanishes at n = {zeros:?}");
    }
    let show = |v: Option<String>| v.unwrap_or_else(|| "none".to_string());
    println!(
        "stored table: steerable order {}, invariance order {}",
        st.steerable_k,
        show(st.invariant_m.map(|m| m.to_string()))
    );
    let m = spec.metadata();
    println!(
        "metadata: steerable K {}, invariant m {}, base rotation {}",
        show(m.steerable_k.map(|k| k.to_string())),
        show(m.invariant_m.map(|k| k.to_string())),
        if m.base_rotation.is_some() { "set" } else { "none" }
    );
    Ok(())
}

fn check(a: CheckArgs) -> CliResult<()> {
    let spec = files::read_spec(&a.spec)?;
    let n_max = a.n_max.unwrap_or_else(|| spec.max_bandwidth());
    let b = frame_bounds(&spec, n_max);
    let profile = sigma_profile(&spec, n_max);
    let zeros = profile.zeros();
    let mut body = json!({
        "n_max": n_max,
        "c1": b.c1,
        "c2": b.c2,
        "is_frame_on_range": b.is_frame_on_range,
        "sigma": profile.sigma,
        "sigma_zeros": zeros,
    });
    println!("C1 = {:e}, C2 = {:e} on n <= {n_max}", b.c1, b.c2);
    let mut failures = Vec::new();
    if !zeros.is_empty() {
        println!("sigma vanishes at n = {zeros:?}");
        failures.push(format!("sigma vanishes at {} degrees", zeros.len()));
    }
    if let Some(path) = &a.dual {
        let other = files::read_spec(path)?;
        if other.dim() != spec.dim() {
            return Err(CliError::Input(format!(
                "dimension mismatch: {} vs {}",
                spec.dim(),
                other.dim()
            )));
        }
        let res = dual_residuals(&spec, &other, n_max)?;
        let worst = res.iter().copied().fold(0.0, f64::max);
        let passed = worst <= a.tol;
        println!("dual residual max {worst:e} (tol {:e})", a.tol);
        body["dual"] = json!({ "residuals": res, "max_residual": worst, "tol": a.tol, "passed": passed });
        if !passed {
            failures.push(format!("dual residual {worst:e} exceeds {:e}", a.tol));
        }
    }
    if let Some(out) = &a.out {
        files::write(out, &ReportFile::new("check", None, body))?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failures.join("; ")))
    }
}

fn dual(a: DualArgs) -> CliResult<()> {
    let spec = files::read_spec(&a.spec)?;
    let d = canonical_dual(&spec)?;
    files::write(&a.out, &FrameSpecFile::from_spec(&d))?;
    println!("wrote {}", a.out.display());
    Ok(())
}

/// Complex Gaussian coefficients on every `(n, k)` with `n ≤ degree`, scaled
/// to unit energy.
pub fn random_signal(d: usize, degree: u32, seed: u64) -> CliResult<Signal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = CoeffTable::new(d);
    for n in 0..=degree {
        for k in index_set(d, n) {
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            t.insert(n, k, c)?;
        }
    }
    let norm = t.norm_sq().sqrt();
    Ok(Signal::new(t.map_by_degree(|_, c| c / norm), degree)?)
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    let s = seed.unwrap_or_else(rand::random);
    println!("seed: {s}");
    s
}

fn build_system(spec: FrameSpec, variant: &str, k: Option<u32>, cap: u64) -> CliResult<FrameSystem> {
    if variant == "auto" {
        return Ok(FrameSystem::new(spec, cap)?);
    }
    let base = Variant::parse(variant, k)?;
    let variants: Vec<Variant> = spec
        .scales()
        .iter()
        .map(|s| match base {
            Variant::Steerable(k) => Variant::Steerable(k.min(s.bandwidth)),
            Variant::SteerableSoD2(k) => Variant::SteerableSoD2(k.min(s.bandwidth)),
            v => v,
        })
        .collect();
    Ok(FrameSystem::with_variants(spec, &variants, cap)?)
}

fn reconstruct(a: ReconstructArgs, cap: u64) -> CliResult<()> {
    let spec = files::read_spec(&a.spec)?;
    let (f, seed) = match (&a.signal, a.random) {
        (Some(p), _) => (files::read::<SignalFile>(p)?.to_signal()?, None),
        (None, Some(deg)) => {
            let s = seed_or_fresh(a.seed);
            (random_signal(spec.dim(), deg, s)?, Some(s))
        }
        (None, None) => return Err(CliError::Input("give --signal or --random".into())),
    };
    if f.dim() != spec.dim() {
        return Err(CliError::Input("signal and spec dimensions differ".into()));
    }
    if let Some(p) = &a.save_signal {
        files::write(p, &SignalFile::from_signal(&f, seed))?;
    }
    let dual = canonical_dual(&spec)?;
    let system = build_system(spec, &a.grid_variant, a.cutoff, cap)?;
    let coeffs = analysis_all(&system, &f)?;
    let back = synthesis(&system, &dual, &coeffs, f.degree())?;
    let err = back.relative_error(&f);
    let pc = parseval_check(&system, &f)?;
    let grids: Vec<_> = system
        .grids
        .iter()
        .enumerate()
        .map(|(j, g)| json!({ "j": j, "variant": g.variant.name(), "steer_k": g.variant.steer_order(), "rotations": g.len() }))
        .collect();
    println!("rotations: {}", system.total_rotations());
    println!("relative coefficient error: {err:e}");
    println!("parseval gap: {:e}", pc.rel_gap);
    let body = json!({
        "degree": f.degree(),
        "relative_error": err,
        "tol": a.tol,
        "parseval": { "discrete": pc.discrete_sum, "spectral": pc.spectral_sum, "rel_gap": pc.rel_gap },
        "total_rotations": system.total_rotations(),
        "grids": grids,
    });
    if let Some(out) = &a.out {
        files::write(out, &ReportFile::new("reconstruct", seed, body))?;
    }
    if err > a.tol {
        return Err(CliError::Validation(format!("relative error {err:e} exceeds {:e}", a.tol)));
    }
    Ok(())
}

pub fn parse_scales(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Input(format!("cannot parse scales {s:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
    }
}

fn localize(a: LocalizeArgs) -> CliResult<()> {
    let spec = files::read_spec(&a.spec)?;
    let scales = match &a.scales {
        Some(s) => parse_scales(s)?,
        None => (1..spec.scales().len()).collect(),
    };
    let report = localization_report(&spec, &scales)?;
    let bound = uncertainty_bound(spec.dim());
    println!(
        "{:>3} {:>6} {:>14} {:>14} {:>14} {:>12} {:>12}",
        "j", "N_j", "xi0_d", "var_space", "var_s*N_j^2", "var_moment", "product"
    );
    let mut rows = Vec::new();
    let mut scaled = Vec::new();
    for s in &report.scales {
        let n2 = (s.bandwidth as f64).powi(2);
        scaled.push(s.var_space * n2);
        println!(
            "{:>3} {:>6} {:>14.10} {:>14.6e} {:>14.6} {:>12.4e} {:>12.6}",
            s.j,
            s.bandwidth,
            s.xi0_d,
            s.var_space,
            s.var_space * n2,
            s.var_momentum,
            s.uncertainty_product
        );
        rows.push(json!({
            "j": s.j,
            "bandwidth": s.bandwidth,
            "norm_sq": s.norm_sq,
            "xi0_d": s.xi0_d,
            "xi0_vec": s.xi0_vec,
            "var_space": s.var_space,
            "var_space_upper": s.var_space_upper,
            "var_momentum": s.var_momentum,
            "uncertainty_product": s.uncertainty_product,
        }));
    }
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    if !scaled.is_empty() {
        println!("var_s*N_j^2 in [{lo:.6}, {hi:.6}], ratio {:.4}; uncertainty bound {bound}", hi / lo);
    }
    if let Some(out) = &a.out {
        let body = json!({
            "d": report.d,
            "uncertainty_bound": bound,
            "scaled_var_space_bracket": [lo, hi],
            "scales": rows,
        });
        files::write(out, &ReportFile::new("localize", None, body))?;
    }
    Ok(())
}

fn random_unit(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn autocorr(a: AutocorrArgs) -> CliResult<()> {
    let spec = files::read_spec(&a.spec)?;
    let d = spec.dim();
    let bandwidth = spec
        .scales()
        .get(a.j)
        .ok_or_else(|| CliError::Input(format!("scale {} out of range", a.j)))?
        .bandwidth;
    let seed = seed_or_fresh(a.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rule = sphere_rule(d, bandwidth)?;
    let energy = spec.scales()[a.j].coeffs.norm_sq();
    let closed_ok = autocorrelation_closed(&spec, a.j, 1.0).is_ok();
    if !closed_ok {
        println!("scale {} is not of the κζ shape; closed form skipped", a.j);
    }
    println!("{:>12} {:>22} {:>22} {:>22}", "s", "numeric re", "numeric im", "closed");
    let mut rows = Vec::new();
    for _ in 0..a.samples {
        // rotation fixing e^d, random in the subsphere and one extra plane
        let h = embed_subsphere_rotation(&random_unit(d - 1, &mut rng))?
            .compose(&Rotation::givens(d, 0, rng.gen_range(0.0..std::f64::consts::TAU)));
        let s = h.get(d - 2, d - 2);
        let v = autocorrelation(&spec, a.j, &h, &rule)?;
        let closed = if closed_ok {
            Some(autocorrelation_closed(&spec, a.j, s)?)
        } else {
            None
        };
        println!(
            "{s:>12.8} {:>22.15e} {:>22.15e} {:>22}",
            v.re,
            v.im,
            closed.map_or("-".to_string(), |c| format!("{c:.15e}"))
        );
        rows.push(json!({
            "rotation": h.as_row_major(),
            "s": s,
            "numeric": [v.re, v.im],
            "closed": closed,
        }));
    }
    if let Some(out) = &a.out {
        let body = json!({ "j": a.j, "norm_sq": energy, "samples": rows });
        files::write(out, &ReportFile::new("autocorr", Some(seed), body))?;
    }
    Ok(())
}

fn figure(a: FigureArgs) -> CliResult<()> {
    let spec = files::read_spec(&a.spec)?;
    let d = spec.dim();
    let invariant = spec.metadata().invariant_m.or_else(|| structure_report(&spec).invariant_m);
    if invariant.is_none_or(|m| m < d - 2) {
        eprintln!("warning: spec is not SO(d-2)-invariant; the picture depends on the fixed η''");
    }
    let t_max = if a.full_range { std::f64::consts::PI } else { a.t_max };
    let grid = polar_sample(&spec, a.j, a.resolution, a.resolution, t_max, a.eta2.as_deref())?;
    let format = a.format.unwrap_or_else(|| {
        match a.out.extension().and_then(|e| e.to_str()) {
            Some("pgm") => Format::Pgm,
            _ => Format::Csv,
        }
    });
    let bytes = match format {
        Format::Csv => grid.to_csv().into_bytes(),
        Format::Pgm => grid.to_pgm(),
    };
    files::write_bytes(&a.out, &bytes)?;
    println!(
        "wrote {} ({}×{}, rescaled by {:e}, reflection defect {:e})",
        a.out.display(),
        grid.t.len(),
        grid.phi.len(),
        grid.rescale,
        grid.reflection_defect()
    );
    Ok(())
}

fn quadinfo(a: QuadinfoArgs, cap: u64) -> CliResult<()> {
    if let Some(p) = &a.grid_in {
        let file: GridFile = files::read(p)?;
        let rule = file.to_rule()?;
        let total: f64 = rule.weights.iter().sum();
        println!(
            "{}: d = {}, variant {}, class {}, {} rotations, weight sum {total}",
            p.display(),
            file.d,
            rule.variant.name(),
            rule.class_degree,
            rule.len()
        );
        if let Some(out) = &a.out {
            files::write(out, &GridFile::from_rule(&rule, file.d))?;
        }
        return Ok(());
    }
    let d = need(a.d, "d")?;
    let n = need(a.n, "n")?;
    let variant = Variant::parse(&a.variant, a.cutoff)?;
    let size = rotation_rule_size(d, n, variant);
    println!("sphere rule S^{}: {} nodes, exact to degree {}", d - 1, sphere_rule_size(d, n), 2 * n);
    println!(
        "rotation grid SO({d}), {} class {n}: {size} rotations (cap {cap}{})",
        variant.name(),
        if size > cap { ", exceeded" } else { "" }
    );
    if let Some(out) = &a.out {
        let rule = rotation_rule(d, n, variant, cap)?;
        files::write(out, &GridFile::from_rule(&rule, d))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}
