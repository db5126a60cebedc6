use clap::ValueEnum;
use fullspec::expressivity::{
    check_order2_bound, check_wl1_bound, construct_separating_poly, universal_interpolate,
    BoundOptions, BoundReport, InterpolationOptions, PairLabelMatrix,
};
use fullspec::filters::{
    apply_bivariate_poly, apply_full_spectrum_eigen, apply_univariate, diag_embed, project,
    tabulate, tensor_decompose, BivariatePoly, NodeOperator, UnivariateResponse,
};
use fullspec::graph::{erdos_renyi, laplacian, random_connected, Graph, LaplacianKind};
use fullspec::heterophily::{
    asymptotic_sweep, distance_to_spectral_subspace, loss, loss_equivariant, optimal_convolution,
    reynolds_average, sample_model, spectral_obstruction, ClassModel, EquivariantConv,
};
use fullspec::linalg::{default_spectral_tol, vec, Spectrum};
use fullspec::{rng, Error};
use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Params;
use crate::output::Sink;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Prop1,
    Prop2,
    Prop3,
    Thm1,
    Thm2,
    Thm3,
    Wlspec,
    Jensen,
    Opconv,
    Hdasym,
    Limitedex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violation,
    Precondition,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Precondition => 2,
            Status::Violation => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub check: Check,
    pub status: Status,
    pub laplacian: LaplacianKind,
    pub seed: u64,
    pub summary: String,
    pub details: Value,
}

pub struct Ctx<'a> {
    pub graph: Option<Graph>,
    pub kind: LaplacianKind,
    pub seed: u64,
    pub params: Params,
    pub sink: &'a Sink,
}

type Outcome = Result<(Status, String, Value), Error>;

fn random(n: usize, m: usize, r: &mut rng::Rng) -> DMatrix<f64> {
    DMatrix::from_fn(n, m, |_, _| r.random_range(-1.0..1.0))
}

fn random_poly(k: usize, r: &mut rng::Rng) -> BivariatePoly {
    BivariatePoly::new(random(k + 1, k + 1, r)).expect("square coefficients")
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Violation
    }
}

impl Ctx<'_> {
    fn spectrum(&self, g: &Graph) -> Result<Spectrum, Error> {
        Spectrum::of_laplacian(&laplacian(g, self.kind), self.kind)
    }

    /// The given graph, or `count` random connected graphs on `n` nodes.
    fn graphs(&self, count: usize, n: usize, p: f64) -> Vec<Graph> {
        match &self.graph {
            Some(g) => vec![g.clone()],
            None => (0..count as u64)
                .map(|i| random_connected(n, p, rng::derive(self.seed, i)))
                .collect(),
        }
    }

    fn count(&self) -> usize {
        self.params.graphs.unwrap_or(10)
    }

    fn trials(&self, default: usize) -> usize {
        self.params.trials.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.params.tol.unwrap_or(default)
    }
}

fn prop1(ctx: &Ctx) -> Outcome {
    let k = ctx.params.k.unwrap_or(3);
    let tol = ctx.tol(1e-8);
    let mut r = rng::seeded(ctx.seed);
    let mut worst = 0.0_f64;
    let mut dense_checked = 0;
    for g in ctx.graphs(ctx.count(), 8, 0.4) {
        let l = laplacian(&g, ctx.kind);
        let s = ctx.spectrum(&g)?;
        let n = g.n();
        for _ in 0..ctx.trials(5) {
            let q = random_poly(k, &mut r);
            let eps = random(n, n, &mut r);
            let route1 = apply_full_spectrum_eigen(&s, &tabulate(&q, &s), &eps)?;
            let route2 = apply_bivariate_poly(&l, &q, &eps)?;
            let scale = route2.norm().max(1e-300);
            worst = worst.max((&route1 - &route2).norm() / scale);
            if n <= 12 {
                let id = DMatrix::identity(n, n);
                let (s_op, t_op) = (l.kronecker(&id), id.kronecker(&l));
                let a = q.coeff_matrix();
                let mut acc = DVector::zeros(n * n);
                let mut sp = vec(&eps);
                for i in 0..a.nrows() {
                    let mut tp = sp.clone();
                    for j in 0..a.ncols() {
                        acc += &tp * a[(i, j)];
                        tp = &t_op * tp;
                    }
                    sp = &s_op * sp;
                }
                let dense = DMatrix::from_column_slice(n, n, acc.as_slice());
                worst = worst.max((&route2 - dense).norm() / scale);
                dense_checked += 1;
            }
        }
    }
    Ok((
        pass_if(worst < tol),
        format!("max relative disagreement between routes {worst:.3e} (tolerance {tol:e})"),
        json!({"K": k, "max_relative_error": worst, "dense_oracle_cases": dense_checked}),
    ))
}

fn prop2(ctx: &Ctx) -> Outcome {
    let k = ctx.params.k.unwrap_or(3);
    let tol = ctx.tol(1e-9);
    let mut r = rng::seeded(ctx.seed);
    let mut worst = 0.0_f64;
    for g in ctx.graphs(ctx.count(), 8, 0.4) {
        let s = ctx.spectrum(&g)?;
        for _ in 0..ctx.trials(5) {
            let q = random_poly(k, &mut r);
            let x = DVector::from_fn(g.n(), |_, _| r.random_range(-1.0..1.0));
            let filtered = apply_full_spectrum_eigen(&s, &tabulate(&q, &s), &diag_embed(&s, &x)?)?;
            let got = project(&s, &filtered)?;
            let diag = s.eigenvalues().iter().map(|&l| q.eval(l, l)).collect();
            let want =
                apply_univariate(NodeOperator::Spectrum(&s), &UnivariateResponse::Tabulated(diag), &x)?;
            worst = worst.max((&got - &want).amax() / want.amax().max(1e-300));
        }
    }
    Ok((
        pass_if(worst < tol),
        format!("relative diagonal embedding error {worst:.3e} (tolerance {tol:e})"),
        json!({"K": k, "max_relative_error": worst}),
    ))
}

fn prop3(ctx: &Ctx) -> Outcome {
    let k = ctx.params.k.unwrap_or(6);
    let tol = ctx.tol(1e-9);
    let mut r = rng::seeded(ctx.seed);
    let (mut exact, mut truncated) = (0.0_f64, f64::INFINITY);
    let mut rows = Vec::new();
    for g in ctx.graphs(ctx.count().min(3), 10, 0.4) {
        let s = ctx.spectrum(&g)?;
        for draw in 0..ctx.trials(8) {
            let rank = ctx.params.s.unwrap_or(1 + draw % 4).min(k + 1);
            let mut a = DMatrix::zeros(k + 1, k + 1);
            for _ in 0..rank {
                a += random(k + 1, 1, &mut r) * random(1, k + 1, &mut r);
            }
            let q = BivariatePoly::new(a)?;
            let grid = tabulate(&q, &s);
            let err = |big_s: usize| -> Result<f64, Error> {
                let t = tensor_decompose(&q, big_s)?;
                let approx = tabulate(&BivariatePoly::new(t.coeff_matrix())?, &s);
                Ok((approx - &grid).amax() / grid.amax().max(1e-300))
            };
            let at_rank = err(rank)?;
            exact = exact.max(at_rank);
            let below = if rank > 1 { Some(err(rank - 1)?) } else { None };
            if let Some(b) = below {
                truncated = truncated.min(b);
            }
            rows.push(json!({"rank": rank, "error_at_rank": at_rank, "error_below_rank": below}));
        }
    }
    Ok((
        pass_if(exact < tol),
        format!("relative reconstruction error {exact:.3e} at S = r; smallest at S = r-1 {truncated:.3e}"),
        json!({"K": k, "draws": rows}),
    ))
}

fn thm1(ctx: &Ctx) -> Outcome {
    let tol = ctx.tol(1e-7);
    let mut r = rng::seeded(ctx.seed);
    let mut worst = 0.0_f64;
    let graphs = match &ctx.graph {
        Some(g) => vec![g.clone()],
        None => (0..ctx.count() as u64)
            .map(|i| {
                (0..)
                    .map(|t| random_connected(7, 0.45, rng::derive(rng::derive(ctx.seed, i), t)))
                    .find(|g| ctx.spectrum(g).is_ok_and(|s| s.min_gap() > 1e-6))
                    .expect("infinite search")
            })
            .collect(),
    };
    for g in &graphs {
        let s = ctx.spectrum(g)?;
        let n = g.n();
        let (eps, target) = (random(n, n, &mut r), random(n, n, &mut r));
        let q = universal_interpolate(&s, &eps, &target, &InterpolationOptions::default())?;
        let got = apply_full_spectrum_eigen(&s, &tabulate(&q, &s), &eps)?;
        worst = worst.max((got - target).amax());
    }
    Ok((
        pass_if(worst < tol),
        format!("interpolated filters reproduce targets within {worst:.3e} on {} graphs", graphs.len()),
        json!({"max_target_error": worst, "graphs": graphs.len()}),
    ))
}

fn bound_summary(reports: &[BoundReport]) -> (Status, String, Value) {
    let violating: usize = reports.iter().map(|r| r.violating_trials).sum();
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    (
        pass_if(violating == 0),
        format!("{violating}/{trials} trials violate the color bound"),
        json!({ "reports": reports }),
    )
}

fn thm2(ctx: &Ctx) -> Outcome {
    let k = ctx.params.k.unwrap_or(2);
    let opts = BoundOptions {
        laplacian: ctx.kind,
        rounds: ctx.params.rounds,
    };
    let graphs = match &ctx.graph {
        Some(g) => vec![g.clone()],
        None => (0..ctx.count() as u64).map(|i| erdos_renyi(8, 0.35, rng::derive(ctx.seed, i))).collect(),
    };
    let reports: Vec<BoundReport> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            check_order2_bound(g, k, ctx.trials(20), rng::derive(ctx.seed, 1000 + i as u64), &opts)
                .with_graph_id(format!("graph-{i}"))
        })
        .collect();
    Ok(bound_summary(&reports))
}

fn wlspec(ctx: &Ctx) -> Outcome {
    let k = ctx.params.k.unwrap_or(3);
    let opts = BoundOptions {
        laplacian: ctx.kind,
        rounds: ctx.params.rounds,
    };
    let graphs = match &ctx.graph {
        Some(g) => vec![g.clone()],
        None => (0..ctx.count() as u64)
            .map(|i| {
                let seed = rng::derive(ctx.seed, i);
                let mut r = rng::seeded(seed);
                let labels = (0..10).map(|_| r.random_range(0..3)).collect();
                erdos_renyi(10, 0.3, seed).with_labels(labels).expect("ten labels")
            })
            .collect(),
    };
    let reports: Vec<BoundReport> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            check_wl1_bound(g, k, ctx.trials(20), rng::derive(ctx.seed, 1000 + i as u64), &opts)
                .with_graph_id(format!("graph-{i}"))
        })
        .collect();
    Ok(bound_summary(&reports))
}

fn thm3(ctx: &Ctx) -> Outcome {
    let mut results = Vec::new();
    let mut skipped = 0;
    match &ctx.graph {
        Some(g) => {
            let s = ctx.spectrum(g)?;
            let sep = construct_separating_poly(g, &s, &PairLabelMatrix::from_graph(g), ctx.seed)?;
            results.push(sep.report);
        }
        None => {
            let want = ctx.count().min(10);
            let mut i = 0u64;
            while results.len() < want && i < 40 * want as u64 {
                let seed = rng::derive(ctx.seed, i);
                i += 1;
                let mut r = rng::seeded(seed);
                let labels = (0..7).map(|_| r.random_range(1..=3)).collect();
                let g = random_connected(7, 0.45, seed).with_labels(labels).expect("seven labels");
                let s = ctx.spectrum(&g)?;
                match construct_separating_poly(&g, &s, &PairLabelMatrix::from_graph(&g), seed) {
                    Ok(sep) => results.push(sep.report),
                    Err(Error::Precondition(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let ok = results.iter().filter(|r| r.holds()).count();
    Ok((
        pass_if(ok == results.len() && !results.is_empty()),
        format!("{ok}/{} constructed filters refine the stable pair coloring ({skipped} graphs skipped on preconditions)", results.len()),
        json!({"reports": results, "skipped": skipped}),
    ))
}

fn model_from_params(ctx: &Ctx, default_sizes: &[usize], default_dim: usize) -> Result<ClassModel, Error> {
    let sizes = ctx.params.sizes.clone().unwrap_or_else(|| default_sizes.to_vec());
    let taus = ctx.params.taus.clone().unwrap_or_else(|| vec![ctx.params.tau.unwrap_or(1.0); sizes.len()]);
    sample_model(&sizes, ctx.params.dim.unwrap_or(default_dim), &taus, ctx.seed)
}

fn jensen(ctx: &Ctx) -> Outcome {
    let model = model_from_params(ctx, &[3, 4], 12)?;
    let mut r = rng::seeded(rng::derive(ctx.seed, 1));
    let n = model.n();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..ctx.trials(50) {
        let c = random(n, n, &mut r);
        let gap = loss(&reynolds_average(&c, model.partition())?, &model)? - loss(&c, &model)?;
        worst = worst.max(gap);
    }
    Ok((
        pass_if(worst <= 1e-12),
        format!("largest loss increase under averaging {worst:.3e}"),
        json!({"max_gap": worst, "sizes": model.sizes()}),
    ))
}

/// Central-difference gradient of the equivariant loss over the free
/// coefficients (alpha only exists for classes with two or more members).
fn gradient_norm(model: &ClassModel, c: &EquivariantConv) -> Result<f64, Error> {
    let k = model.k();
    let h = 1e-6;
    let mut sq = 0.0;
    for a in 0..k {
        let mut slots: Vec<Box<dyn Fn(&mut EquivariantConv, f64)>> = Vec::new();
        if model.sizes()[a] > 1 {
            slots.push(Box::new(move |c, d| c.alpha[a] += d));
        }
        slots.push(Box::new(move |c, d| c.beta[a] += d));
        for b in (0..k).filter(|&b| b != a) {
            slots.push(Box::new(move |c, d| c.gamma[a][b] += d));
        }
        for bump in slots {
            let (mut p, mut m) = (c.clone(), c.clone());
            bump(&mut p, h);
            bump(&mut m, -h);
            sq += ((loss_equivariant(&p, model)? - loss_equivariant(&m, model)?) / (2.0 * h)).powi(2);
        }
    }
    Ok(sq.sqrt())
}

fn opconv(ctx: &Ctx) -> Outcome {
    let model = model_from_params(ctx, &[3, 4], 50)?;
    let opt = optimal_convolution(&model)?;
    let grad = gradient_norm(&model, &opt.coeffs)?;
    let best = loss(&opt.matrix, &model)?;
    let mut r = rng::seeded(rng::derive(ctx.seed, 1));
    let n = model.n();
    let mut beaten = 0;
    let trials = ctx.trials(1000);
    for _ in 0..trials {
        let d = random(n, n, &mut r);
        let d = d.scale(r.random_range(0.0..=0.1) / d.norm());
        if loss(&(&opt.matrix + d), &model)? < best {
            beaten += 1;
        }
    }
    let tol = ctx.tol(1e-6);
    Ok((
        pass_if(grad < tol && beaten == 0),
        format!("gradient norm {grad:.3e}; {beaten}/{trials} perturbations improve the loss"),
        json!({"coefficients": opt.coeffs, "loss": best, "gradient_norm": grad, "improving_perturbations": beaten}),
    ))
}

fn hdasym(ctx: &Ctx) -> Outcome {
    let sizes = ctx.params.sizes.clone().unwrap_or_else(|| vec![10, 10, 10]);
    let taus = ctx.params.taus.clone().unwrap_or_else(|| vec![ctx.params.tau.unwrap_or(1.0); sizes.len()]);
    let dims = ctx.params.dims.clone().unwrap_or_else(|| (5..=13).map(|p| 1 << p).collect());
    let table = asymptotic_sweep(&sizes, &taus, &dims, ctx.params.seeds.unwrap_or(50), ctx.seed)?;
    ctx.sink.csv("hdasym.csv", &table.to_csv()).map_err(|e| Error::Io(std::io::Error::other(e.msg)))?;
    let med = table.medians();
    let beta_ok = med.windows(2).all(|w| w[1].beta_err <= w[0].beta_err);
    let gamma_ok = med.windows(2).all(|w| w[1].gamma_max <= w[0].gamma_max);
    let shrink = match (med.first(), med.last()) {
        (Some(a), Some(b)) if b.gamma_max > 0.0 => a.gamma_max / b.gamma_max,
        _ => f64::INFINITY,
    };
    Ok((
        pass_if(beta_ok && gamma_ok),
        format!("medians non-increasing in d: beta {beta_ok}, gamma {gamma_ok}; gamma shrinks {shrink:.1}x"),
        json!({"medians": med, "gamma_shrink": shrink}),
    ))
}

fn limitedex(ctx: &Ctx) -> Outcome {
    let tol = ctx.tol(1e-8);
    let mut obstructions = Vec::new();
    let mut distances = Vec::new();
    for (i, g) in ctx.graphs(ctx.count(), 10, 0.3).iter().enumerate() {
        let s = ctx.spectrum(g)?;
        let ob = spectral_obstruction(g, &s, tol)?;
        let part = ob.partition();
        if part.sizes().iter().any(|&c| c > 1) {
            let model = ClassModel::sample(part.clone(), ctx.params.dim.unwrap_or(1024), vec![1.0; part.k()], rng::derive(ctx.seed, i as u64))?;
            let opt = optimal_convolution(&model)?;
            distances.push(distance_to_spectral_subspace(&opt.matrix, &s, default_spectral_tol(s.eigenvalues()))?);
        }
        obstructions.push(ob);
    }
    let holds = obstructions.iter().filter(|o| o.verdict).count();
    let min_dist = distances.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((
        pass_if(holds == obstructions.len() && distances.iter().all(|&d| d > 0.01)),
        format!(
            "{holds}/{} graphs force C = alpha I; smallest distance of C* to the spectral subspace {min_dist:.3}",
            obstructions.len()
        ),
        json!({"obstructions": obstructions, "distances": distances}),
    ))
}

pub fn run(check: Check, ctx: &Ctx) -> Result<VerifyReport, CliError> {
    let outcome = match check {
        Check::Prop1 => prop1(ctx),
        Check::Prop2 => prop2(ctx),
        Check::Prop3 => prop3(ctx),
        Check::Thm1 => thm1(ctx),
        Check::Thm2 => thm2(ctx),
        Check::Thm3 => thm3(ctx),
        Check::Wlspec => wlspec(ctx),
        Check::Jensen => jensen(ctx),
        Check::Opconv => opconv(ctx),
        Check::Hdasym => hdasym(ctx),
        Check::Limitedex => limitedex(ctx),
    };
    let (status, summary, details) = match outcome {
        Ok(t) => t,
        Err(Error::Precondition(msg)) => (Status::Precondition, msg, Value::Null),
        Err(e) => return Err(e.into()),
    };
    Ok(VerifyReport {
        check,
        status,
        laplacian: ctx.kind,
        seed: ctx.seed,
        summary,
        details,
    })
}
