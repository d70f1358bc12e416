//! `splace`: command-line driver for the placement flow. Subcommands
//! cover the individual stages (init, refine, place), the end-to-end
//! pipeline, evaluation and plotting utilities, the sensitivity sweeps,
//! and the multi-objective parameter tuner.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use splace_core::bookshelf::{
    generate_synthetic, parse_design, parse_pl, write_design, write_pl, DesignBundle, RunConfig,
    ScheduleModel, SyntheticSpec,
};
use splace_core::model::hpwl;
use splace_core::pipeline::{
    initial_positions, placer_config, refine_positions, run_pipeline, schedule_spec,
    PipelineOptions,
};
use splace_core::place::optimizer::movable_overflow;
use splace_core::plot::{render_line_chart, render_svg};
use splace_core::report::SeedSweepSummary;
use splace_core::schedule::{eta_schedule, k_schedule, sigma_schedule};
use splace_core::tuner::{
    apply_assignment, distill, hypervolume_2d, run_tuner, ParamSpace, TrialStatus, TunerConfig,
};

#[derive(Parser)]
#[command(name = "splace", version, about = "Mixed-size global placement engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Design + config options shared by every run-style subcommand.
#[derive(Args, Clone)]
struct RunArgs {
    /// Bookshelf .aux file of the design
    #[arg(long)]
    aux: PathBuf,
    /// key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// config overrides, repeatable: --set key=value
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// RNG seed override
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct AblationArgs {
    /// start from uniform-random positions instead of the spectral init
    #[arg(long)]
    random_init: bool,
    /// skip the signed-graph refinement stage
    #[arg(long)]
    skip_refine: bool,
    /// place with hard macro footprints instead of the scheduled charge
    #[arg(long)]
    skip_schedule: bool,
    /// macro charge model: gaussian | exp | linear | sigmoid
    #[arg(long)]
    schedule_model: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral initialization only; writes a .pl
    Init {
        #[command(flatten)]
        run: RunArgs,
        /// output .pl path
        #[arg(long)]
        out: PathBuf,
    },
    /// Signed-graph refinement of existing positions; writes a .pl
    Refine {
        #[command(flatten)]
        run: RunArgs,
        /// input positions (.pl); defaults to the design's own .pl
        #[arg(long)]
        pl: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Global placement from given positions; writes a .pl
    Place {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        pl: Option<PathBuf>,
        #[command(flatten)]
        ablation: AblationArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full flow: init, refine, place; writes .pl + metrics JSON
    Pipeline {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        ablation: AblationArgs,
        /// output directory for placed.pl, metrics.json, placement.svg
        #[arg(long)]
        out_dir: PathBuf,
        /// also render before/after SVGs
        #[arg(long)]
        plot: bool,
    },
    /// Print HPWL and overflow of a placement as JSON
    Eval {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        pl: Option<PathBuf>,
    },
    /// Render a placement to SVG
    Plot {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        pl: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dump the macro charge schedules as CSV
    ScheduleDump {
        /// gaussian | exp | linear | sigmoid
        #[arg(long, default_value = "exp")]
        model: String,
        #[arg(long, default_value_t = 150)]
        horizon: usize,
        #[arg(long, default_value_t = 0.05)]
        sigma_factor: f64,
        #[arg(long, default_value_t = 2.0)]
        k_factor: f64,
        /// output CSV path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pipeline statistics over many initialization seeds
    SeedSweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Pipeline vs random-init baseline across target densities
    DensitySweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0.6)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Multi-objective parameter search over the placement space
    Tune {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        /// representatives distilled from the front
        #[arg(long, default_value_t = 3)]
        distill_k: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Generate a synthetic Bookshelf design
    GenSynthetic {
        #[arg(long, default_value_t = 500)]
        cells: usize,
        #[arg(long, default_value_t = 4)]
        macros: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        region_w: f64,
        #[arg(long, default_value_t = 100.0)]
        region_h: f64,
        #[arg(long, default_value_t = 0.45)]
        utilization: f64,
        /// design name (file stem inside --out)
        #[arg(long, default_value = "synth")]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(run: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match &run.config {
        Some(path) => RunConfig::load(path)
            .with_context(|| format!("loading config {}", path.display()))?,
        None => RunConfig::default(),
    };
    for kv in &run.sets {
        let (k, v) = kv
            .split_once('=')
            .with_context(|| format!("--set '{kv}' is not key=value"))?;
        cfg.set(k.trim(), v.trim())
            .with_context(|| format!("applying --set {kv}"))?;
    }
    if let Some(seed) = run.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_ablation(cfg: &mut RunConfig, ablation: &AblationArgs) -> Result<PipelineOptions> {
    if let Some(name) = &ablation.schedule_model {
        cfg.schedule_model = ScheduleModel::parse(name)?;
    }
    Ok(PipelineOptions {
        random_init: ablation.random_init,
        skip_refine: ablation.skip_refine,
        skip_schedule: ablation.skip_schedule,
    })
}

fn load_design(run: &RunArgs, pl: Option<&Path>) -> Result<DesignBundle> {
    let mut bundle =
        parse_design(&run.aux).with_context(|| format!("parsing {}", run.aux.display()))?;
    if let Some(pl_path) = pl {
        let rows = parse_pl(pl_path)?;
        let by_name: HashMap<&str, usize> = bundle
            .netlist
            .instances
            .iter()
            .map(|i| (i.name.as_str(), i.id))
            .collect();
        for (name, x, y, _fixed) in &rows {
            let &id = by_name
                .get(name.as_str())
                .with_context(|| format!("{}: unknown instance '{name}'", pl_path.display()))?;
            bundle.positions[id] = (*x, *y);
        }
    }
    Ok(bundle)
}

fn design_id(aux: &Path) -> String {
    aux.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| aux.display().to_string())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn eval_metrics(bundle: &DesignBundle, cfg: &RunConfig) -> Result<(f64, f64)> {
    let wl = hpwl(&bundle.netlist, &bundle.positions)?;
    let ovf = movable_overflow(
        &bundle.netlist,
        &bundle.positions,
        cfg.num_bin_x,
        cfg.num_bin_y,
        cfg.target_density,
    )?;
    Ok((wl, ovf))
}

fn init_thread_pool(jobs: Option<usize>) -> Result<()> {
    if let Some(jobs) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker pool")?;
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Init { run, out } => {
            let cfg = load_config(&run)?;
            let bundle = load_design(&run, None)?;
            let positions =
                initial_positions(&bundle.netlist, &cfg, &PipelineOptions::default())?;
            write_pl(&bundle.netlist, &positions, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Refine { run, pl, out } => {
            let cfg = load_config(&run)?;
            let bundle = load_design(&run, pl.as_deref())?;
            let positions = refine_positions(&bundle.netlist, &bundle.positions, &cfg)?;
            write_pl(&bundle.netlist, &positions, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Place {
            run,
            pl,
            ablation,
            out,
        } => {
            let mut cfg = load_config(&run)?;
            let opts = apply_ablation(&mut cfg, &ablation)?;
            let bundle = load_design(&run, pl.as_deref())?;
            let schedule = schedule_spec(&cfg);
            let schedule_ref = if opts.skip_schedule { None } else { Some(&schedule) };
            let result = splace_core::place::run_global_placement(
                &bundle.netlist,
                &bundle.positions,
                &placer_config(&cfg),
                schedule_ref,
            )?;
            write_pl(&bundle.netlist, &result.positions, &out)?;
            println!(
                "hpwl {:.6e} overflow {:.4} iterations {} converged {}",
                result.hpwl, result.overflow, result.iterations, result.converged
            );
        }
        Command::Pipeline {
            run,
            ablation,
            out_dir,
            plot,
        } => {
            let mut cfg = load_config(&run)?;
            let opts = apply_ablation(&mut cfg, &ablation)?;
            let bundle = load_design(&run, None)?;
            let design = design_id(&run.aux);
            let outcome = run_pipeline(&bundle.netlist, &design, &cfg, &opts)?;
            fs::create_dir_all(&out_dir)?;
            write_pl(
                &bundle.netlist,
                &outcome.result.positions,
                out_dir.join("placed.pl"),
            )?;
            write_text(&out_dir.join("metrics.json"), &outcome.report.to_json())?;
            if plot {
                write_text(
                    &out_dir.join("initial.svg"),
                    &render_svg(&bundle.netlist, &bundle.positions)?,
                )?;
                write_text(
                    &out_dir.join("placement.svg"),
                    &render_svg(&bundle.netlist, &outcome.result.positions)?,
                )?;
            }
            println!("{}", outcome.report.to_json());
            if !outcome.result.converged {
                bail!("placement stopped above the overflow target");
            }
        }
        Command::Eval { run, pl } => {
            let cfg = load_config(&run)?;
            let bundle = load_design(&run, pl.as_deref())?;
            let (wl, ovf) = eval_metrics(&bundle, &cfg)?;
            println!(
                "{}",
                serde_json::json!({ "design": design_id(&run.aux), "hpwl": wl, "overflow": ovf })
            );
        }
        Command::Plot { run, pl, out } => {
            let bundle = load_design(&run, pl.as_deref())?;
            write_text(&out, &render_svg(&bundle.netlist, &bundle.positions)?)?;
            println!("wrote {}", out.display());
        }
        Command::ScheduleDump {
            model,
            horizon,
            sigma_factor,
            k_factor,
            out,
        } => {
            let spec = splace_core::schedule::ScheduleSpec {
                model: ScheduleModel::parse(&model)?,
                horizon,
                sigma_factor,
                k_factor,
                ..Default::default()
            };
            spec.validate()?;
            let mut csv = String::from("t,eta,sigma,k\n");
            for t in 0..=horizon {
                let eta = eta_schedule(t, horizon, &spec)?;
                let sigma = sigma_schedule(t, horizon, sigma_factor);
                let k = k_schedule(t, horizon, k_factor);
                csv.push_str(&format!("{t},{eta:.9},{sigma:.9},{k:.9}\n"));
            }
            match out {
                Some(path) => {
                    write_text(&path, &csv)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
        }
        Command::SeedSweep {
            run,
            seeds,
            jobs,
            out_dir,
        } => {
            init_thread_pool(jobs)?;
            let cfg = load_config(&run)?;
            let bundle = load_design(&run, None)?;
            let design = design_id(&run.aux);
            use rayon::prelude::*;
            let runs: Vec<(u64, f64)> = (0..seeds as u64)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&seed| {
                    let mut c = cfg.clone();
                    c.seed = seed + 1;
                    run_pipeline(&bundle.netlist, &design, &c, &PipelineOptions::default())
                        .map(|o| (c.seed, o.report.hpwl))
                })
                .collect::<splace_core::Result<_>>()?;
            let summary = SeedSweepSummary::from_runs(
                design,
                cfg.hash(),
                runs.iter().map(|r| r.0).collect(),
                runs.iter().map(|r| r.1).collect(),
            )?;
            fs::create_dir_all(&out_dir)?;
            write_text(&out_dir.join("seed_sweep.json"), &summary.to_json())?;
            let mut csv = String::from("seed,hpwl\n");
            for (s, h) in &runs {
                csv.push_str(&format!("{s},{h:.6}\n"));
            }
            write_text(&out_dir.join("seed_sweep.csv"), &csv)?;
            println!("{}", summary.to_json());
        }
        Command::DensitySweep {
            run,
            from,
            to,
            step,
            jobs,
            out_dir,
        } => {
            if step <= 0.0 || to < from {
                bail!("density sweep needs step > 0 and to >= from");
            }
            init_thread_pool(jobs)?;
            let cfg = load_config(&run)?;
            let bundle = load_design(&run, None)?;
            let design = design_id(&run.aux);
            let mut densities = Vec::new();
            let mut d = from;
            while d <= to + 1e-9 {
                densities.push(d);
                d += step;
            }
            use rayon::prelude::*;
            // one (pipeline, baseline) pair per density
            let rows: Vec<(f64, bool, f64, f64, usize)> = densities
                .par_iter()
                .flat_map(|&density| [(density, false), (density, true)])
                .map(|(density, baseline)| {
                    let mut c = cfg.clone();
                    c.target_density = density;
                    let opts = if baseline {
                        PipelineOptions {
                            random_init: true,
                            skip_refine: true,
                            skip_schedule: true,
                        }
                    } else {
                        PipelineOptions::default()
                    };
                    run_pipeline(&bundle.netlist, &design, &c, &opts).map(|o| {
                        (
                            density,
                            baseline,
                            o.report.hpwl,
                            o.report.overflow,
                            o.report.iterations,
                        )
                    })
                })
                .collect::<splace_core::Result<_>>()?;
            let mut csv = String::from("target_density,flow,hpwl,overflow,iterations\n");
            for &(d, baseline, h, o, it) in &rows {
                let flow = if baseline { "baseline" } else { "pipeline" };
                csv.push_str(&format!("{d:.3},{flow},{h:.6},{o:.6},{it}\n"));
            }
            fs::create_dir_all(&out_dir)?;
            write_text(&out_dir.join("density_sweep.csv"), &csv)?;
            let series: Vec<(&str, Vec<(f64, f64)>)> = vec![
                (
                    "pipeline",
                    rows.iter()
                        .filter(|r| !r.1)
                        .map(|r| (r.0, r.2))
                        .collect(),
                ),
                (
                    "baseline",
                    rows.iter().filter(|r| r.1).map(|r| (r.0, r.2)).collect(),
                ),
            ];
            write_text(
                &out_dir.join("density_sweep.svg"),
                &render_line_chart(
                    &format!("{design}: wirelength vs target density"),
                    "target density",
                    "HPWL",
                    &series,
                ),
            )?;
            print!("{csv}");
        }
        Command::Tune {
            run,
            budget,
            distill_k,
            out_dir,
        } => {
            let cfg = load_config(&run)?;
            let bundle = load_design(&run, None)?;
            let design = design_id(&run.aux);
            let space = ParamSpace::placement_space();
            fs::create_dir_all(&out_dir)?;
            let log_path = out_dir.join("trials.jsonl");
            let mut log = fs::File::create(&log_path)
                .with_context(|| format!("creating {}", log_path.display()))?;
            let tuner_cfg = TunerConfig {
                seed: cfg.seed,
                ..TunerConfig::default()
            };
            let outcome = run_tuner(&space, budget, &tuner_cfg, |assignment| {
                let mut c = cfg.clone();
                apply_assignment(&mut c, assignment)?;
                let t = Instant::now();
                let out = run_pipeline(&bundle.netlist, &design, &c, &PipelineOptions::default())?;
                let objectives =
                    vec![out.report.hpwl, out.report.overflow, t.elapsed().as_secs_f64()];
                let row = serde_json::json!({
                    "assignment": assignment,
                    "objectives": objectives,
                });
                writeln!(log, "{row}").ok();
                Ok(objectives)
            })?;
            let front: Vec<&splace_core::tuner::Trial> =
                outcome.front.iter().map(|&i| &outcome.trials[i]).collect();
            let front_objs: Vec<Vec<f64>> = front.iter().map(|t| t.objectives.clone()).collect();
            let reps = distill(&front_objs, distill_k, tuner_cfg.seed);
            let failed = outcome
                .trials
                .iter()
                .filter(|t| matches!(t.status, TrialStatus::Failed(_)))
                .count();
            let front_json = serde_json::json!({
                "design": design,
                "budget": budget,
                "failed_trials": failed,
                "front": front,
                "representatives": reps.iter().map(|&i| front[i]).collect::<Vec<_>>(),
            });
            write_text(
                &out_dir.join("front.json"),
                &serde_json::to_string_pretty(&front_json)?,
            )?;
            let mut csv = String::from("hpwl,overflow,runtime_s,representative\n");
            for (i, t) in front.iter().enumerate() {
                csv.push_str(&format!(
                    "{:.6},{:.6},{:.3},{}\n",
                    t.objectives[0],
                    t.objectives[1],
                    t.objectives[2],
                    reps.contains(&i)
                ));
            }
            write_text(&out_dir.join("front.csv"), &csv)?;
            // informational: 2D wirelength/overflow hypervolume of the front
            let pts: Vec<(f64, f64)> = front_objs.iter().map(|o| (o[0], o[1])).collect();
            let reference = (
                pts.iter().map(|p| p.0).fold(0.0, f64::max) * 2.0 + 1.0,
                1.0,
            );
            println!(
                "front size {} (of {} trials, {} failed), hv {:.4}",
                front.len(),
                outcome.trials.len(),
                failed,
                hypervolume_2d(&pts, reference)
            );
        }
        Command::GenSynthetic {
            cells,
            macros,
            seed,
            region_w,
            region_h,
            utilization,
            name,
            out,
        } => {
            let spec = SyntheticSpec {
                cells,
                macros,
                seed,
                region_w,
                region_h,
                cell_utilization: utilization,
                ..SyntheticSpec::default()
            };
            let bundle = generate_synthetic(&spec)?;
            write_design(&bundle, &out, &name)?;
            println!("wrote {}/{name}.aux", out.display());
        }
    }
    Ok(())
}
