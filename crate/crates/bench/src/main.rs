use clap::Parser;
use zo_bench::cli::{Cli, Command, RunArgs};
use zo_bench::config::{parse_config_file, resolve, ExperimentConfig};
use zo_bench::plot::plot_dir;
use zo_bench::runner::{execute, RunSummary};
use zo_bench::sweep::beta1_sweep;
use zo_bench::BenchError;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}

fn dispatch(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run(args) => {
            let config = resolve_args(&args)?;
            let output = execute(&config)?;
            print_summary(&output.summary);
            println!(
                "{} trace file(s) and summary.csv written to {}",
                output.trace_paths.len(),
                output.out_dir.display()
            );
            Ok(())
        }
        Command::Plot(args) => {
            plot_dir(&args.input, &args.out)?;
            println!("plot written to {}", args.out.display());
            Ok(())
        }
        Command::SweepBeta1(args) => {
            let mut config = resolve_args(&args.run)?;
            if args.run.optimizer.is_empty() {
                // sweeping is defined for r-adazo; default to it rather than
                // the five-optimizer comparison set
                config.optimizers = vec![zo_opt::OptimizerKind::RAdaZO];
            }
            let rows = beta1_sweep(&config, &args.values)?;
            println!("{:>8} {:>24}", "beta1", "median_final_gap");
            for row in &rows {
                println!("{:>8} {:>24.6e}", row.beta1, row.median_final_gap);
            }
            println!("table written to {}", config.out_dir.join("sweep_beta1.csv").display());
            Ok(())
        }
    }
}

fn resolve_args(args: &RunArgs) -> Result<ExperimentConfig, BenchError> {
    let file = args.config.as_deref().map(parse_config_file).transpose()?;
    resolve(args.overlay(), file)
}

fn print_summary(summary: &RunSummary) {
    println!(
        "{:<12} {:>6} {:>9} {:>14} {:>14} {:>14} {:>14} {:>10}",
        "optimizer", "seeds", "failures", "gap_min", "gap_median", "gap_max", "aulg", "seconds"
    );
    for row in &summary.rows {
        println!(
            "{:<12} {:>6} {:>9} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.4} {:>10.2}",
            row.optimizer.token(),
            row.seed_count,
            row.failures,
            row.final_gap.min,
            row.final_gap.median,
            row.final_gap.max,
            row.area_under_log_gap,
            row.wall_seconds,
        );
    }
}
