use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use smkernel::gram::{compute_gram_oracle, KernelConfig, KernelKind, Normalization, Weights};
use smkernel::kernels::AttrKernel;
use smkernel::{compute_gram, min_eigenvalue, normalize_gram, read_dataset, read_gram, write_gram, GramMatrix};

/// Subgraph matching kernels over attributed graph datasets.
#[derive(Parser)]
#[command(name = "smk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a Gram matrix over a dataset.
    Compute {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Worker count; defaults to the number of CPUs.
        #[arg(long, env = "GK_THREADS")]
        threads: Option<usize>,
    },
    /// Check that a Gram matrix is positive semidefinite.
    CheckPsd {
        #[arg(long)]
        gram: PathBuf,
        /// Allowed negative eigenvalue, relative to the largest diagonal entry.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Compute a Gram matrix with the exhaustive reference implementation.
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        kernel: KernelArgs,
    },
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// sm, csm, csi, subgraph or pharmacophore.
    #[arg(long)]
    kernel: KernelKind,
    /// Largest matching size k (fixed at 3 for pharmacophore).
    #[arg(long)]
    max_size: Option<usize>,
    /// Vertex kernel, e.g. `dirac`, `brownian:c=3`, `product(dirac,rbf:sigma=1:attr=0)`.
    #[arg(long, default_value = "dirac")]
    vertex_kernel: AttrKernel,
    /// Kernel on edge labels and attributes, e.g. `triangular:c=0.25`.
    #[arg(long, default_value = "dirac")]
    edge_kernel: AttrKernel,
    /// `uniform` or one weight per size, `w1,...,wK`.
    #[arg(long)]
    weights: Option<Weights>,
    /// none, cosine or per-size.
    #[arg(long, default_value = "none")]
    normalize: Normalization,
    #[arg(long)]
    out: PathBuf,
}

impl KernelArgs {
    fn config(&self) -> Result<KernelConfig> {
        let (vk, ek) = (self.vertex_kernel.clone(), self.edge_kernel.clone());
        let config = if self.kernel == KernelKind::Pharmacophore {
            if self.max_size.is_some_and(|k| k != 3) {
                bail!("the pharmacophore kernel has maximum size 3");
            }
            if self.weights.is_some() {
                bail!("the pharmacophore kernel has fixed weights");
            }
            KernelConfig::pharmacophore(vk, ek)
        } else {
            let k = self.max_size.context("--max-size is required")?;
            KernelConfig {
                kind: self.kernel,
                max_size: k,
                vertex_kernel: vk,
                edge_kernel: ek,
                d_weight: 1.0,
                weights: self.weights.clone().unwrap_or(Weights::Uniform),
            }
        };
        config.validate()?;
        Ok(config)
    }

    fn finish(&self, m: &GramMatrix) -> Result<()> {
        let m = normalize_gram(m, self.normalize)?;
        write_gram(&m, &self.out)?;
        Ok(())
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compute { kernel, threads } => {
            let config = kernel.config()?;
            let data = read_dataset(&kernel.dataset)?;
            let threads = match threads {
                Some(0) => bail!("--threads must be at least 1"),
                Some(t) => t,
                None => std::thread::available_parallelism().map_or(1, |n| n.get()),
            };
            kernel.finish(&compute_gram(&data, &config, threads)?)?;
        }
        Command::Oracle { kernel } => {
            let config = kernel.config()?;
            let data = read_dataset(&kernel.dataset)?;
            kernel.finish(&compute_gram_oracle(&data, &config)?)?;
        }
        Command::CheckPsd { gram, tol } => {
            if !(tol.is_finite() && tol >= 0.0) {
                bail!("--tol must be a nonnegative number");
            }
            let m = read_gram(&gram)?;
            let min = min_eigenvalue(&m);
            let scale = m.max_diagonal();
            let bound = if scale > 0.0 { -tol * scale } else { -tol };
            println!("min_eigenvalue {min:e}");
            if min < bound {
                println!("not positive semidefinite (bound {bound:e})");
                return Ok(ExitCode::from(1));
            }
            println!("positive semidefinite");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
