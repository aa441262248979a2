use clap::{Args, ValueEnum};
use pdo_core::{Strategy, Window};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Flags shared by every subcommand. The whole struct is echoed into each
/// report.
#[derive(Clone, Debug, Args, Serialize)]
pub struct RunConfig {
    /// Truncation order N for operator coefficients (mod (x1..xn)^N).
    #[arg(long, global = true, default_value_t = 8)]
    pub precision: u32,
    /// Highest filtration degree computed by `analyze`.
    #[arg(long, global = true, default_value_t = 40)]
    pub mmax: u32,
    #[arg(long = "window-tmin", global = true, default_value_t = -64, allow_hyphen_values = true)]
    pub window_tmin: i64,
    #[arg(long = "window-tmax", global = true, default_value_t = 64)]
    pub window_tmax: i64,
    #[arg(long = "window-umax", global = true, default_value_t = 64)]
    pub window_umax: u32,
    /// Degree budget for `glue` (default 10) and `cm` (default 12).
    #[arg(long, global = true)]
    pub budget: Option<u32>,
    /// Highest level examined by `schur`.
    #[arg(long, global = true, default_value_t = 20)]
    pub nmax: u32,
    /// Largest data rank tried by `schur`.
    #[arg(long = "rank-search", global = true, default_value_t = 4)]
    pub rank_search: u32,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    /// Run on one thread even when built with the `parallel` feature.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(self.precision > 0, "--precision must be positive");
        anyhow::ensure!(self.mmax > 0, "--mmax must be positive");
        anyhow::ensure!(self.window_umax > 0, "--window-umax must be positive");
        anyhow::ensure!(
            self.window_tmin < 0 && self.window_tmax > 0,
            "the window must contain t^0"
        );
        anyhow::ensure!(self.nmax > 0, "--nmax must be positive");
        anyhow::ensure!(self.rank_search > 0, "--rank-search must be positive");
        anyhow::ensure!(self.budget != Some(0), "--budget must be positive");
        Ok(())
    }

    pub fn window(&self) -> Window {
        Window::new(self.window_tmin, self.window_tmax, self.window_umax)
    }

    pub fn strategy(&self) -> Strategy {
        if self.sequential {
            Strategy::Sequential
        } else {
            Strategy::auto()
        }
    }
}
