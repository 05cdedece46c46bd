//! Timing model checking across a family of graphs of growing size.

use std::fmt::Write as _;
use std::time::Instant;

use rwmso_core::chartree::CharTreeStore;
use rwmso_core::games::{game_on_tree, prepare_sentence, GameError};
use rwmso_core::parsetree::ParseTreeError;
use rwmso_core::{family_tree, Family, Formula};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Tree(#[from] ParseTreeError),
    #[error("label width {0} is smaller than the family's width {1}")]
    Width(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    /// `|T|`.
    pub tree_nodes: usize,
    /// Distinct characteristic-tree nodes interned while checking.
    pub char_nodes: usize,
    /// Fastest of the repeats.
    pub seconds: f64,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub width: usize,
    pub repeats: usize,
    /// Reuse products of equal subtrees; off by default so that every
    /// composition is computed.
    pub product_cache: bool,
}

/// One row per size. The store is rebuilt for every repeat.
pub fn run(config: &BenchConfig, phi: &Formula) -> Result<Vec<BenchRow>, BenchError> {
    let prepared = prepare_sentence(phi)?;
    let q = prepared.quantifier_rank();
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let mut tree = family_tree(config.family, n)?;
        if config.width < tree.width() {
            return Err(BenchError::Width(config.width, tree.width()));
        }
        if config.width > tree.width() {
            tree = tree.widen(config.width)?;
        }
        let mut best = f64::INFINITY;
        let mut char_nodes = 0;
        let mut holds = false;
        for _ in 0..config.repeats.max(1) {
            let start = Instant::now();
            let mut store = CharTreeStore::new(tree.width());
            store.set_product_cache(config.product_cache);
            let root = store.from_parse_tree(&tree, q).map_err(GameError::from)?;
            holds = game_on_tree(&store, root, &prepared, &[], &[])?;
            best = best.min(start.elapsed().as_secs_f64());
            char_nodes = store.len();
        }
        rows.push(BenchRow {
            n,
            tree_nodes: tree.len(),
            char_nodes,
            seconds: best,
            holds,
        });
    }
    Ok(rows)
}

/// Least-squares line through `(x, y)` with Pearson correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub correlation: f64,
}

pub fn fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let correlation = if syy == 0.0 { 1.0 } else { sxy / (sxx * syy).sqrt() };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        correlation,
    })
}

pub fn fit_rows(rows: &[BenchRow]) -> Option<LinearFit> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.tree_nodes as f64, r.seconds)).collect();
    fit(&points)
}

/// `n,tree_nodes,char_nodes,seconds,holds` with the fit as trailing
/// `#` comment lines.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,tree_nodes,char_nodes,seconds,holds\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:.6},{}", r.n, r.tree_nodes, r.char_nodes, r.seconds, r.holds);
    }
    if let Some(f) = fit_rows(rows) {
        let _ = writeln!(out, "# slope_seconds_per_node={:.3e}", f.slope);
        let _ = writeln!(out, "# intercept_seconds={:.3e}", f.intercept);
        let _ = writeln!(out, "# correlation={:.4}", f.correlation);
    }
    out
}

/// `time(n_{i+1}) / time(n_i)` for consecutive rows.
pub fn doubling_ratios(rows: &[BenchRow]) -> Vec<f64> {
    rows.windows(2).map(|w| w[1].seconds / w[0].seconds).collect()
}
