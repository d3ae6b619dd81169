use std::fmt;

use super::metrics::observed_order;

/// What varies along the columns of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnAxis {
    Tau,
    Kappa,
    Modes,
}

impl ColumnAxis {
    pub fn label(&self) -> &'static str {
        match self {
            ColumnAxis::Tau => "tau",
            ColumnAxis::Kappa => "kappa",
            ColumnAxis::Modes => "M",
        }
    }

    /// Refinement factor between adjacent columns `coarse` and `fine`.
    pub fn refinement(&self, coarse: f64, fine: f64) -> f64 {
        match self {
            ColumnAxis::Tau | ColumnAxis::Kappa => coarse / fine,
            ColumnAxis::Modes => fine / coarse,
        }
    }
}

impl fmt::Display for ColumnAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub epsilon: f64,
    pub errors: Vec<f64>,
    /// `orders[i]` compares column `i - 1` with column `i`; `orders[0]` is
    /// always absent.
    pub orders: Vec<Option<f64>>,
    pub realized_final_times: Vec<f64>,
    pub reference_step: Option<f64>,
    /// Largest self-consistency estimate of the reference for this row.
    pub reference_error: Option<f64>,
    /// Cells whose error is not at least `REFERENCE_MARGIN` times the
    /// reference error estimate.
    pub reference_limited: Vec<bool>,
}

impl TableRow {
    pub fn new(epsilon: f64, errors: Vec<f64>, realized_final_times: Vec<f64>) -> Self {
        let n = errors.len();
        Self {
            epsilon,
            errors,
            orders: vec![None; n],
            realized_final_times,
            reference_step: None,
            reference_error: None,
            reference_limited: vec![false; n],
        }
    }

    fn fill_orders(&mut self, axis: ColumnAxis, columns: &[f64]) {
        self.orders = std::iter::once(None)
            .chain((1..self.errors.len()).map(|i| {
                observed_order(
                    self.errors[i - 1],
                    self.errors[i],
                    axis.refinement(columns[i - 1], columns[i]),
                )
            }))
            .collect();
    }
}

/// Error matrix over (epsilon rows) x (step or grid columns) with observed
/// orders along each row.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub study: String,
    pub axis: ColumnAxis,
    pub columns: Vec<f64>,
    pub rows: Vec<TableRow>,
    pub metadata: Vec<(String, String)>,
}

impl ConvergenceTable {
    /// Builds the table, sorting rows by descending epsilon and computing
    /// row orders.
    pub fn new(study: &str, axis: ColumnAxis, columns: Vec<f64>, mut rows: Vec<TableRow>) -> Self {
        rows.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
        for row in &mut rows {
            row.fill_orders(axis, &columns);
        }
        Self {
            study: study.to_string(),
            axis,
            columns,
            rows,
            metadata: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn row(&self, epsilon: f64) -> Option<&TableRow> {
        self.rows
            .iter()
            .find(|r| (r.epsilon - epsilon).abs() <= 1e-12 * epsilon.abs().max(1.0))
    }

    /// `errors[i][col] / errors[i + 1][col]` down one column.
    pub fn row_ratios(&self, col: usize) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[0].errors[col] / w[1].errors[col])
            .collect()
    }

    pub fn any_reference_limited(&self) -> bool {
        self.rows.iter().any(|r| r.reference_limited.iter().any(|&b| b))
    }
}
