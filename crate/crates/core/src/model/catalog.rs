use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpinorField};

/// Initial data used by the convergence studies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitialData {
    /// `(2 / (2 + sin^2 x), 2 / (1 + sin^2 x))` on `(0, 2 pi)`.
    Accuracy1d,
    /// `(sin 2x + sin 2 pi y, 1 / (1 + cos^2 2x) + cos 2 pi y)` on `(0, 2 pi) x (0, 1)`.
    Irrational2d,
    /// `(4 x^4 (1 - x)^4 + 2, 4 x^4 (1 - x)^4)` on `(0, 1)`.
    Oscillatory1d,
}

impl InitialData {
    pub const ALL: [InitialData; 3] = [
        InitialData::Accuracy1d,
        InitialData::Irrational2d,
        InitialData::Oscillatory1d,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            InitialData::Accuracy1d => "accuracy-1d",
            InitialData::Irrational2d => "irrational-2d",
            InitialData::Oscillatory1d => "oscillatory-1d",
        }
    }

    pub fn domain(&self) -> Vec<(f64, f64)> {
        match self {
            InitialData::Accuracy1d => vec![(0.0, 2.0 * PI)],
            InitialData::Irrational2d => vec![(0.0, 2.0 * PI), (0.0, 1.0)],
            InitialData::Oscillatory1d => vec![(0.0, 1.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.domain().len()
    }

    pub fn grid(&self, modes: usize) -> Result<Grid> {
        Grid::uniform(&self.domain(), modes)
    }

    pub fn evaluate(&self, x: [f64; 2]) -> [Complex64; 2] {
        match self {
            InitialData::Accuracy1d => {
                let s2 = x[0].sin().powi(2);
                [(2.0 / (2.0 + s2)).into(), (2.0 / (1.0 + s2)).into()]
            }
            InitialData::Irrational2d => {
                let (x, y) = (x[0], x[1]);
                let c2 = (2.0 * x).cos().powi(2);
                [
                    ((2.0 * x).sin() + (2.0 * PI * y).sin()).into(),
                    (1.0 / (1.0 + c2) + (2.0 * PI * y).cos()).into(),
                ]
            }
            InitialData::Oscillatory1d => {
                let x = x[0];
                let bump = 4.0 * x.powi(4) * (1.0 - x).powi(4);
                [(bump + 2.0).into(), bump.into()]
            }
        }
    }

    /// Node samples on `grid`, which must cover this entry's domain.
    pub fn sample(&self, grid: &Grid) -> Result<SpinorField> {
        let expected = Grid::uniform(&self.domain(), 4)?;
        if !expected.same_domain(grid) {
            return Err(Error::DomainMismatch {
                key: self.key(),
                expected: format!("{:?}", self.domain()),
                found: format!("{:?}", grid.bounds()),
            });
        }
        Ok(SpinorField::from_fn(grid, |x| self.evaluate(x)))
    }
}

impl fmt::Display for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for InitialData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.key() == s)
            .ok_or_else(|| Error::UnknownCatalogKey(s.to_string()))
    }
}
