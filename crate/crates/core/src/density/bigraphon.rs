//! Finite step bigraphons and tuples of them over shared spaces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bigraph::Color;
use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-12;

/// `W: X × Y → R_+` on finite probability spaces `(X, μ)` and `(Y, ν)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepBigraphon {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub w: Vec<Vec<f64>>,
}

fn check_weights(name: &str, p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidBigraphon(format!("{name} is empty")));
    }
    if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidBigraphon(format!("{name} has a negative or non-finite weight")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidBigraphon(format!("{name} sums to {total}, not 1")));
    }
    Ok(())
}

fn uniform_weights(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

impl StepBigraphon {
    pub fn new(mu: Vec<f64>, nu: Vec<f64>, w: Vec<Vec<f64>>) -> Result<Self> {
        let b = StepBigraphon { mu, nu, w };
        b.check()?;
        Ok(b)
    }

    pub fn check(&self) -> Result<()> {
        check_weights("mu", &self.mu)?;
        check_weights("nu", &self.nu)?;
        if self.w.len() != self.mu.len() || self.w.iter().any(|row| row.len() != self.nu.len()) {
            return Err(Error::InvalidBigraphon("value matrix shape does not match the weights".into()));
        }
        if self.w.iter().flatten().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidBigraphon("values must be finite and nonnegative".into()));
        }
        Ok(())
    }

    /// Uniform weights on both sides.
    pub fn uniform(w: Vec<Vec<f64>>) -> Result<Self> {
        let rows = w.len();
        let cols = w.first().map_or(0, Vec::len);
        Self::new(uniform_weights(rows.max(1)), uniform_weights(cols.max(1)), w)
    }

    pub fn constant(rows: usize, cols: usize, p: f64) -> Result<Self> {
        Self::uniform(vec![vec![p; cols]; rows])
    }

    pub fn rows(&self) -> usize {
        self.mu.len()
    }

    pub fn cols(&self) -> usize {
        self.nu.len()
    }

    pub fn scaled(&self, lambda: f64) -> StepBigraphon {
        let w = self.w.iter().map(|row| row.iter().map(|x| x * lambda).collect()).collect();
        StepBigraphon { mu: self.mu.clone(), nu: self.nu.clone(), w }
    }

    /// Same spaces, new values.
    pub fn with_values(&self, w: Vec<Vec<f64>>) -> Result<StepBigraphon> {
        Self::new(self.mu.clone(), self.nu.clone(), w)
    }

    /// `t(ρ, W)`.
    pub fn edge_density(&self) -> f64 {
        self.row_marginal().iter().zip(&self.mu).map(|(r, m)| r * m).sum()
    }

    /// `t(e_1, W)(x)` for every row `x`.
    pub fn row_marginal(&self) -> Vec<f64> {
        self.w.iter().map(|row| row.iter().zip(&self.nu).map(|(a, b)| a * b).sum()).collect()
    }

    /// `t(e_2, W)(y)` for every column `y`.
    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols()).map(|y| self.w.iter().zip(&self.mu).map(|(row, m)| row[y] * m).sum()).collect()
    }

    pub fn is_left_regular(&self, tol: f64) -> bool {
        let t = self.edge_density();
        self.row_marginal().iter().zip(&self.mu).all(|(r, &m)| m == 0.0 || (r - t).abs() <= tol)
    }

    pub fn is_right_regular(&self, tol: f64) -> bool {
        let t = self.edge_density();
        self.col_marginal().iter().zip(&self.nu).all(|(c, &n)| n == 0.0 || (c - t).abs() <= tol)
    }

    pub fn is_biregular(&self, tol: f64) -> bool {
        self.is_left_regular(tol) && self.is_right_regular(tol)
    }

    pub fn is_positive(&self) -> bool {
        self.w.iter().flatten().all(|&x| x > 0.0)
    }

    pub fn same_spaces(&self, other: &StepBigraphon) -> bool {
        let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= WEIGHT_TOL);
        close(&self.mu, &other.mu) && close(&self.nu, &other.nu)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("bigraphon serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let b: StepBigraphon = serde_json::from_str(s)?;
        b.check()?;
        Ok(b)
    }
}

/// One bigraphon per color, all over the same spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BigraphonTuple {
    members: BTreeMap<Color, StepBigraphon>,
}

impl BigraphonTuple {
    pub fn new(members: BTreeMap<Color, StepBigraphon>) -> Result<Self> {
        if let Some(first) = members.values().next() {
            for b in members.values() {
                b.check()?;
                if !b.same_spaces(first) {
                    return Err(Error::WeightMismatch);
                }
            }
        }
        Ok(BigraphonTuple { members })
    }

    /// The same bigraphon for every color.
    pub fn constant<I: IntoIterator<Item = Color>>(colors: I, w: &StepBigraphon) -> Self {
        BigraphonTuple { members: colors.into_iter().map(|c| (c, w.clone())).collect() }
    }

    pub fn get(&self, c: Color) -> Result<&StepBigraphon> {
        self.members.get(&c).ok_or(Error::MissingColor(c))
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.members.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Color, &StepBigraphon)> {
        self.members.iter().map(|(&c, b)| (c, b))
    }

    pub fn members(&self) -> &BTreeMap<Color, StepBigraphon> {
        &self.members
    }

    pub fn into_members(self) -> BTreeMap<Color, StepBigraphon> {
        self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(StepBigraphon::uniform(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_ok());
        assert!(StepBigraphon::uniform(vec![vec![-1.0]]).is_err());
        assert!(StepBigraphon::new(vec![0.5, 0.6], vec![1.0], vec![vec![1.0], vec![1.0]]).is_err());
        assert!(StepBigraphon::new(vec![1.0], vec![1.0], vec![vec![1.0, 2.0]]).is_err());
        assert!(StepBigraphon::uniform(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn marginals_and_regularity() {
        let w = StepBigraphon::uniform(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(w.edge_density(), 1.5);
        assert!(w.is_biregular(0.0));
        let w = StepBigraphon::uniform(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(w.row_marginal(), vec![1.5, 3.5]);
        assert_eq!(w.col_marginal(), vec![2.0, 3.0]);
        assert!(!w.is_left_regular(1e-9));
    }

    #[test]
    fn tuple_spaces_must_agree() {
        let a = StepBigraphon::constant(2, 2, 1.0).unwrap();
        let b = StepBigraphon::new(vec![0.25, 0.75], vec![0.5, 0.5], vec![vec![1.0; 2]; 2]).unwrap();
        assert_eq!(BigraphonTuple::new(BTreeMap::from([(1, a.clone()), (2, b)])), Err(Error::WeightMismatch));
        let t = BigraphonTuple::new(BTreeMap::from([(1, a.clone()), (2, a)])).unwrap();
        assert_eq!(t.get(3), Err(Error::MissingColor(3)));
    }

    #[test]
    fn json_round_trip() {
        let w = StepBigraphon::uniform(vec![vec![0.25, 1.0], vec![0.5, 0.125]]).unwrap();
        assert_eq!(StepBigraphon::from_json_str(&w.to_json_string()).unwrap(), w);
        assert!(StepBigraphon::from_json_str(r#"{"mu":[1],"nu":[1],"w":[[-2]]}"#).is_err());
    }
}
