#![allow(dead_code)]

use fracframes::basis1d::Interval;
use fracframes::frame::{collocation_grid_1d, BasisFamily, Point};

/// Rows of a frozen oracle table, with column lookup by header name.
pub struct Table {
    header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn load(name: &str) -> Table {
        let path = format!("{}/tests/oracles/{name}", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().expect("header row").split(',').map(str::to_owned).collect();
        let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
        Table { header, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    pub fn f64(&self, row: &[String], name: &str) -> f64 {
        row[self.col(name)].parse().unwrap_or_else(|_| panic!("bad number in column {name}"))
    }

    pub fn usize(&self, row: &[String], name: &str) -> usize {
        row[self.col(name)].parse().unwrap()
    }

    pub fn str<'r>(&self, row: &'r [String], name: &str) -> &'r str {
        &row[self.col(name)]
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub fn xs(points: &[Point<f64>]) -> Vec<f64> {
    points
        .iter()
        .map(|p| match p {
            Point::D1(x) => *x,
            Point::D2(..) => panic!("expected a 1D point"),
        })
        .collect()
}

/// Unit-width intervals tiling [lo, hi].
pub fn tiling(lo: f64, hi: f64, count: usize) -> Vec<Interval<f64>> {
    let w = (hi - lo) / count as f64;
    (0..count).map(|k| Interval::new(lo + w * k as f64, lo + w * (k + 1) as f64).unwrap()).collect()
}

/// Extended (exponent −s) and weighted (exponent s) families on each interval.
pub fn gaussian_families(s: f64, ivs: &[Interval<f64>]) -> Vec<BasisFamily<f64>> {
    let mut fams: Vec<_> = ivs.iter().map(|iv| BasisFamily::extended_jacobi(-s, -s, *iv, 0).unwrap()).collect();
    fams.extend(ivs.iter().map(|iv| BasisFamily::weighted_jacobi(s, *iv).unwrap()));
    fams
}

/// A small 1D grid on [-3, 3] with pads out to ±8.
pub fn small_grid(pts: usize) -> (Vec<Interval<f64>>, Vec<Point<f64>>) {
    let ivs = tiling(-3.0, 3.0, 3);
    let pads = (Interval::new(-8.0, -3.0).unwrap(), Interval::new(3.0, 8.0).unwrap());
    let points = collocation_grid_1d(&ivs, pts, 1e-2, Some(pads)).unwrap();
    (ivs, points)
}

/// The heat-equation setup: extended exponent −1/2 (from degree 1) and
/// weighted exponent 1/2 on five unit intervals of [−5, 5], with pads out
/// to ±20.
pub fn heat_setup(pts: usize, n_columns: usize) -> (fracframes::frame::SumSpace<f64>, Vec<Point<f64>>) {
    let ivs = tiling(-5.0, 5.0, 5);
    let mut fams: Vec<_> = ivs.iter().map(|iv| BasisFamily::extended_jacobi(-0.5, -0.5, *iv, 1).unwrap()).collect();
    fams.extend(ivs.iter().map(|iv| BasisFamily::weighted_jacobi(0.5, *iv).unwrap()));
    let pads = (Interval::new(-20.0, -5.0).unwrap(), Interval::new(5.0, 20.0).unwrap());
    let points = collocation_grid_1d(&ivs, pts, 1e-4, Some(pads)).unwrap();
    (fracframes::frame::SumSpace::new(fams, n_columns).unwrap(), points)
}

/// (1+t)/(x² + (1+t)²), the solution of the half-Laplacian heat equation
/// started from 1/(1+x²).
pub fn heat_exact(x: f64, t: f64) -> f64 {
    (1.0 + t) / (x * x + (1.0 + t) * (1.0 + t))
}
