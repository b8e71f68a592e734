//! Tabulated real functions with linear or cubic Hermite interpolation.

use super::NumericsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    Cubic,
}

#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    // Node derivatives, only for cubic interpolation.
    slopes: Vec<f64>,
    interpolation: Interpolation,
    uniform_step: Option<f64>,
}

impl SampledFunction {
    pub fn linear(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, NumericsError> {
        Self::build(grid, values, Vec::new(), Interpolation::Linear)
    }

    /// Cubic Hermite interpolation with slopes estimated by three-point
    /// differences (second-order accurate on non-uniform grids).
    pub fn cubic(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, NumericsError> {
        check_grid(&grid, &values)?;
        let slopes = estimate_slopes(&grid, &values);
        Self::build(grid, values, slopes, Interpolation::Cubic)
    }

    /// Cubic Hermite interpolation with caller-supplied node derivatives.
    pub fn cubic_hermite(
        grid: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
    ) -> Result<Self, NumericsError> {
        if slopes.len() != grid.len() {
            return Err(NumericsError::BadGrid("slope count differs from grid length"));
        }
        Self::build(grid, values, slopes, Interpolation::Cubic)
    }

    /// Samples `f` at `count` equally spaced points of `[a, b]`.
    pub fn tabulate(
        f: impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        count: usize,
        interpolation: Interpolation,
    ) -> Result<Self, NumericsError> {
        if count < 2 || !(b > a) {
            return Err(NumericsError::BadGrid("need at least two points on a non-empty interval"));
        }
        let h = (b - a) / (count - 1) as f64;
        let grid: Vec<f64> = (0..count).map(|i| if i + 1 == count { b } else { a + h * i as f64 }).collect();
        let values = grid.iter().map(|&x| f(x)).collect();
        match interpolation {
            Interpolation::Linear => Self::linear(grid, values),
            Interpolation::Cubic => Self::cubic(grid, values),
        }
    }

    fn build(
        grid: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
        interpolation: Interpolation,
    ) -> Result<Self, NumericsError> {
        check_grid(&grid, &values)?;
        let n = grid.len();
        let step = (grid[n - 1] - grid[0]) / (n - 1) as f64;
        let uniform = grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step);
        Ok(Self {
            grid,
            values,
            slopes,
            interpolation,
            uniform_step: uniform.then_some(step),
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    fn locate(&self, x: f64) -> Result<usize, NumericsError> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(NumericsError::OutOfRange { x, lo, hi });
        }
        let last = self.grid.len() - 2;
        let mut i = match self.uniform_step {
            Some(h) => (((x - lo) / h) as usize).min(last),
            None => self.grid.partition_point(|&g| g <= x).saturating_sub(1).min(last),
        };
        while i > 0 && self.grid[i] > x {
            i -= 1;
        }
        while i < last && self.grid[i + 1] <= x {
            i += 1;
        }
        Ok(i)
    }

    pub fn eval(&self, x: f64) -> Result<f64, NumericsError> {
        let i = self.locate(x)?;
        Ok(self.eval_in(i, x).0)
    }

    /// Value and first derivative of the interpolant.
    pub fn eval_with_derivative(&self, x: f64) -> Result<(f64, f64), NumericsError> {
        let i = self.locate(x)?;
        Ok(self.eval_in(i, x))
    }

    fn eval_in(&self, i: usize, x: f64) -> (f64, f64) {
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let h = x1 - x0;
        if x == x0 {
            let d = match self.interpolation {
                Interpolation::Linear => (y1 - y0) / h,
                Interpolation::Cubic => self.slopes[i],
            };
            return (y0, d);
        }
        if x == x1 {
            let d = match self.interpolation {
                Interpolation::Linear => (y1 - y0) / h,
                Interpolation::Cubic => self.slopes[i + 1],
            };
            return (y1, d);
        }
        let t = (x - x0) / h;
        match self.interpolation {
            Interpolation::Linear => (y0 + t * (y1 - y0), (y1 - y0) / h),
            Interpolation::Cubic => {
                let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
                let t2 = t * t;
                let t3 = t2 * t;
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
                let d00 = 6.0 * t2 - 6.0 * t;
                let d10 = 3.0 * t2 - 4.0 * t + 1.0;
                let d01 = -6.0 * t2 + 6.0 * t;
                let d11 = 3.0 * t2 - 2.0 * t;
                let d = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
                (v, d)
            }
        }
    }

    /// True when stored values are strictly increasing.
    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }
}

fn check_grid(grid: &[f64], values: &[f64]) -> Result<(), NumericsError> {
    if grid.len() < 2 {
        return Err(NumericsError::BadGrid("need at least two grid points"));
    }
    if grid.len() != values.len() {
        return Err(NumericsError::BadGrid("value count differs from grid length"));
    }
    if !grid.windows(2).all(|w| w[1] > w[0]) {
        return Err(NumericsError::BadGrid("grid must be strictly increasing"));
    }
    Ok(())
}

fn estimate_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    if n == 2 {
        return vec![secant[0]; 2];
    }
    let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (h[i - 1] * secant[i] + h[i] * secant[i - 1]) / (h[i - 1] + h[i]);
    }
    d[0] = ((2.0 * h[0] + h[1]) * secant[0] - h[0] * secant[1]) / (h[0] + h[1]);
    let (a, b) = (h[n - 2], h[n - 3]);
    d[n - 1] = ((2.0 * a + b) * secant[n - 2] - a * secant[n - 3]) / (a + b);
    d
}
