use crate::error::{Error, Result};

/// One Cartesian direction of a [`Grid`]: `n` interior nodes strictly inside
/// `(lower, upper)`, the two end points carrying the homogeneous Dirichlet value.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    lower: f64,
    upper: f64,
    n: usize,
}

impl Axis {
    pub fn new(lower: f64, upper: f64, n: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || upper <= lower {
            return Err(Error::InvalidGrid(format!(
                "axis bounds must satisfy lower < upper, got ({lower}, {upper})"
            )));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "axis needs at least 3 interior points, got {n}"
            )));
        }
        Ok(Self { lower, upper, n })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// Node spacing `(upper - lower) / (n + 1)`.
    pub fn h(&self) -> f64 {
        (self.upper - self.lower) / (self.n + 1) as f64
    }

    /// Coordinate of interior node `i` (0-based).
    pub fn coord(&self, i: usize) -> f64 {
        self.lower + (i + 1) as f64 * self.h()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Uniform tensor-product grid of interior nodes in one or two dimensions.
///
/// Values are stored row-major with the last axis fastest: in 2D node
/// `(ix, iy)` lives at `ix * ny + iy`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidGrid(format!(
                "grid dimension must be 1 or 2, got {}",
                axes.len()
            )));
        }
        Ok(Self { axes })
    }

    pub fn line(lower: f64, upper: f64, n: usize) -> Result<Self> {
        Self::new(vec![Axis::new(lower, upper, n)?])
    }

    pub fn rectangle(x: (f64, f64), y: (f64, f64), n: [usize; 2]) -> Result<Self> {
        Self::new(vec![Axis::new(x.0, x.1, n[0])?, Axis::new(y.0, y.1, n[1])?])
    }

    /// Symmetric box `[-r, r]^dim` with `n` interior nodes per direction.
    pub fn centered(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        let axes = (0..dim)
            .map(|_| Axis::new(-half_width, half_width, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(axes)
    }

    /// `prod_j (0, L_j)` with `n` interior nodes per direction.
    pub fn boxed(lengths: &[f64], n: usize) -> Result<Self> {
        let axes = lengths
            .iter()
            .map(|&l| Axis::new(0.0, l, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, j: usize) -> &Axis {
        &self.axes[j]
    }

    /// Total number of interior nodes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of one node, `prod_j h_j`.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::h).product()
    }

    /// Distance between neighbours along axis `j` in the flat storage.
    pub fn stride(&self, j: usize) -> usize {
        self.axes[j + 1..].iter().map(Axis::n).product()
    }

    /// Multi-index of a flat index.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        match self.dim() {
            1 => [idx, 0],
            _ => {
                let ny = self.axes[1].n();
                [idx / ny, idx % ny]
            }
        }
    }

    /// Coordinates of a flat index; unused trailing entries are zero.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let m = self.unflatten(idx);
        let mut p = [0.0; 2];
        for (j, axis) in self.axes.iter().enumerate() {
            p[j] = axis.coord(m[j]);
        }
        p
    }

    /// Flat index of the node mirrored through the grid center in every direction.
    pub fn reflect(&self, idx: usize) -> usize {
        let m = self.unflatten(idx);
        match self.dim() {
            1 => self.axes[0].n() - 1 - m[0],
            _ => {
                let (nx, ny) = (self.axes[0].n(), self.axes[1].n());
                (nx - 1 - m[0]) * ny + (ny - 1 - m[1])
            }
        }
    }

    pub fn center(&self) -> [f64; 2] {
        let mut c = [0.0; 2];
        for (j, axis) in self.axes.iter().enumerate() {
            c[j] = axis.center();
        }
        c
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        let d = self.dim();
        (0..self.len()).map(|i| f(&self.point(i)[..d])).collect()
    }
}
