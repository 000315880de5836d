use serde::{Deserialize, Serialize};

use super::lagrange::LagrangeBasis;
use super::quadrature::{quad_rule, QuadKind};
use super::FemError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimKind {
    OneD,
    TwoDTensor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// Natural (homogeneous Neumann): every node is a free dof.
    Neumann,
    /// Homogeneous Dirichlet: boundary nodes are removed.
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Interval(f64, f64),
    UnitSquare,
}

/// Continuous piecewise-polynomial space on a uniform mesh of an interval.
///
/// Element nodes are the Gauss-Lobatto points mapped onto each element.
#[derive(Debug, Clone)]
pub struct LineSpace {
    order: usize,
    n_elem: usize,
    a: f64,
    b: f64,
    bc: BoundaryCondition,
    basis: LagrangeBasis,
    coords: Vec<f64>,
    free: Vec<usize>,
    global_to_free: Vec<Option<usize>>,
}

impl LineSpace {
    pub fn new(
        order: usize,
        n_elem: usize,
        a: f64,
        b: f64,
        bc: BoundaryCondition,
    ) -> Result<Self, FemError> {
        if order == 0 {
            return Err(FemError::InvalidOrder(order));
        }
        if n_elem == 0 {
            return Err(FemError::InvalidElementCount(n_elem));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(FemError::InvalidDomain { a, b });
        }
        let ref_nodes = quad_rule(QuadKind::GaussLobatto, order + 1)?.points;
        let basis = LagrangeBasis::new(&ref_nodes)?;
        let h = (b - a) / n_elem as f64;
        let n_dofs = n_elem * order + 1;
        let mut coords = vec![0.0; n_dofs];
        for e in 0..n_elem {
            let x0 = a + e as f64 * h;
            for (i, xi) in ref_nodes.iter().enumerate() {
                coords[e * order + i] = x0 + 0.5 * (xi + 1.0) * h;
            }
        }
        coords[0] = a;
        coords[n_dofs - 1] = b;
        let free: Vec<usize> = match bc {
            BoundaryCondition::Neumann => (0..n_dofs).collect(),
            BoundaryCondition::Dirichlet => (1..n_dofs - 1).collect(),
        };
        let mut global_to_free = vec![None; n_dofs];
        for (f, &g) in free.iter().enumerate() {
            global_to_free[g] = Some(f);
        }
        Ok(Self {
            order,
            n_elem,
            a,
            b,
            bc,
            basis,
            coords,
            free,
            global_to_free,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_elem(&self) -> usize {
        self.n_elem
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n_elem as f64
    }

    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    /// Node count before boundary restriction.
    pub fn n_global(&self) -> usize {
        self.coords.len()
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    pub fn free_index(&self, global: usize) -> Option<usize> {
        self.global_to_free[global]
    }

    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        let h = self.h();
        (self.a + e as f64 * h, self.a + (e + 1) as f64 * h)
    }

    /// Global index of local node `i` on element `e`.
    #[inline]
    pub fn global_index(&self, e: usize, i: usize) -> usize {
        e * self.order + i
    }

    /// Element containing `x` and the reference coordinate in `[-1, 1]`.
    pub fn locate(&self, x: f64) -> Result<(usize, f64), FemError> {
        let h = self.h();
        let slack = 1e-12 * (self.b - self.a);
        if !(x >= self.a - slack && x <= self.b + slack) {
            return Err(FemError::PointOutsideDomain { point: vec![x] });
        }
        let e = (((x - self.a) / h).floor().max(0.0) as usize).min(self.n_elem - 1);
        let (x0, x1) = self.element_bounds(e);
        let xi = (2.0 * (x - x0) / (x1 - x0) - 1.0).clamp(-1.0, 1.0);
        Ok((e, xi))
    }
}

/// A 1D Lagrange space or the tensor product of one with itself on the unit
/// square.
#[derive(Debug, Clone)]
pub struct FemSpace {
    dim: DimKind,
    line: LineSpace,
}

impl FemSpace {
    pub fn dim(&self) -> DimKind {
        self.dim
    }

    /// The 1D factor (the whole space in 1D).
    pub fn line(&self) -> &LineSpace {
        &self.line
    }

    pub fn order(&self) -> usize {
        self.line.order
    }

    pub fn n_elem(&self) -> usize {
        self.line.n_elem
    }

    pub fn h(&self) -> f64 {
        self.line.h()
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.line.bc
    }

    pub fn domain(&self) -> Domain {
        match self.dim {
            DimKind::OneD => Domain::Interval(self.line.a, self.line.b),
            DimKind::TwoDTensor => Domain::UnitSquare,
        }
    }

    pub fn n_global(&self) -> usize {
        match self.dim {
            DimKind::OneD => self.line.n_global(),
            DimKind::TwoDTensor => self.line.n_global().pow(2),
        }
    }

    pub fn n_free(&self) -> usize {
        match self.dim {
            DimKind::OneD => self.line.n_free(),
            DimKind::TwoDTensor => self.line.n_free().pow(2),
        }
    }

    /// Coordinates of the free dofs; tensor index is `j * n1 + i` with `i`
    /// running along x.
    pub fn dof_coords(&self) -> Vec<Vec<f64>> {
        let line = &self.line;
        match self.dim {
            DimKind::OneD => line.free.iter().map(|&g| vec![line.coords[g]]).collect(),
            DimKind::TwoDTensor => {
                let mut out = Vec::with_capacity(self.n_free());
                for &gy in &line.free {
                    for &gx in &line.free {
                        out.push(vec![line.coords[gx], line.coords[gy]]);
                    }
                }
                out
            }
        }
    }

    /// Global-node mask: `true` for dofs kept after boundary restriction.
    pub fn free_mask(&self) -> Vec<bool> {
        let line_mask: Vec<bool> = self.line.global_to_free.iter().map(Option::is_some).collect();
        match self.dim {
            DimKind::OneD => line_mask,
            DimKind::TwoDTensor => {
                let mut out = Vec::with_capacity(self.n_global());
                for &my in &line_mask {
                    for &mx in &line_mask {
                        out.push(mx && my);
                    }
                }
                out
            }
        }
    }

    /// Measure of the domain.
    pub fn measure(&self) -> f64 {
        match self.dim {
            DimKind::OneD => self.line.b - self.line.a,
            DimKind::TwoDTensor => 1.0,
        }
    }

    pub fn same_domain(&self, other: &FemSpace) -> bool {
        self.dim == other.dim && self.domain() == other.domain()
    }
}

/// Builds a uniform Lagrange space of order `k` with `n_elem` elements per
/// direction.
pub fn build_space(
    dim: DimKind,
    k: usize,
    n_elem: usize,
    domain: Domain,
    bc: BoundaryCondition,
) -> Result<FemSpace, FemError> {
    let (a, b) = match (dim, domain) {
        (DimKind::OneD, Domain::Interval(a, b)) => (a, b),
        (DimKind::TwoDTensor, Domain::UnitSquare) => (0.0, 1.0),
        _ => return Err(FemError::DomainKindMismatch),
    };
    Ok(FemSpace {
        dim,
        line: LineSpace::new(k, n_elem, a, b, bc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let s = build_space(DimKind::OneD, 1, 4, Domain::Interval(-1.0, 1.0), BoundaryCondition::Neumann)
            .unwrap();
        assert_eq!(s.n_free(), 5);
        let s = build_space(DimKind::OneD, 2, 4, Domain::Interval(-1.0, 1.0), BoundaryCondition::Dirichlet)
            .unwrap();
        assert_eq!(s.n_global(), 9);
        assert_eq!(s.n_free(), 7);
        let s = build_space(DimKind::TwoDTensor, 1, 4, Domain::UnitSquare, BoundaryCondition::Neumann)
            .unwrap();
        assert_eq!(s.n_free(), 25);
        assert_eq!(s.dof_coords()[6], vec![0.25, 0.25]);
    }

    #[test]
    fn shared_nodes_and_lobatto_placement() {
        let s = build_space(DimKind::OneD, 3, 2, Domain::Interval(0.0, 2.0), BoundaryCondition::Neumann)
            .unwrap();
        let c = s.line().coords();
        assert_eq!(c.len(), 7);
        assert!((c[3] - 1.0).abs() < 1e-15);
        let lob = 1.0 / 5f64.sqrt();
        assert!((c[1] - (0.5 - 0.5 * lob)).abs() < 1e-15);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_inputs() {
        let d = Domain::Interval(-1.0, 1.0);
        assert!(build_space(DimKind::OneD, 0, 4, d, BoundaryCondition::Neumann).is_err());
        assert!(build_space(DimKind::OneD, 1, 0, d, BoundaryCondition::Neumann).is_err());
        assert!(build_space(DimKind::TwoDTensor, 1, 2, d, BoundaryCondition::Neumann).is_err());
    }

    #[test]
    fn locate_points() {
        let s = LineSpace::new(2, 4, -1.0, 1.0, BoundaryCondition::Neumann).unwrap();
        assert_eq!(s.locate(-1.0).unwrap(), (0, -1.0));
        assert_eq!(s.locate(1.0).unwrap(), (3, 1.0));
        let (e, xi) = s.locate(0.25).unwrap();
        assert_eq!(e, 2);
        assert!(xi.abs() < 1e-15);
        assert!(s.locate(1.5).is_err());
    }
}
