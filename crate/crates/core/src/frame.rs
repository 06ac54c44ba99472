//! The null frame {L, Lbar, ∂2, ∂3}, symmetric rank-2 tensors in frame and
//! coordinate components, and the constant basis change between them.

use crate::error::{Error, Result};
use serde::Serialize;

/// Frame index, ordered (L, Lbar, 2, 3). L = ∂t + ∂x1, Lbar = ∂t - ∂x1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrameIndex {
    L,
    Lbar,
    A2,
    A3,
}

impl FrameIndex {
    pub const ALL: [FrameIndex; 4] = [
        FrameIndex::L,
        FrameIndex::Lbar,
        FrameIndex::A2,
        FrameIndex::A3,
    ];

    pub fn idx(self) -> usize {
        match self {
            FrameIndex::L => 0,
            FrameIndex::Lbar => 1,
            FrameIndex::A2 => 2,
            FrameIndex::A3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        ["L", "Lbar", "2", "3"][self.idx()]
    }
}

/// Frame component name pairs in table order, for JSON keys.
pub const COMPONENT_NAMES: [[&str; 4]; 4] = [
    ["LL", "LLbar", "L2", "L3"],
    ["LLbar", "LbarLbar", "Lbar2", "Lbar3"],
    ["L2", "Lbar2", "22", "23"],
    ["L3", "Lbar3", "23", "33"],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// Symmetric rank-2 tensor in the null frame at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSymTensor2 {
    pub m: [[f64; 4]; 4],
    pub variance: Variance,
    pub t: f64,
    pub x: [f64; 3],
}

/// Symmetric rank-2 tensor in coordinates (t, x1, x2, x3), signature (-,+,+,+).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordSymTensor2 {
    pub m: [[f64; 4]; 4],
    pub variance: Variance,
    pub t: f64,
    pub x: [f64; 3],
}

impl FrameSymTensor2 {
    /// Component by frame index pair.
    pub fn get(&self, y: FrameIndex, z: FrameIndex) -> f64 {
        self.m[y.idx()][z.idx()]
    }

    pub fn new(m: [[f64; 4]; 4], variance: Variance, t: f64, x: [f64; 3]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(Error::Precondition(format!(
                        "frame tensor not symmetric at ({i},{j})"
                    )));
                }
            }
            for j in 0..4 {
                if !m[i][j].is_finite() {
                    return Err(Error::Precondition(format!(
                        "non-finite frame entry at ({i},{j})"
                    )));
                }
            }
        }
        Ok(FrameSymTensor2 { m, variance, t, x })
    }
}

/// Columns of the frame vectors in coordinate components.
const BASIS: [[f64; 4]; 4] = [
    [1.0, 1.0, 0.0, 0.0],  // coordinate row t
    [1.0, -1.0, 0.0, 0.0], // coordinate row x1
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];
/// Inverse of [`BASIS`].
const BASIS_INV: [[f64; 4]; 4] = [
    [0.5, 0.5, 0.0, 0.0],
    [0.5, -0.5, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

pub fn matmul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn transpose(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

/// Determinant by LU with partial pivoting.
pub fn det4(a: &[[f64; 4]; 4]) -> f64 {
    let mut m = *a;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan with partial pivoting.
pub fn inverse4(a: &[[f64; 4]; 4]) -> Result<[[f64; 4]; 4]> {
    let mut m = *a;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col].abs() < 1e-14 {
            return Err(Error::Precondition("singular 4x4 matrix".into()));
        }
        m.swap(piv, col);
        inv.swap(piv, col);
        let p = m[col][col];
        for k in 0..4 {
            m[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..4 {
            if row != col {
                let f = m[row][col];
                for k in 0..4 {
                    m[row][k] -= f * m[col][k];
                    inv[row][k] -= f * inv[col][k];
                }
            }
        }
    }
    Ok(inv)
}

/// Frame components of the Minkowski metric: m(L, Lbar) = -2, m(A, A) = 1.
pub fn minkowski_frame() -> [[f64; 4]; 4] {
    [
        [0.0, -2.0, 0.0, 0.0],
        [-2.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

/// Coordinate Minkowski metric diag(-1, 1, 1, 1).
pub fn minkowski_coord() -> [[f64; 4]; 4] {
    [
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

/// Inverse of the frame Minkowski components: m^{L Lbar} = -1/2.
pub fn minkowski_frame_inv() -> [[f64; 4]; 4] {
    [
        [0.0, -0.5, 0.0, 0.0],
        [-0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

/// Change of basis frame -> coordinates.
///
/// Covariant: C = M^{-T} F M^{-1}; contravariant: C = M F M^T, where M's
/// columns are the frame vectors.
pub fn frame_to_coord(t: &FrameSymTensor2) -> CoordSymTensor2 {
    let m = match t.variance {
        Variance::Covariant => matmul(&transpose(&BASIS_INV), &matmul(&t.m, &BASIS_INV)),
        Variance::Contravariant => matmul(&BASIS, &matmul(&t.m, &transpose(&BASIS))),
    };
    CoordSymTensor2 {
        m,
        variance: t.variance,
        t: t.t,
        x: t.x,
    }
}

/// Change of basis coordinates -> frame (inverse of [`frame_to_coord`]).
pub fn coord_to_frame(t: &CoordSymTensor2) -> FrameSymTensor2 {
    let m = match t.variance {
        Variance::Covariant => matmul(&transpose(&BASIS), &matmul(&t.m, &BASIS)),
        Variance::Contravariant => matmul(&BASIS_INV, &matmul(&t.m, &transpose(&BASIS_INV))),
    };
    FrameSymTensor2 {
        m,
        variance: t.variance,
        t: t.t,
        x: t.x,
    }
}
