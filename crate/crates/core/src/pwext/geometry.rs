use std::sync::OnceLock;

use super::curvature::IntrinsicCurvature;
use crate::error::{Error, Result};
use crate::projective::AffineConnection;
use crate::symcore::{q, Base, Rsf, Slot, Space, TensorField, Var};

/// Coordinate `i` of `T*M`: `x_{i+1}` for `i < n`, else `p_{i-n+1}`.
pub fn coord_var(n: usize, i: usize) -> Var {
    if i < n {
        Var::X(i as u8 + 1)
    } else {
        Var::P((i - n) as u8 + 1)
    }
}

/// True for the horizontal half `h_A` of the adapted frame.
pub fn is_horizontal(n: usize, a: usize) -> bool {
    a < n
}

/// Patterson-Walker metric `2 dx.dp - 2 Gamma_A^C_B p_C dx^A.dx^B` on the
/// cotangent bundle of a special connection, with its adapted frame
/// `h_A = d/dx^A + Gamma_A^C_B p_C d/dp_B`, `v^A = d/dp_A`.
///
/// Frame index `a < n` is `h_A`, `a = n + A` is `v^A`.
#[derive(Debug)]
pub struct PWGeometry {
    n: usize,
    source: AffineConnection,
    theta: TensorField,
    metric: TensorField,
    inverse: TensorField,
    frame: TensorField,
    coframe: TensorField,
    pub(crate) curvature: OnceLock<IntrinsicCurvature>,
}

impl Clone for PWGeometry {
    fn clone(&self) -> Self {
        PWGeometry::assemble(self.n, self.source.clone(), self.theta.clone())
    }
}

impl PartialEq for PWGeometry {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.metric == o.metric
    }
}

/// `Theta_AB = Gamma_A^C_B p_C`.
pub fn connection_theta(d: &AffineConnection) -> TensorField {
    let n = d.n();
    TensorField::from_fn(Base::Mt, vec![Slot::down(n); 2], |i| {
        (0..n).map(|c| d.g(i[0], c, i[1]) * Rsf::p(c + 1)).sum()
    })
}

/// Whether the adapted-coordinate trace `Gamma_A^C_C` vanishes.
pub fn is_trace_free(d: &AffineConnection) -> bool {
    (0..d.n()).all(|a| d.trace(a).is_zero())
}

pub(crate) fn frame_from_theta(n: usize, theta: &TensorField) -> (TensorField, TensorField) {
    let dim = 2 * n;
    let frame = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n), Slot::up_t(n)], |i| {
        let (a, k) = (i[0], i[1]);
        match (a < n, k < n) {
            (true, true) => Rsf::int((a == k) as i64),
            (true, false) => theta.get(&[a, k - n]).clone(),
            (false, true) => Rsf::zero(),
            (false, false) => Rsf::int((a == k) as i64),
        }
    });
    // coframe[a][k]: dx^A for a < n, dp_A - Theta_BA dx^B for a = n + A
    let coframe = TensorField::from_fn(Base::Mt, vec![Slot::up_t(n), Slot::down_t(n)], |i| {
        let (a, k) = (i[0], i[1]);
        match (a < n, k < n) {
            (true, true) => Rsf::int((a == k) as i64),
            (true, false) => Rsf::zero(),
            (false, true) => -theta.get(&[k, a - n]),
            (false, false) => Rsf::int((a == k) as i64),
        }
    });
    debug_assert_eq!(frame.len(), dim * dim);
    (frame, coframe)
}

/// `g` in coordinates for a symmetric `Theta`.
pub(crate) fn metric_from_theta(n: usize, theta: &TensorField) -> TensorField {
    TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
        let (j, k) = (i[0], i[1]);
        match (j < n, k < n) {
            (true, true) => theta.get(&[j, k]).scale(&q(-2, 1)),
            (true, false) => Rsf::int((j == k - n) as i64),
            (false, true) => Rsf::int((j - n == k) as i64),
            (false, false) => Rsf::zero(),
        }
    })
}

impl PWGeometry {
    fn assemble(n: usize, source: AffineConnection, theta: TensorField) -> PWGeometry {
        let metric = metric_from_theta(n, &theta);
        let inverse = TensorField::from_fn(Base::Mt, vec![Slot::up_t(n); 2], |i| {
            let (j, k) = (i[0], i[1]);
            match (j < n, k < n) {
                (true, true) => Rsf::zero(),
                (true, false) => Rsf::int((j == k - n) as i64),
                (false, true) => Rsf::int((j - n == k) as i64),
                (false, false) => theta.get(&[j - n, k - n]).scale(&q(2, 1)),
            }
        });
        let (frame, coframe) = frame_from_theta(n, &theta);
        PWGeometry { n, source, theta, metric, inverse, frame, coframe, curvature: OnceLock::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        2 * self.n
    }
    pub fn source(&self) -> &AffineConnection {
        &self.source
    }
    pub fn theta(&self) -> &TensorField {
        &self.theta
    }
    /// Coordinate components `g_ij`.
    pub fn metric(&self) -> &TensorField {
        &self.metric
    }
    pub fn inverse_metric(&self) -> &TensorField {
        &self.inverse
    }
    /// `frame[a][i]`: component of `e_a` along `d/du^i`.
    pub fn frame(&self) -> &TensorField {
        &self.frame
    }
    /// `coframe[a][i]`: component of the dual 1-form `e^a` along `du^i`.
    pub fn coframe(&self) -> &TensorField {
        &self.coframe
    }

    /// Constant frame metric: `G(h_A, v^B) = delta_A^B`, all else zero.
    pub fn frame_metric(&self, a: usize, b: usize) -> i64 {
        let n = self.n;
        ((a < n && b == a + n) || (b < n && a == b + n)) as i64
    }

    /// Index partner under the frame metric: `h_A <-> v^A`.
    pub fn partner(&self, a: usize) -> usize {
        if a < self.n {
            a + self.n
        } else {
            a - self.n
        }
    }

    /// `e_a(f)`.
    pub fn apply_frame(&self, a: usize, f: &Rsf) -> Rsf {
        let n = self.n;
        let mut acc = Rsf::zero();
        for i in 0..2 * n {
            let c = self.frame.get(&[a, i]);
            if !c.is_zero() {
                acc = acc + c * f.partial(coord_var(n, i));
            }
        }
        acc
    }

    /// Coordinate components from frame components, slot by slot.
    pub fn from_frame(&self, t: &TensorField) -> Result<TensorField> {
        self.change_basis(t, false)
    }

    /// Frame components from coordinate components, slot by slot.
    pub fn to_frame(&self, t: &TensorField) -> Result<TensorField> {
        self.change_basis(t, true)
    }

    fn change_basis(&self, t: &TensorField, to_frame: bool) -> Result<TensorField> {
        let dim = self.dim();
        let mut cur = t.clone();
        for k in 0..t.rank() {
            let s = t.slots()[k];
            if s.dim != dim || !matches!(s.space, Space::TangentMt | Space::CotangentMt) {
                return Err(Error::Shape(format!("slot {k} is not a tangent slot of T*M: {s:?}")));
            }
            // lower slots transform with the frame, upper with the coframe
            let m = match (s.is_upper(), to_frame) {
                (false, true) | (true, false) => &self.frame,
                (true, true) | (false, false) => &self.coframe,
            };
            let src = cur;
            cur = TensorField::from_fn(src.base(), src.slots().to_vec(), |idx| {
                let mut j = idx.to_vec();
                let mut acc = Rsf::zero();
                for e in 0..dim {
                    let c = if to_frame { m.get(&[idx[k], e]) } else { m.get(&[e, idx[k]]) };
                    if c.is_zero() {
                        continue;
                    }
                    j[k] = e;
                    acc = acc + c * src.get(&j);
                }
                acc
            })
            .with_weights(src.pweight(), src.cweight());
        }
        Ok(cur)
    }

    /// Coordinate Levi-Civita connection `lc[i][k][j]` of `g` (Koszul in
    /// coordinates).
    pub fn coordinate_christoffels(&self) -> &TensorField {
        &self.intrinsic().christoffel
    }

    /// Covariant derivative on `T*M` (derivative slot first); weights are
    /// carried but the fixed metric trivializes conformal densities.
    pub fn covariant_derivative(&self, t: &TensorField) -> Result<TensorField> {
        let n = self.n;
        let dim = self.dim();
        for s in t.slots() {
            if s.dim != dim || !matches!(s.space, Space::TangentMt | Space::CotangentMt) {
                return Err(Error::Shape(format!("covariant derivative on T*M needs tangent slots, got {s:?}")));
            }
        }
        let lc = self.coordinate_christoffels();
        let upper: Vec<bool> = t.slots().iter().map(|s| s.is_upper()).collect();
        let mut slots = vec![Slot::down_t(n)];
        slots.extend_from_slice(t.slots());
        Ok(TensorField::from_fn(Base::Mt, slots, |idx| {
            let a = idx[0];
            let rest = &idx[1..];
            let mut acc = t.get(rest).partial(coord_var(n, a));
            let mut tmp = rest.to_vec();
            for (k, &up) in upper.iter().enumerate() {
                let orig = rest[k];
                for e in 0..dim {
                    tmp[k] = e;
                    let tv = t.get(&tmp);
                    if tv.is_zero() {
                        continue;
                    }
                    if up {
                        acc = acc + lc.get(&[a, orig, e]) * tv;
                    } else {
                        acc = acc - lc.get(&[a, e, orig]) * tv;
                    }
                }
                tmp[k] = orig;
            }
            acc
        })
        .with_weights(t.pweight(), t.cweight()))
    }

    /// Lower every upper slot with `g` (in coordinates).
    pub fn lower(&self, t: &TensorField, slot: usize) -> Result<TensorField> {
        let s = t.slots()[slot];
        if s.space != Space::TangentMt {
            return Err(Error::Shape(format!("slot {slot} is not an upper tangent slot")));
        }
        let dim = self.dim();
        let mut slots = t.slots().to_vec();
        slots[slot] = Slot::down_t(self.n);
        Ok(TensorField::from_fn(Base::Mt, slots, |idx| {
            let mut j = idx.to_vec();
            (0..dim)
                .map(|e| {
                    j[slot] = e;
                    self.metric.get(&[idx[slot], e]) * t.get(&j)
                })
                .sum()
        })
        .with_weights(t.pweight(), t.cweight()))
    }

    pub fn raise(&self, t: &TensorField, slot: usize) -> Result<TensorField> {
        let s = t.slots()[slot];
        if s.space != Space::CotangentMt {
            return Err(Error::Shape(format!("slot {slot} is not a lower tangent slot")));
        }
        let dim = self.dim();
        let mut slots = t.slots().to_vec();
        slots[slot] = Slot::up_t(self.n);
        Ok(TensorField::from_fn(Base::Mt, slots, |idx| {
            let mut j = idx.to_vec();
            (0..dim)
                .map(|e| {
                    j[slot] = e;
                    self.inverse.get(&[idx[slot], e]) * t.get(&j)
                })
                .sum()
        })
        .with_weights(t.pweight(), t.cweight()))
    }

    pub(crate) fn intrinsic(&self) -> &IntrinsicCurvature {
        // not get_or_init: the computation runs on the rayon pool, and a worker blocked
        // on the cell could be handed a job that waits for the same cell
        if let Some(c) = self.curvature.get() {
            return c;
        }
        let _ = self.curvature.set(IntrinsicCurvature::compute(self));
        self.curvature.get().expect("just set")
    }
}

/// The Patterson-Walker geometry of a special connection whose Christoffel
/// symbols are trace-free in the chart.
pub fn build(d: &AffineConnection) -> Result<PWGeometry> {
    if !is_trace_free(d) {
        return Err(Error::NotSpecial(format!(
            "{}; apply special_part and work in coordinates adapted to the preserved volume",
            d.special_defect()
        )));
    }
    Ok(PWGeometry::assemble(d.n(), d.clone(), connection_theta(d)))
}
