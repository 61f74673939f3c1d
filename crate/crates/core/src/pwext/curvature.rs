use super::geometry::{coord_var, PWGeometry};
use crate::error::Result;
use crate::projective;
use crate::symcore::{q, Base, Rsf, Slot, TensorField};

/// Curvature of the metric computed from its coordinate components only.
#[derive(Clone, Debug)]
pub struct IntrinsicCurvature {
    /// `lc[i][k][j]`: `D_i d_j = lc[i][k][j] d_k`.
    pub christoffel: TensorField,
    /// `R_ij^k_l`, same convention as on the base.
    pub riemann: TensorField,
    /// `R_ijkl = g_km R_ij^m_l`.
    pub riemann_lowered: TensorField,
    pub ricci: TensorField,
    pub scalar: Rsf,
    pub schouten: TensorField,
    /// Lowered conformal Weyl tensor.
    pub weyl: TensorField,
    /// `Y[c][a][b] = D_a P_bc - D_b P_ac`.
    pub cotton: TensorField,
}

impl IntrinsicCurvature {
    pub(crate) fn compute(pw: &PWGeometry) -> IntrinsicCurvature {
        let n = pw.n();
        let dim = pw.dim();
        let g = pw.metric();
        let gi = pw.inverse_metric();
        let dg: Vec<TensorField> = (0..dim).map(|i| g.map(|f| f.partial(coord_var(n, i)))).collect();
        let christoffel = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n), Slot::up_t(n), Slot::down_t(n)], |idx| {
            let (i, k, j) = (idx[0], idx[1], idx[2]);
            let mut acc = Rsf::zero();
            for l in 0..dim {
                let inv = gi.get(&[k, l]);
                if inv.is_zero() {
                    continue;
                }
                let s = dg[i].get(&[l, j]) + dg[j].get(&[l, i]) - dg[l].get(&[i, j]);
                acc = acc + inv * s;
            }
            acc.scale(&q(1, 2))
        });
        let lc = &christoffel;
        let quad = vec![Slot::down_t(n), Slot::down_t(n), Slot::up_t(n), Slot::down_t(n)];
        let riemann = TensorField::from_fn(Base::Mt, quad, |idx| {
            let (a, b, c, e) = (idx[0], idx[1], idx[2], idx[3]);
            if a == b {
                return Rsf::zero();
            }
            let mut acc = lc.get(&[b, c, e]).partial(coord_var(n, a)) - lc.get(&[a, c, e]).partial(coord_var(n, b));
            for f in 0..dim {
                acc = acc + lc.get(&[a, c, f]) * lc.get(&[b, f, e]) - lc.get(&[b, c, f]) * lc.get(&[a, f, e]);
            }
            acc
        });
        let riemann_lowered = pw.lower(&riemann, 2).expect("upper slot");
        let ricci = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
            (0..dim).map(|a| riemann.get(&[a, i[0], a, i[1]]).clone()).sum()
        });
        let scalar: Rsf = (0..dim)
            .flat_map(|a| (0..dim).map(move |b| (a, b)))
            .map(|(a, b)| gi.get(&[a, b]) * ricci.get(&[a, b]))
            .sum();
        let dimq = dim as i64;
        let trace_part = scalar.scale(&q(1, 2 * (dimq - 1)));
        let schouten = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
            (ricci.get(i) - &trace_part * g.get(i)).scale(&q(1, dimq - 2))
        });
        let p = &schouten;
        let weyl = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 4], |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            riemann_lowered.get(i) - g.get(&[a, c]) * p.get(&[b, d]) + g.get(&[b, c]) * p.get(&[a, d])
                - g.get(&[b, d]) * p.get(&[a, c])
                + g.get(&[a, d]) * p.get(&[b, c])
        });
        let mut partial = IntrinsicCurvature {
            christoffel,
            riemann,
            riemann_lowered,
            ricci,
            scalar,
            schouten,
            weyl,
            cotton: TensorField::zeros(Base::Mt, vec![]),
        };
        let dp = covariant_with(pw, &partial.christoffel, &partial.schouten);
        partial.cotton = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 3], |i| {
            let (c, a, b) = (i[0], i[1], i[2]);
            dp.get(&[a, b, c]) - dp.get(&[b, a, c])
        });
        partial
    }
}

/// Covariant derivative of an all-lower tensor with explicit Christoffels.
fn covariant_with(pw: &PWGeometry, lc: &TensorField, t: &TensorField) -> TensorField {
    let n = pw.n();
    let dim = pw.dim();
    let mut slots = vec![Slot::down_t(n)];
    slots.extend_from_slice(t.slots());
    TensorField::from_fn(Base::Mt, slots, |idx| {
        let a = idx[0];
        let rest = &idx[1..];
        let mut acc = t.get(rest).partial(coord_var(n, a));
        let mut tmp = rest.to_vec();
        for k in 0..rest.len() {
            for e in 0..dim {
                tmp[k] = e;
                acc = acc - lc.get(&[a, e, rest[k]]) * t.get(&tmp);
            }
            tmp[k] = rest[k];
        }
        acc
    })
}

/// Horizontal label `A` of frame index `a` (`h_A`).
fn hor(n: usize, a: usize) -> Option<usize> {
    (a < n).then_some(a)
}

/// Vertical label `A` of frame index `a` (`v^A`).
fn ver(n: usize, a: usize) -> Option<usize> {
    (a >= n).then(|| a - n)
}

fn frame_slots(n: usize, rank: usize) -> Vec<Slot> {
    vec![Slot::down_t(n); rank]
}

/// `Gamma~_abc = g(e_b, D_{e_a} e_c)` in the adapted frame, from the metric.
pub fn frame_christoffels_intrinsic(pw: &PWGeometry) -> TensorField {
    let n = pw.n();
    let dim = pw.dim();
    let fr = pw.frame();
    let lc = pw.coordinate_christoffels();
    let g = pw.metric();
    // D_{e_a} e_c in coordinates
    let de: Vec<Vec<Vec<Rsf>>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|c| {
                    (0..dim)
                        .map(|k| {
                            let mut acc = pw.apply_frame(a, fr.get(&[c, k]));
                            for i in 0..dim {
                                let ea = fr.get(&[a, i]);
                                if ea.is_zero() {
                                    continue;
                                }
                                for j in 0..dim {
                                    let ec = fr.get(&[c, j]);
                                    if !ec.is_zero() {
                                        acc = acc + ea * lc.get(&[i, k, j]) * ec;
                                    }
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TensorField::from_fn(Base::Mt, frame_slots(n, 3), |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        let mut acc = Rsf::zero();
        for l in 0..dim {
            let eb = fr.get(&[b, l]);
            if eb.is_zero() {
                continue;
            }
            for k in 0..dim {
                acc = acc + eb * g.get(&[l, k]) * &de[a][c][k];
            }
        }
        acc
    })
}

/// Closed form of the frame Christoffel symbols from the connection:
/// `h`-`v`-`h` block `Gamma_A^B_C`, `h`-`h`-`v` block `-Gamma_A^B_C`,
/// `h`-`h`-`h` block `R_BC^D_A p_D`.
pub fn frame_christoffels(pw: &PWGeometry) -> Result<TensorField> {
    let n = pw.n();
    let d = pw.source();
    let curv = projective::curvature(d)?;
    Ok(TensorField::from_fn(Base::Mt, frame_slots(n, 3), |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        let Some(aa) = hor(n, a) else { return Rsf::zero() };
        match (hor(n, b), ver(n, b), hor(n, c), ver(n, c)) {
            (_, Some(bb), Some(cc), _) => d.g(aa, bb, cc).clone(),
            (Some(cc), _, _, Some(bb)) => -d.g(aa, bb, cc),
            (Some(bb), _, Some(cc), _) => (0..n).map(|e| curv.riemann.get(&[bb, cc, e, aa]) * Rsf::p(e + 1)).sum(),
            _ => Rsf::zero(),
        }
    }))
}

/// `p_E T[.., E, ..]` with `E` in slot `k`.
fn contract_p(t: &TensorField, idx: &[usize], k: usize, n: usize) -> Rsf {
    let mut j = idx.to_vec();
    j.insert(k, 0);
    (0..n)
        .map(|e| {
            j[k] = e;
            t.get(&j) * Rsf::p(e + 1)
        })
        .sum()
}

/// Frame components of `2(chi_a chi_b eta_[c chi_d] + chi_c chi_d eta_[a chi_b]) T_AB^C_D`
/// where `t4[A][B][C][D]` and the vertical label sits in the `C` slot.
fn hv_block(n: usize, t4: &TensorField, i: &[usize]) -> Rsf {
    let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
    let mut acc = Rsf::zero();
    if let (Some(aa), Some(bb)) = (hor(n, a), hor(n, b)) {
        if let (Some(cc), Some(dd)) = (ver(n, c), hor(n, d)) {
            acc = acc + t4.get(&[aa, bb, cc, dd]);
        }
        if let (Some(cc), Some(dd)) = (ver(n, d), hor(n, c)) {
            acc = acc - t4.get(&[aa, bb, cc, dd]);
        }
    }
    if let (Some(aa), Some(bb)) = (hor(n, c), hor(n, d)) {
        if let (Some(cc), Some(dd)) = (ver(n, a), hor(n, b)) {
            acc = acc + t4.get(&[aa, bb, cc, dd]);
        }
        if let (Some(cc), Some(dd)) = (ver(n, b), hor(n, a)) {
            acc = acc - t4.get(&[aa, bb, cc, dd]);
        }
    }
    acc
}

fn all_hor(n: usize, i: &[usize]) -> Option<Vec<usize>> {
    i.iter().map(|&a| hor(n, a)).collect()
}

/// Lowered Riemann tensor of the metric in the adapted frame, from the
/// curvature of the connection and its covariant derivative.
pub fn riemann_closed(pw: &PWGeometry) -> Result<TensorField> {
    let n = pw.n();
    let d = pw.source();
    let curv = projective::curvature(d)?;
    let dr = d.covariant_derivative(&curv.riemann)?;
    Ok(TensorField::from_fn(Base::Mt, frame_slots(n, 4), |i| {
        let mut acc = hv_block(n, &curv.riemann, i);
        if let Some(h) = all_hor(n, i) {
            let (a, b, c, e) = (h[0], h[1], h[2], h[3]);
            // D_A R_CD^E_B p_E stored as dr[A][C][D][E][B]
            acc = acc + contract_p(&dr, &[a, c, e, b], 3, n) - contract_p(&dr, &[b, c, e, a], 3, n);
        }
        acc
    }))
}

/// Which sign the leading block of the Weyl dictionary carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylBlockSign {
    /// Same index placement as the Riemann formula (vertical label on the
    /// upper index of `W`).
    AsRiemann,
    /// The printed placement `chi_[c eta_d]D W_AB^D_C`.
    Printed,
}

/// Lowered conformal Weyl tensor in the adapted frame from projective data:
/// the `hv` block of `W`, and the fully horizontal part built from `D W . p`
/// and `p . Y`.
pub fn weyl_closed(pw: &PWGeometry, sign: WeylBlockSign) -> Result<TensorField> {
    let n = pw.n();
    let d = pw.source();
    let curv = projective::curvature(d)?;
    let w = projective::projective_weyl(d, &curv);
    let y = projective::cotton(d, &curv)?;
    let dw = d.covariant_derivative(&w)?;
    let s = match sign {
        WeylBlockSign::AsRiemann => Rsf::one(),
        WeylBlockSign::Printed => Rsf::int(-1),
    };
    // X_ABCD = D_A W_CD^E_B p_E + p_C Y_DAB
    let x = |a: usize, b: usize, c: usize, dd: usize| -> Rsf {
        contract_p(&dw, &[a, c, dd, b], 3, n) + Rsf::p(c + 1) * y.get(&[dd, a, b])
    };
    Ok(TensorField::from_fn(Base::Mt, frame_slots(n, 4), |i| {
        let mut acc = &s * hv_block(n, &w, i);
        if let Some(h) = all_hor(n, i) {
            let (a, b, c, dd) = (h[0], h[1], h[2], h[3]);
            let sum = x(a, b, c, dd) - x(b, a, c, dd) - x(a, b, dd, c) + x(b, a, dd, c);
            acc = acc + sum.scale(&q(1, 2));
        }
        acc
    }))
}

/// `P~_ab = chi_a^A chi_b^B P_AB`.
pub fn schouten_closed(pw: &PWGeometry) -> Result<TensorField> {
    let n = pw.n();
    let curv = projective::curvature(pw.source())?;
    Ok(TensorField::from_fn(Base::Mt, frame_slots(n, 2), |i| match all_hor(n, i) {
        Some(h) => curv.schouten.get(&h).clone(),
        None => Rsf::zero(),
    }))
}

/// `Y~_cab = chi_c^C chi_a^A chi_b^B Y_CAB`.
pub fn cotton_closed(pw: &PWGeometry) -> Result<TensorField> {
    let n = pw.n();
    let d = pw.source();
    let y = projective::cotton(d, &projective::curvature(d)?)?;
    Ok(TensorField::from_fn(Base::Mt, frame_slots(n, 3), |i| match all_hor(n, i) {
        Some(h) => y.get(&h).clone(),
        None => Rsf::zero(),
    }))
}

/// One curvature tensor computed from the connection and from the metric,
/// both in adapted-frame components.
#[derive(Clone, Debug)]
pub struct DictionaryEntry {
    pub name: &'static str,
    pub closed: TensorField,
    pub intrinsic: TensorField,
}

impl DictionaryEntry {
    pub fn difference(&self) -> TensorField {
        self.closed.sub(&self.intrinsic).expect("same shape")
    }
    pub fn agrees(&self) -> bool {
        self.closed == self.intrinsic
    }
}

#[derive(Clone, Debug)]
pub struct CurvatureDictionary {
    pub riemann: DictionaryEntry,
    pub weyl: DictionaryEntry,
    pub schouten: DictionaryEntry,
    pub cotton: DictionaryEntry,
}

impl CurvatureDictionary {
    pub fn entries(&self) -> [&DictionaryEntry; 4] {
        [&self.riemann, &self.weyl, &self.schouten, &self.cotton]
    }
    pub fn agrees(&self) -> bool {
        self.entries().iter().all(|e| e.agrees())
    }
}

/// Riemann, Weyl, Schouten and Cotton tensors of the metric two ways.
pub fn curvature_dictionary(pw: &PWGeometry) -> Result<CurvatureDictionary> {
    let ic = pw.intrinsic();
    let entry = |name, closed, coord: &TensorField| -> Result<DictionaryEntry> {
        Ok(DictionaryEntry { name, closed, intrinsic: pw.to_frame(coord)? })
    };
    Ok(CurvatureDictionary {
        riemann: entry("riemann", riemann_closed(pw)?, &ic.riemann_lowered)?,
        weyl: entry("weyl", weyl_closed(pw, WeylBlockSign::AsRiemann)?, &ic.weyl)?,
        schouten: entry("schouten", schouten_closed(pw)?, &ic.schouten)?,
        cotton: entry("cotton", cotton_closed(pw)?, &ic.cotton)?,
    })
}

/// `T_abcd v^a w^d` over all pairs of vertical frame vectors, as a tensor
/// on the two middle slots for each pair; empty when the condition holds.
pub fn vertical_defects(pw: &PWGeometry, t: &TensorField) -> Vec<(usize, usize, usize, usize, Rsf)> {
    let n = pw.n();
    let dim = pw.dim();
    let mut out = Vec::new();
    for a in n..dim {
        for d in n..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let v = t.get(&[a, b, c, d]);
                    if !v.is_zero() {
                        out.push((a, b, c, d, v.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Walker condition for the frame Riemann tensor.
pub fn walker_condition(pw: &PWGeometry) -> Result<bool> {
    let r = pw.to_frame(&pw.intrinsic().riemann_lowered)?;
    Ok(vertical_defects(pw, &r).is_empty())
}

/// Vertical condition for the frame Weyl tensor.
pub fn weyl_vertical_condition(pw: &PWGeometry) -> Result<bool> {
    let w = pw.to_frame(&pw.intrinsic().weyl)?;
    Ok(vertical_defects(pw, &w).is_empty())
}

/// Frame Schouten tensor from the metric.
pub fn schouten(pw: &PWGeometry) -> Result<TensorField> {
    pw.to_frame(&pw.intrinsic().schouten)
}

/// Einstein means `P~` is pure trace; returns whether it is, and whether it
/// then vanishes.
pub fn einstein_implies_ricci_flat(pw: &PWGeometry) -> (bool, bool) {
    let ic = pw.intrinsic();
    let dim = pw.dim() as i64;
    let tr = ic.scalar.scale(&q(1, 2 * (dim - 1) * dim));
    let pure = ic.schouten.sub(&pw.metric().scale(&tr)).expect("same shape").is_zero();
    (pure, ic.schouten.is_zero())
}
