//! Dense indexed tensors with rational-function components.

use super::field::Rsf;
use super::poly::{qi, Q};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    M,
    Mt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    TangentM,
    CotangentM,
    TangentMt,
    CotangentMt,
    SpinorPlus,
    SpinorMinus,
    DualSpinorPlus,
    DualSpinorMinus,
}

impl Space {
    pub fn dual(self) -> Space {
        use Space::*;
        match self {
            TangentM => CotangentM,
            CotangentM => TangentM,
            TangentMt => CotangentMt,
            CotangentMt => TangentMt,
            SpinorPlus => DualSpinorPlus,
            DualSpinorPlus => SpinorPlus,
            SpinorMinus => DualSpinorMinus,
            DualSpinorMinus => SpinorMinus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub space: Space,
    pub dim: usize,
}

impl Slot {
    pub fn up(n: usize) -> Slot {
        Slot { space: Space::TangentM, dim: n }
    }
    pub fn down(n: usize) -> Slot {
        Slot { space: Space::CotangentM, dim: n }
    }
    /// Tangent slot on the cotangent bundle of an `n`-manifold.
    pub fn up_t(n: usize) -> Slot {
        Slot { space: Space::TangentMt, dim: 2 * n }
    }
    pub fn down_t(n: usize) -> Slot {
        Slot { space: Space::CotangentMt, dim: 2 * n }
    }
    pub fn is_upper(&self) -> bool {
        matches!(self.space, Space::TangentM | Space::TangentMt | Space::SpinorPlus | Space::SpinorMinus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Sym,
    Antisym,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryDecl {
    pub slots: Vec<usize>,
    pub parity: Parity,
}

/// Dense tensor field. Components are stored row-major over the slots.
#[derive(Clone, Debug)]
pub struct TensorField {
    base: Base,
    slots: Vec<Slot>,
    comps: Vec<Rsf>,
    pweight: i32,
    cweight: i32,
    symmetries: Vec<SymmetryDecl>,
}

impl PartialEq for TensorField {
    fn eq(&self, o: &Self) -> bool {
        self.base == o.base && self.slots == o.slots && self.comps == o.comps
    }
}

fn strides(slots: &[Slot]) -> Vec<usize> {
    let mut s = vec![1; slots.len()];
    for k in (0..slots.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * slots[k + 1].dim;
    }
    s
}

fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    // Heap-free recursive listing with parity
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        if rest.is_empty() {
            out.push((prefix.clone(), odd));
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, odd ^ (i % 2 == 1), out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..k).collect(), false, &mut out);
    out
}

impl TensorField {
    pub fn zeros(base: Base, slots: Vec<Slot>) -> TensorField {
        let len = slots.iter().map(|s| s.dim).product();
        TensorField { base, slots, comps: vec![Rsf::zero(); len], pweight: 0, cweight: 0, symmetries: Vec::new() }
    }

    /// Build from a component function, evaluated in parallel when enabled.
    pub fn from_fn<F>(base: Base, slots: Vec<Slot>, f: F) -> TensorField
    where
        F: Fn(&[usize]) -> Rsf + Sync + Send,
    {
        let len: usize = slots.iter().map(|s| s.dim).product();
        let st = strides(&slots);
        let dims: Vec<usize> = slots.iter().map(|s| s.dim).collect();
        let comps = par::map_range(len, |off| {
            let idx: Vec<usize> = st.iter().zip(&dims).map(|(s, d)| (off / s) % d).collect();
            f(&idx)
        });
        TensorField { base, slots, comps, pweight: 0, cweight: 0, symmetries: Vec::new() }
    }

    pub fn scalar(base: Base, v: Rsf) -> TensorField {
        TensorField { base, slots: Vec::new(), comps: vec![v], pweight: 0, cweight: 0, symmetries: Vec::new() }
    }

    pub fn from_components(base: Base, slots: Vec<Slot>, comps: Vec<Rsf>) -> Result<TensorField> {
        let len: usize = slots.iter().map(|s| s.dim).product();
        if comps.len() != len {
            return Err(Error::Shape(format!("expected {len} components, got {}", comps.len())));
        }
        Ok(TensorField { base, slots, comps, pweight: 0, cweight: 0, symmetries: Vec::new() })
    }

    /// Kronecker delta with one lower and one upper slot.
    pub fn delta(base: Base, lower: Slot) -> TensorField {
        let upper = Slot { space: lower.space.dual(), dim: lower.dim };
        TensorField::from_fn(base, vec![lower, upper], |i| if i[0] == i[1] { Rsf::one() } else { Rsf::zero() })
    }

    pub fn with_weights(mut self, pweight: i32, cweight: i32) -> TensorField {
        self.pweight = pweight;
        self.cweight = cweight;
        self
    }

    pub fn with_symmetry(mut self, slots: Vec<usize>, parity: Parity) -> TensorField {
        self.symmetries.push(SymmetryDecl { slots, parity });
        self
    }

    pub fn base(&self) -> Base {
        self.base
    }
    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }
    pub fn rank(&self) -> usize {
        self.slots.len()
    }
    pub fn components(&self) -> &[Rsf] {
        &self.comps
    }
    pub fn pweight(&self) -> i32 {
        self.pweight
    }
    pub fn cweight(&self) -> i32 {
        self.cweight
    }
    pub fn symmetries(&self) -> &[SymmetryDecl] {
        &self.symmetries
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        let mut off = 0;
        for (i, s) in idx.iter().zip(&self.slots) {
            debug_assert!(*i < s.dim);
            off = off * s.dim + i;
        }
        off
    }

    pub fn multi_index(&self, mut off: usize) -> Vec<usize> {
        let mut idx = vec![0; self.slots.len()];
        for k in (0..self.slots.len()).rev() {
            idx[k] = off % self.slots[k].dim;
            off /= self.slots[k].dim;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Rsf {
        &self.comps[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rsf) {
        let o = self.offset(idx);
        self.comps[o] = v;
    }

    pub fn value(&self) -> &Rsf {
        &self.comps[0]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Rsf::is_zero)
    }

    pub fn map<F: Fn(&Rsf) -> Rsf + Sync + Send>(&self, f: F) -> TensorField {
        let comps = par::map_range(self.comps.len(), |i| f(&self.comps[i]));
        TensorField { comps, ..self.clone_meta() }
    }

    fn clone_meta(&self) -> TensorField {
        TensorField {
            base: self.base,
            slots: self.slots.clone(),
            comps: Vec::new(),
            pweight: self.pweight,
            cweight: self.cweight,
            symmetries: self.symmetries.clone(),
        }
    }

    fn check_same_shape(&self, o: &TensorField) -> Result<()> {
        if self.slots != o.slots {
            return Err(Error::Shape(format!("slot mismatch {:?} vs {:?}", self.slots, o.slots)));
        }
        Ok(())
    }

    pub fn zip_with<F>(&self, o: &TensorField, f: F) -> Result<TensorField>
    where
        F: Fn(&Rsf, &Rsf) -> Rsf + Sync + Send,
    {
        self.check_same_shape(o)?;
        let comps = par::map_range(self.comps.len(), |i| f(&self.comps[i], &o.comps[i]));
        Ok(TensorField { comps, ..self.clone_meta() })
    }

    pub fn add(&self, o: &TensorField) -> Result<TensorField> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &TensorField) -> Result<TensorField> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rsf) -> TensorField {
        self.map(|a| a * c)
    }

    pub fn scale_q(&self, c: &Q) -> TensorField {
        self.map(|a| a.scale(c))
    }

    pub fn neg(&self) -> TensorField {
        self.map(|a| -a)
    }

    /// Tensor product; slots of `self` first. Weights add.
    pub fn outer(&self, o: &TensorField) -> TensorField {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&o.slots);
        let r = self.rank();
        let mut t = TensorField::from_fn(self.base.max_with(o.base), slots, |i| {
            self.get(&i[..r]) * o.get(&i[r..])
        });
        t.pweight = self.pweight + o.pweight;
        t.cweight = self.cweight + o.cweight;
        t
    }

    /// Trace over two slots of dual variance.
    pub fn contract(&self, i: usize, j: usize) -> Result<TensorField> {
        if i == j || i >= self.rank() || j >= self.rank() {
            return Err(Error::Shape(format!("bad contraction slots ({i},{j})")));
        }
        let (si, sj) = (self.slots[i], self.slots[j]);
        if si.dim != sj.dim || si.space.dual() != sj.space {
            return Err(Error::Shape(format!("slots {i} and {j} are not dual: {si:?} / {sj:?}")));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&k| k != i && k != j).collect();
        let slots: Vec<Slot> = keep.iter().map(|&k| self.slots[k]).collect();
        let mut t = TensorField::from_fn(self.base, slots, |idx| {
            let mut full = vec![0; self.rank()];
            for (p, &k) in keep.iter().enumerate() {
                full[k] = idx[p];
            }
            (0..si.dim)
                .map(|e| {
                    full[i] = e;
                    full[j] = e;
                    self.get(&full).clone()
                })
                .sum()
        });
        t.pweight = self.pweight;
        t.cweight = self.cweight;
        Ok(t)
    }

    /// Reorder slots: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<TensorField> {
        let r = self.rank();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p >= r || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Shape(format!("invalid permutation {perm:?}")));
        }
        let slots: Vec<Slot> = perm.iter().map(|&p| self.slots[p]).collect();
        let mut t = TensorField::from_fn(self.base, slots, |idx| {
            let mut old = vec![0; r];
            for (k, &p) in perm.iter().enumerate() {
                old[p] = idx[k];
            }
            self.get(&old).clone()
        });
        t.pweight = self.pweight;
        t.cweight = self.cweight;
        Ok(t)
    }

    /// Average over permutations of `group` (with sign for `Antisym`).
    pub fn symmetrize(&self, group: &[usize], parity: Parity) -> Result<TensorField> {
        if group.is_empty() || group.iter().any(|&g| g >= self.rank()) {
            return Err(Error::Shape(format!("bad slot group {group:?}")));
        }
        let s0 = self.slots[group[0]];
        if group.iter().any(|&g| self.slots[g] != s0) {
            return Err(Error::Shape("symmetrized slots must share space and dimension".into()));
        }
        let perms = permutations(group.len());
        let norm: Q = Q::from_integer(1.into()) / qi(perms.len() as i64);
        let mut t = TensorField::from_fn(self.base, self.slots.clone(), |idx| {
            let mut acc = Rsf::zero();
            let mut src = idx.to_vec();
            for (p, odd) in &perms {
                for (k, &g) in group.iter().enumerate() {
                    src[g] = idx[group[p[k]]];
                }
                let v = self.get(&src);
                acc = if parity == Parity::Antisym && *odd { acc - v } else { acc + v };
            }
            acc.scale(&norm)
        });
        t.pweight = self.pweight;
        t.cweight = self.cweight;
        t.symmetries = self.symmetries.clone();
        t.symmetries.push(SymmetryDecl { slots: group.to_vec(), parity });
        Ok(t)
    }

    /// Degree-`d` homogeneous part in the fibre variables.
    pub fn grade_in_p(&self, d: u32) -> Result<TensorField> {
        let parts: Result<Vec<Rsf>> = self.comps.iter().map(|c| c.grade_in_p(d)).collect();
        Ok(TensorField { comps: parts?, ..self.clone_meta() })
    }

    pub fn max_p_degree(&self) -> Result<u32> {
        let mut m = 0;
        for c in &self.comps {
            m = m.max(c.max_p_degree()?);
        }
        Ok(m)
    }

    /// True when no component depends on a fibre variable.
    pub fn depends_only_on_x(&self) -> bool {
        self.comps.iter().all(|c| !c.depends_on_fibre())
    }

    /// Component-wise check of every declared symmetry.
    pub fn check_symmetries(&self) -> bool {
        self.symmetries.iter().all(|d| match self.symmetrize(&d.slots, d.parity) {
            Ok(s) => s.comps == self.comps,
            Err(_) => false,
        })
    }

    /// Nonzero components as `[i,j,..]=value`, 1-based, joined by `; `.
    pub fn residual_string(&self) -> String {
        let mut out = Vec::new();
        for (off, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = self.multi_index(off);
            let label: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            out.push(format!("[{}]={}", label.join(","), c));
        }
        out.join("; ")
    }
}

impl Base {
    fn max_with(self, o: Base) -> Base {
        if self == Base::Mt || o == Base::Mt {
            Base::Mt
        } else {
            Base::M
        }
    }
}
