use super::surd::Surd;
use crate::error::{Error, Result};
use crate::symcore::q;

/// Chirality of a spinor; `Plus` is the even part of the exterior algebra,
/// so `chi = 1` lies in `S_+` for every `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Plus,
    Minus,
    Full,
}

impl Chirality {
    fn of(mask: usize) -> Chirality {
        if mask.count_ones().is_multiple_of(2) {
            Chirality::Plus
        } else {
            Chirality::Minus
        }
    }
}

/// Spinor (or dual spinor) field: components on the basis `e_S` of
/// `Lambda(R^n)`, indexed by bitmask `S`. A dual spinor stores its values on
/// the basis elements. Equality ignores the conformal weight.
#[derive(Clone, Debug)]
pub struct Spinor {
    comps: Vec<Surd>,
    dual: bool,
    cweight: i32,
}

impl PartialEq for Spinor {
    fn eq(&self, o: &Spinor) -> bool {
        self.dual == o.dual && self.comps == o.comps
    }
}

impl Spinor {
    pub fn zeros(n: usize, dual: bool) -> Spinor {
        Spinor { comps: vec![Surd::zero(); 1 << n], dual, cweight: 0 }
    }
    pub fn basis(n: usize, mask: usize, dual: bool) -> Spinor {
        let mut s = Spinor::zeros(n, dual);
        s.comps[mask] = Surd::one();
        s
    }
    pub fn from_components(comps: Vec<Surd>, dual: bool) -> Spinor {
        assert!(comps.len().is_power_of_two());
        Spinor { comps, dual, cweight: 0 }
    }
    pub fn with_cweight(mut self, w: i32) -> Spinor {
        self.cweight = w;
        self
    }
    pub fn cweight(&self) -> i32 {
        self.cweight
    }
    pub fn is_dual(&self) -> bool {
        self.dual
    }
    pub fn n(&self) -> usize {
        self.comps.len().trailing_zeros() as usize
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn get(&self, mask: usize) -> &Surd {
        &self.comps[mask]
    }
    pub fn set(&mut self, mask: usize, v: Surd) {
        self.comps[mask] = v;
    }
    pub fn components(&self) -> &[Surd] {
        &self.comps
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Surd::is_zero)
    }
    /// `Full` if both parities occur (the zero spinor reports `Plus`).
    pub fn chirality(&self) -> Chirality {
        let mut seen = None;
        for (m, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ch = Chirality::of(m);
            match seen {
                None => seen = Some(ch),
                Some(s) if s != ch => return Chirality::Full,
                _ => {}
            }
        }
        seen.unwrap_or(Chirality::Plus)
    }
    /// Keep only the components of one parity.
    pub fn restrict(&self, ch: Chirality) -> Spinor {
        let mut out = self.clone();
        for (m, c) in out.comps.iter_mut().enumerate() {
            if ch != Chirality::Full && Chirality::of(m) != ch {
                *c = Surd::zero();
            }
        }
        out
    }
    pub fn map(&self, f: impl Fn(&Surd) -> Surd) -> Spinor {
        Spinor { comps: self.comps.iter().map(f).collect(), dual: self.dual, cweight: self.cweight }
    }
    pub fn add(&self, o: &Spinor) -> Spinor {
        debug_assert_eq!(self.dual, o.dual);
        Spinor { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(), dual: self.dual, cweight: self.cweight }
    }
    pub fn sub(&self, o: &Spinor) -> Spinor {
        self.add(&o.scale(&Surd::from(-1)))
    }
    pub fn scale(&self, c: &Surd) -> Spinor {
        self.map(|x| x * c)
    }
    /// `lambda(psi)` for a dual spinor `self`.
    pub fn pair(&self, psi: &Spinor) -> Surd {
        debug_assert!(self.dual && !psi.dual);
        self.comps.iter().zip(&psi.comps).map(|(a, b)| a * b).sum()
    }
}

impl std::fmt::Display for Spinor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let label: Vec<String> = (0..self.n()).filter(|k| m >> k & 1 == 1).map(|k| (k + 1).to_string()).collect();
            parts.push(format!("e{{{}}}={}", label.join(""), c));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Spinor module of `Spin(n,n)` on `Lambda(R^n)`: `h_A` acts by
/// `sqrt2 e_A ^`, `v^A` by `-sqrt2 i_A`.
#[derive(Clone, Debug)]
pub struct CliffordModule {
    n: usize,
}

impl CliffordModule {
    pub fn new(n: usize) -> Result<CliffordModule> {
        if !(2..=6).contains(&n) {
            return Err(Error::Dimension(n));
        }
        Ok(CliffordModule { n })
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn spinor_dim(&self) -> usize {
        1 << self.n
    }

    /// Frame metric `G(e_a, e_b)`.
    pub fn metric(&self, a: usize, b: usize) -> i64 {
        let n = self.n;
        ((a < n && b == a + n) || (b < n && a == b + n)) as i64
    }

    /// `gamma^a = G^{ab} gamma_b` is `gamma_{partner(a)}`.
    pub fn raised(&self, a: usize) -> usize {
        if a < self.n {
            a + self.n
        } else {
            a - self.n
        }
    }

    /// Image of `e_S` under `gamma_a`: a signed basis element or zero.
    pub fn gamma_basis(&self, a: usize, mask: usize) -> Option<(usize, i64)> {
        let n = self.n;
        let k = if a < n { a } else { a - n };
        let bit = 1 << k;
        let sign = if (mask & (bit - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
        match (a < n, mask & bit != 0) {
            (true, false) => Some((mask | bit, sign)),
            (false, true) => Some((mask & !bit, -sign)),
            _ => None,
        }
    }

    /// `gamma_a psi`, or `lambda o gamma_a` for a dual spinor.
    pub fn gamma(&self, a: usize, psi: &Spinor) -> Spinor {
        let mut out = Spinor::zeros(self.n, psi.dual).with_cweight(psi.cweight);
        let s2 = Surd::sqrt2();
        for mask in 0..self.spinor_dim() {
            let Some((img, sign)) = self.gamma_basis(a, mask) else { continue };
            let c = s2.scale(&q(sign, 1));
            if psi.dual {
                // (lambda o gamma)(e_S) = lambda(gamma e_S)
                let v = psi.get(img);
                if !v.is_zero() {
                    out.comps[mask] = &out.comps[mask] + &(v * &c);
                }
            } else {
                let v = psi.get(mask);
                if !v.is_zero() {
                    out.comps[img] = &out.comps[img] + &(v * &c);
                }
            }
        }
        out
    }

    /// `gamma^a gamma^b psi` (both raised), applied in the order that makes it
    /// the Clifford product acting on `psi`; for dual spinors
    /// `lambda o gamma^a gamma^b`.
    pub fn gamma_raised_pair(&self, a: usize, b: usize, psi: &Spinor) -> Spinor {
        let (ra, rb) = (self.raised(a), self.raised(b));
        if psi.dual {
            self.gamma(rb, &self.gamma(ra, psi))
        } else {
            self.gamma(ra, &self.gamma(rb, psi))
        }
    }

    /// `gamma_a gamma_b + gamma_b gamma_a + 2 G_ab` on every basis spinor;
    /// returns the first failing `(a, b, mask)`.
    pub fn clifford_defect(&self) -> Option<(usize, usize, usize)> {
        let dim = 2 * self.n;
        for a in 0..dim {
            for b in 0..dim {
                for mask in 0..self.spinor_dim() {
                    let e = Spinor::basis(self.n, mask, false);
                    let lhs = self.gamma(a, &self.gamma(b, &e)).add(&self.gamma(b, &self.gamma(a, &e)));
                    let expect = e.scale(&Surd::from(-2 * self.metric(a, b)));
                    if lhs != expect {
                        return Some((a, b, mask));
                    }
                }
            }
        }
        None
    }

    /// Every `gamma_a` moves exterior degree by `+1` (horizontal) or `-1`
    /// (vertical).
    pub fn degree_shift_holds(&self) -> bool {
        (0..2 * self.n).all(|a| {
            (0..self.spinor_dim()).all(|m| match self.gamma_basis(a, m) {
                None => true,
                Some((img, _)) => {
                    let (d0, d1) = (m.count_ones() as i64, img.count_ones() as i64);
                    d1 - d0 == if a < self.n { 1 } else { -1 }
                }
            })
        })
    }
}

/// Rank over `Q(sqrt2)` of a matrix of constant or rational-function entries.
pub fn surd_rank(mut rows: Vec<Vec<Surd>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        let pivot: Vec<Surd> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, pv) in row.iter_mut().zip(&pivot) {
                *x = &*x - &(&f * pv);
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}
