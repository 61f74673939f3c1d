use crate::error::{Error, Result};
use crate::symcore::{Base, Rsf, Slot, Space, TensorField, Var, MAX_DIM};

/// Torsion-free connection on an `n`-dimensional chart together with a
/// volume form `vol * dx^1 ^ ... ^ dx^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineConnection {
    n: usize,
    /// `gamma[a][c][b]` = coefficient of `D_a` acting on `v^c` through `v^b`.
    gamma: TensorField,
    volume: Rsf,
}

pub(crate) fn xvar(a: usize) -> Var {
    Var::X(a as u8 + 1)
}

pub(crate) fn pvar(a: usize) -> Var {
    Var::P(a as u8 + 1)
}

/// Sign of the permutation `idx` of `0..n`, or zero if an index repeats.
pub fn levi_civita(idx: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

impl AffineConnection {
    pub fn new(n: usize, gamma: TensorField, volume: Rsf) -> Result<AffineConnection> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::Dimension(n));
        }
        let want = vec![Slot::down(n), Slot::up(n), Slot::down(n)];
        if gamma.slots() != want.as_slice() {
            return Err(Error::Shape(format!("connection symbols must have slots {want:?}")));
        }
        if !gamma.depends_only_on_x() || volume.depends_on_fibre() {
            return Err(Error::Shape("connection data may only depend on x".into()));
        }
        for a in 0..n {
            for c in 0..n {
                for b in 0..a {
                    if gamma.get(&[a, c, b]) != gamma.get(&[b, c, a]) {
                        return Err(Error::Precondition(format!(
                            "connection has torsion: Gamma_{}^{}_{} != Gamma_{}^{}_{}",
                            a + 1,
                            c + 1,
                            b + 1,
                            b + 1,
                            c + 1,
                            a + 1
                        )));
                    }
                }
            }
        }
        if volume.is_zero() {
            return Err(Error::Precondition("volume form vanishes".into()));
        }
        Ok(AffineConnection { n, gamma, volume })
    }

    /// Build from `(a, c, b, value)` entries (0-based); the `(b, c, a)` entry
    /// is filled symmetrically. Unlisted symbols are zero.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, Rsf)], volume: Rsf) -> Result<AffineConnection> {
        let mut g = TensorField::zeros(Base::M, vec![Slot::down(n), Slot::up(n), Slot::down(n)]);
        for (a, c, b, v) in entries {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::Shape(format!("symbol index out of range for n = {n}")));
            }
            g.set(&[*a, *c, *b], v.clone());
            g.set(&[*b, *c, *a], v.clone());
        }
        AffineConnection::new(n, g, volume)
    }

    pub fn flat(n: usize) -> AffineConnection {
        AffineConnection::from_entries(n, &[], Rsf::one()).expect("flat connection")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &TensorField {
        &self.gamma
    }

    pub fn g(&self, a: usize, c: usize, b: usize) -> &Rsf {
        self.gamma.get(&[a, c, b])
    }

    pub fn volume(&self) -> &Rsf {
        &self.volume
    }

    /// `Gamma_a^c_c`.
    pub fn trace(&self, a: usize) -> Rsf {
        (0..self.n).map(|c| self.g(a, c, c).clone()).sum()
    }

    /// `d_a log vol`.
    pub fn volume_log_derivative(&self, a: usize) -> Rsf {
        &self.volume.partial(xvar(a)) / &self.volume
    }

    /// The connection preserves its volume form.
    pub fn is_special(&self) -> bool {
        (0..self.n).all(|a| self.trace(a) == self.volume_log_derivative(a))
    }

    /// Trace defect `Gamma_a^c_c - d_a log vol`, formatted for messages.
    pub fn special_defect(&self) -> String {
        let parts: Vec<String> =
            (0..self.n).map(|a| (self.trace(a) - self.volume_log_derivative(a)).to_string()).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn require_special(&self) -> Result<()> {
        if self.is_special() {
            Ok(())
        } else {
            Err(Error::NotSpecial(self.special_defect()))
        }
    }

    /// Totally antisymmetric `eps_{A1..An}` with `eps_{1..n} = vol`.
    pub fn volume_form(&self) -> TensorField {
        let n = self.n;
        let v = self.volume.clone();
        TensorField::from_fn(Base::M, vec![Slot::down(n); n], |i| match levi_civita(i) {
            0 => Rsf::zero(),
            s => v.scale(&crate::symcore::qi(s)),
        })
    }

    /// Inverse `eps^{A1..An}` with `eps^{1..n} = 1/vol`.
    pub fn inverse_volume_form(&self) -> TensorField {
        let n = self.n;
        let v = self.volume.inv().expect("nonzero volume");
        TensorField::from_fn(Base::M, vec![Slot::up(n); n], |i| match levi_civita(i) {
            0 => Rsf::zero(),
            s => v.scale(&crate::symcore::qi(s)),
        })
    }

    /// Covariant derivative; the new derivative slot comes first. Densities of
    /// projective weight `w` pick up `(w/(n+1)) (Gamma_a^c_c - d_a log vol)`,
    /// which is the term making the projective volume form parallel.
    pub fn covariant_derivative(&self, t: &TensorField) -> Result<TensorField> {
        let n = self.n;
        for s in t.slots() {
            if s.dim != n || !matches!(s.space, Space::TangentM | Space::CotangentM) {
                return Err(Error::Shape(format!("covariant derivative on M needs base slots, got {s:?}")));
            }
        }
        let w = t.pweight();
        let weight_terms: Vec<Rsf> = (0..n)
            .map(|a| {
                if w == 0 {
                    Rsf::zero()
                } else {
                    (self.trace(a) - self.volume_log_derivative(a)).scale(&crate::symcore::q(w as i64, n as i64 + 1))
                }
            })
            .collect();
        let mut slots = vec![Slot::down(n)];
        slots.extend_from_slice(t.slots());
        let upper: Vec<bool> = t.slots().iter().map(|s| s.is_upper()).collect();
        let out = TensorField::from_fn(t.base(), slots, |idx| {
            let a = idx[0];
            let rest = &idx[1..];
            let mut acc = t.get(rest).partial(xvar(a));
            let mut tmp = rest.to_vec();
            for (k, &up) in upper.iter().enumerate() {
                let orig = rest[k];
                for e in 0..n {
                    tmp[k] = e;
                    let tv = t.get(&tmp);
                    if tv.is_zero() {
                        continue;
                    }
                    if up {
                        acc = acc + self.g(a, orig, e) * tv;
                    } else {
                        acc = acc - self.g(a, e, orig) * tv;
                    }
                }
                tmp[k] = orig;
            }
            if w != 0 {
                acc = acc + &weight_terms[a] * t.get(rest);
            }
            acc
        });
        Ok(out.with_weights(t.pweight(), t.cweight()))
    }
}
