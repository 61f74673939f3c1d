//! Sparse multivariate polynomials over Q with a fixed variable layout.
//!
//! Variables live in fixed slots: `x1..x6` occupy slots 0..6 and `p1..p6`
//! occupy slots 6..12. Terms are kept strictly descending in graded
//! lexicographic order, so structural equality is value equality and the
//! printed form is canonical.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficient.
pub type Q = BigRational;

/// Largest supported base dimension.
pub const MAX_DIM: usize = 6;
/// Number of variable slots (base coordinates plus fibre coordinates).
pub const NVARS: usize = 2 * MAX_DIM;

/// Build a rational from a numerator and denominator.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integer rational.
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// A coordinate variable, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u8),
    P(u8),
}

impl Var {
    pub fn slot(self) -> usize {
        match self {
            Var::X(i) => i as usize - 1,
            Var::P(i) => MAX_DIM + i as usize - 1,
        }
    }

    pub fn from_slot(slot: usize) -> Var {
        if slot < MAX_DIM {
            Var::X(slot as u8 + 1)
        } else {
            Var::P((slot - MAX_DIM) as u8 + 1)
        }
    }

    pub fn index(self) -> usize {
        match self {
            Var::X(i) | Var::P(i) => i as usize,
        }
    }

    pub fn is_fibre(self) -> bool {
        matches!(self, Var::P(_))
    }

    pub fn name(self) -> String {
        match self {
            Var::X(i) => format!("x{i}"),
            Var::P(i) => format!("p{i}"),
        }
    }

    /// Parse `x3`, `x_3`, `p2` or `p_2`.
    pub fn parse(name: &str) -> Option<Var> {
        let (head, rest) = name.split_at(name.len().min(1));
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let i: usize = rest.parse().ok()?;
        if i == 0 || i > MAX_DIM {
            return None;
        }
        match head {
            "x" => Some(Var::X(i as u8)),
            "p" => Some(Var::P(i as u8)),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Bit mask of all fibre slots.
pub const FIBRE_MASK: u32 = ((1u32 << MAX_DIM) - 1) << MAX_DIM;

/// Exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; NVARS])
    }

    pub fn var(slot: usize) -> Mono {
        let mut e = [0; NVARS];
        e[slot] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Total degree restricted to the slots in `mask`.
    pub fn degree_in(&self, mask: u32) -> u32 {
        (0..NVARS)
            .filter(|s| mask & (1 << s) != 0)
            .map(|s| self.0[s] as u32)
            .sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Mono(e)
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            if *a < *b {
                return None;
            }
            *a -= *b;
        }
        Some(Mono(e))
    }

    pub fn mask(&self) -> u32 {
        let mut m = 0;
        for (s, &e) in self.0.iter().enumerate() {
            if e > 0 {
                m |= 1 << s;
            }
        }
        m
    }

    fn with(&self, slot: usize, e: u16) -> Mono {
        let mut m = self.0;
        m[slot] = e;
        Mono(m)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial with terms sorted strictly descending by grlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Mono, Q)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(v: Var) -> Poly {
        Poly { terms: vec![(Mono::var(v.slot()), Q::one())] }
    }

    pub fn monomial(m: Mono, c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collect arbitrary terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, Q)>) -> Poly {
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Mono, Q)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Mono::one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Mono::one() && self.terms[0].1.is_one()
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Q)> {
        self.terms.first()
    }

    pub fn var_mask(&self) -> u32 {
        self.terms.iter().fold(0, |m, (mo, _)| m | mo.mask())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, -a)).collect() }
    }

    fn merge(&self, o: &Poly, sign: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if sign { b[j].1.clone() } else { -b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if sign { t.1.clone() } else { -t.1.clone() };
            out.push((t.0, c));
        }
        Poly { terms: out }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.is_constant() {
            return o.scale(&self.terms[0].1);
        }
        if o.is_constant() {
            return self.scale(&o.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to a slot.
    pub fn derivative(&self, slot: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[slot] > 0)
            .map(|(m, c)| {
                let e = m.0[slot];
                (m.with(slot, e - 1), c * qi(e as i64))
            })
            .collect();
        Poly::from_terms(terms)
    }

    pub fn degree_in_slot(&self, slot: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.0[slot]).max().unwrap_or(0)
    }

    /// Coefficients with respect to one slot, indexed by power.
    pub fn coeffs_in(&self, slot: usize) -> Vec<Poly> {
        let d = self.degree_in_slot(slot) as usize;
        let mut buckets: Vec<Vec<(Mono, Q)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.0[slot] as usize].push((m.with(slot, 0), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    fn lc_in(&self, slot: usize) -> Poly {
        let d = self.degree_in_slot(slot);
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.0[slot] == d)
                .map(|(m, c)| (m.with(slot, 0), c.clone()))
                .collect(),
        )
    }

    fn shift(&self, slot: usize, e: u16) -> Poly {
        if e == 0 {
            return self.clone();
        }
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.with(slot, m.0[slot] + e), c.clone()))
                .collect(),
        )
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.terms[0].clone();
        let dinv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            let m = rm.div(&dm)?;
            let c = &rc * &dinv;
            rem = rem.sub(&d.mul(&Poly::monomial(m, c.clone())));
            quot.push((m, c));
        }
        Some(Poly::from_terms(quot))
    }

    /// Replace a variable by a polynomial.
    pub fn substitute(&self, slot: usize, val: &Poly) -> Poly {
        let cs = self.coeffs_in(slot);
        let mut acc = Poly::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(val).add(c);
        }
        acc
    }

    /// Keep only terms whose degree in the slots of `mask` equals `d`.
    pub fn graded_part(&self, mask: u32, d: u32) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| m.degree_in(mask) == d).cloned().collect(),
        }
    }

    pub fn max_degree_in(&self, mask: u32) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(mask)).max().unwrap_or(0)
    }
}

fn highest_slot(mask: u32) -> usize {
    31 - mask.leading_zeros() as usize
}

fn content_in(a: &Poly, slot: usize) -> Poly {
    let mut g = Poly::zero();
    for c in a.coeffs_in(slot) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(a: &Poly, slot: usize) -> Poly {
    let c = content_in(a, slot);
    a.exact_div(&c).expect("content divides").monic()
}

fn prem(a: &Poly, b: &Poly, slot: usize) -> Poly {
    let db = b.degree_in_slot(slot);
    let lb = b.lc_in(slot);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in_slot(slot) >= db {
        let dr = r.degree_in_slot(slot);
        let lr = r.lc_in(slot);
        r = lb.mul(&r).sub(&lr.mul(&b.shift(slot, dr - db)));
    }
    r
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let (ma, mb) = (a.var_mask(), b.var_mask());
    let slot = highest_slot(ma | mb);
    if ma & (1 << slot) == 0 {
        return gcd(a, &content_in(b, slot));
    }
    if mb & (1 << slot) == 0 {
        return gcd(&content_in(a, slot), b);
    }
    let ca = content_in(a, slot);
    let cb = content_in(b, slot);
    let cont = gcd(&ca, &cb);
    let mut r0 = a.exact_div(&ca).expect("content divides");
    let mut r1 = b.exact_div(&cb).expect("content divides");
    if r0.degree_in_slot(slot) < r1.degree_in_slot(slot) {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        let r = prem(&r0, &r1, slot);
        if r.is_zero() {
            break;
        }
        if r.degree_in_slot(slot) == 0 {
            r1 = Poly::one();
            break;
        }
        r0 = r1;
        r1 = primitive_in(&r, slot);
    }
    cont.mul(&primitive_in(&r1, slot)).monic()
}

fn fmt_coeff(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_mono(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (s, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(Var::from_slot(s).name()),
            _ => parts.push(format!("{}^{}", Var::from_slot(s).name(), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let body = if *m == Mono::one() {
                fmt_coeff(&a)
            } else if a.is_one() {
                fmt_mono(m)
            } else {
                format!("{}*{}", fmt_coeff(&a), fmt_mono(m))
            };
            f.write_str(&body)?;
        }
        Ok(())
    }
}
