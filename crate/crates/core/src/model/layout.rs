//! Reduced real basis of the unknowns and of the residual.
//!
//! Unknowns are ordered `a, β, α` followed by the cosine/sine amplitudes of
//! `u1 (even cos), u2 (even sin), u3 (odd cos), v1 (even sin), v2 (even cos),
//! v3 (odd sin)` and `w` (even cos, then even sin), each with increasing `k`.
//! The residual uses the same layout with `η1, η2, γ` in the scalar slots and
//! `g, f, h` in the `u, v, w` blocks.

use serde::{Deserialize, Serialize};

use crate::rigor::{prod_up, root_up, sum_up, Cplx, Interval, Scalar};
use crate::series::{FourierSlice, SymClass, Weights};

/// A function-valued field of the unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    U(usize),
    V(usize),
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Cos,
    Sin,
}

/// One real coordinate of the reduced basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Entry {
    Scalar(usize),
    Mode { field: Field, basis: Basis, k: usize },
}

pub const FIELDS: [Field; 7] = [
    Field::U(0),
    Field::U(1),
    Field::U(2),
    Field::V(0),
    Field::V(1),
    Field::V(2),
    Field::W,
];

impl Field {
    pub fn class(self) -> SymClass {
        match self {
            Field::U(0) | Field::V(1) => SymClass::EVEN_COS,
            Field::U(1) | Field::V(0) => SymClass::EVEN_SIN,
            Field::U(2) => SymClass::ODD_COS,
            Field::V(2) => SymClass::ODD_SIN,
            Field::W => SymClass::EVEN_GENERAL,
            _ => unreachable!("three-component fields only"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::U(0) => "u1",
            Field::U(1) => "u2",
            Field::U(2) => "u3",
            Field::V(0) => "v1",
            Field::V(1) => "v2",
            Field::V(2) => "v3",
            Field::W => "w",
            _ => unreachable!(),
        }
    }

    /// Slot of the field in [`FIELDS`].
    pub fn slot(self) -> usize {
        match self {
            Field::U(i) => i,
            Field::V(i) => 3 + i,
            Field::W => 6,
        }
    }

    /// `(basis, k)` pairs in storage order for truncation order `kt`.
    fn modes(self, kt: usize) -> Vec<(Basis, usize)> {
        let cls = self.class();
        let ks = |start: usize| (start..=kt).step_by(2);
        let first = match cls.parity {
            crate::series::Parity::Odd => 1,
            _ => 0,
        };
        match self {
            Field::W => ks(0)
                .map(|k| (Basis::Cos, k))
                .chain(ks(2).map(|k| (Basis::Sin, k)))
                .collect(),
            _ => match cls.kind {
                crate::series::Kind::Cos => ks(first).map(|k| (Basis::Cos, k)).collect(),
                _ => ks(if first == 0 { 2 } else { 1 })
                    .map(|k| (Basis::Sin, k))
                    .collect(),
            },
        }
    }
}

/// Index map of the reduced real basis at truncation order `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    k: usize,
    entries: Vec<Entry>,
    /// Start offset of each field block, plus the total dimension.
    offsets: [usize; 8],
}

impl Layout {
    pub fn new(k: usize) -> Self {
        let mut entries = vec![Entry::Scalar(0), Entry::Scalar(1), Entry::Scalar(2)];
        let mut offsets = [0; 8];
        for (i, f) in FIELDS.iter().enumerate() {
            offsets[i] = entries.len();
            for (basis, k) in f.modes(k) {
                entries.push(Entry::Mode { field: *f, basis, k });
            }
        }
        offsets[7] = entries.len();
        Self { k, entries, offsets }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    #[inline]
    pub fn entry(&self, i: usize) -> Entry {
        self.entries[i]
    }

    /// Index range of a field block.
    pub fn block(&self, f: Field) -> std::ops::Range<usize> {
        let s = f.slot();
        self.offsets[s]..self.offsets[s + 1]
    }

    pub fn index(&self, f: Field, basis: Basis, k: usize) -> Option<usize> {
        if k > self.k {
            return None;
        }
        let r = self.block(f);
        let guess = match (f, basis) {
            (Field::W, Basis::Cos) => r.start + k / 2,
            (Field::W, Basis::Sin) if k >= 2 => r.start + self.k / 2 + k / 2,
            (Field::W, Basis::Sin) => return None,
            _ => r.start + k / 2 - usize::from(basis == Basis::Sin && k.is_multiple_of(2)),
        };
        let hit = r.contains(&guess)
            && matches!(self.entries[guess], Entry::Mode { basis: b, k: kk, .. } if b == basis && kk == k);
        hit.then_some(guess)
    }

    /// Fourier order of an entry (0 for scalars).
    pub fn order(&self, i: usize) -> usize {
        match self.entries[i] {
            Entry::Scalar(_) => 0,
            Entry::Mode { k, .. } => k,
        }
    }

    /// Embedding index of every entry into a larger layout.
    pub fn embed_into(&self, big: &Layout) -> Vec<usize> {
        assert!(big.k >= self.k);
        self.entries
            .iter()
            .map(|e| big.entries.iter().position(|x| x == e).expect("sub-layout"))
            .collect()
    }

    /// Complex coefficients of the fields of `x`.
    pub fn to_slices<T: Scalar>(&self, x: &[T]) -> Slices<T> {
        assert_eq!(x.len(), self.dim());
        let mut fields: Vec<FourierSlice<T>> = (0..7).map(|_| FourierSlice::zeros(self.k)).collect();
        let half = T::from_f64(0.5);
        for (i, e) in self.entries.iter().enumerate().skip(3) {
            let Entry::Mode { field, basis, k } = *e else { unreachable!() };
            let s = &mut fields[field.slot()];
            let k = k as i64;
            match (basis, k) {
                (Basis::Cos, 0) => s.add_at(0, Cplx::real(x[i])),
                (Basis::Cos, _) => {
                    s.add_at(k, Cplx::real(x[i] * half));
                    s.add_at(-k, Cplx::real(x[i] * half));
                }
                (Basis::Sin, _) => {
                    s.add_at(k, Cplx::new(T::zero(), -(x[i] * half)));
                    s.add_at(-k, Cplx::new(T::zero(), x[i] * half));
                }
            }
        }
        let mut it = fields.into_iter();
        let mut next = || it.next().unwrap();
        Slices {
            a: x[0],
            beta: x[1],
            alpha: x[2],
            u: [next(), next(), next()],
            v: [next(), next(), next()],
            w: next(),
        }
    }

    /// Real amplitudes of the entries of `field` read off a complex slice.
    /// Uses the symmetric combinations `φ_k ± φ_{-k}`, so any off-class
    /// content is projected away.
    pub fn read_field<T: Scalar>(&self, field: Field, s: &FourierSlice<T>, out: &mut [T]) {
        for i in self.block(field) {
            let Entry::Mode { basis, k, .. } = self.entries[i] else { unreachable!() };
            out[i] = amplitude(s, basis, k);
        }
    }

    /// Upper bound of the weighted norm of a slice vector.
    pub fn nu_norm_up<T: Scalar>(&self, x: &[T], w: &Weights) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            acc = sum_up(acc, x[i].mag());
        }
        for f in FIELDS {
            acc = sum_up(acc, self.field_norm_up(f, x, w));
        }
        acc
    }

    /// Weighted norm of one field block. For `w` the cosine and sine
    /// amplitudes of a mode combine as `sqrt(c² + s²) ν^k`, which is the
    /// exact contribution `(|φ_k| + |φ_{-k}|) ν^k`.
    pub fn field_norm_up<T: Scalar>(&self, f: Field, x: &[T], w: &Weights) -> f64 {
        let mut acc = 0.0;
        match f {
            Field::W => {
                for k in (0..=self.k).step_by(2) {
                    let c = self.index(Field::W, Basis::Cos, k).map_or(0.0, |i| x[i].mag());
                    let s = self.index(Field::W, Basis::Sin, k).map_or(0.0, |i| x[i].mag());
                    let m = pair_mag(c, s);
                    acc = sum_up(acc, prod_up(m, w.pow_up(k as i64)));
                }
            }
            _ => {
                for i in self.block(f) {
                    acc = sum_up(acc, prod_up(x[i].mag(), w.pow_up(self.order(i) as i64)));
                }
            }
        }
        acc
    }

    /// Norm weight of entry `i` for operator-norm column scaling.
    pub fn weight(&self, i: usize, w: &Weights) -> Interval {
        w.pow(self.order(i) as i64)
    }

    /// Partner of a `w` entry with the same `k` and the other basis.
    pub fn w_partner(&self, i: usize) -> Option<usize> {
        match self.entries[i] {
            Entry::Mode { field: Field::W, basis, k } if k > 0 => {
                let other = if basis == Basis::Cos { Basis::Sin } else { Basis::Cos };
                self.index(Field::W, other, k)
            }
            _ => None,
        }
    }

    /// Human-readable label of an entry, used in files.
    pub fn label(&self, i: usize) -> String {
        match self.entries[i] {
            Entry::Scalar(0) => "a".into(),
            Entry::Scalar(1) => "beta".into(),
            Entry::Scalar(_) => "alpha".into(),
            Entry::Mode { field, basis, k } => {
                let b = if basis == Basis::Cos { "cos" } else { "sin" };
                format!("{}:{b}:{k}", field.name())
            }
        }
    }
}

/// Upper bound of `sqrt(c² + s²)` for nonnegative `c`, `s`.
pub fn pair_mag(c: f64, s: f64) -> f64 {
    if s == 0.0 {
        c
    } else if c == 0.0 {
        s
    } else {
        root_up(sum_up(prod_up(c, c), prod_up(s, s)))
    }
}

/// Real amplitude of `basis·k` in a complex slice.
pub fn amplitude<T: Scalar>(s: &FourierSlice<T>, basis: Basis, k: usize) -> T {
    let k = k as i64;
    match (basis, k) {
        (Basis::Cos, 0) => s.get(0).re,
        (Basis::Cos, _) => s.get(k).re + s.get(-k).re,
        (Basis::Sin, _) => s.get(-k).im - s.get(k).im,
    }
}

/// The unknown (or residual) at a fixed parameter value, as complex slices.
#[derive(Clone, Debug)]
pub struct Slices<T> {
    pub a: T,
    pub beta: T,
    pub alpha: T,
    pub u: [FourierSlice<T>; 3],
    pub v: [FourierSlice<T>; 3],
    pub w: FourierSlice<T>,
}

impl<T: Scalar> Slices<T> {
    pub fn field(&self, f: Field) -> &FourierSlice<T> {
        match f {
            Field::U(i) => &self.u[i],
            Field::V(i) => &self.v[i],
            Field::W => &self.w,
        }
    }

    /// Reduced real vector on `layout`, discarding modes above its order.
    pub fn to_vec(&self, layout: &Layout) -> Vec<T> {
        let mut out = vec![T::zero(); layout.dim()];
        out[0] = self.a;
        out[1] = self.beta;
        out[2] = self.alpha;
        for f in FIELDS {
            layout.read_field(f, self.field(f), &mut out);
        }
        out
    }

    /// Largest Fourier order stored in any field.
    pub fn kmax(&self) -> usize {
        FIELDS.iter().map(|&f| self.field(f).kmax()).max().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_at_seventy() {
        let l = Layout::new(70);
        assert_eq!(l.dim(), 286);
        assert_eq!(l.block(Field::U(0)).len(), 36);
        assert_eq!(l.block(Field::U(1)).len(), 35);
        assert_eq!(l.block(Field::U(2)).len(), 35);
        assert_eq!(l.block(Field::W).len(), 71);
        assert_eq!(Layout::new(140).dim(), 566);
    }

    #[test]
    fn modes_respect_classes() {
        let l = Layout::new(9);
        for i in 3..l.dim() {
            let Entry::Mode { field, basis, k } = l.entry(i) else { panic!() };
            let c = field.class();
            assert!(c.parity.admits(k as i64));
            match c.kind {
                crate::series::Kind::Cos => assert_eq!(basis, Basis::Cos),
                crate::series::Kind::Sin => assert!(basis == Basis::Sin && k > 0),
                crate::series::Kind::General => assert!(basis == Basis::Cos || k > 0),
            }
        }
    }

    #[test]
    fn index_matches_entries() {
        for kt in [1, 2, 7, 10] {
            let l = Layout::new(kt);
            for i in 3..l.dim() {
                let Entry::Mode { field, basis, k } = l.entry(i) else { panic!() };
                assert_eq!(l.index(field, basis, k), Some(i));
            }
            for f in FIELDS {
                assert_eq!(l.index(f, Basis::Sin, 0), None);
                assert_eq!(l.index(f, Basis::Cos, kt + 1), None);
            }
        }
    }

    #[test]
    fn slices_round_trip() {
        let l = Layout::new(8);
        let x: Vec<f64> = (0..l.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
        let s = l.to_slices(&x);
        assert_eq!(s.to_vec(&l), x);
    }

    #[test]
    fn w_pair_norm_is_exact() {
        let l = Layout::new(4);
        let mut x = vec![0.0; l.dim()];
        x[l.index(Field::W, Basis::Cos, 2).unwrap()] = 3.0;
        x[l.index(Field::W, Basis::Sin, 2).unwrap()] = 4.0;
        let w = Weights::new(Interval::ONE, 8);
        let s = l.to_slices(&x);
        assert!((l.nu_norm_up(&x, &w) - 5.0).abs() < 1e-14);
        assert!((s.w.nu_norm_up(&w) - 5.0).abs() < 1e-14);
    }
}
