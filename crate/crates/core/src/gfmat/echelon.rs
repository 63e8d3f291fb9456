//! Incremental reduced column echelon form.
//!
//! Each stored column has a pivot: its lowest nonzero row, with entry 1.
//! Every other stored column is zero in that row. This makes the sorted
//! column encodings a canonical name for the span.

use smallvec::SmallVec;

use crate::gfmat::field::{Digits, Space};

#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    space: Space,
    generic: bool,
    cols: SmallVec<[u64; 8]>,
    pivots: SmallVec<[u32; 8]>,
}

impl Echelon {
    pub(crate) fn new(space: Space) -> Self {
        Echelon {
            space,
            generic: !space.q().is_binary(),
            cols: SmallVec::new(),
            pivots: SmallVec::new(),
        }
    }

    /// Always use the digit-wise path, also for `q = 2`. Used to check the
    /// bit-packed path against the generic one.
    #[cfg(test)]
    pub(crate) fn new_generic(space: Space) -> Self {
        Echelon {
            generic: true,
            ..Echelon::new(space)
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Reduce `v` modulo the current span. The result is zero iff `v` lies
    /// in the span.
    #[inline]
    pub(crate) fn reduce(&self, v: u64) -> u64 {
        if !self.generic {
            let mut v = v;
            for (&b, &p) in self.cols.iter().zip(&self.pivots) {
                if (v >> p) & 1 == 1 {
                    v ^= b;
                }
            }
            v
        } else {
            let mut dv = self.space.digits(v);
            for (&b, &p) in self.cols.iter().zip(&self.pivots) {
                let c = dv[p as usize];
                if c != 0 {
                    self.sub_scaled(&mut dv, c, &self.space.digits(b));
                }
            }
            self.space.from_digits(&dv)
        }
    }

    /// Insert `v`; returns false if it was already in the span.
    pub(crate) fn insert(&mut self, v: u64) -> bool {
        if !self.generic {
            let v = self.reduce(v);
            if v == 0 {
                return false;
            }
            let p = v.trailing_zeros();
            for b in self.cols.iter_mut() {
                if (*b >> p) & 1 == 1 {
                    *b ^= v;
                }
            }
            self.cols.push(v);
            self.pivots.push(p);
            true
        } else {
            let q = self.space.q();
            let mut dv = self.space.digits(self.reduce(v));
            let Some(p) = dv.iter().position(|&x| x != 0) else {
                return false;
            };
            let inv = q.inv(dv[p]);
            for x in dv.iter_mut() {
                *x = q.mul(*x, inv);
            }
            for b in self.cols.iter_mut() {
                let mut db = self.space.digits(*b);
                let c = db[p];
                if c != 0 {
                    sub_scaled_with(q, &mut db, c, &dv);
                    *b = self.space.from_digits(&db);
                }
            }
            self.cols.push(self.space.from_digits(&dv));
            self.pivots.push(p as u32);
            true
        }
    }

    fn sub_scaled(&self, target: &mut Digits, c: u32, v: &Digits) {
        sub_scaled_with(self.space.q(), target, c, v)
    }

    /// Sorted canonical column encodings.
    pub(crate) fn into_sorted(self) -> SmallVec<[u64; 8]> {
        let mut cols = self.cols;
        cols.sort_unstable();
        cols
    }
}

fn sub_scaled_with(q: crate::gfmat::FieldOrder, target: &mut Digits, c: u32, v: &Digits) {
    for (t, &x) in target.iter_mut().zip(v.iter()) {
        *t = q.sub(*t, q.mul(c, x));
    }
}
