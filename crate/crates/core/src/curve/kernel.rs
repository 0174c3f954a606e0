//! Fast affine point count over `F_{q^m}` by a multiplicative walk.
//!
//! The affine count equals `q^2 * #{ s != 0 : Tr(s) = 0, Tr(c/s) = 0 }`
//! where `Tr` is the trace to `F_q`: `s = x^q - x` runs over the kernel of the
//! trace, hit `q` times each, and `y^q - y = c/s` has `q` solutions exactly
//! when `Tr(c/s) = 0`.
//!
//! The field is modelled as `F_p[X]/(f)` with `f` primitive, so `s = X^k` and
//! `1/s = X^-k` are stepped in `O(D)` digit operations. `Tr(y) = 0` is tested
//! as `absTr(lambda y) = 0` for `lambda` in a basis of `F_q`, each an `F_p`
//! linear functional on the digits.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::ff::{smallest_primitive, FieldCtx, FieldElem};

const CHUNK: u64 = 1 << 20;

pub(crate) struct TraceWalk {
    big: Arc<FieldCtx>,
    p: u64,
    dim: usize,
    /// Coefficients `f_0 .. f_{D-1}` of the primitive modulus.
    f: Vec<u64>,
    f0_inv: u64,
    /// Functionals that must vanish on `s`.
    on_s: Vec<Vec<u64>>,
    /// Functionals that must vanish on `1/s`.
    on_inv: Vec<Vec<u64>>,
}

impl TraceWalk {
    pub(crate) fn new(c: &FieldElem, m: usize) -> Result<Self> {
        let small = c.ctx();
        let p = small.p();
        let dim = small.degree() * m;
        let modulus = smallest_primitive(p, dim)?;
        let big = FieldCtx::new(p, dim, Some(modulus.clone()))?;
        let c_big = big.embed(c)?;

        // absTr(X^i) for i < D
        let mut abs_tr = Vec::with_capacity(dim);
        let mut xi = 1u64;
        let x = big.generator_raw();
        for _ in 0..dim {
            abs_tr.push(big.relative_trace_raw(xi, p, dim));
            xi = big.mul_raw(xi, x);
        }
        // functional y -> absTr(mu * y) as a digit vector
        let functional = |mu: u64| -> Vec<u64> {
            let mut out = Vec::with_capacity(dim);
            let mut xi = 1u64;
            let mut digits = vec![0u64; dim];
            for _ in 0..dim {
                big.unpack(big.mul_raw(mu, xi), &mut digits);
                let v = digits
                    .iter()
                    .zip(&abs_tr)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p);
                out.push(v);
                xi = big.mul_raw(xi, x);
            }
            out
        };
        let mut on_s = Vec::new();
        let mut on_inv = Vec::new();
        let w = small.generator_raw();
        for j in 0..small.degree() {
            let lambda = big.embed_raw(small, small.pow_raw(w, j as u64))?;
            on_s.push(functional(lambda));
            on_inv.push(functional(big.mul_raw(lambda, c_big.raw())));
        }
        let f: Vec<u64> = modulus[..dim].to_vec();
        let f0_inv = crate::ff::inv_mod_p(f[0], p);
        Ok(TraceWalk {
            big,
            p,
            dim,
            f,
            f0_inv,
            on_s,
            on_inv,
        })
    }

    /// Number of `s = X^k`, `0 <= k < p^D - 1`, passing both trace tests.
    pub(crate) fn count(&self) -> u64 {
        let n = self.big.size() - 1;
        let chunks: Vec<(u64, u64)> = (0..n)
            .step_by(CHUNK as usize)
            .map(|start| (start, (start + CHUNK).min(n)))
            .collect();
        chunks
            .par_iter()
            .map(|&(start, end)| {
                if self.p == 2 {
                    self.count_range_binary(start, end)
                } else {
                    self.count_range(start, end)
                }
            })
            .sum()
    }

    fn start_points(&self, k: u64) -> (u64, u64) {
        let x = self.big.generator_raw();
        let xk = self.big.pow_raw(x, k);
        let x_inv_k = self.big.inv_raw(xk).expect("X is a unit");
        (xk, x_inv_k)
    }

    fn count_range(&self, start: u64, end: u64) -> u64 {
        let (p, dim) = (self.p, self.dim);
        let (s0, r0) = self.start_points(start);
        let mut s = vec![0u64; dim];
        let mut r = vec![0u64; dim];
        self.big.unpack(s0, &mut s);
        self.big.unpack(r0, &mut r);
        let dot = |v: &[u64], w: &[u64]| v.iter().zip(w).fold(0u64, |a, (&x, &y)| a + x * y) % p;
        let mut hits = 0u64;
        for _ in start..end {
            if self.on_s.iter().all(|w| dot(&s, w) == 0) && self.on_inv.iter().all(|w| dot(&r, w) == 0) {
                hits += 1;
            }
            // s <- s * X
            let top = s[dim - 1];
            for i in (1..dim).rev() {
                s[i] = s[i - 1];
            }
            s[0] = 0;
            if top != 0 {
                for i in 0..dim {
                    s[i] = (s[i] + p * p - top * self.f[i]) % p;
                }
            }
            // r <- r / X: subtract a multiple of f to clear the constant term
            let low = r[0];
            let k = low * self.f0_inv % p;
            let mut carry = 0u64;
            if k != 0 {
                for i in 0..dim {
                    r[i] = (r[i] + p * p - k * self.f[i]) % p;
                }
                carry = (p - k) % p;
            }
            for i in 0..dim - 1 {
                r[i] = r[i + 1];
            }
            r[dim - 1] = carry;
        }
        hits
    }

    fn count_range_binary(&self, start: u64, end: u64) -> u64 {
        let dim = self.dim;
        let (mut s, mut r) = self.start_points(start);
        let fbits = self
            .f
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (c << i))
            | (1 << dim);
        let mask = |w: &Vec<u64>| w.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i));
        let on_s: Vec<u64> = self.on_s.iter().map(mask).collect();
        let on_inv: Vec<u64> = self.on_inv.iter().map(mask).collect();
        let mut hits = 0u64;
        for _ in start..end {
            if on_s.iter().all(|&w| (s & w).count_ones() & 1 == 0)
                && on_inv.iter().all(|&w| (r & w).count_ones() & 1 == 0)
            {
                hits += 1;
            }
            s <<= 1;
            if s >> dim & 1 == 1 {
                s ^= fbits;
            }
            if r & 1 == 1 {
                r ^= fbits;
            }
            r >>= 1;
        }
        hits
    }
}
