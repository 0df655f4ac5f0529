//! Truncated multivariate formal power series.
//!
//! A series holds coefficients for all monomials of total degree `<= trunc`;
//! every arithmetic operation drops what lies beyond the truncation degree.
//! Storage is a sparse map ordered graded-lex, so iteration and serialization
//! are deterministic.

use crate::multiindex::Multiindex;
use crate::scalar::Coeff;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("dimension mismatch: {0} vs {1} variables")]
    Dimension(usize, usize),
    #[error("truncation mismatch: {0} vs {1}")]
    Truncation(u32, u32),
    #[error("constant term must be zero for this operation")]
    NonzeroConstant,
    #[error("constant term is zero, series not invertible")]
    ZeroConstant,
    #[error("no {0}-th root of the constant term in this backend")]
    RootBranch(u32),
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<K: Coeff> {
    n: usize,
    trunc: u32,
    coeffs: BTreeMap<Multiindex, K>,
}

impl<K: Coeff> TruncatedSeries<K> {
    pub fn zero(n: usize, trunc: u32) -> Self {
        TruncatedSeries {
            n,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, trunc: u32, c: K) -> Self {
        let mut s = Self::zero(n, trunc);
        s.set(Multiindex::zero(n), c);
        s
    }

    /// The coordinate series `x_j`.
    pub fn var(n: usize, trunc: u32, j: usize) -> Self {
        let mut s = Self::zero(n, trunc);
        s.set(Multiindex::unit(n, j), K::one());
        s
    }

    pub fn monomial(n: usize, trunc: u32, exp: Multiindex, c: K) -> Self {
        let mut s = Self::zero(n, trunc);
        s.set(exp, c);
        s
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Multiindex) -> K {
        self.coeffs.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&Multiindex::zero(self.n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Multiindex, &K)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Insert or replace one coefficient; drops stored zeros and overflow degrees.
    pub fn set(&mut self, m: Multiindex, c: K) {
        debug_assert_eq!(m.len(), self.n);
        if m.degree() > self.trunc {
            return;
        }
        if c.is_zero() || c.abs() < K::drop_threshold() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }

    pub fn add_to(&mut self, m: Multiindex, c: K) {
        if m.degree() > self.trunc {
            return;
        }
        let cur = self.coeff(&m);
        self.set(m, cur.add(&c));
    }

    fn assert_compatible(&self, o: &Self) {
        assert_eq!(self.n, o.n, "series dimension mismatch");
        assert_eq!(self.trunc, o.trunc, "series truncation mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.assert_compatible(o);
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_to(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.assert_compatible(o);
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_to(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (m, c) in &self.coeffs {
            out.set(m.clone(), c.mul(k));
        }
        out
    }

    /// Cauchy product truncated at the working degree.
    pub fn mul(&self, o: &Self) -> Self {
        self.assert_compatible(o);
        let mut out = Self::zero(self.n, self.trunc);
        for (ma, ca) in &self.coeffs {
            let da = ma.degree();
            for (mb, cb) in &o.coeffs {
                if da + mb.degree() > self.trunc {
                    continue;
                }
                out.add_to(ma.add(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Multiindex, c: &K) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        let dm = m.degree();
        for (ma, ca) in &self.coeffs {
            if ma.degree() + dm > self.trunc {
                continue;
            }
            out.set(ma.add(m), ca.mul(c));
        }
        out
    }

    /// Keep only terms of exact degree `d`.
    pub fn degree_slice(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (m, c) in &self.coeffs {
            if m.degree() == d {
                out.set(m.clone(), c.clone());
            }
        }
        out
    }

    /// Drop all terms of degree > `d` (truncation bound unchanged).
    pub fn truncate_degree(&self, d: u32) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (m, c) in &self.coeffs {
            if m.degree() <= d {
                out.set(m.clone(), c.clone());
            }
        }
        out
    }

    /// Re-truncate to a new working degree.
    pub fn with_trunc(&self, trunc: u32) -> Self {
        let mut out = Self::zero(self.n, trunc);
        for (m, c) in &self.coeffs {
            out.set(m.clone(), c.clone());
        }
        out
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().map(|m| m.degree())
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().next_back().map(|m| m.degree()).unwrap_or(0)
    }

    /// Largest coefficient modulus; the residual norm used throughout.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// Conjugate every coefficient (exponents untouched).
    pub fn conj_coeffs(&self) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (m, c) in &self.coeffs {
            out.set(m.clone(), c.conj());
        }
        out
    }

    /// Permute variables: new variable `j` is old variable `perm[j]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zero(self.n, self.trunc);
        for (m, c) in &self.coeffs {
            let mut e = vec![0u32; self.n];
            for (newv, &oldv) in perm.iter().enumerate() {
                e[newv] = m.0[oldv];
            }
            out.set(Multiindex(e), c.clone());
        }
        out
    }

    pub fn derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (m, c) in &self.coeffs {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut v = m.0.clone();
            v[j] = e - 1;
            out.add_to(Multiindex(v), c.mul(&K::from_int(e as i64)));
        }
        out
    }

    /// Substitute `args[j]` for variable `j`. Arguments live in `m` variables
    /// and must share one truncation. Nonconstant terms require zero constant
    /// terms in `args` to keep the truncation exact.
    pub fn compose(&self, args: &[TruncatedSeries<K>]) -> Result<TruncatedSeries<K>, SeriesError> {
        if args.len() != self.n {
            return Err(SeriesError::Dimension(args.len(), self.n));
        }
        let (m_vars, tr) = match args.first() {
            Some(a) => (a.n, a.trunc),
            None => {
                // 0-variable series is a constant
                let mut out = TruncatedSeries::zero(0, self.trunc);
                out.set(Multiindex::zero(0), self.constant_term());
                return Ok(out);
            }
        };
        for a in args {
            if a.n != m_vars {
                return Err(SeriesError::Dimension(a.n, m_vars));
            }
            if a.trunc != tr {
                return Err(SeriesError::Truncation(a.trunc, tr));
            }
            if !a.constant_term().is_zero() {
                return Err(SeriesError::NonzeroConstant);
            }
        }
        // Cached powers of each argument.
        let mut pows: Vec<Vec<TruncatedSeries<K>>> = args
            .iter()
            .map(|a| vec![TruncatedSeries::constant(m_vars, tr, K::one()), a.clone()])
            .collect();
        let mut out = TruncatedSeries::zero(m_vars, tr);
        for (mi, c) in &self.coeffs {
            let mut term = TruncatedSeries::constant(m_vars, tr, c.clone());
            for (j, &e) in mi.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[j].len() <= e as usize {
                    let next = pows[j].last().unwrap().mul(&args[j]);
                    pows[j].push(next);
                }
                term = term.mul(&pows[j][e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Reciprocal series `1/self`; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(SeriesError::ZeroConstant)?;
        // 1/(c0(1+u)) = c0^{-1} sum (-u)^k
        let u = self.scale(&c0_inv).sub(&Self::constant(self.n, self.trunc, K::one()));
        let mut acc = Self::constant(self.n, self.trunc, K::one());
        let mut pow = Self::constant(self.n, self.trunc, K::one());
        for _ in 0..self.trunc {
            pow = pow.mul(&u).neg();
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc.scale(&c0_inv))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.n, self.trunc, K::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `k`-th root with the branch fixed by `root0`, which must satisfy
    /// `root0^k = constant term`. Computed by the binomial series, so the
    /// result stays inside the backend.
    pub fn nth_root(&self, k: u32, root0: &K) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstant);
        }
        let mut chk = K::one();
        for _ in 0..k {
            chk = chk.mul(root0);
        }
        let mismatch = if K::EXACT {
            !chk.sub(&c0).is_zero()
        } else {
            chk.sub(&c0).abs() > 1e-9 * c0.abs().max(1.0)
        };
        if mismatch {
            return Err(SeriesError::RootBranch(k));
        }
        let c0_inv = c0.inv().ok_or(SeriesError::ZeroConstant)?;
        let u = self.scale(&c0_inv).sub(&Self::constant(self.n, self.trunc, K::one()));
        // (1+u)^{1/k} = sum_m binom(1/k, m) u^m
        let mut acc = Self::constant(self.n, self.trunc, K::one());
        let mut upow = Self::constant(self.n, self.trunc, K::one());
        let mut coef = K::one();
        let alpha = K::from_ratio(1, k as i64);
        for m in 0..self.trunc {
            upow = upow.mul(&u);
            if upow.is_zero() {
                break;
            }
            // binom(alpha, m+1) = binom(alpha, m) (alpha - m) / (m+1)
            coef = coef
                .mul(&alpha.sub(&K::from_int(m as i64)))
                .mul(&K::from_ratio(1, (m + 1) as i64));
            acc = acc.add(&upow.scale(&coef));
        }
        Ok(acc.scale(root0))
    }

    /// Evaluate at a point (full, not truncated in the argument).
    pub fn eval(&self, x: &[K]) -> K {
        assert_eq!(x.len(), self.n);
        let mut acc = K::zero();
        for (m, c) in &self.coeffs {
            let mut t = c.clone();
            for (j, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&x[j]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Canonical JSON: graded-lex array of `{"exp", "re", "im"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "exp": m.0,
                    "re": K::part_json(c, false),
                    "im": K::part_json(c, true),
                })
            })
            .collect();
        serde_json::Value::Array(items)
    }

    pub fn from_json(n: usize, trunc: u32, v: &serde_json::Value) -> Result<Self, String> {
        let arr = v.as_array().ok_or("series: expected array")?;
        let mut s = Self::zero(n, trunc);
        for item in arr {
            let exp = item
                .get("exp")
                .and_then(|e| e.as_array())
                .ok_or("series term: missing exp")?;
            if exp.len() != n {
                return Err(format!("series term: exp length {} != {}", exp.len(), n));
            }
            let e: Vec<u32> = exp
                .iter()
                .map(|x| x.as_u64().map(|u| u as u32).ok_or("bad exponent"))
                .collect::<Result<_, _>>()?;
            let re = item.get("re").cloned().unwrap_or(serde_json::Value::Null);
            let im = item.get("im").cloned().unwrap_or(serde_json::Value::Null);
            let c = K::from_part_json(&re, &im)?;
            s.add_to(Multiindex(e), c);
        }
        Ok(s)
    }
}

impl<K: Coeff> fmt::Debug for TruncatedSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| format!("({c})*x^{:?}", m.0))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Fallible product with the precondition checks of the public operation.
pub fn series_mul<K: Coeff>(
    a: &TruncatedSeries<K>,
    b: &TruncatedSeries<K>,
) -> Result<TruncatedSeries<K>, SeriesError> {
    if a.nvars() != b.nvars() {
        return Err(SeriesError::Dimension(a.nvars(), b.nvars()));
    }
    if a.trunc() != b.trunc() {
        return Err(SeriesError::Truncation(a.trunc(), b.trunc()));
    }
    Ok(a.mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactC;

    type S = TruncatedSeries<ExactC>;

    fn x(n: usize, tr: u32, j: usize) -> S {
        S::var(n, tr, j)
    }

    #[test]
    fn binomial_square() {
        // (1+x)(1+x) = 1+2x+x^2 at N=2
        let one = S::constant(1, 2, ExactC::from_int(1));
        let f = one.add(&x(1, 2, 0));
        let sq = f.mul(&f);
        assert_eq!(sq.coeff(&Multiindex(vec![0])), ExactC::from_int(1));
        assert_eq!(sq.coeff(&Multiindex(vec![1])), ExactC::from_int(2));
        assert_eq!(sq.coeff(&Multiindex(vec![2])), ExactC::from_int(1));
    }

    #[test]
    fn truncation_kills_high_degree() {
        // x^N * x = 0
        let n = 4u32;
        let xn = x(1, n, 0).pow(n);
        assert!(!xn.is_zero());
        assert!(xn.mul(&x(1, n, 0)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        // (x+y)(x-y) = x^2 - y^2
        let a = x(2, 3, 0).add(&x(2, 3, 1));
        let b = x(2, 3, 0).sub(&x(2, 3, 1));
        let p = a.mul(&b);
        assert_eq!(p.coeff(&Multiindex(vec![2, 0])), ExactC::from_int(1));
        assert_eq!(p.coeff(&Multiindex(vec![0, 2])), ExactC::from_int(-1));
        assert!(p.coeff(&Multiindex(vec![1, 1])).is_zero());
    }

    #[test]
    fn mul_mismatch_errors() {
        let a = S::zero(1, 3);
        let b = S::zero(2, 3);
        assert!(series_mul(&a, &b).is_err());
        let c = S::zero(1, 4);
        assert!(series_mul(&a, &c).is_err());
    }

    #[test]
    fn inverse_series() {
        // 1/(1-x) = 1 + x + x^2 + ...
        let one = S::constant(1, 5, ExactC::from_int(1));
        let f = one.sub(&x(1, 5, 0));
        let g = f.inverse().unwrap();
        for d in 0..=5 {
            assert_eq!(g.coeff(&Multiindex(vec![d])), ExactC::from_int(1));
        }
        assert!(f
            .mul(&g)
            .sub(&S::constant(1, 5, ExactC::from_int(1)))
            .is_zero());
    }

    #[test]
    fn nth_root_branch() {
        // sqrt of (1+x)^2 with branch 1 gives back 1+x
        let one = S::constant(1, 6, ExactC::from_int(1));
        let f = one.add(&x(1, 6, 0));
        let sq = f.mul(&f);
        let r = sq.nth_root(2, &ExactC::from_int(1)).unwrap();
        assert!(r.sub(&f).is_zero());
        // branch -1 gives -(1+x)
        let rneg = sq.nth_root(2, &ExactC::from_int(-1)).unwrap();
        assert!(rneg.add(&f).is_zero());
    }

    #[test]
    fn compose_basic() {
        // f(u) = u^2 with u = x+x^2 at N=4: x^2 + 2x^3 + x^4
        let f = x(1, 4, 0).pow(2);
        let g = x(1, 4, 0).add(&x(1, 4, 0).pow(2));
        let h = f.compose(&[g]).unwrap();
        assert_eq!(h.coeff(&Multiindex(vec![2])), ExactC::from_int(1));
        assert_eq!(h.coeff(&Multiindex(vec![3])), ExactC::from_int(2));
        assert_eq!(h.coeff(&Multiindex(vec![4])), ExactC::from_int(1));
    }
}
