//! Univariate polynomials over the rationals, exact real-root isolation via
//! Sturm sequences, and the one-parameter feasibility question
//! "is there a real `t` in a closed interval where every `p_i(t) >= 0`?".

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{gcd_of_numerators, int, lcm_of_denominators, max_abs, Rat};

/// Coefficients from the constant term upward; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b t`
    pub fn linear(a: Rat, b: Rat) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rat {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Rat::zero)
                        + o.0.get(i).cloned().unwrap_or_else(Rat::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        self.scale(&(Rat::one() / l))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer coefficients with content 1 (same roots).
    fn primitive_integer(&self) -> Vec<BigInt> {
        let l = Rat::from_integer(lcm_of_denominators(self.0.iter()));
        let scaled: Vec<Rat> = self.0.iter().map(|c| c * &l).collect();
        let g = Rat::from_integer(gcd_of_numerators(scaled.iter()));
        scaled.iter().map(|c| (c / &g).to_integer()).collect()
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.neg());
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.squarefree().sturm();
        let va = sign_changes(&seq, a);
        let vb = sign_changes(&seq, b);
        va.saturating_sub(vb)
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    fn root_bound(&self) -> Rat {
        let lead = self.lead().abs();
        let m = max_abs(self.0[..self.0.len() - 1].iter());
        int(1) + m / lead
    }

    /// All distinct real roots, sorted, rational ones exact.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree();
        let mut rational = rational_roots(&sf);
        let mut rest = sf.clone();
        for r in &rational {
            rest = rest.div_rem(&Poly::linear(-r.clone(), int(1))).0;
        }
        let mut out: Vec<RealRoot> = rational.drain(..).map(RealRoot::Rational).collect();
        if rest.degree().unwrap_or(0) > 0 {
            let b = rest.root_bound();
            let mut stack = vec![(-b.clone(), b)];
            while let Some((lo, hi)) = stack.pop() {
                match rest.count_roots(&lo, &hi) {
                    0 => {}
                    1 => out.push(RealRoot::Algebraic(AlgebraicRoot {
                        poly: rest.clone(),
                        lo,
                        hi,
                    })),
                    _ => {
                        let mid = (&lo + &hi) / int(2);
                        stack.push((lo, mid.clone()));
                        stack.push((mid, hi));
                    }
                }
            }
        }
        separate(&mut out);
        out.sort_by(|a, b| a.cmp_value(b));
        out
    }
}

fn sign_changes(seq: &[Poly], x: &Rat) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let r = n.sqrt();
    for d in 1..=r {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
    }
    Some(out)
}

/// Rational roots by the rational root theorem (skipped for huge coefficients).
fn rational_roots(p: &Poly) -> Vec<Rat> {
    let c = p.primitive_integer();
    let mut roots = Vec::new();
    let k = c.iter().position(|x| !x.is_zero()).unwrap_or(0);
    if k > 0 {
        roots.push(Rat::zero());
    }
    let c = &c[k..];
    if c.len() <= 1 {
        return roots;
    }
    let (Some(ps), Some(qs)) = (divisors(&c[0]), divisors(c.last().unwrap())) else {
        return roots;
    };
    let reduced = Poly::new(c.iter().map(|x| Rat::from_integer(x.clone())).collect());
    for p_ in &ps {
        for q_ in &qs {
            if !p_.gcd(q_).is_one() {
                continue;
            }
            for s in [1i64, -1] {
                let cand = Rat::new(p_ * s, q_.clone());
                if reduced.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// An irrational real root `alpha` of a squarefree polynomial, with
/// `lo < alpha < hi` and no other root of `poly` in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicRoot {
    pub poly: Poly,
    pub lo: Rat,
    pub hi: Rat,
}

impl AlgebraicRoot {
    fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / int(2);
        if self.poly.count_roots(&self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Exact sign of `q(alpha)`.
    pub fn sign_of(&self, q: &Poly) -> Ordering {
        if q.is_zero() {
            return Ordering::Equal;
        }
        let g = self.poly.gcd(q);
        if g.degree().unwrap_or(0) > 0 && g.count_roots(&self.lo, &self.hi) > 0 {
            return Ordering::Equal;
        }
        let mut r = self.clone();
        while q.count_roots(&r.lo, &r.hi) > 0 {
            r.bisect();
        }
        let v = q.eval(&r.hi);
        v.cmp(&Rat::zero())
    }

    fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Rational(Rat),
    Algebraic(AlgebraicRoot),
}

impl RealRoot {
    fn cmp_value(&self, o: &RealRoot) -> Ordering {
        match (self, o) {
            (RealRoot::Rational(a), RealRoot::Rational(b)) => a.cmp(b),
            (RealRoot::Rational(a), RealRoot::Algebraic(b)) => a.cmp(&b.lo),
            (RealRoot::Algebraic(a), RealRoot::Rational(b)) => a.hi.cmp(b),
            (RealRoot::Algebraic(a), RealRoot::Algebraic(b)) => a.hi.cmp(&b.lo),
        }
    }

    fn lower(&self) -> Rat {
        match self {
            RealRoot::Rational(r) => r.clone(),
            RealRoot::Algebraic(a) => a.lo.clone(),
        }
    }

    fn upper(&self) -> Rat {
        match self {
            RealRoot::Rational(r) => r.clone(),
            RealRoot::Algebraic(a) => a.hi.clone(),
        }
    }
}

/// Refines algebraic isolating intervals until they are disjoint from every
/// other root's interval (closed), so endpoints can serve as sample points.
fn separate(roots: &mut [RealRoot]) {
    loop {
        let mut changed = false;
        for i in 0..roots.len() {
            for j in 0..roots.len() {
                if i == j {
                    continue;
                }
                let clash = match (&roots[i], &roots[j]) {
                    (RealRoot::Algebraic(a), RealRoot::Rational(r)) => a.contains(r),
                    (RealRoot::Algebraic(a), RealRoot::Algebraic(b)) => {
                        !(a.hi < b.lo || b.hi < a.lo)
                    }
                    _ => false,
                };
                if clash {
                    if let RealRoot::Algebraic(a) = &mut roots[i] {
                        a.bisect();
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// A real parameter value: rational, or an irrational algebraic number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamPoint {
    Rational(Rat),
    Algebraic(AlgebraicRoot),
}

/// Decides whether some real `t` with `lo <= t <= hi` makes every polynomial
/// nonnegative. Rational witnesses are preferred; an algebraic witness is
/// returned only when the feasible set is a single irrational point.
pub fn exists_nonneg(polys: &[Poly], lo: Option<&Rat>, hi: Option<&Rat>) -> Option<ParamPoint> {
    if let (Some(l), Some(h)) = (lo, hi) {
        if l > h {
            return None;
        }
    }
    let mut product = Poly::constant(int(1));
    for p in polys {
        match p.degree() {
            None => {}
            Some(0) => {
                if p.coeffs()[0].is_negative() {
                    return None;
                }
            }
            Some(_) => product = product.mul(p),
        }
    }
    let mut pts = product.real_roots();
    for end in [lo, hi].into_iter().flatten() {
        if !pts.iter().any(|r| matches!(r, RealRoot::Rational(x) if x == end)) {
            pts.push(RealRoot::Rational(end.clone()));
        }
    }
    // Range ends become breakpoints, so no isolating interval straddles them.
    separate(&mut pts);
    pts.sort_by(|a, b| a.cmp_value(b));
    pts.retain(|r| lo.is_none_or(|l| r.lower() >= *l) && hi.is_none_or(|h| r.upper() <= *h));

    // The sign pattern is constant between consecutive breakpoints, so one
    // rational per gap plus every rational breakpoint covers all cases
    // except an isolated irrational point.
    let mut samples: Vec<Rat> = Vec::new();
    for r in &pts {
        if let RealRoot::Rational(x) = r {
            samples.push(x.clone());
        }
    }
    for w in pts.windows(2) {
        match (&w[0], &w[1]) {
            (RealRoot::Rational(a), RealRoot::Rational(b)) => samples.push((a + b) / int(2)),
            (RealRoot::Algebraic(a), _) => samples.push(a.hi.clone()),
            (RealRoot::Rational(_), RealRoot::Algebraic(b)) => samples.push(b.lo.clone()),
        }
    }
    match (pts.first(), pts.last()) {
        (Some(first), Some(last)) => {
            if lo.is_none() {
                samples.push(first.lower() - int(1));
            }
            if hi.is_none() {
                samples.push(last.upper() + int(1));
            }
        }
        _ => samples.push(Rat::zero()),
    }
    samples.sort();
    samples.dedup();
    for t in samples {
        if polys.iter().all(|p| !p.eval(&t).is_negative()) {
            return Some(ParamPoint::Rational(t));
        }
    }
    for r in pts {
        if let RealRoot::Algebraic(a) = r {
            if polys.iter().all(|p| a.sign_of(p) != Ordering::Less) {
                return Some(ParamPoint::Algebraic(a));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[1, 2, 1]).squarefree(), p(&[1, 1]));
        assert_eq!(p(&[3, 2, 1]).derivative(), p(&[2, 2]));
    }

    #[test]
    fn roots_mixed_rational_and_irrational() {
        // (t - 1/2)(t^2 - 2)
        let q = Poly::new(vec![int(1), int(-2), rat(-1, 2), int(1)]);
        let roots = q.real_roots();
        assert_eq!(roots.len(), 3);
        assert!(matches!(&roots[1], RealRoot::Rational(r) if *r == rat(1, 2)));
        assert!(matches!(&roots[0], RealRoot::Algebraic(_)));
        assert!(matches!(&roots[2], RealRoot::Algebraic(_)));
    }

    #[test]
    fn interval_feasibility() {
        // 1 - (5 - t)^2 >= 0 on t >= 0 -> smallest rational found is 4.
        let det = p(&[-24, 10, -1]);
        let w = exists_nonneg(&[det.clone()], Some(&int(0)), None);
        assert_eq!(w, Some(ParamPoint::Rational(int(4))));
        assert_eq!(exists_nonneg(&[det], Some(&int(7)), None), None);
        assert_eq!(exists_nonneg(&[p(&[-1])], None, None), None);
    }

    #[test]
    fn irrational_singleton_is_found() {
        // t^2 - 2 >= 0 and 2 - t^2 >= 0 and t >= 0  -> t = sqrt 2
        let a = p(&[-2, 0, 1]);
        let b = p(&[2, 0, -1]);
        match exists_nonneg(&[a, b], Some(&int(0)), None) {
            Some(ParamPoint::Algebraic(r)) => {
                assert!(r.lo < rat(142, 100) && r.hi > rat(141, 100));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sign_at_algebraic_point() {
        let a = AlgebraicRoot {
            poly: p(&[-2, 0, 1]),
            lo: int(1),
            hi: int(2),
        };
        assert_eq!(a.sign_of(&p(&[-1, 1])), Ordering::Greater);
        assert_eq!(a.sign_of(&p(&[-3, 2])), Ordering::Less);
        assert_eq!(a.sign_of(&p(&[-4, 0, 2])), Ordering::Equal);
    }
}
