//! Dense univariate polynomials over a finite field, coefficients constant
//! term first, always trimmed (the zero polynomial is the empty vector).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::FieldParams;

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &FieldParams, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n).map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
    trim(out)
}

pub fn sub(f: &FieldParams, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n).map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
    trim(out)
}

pub fn mul(f: &FieldParams, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.mul_add(x, y, out[i + j]);
        }
    }
    trim(out)
}

pub fn scale(f: &FieldParams, a: &[u32], c: u32) -> Poly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &FieldParams, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).unwrap();
    let mut r: Poly = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - db;
        q[shift] = c;
        for (i, &bi) in b[..=db].iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(f: &FieldParams, a: &[u32], b: &[u32]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &FieldParams, a: &[u32]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(f, a, f.inv(a[d]).unwrap()),
    }
}

pub fn gcd(f: &FieldParams, a: &[u32], b: &[u32]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn mulmod(f: &FieldParams, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &FieldParams, a: &[u32], mut e: u64, m: &[u32]) -> Poly {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    acc
}

pub fn eval(f: &FieldParams, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.mul_add(acc, x, c))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a monic `g` of degree n over F_q is irreducible iff
/// `x^(q^n) = x mod g` and `gcd(x^(q^(n/r)) - x, g) = 1` for each prime r | n.
pub fn is_irreducible(f: &FieldParams, g: &[u32]) -> bool {
    let g = trim(g.to_vec());
    let n = match degree(&g) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let g = monic(f, &g);
    let q = f.order() as u64;
    let x: Poly = vec![0, 1];
    // frob[i] = x^(q^i) mod g
    let mut frob = vec![rem(f, &x, &g)];
    for i in 1..=n {
        let next = powmod(f, &frob[i - 1], q, &g);
        frob.push(next);
    }
    if frob[n] != x {
        return false;
    }
    for r in prime_divisors(n) {
        let h = sub(f, &frob[n / r], &x);
        if degree(&gcd(f, &h, &g)).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// Splits a squarefree monic `g` whose irreducible factors all have degree `d`.
fn equal_degree_split(f: &FieldParams, g: &[u32], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = degree(g).unwrap();
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let q = f.order() as u64;
    loop {
        let r: Poly = trim((0..n).map(|_| rng.gen_range(0..f.order())).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let t = if f.characteristic() == 2 {
            // trace map down to F_2: sum of r^(2^i), i < m d
            let mut acc = rem(f, &r, g);
            let mut cur = acc.clone();
            for _ in 1..(f.degree() * d) {
                cur = mulmod(f, &cur, &cur, g);
                acc = add(f, &acc, &cur);
            }
            acc
        } else {
            // r^((q^d - 1)/2) = (r^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut norm = rem(f, &r, g);
            let mut cur = norm.clone();
            for _ in 1..d {
                cur = powmod(f, &cur, q, g);
                norm = mulmod(f, &norm, &cur, g);
            }
            let s = powmod(f, &norm, (q - 1) / 2, g);
            sub(f, &s, &[1])
        };
        let h = gcd(f, g, &t);
        let dh = degree(&h).unwrap_or(0);
        if dh > 0 && dh < n {
            let other = divrem(f, g, &h).0;
            equal_degree_split(f, &h, d, rng, out);
            equal_degree_split(f, &monic(f, &other), d, rng, out);
            return;
        }
    }
}

/// The distinct monic irreducible factors of `a` (multiplicities dropped),
/// sorted by degree and then by coefficients.
pub fn distinct_factors(f: &FieldParams, a: &[u32]) -> Vec<Poly> {
    let mut rest = monic(f, a);
    let mut out = Vec::new();
    if degree(&rest).unwrap_or(0) == 0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let q = f.order() as u64;
    let x: Poly = vec![0, 1];
    let mut h = rem(f, &x, &rest);
    let mut d = 0;
    while degree(&rest).unwrap_or(0) > 0 {
        d += 1;
        h = powmod(f, &h, q, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x));
        if degree(&g).unwrap_or(0) > 0 {
            let mut found = Vec::new();
            equal_degree_split(f, &g, d, &mut rng, &mut found);
            for factor in found {
                loop {
                    let (quo, r) = divrem(f, &rest, &factor);
                    if !r.is_empty() {
                        break;
                    }
                    rest = quo;
                }
                out.push(factor);
            }
            if degree(&rest).unwrap_or(0) > 0 {
                h = rem(f, &h, &rest);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Distinct roots of `a` in the field, ascending by code.
pub fn roots(f: &FieldParams, a: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = distinct_factors(f, a).into_iter().filter(|g| g.len() == 2).map(|g| f.neg(g[0])).collect();
    r.sort();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn brute_irreducible(f: &FieldParams, g: &[u32]) -> bool {
        // no monic factor of degree 1..=n/2
        let n = degree(g).unwrap();
        let q = f.order();
        for d in 1..=n / 2 {
            let count = q.pow(d as u32);
            for code in 0..count {
                let mut c = code;
                let mut h = Vec::new();
                for _ in 0..d {
                    h.push(c % q);
                    c /= q;
                }
                h.push(1);
                if rem(f, g, &h).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for p in [2u32, 3] {
            let f = Field::prime(p).unwrap();
            for n in 2..=5usize {
                for code in 0..p.pow(n as u32) {
                    let mut c = code;
                    let mut g = Vec::new();
                    for _ in 0..n {
                        g.push(c % p);
                        c /= p;
                    }
                    g.push(1);
                    assert_eq!(is_irreducible(&f, &g), brute_irreducible(&f, &g), "p={p} g={g:?}");
                }
            }
        }
    }

    #[test]
    fn factors_multiply_back_to_radical() {
        let f = Field::new(2, 2).unwrap();
        // (x+1)^2 (x^2+x+1) over F_4 splits into linear factors x+1, x+w, x+w^2
        let a = mul(&f, &mul(&f, &[1, 1], &[1, 1]), &[1, 1, 1]);
        let fs = distinct_factors(&f, &a);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|g| g.len() == 2));
        assert_eq!(roots(&f, &[1, 1, 1]), vec![2, 3]);
    }

    #[test]
    fn factoring_over_odd_extension() {
        let f = Field::new(3, 2).unwrap();
        // x^4 - 1 splits completely over F_9
        let a = vec![f.neg(1), 0, 0, 0, 1];
        let rs = roots(&f, &a);
        assert_eq!(rs.len(), 4);
        for r in rs {
            assert_eq!(eval(&f, &a, r), 0);
        }
        let f3 = Field::prime(3).unwrap();
        let fs = distinct_factors(&f3, &[2, 0, 0, 0, 1]);
        // x^4 - 1 = (x-1)(x+1)(x^2+1) over F_3
        assert_eq!(fs, vec![vec![1, 1], vec![2, 1], vec![1, 0, 1]]);
    }
}
