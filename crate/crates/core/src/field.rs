//! Small finite fields `F_q`, `q = p^k`, with full lookup tables.
//!
//! Elements are the integers `0..q`, read as coefficient vectors in base `p`
//! over the power basis `1, x, .., x^(k-1)`. Extension fields use Conway
//! polynomials where tabulated and the least monic irreducible otherwise.

use thiserror::Error;

use crate::numtheory::{factorize, prime_power};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    BadPrimePower(u64),
    #[error("field of order {0} is too large for table arithmetic")]
    TooLarge(u64),
}

/// Low coefficients `c_0 .. c_(k-1)` of monic `x^k + c_(k-1) x^(k-1) + .. + c_0`.
fn conway(p: u64, k: u32) -> Option<&'static [u64]> {
    Some(match (p, k) {
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (2, 4) => &[1, 1, 0, 0],
        (2, 5) => &[1, 0, 1, 0, 0],
        (2, 6) => &[1, 1, 0, 1, 1, 0],
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (3, 4) => &[2, 0, 0, 2],
        (5, 2) => &[2, 4],
        (5, 3) => &[3, 3, 0],
        (7, 2) => &[3, 6],
        _ => return None,
    })
}

#[derive(Debug, Clone)]
pub struct Field {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    primitive: u32,
}

impl Field {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::BadPrimePower(q))?;
        if q > 1 << 12 {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = if k == 1 {
            vec![0]
        } else {
            match conway(p, k) {
                Some(c) => {
                    let c = c.to_vec();
                    assert!(is_irreducible(&c, p), "tabulated polynomial is reducible");
                    c
                }
                None => least_irreducible(p, k),
            }
        };
        let n = q as usize;
        let digits = |x: usize| -> Vec<u64> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = x as u64;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let pack = |v: &[u64]| -> u32 { v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32 };
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = pack(&s);
                mul[a * n + b] = pack(&poly_mulmod(&da, &db, &modulus, p));
            }
        }
        let mut neg = vec![0u32; n];
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u32;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as u32;
                }
            }
        }
        let mut field = Field {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        let group_order = q - 1;
        let primes: Vec<u64> = factorize(group_order).into_iter().map(|(r, _)| r).collect();
        field.primitive = (1..n as u32)
            .find(|&a| primes.iter().all(|&r| field.pow(a, group_order / r) != 1))
            .unwrap_or(1);
        Ok(field)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius map `a -> a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p)
    }

    /// Least element generating the multiplicative group.
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    /// The power basis `1, x, .., x^(k-1)` over `F_p`.
    pub fn basis(&self) -> Vec<u32> {
        (0..self.k).map(|i| self.p.pow(i) as u32).collect()
    }

    /// Defining polynomial, e.g. `x^2+2x+2`, or `None` for a prime field.
    pub fn polynomial(&self) -> Option<String> {
        if self.k == 1 {
            return None;
        }
        let mut terms = vec![format!("x^{}", self.k)];
        for i in (0..self.k as usize).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        Some(terms.join("+"))
    }

    /// `F_9 = F_3[x]/(x^2+2x+2)` style description.
    pub fn describe(&self) -> String {
        match self.polynomial() {
            None => format!("F_{}", self.q),
            Some(poly) => format!("F_{} = F_{}[x]/({poly})", self.q, self.p),
        }
    }
}

/// `a*b mod f` for monic `f = x^k + c_(k-1) x^(k-1) + .. + c_0`.
fn poly_mulmod(a: &[u64], b: &[u64], c: &[u64], p: u64) -> Vec<u64> {
    let k = a.len();
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    if k == 1 {
        return vec![prod[0]];
    }
    for d in (k..2 * k).rev() {
        let t = prod[d];
        if t == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &ci) in c.iter().enumerate() {
            // subtract t * c_i from x^(d-k+i)
            let idx = d - k + i;
            prod[idx] = (prod[idx] + (p - t * ci % p)) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// Monic `x^k + sum c_i x^i` has no monic factor of degree `1..=k/2`.
fn is_irreducible(c: &[u64], p: u64) -> bool {
    let k = c.len();
    let mut f: Vec<u64> = c.to_vec();
    f.push(1);
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = code;
            for _ in 0..d {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if poly_rem(&f, &g, p).iter().all(|&r| r == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - lead * gi % p) % p;
        }
        r.pop();
    }
    r
}

fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    (0..p.pow(k))
        .map(|code| {
            let mut c = Vec::with_capacity(k as usize);
            let mut x = code;
            for _ in 0..k {
                c.push(x % p);
                x /= p;
            }
            c
        })
        .find(|c| is_irreducible(c, p))
        .expect("an irreducible polynomial of every degree exists")
}
