//! Polynomials over F_p (p < 2^62) and their factorization into monic
//! irreducibles, enough for Dedekind–Kummer splitting in degree ≤ 4.

pub type FPoly = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_scalar(a: u64, p: u64) -> u64 {
    powmod_scalar(a, p - 2, p)
}

pub fn trim(f: &mut FPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn from_ints(c: &[i64], p: u64) -> FPoly {
    let mut f: FPoly = c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
    trim(&mut f);
    f
}

fn monic(f: &FPoly, p: u64) -> FPoly {
    match f.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_scalar(l, p);
            f.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

fn sub(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c) % p;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

pub fn divrem(a: &FPoly, b: &FPoly, p: u64) -> (FPoly, FPoly) {
    let db = b.len() - 1;
    let inv = inv_scalar(b[db], p);
    let mut r = a.clone();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], inv, p);
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mulmod(c, bc, p)) % p;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn gcd(a: &FPoly, b: &FPoly, p: u64) -> FPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    monic(&x, p)
}

fn powmod(base: &FPoly, mut e: u128, m: &FPoly, p: u64) -> FPoly {
    let mut acc: FPoly = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(&mul(&acc, &b, p), m, p).1;
        }
        e >>= 1;
        if e > 0 {
            b = divrem(&mul(&b, &b, p), m, p).1;
        }
    }
    acc
}

/// Splits a squarefree product of distinct monic irreducibles of degree `d`.
fn equal_degree(g: &FPoly, d: usize, p: u64, out: &mut Vec<FPoly>) {
    let deg = g.len() - 1;
    if deg == d {
        out.push(g.clone());
        return;
    }
    if p == 2 || (p as u128).pow(d as u32) <= 64 {
        // tiny fields: try every monic polynomial of degree d
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                cand.push((t % p as u128) as u64);
                t /= p as u128;
            }
            cand.push(1);
            let (q, r) = divrem(g, &cand, p);
            if r.is_empty() {
                out.push(cand);
                equal_degree(&q, d, p, out);
                return;
            }
        }
        unreachable!("equal-degree input has a factor of degree d");
    }
    // Cantor–Zassenhaus with deterministic seeds (x + c)
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    for c in 0..p {
        let h = powmod(&vec![c, 1], e, g, p);
        let t = gcd(g, &sub(&h, &vec![1], p), p);
        let td = t.len() - 1;
        if td > 0 && td < deg {
            equal_degree(&t, d, p, out);
            let (q, _) = divrem(g, &t, p);
            equal_degree(&q, d, p, out);
            return;
        }
    }
    unreachable!("some seed splits a reducible equal-degree product");
}

/// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor(f: &FPoly, p: u64) -> Vec<(FPoly, u32)> {
    let f = monic(f, p);
    let n = f.len() - 1;
    let x: FPoly = vec![0, 1];
    let mut distinct: Vec<FPoly> = Vec::new();
    let mut xp = x.clone();
    for d in 1..=n {
        xp = powmod(&xp, p as u128, &f, p);
        // product of all distinct irreducible factors with degree dividing d
        let mut g = gcd(&f, &sub(&xp, &x, p), p);
        for q in distinct.iter().filter(|q| d % (q.len() - 1) == 0) {
            g = divrem(&g, q, p).0;
        }
        if g.len() > 1 {
            let mut found = Vec::new();
            equal_degree(&g, d, p, &mut found);
            distinct.extend(found);
        }
    }
    let mut out = Vec::new();
    for q in distinct {
        let mut e = 0;
        let mut rest = f.clone();
        loop {
            let (quo, r) = divrem(&rest, &q, p);
            if !r.is_empty() {
                break;
            }
            e += 1;
            rest = quo;
        }
        out.push((q, e));
    }
    out.sort_by(|a, b| (a.0.len(), a.0.iter().rev().collect::<Vec<_>>()).cmp(&(b.0.len(), b.0.iter().rev().collect::<Vec<_>>())));
    out
}
