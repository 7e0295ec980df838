//! Arithmetic in GF(p^e) for p^e <= 2^16.
//!
//! Elements are stored as integers in [0, q): the packed base-p digits of the
//! coefficient vector with respect to the residue class of x modulo a fixed
//! monic irreducible polynomial. The polynomial is the lexicographically least
//! irreducible of its degree (integer encoding with the leading coefficients
//! most significant), so tables and everything derived from them are
//! reproducible bit for bit. Multiplication and division go through log/antilog
//! tables with respect to the least primitive element.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Description of a finite field, shared behind [`Field`].
pub struct FieldDesc {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Monic irreducible modulus, coefficients ascending by degree, length e+1.
    pub modpoly: Vec<u32>,
    /// Least element generating the multiplicative group.
    pub primitive: u16,
    /// exp[i] = primitive^i for 0 <= i < q-1.
    exp: Vec<u16>,
    /// log[a] defined for a >= 1, at index a-1.
    log: Vec<u16>,
}

/// Cheap handle to an interned [`FieldDesc`].
#[derive(Clone)]
pub struct Field(Arc<FieldDesc>);

static FIELD_CACHE: Lazy<Mutex<HashMap<(u32, u32), Field>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- dense polynomial helpers over GF(p), coefficients ascending ---

fn poly_trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_pow_mod(base: &[u32], mut exp: u32, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_mul_mod(&result, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    result
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // Fermat; p prime.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(b: u32, mut e: u32, m: u32) -> u32 {
    let mut r = 1u64;
    let mut bb = b as u64 % m as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % m as u64;
        }
        bb = bb * bb % m as u64;
        e >>= 1;
    }
    r as u32
}

/// Rabin irreducibility test for a monic polynomial of degree e over GF(p).
fn poly_irreducible(f: &[u32], p: u32) -> bool {
    let e = (f.len() - 1) as u32;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let x = vec![0u32, 1u32];
    // x^(p^e) mod f, computed by e successive p-th powers
    let frob = |steps: u32| -> Vec<u32> {
        let mut g = x.clone();
        for _ in 0..steps {
            g = poly_pow_mod(&g, p, f, p);
        }
        g
    };
    // x^(p^e) == x
    let mut top = frob(e);
    // top - x must be 0
    while top.len() < 2 {
        top.push(0);
    }
    top[1] = (top[1] + p - 1) % p;
    poly_trim(&mut top);
    if !(top.len() == 1 && top[0] == 0) {
        return false;
    }
    // gcd(x^(p^(e/r)) - x, f) == 1 for every prime r | e
    let mut rem = e;
    let mut r = 2;
    let mut prime_divs = Vec::new();
    while r * r <= rem {
        if rem.is_multiple_of(r) {
            prime_divs.push(r);
            while rem.is_multiple_of(r) {
                rem /= r;
            }
        }
        r += 1;
    }
    if rem > 1 {
        prime_divs.push(rem);
    }
    for r in prime_divs {
        let mut g = frob(e / r);
        while g.len() < 2 {
            g.push(0);
        }
        g[1] = (g[1] + p - 1) % p;
        poly_trim(&mut g);
        let d = poly_gcd(f, &g, p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

// --- generic polynomial helpers over an arbitrary GF(q), u16 coefficients ---

fn gpoly_trim(v: &mut Vec<u16>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn gpoly_rem(a: &[u16], m: &[u16], f: &Field) -> Vec<u16> {
    let mut r: Vec<u16> = a.to_vec();
    gpoly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("monic-ish divisor");
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                r[idx] = f.sub(r[idx], f.mul(c, mi));
            }
        }
        r.pop();
        gpoly_trim(&mut r);
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

fn gpoly_mul_mod(a: &[u16], b: &[u16], m: &[u16], f: &Field) -> Vec<u16> {
    let mut prod = vec![0u16; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(ai, bj));
        }
    }
    gpoly_rem(&prod, m, f)
}

fn gpoly_pow_mod(base: &[u16], mut exp: u64, m: &[u16], f: &Field) -> Vec<u16> {
    let mut result = vec![1u16];
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = gpoly_mul_mod(&result, &b, m, f);
        }
        b = gpoly_mul_mod(&b, &b, m, f);
        exp >>= 1;
    }
    result
}

fn gpoly_gcd(a: &[u16], b: &[u16], f: &Field) -> Vec<u16> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    gpoly_trim(&mut x);
    gpoly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = gpoly_rem(&x, &y, f);
        x = y;
        y = r;
    }
    x
}

/// Rabin irreducibility for a polynomial over GF(q), coefficients ascending.
pub fn poly_irreducible_over(coeffs: &[u16], field: &Field) -> bool {
    let mut fpoly = coeffs.to_vec();
    gpoly_trim(&mut fpoly);
    let e = fpoly.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let q = field.q() as u64;
    let x = vec![0u16, 1u16];
    let frob = |steps: usize| -> Vec<u16> {
        let mut g = x.clone();
        for _ in 0..steps {
            g = gpoly_pow_mod(&g, q, &fpoly, field);
        }
        g
    };
    let minus_x = |mut g: Vec<u16>| -> Vec<u16> {
        while g.len() < 2 {
            g.push(0);
        }
        g[1] = field.sub(g[1], 1);
        gpoly_trim(&mut g);
        g
    };
    let top = minus_x(frob(e));
    if !(top.len() == 1 && top[0] == 0) {
        return false;
    }
    for r in prime_factors(e as u32) {
        let g = minus_x(frob(e / r as usize));
        if gpoly_gcd(&fpoly, &g, field).len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d as u64 * d as u64 <= n as u64 {
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

impl FieldDesc {
    fn build(p: u32, e: u32) -> Result<FieldDesc> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || e > 16 {
            return Err(Error::DegreeTooLarge(e));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= 1 << 16);
        let q = q.ok_or(Error::DegreeTooLarge(e))? as u32;

        // Least monic irreducible of degree e: scan lower-coefficient encodings
        // in increasing integer order (most significant digit = degree e-1).
        let modpoly = {
            let mut found = None;
            for enc in 0..(p as u64).pow(e) {
                let mut f = vec![0u32; e as usize + 1];
                f[e as usize] = 1;
                let mut v = enc;
                for c in f.iter_mut().take(e as usize) {
                    *c = (v % p as u64) as u32;
                    v /= p as u64;
                }
                if poly_irreducible(&f, p) {
                    found = Some(f);
                    break;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        // raw multiply in packed representation, no tables yet
        let unpack = |v: u32| -> Vec<u32> {
            let mut out = vec![0u32; e as usize];
            let mut x = v;
            for c in out.iter_mut() {
                *c = x % p;
                x /= p;
            }
            out
        };
        let pack = |cs: &[u32]| -> u32 {
            let mut v = 0u32;
            for &c in cs.iter().rev() {
                v = v * p + c;
            }
            v
        };
        let raw_mul = |a: u32, b: u32| -> u32 {
            if a == 0 || b == 0 {
                return 0;
            }
            let pa = unpack(a);
            let pb = unpack(b);
            let prod = {
                let mut prod = vec![0u32; 2 * e as usize - 1];
                for (i, &ai) in pa.iter().enumerate() {
                    for (j, &bj) in pb.iter().enumerate() {
                        prod[i + j] =
                            ((prod[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
                    }
                }
                poly_rem(&prod, &modpoly, p)
            };
            let mut cs = prod;
            cs.resize(e as usize, 0);
            pack(&cs)
        };
        let raw_pow = |mut b: u32, mut n: u32| -> u32 {
            let mut r = 1u32;
            while n > 0 {
                if n & 1 == 1 {
                    r = raw_mul(r, b);
                }
                b = raw_mul(b, b);
                n >>= 1;
            }
            r
        };

        // least primitive element
        let factors = prime_factors(q - 1);
        let mut primitive = 1u32;
        'outer: for g in 1..q {
            if q == 2 {
                primitive = 1;
                break;
            }
            for &r in &factors {
                if raw_pow(g, (q - 1) / r) == 1 {
                    continue 'outer;
                }
            }
            primitive = g;
            break;
        }

        let mut exp = vec![0u16; (q - 1) as usize];
        let mut log = vec![0u16; (q - 1) as usize];
        let mut acc = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = acc as u16;
            log[(acc - 1) as usize] = i as u16;
            acc = raw_mul(acc, primitive);
        }
        debug_assert_eq!(acc, 1, "primitive element must have order q-1");

        Ok(FieldDesc {
            p,
            e,
            q,
            modpoly,
            primitive: primitive as u16,
            exp,
            log,
        })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            a ^ b
        } else if self.e == 1 {
            ((a as u32 + b as u32) % self.p) as u16
        } else {
            let mut out = 0u32;
            let (mut x, mut y) = (a as u32, b as u32);
            let mut mult = 1u32;
            for _ in 0..self.e {
                let d = (x % self.p + y % self.p) % self.p;
                out += d * mult;
                mult *= self.p;
                x /= self.p;
                y /= self.p;
            }
            out as u16
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            a
        } else if self.e == 1 {
            ((self.p - a as u32) % self.p) as u16
        } else {
            let mut out = 0u32;
            let mut x = a as u32;
            let mut mult = 1u32;
            for _ in 0..self.e {
                let d = (self.p - x % self.p) % self.p;
                out += d * mult;
                mult *= self.p;
                x /= self.p;
            }
            out as u16
        }
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.log[(a - 1) as usize] as u32 + self.log[(b - 1) as usize] as u32;
        self.exp[(i % (self.q - 1)) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::DivideByZero);
        }
        let i = self.log[(a - 1) as usize] as u32;
        Ok(self.exp[((self.q - 1 - i) % (self.q - 1)) as usize])
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> Result<u16> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u16, n: u64) -> u16 {
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let ord = (self.q - 1) as u64;
        let i = self.log[(a - 1) as usize] as u64;
        self.exp[((i * (n % ord)) % ord) as usize]
    }
}

impl Field {
    /// The field GF(p^e) with the fixed modulus and primitive element.
    pub fn gf(p: u32, e: u32) -> Result<Field> {
        if let Some(f) = FIELD_CACHE.lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let desc = FieldDesc::build(p, e)?;
        let field = Field(Arc::new(desc));
        FIELD_CACHE
            .lock()
            .unwrap()
            .insert((p, e), field.clone());
        Ok(field)
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u32) -> Result<Field> {
        for p in 2..=q {
            if !is_prime(p) {
                continue;
            }
            if q.is_multiple_of(p) {
                let mut e = 0;
                let mut x = q;
                while x.is_multiple_of(p) {
                    x /= p;
                    e += 1;
                }
                if x == 1 {
                    return Self::gf(p, e);
                }
                break;
            }
        }
        Err(Error::NotPrime(q))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn primitive(&self) -> u16 {
        self.0.primitive
    }

    pub fn modpoly(&self) -> &[u32] {
        &self.0.modpoly
    }

    pub fn elem(&self, v: u16) -> FieldElem {
        debug_assert!((v as u32) < self.q());
        FieldElem {
            value: v,
            field: self.clone(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q() as u16
    }
}

impl std::ops::Deref for Field {
    type Target = FieldDesc;
    fn deref(&self) -> &FieldDesc {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q && self.0.modpoly == other.0.modpoly
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q())
    }
}

/// An element tied to its field; checked arithmetic surface.
#[derive(Clone, Debug)]
pub struct FieldElem {
    pub value: u16,
    pub field: Field,
}

impl FieldElem {
    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.div(self.value, other.value)?))
    }

    pub fn pow(&self, n: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.value, n))
    }

    /// Trace down to a subfield: sum of a^(q^i) over the Galois orbit.
    pub fn trace_to(&self, sub: &Field) -> Result<FieldElem> {
        let emb = SubfieldEmbedding::new(sub, &self.field)?;
        let q = sub.q() as u64;
        let m = self.field.degree() / sub.degree();
        let mut acc = 0u16;
        let mut term = self.value;
        for _ in 0..m {
            acc = self.field.add(acc, term);
            term = self.field.pow(term, q);
        }
        emb.pull_back(acc).ok_or(Error::NotASubfield(sub.q(), self.field.q()))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}
impl Eq for FieldElem {}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The fixed embedding of GF(q) into GF(q^m): the subfield generator is sent
/// to the least root of its minimal polynomial in the big field.
pub struct SubfieldEmbedding {
    pub small: Field,
    pub big: Field,
    forward: Vec<u16>,
    backward: HashMap<u16, u16>,
}

impl SubfieldEmbedding {
    pub fn new(small: &Field, big: &Field) -> Result<SubfieldEmbedding> {
        if small.p() != big.p() || !big.degree().is_multiple_of(small.degree()) {
            return Err(Error::NotASubfield(small.q(), big.q()));
        }
        let p = big.p();
        // least root of small.modpoly in big
        let eval = |y: u16| -> u16 {
            let mut acc = 0u16;
            for &c in small.modpoly().iter().rev() {
                acc = big.mul(acc, y);
                acc = big.add(acc, (c % p) as u16);
            }
            acc
        };
        let root = (0..big.q() as u16)
            .find(|&y| eval(y) == 0)
            .ok_or(Error::NotASubfield(small.q(), big.q()))?;
        let mut forward = vec![0u16; small.q() as usize];
        let mut backward = HashMap::new();
        for v in 0..small.q() as u16 {
            // digits of v base p are the coefficients w.r.t. powers of the
            // subfield generator
            let mut img = 0u16;
            let mut x = v as u32;
            let mut pw = 1u16;
            for _ in 0..small.degree() {
                let digit = (x % p) as u16;
                img = big.add(img, big.mul(digit, pw));
                pw = big.mul(pw, root);
                x /= p;
            }
            forward[v as usize] = img;
            backward.insert(img, v);
        }
        if backward.len() != small.q() as usize {
            return Err(Error::NotASubfield(small.q(), big.q()));
        }
        Ok(SubfieldEmbedding {
            small: small.clone(),
            big: big.clone(),
            forward,
            backward,
        })
    }

    #[inline]
    pub fn push(&self, v: u16) -> u16 {
        self.forward[v as usize]
    }

    pub fn pull_back(&self, v: u16) -> Option<FieldElem> {
        self.backward.get(&v).map(|&w| self.small.elem(w))
    }
}

/// A basis of GF(q^m) over GF(q) together with the full expansion table.
pub struct ExtBasis {
    pub emb: SubfieldEmbedding,
    pub gamma: Vec<u16>,
    /// coords[v] = coefficients of v in the basis, each a GF(q) value.
    coords: Vec<Vec<u16>>,
}

impl ExtBasis {
    pub fn new(small: &Field, big: &Field, gamma: &[u16]) -> Result<ExtBasis> {
        let emb = SubfieldEmbedding::new(small, big)?;
        let m = (big.degree() / small.degree()) as usize;
        if gamma.len() != m {
            return Err(Error::NotABasis);
        }
        let q = small.q() as u64;
        let total = q.pow(m as u32);
        if total != big.q() as u64 {
            return Err(Error::NotABasis);
        }
        let mut coords: Vec<Option<Vec<u16>>> = vec![None; big.q() as usize];
        let mut digits = vec![0u16; m];
        loop {
            let mut v = 0u16;
            for (i, &d) in digits.iter().enumerate() {
                v = big.add(v, big.mul(emb.push(d), gamma[i]));
            }
            if coords[v as usize].is_some() {
                return Err(Error::NotABasis);
            }
            coords[v as usize] = Some(digits.clone());
            // odometer over the coefficient tuple
            let mut i = 0;
            while i < m {
                digits[i] += 1;
                if (digits[i] as u64) < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        let coords = coords.into_iter().map(|c| c.unwrap()).collect();
        Ok(ExtBasis {
            emb,
            gamma: gamma.to_vec(),
            coords,
        })
    }

    /// Polynomial basis {1, g, ..., g^(m-1)} with g the big field's primitive.
    pub fn polynomial(small: &Field, big: &Field) -> Result<ExtBasis> {
        if small.p() != big.p() || !big.degree().is_multiple_of(small.degree()) {
            return Err(Error::NotASubfield(small.q(), big.q()));
        }
        let m = (big.degree() / small.degree()) as usize;
        let g = big.primitive();
        let mut gamma = Vec::with_capacity(m);
        let mut acc = 1u16;
        for _ in 0..m {
            gamma.push(acc);
            acc = big.mul(acc, g);
        }
        ExtBasis::new(small, big, &gamma)
    }

    pub fn block_len(&self) -> usize {
        self.gamma.len()
    }

    /// Coordinates of a big-field element, each a GF(q) value.
    pub fn expand(&self, v: u16) -> &[u16] {
        &self.coords[v as usize]
    }

    /// Matrix of right multiplication by `a` in this basis: row i is the
    /// expansion of gamma_i * a. The map a -> M_a is a ring embedding.
    pub fn regular_rep(&self, a: u16) -> Mat {
        let m = self.block_len();
        let big = &self.emb.big;
        let mut rows = Vec::with_capacity(m);
        for &g in &self.gamma {
            rows.push(self.expand(big.mul(g, a)).to_vec());
        }
        Mat::from_rows(&self.emb.small, &rows)
    }
}
