//! Exact arithmetic in GF(q) for prime powers q = p^e >= 3.
//!
//! Elements are identified by a canonical index in `0..q`: the index of the
//! element with polynomial-basis coefficients (c_0, ..., c_{e-1}) over GF(p)
//! is sum c_i p^i. Index 0 is the additive identity, index 1 the
//! multiplicative identity. The modulus polynomial is the lexicographically
//! smallest monic irreducible of degree e (coefficients compared low-to-high),
//! and the distinguished generator `alpha` of GF(q)* is the element of
//! smallest index with multiplicative order q - 1, so a field is determined
//! by (p, e) alone and identical across runs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order (element indices are stored in `u16`).
pub const MAX_Q: u64 = u16::MAX as u64;

/// Orders up to this bound get a full q x q multiplication table and a
/// q-entry inversion table; larger fields fall back to direct polynomial
/// arithmetic.
pub const TABLE_LIMIT: u64 = 1 << 12;

/// An element of GF(q), stored as its canonical index.
///
/// Elements carry no field reference; all arithmetic goes through the
/// [`FieldSpec`] they belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical index in `0..q`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic context for GF(p^e).
#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Monic irreducible modulus of degree e over GF(p), coefficients
    /// low-to-high (length e + 1, last entry 1). For e = 1 this is `x`.
    modulus: Vec<u16>,
    alpha: FieldElement,
    /// Row-major q x q product table (`[a * q + b]`), empty above TABLE_LIMIT.
    mul_table: Vec<u16>,
    /// `[a]` holds a^-1 for a != 0, empty above TABLE_LIMIT.
    inv_table: Vec<u16>,
}

impl FieldSpec {
    /// Build GF(p^e). Deterministic: the modulus and `alpha` depend only on
    /// (p, e).
    pub fn new(p: u64, e: u32) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e < 1 {
            return Err(Error::BadIndex(format!("extension degree {e} < 1")));
        }
        let q = (p as u128)
            .checked_pow(e)
            .ok_or(Error::FieldTooLarge(u128::MAX))?;
        if q < 3 {
            return Err(Error::FieldTooSmall(q as u64));
        }
        if q > MAX_Q as u128 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u64;

        let modulus = smallest_irreducible(p, e);
        let mut spec = FieldSpec {
            p,
            e,
            q,
            modulus,
            alpha: FieldElement(0),
            mul_table: Vec::new(),
            inv_table: Vec::new(),
        };
        spec.alpha = spec.find_alpha();
        if q <= TABLE_LIMIT {
            spec.build_tables();
        }
        Ok(Arc::new(spec))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Generator of the multiplicative group, smallest canonical index.
    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// Modulus coefficients, low-to-high, length e + 1.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    /// Two specs describe the same field iff (p, e, modulus) agree.
    pub fn compatible(&self, other: &FieldSpec) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Element with the given canonical index.
    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::IndexOutOfRange {
                index,
                limit: self.q,
            });
        }
        Ok(FieldElement(index as u16))
    }

    /// All q elements in index order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q as u16).map(FieldElement).collect()
    }

    fn check(&self, a: FieldElement) {
        assert!(
            (a.0 as u64) < self.q,
            "element index {} out of range for GF({})",
            a.0,
            self.q
        );
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if self.e == 1 {
            return FieldElement(((a.0 as u64 + b.0 as u64) % self.p) as u16);
        }
        let mut out = 0u64;
        let mut pow = 1u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        for _ in 0..self.e {
            out += ((x + y) % self.p) * pow;
            x /= self.p;
            y /= self.p;
            pow *= self.p;
        }
        FieldElement(out as u16)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        if self.e == 1 {
            return FieldElement(((self.p - a.0 as u64) % self.p) as u16);
        }
        let mut out = 0u64;
        let mut pow = 1u64;
        let mut x = a.0 as u64;
        for _ in 0..self.e {
            out += ((self.p - x % self.p) % self.p) * pow;
            x /= self.p;
            pow *= self.p;
        }
        FieldElement(out as u16)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if !self.mul_table.is_empty() {
            return FieldElement(self.mul_table[a.0 as usize * self.q as usize + b.0 as usize]);
        }
        self.mul_direct(a, b)
    }

    fn mul_direct(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let pa = self.to_poly(a);
        let pb = self.to_poly(b);
        let prod = poly_mul_mod(self.p, &pa, &pb, &self.modulus);
        self.element_from_poly(&prod)
    }

    /// Multiplicative inverse; `DivisionByZero` on 0.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !self.inv_table.is_empty() {
            return Ok(FieldElement(self.inv_table[a.0 as usize]));
        }
        // a^(q-2) = a^-1 in GF(q)*.
        Ok(self.pow(a, self.q - 2))
    }

    /// Square-and-multiply exponentiation; `pow(a, 0) = 1` for every a.
    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        self.check(a);
        let mut base = a;
        let mut acc = FieldElement(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = if self.mul_table.is_empty() {
                    self.mul_direct(acc, base)
                } else {
                    self.mul(acc, base)
                };
            }
            base = if self.mul_table.is_empty() {
                self.mul_direct(base, base)
            } else {
                self.mul(base, base)
            };
            n >>= 1;
        }
        acc
    }

    fn to_poly(&self, a: FieldElement) -> Vec<u16> {
        let mut coeffs = vec![0u16; self.e as usize];
        let mut x = a.0 as u64;
        for c in coeffs.iter_mut() {
            *c = (x % self.p) as u16;
            x /= self.p;
        }
        coeffs
    }

    fn element_from_poly(&self, coeffs: &[u16]) -> FieldElement {
        let mut out = 0u64;
        for &c in coeffs.iter().rev() {
            out = out * self.p + c as u64;
        }
        FieldElement(out as u16)
    }

    /// Smallest index whose multiplicative order is exactly q - 1, using the
    /// factored-order test g^((q-1)/f) != 1 for every prime f | q - 1.
    fn find_alpha(&self) -> FieldElement {
        let group = self.q - 1;
        let factors = prime_factors(group);
        'cand: for idx in 1..self.q {
            let g = FieldElement(idx as u16);
            for &f in &factors {
                if self.pow(g, group / f) == FieldElement(1) {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("GF(q)* is cyclic, a generator always exists");
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let group = q - 1;
        // exp/log along the alpha power chain, then fill the product table
        // from them instead of q^2 polynomial multiplications.
        let mut exp = vec![0u16; group];
        let mut log = vec![0usize; q];
        let mut cur = FieldElement(1);
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0;
            log[cur.0 as usize] = i;
            cur = self.mul_direct(cur, self.alpha);
        }
        debug_assert_eq!(cur, FieldElement(1), "alpha order must divide q - 1");

        let mut mul_table = vec![0u16; q * q];
        for a in 1..q {
            let row = a * q;
            let la = log[a];
            for b in 1..q {
                mul_table[row + b] = exp[(la + log[b]) % group];
            }
        }
        let mut inv_table = vec![0u16; q];
        for a in 1..q {
            inv_table[a] = exp[(group - log[a]) % group];
        }
        self.mul_table = mul_table;
        self.inv_table = inv_table;
    }
}

/// Serializes as `GF p=<p> e=<e> mod=<c_0,...,c_e> alpha=<index>`.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "GF p={} e={} mod={} alpha={}",
            self.p,
            self.e,
            coeffs.join(","),
            self.alpha.0
        )
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Parses the `GF p=... e=... mod=... alpha=...` line and rebuilds the
    /// field, rejecting lines that disagree with the canonical construction.
    fn from_str(s: &str) -> Result<FieldSpec> {
        let bad = |msg: &str| Error::Parse(format!("field line: {msg}"));
        let mut parts = s.split_whitespace();
        if parts.next() != Some("GF") {
            return Err(bad("missing GF tag"));
        }
        let mut p = None;
        let mut e = None;
        let mut modulus = None;
        let mut alpha = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            match key {
                "p" => p = Some(value.parse::<u64>().map_err(|_| bad("bad p"))?),
                "e" => e = Some(value.parse::<u32>().map_err(|_| bad("bad e"))?),
                "mod" => {
                    let coeffs: std::result::Result<Vec<u16>, _> =
                        value.split(',').map(|c| c.parse::<u16>()).collect();
                    modulus = Some(coeffs.map_err(|_| bad("bad modulus"))?);
                }
                "alpha" => alpha = Some(value.parse::<u16>().map_err(|_| bad("bad alpha"))?),
                other => return Err(bad(&format!("unknown key {other}"))),
            }
        }
        let (p, e) = match (p, e) {
            (Some(p), Some(e)) => (p, e),
            _ => return Err(bad("missing p or e")),
        };
        let spec = FieldSpec::new(p, e)?;
        if let Some(m) = modulus {
            if m != spec.modulus {
                return Err(bad("modulus differs from the canonical choice"));
            }
        }
        if let Some(a) = alpha {
            if a != spec.alpha.0 {
                return Err(bad("alpha differs from the canonical choice"));
            }
        }
        Ok(Arc::try_unwrap(spec).unwrap_or_else(|arc| {
            // Fresh Arc with refcount 1; this branch is unreachable.
            FieldSpec {
                p: arc.p,
                e: arc.e,
                q: arc.q,
                modulus: arc.modulus.clone(),
                alpha: arc.alpha,
                mul_table: arc.mul_table.clone(),
                inv_table: arc.inv_table.clone(),
            }
        }))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Lexicographically smallest monic irreducible of degree e over GF(p),
/// comparing coefficient lists low-to-high. For e = 1 this is `x`.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u16> {
    if e == 1 {
        return vec![0, 1];
    }
    let deg = e as usize;
    let mut coeffs = vec![0u16; deg];
    loop {
        let mut poly: Vec<u16> = coeffs.clone();
        poly.push(1);
        if is_irreducible(p, &poly) {
            return poly;
        }
        // Advance (c_0, ..., c_{e-1}) in lex order: last coefficient fastest.
        let mut i = deg;
        loop {
            debug_assert!(i > 0, "an irreducible of every degree exists over GF(p)");
            i -= 1;
            coeffs[i] += 1;
            if (coeffs[i] as u64) < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(p: u64, poly: &[u16]) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u128).pow(d as u32);
        for v in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = v;
            for _ in 0..d {
                g.push((x % p as u128) as u16);
                x /= p as u128;
            }
            g.push(1);
            if poly_rem_is_zero(p, poly, &g) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, a: &[u16], g: &[u16]) -> bool {
    let mut rem: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap() % p;
        if lead != 0 {
            let shift = rem.len() - 1 - dg;
            for (i, &gc) in g.iter().enumerate() {
                let sub = lead * gc as u64 % p;
                let slot = &mut rem[shift + i];
                *slot = (*slot + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c % p == 0)
}

/// (a * b) mod m over GF(p); inputs have length deg m, output too.
fn poly_mul_mod(p: u64, a: &[u16], b: &[u16], m: &[u16]) -> Vec<u16> {
    let deg = m.len() - 1;
    let mut prod = vec![0u64; 2 * deg - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    // Reduce: m is monic, so eliminate top terms by shifted subtraction.
    for i in (deg..prod.len()).rev() {
        let lead = prod[i];
        if lead != 0 {
            let shift = i - deg;
            for (j, &mc) in m.iter().enumerate() {
                let sub = lead * mc as u64 % p;
                prod[shift + j] = (prod[shift + j] + p - sub) % p;
            }
        }
    }
    prod[..deg].iter().map(|&c| c as u16).collect()
}
