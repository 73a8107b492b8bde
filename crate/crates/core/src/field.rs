//! Table-driven arithmetic in small finite fields and sesqui-morphisms.
//!
//! Elements of GF(p^k) are encoded as integers `0..q` whose base-`p` digits
//! are the coefficients of the polynomial representative (lowest degree
//! first). All arithmetic goes through precomputed `q x q` tables.

use std::fmt;
use std::sync::Arc;

use crate::Error;

/// A field element, as its base-`p` digit encoding.
pub type Elem = u8;

/// Largest supported field order.
pub const MAX_ORDER: usize = 256;

/// Why a candidate involution fails to be a sesqui-morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SesquiDefect {
    /// `sigma(1) = 0`, so `x -> sigma(x)/sigma(1)` is undefined.
    UndefinedQuotient,
    /// The quotient map is not additive at `(a, b)`.
    NotAdditive(Elem, Elem),
    /// The quotient map is not multiplicative at `(a, b)`.
    NotMultiplicative(Elem, Elem),
}

impl fmt::Display for SesquiDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SesquiDefect::UndefinedQuotient => write!(f, "UndefinedQuotient (sigma(1) = 0)"),
            SesquiDefect::NotAdditive(a, b) => {
                write!(f, "quotient map not additive at ({a}, {b})")
            }
            SesquiDefect::NotMultiplicative(a, b) => {
                write!(f, "quotient map not multiplicative at ({a}, {b})")
            }
        }
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    poly: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field GF(p^k) with `q = p^k <= 256`.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.poly == other.0.poly)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Remainder of `a` modulo the monic-normalisable `m` over GF(p).
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while a.len() > dm {
        let top = a.pop().unwrap();
        if top == 0 {
            continue;
        }
        let f = top * lead_inv % p;
        let shift = a.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - f * c % p) % p;
        }
    }
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue mod a prime")
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    if k <= 1 {
        return true;
    }
    // Try every monic divisor of degree 1..=k/2.
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem(poly.to_vec(), &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut x: usize, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = (x % p as usize) as u32;
            x /= p as usize;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> usize {
    ds.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
}

impl Field {
    /// Builds GF(char^degree) from an irreducible polynomial given by its
    /// coefficients, lowest degree first.
    ///
    /// For `degree == 1` the polynomial is irrelevant and may be empty.
    pub fn new(char: u32, degree: u32, poly: &[u32]) -> Result<Field, Error> {
        if !is_prime(char) {
            return Err(Error::NotPrime(char));
        }
        let q = (char as u64).checked_pow(degree.max(1)).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as usize;
        let k = degree.max(1);
        let p = char;
        let poly: Vec<u32> = if k == 1 {
            vec![0, 1]
        } else {
            let mut v: Vec<u32> = poly.iter().map(|c| c % p).collect();
            while v.last() == Some(&0) {
                v.pop();
            }
            if v.len() != k as usize + 1 || !is_irreducible(&v, p) {
                return Err(Error::ReduciblePoly(poly.to_vec()));
            }
            // Normalise to monic.
            let li = mod_inv(*v.last().unwrap(), p);
            v.iter().map(|c| c * li % p).collect()
        };

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as Elem;
                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(prod, &poly, p);
                r.resize(k as usize, 0);
                mul[a * q + b] = undigits(&r, p) as Elem;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem;
            }
        }
        Ok(Field(Arc::new(Tables {
            p,
            k,
            q,
            poly: if k == 1 { vec![] } else { poly },
            add,
            mul,
            neg,
            inv,
        })))
    }

    /// Built-in fields for `q` in {2, 3, 4, 5, 7, 8, 9, 16}.
    pub fn gf(q: usize) -> Result<Field, Error> {
        let (p, k, poly): (u32, u32, &[u32]) = match q {
            2 => (2, 1, &[]),
            3 => (3, 1, &[]),
            5 => (5, 1, &[]),
            7 => (7, 1, &[]),
            4 => (2, 2, &[1, 1, 1]),
            8 => (2, 3, &[1, 1, 0, 1]),
            9 => (3, 2, &[1, 0, 1]),
            16 => (2, 4, &[1, 1, 0, 0, 1]),
            _ => return Err(Error::NoBuiltinField(q)),
        };
        Field::new(p, k, poly)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    /// Monic irreducible polynomial, lowest degree first; empty for prime fields.
    pub fn poly(&self) -> &[u32] {
        &self.0.poly
    }

    pub fn is_binary(&self) -> bool {
        self.0.q == 2
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|a| a as Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.0.q).map(|a| a as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.0.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }

    /// Multiplicative inverse. `inv(0)` is 0; callers check for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0, "inverse of zero");
        self.0.inv[a as usize]
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

/// Named kinds of sesqui-morphism accepted by [`Sesqui::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaSpec {
    Identity,
    Negation,
    /// `x -> x^(p^j)`.
    Frobenius(u32),
    Table(Vec<Elem>),
}

impl fmt::Display for SigmaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaSpec::Identity => write!(f, "identity"),
            SigmaSpec::Negation => write!(f, "negation"),
            SigmaSpec::Frobenius(j) => write!(f, "frobenius {j}"),
            SigmaSpec::Table(t) => {
                write!(f, "table")?;
                for x in t {
                    write!(f, " {x}")?;
                }
                Ok(())
            }
        }
    }
}

/// A validated sesqui-morphism: an involution `sigma` whose quotient
/// `x -> sigma(x)/sigma(1)` is a field automorphism.
#[derive(Clone)]
pub struct Sesqui {
    field: Field,
    table: Arc<[Elem]>,
    spec: SigmaSpec,
}

impl PartialEq for Sesqui {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.table == other.table
    }
}

impl Eq for Sesqui {}

impl fmt::Debug for Sesqui {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sesqui({:?}, {})", self.field, self.spec)
    }
}

impl Sesqui {
    pub fn new(field: &Field, spec: SigmaSpec) -> Result<Sesqui, Error> {
        let q = field.order();
        let table: Vec<Elem> = match &spec {
            SigmaSpec::Identity => field.elements().collect(),
            SigmaSpec::Negation => field.elements().map(|a| field.neg(a)).collect(),
            SigmaSpec::Frobenius(j) => {
                let e = (field.characteristic() as u64).pow(*j % field.degree());
                field.elements().map(|a| field.pow(a, e)).collect()
            }
            SigmaSpec::Table(t) => {
                if t.len() != q || t.iter().any(|&x| x as usize >= q) {
                    return Err(Error::BadSigmaTable(format!(
                        "expected {q} entries in 0..{q}"
                    )));
                }
                t.clone()
            }
        };
        let mut seen = vec![false; q];
        for &x in &table {
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::BadSigmaTable("not a permutation".into()));
            }
        }
        for a in field.elements() {
            if table[table[a as usize] as usize] != a {
                return Err(Error::NotInvolution(a));
            }
        }
        let s1 = table[1];
        if s1 == 0 {
            return Err(Error::NotSesqui(SesquiDefect::UndefinedQuotient));
        }
        let quot = |a: Elem| field.div(table[a as usize], s1);
        for a in field.elements() {
            for b in field.elements() {
                if quot(field.add(a, b)) != field.add(quot(a), quot(b)) {
                    return Err(Error::NotSesqui(SesquiDefect::NotAdditive(a, b)));
                }
                if quot(field.mul(a, b)) != field.mul(quot(a), quot(b)) {
                    return Err(Error::NotSesqui(SesquiDefect::NotMultiplicative(a, b)));
                }
            }
        }
        Ok(Sesqui {
            field: field.clone(),
            table: table.into(),
            spec,
        })
    }

    pub fn identity(field: &Field) -> Sesqui {
        Sesqui::new(field, SigmaSpec::Identity).expect("identity is a sesqui-morphism")
    }

    /// Negation, which coincides with the identity in characteristic 2.
    pub fn negation(field: &Field) -> Sesqui {
        Sesqui::new(field, SigmaSpec::Negation).expect("negation is a sesqui-morphism")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn spec(&self) -> &SigmaSpec {
        &self.spec
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a as usize]
    }

    /// `sigma(1)`.
    #[inline]
    pub fn one(&self) -> Elem {
        self.table[1]
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn builtin_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16] {
            let f = Field::gf(q).unwrap();
            assert_eq!(f.order(), q);
            check_axioms(&f);
        }
    }

    #[test]
    fn small_examples() {
        let f2 = Field::new(2, 1, &[1]).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f4 = Field::new(2, 2, &[1, 1, 1]).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        let f3 = Field::new(3, 1, &[1]).unwrap();
        assert_eq!(f3.mul(2, 2), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(Field::new(4, 1, &[]), Err(Error::NotPrime(4)));
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(matches!(
            Field::new(2, 2, &[1, 0, 1]),
            Err(Error::ReduciblePoly(_))
        ));
        assert!(matches!(Field::new(2, 9, &[]), Err(Error::FieldTooLarge(512))));
        // degree mismatch
        assert!(matches!(
            Field::new(2, 3, &[1, 1, 1]),
            Err(Error::ReduciblePoly(_))
        ));
    }

    #[test]
    fn sesqui_examples() {
        let f2 = Field::gf(2).unwrap();
        assert!(Sesqui::identity(&f2).is_identity());
        let f3 = Field::gf(3).unwrap();
        let neg = Sesqui::new(&f3, SigmaSpec::Negation).unwrap();
        assert_eq!(neg.one(), 2);
        assert_eq!(
            Sesqui::new(&f2, SigmaSpec::Table(vec![1, 0])),
            Err(Error::NotSesqui(SesquiDefect::UndefinedQuotient))
        );
    }

    #[test]
    fn frobenius_involutions() {
        let f4 = Field::gf(4).unwrap();
        let fr = Sesqui::new(&f4, SigmaSpec::Frobenius(1)).unwrap();
        assert_eq!(fr.apply(2), 3);
        let f8 = Field::gf(8).unwrap();
        assert!(matches!(
            Sesqui::new(&f8, SigmaSpec::Frobenius(1)),
            Err(Error::NotInvolution(_))
        ));
    }

    #[test]
    fn sesqui_quotient_is_automorphism() {
        for q in [2, 3, 4, 5, 7, 9] {
            let f = Field::gf(q).unwrap();
            for spec in [SigmaSpec::Identity, SigmaSpec::Negation, SigmaSpec::Frobenius(1)] {
                let Ok(s) = Sesqui::new(&f, spec) else { continue };
                let inv1 = f.inv(s.one());
                for a in f.elements() {
                    for b in f.elements() {
                        let qa = f.mul(s.apply(a), inv1);
                        let qb = f.mul(s.apply(b), inv1);
                        assert_eq!(f.mul(s.apply(f.add(a, b)), inv1), f.add(qa, qb));
                        assert_eq!(f.mul(s.apply(f.mul(a, b)), inv1), f.mul(qa, qb));
                    }
                }
            }
        }
    }

    #[test]
    fn scaled_negation_is_rejected_when_not_involutive() {
        // x -> 2x over GF(5): 2*2 = 4 != 1, so not an involution.
        let f5 = Field::gf(5).unwrap();
        let t: Vec<Elem> = f5.elements().map(|a| f5.mul(2, a)).collect();
        assert!(matches!(
            Sesqui::new(&f5, SigmaSpec::Table(t)),
            Err(Error::NotInvolution(_))
        ));
    }
}
