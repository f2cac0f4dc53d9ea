//! Finite commutative rings presented by additive generators and structure
//! constants.  The additive group is a product of cyclic groups Z/n_i with
//! every n_i dividing a modulus N, and multiplication is the bilinear
//! extension of a generator-by-generator table.  This uniform presentation
//! covers Z/n, polynomial quotients, and products without any Groebner
//! machinery.

use crate::zlin::{solve, ZnMat};
use crate::{Error, Result, DEFAULT_MAX_ELEMENTS};
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    modulus: u64,
    orders: Vec<u64>,
    /// k*k table, row-major: mult[i*k + j] = e_i * e_j
    mult: Vec<Elem>,
    one: Elem,
    label: String,
}

/// Element coordinates with respect to the additive generators, canonical
/// residues in [0, n_i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem(pub Vec<u64>);

#[derive(Clone, Debug)]
pub struct FiniteRing(Arc<RingData>);

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for FiniteRing {}

impl FiniteRing {
    pub fn new(
        modulus: u64,
        orders: Vec<u64>,
        mult: Vec<Elem>,
        one: Elem,
        label: impl Into<String>,
    ) -> Self {
        let k = orders.len();
        assert_eq!(mult.len(), k * k);
        let data = RingData { modulus, orders: orders.clone(), mult, one, label: label.into() };
        let ring = FiniteRing(Arc::new(data));
        // canonicalize stored elements
        let canon_mult: Vec<Elem> =
            ring.0.mult.iter().map(|e| ring.canon(e)).collect();
        let canon_one = ring.canon(&ring.0.one);
        FiniteRing(Arc::new(RingData {
            modulus,
            orders,
            mult: canon_mult,
            one: canon_one,
            label: ring.0.label.clone(),
        }))
    }

    /// Z/n with generator 1.
    pub fn cyclic(n: u64) -> Self {
        FiniteRing::new(n, vec![n], vec![Elem(vec![1 % n])], Elem(vec![1 % n]), format!("Z/{n}"))
    }

    /// Z/n[x]/(f) for a monic polynomial f given by its coefficients
    /// c_0 + c_1 x + ... + c_{d-1} x^{d-1} + x^d.
    pub fn poly_quotient(n: u64, f_lower: &[u64], label: impl Into<String>) -> Self {
        let d = f_lower.len();
        assert!(d >= 1);
        // reduce x^d == -(c_0 + ... + c_{d-1} x^{d-1})
        let reduce = |mut poly: Vec<u64>| -> Vec<u64> {
            while poly.len() > d {
                let top = poly.pop().unwrap() % n;
                let deg = poly.len() - 1; // coefficient of x^{deg+1} removed? recompute below
                let _ = deg;
                let shift = poly.len() - d;
                for (i, &c) in f_lower.iter().enumerate() {
                    let sub = (top as u128 * c as u128 % n as u128) as u64;
                    let slot = &mut poly[shift + i];
                    *slot = (*slot + n - sub % n) % n;
                }
            }
            poly.truncate(d);
            poly.iter().map(|&c| c % n).collect()
        };
        let mut mult = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                // x^{i+j} reduced
                let mut poly = vec![0u64; i + j + 1];
                poly[i + j] = 1;
                let mut poly = poly;
                while poly.len() < d {
                    poly.push(0);
                }
                let r = reduce(poly);
                mult.push(Elem(r));
            }
        }
        let mut one = vec![0u64; d];
        one[0] = 1 % n;
        FiniteRing::new(n, vec![n; d], mult, Elem(one), label)
    }

    /// Product ring R1 x R2.
    pub fn product(a: &FiniteRing, b: &FiniteRing) -> Self {
        let ka = a.k();
        let kb = b.k();
        let modulus = lcm(a.modulus(), b.modulus());
        let mut orders = a.0.orders.clone();
        orders.extend_from_slice(&b.0.orders);
        let k = ka + kb;
        let embed_a = |e: &Elem| {
            let mut v = e.0.clone();
            v.extend(std::iter::repeat(0).take(kb));
            Elem(v)
        };
        let embed_b = |e: &Elem| {
            let mut v = vec![0u64; ka];
            v.extend_from_slice(&e.0);
            Elem(v)
        };
        let mut mult = vec![Elem(vec![0; k]); k * k];
        for i in 0..ka {
            for j in 0..ka {
                mult[i * k + j] = embed_a(&a.0.mult[i * ka + j]);
            }
        }
        for i in 0..kb {
            for j in 0..kb {
                mult[(ka + i) * k + (ka + j)] = embed_b(&b.0.mult[i * kb + j]);
            }
        }
        let mut one = a.one().0.clone();
        one.extend_from_slice(&b.one().0);
        FiniteRing::new(
            modulus,
            orders,
            mult,
            Elem(one),
            format!("{}x{}", a.label(), b.label()),
        )
    }

    /// Trivial square-zero extension O[eps*O]: elements a + eps*b with
    /// eps^2 = 0.
    pub fn dual_numbers(base: &FiniteRing) -> Self {
        let k = base.k();
        let kk = 2 * k;
        let mut orders = base.0.orders.clone();
        orders.extend_from_slice(&base.0.orders);
        let lift = |e: &Elem, hi: bool| {
            let mut v = vec![0u64; kk];
            for (i, &c) in e.0.iter().enumerate() {
                v[if hi { k + i } else { i }] = c;
            }
            Elem(v)
        };
        let zero = Elem(vec![0; kk]);
        let mut mult = vec![zero.clone(); kk * kk];
        for i in 0..k {
            for j in 0..k {
                let p = &base.0.mult[i * k + j];
                mult[i * kk + j] = lift(p, false);
                mult[i * kk + (k + j)] = lift(p, true);
                mult[(k + i) * kk + j] = lift(p, true);
                // eps^2 = 0 slot stays zero
            }
        }
        FiniteRing::new(
            base.modulus(),
            orders,
            mult,
            lift(base.one(), false),
            format!("{}[eps]", base.label()),
        )
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    pub fn orders(&self) -> &[u64] {
        &self.0.orders
    }

    pub fn k(&self) -> usize {
        self.0.orders.len()
    }

    pub fn size(&self) -> u128 {
        self.0.orders.iter().map(|&n| n as u128).product()
    }

    pub fn one(&self) -> &Elem {
        &self.0.one
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.k()])
    }

    pub fn canon(&self, e: &Elem) -> Elem {
        Elem(e.0.iter().zip(&self.0.orders).map(|(&c, &n)| c % n).collect())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.0.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(a.0.iter().zip(&self.0.orders).map(|(&x, &n)| (n - x % n) % n).collect())
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    /// Integer scalar action.
    pub fn int_mul(&self, c: i64, a: &Elem) -> Elem {
        Elem(
            a.0.iter()
                .zip(&self.0.orders)
                .map(|(&x, &n)| {
                    let c = (c.rem_euclid(n as i64)) as u64;
                    (c as u128 * x as u128 % n as u128) as u64
                })
                .collect(),
        )
    }

    /// Image of an integer under Z -> R.
    pub fn from_int(&self, c: i64) -> Elem {
        self.int_mul(c, self.one())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let k = self.k();
        let mut acc = self.zero();
        for i in 0..k {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..k {
                if b.0[j] == 0 {
                    continue;
                }
                let c = (a.0[i] as u128 * b.0[j] as u128 % self.0.modulus as u128) as i64;
                let term = self.int_mul(c, &self.0.mult[i * k + j]);
                acc = self.add(&acc, &term);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn eq(&self, a: &Elem, b: &Elem) -> bool {
        self.canon(a) == self.canon(b)
    }

    /// Relations diag(n_i) as a ZnMat over the modulus.
    pub fn rels(&self) -> ZnMat {
        let k = self.k();
        let mut r = ZnMat::zero(self.modulus(), k, k);
        for i in 0..k {
            r.set(i, i, self.0.orders[i] % self.modulus());
        }
        r
    }

    /// Additive matrix of multiplication by `a`.
    pub fn mult_matrix(&self, a: &Elem) -> ZnMat {
        let k = self.k();
        let mut mm = ZnMat::zero(self.modulus(), k, k);
        for j in 0..k {
            let mut basis = self.zero();
            basis.0[j] = 1 % self.0.orders[j];
            let col = self.mul(a, &basis);
            for i in 0..k {
                mm.set(i, j, col.0[i]);
            }
        }
        mm
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let orders = self.0.orders.clone();
        let total: u128 = self.size();
        (0..total).map(move |idx| {
            let mut v = Vec::with_capacity(orders.len());
            let mut rest = idx;
            for &n in &orders {
                v.push((rest % n as u128) as u64);
                rest /= n as u128;
            }
            Elem(v)
        })
    }

    pub fn guard_size(&self, bound: u128) -> Result<()> {
        if self.size() > bound {
            Err(Error::TooLarge(self.size()))
        } else {
            Ok(())
        }
    }

    /// Inverse of a, if a is a unit: solve a*x = 1 additively.
    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        let mm = self.mult_matrix(a);
        let sys = mm.hstack(&self.rels());
        let one = &self.0.one;
        let sol = solve(&sys, &one.0)?;
        Some(self.canon(&Elem(sol[..self.k()].to_vec())))
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.inv(a).is_some()
    }

    /// Unit power with integer exponent (negative exponents via inverse).
    pub fn unit_pow(&self, a: &Elem, e: i64) -> Option<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one().clone();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Some(acc)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    a / x * b
}

/// Report from `ring_check`; lists the first failing axiom with witness
/// generator indices.
#[derive(Debug)]
pub struct RingCheck {
    pub valid: bool,
    pub failures: Vec<(String, Vec<usize>)>,
}

pub fn ring_check(ring: &FiniteRing) -> RingCheck {
    let k = ring.k();
    let mut failures = Vec::new();
    for (i, &n) in ring.orders().iter().enumerate() {
        if n == 0 || ring.modulus() % n != 0 {
            failures.push(("order-divides-modulus".to_string(), vec![i]));
        }
    }
    let basis = |i: usize| {
        let mut e = ring.zero();
        e.0[i] = 1 % ring.orders()[i];
        e
    };
    // bilinear well-definedness: n_i * (e_i e_j) = 0
    'bilin: for i in 0..k {
        for j in 0..k {
            let p = ring.mul(&basis(i), &basis(j));
            if !ring.is_zero(&ring.int_mul(ring.orders()[i] as i64, &p)) {
                failures.push(("bilinearity".to_string(), vec![i, j]));
                break 'bilin;
            }
        }
    }
    'comm: for i in 0..k {
        for j in 0..k {
            let ab = ring.mul(&basis(i), &basis(j));
            let ba = ring.mul(&basis(j), &basis(i));
            if ab != ba {
                failures.push(("commutativity".to_string(), vec![i, j]));
                break 'comm;
            }
        }
    }
    'assoc: for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let lhs = ring.mul(&ring.mul(&basis(i), &basis(j)), &basis(l));
                let rhs = ring.mul(&basis(i), &ring.mul(&basis(j), &basis(l)));
                if lhs != rhs {
                    failures.push(("associativity".to_string(), vec![i, j, l]));
                    break 'assoc;
                }
            }
        }
    }
    for i in 0..k {
        let p = ring.mul(ring.one(), &basis(i));
        if p != basis(i) {
            failures.push(("unitality".to_string(), vec![i]));
            break;
        }
    }
    RingCheck { valid: failures.is_empty(), failures }
}

/// Unit group with multiplication table.
pub struct UnitGroup {
    pub elems: Vec<Elem>,
    pub table: Vec<Vec<usize>>,
}

pub fn units(ring: &FiniteRing) -> Result<UnitGroup> {
    ring.guard_size(DEFAULT_MAX_ELEMENTS)?;
    let elems: Vec<Elem> = ring.elements().filter(|e| ring.is_unit(e)).collect();
    let index = |e: &Elem| elems.iter().position(|x| x == e).unwrap();
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index(&ring.mul(a, b))).collect())
        .collect();
    Ok(UnitGroup { elems, table })
}

/// Is the ring local?  Returns the maximal ideal (the non-unit set) when it
/// is; checks that the non-units are closed under addition.
pub fn is_local(ring: &FiniteRing) -> Result<(bool, Vec<Elem>)> {
    ring.guard_size(1 << 12)?;
    let nonunits: Vec<Elem> = ring.elements().filter(|e| !ring.is_unit(e)).collect();
    for a in &nonunits {
        for b in &nonunits {
            if ring.is_unit(&ring.add(a, b)) {
                return Ok((false, nonunits));
            }
        }
    }
    Ok((true, nonunits))
}

/// Ring homomorphism determined by the images of the additive generators.
#[derive(Clone, Debug, PartialEq)]
pub struct RingHom {
    pub source: FiniteRing,
    pub target: FiniteRing,
    pub images: Vec<Elem>,
}

impl RingHom {
    pub fn new(source: FiniteRing, target: FiniteRing, images: Vec<Elem>) -> Self {
        assert_eq!(images.len(), source.k());
        RingHom { source, target, images }
    }

    pub fn identity(ring: &FiniteRing) -> Self {
        let images = (0..ring.k())
            .map(|i| {
                let mut e = ring.zero();
                e.0[i] = 1 % ring.orders()[i];
                e
            })
            .collect();
        RingHom { source: ring.clone(), target: ring.clone(), images }
    }

    pub fn apply(&self, e: &Elem) -> Elem {
        let mut acc = self.target.zero();
        for (i, &c) in e.0.iter().enumerate() {
            acc = self.target.add(&acc, &self.target.int_mul(c as i64, &self.images[i]));
        }
        acc
    }

    pub fn compose(&self, after: &RingHom) -> RingHom {
        assert_eq!(self.target, after.source);
        let images = self.images.iter().map(|e| after.apply(e)).collect();
        RingHom { source: self.source.clone(), target: after.target.clone(), images }
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.source;
        let t = &self.target;
        for (i, img) in self.images.iter().enumerate() {
            if !t.is_zero(&t.int_mul(s.orders()[i] as i64, img)) {
                return Err(Error::Invalid(format!("hom does not respect order of generator {i}")));
            }
        }
        if self.apply(s.one()) != *t.one() {
            return Err(Error::Invalid("hom does not preserve 1".into()));
        }
        let basis = |i: usize| {
            let mut e = s.zero();
            e.0[i] = 1 % s.orders()[i];
            e
        };
        for i in 0..s.k() {
            for j in 0..s.k() {
                let lhs = self.apply(&s.mul(&basis(i), &basis(j)));
                let rhs = t.mul(&self.apply(&basis(i)), &self.apply(&basis(j)));
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "hom not multiplicative on generators ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Is the hom surjective (as a map of additive groups it must hit every
    /// target generator)?
    pub fn is_surjective(&self) -> bool {
        (0..self.target.k()).all(|i| {
            let mut e = self.target.zero();
            e.0[i] = 1 % self.target.orders()[i];
            self.preimage(&e).is_some()
        })
    }

    /// Deterministic preimage of a target element, if any.
    pub fn preimage(&self, e: &Elem) -> Option<Elem> {
        let m = self.target.modulus().max(self.source.modulus());
        let ks = self.source.k();
        let kt = self.target.k();
        let mut sys = ZnMat::zero(m, kt, ks + kt);
        for (j, img) in self.images.iter().enumerate() {
            for i in 0..kt {
                sys.set(i, j, img.0[i]);
            }
        }
        for j in 0..kt {
            sys.set(j, ks + j, self.target.orders()[j] % m);
        }
        let sol = solve(&sys, &e.0)?;
        Some(self.source.canon(&Elem(sol[..ks].to_vec())))
    }
}
