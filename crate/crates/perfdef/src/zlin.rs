//! Exact linear algebra over Z/m.
//!
//! Everything downstream (cohomology of complexes, Čech classes, Ext groups,
//! obstruction classes) reduces to finitely generated abelian groups
//! annihilated by some modulus m.  Such a group is presented as a quotient
//! Z^n / (column span of a relation matrix), and every question about
//! kernels, images and subquotients is answered by a Smith-like normal form
//! computed directly in Z/m: Z/m is a quotient of Z, so gcd elimination with
//! integer Bezout coefficients diagonalizes any matrix with transforms
//! invertible mod m.

use std::fmt;

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Multiplicative inverse of `a` mod `m`, if gcd(a, m) = 1.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd(a as i128, m as i128);
    if g == 1 {
        Some((x.rem_euclid(m as i128)) as u64)
    } else {
        None
    }
}

/// Solve a*x = b (mod m).  Returns one solution.
pub fn solve_scalar(a: u64, b: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = gcd(a, m);
    if b % g != 0 {
        return None;
    }
    let m2 = m / g;
    let inv = mod_inv((a / g) % m2, m2)?;
    Some(((b / g) as u128 * inv as u128 % m2 as u128) as u64)
}

/// Find a unit u mod m with u*a = gcd(a, m) (mod m).
fn associate_unit(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = gcd(a, m);
    if g == 0 || a == 0 {
        return 1;
    }
    let a1 = a / g;
    let m1 = m / g;
    // a1 is a unit mod m1; lift its inverse to a unit mod m.
    let base = mod_inv(a1 % m1, m1).expect("a/g is a unit mod m/g");
    let mut u = base;
    loop {
        if gcd(u % m, m) == 1 {
            return u % m;
        }
        u += m1;
        debug_assert!(u < 2 * m);
    }
}

/// Dense matrix over Z/m, row-major, canonical entries in [0, m).
#[derive(Clone, PartialEq, Eq)]
pub struct ZnMat {
    pub m: u64,
    pub rows: usize,
    pub cols: usize,
    e: Vec<u64>,
}

impl fmt::Debug for ZnMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZnMat {}x{} mod {}", self.rows, self.cols, self.m)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                write!(f, "{:>4}", self.get(i, j))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl ZnMat {
    pub fn zero(m: u64, rows: usize, cols: usize) -> Self {
        ZnMat { m, rows, cols, e: vec![0; rows * cols] }
    }

    pub fn identity(m: u64, n: usize) -> Self {
        let mut a = Self::zero(m, n, n);
        for i in 0..n {
            a.set(i, i, 1 % m.max(1));
        }
        a
    }

    pub fn from_rows(m: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut a = Self::zero(m, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &x) in row.iter().enumerate() {
                a.set(i, j, x);
            }
        }
        a
    }

    /// Build from column vectors.
    pub fn from_cols(m: u64, ambient: usize, cols: &[Vec<u64>]) -> Self {
        let mut a = Self::zero(m, ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ambient);
            for (i, &x) in col.iter().enumerate() {
                a.set(i, j, x);
            }
        }
        a
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.e[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.e[i * self.cols + j] = v % self.m;
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    pub fn hstack(&self, other: &ZnMat) -> ZnMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.m, other.m);
        let mut a = ZnMat::zero(self.m, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                a.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                a.set(i, self.cols + j, other.get(i, j));
            }
        }
        a
    }

    pub fn mul(&self, other: &ZnMat) -> ZnMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.m, other.m);
        let mut a = ZnMat::zero(self.m, self.rows, other.cols);
        let m = self.m as u128;
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u128 * other.get(k, j) as u128) % m;
                }
                a.set(i, j, acc as u64);
            }
        }
        a
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, x.len());
        let m = self.m as u128;
        (0..self.rows)
            .map(|i| {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u128 * x[k] as u128) % m;
                }
                acc as u64
            })
            .collect()
    }

    pub fn add(&self, other: &ZnMat) -> ZnMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut a = self.clone();
        for i in 0..self.e.len() {
            a.e[i] = (self.e[i] + other.e[i]) % self.m;
        }
        a
    }

    pub fn neg(&self) -> ZnMat {
        let mut a = self.clone();
        for v in a.e.iter_mut() {
            *v = (self.m - *v) % self.m;
        }
        a
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self.get(a, j);
            self.set(a, j, self.get(b, j));
            self.set(b, j, t);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let t = self.get(i, a);
            self.set(i, a, self.get(i, b));
            self.set(i, b, t);
        }
    }

    /// rows (a, b) <- (p*a + q*b, r*a + s*b), coefficients given as i128.
    fn row_transform(&mut self, a: usize, b: usize, p: i128, q: i128, r: i128, s: i128) {
        let m = self.m as i128;
        for j in 0..self.cols {
            let x = self.get(a, j) as i128;
            let y = self.get(b, j) as i128;
            let na = (p * x + q * y).rem_euclid(m);
            let nb = (r * x + s * y).rem_euclid(m);
            self.set(a, j, na as u64);
            self.set(b, j, nb as u64);
        }
    }

    fn col_transform(&mut self, a: usize, b: usize, p: i128, q: i128, r: i128, s: i128) {
        let m = self.m as i128;
        for i in 0..self.rows {
            let x = self.get(i, a) as i128;
            let y = self.get(i, b) as i128;
            let na = (p * x + q * y).rem_euclid(m);
            let nb = (r * x + s * y).rem_euclid(m);
            self.set(i, a, na as u64);
            self.set(i, b, nb as u64);
        }
    }

    fn scale_row(&mut self, i: usize, u: u64) {
        let m = self.m as u128;
        for j in 0..self.cols {
            let v = (self.get(i, j) as u128 * u as u128 % m) as u64;
            self.set(i, j, v);
        }
    }
}

/// Smith-like normal form over Z/m: u * a * v = d with u, v invertible mod m
/// and d diagonal, each nonzero entry dividing m and d_i | d_{i+1}.
pub struct Snf {
    pub d: ZnMat,
    pub u: ZnMat,
    pub uinv: ZnMat,
    pub v: ZnMat,
    pub vinv: ZnMat,
}

impl Snf {
    /// Invariant factor of diagonal slot i as a divisor of m; slots past the
    /// diagonal or with zero entry correspond to the full cyclic group Z/m.
    pub fn factor(&self, i: usize) -> u64 {
        let n = self.d.rows.min(self.d.cols);
        if i >= n {
            return self.d.m;
        }
        let e = self.d.get(i, i);
        if e == 0 {
            self.d.m
        } else {
            gcd(e, self.d.m)
        }
    }
}

/// ideal-size of an entry in Z/m: gcd(e, m), with 0 mapping to m.
fn ideal(e: u64, m: u64) -> u64 {
    if e == 0 {
        m
    } else {
        gcd(e, m)
    }
}

pub fn smith_normal_form(a: &ZnMat) -> Snf {
    smith_normal_form_tracked(a, Track { u: true, uinv: true, v: true, vinv: true })
}

/// Which transform matrices to maintain; skipping unneeded ones saves a
/// large constant factor on wide matrices. Untracked outputs stay identity.
#[derive(Clone, Copy)]
pub struct Track {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
    pub vinv: bool,
}

pub fn smith_normal_form_tracked(a: &ZnMat, tr: Track) -> Snf {
    let m = a.m;
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = ZnMat::identity(m, if tr.u { rows } else { 0 });
    let mut uinv = ZnMat::identity(m, if tr.uinv { rows } else { 0 });
    let mut v = ZnMat::identity(m, if tr.v { cols } else { 0 });
    let mut vinv = ZnMat::identity(m, if tr.vinv { cols } else { 0 });

    // row op on d must be mirrored on u, and inverse op applied to uinv
    // columns; analogous for v.
    let n = rows.min(cols);
    for t in 0..n {
        'position: loop {
            // pivot: minimal ideal among remaining entries
            let mut best: Option<(usize, usize, u64)> = None;
            'pivot: for i in t..rows {
                for j in t..cols {
                    let e = d.get(i, j);
                    if e != 0 {
                        let w = ideal(e, m);
                        if best.map_or(true, |(_, _, bw)| w < bw) {
                            best = Some((i, j, w));
                            if w == 1 {
                                break 'pivot; // a unit pivot is optimal
                            }
                        }
                    }
                }
            }
            let (pi, pj, _) = match best {
                None => break 'position,
                Some(x) => x,
            };
            if pi != t {
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                uinv.swap_cols(t, pi);
            }
            if pj != t {
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                vinv.swap_rows(t, pj);
            }

            // clear column t
            let mut dirty = false;
            for i in t + 1..rows {
                let b = d.get(i, t);
                if b == 0 {
                    continue;
                }
                let p = d.get(t, t);
                if let Some(q) = solve_scalar(p, b, m) {
                    let qi = q as i128;
                    d.row_transform(t, i, 1, 0, -qi, 1);
                    u.row_transform(t, i, 1, 0, -qi, 1);
                    uinv.col_transform(t, i, 1, qi, 0, 1);
                } else {
                    let (g, s, tt) = egcd(p as i128, b as i128);
                    let (bp, ap) = (b as i128 / g, p as i128 / g);
                    d.row_transform(t, i, s, tt, -bp, ap);
                    u.row_transform(t, i, s, tt, -bp, ap);
                    // inverse of [[s, tt], [-bp, ap]] (det 1) is [[ap, -tt], [bp, s]]
                    uinv.col_transform(t, i, ap, bp, -tt, s);
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..cols {
                let b = d.get(t, j);
                if b == 0 {
                    continue;
                }
                let p = d.get(t, t);
                if let Some(q) = solve_scalar(p, b, m) {
                    let qi = q as i128;
                    d.col_transform(t, j, 1, 0, -qi, 1);
                    v.col_transform(t, j, 1, 0, -qi, 1);
                    vinv.row_transform(t, j, 1, qi, 0, 1);
                } else {
                    let (g, s, tt) = egcd(p as i128, b as i128);
                    let (bp, ap) = (b as i128 / g, p as i128 / g);
                    d.col_transform(t, j, s, tt, -bp, ap);
                    v.col_transform(t, j, s, tt, -bp, ap);
                    vinv.row_transform(t, j, ap, bp, -tt, s);
                    dirty = true;
                }
            }
            if dirty {
                continue 'position;
            }
            // column may have been refilled by row ops
            if (t + 1..rows).any(|i| d.get(i, t) != 0) {
                continue 'position;
            }
            // pivot must divide everything remaining, for the divisor chain
            let pw = ideal(d.get(t, t), m);
            if pw == 1 {
                break 'position; // unit pivot divides everything
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if ideal(d.get(i, j), m) % pw != 0 {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    d.row_transform(t, i, 1, 1, 0, 1);
                    u.row_transform(t, i, 1, 1, 0, 1);
                    uinv.col_transform(t, i, 1, 0, -1, 1);
                    continue 'position;
                }
                None => break 'position,
            }
        }
    }

    // normalize diagonal entries to divisors of m by unit scaling
    for t in 0..n {
        let e = d.get(t, t);
        if e == 0 {
            continue;
        }
        let g = gcd(e, m);
        if e != g {
            let w = associate_unit(e, m);
            let winv = mod_inv(w, m).expect("unit");
            d.scale_row(t, w);
            u.scale_row(t, w);
            if tr.uinv {
                for i in 0..rows {
                    let x = (uinv.get(i, t) as u128 * winv as u128 % m as u128) as u64;
                    uinv.set(i, t, x);
                }
            }
            debug_assert_eq!(d.get(t, t), g % m);
        }
    }

    Snf { d, u, uinv, v, vinv }
}

/// Spec-facing alias: (U, D, V) with U*a*V = D.
pub fn smith_like_normal_form(a: &ZnMat) -> (ZnMat, ZnMat, ZnMat) {
    let s = smith_normal_form(a);
    (s.u, s.d, s.v)
}

/// One solution x of a*x = b (mod m), if any.
pub fn solve(a: &ZnMat, b: &[u64]) -> Option<Vec<u64>> {
    let s = smith_normal_form_tracked(a, Track { u: true, uinv: false, v: true, vinv: false });
    solve_with(&s, a, b)
}

/// Solve using a precomputed normal form of `a`.
pub fn solve_with(s: &Snf, a: &ZnMat, b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(a.rows, b.len());
    let m = a.m;
    let c = s.u.mul_vec(b);
    let n = a.rows.min(a.cols);
    let mut y = vec![0u64; a.cols];
    for i in 0..a.rows {
        let di = if i < n { s.d.get(i, i) } else { 0 };
        if i < a.cols {
            y[i] = solve_scalar(di, c[i], m)?;
        } else if c[i] != 0 {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Generators of {x : a*x = 0 (mod m)} as columns.
pub fn kernel(a: &ZnMat) -> ZnMat {
    let s = smith_normal_form_tracked(a, Track { u: false, uinv: false, v: true, vinv: false });
    kernel_with(&s, a)
}

pub fn kernel_with(s: &Snf, a: &ZnMat) -> ZnMat {
    let m = a.m;
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for j in 0..a.cols {
        let f = s.factor(j); // annihilator exponent of slot j
        let g = m / f;
        if g % m == 0 && m > 1 {
            continue; // f == 1: no kernel in that slot beyond 0
        }
        let mut y = vec![0u64; a.cols];
        y[j] = g % m;
        if y[j] == 0 && m > 1 {
            continue;
        }
        gens.push(s.v.mul_vec(&y));
    }
    ZnMat::from_cols(m, a.cols, &gens)
}

/// Generators of {x : a*x in span(rels) (mod m)} as columns. Diagonalizing
/// the relation lattice turns the membership condition into one congruence
/// per row, avoiding a kernel over the widened matrix [a | rels].
pub fn kernel_mod(a: &ZnMat, rels: &ZnMat) -> ZnMat {
    if rels.cols == 0 {
        return kernel(a);
    }
    let m = a.m;
    let s = smith_normal_form_tracked(rels, Track { u: true, uinv: false, v: false, vinv: false });
    // in coordinates z = U*(a*x) the span of rels is the diagonal lattice
    // with slot orders f_i, so the condition is z_i = 0 (mod f_i)
    let mut b = s.u.mul(a);
    for i in 0..b.rows {
        let f = s.factor(i);
        if f != m {
            b.scale_row(i, m / f);
        }
    }
    kernel(&b)
}

/// A finite abelian group presented as Z^ambient / (columns of rels),
/// implicitly also modulo m in every coordinate.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub m: u64,
    pub ambient: usize,
    pub rels: ZnMat,
}

impl Presentation {
    pub fn free(m: u64, ambient: usize) -> Self {
        Presentation { m, ambient, rels: ZnMat::zero(m, ambient, 0) }
    }

    pub fn new(m: u64, ambient: usize, rels: ZnMat) -> Self {
        assert_eq!(rels.rows, ambient);
        Presentation { m, ambient, rels }
    }

    /// Is x in the span of the relations (i.e. zero in the group)?
    pub fn is_zero(&self, x: &[u64]) -> bool {
        solve(&self.rels, x).is_some()
    }

    pub fn eq_elems(&self, x: &[u64], y: &[u64]) -> bool {
        let m = self.m;
        let d: Vec<u64> = x.iter().zip(y).map(|(&a, &b)| (a + m - b % m) % m).collect();
        self.is_zero(&d)
    }
}

/// Subquotient (cycles mod boundaries) of Z^ambient over Z/m, with class
/// lifting, coboundary testing and enumeration.
#[derive(Clone)]
pub struct Subquotient {
    pub m: u64,
    pub ambient: usize,
    /// columns span the cycle lattice
    gens: ZnMat,
    gens_snf_u: ZnMat,
    gens_snf_v: ZnMat,
    gens_snf_d: ZnMat,
    /// class coords: c = u * y where gens*y is the cycle; factor i annihilates c_i
    u: ZnMat,
    uinv: ZnMat,
    factors: Vec<u64>,
    /// positions with factor > 1
    live: Vec<usize>,
}

impl fmt::Debug for Subquotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subquotient{:?}", self.invariants())
    }
}

impl Subquotient {
    /// cycles: column span of `cycles`; boundaries: column span of `bounds`
    /// (must lie inside the cycle span).
    pub fn new(m: u64, ambient: usize, cycles: ZnMat, bounds: &ZnMat) -> Self {
        assert_eq!(cycles.rows, ambient);
        assert_eq!(bounds.rows, ambient);
        let w = cycles.cols;
        // relations among the cycle coordinates: y with cycles*y in span(bounds)
        let rel = kernel_mod(&cycles, bounds);
        let s = smith_normal_form_tracked(&rel, Track { u: true, uinv: true, v: false, vinv: false });
        let factors: Vec<u64> = (0..w).map(|i| s.factor(i)).collect();
        let live: Vec<usize> = (0..w).filter(|&i| factors[i] > 1).collect();
        let gs = smith_normal_form_tracked(&cycles, Track { u: true, uinv: false, v: true, vinv: false });
        Subquotient {
            m,
            ambient,
            gens_snf_u: gs.u,
            gens_snf_v: gs.v,
            gens_snf_d: gs.d,
            gens: cycles,
            u: s.u,
            uinv: s.uinv,
            factors,
            live,
        }
    }

    /// Homology at B of  A --d_in--> B --d_out--> C  where the three groups
    /// are presented by (ambient, rels).
    pub fn homology(
        m: u64,
        d_in: &ZnMat,
        rels_b: &ZnMat,
        d_out: &ZnMat,
        rels_c: &ZnMat,
    ) -> Self {
        let ambient = rels_b.rows;
        assert_eq!(d_out.cols, ambient);
        assert_eq!(d_in.rows, ambient);
        let cycles = kernel_mod(d_out, rels_c);
        let bounds = d_in.hstack(rels_b);
        Subquotient::new(m, ambient, cycles, &bounds)
    }

    pub fn invariants(&self) -> Vec<u64> {
        self.live.iter().map(|&i| self.factors[i]).collect()
    }

    pub fn order(&self) -> u128 {
        self.live.iter().map(|&i| self.factors[i] as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.live.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.live.len()
    }

    /// Reduced class coordinates (one per live invariant factor) of a cycle,
    /// or None if x is not in the cycle span.
    pub fn class_of(&self, x: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(x.len(), self.ambient);
        let y = solve_with(
            &Snf {
                d: self.gens_snf_d.clone(),
                u: self.gens_snf_u.clone(),
                uinv: ZnMat::identity(self.m, 0),
                v: self.gens_snf_v.clone(),
                vinv: ZnMat::identity(self.m, 0),
            },
            &self.gens,
            x,
        )?;
        let c = self.u.mul_vec(&y);
        Some(self.live.iter().map(|&i| c[i] % self.factors[i]).collect())
    }

    pub fn is_boundary(&self, x: &[u64]) -> Option<bool> {
        self.class_of(x).map(|c| c.iter().all(|&v| v == 0))
    }

    /// A cycle representative of the given reduced class coordinates.
    pub fn lift(&self, class: &[u64]) -> Vec<u64> {
        assert_eq!(class.len(), self.live.len());
        let mut c = vec![0u64; self.factors.len()];
        for (k, &i) in self.live.iter().enumerate() {
            c[i] = class[k] % self.factors[i];
        }
        let y = self.uinv.mul_vec(&c);
        self.gens.mul_vec(&y)
    }

    pub fn zero_class(&self) -> Vec<u64> {
        vec![0; self.live.len()]
    }

    pub fn classes_eq(&self, a: &[u64], b: &[u64]) -> bool {
        a.iter()
            .zip(b)
            .zip(self.invariants())
            .all(|((&x, &y), f)| x % f == y % f)
    }

    pub fn add_classes(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(self.invariants())
            .map(|((&x, &y), f)| (x + y) % f)
            .collect()
    }

    pub fn neg_class(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(self.invariants())
            .map(|(&x, f)| (f - x % f) % f)
            .collect()
    }

    /// Iterate all classes (use only when order() is small).
    pub fn all_classes(&self) -> Vec<Vec<u64>> {
        let inv = self.invariants();
        let mut out = vec![vec![0u64; 0]];
        for f in inv {
            let mut next = Vec::new();
            for base in &out {
                for v in 0..f {
                    let mut c = base.clone();
                    c.push(v);
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }

    pub fn random_class<R: rand::Rng>(&self, rng: &mut R) -> Vec<u64> {
        self.invariants().iter().map(|&f| rng.gen_range(0..f)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn snf_single_entry_mod4() {
        let a = ZnMat::from_rows(4, &[vec![2]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d.get(0, 0), 2);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn snf_identity_mod9() {
        let a = ZnMat::identity(9, 2);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, a);
    }

    #[test]
    fn snf_cokernel_mod12() {
        // [[2,0],[0,6]] over Z/12: cokernel Z/2 x Z/6, order 12
        let a = ZnMat::from_rows(12, &[vec![2, 0], vec![0, 6]]);
        let s = smith_normal_form(&a);
        let f: Vec<u64> = (0..2).map(|i| s.factor(i)).collect();
        // cokernel orders = invariant factors of the quotient
        let mut orders: Vec<u64> = f.iter().map(|&d| d).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 6]);
        // brute-force oracle: |Z/12^2 / im| = 12
        let mut hit = std::collections::HashSet::new();
        for x in 0..12u64 {
            for y in 0..12u64 {
                hit.insert(((2 * x) % 12, (6 * y) % 12));
            }
        }
        assert_eq!(144 / hit.len(), 12);
    }

    #[test]
    fn solve_mod4() {
        // x*2 = 2 over Z/4 -> x in {1, 3}
        let a = ZnMat::from_rows(4, &[vec![2]]);
        let x = solve(&a, &[2]).unwrap();
        assert!(x[0] == 1 || x[0] == 3);
        assert!(solve(&a, &[1]).is_none());
    }

    #[test]
    fn kernel_mod3() {
        // kernel of [1,1] over Z/3 is generated by (1,2)
        let a = ZnMat::from_rows(3, &[vec![1, 1]]);
        let k = kernel(&a);
        let mut seen = std::collections::HashSet::new();
        for c0 in 0..3u64 {
            for j in 0..k.cols {
                let col = k.col(j);
                seen.insert(((c0 * col[0]) % 3, (c0 * col[1]) % 3));
            }
        }
        // brute force
        let mut expect = std::collections::HashSet::new();
        for x in 0..3u64 {
            for y in 0..3u64 {
                if (x + y) % 3 == 0 {
                    expect.insert((x, y));
                }
            }
        }
        // spanned set must equal expected kernel
        let mut span = std::collections::HashSet::new();
        span.insert((0u64, 0u64));
        for _ in 0..4 {
            let cur: Vec<_> = span.iter().cloned().collect();
            for (a0, a1) in cur {
                for j in 0..k.cols {
                    let col = k.col(j);
                    span.insert(((a0 + col[0]) % 3, (a1 + col[1]) % 3));
                }
            }
        }
        assert_eq!(span, expect);
        let _ = seen;
    }

    #[test]
    fn homology_two_term_mod4() {
        // [Z/4 --2--> Z/4]: H^0 = Z/2, H^1 = Z/2
        let m = 4;
        let d = ZnMat::from_rows(m, &[vec![2]]);
        let none = ZnMat::zero(m, 1, 0);
        let h0 = Subquotient::homology(m, &ZnMat::zero(m, 1, 0), &none, &d, &none);
        assert_eq!(h0.invariants(), vec![2]);
        let h1 = Subquotient::homology(m, &d, &none, &ZnMat::zero(m, 0, 1), &ZnMat::zero(m, 0, 0));
        assert_eq!(h1.invariants(), vec![2]);
    }

    #[test]
    fn subquotient_lift_project_roundtrip() {
        let m = 4;
        let d = ZnMat::from_rows(m, &[vec![2]]);
        let none = ZnMat::zero(m, 1, 0);
        let h1 = Subquotient::homology(m, &d, &none, &ZnMat::zero(m, 0, 1), &ZnMat::zero(m, 0, 0));
        for c in h1.all_classes() {
            let x = h1.lift(&c);
            let c2 = h1.class_of(&x).unwrap();
            assert!(h1.classes_eq(&c, &c2));
        }
    }

    fn arb_mat(m: u64) -> impl Strategy<Value = ZnMat> {
        (1usize..5, 1usize..5).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..m, r * c).prop_map(move |e| {
                let mut a = ZnMat::zero(m, r, c);
                for i in 0..r {
                    for j in 0..c {
                        a.set(i, j, e[i * c + j]);
                    }
                }
                a
            })
        })
    }

    proptest! {
        #[test]
        fn snf_correct(m in prop::sample::select(vec![2u64,3,4,8,9,12,16,27,36]),
                       seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..5);
            let mut a = ZnMat::zero(m, r, c);
            for i in 0..r { for j in 0..c { a.set(i, j, rng.gen_range(0..m)); } }
            let s = smith_normal_form(&a);
            // U a V = D
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            // U, V invertible
            prop_assert_eq!(s.u.mul(&s.uinv), ZnMat::identity(m, r));
            prop_assert_eq!(s.uinv.mul(&s.u), ZnMat::identity(m, r));
            prop_assert_eq!(s.v.mul(&s.vinv), ZnMat::identity(m, c));
            // D diagonal with divisor chain
            for i in 0..r { for j in 0..c {
                if i != j { prop_assert_eq!(s.d.get(i, j), 0); }
            }}
            let n = r.min(c);
            for i in 0..n {
                let e = s.d.get(i, i);
                if e != 0 { prop_assert_eq!(m % e, 0); }
            }
            for i in 0..n.saturating_sub(1) {
                let fi = s.factor(i);
                let fj = s.factor(i + 1);
                prop_assert_eq!(fj % fi, 0);
            }
        }

        #[test]
        fn kernel_and_solve_consistent(a in arb_mat(12), tgt in proptest::collection::vec(0u64..12, 1..5)) {
            let b: Vec<u64> = if tgt.len() == a.rows { tgt } else { vec![0; a.rows] };
            if let Some(x) = solve(&a, &b) {
                prop_assert_eq!(a.mul_vec(&x), b);
            }
            let k = kernel(&a);
            for j in 0..k.cols {
                let col = k.col(j);
                prop_assert!(a.mul_vec(&col).iter().all(|&v| v == 0));
            }
        }

        #[test]
        fn kernel_complete_small(seed in 0u64..300) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = [2u64, 4, 6][rng.gen_range(0..3)];
            let r = rng.gen_range(1..3);
            let c = rng.gen_range(1..3);
            let mut a = ZnMat::zero(m, r, c);
            for i in 0..r { for j in 0..c { a.set(i, j, rng.gen_range(0..m)); } }
            // brute-force kernel size
            let mut count = 0u64;
            let total = m.pow(c as u32);
            for idx in 0..total {
                let mut x = vec![0u64; c];
                let mut v = idx;
                for slot in x.iter_mut() { *slot = v % m; v /= m; }
                if a.mul_vec(&x).iter().all(|&w| w == 0) { count += 1; }
            }
            // spanned kernel size via enumeration of generator combinations
            let k = kernel(&a);
            let mut span = std::collections::HashSet::new();
            span.insert(vec![0u64; c]);
            loop {
                let before = span.len();
                let cur: Vec<_> = span.iter().cloned().collect();
                for x in cur {
                    for j in 0..k.cols {
                        let col = k.col(j);
                        let y: Vec<u64> = x.iter().zip(&col).map(|(&a0, &b0)| (a0 + b0) % m).collect();
                        span.insert(y);
                    }
                }
                if span.len() == before { break; }
            }
            prop_assert_eq!(span.len() as u64, count);
        }
    }
}
