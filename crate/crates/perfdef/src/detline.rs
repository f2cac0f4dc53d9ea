//! The signed graded Picard groupoid Pic^Z: graded lines (r, L) with
//! (r, L) ∗ (r′, L′) = (r+r′, L⊗L′), symmetry (−1)^{rr′}, multiplication
//! (rr′, L^{⊗r′} ⊗ L′^{⊗r}); determinant of stalkwise strictly perfect
//! sheaf complexes; desk-scale K₀ and K₁ of finite (products of) local rings.

use std::collections::BTreeMap;

use crate::cechhom::SheafComplex;
use crate::module::{elementary_reduce, ModMap, RMatrix};
use crate::ring::{units, Elem, FiniteRing};
use crate::site::PosetSite;
use crate::{Error, Result};

fn same_site(a: &PosetSite, b: &PosetSite) -> bool {
    a.labels == b.labels
        && a.rings == b.rings
        && (0..a.len()).all(|p| (0..a.len()).all(|q| a.le(p, q) == b.le(p, q)))
}

/// Connected components of the comparability graph.
pub fn components(site: &PosetSite) -> Vec<usize> {
    let n = site.len();
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in 0..n {
                if (site.le(p, q) || site.le(q, p)) && comp[p] != comp[q] {
                    let c = comp[p].min(comp[q]);
                    comp[p] = c;
                    comp[q] = c;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    comp
}

/// A graded line (r, L): locally constant rank plus an invertible sheaf
/// presented by a unit transition cocycle on 1-chains (stalks are O itself).
#[derive(Clone, Debug)]
pub struct GradedLine {
    pub site: PosetSite,
    pub rank: Vec<i64>,
    units: BTreeMap<(usize, usize), Elem>,
}

impl GradedLine {
    pub fn new(site: PosetSite, rank: Vec<i64>, units: BTreeMap<(usize, usize), Elem>) -> Result<Self> {
        let l = GradedLine { site, rank, units };
        l.validate()?;
        Ok(l)
    }

    pub fn trivial(site: &PosetSite, rank: i64) -> Self {
        let units = site
            .chains(1)
            .iter()
            .map(|c| ((c[0], c[1]), site.rings[c[1]].one().clone()))
            .collect();
        GradedLine { site: site.clone(), rank: vec![rank; site.len()], units }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank.len() != self.site.len() {
            return Err(Error::Dimension("rank function length".into()));
        }
        let comp = components(&self.site);
        for p in 0..self.site.len() {
            for q in 0..self.site.len() {
                if comp[p] == comp[q] && self.rank[p] != self.rank[q] {
                    return Err(Error::Invalid("rank not locally constant".into()));
                }
            }
        }
        for c in self.site.chains(1) {
            let u = self
                .units
                .get(&(c[0], c[1]))
                .ok_or_else(|| Error::Invalid(format!("missing transition unit {}≤{}", c[0], c[1])))?;
            if !self.site.rings[c[1]].is_unit(u) {
                return Err(Error::NotInvertible);
            }
        }
        for t in self.site.chains(2) {
            let (p, q, s) = (t[0], t[1], t[2]);
            let rs = &self.site.rings[s];
            let lhs = self.unit(p, s);
            let rhs = rs.mul(&self.unit(q, s), &self.site.res(q, s).apply(&self.unit(p, q)));
            if !rs.eq(&lhs, &rhs) {
                return Err(Error::NotACocycle);
            }
        }
        Ok(())
    }

    pub fn unit(&self, p: usize, q: usize) -> Elem {
        if p == q {
            self.site.rings[p].one().clone()
        } else {
            self.units[&(p, q)].clone()
        }
    }

    /// Inverse in the Pic^Z group: rank negates, line dualizes.
    pub fn inverse(&self) -> GradedLine {
        let units = self
            .units
            .iter()
            .map(|(&(p, q), u)| ((p, q), self.site.rings[q].inv(u).expect("transition unit")))
            .collect();
        GradedLine {
            site: self.site.clone(),
            rank: self.rank.iter().map(|r| -r).collect(),
            units,
        }
    }

    /// Same Pic^Z class: equal ranks and unit cocycles differing by a unit
    /// coboundary (decided by enumeration of unit 0-cochains).
    pub fn same_class(&self, other: &GradedLine, max_elements: u128) -> Result<bool> {
        if !same_site(&self.site, &other.site) {
            return Err(Error::SiteMismatch("graded lines on different sites".into()));
        }
        if self.rank != other.rank {
            return Ok(false);
        }
        let ratio: BTreeMap<(usize, usize), Elem> = self
            .site
            .chains(1)
            .iter()
            .map(|c| {
                let (p, q) = (c[0], c[1]);
                let rq = &self.site.rings[q];
                let inv = rq.inv(&other.unit(p, q)).expect("unit");
                ((p, q), rq.mul(&self.unit(p, q), &inv))
            })
            .collect();
        unit_cocycle_is_coboundary(&self.site, &ratio, max_elements)
    }
}

/// Is a unit 1-cocycle the coboundary v_q · res(v_p)^{-1} of a unit
/// 0-cochain?  Exhaustive over unit 0-cochains, guarded by max_elements.
pub fn unit_cocycle_is_coboundary(
    site: &PosetSite,
    cocycle: &BTreeMap<(usize, usize), Elem>,
    max_elements: u128,
) -> Result<bool> {
    let ones = site.chains(1);
    if ones.is_empty() {
        return Ok(true);
    }
    let unit_lists: Vec<Vec<Elem>> = site.rings.iter().map(|r| units(r).map(|u| u.elems)).collect::<Result<_>>()?;
    let mut total: u128 = 1;
    for l in &unit_lists {
        total = total.saturating_mul(l.len() as u128);
        if total > max_elements {
            return Err(Error::TooLarge(total));
        }
    }
    let mut idx = vec![0usize; site.len()];
    'outer: loop {
        let v: Vec<Elem> = idx.iter().enumerate().map(|(p, &i)| unit_lists[p][i].clone()).collect();
        let mut ok = true;
        for c in &ones {
            let (p, q) = (c[0], c[1]);
            let rq = &site.rings[q];
            let vp = site.res(p, q).apply(&v[p]);
            let vp_inv = rq.inv(&vp).expect("unit image");
            let cob = rq.mul(&v[q], &vp_inv);
            if !rq.eq(&cob, &cocycle[&(p, q)]) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(true);
        }
        for pos in 0..idx.len() {
            idx[pos] += 1;
            if idx[pos] < unit_lists[pos].len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        return Ok(false);
    }
}

/// Isomorphism of graded lines: a unit scalar per stalk intertwining the
/// transition cocycles.
#[derive(Clone, Debug)]
pub struct GradedLineIso {
    pub source: GradedLine,
    pub target: GradedLine,
    pub scalars: Vec<Elem>,
}

impl GradedLineIso {
    pub fn new(source: GradedLine, target: GradedLine, scalars: Vec<Elem>) -> Result<Self> {
        let iso = GradedLineIso { source, target, scalars };
        iso.validate()?;
        Ok(iso)
    }

    pub fn validate(&self) -> Result<()> {
        if !same_site(&self.source.site, &self.target.site) {
            return Err(Error::SiteMismatch("iso between lines on different sites".into()));
        }
        if self.source.rank != self.target.rank {
            return Err(Error::Invalid("graded line iso must preserve ranks".into()));
        }
        let site = &self.source.site;
        for (p, s) in self.scalars.iter().enumerate() {
            if !site.rings[p].is_unit(s) {
                return Err(Error::NotInvertible);
            }
        }
        for c in site.chains(1) {
            let (p, q) = (c[0], c[1]);
            let rq = &site.rings[q];
            // v_q · u_src = u_tgt · res(v_p)
            let lhs = rq.mul(&self.scalars[q], &self.source.unit(p, q));
            let rhs = rq.mul(&self.target.unit(p, q), &site.res(p, q).apply(&self.scalars[p]));
            if !rq.eq(&lhs, &rhs) {
                return Err(Error::Invalid(format!("iso not compatible on {}≤{}", p, q)));
            }
        }
        Ok(())
    }
}

/// (r, L) ∗ (r′, L′) = (r+r′, L⊗L′); the accompanying symmetry scalar at
/// each stalk is (−1)^{r_p r′_p}.
pub fn pic_add(a: &GradedLine, b: &GradedLine) -> Result<(GradedLine, Vec<Elem>)> {
    if !same_site(&a.site, &b.site) {
        return Err(Error::SiteMismatch("pic_add on different sites".into()));
    }
    let site = &a.site;
    let rank = a.rank.iter().zip(&b.rank).map(|(x, y)| x + y).collect();
    let units = site
        .chains(1)
        .iter()
        .map(|c| {
            let (p, q) = (c[0], c[1]);
            ((p, q), site.rings[q].mul(&a.unit(p, q), &b.unit(p, q)))
        })
        .collect();
    let symmetry = (0..site.len())
        .map(|p| {
            let e = a.rank[p] * b.rank[p];
            if e.rem_euclid(2) == 0 {
                site.rings[p].one().clone()
            } else {
                site.rings[p].neg(site.rings[p].one())
            }
        })
        .collect();
    Ok((GradedLine { site: site.clone(), rank, units }, symmetry))
}

/// (r, L) ⊗ (r′, L′) = (rr′, L^{⊗r′} ⊗ L′^{⊗r}) (negative powers = duals).
pub fn pic_mul(a: &GradedLine, b: &GradedLine) -> Result<GradedLine> {
    if !same_site(&a.site, &b.site) {
        return Err(Error::SiteMismatch("pic_mul on different sites".into()));
    }
    let site = &a.site;
    let rank = a.rank.iter().zip(&b.rank).map(|(x, y)| x * y).collect();
    let units = site
        .chains(1)
        .iter()
        .map(|c| {
            let (p, q) = (c[0], c[1]);
            let rq = &site.rings[q];
            let ua = rq.unit_pow(&a.unit(p, q), b.rank[q]).expect("unit power");
            let ub = rq.unit_pow(&b.unit(p, q), a.rank[q]).expect("unit power");
            ((p, q), rq.mul(&ua, &ub))
        })
        .collect();
    Ok(GradedLine { site: site.clone(), rank, units })
}

/// det E = (Σ(−1)^n rank E^n, line with transition ∏_n det(ρ^n)^{(−1)^n}).
pub fn det_complex(e: &SheafComplex) -> Result<GradedLine> {
    if !e.is_stalkwise_strictly_perfect() {
        return Err(Error::NotStrictlyPerfect);
    }
    let site = &e.site;
    let rank: Vec<i64> = (0..site.len())
        .map(|p| {
            let c = &e.stalks[p];
            (c.lo..=c.hi).map(|n| if n.rem_euclid(2) == 0 { c.rank(n) as i64 } else { -(c.rank(n) as i64) }).sum()
        })
        .collect();
    let mut units = BTreeMap::new();
    for c in site.chains(1) {
        let (p, q) = (c[0], c[1]);
        let rq = &site.rings[q];
        let (lo, hi) = e.span();
        let mut u = rq.one().clone();
        for n in lo..=hi {
            let m = e.rho_at(p, q, n);
            if m.rows != m.cols {
                return Err(Error::Invalid(format!(
                    "degree-{} ranks differ along {}≤{}: determinant line undefined",
                    n, p, q
                )));
            }
            if m.rows == 0 {
                continue;
            }
            let d = m.det();
            let exp = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            let pu = rq.unit_pow(&d, exp).ok_or(Error::NotInvertible)?;
            u = rq.mul(&u, &pu);
        }
        units.insert((p, q), u);
    }
    GradedLine::new(site.clone(), rank, units)
}

/// Degreewise maps of sheaf complexes (one matrix per stalk and degree),
/// commuting with differentials and restrictions.
#[derive(Clone, Debug)]
pub struct SheafChainMap {
    pub source: SheafComplex,
    pub target: SheafComplex,
    comps: BTreeMap<(usize, i64), RMatrix>,
}

impl SheafChainMap {
    pub fn new(
        source: SheafComplex,
        target: SheafComplex,
        comps: BTreeMap<(usize, i64), RMatrix>,
    ) -> Result<Self> {
        let f = SheafChainMap { source, target, comps };
        let site = &f.source.site;
        for p in 0..site.len() {
            let (lo, hi) = (f.source.stalks[p].lo.min(f.target.stalks[p].lo), f.source.stalks[p].hi.max(f.target.stalks[p].hi));
            for n in lo..=hi {
                let c = f.comp(p, n);
                // chain map at the stalk
                let lhs = f.comp(p, n + 1).mul(&f.source.stalks[p].diff(n));
                let rhs = f.target.stalks[p].diff(n).mul(&c);
                if !crate::site::map_eq(&lhs, &rhs, &f.target.stalks[p].term(n + 1)) {
                    return Err(Error::Invalid(format!("not a chain map at stalk {} degree {}", p, n)));
                }
                // compatibility with restrictions
                for q in 0..site.len() {
                    if !site.lt(p, q) {
                        continue;
                    }
                    let a = f.comp(q, n).mul(&f.source.rho_at(p, q, n));
                    let b = f.target.rho_at(p, q, n).mul(&c.map_hom(site.res(p, q)));
                    if !crate::site::map_eq(&a, &b, &f.target.stalks[q].term(n)) {
                        return Err(Error::Invalid(format!("map not compatible with restriction {}≤{}", p, q)));
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn comp(&self, p: usize, n: i64) -> RMatrix {
        self.comps.get(&(p, n)).cloned().unwrap_or_else(|| {
            RMatrix::zero(
                &self.source.site.rings[p],
                self.target.stalks[p].term(n).gens,
                self.source.stalks[p].rank(n),
            )
        })
    }
}

/// Determinant-functor axiom witness for a termwise-split short exact
/// sequence 0 → A →i B →π C → 0: the iso det(B) ≅ det(A) ∗ det(C) whose
/// stalk scalar is the inverse alternating product of det[i | s] for a
/// chosen splitting s.
pub fn det_of_ses(incl: &SheafChainMap, proj: &SheafChainMap) -> Result<GradedLineIso> {
    let a = &incl.source;
    let b = &incl.target;
    let c = &proj.target;
    let site = &a.site;
    let det_a = det_complex(a)?;
    let det_b = det_complex(b)?;
    let det_c = det_complex(c)?;
    let (sum, _) = pic_add(&det_a, &det_c)?;
    let (lo, hi) = b.span();
    let mut scalars = Vec::new();
    for p in 0..site.len() {
        let ring = &site.rings[p];
        let mut t = ring.one().clone();
        for n in lo..=hi {
            let ra = a.stalks[p].rank(n);
            let rb = b.stalks[p].rank(n);
            let rc = c.stalks[p].rank(n);
            if ra + rc != rb {
                return Err(Error::NotExact);
            }
            if rb == 0 {
                continue;
            }
            // π ∘ i must vanish
            let pi = proj.comp(p, n).mul(&incl.comp(p, n));
            if !pi.is_zero() {
                return Err(Error::NotExact);
            }
            // choose a splitting s of π degreewise: solve π s = id columnwise
            let free_b = crate::module::FpModule::free(ring, rb);
            let free_c = crate::module::FpModule::free(ring, rc);
            let pmap = ModMap::new(free_b.clone(), free_c.clone(), proj.comp(p, n))?;
            let mut s = RMatrix::zero(ring, rb, rc);
            for j in 0..rc {
                let mut ej = vec![ring.zero(); rc];
                ej[j] = ring.one().clone();
                let (sol, _, _) = pmap.solve(&ej).ok_or(Error::NotExact)?;
                for i in 0..rb {
                    s.set(i, j, sol[i].clone());
                }
            }
            // adapted basis matrix [i | s] must be invertible
            let mut tmat = RMatrix::zero(ring, rb, rb);
            let ic = incl.comp(p, n);
            for i in 0..rb {
                for j in 0..ra {
                    tmat.set(i, j, ic.get(i, j).clone());
                }
                for j in 0..rc {
                    tmat.set(i, ra + j, s.get(i, j).clone());
                }
            }
            let d = tmat.det();
            let exp = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            let pu = ring.unit_pow(&d, exp).ok_or(Error::NotExact)?;
            t = ring.mul(&t, &pu);
        }
        scalars.push(ring.inv(&t).expect("unit"));
    }
    GradedLineIso::new(det_b, sum, scalars)
}

/// K₀ of a finite (product of) local ring(s): free abelian of rank equal to
/// the number of primitive idempotents (connected components of Spec).
pub fn k0(ring: &FiniteRing) -> Result<usize> {
    ring.guard_size(1 << 16)?;
    let mut idems: Vec<Elem> = Vec::new();
    for e in ring.elements() {
        if ring.eq(&ring.mul(&e, &e), &e) && !ring.is_zero(&e) {
            idems.push(e);
        }
    }
    // e ≤ f iff ef = e; count the minimal nonzero idempotents
    let minimal = idems
        .iter()
        .filter(|e| {
            !idems.iter().any(|f| {
                !ring.eq(f, e) && ring.eq(&ring.mul(e, f), f)
            })
        })
        .count();
    Ok(minimal)
}

/// K₁ class of an invertible matrix over a local ring: the unit from its
/// elementary factorization (equals the determinant).
pub fn k1_class(mat: &RMatrix) -> Result<Elem> {
    Ok(elementary_reduce(mat)?.unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;
    use crate::site::{point_poset, pseudo_circle_poset};

    fn z(n: u64) -> FiniteRing {
        FiniteRing::cyclic(n)
    }

    fn pc_line(site: &PosetSite, us: [i64; 4]) -> GradedLine {
        // pseudo-circle 1-chains in lexicographic order: (0,2),(0,3),(1,2),(1,3)
        let chains = site.chains(1);
        let units = chains
            .iter()
            .zip(us)
            .map(|(c, u)| ((c[0], c[1]), site.rings[c[1]].from_int(u)))
            .collect();
        GradedLine::new(site.clone(), vec![1; 4], units).unwrap()
    }

    #[test]
    fn pic_add_symmetry_signs() {
        let site = PosetSite::constant(&point_poset(), &z(4));
        let zero = GradedLine::trivial(&site, 0);
        let one = GradedLine::trivial(&site, 1);
        let (s00, sym00) = pic_add(&zero, &zero).unwrap();
        assert_eq!(s00.rank, vec![0]);
        assert_eq!(sym00[0], z(4).from_int(1));
        let (s11, sym11) = pic_add(&one, &one).unwrap();
        assert_eq!(s11.rank, vec![2]);
        assert_eq!(sym11[0], z(4).from_int(-1));
    }

    #[test]
    fn pseudo_circle_nontrivial_line_squares_trivial() {
        let site = PosetSite::constant(&pseudo_circle_poset(), &z(4));
        let l = pc_line(&site, [1, 1, 1, -1]);
        let triv = GradedLine::trivial(&site, 1);
        assert!(!l.same_class(&triv, 1 << 16).unwrap());
        let (sq, _) = pic_add(&l, &l).unwrap();
        let mut t2 = GradedLine::trivial(&site, 2);
        t2.rank = vec![2; 4];
        assert!(sq.same_class(&t2, 1 << 16).unwrap());
    }

    #[test]
    fn pic_mul_unit_and_zero() {
        let site = PosetSite::constant(&pseudo_circle_poset(), &z(4));
        let l = pc_line(&site, [1, 1, 1, -1]);
        let one = GradedLine::trivial(&site, 1);
        let prod = pic_mul(&one, &l).unwrap();
        assert_eq!(prod.rank, vec![1; 4]);
        assert!(prod.same_class(&l, 1 << 16).unwrap());
        let mut l0 = l.clone();
        l0.rank = vec![0; 4];
        let z0 = pic_mul(&l0, &l0).unwrap();
        assert_eq!(z0.rank, vec![0; 4]);
        assert!(z0.same_class(&GradedLine::trivial(&site, 0), 1 << 16).unwrap());
        let t2 = GradedLine::trivial(&site, 2);
        let t3 = GradedLine::trivial(&site, 3);
        assert_eq!(pic_mul(&t2, &t3).unwrap().rank, vec![6; 4]);
    }

    #[test]
    fn det_complex_examples() {
        let r = z(4);
        let site = PosetSite::constant(&pseudo_circle_poset(), &r);
        // O² in degree 0
        let e2 = SheafComplex::constant(&site, &Complex::concentrated(&r, 0, 2));
        let d2 = det_complex(&e2).unwrap();
        assert_eq!(d2.rank, vec![2; 4]);
        assert!(d2.same_class(&GradedLine::trivial(&site, 2), 1 << 16).unwrap());
        // acyclic [O →id O]
        let acyclic = Complex::from_free(&r, 0, &[1, 1], vec![RMatrix::identity(&r, 1)]).unwrap();
        let ea = SheafComplex::constant(&site, &acyclic);
        let da = det_complex(&ea).unwrap();
        assert_eq!(da.rank, vec![0; 4]);
        assert!(da.same_class(&GradedLine::trivial(&site, 0), 1 << 16).unwrap());
    }

    #[test]
    fn det_complex_twisted_line() {
        // rank-1 degree-0 sheaf with transition units (1,1,1,−1) over Z/4:
        // nontrivial determinant class
        let r = z(4);
        let site = PosetSite::constant(&pseudo_circle_poset(), &r);
        let mut rho = BTreeMap::new();
        let chains = site.chains(1);
        let us = [1i64, 1, 1, -1];
        for p in 0..4 {
            rho.insert((p, p), {
                let mut m = BTreeMap::new();
                m.insert(0i64, RMatrix::identity(&r, 1));
                m
            });
        }
        for (c, u) in chains.iter().zip(us) {
            let mut m = BTreeMap::new();
            m.insert(0i64, RMatrix::from_ints(&r, &[vec![u]]));
            rho.insert((c[0], c[1]), m);
        }
        let stalks = vec![Complex::concentrated(&r, 0, 1); 4];
        let e = SheafComplex::new(site.clone(), stalks, rho).unwrap();
        let d = det_complex(&e).unwrap();
        assert_eq!(d.rank, vec![1; 4]);
        assert!(!d.same_class(&GradedLine::trivial(&site, 1), 1 << 16).unwrap());
    }

    #[test]
    fn det_shift_inverts() {
        let r = z(4);
        let site = PosetSite::constant(&pseudo_circle_poset(), &r);
        let c = Complex::from_free(&r, 0, &[1, 1], vec![RMatrix::from_ints(&r, &[vec![2]])]).unwrap();
        let e = SheafComplex::constant(&site, &c);
        let e1 = SheafComplex::constant(&site, &c.shift(1));
        let d = det_complex(&e).unwrap();
        let d1 = det_complex(&e1).unwrap();
        assert_eq!(d1.rank, d.inverse().rank);
        assert!(d1.same_class(&d.inverse(), 1 << 16).unwrap());
    }

    #[test]
    fn det_of_direct_sum_scalar_one() {
        let r = z(4);
        let site = PosetSite::constant(&pseudo_circle_poset(), &r);
        let a = Complex::concentrated(&r, 0, 1);
        let c = Complex::concentrated(&r, 0, 2);
        let b = a.direct_sum(&c);
        let sa = SheafComplex::constant(&site, &a);
        let sb = SheafComplex::constant(&site, &b);
        let sc = SheafComplex::constant(&site, &c);
        let mut icomps = BTreeMap::new();
        let mut pcomps = BTreeMap::new();
        for p in 0..4 {
            icomps.insert((p, 0i64), RMatrix::from_ints(&r, &[vec![1], vec![0], vec![0]]));
            pcomps.insert((p, 0i64), RMatrix::from_ints(&r, &[vec![0, 1, 0], vec![0, 0, 1]]));
        }
        let incl = SheafChainMap::new(sa, sb.clone(), icomps).unwrap();
        let proj = SheafChainMap::new(sb, sc, pcomps).unwrap();
        let iso = det_of_ses(&incl, &proj).unwrap();
        for s in &iso.scalars {
            assert_eq!(*s, r.from_int(1));
        }
        assert_eq!(iso.target.rank, vec![3; 4]);
    }

    #[test]
    fn det_of_cone_type_ses_ranks_add() {
        // A = O in degree 0 included into B = [O →id O] (degrees −1, 0)
        // with quotient C = O in degree −1: ranks (1) + (−1) = 0
        let r = z(4);
        let site = PosetSite::constant(&point_poset(), &r);
        let a = Complex::concentrated(&r, 0, 1);
        let b = Complex::from_free(&r, -1, &[1, 1], vec![RMatrix::identity(&r, 1)]).unwrap();
        let c = Complex::concentrated(&r, -1, 1);
        let sa = SheafComplex::constant(&site, &a);
        let sb = SheafComplex::constant(&site, &b);
        let sc = SheafComplex::constant(&site, &c);
        let mut icomps = BTreeMap::new();
        icomps.insert((0usize, 0i64), RMatrix::identity(&r, 1));
        let mut pcomps = BTreeMap::new();
        pcomps.insert((0usize, -1i64), RMatrix::identity(&r, 1));
        let incl = SheafChainMap::new(sa, sb.clone(), icomps).unwrap();
        let proj = SheafChainMap::new(sb, sc, pcomps).unwrap();
        let iso = det_of_ses(&incl, &proj).unwrap();
        assert_eq!(iso.source.rank, vec![0]);
        assert_eq!(iso.target.rank, vec![0]);
    }

    #[test]
    fn stupid_truncation_iterated_det() {
        // det(E) ≅ det(E⁰ in degree 0) ∗ det(E¹ in degree 1) for a 2-term E
        let r = z(9);
        let site = PosetSite::constant(&point_poset(), &r);
        let e = Complex::from_free(&r, 0, &[2, 1], vec![RMatrix::from_ints(&r, &[vec![3, 3]])]).unwrap();
        let se = SheafComplex::constant(&site, &e);
        let d = det_complex(&se).unwrap();
        let d0 = det_complex(&SheafComplex::constant(&site, &Complex::concentrated(&r, 0, 2))).unwrap();
        let d1 = det_complex(&SheafComplex::constant(&site, &Complex::concentrated(&r, 1, 1).shift(0))).unwrap();
        let (sum, _) = pic_add(&d0, &d1).unwrap();
        assert_eq!(d.rank, sum.rank);
        assert!(d.same_class(&sum, 1 << 16).unwrap());
    }

    #[test]
    fn k0_counts_local_factors() {
        assert_eq!(k0(&z(4)).unwrap(), 1);
        assert_eq!(k0(&z(9)).unwrap(), 1);
        assert_eq!(k0(&z(6)).unwrap(), 2);
        let prod = FiniteRing::product(&z(4), &z(9));
        assert_eq!(k0(&prod).unwrap(), 2);
    }

    #[test]
    fn k1_examples() {
        let r = z(4);
        assert_eq!(k1_class(&RMatrix::identity(&r, 2)).unwrap(), r.from_int(1));
        let m = RMatrix::from_ints(&r, &[vec![1, 2], vec![2, 1]]);
        assert_eq!(k1_class(&m).unwrap(), r.from_int(1));
        // stabilization: diag(m, 1) has the same class
        let stab = RMatrix::from_ints(&r, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        assert_eq!(k1_class(&stab).unwrap(), k1_class(&m).unwrap());
        // agrees with the determinant
        assert_eq!(k1_class(&m).unwrap(), m.det());
    }

    #[test]
    fn pic_mul_distributes_over_add_on_ranks_and_cocycles() {
        let site = PosetSite::constant(&pseudo_circle_poset(), &z(4));
        let l = pc_line(&site, [1, 1, 1, -1]);
        let a = GradedLine::trivial(&site, 1);
        let (sum, _) = pic_add(&a, &l).unwrap();
        let m = pc_line(&site, [1, 1, -1, 1]);
        let lhs = pic_mul(&m, &sum).unwrap();
        let (rhs, _) = pic_add(&pic_mul(&m, &a).unwrap(), &pic_mul(&m, &l).unwrap()).unwrap();
        assert_eq!(lhs.rank, rhs.rank);
        assert!(lhs.same_class(&rhs, 1 << 16).unwrap());
    }
}
