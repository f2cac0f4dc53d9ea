//! Finite ringed poset sites (Alexandrov topology), sheaves of modules as
//! covariant functors with upward restrictions, nerve-cochain sheaf
//! cohomology, and the standard small posets used throughout.

use std::collections::BTreeMap;

use crate::module::{FpModule, ModElem, RMatrix};
use crate::ring::{units, Elem, FiniteRing, RingHom};
use crate::zlin::{Subquotient, ZnMat};
use crate::{Error, Result};

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

/// A finite poset with a ring per element and functorial restriction homs
/// O(p) → O(q) for p ≤ q.
#[derive(Clone, Debug)]
pub struct PosetSite {
    pub labels: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    pub rings: Vec<FiniteRing>,
    res: BTreeMap<(usize, usize), RingHom>,
}

/// A poset skeleton: labels plus covering relations.
#[derive(Clone, Debug)]
pub struct Poset {
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Full ≤ relation as an n×n boolean table (reflexive-transitive closure).
    pub fn leq_table(&self) -> Vec<bool> {
        let n = self.labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in &self.covers {
            leq[a * n + b] = true;
        }
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in 0..n {
                    if !leq[a * n + b] {
                        continue;
                    }
                    for c in 0..n {
                        if leq[b * n + c] && !leq[a * n + c] {
                            leq[a * n + c] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        leq
    }
}

impl PosetSite {
    pub fn new(
        labels: Vec<String>,
        leq: Vec<bool>,
        rings: Vec<FiniteRing>,
        res: BTreeMap<(usize, usize), RingHom>,
    ) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n * n || rings.len() != n {
            return Err(Error::Dimension("site table sizes".into()));
        }
        let site = PosetSite { labels, n, leq, rings, res };
        site.validate()?;
        Ok(site)
    }

    /// Constant-ring site from a poset skeleton: identity restrictions.
    pub fn constant(poset: &Poset, ring: &FiniteRing) -> Self {
        let n = poset.labels.len();
        let leq = poset.leq_table();
        let mut res = BTreeMap::new();
        for p in 0..n {
            for q in 0..n {
                if leq[p * n + q] {
                    res.insert((p, q), RingHom::identity(ring));
                }
            }
        }
        PosetSite { labels: poset.labels.clone(), n, leq, rings: vec![ring.clone(); n], res }
    }

    /// Site with one ring hom applied along every strict relation is not
    /// generally functorial; this builder takes a ring per element and a hom
    /// for every covering pair, then closes under composition (checking
    /// consistency).
    pub fn from_homs(
        poset: &Poset,
        rings: Vec<FiniteRing>,
        cover_homs: &BTreeMap<(usize, usize), RingHom>,
    ) -> Result<Self> {
        let n = poset.labels.len();
        let leq = poset.leq_table();
        let mut res: BTreeMap<(usize, usize), RingHom> = BTreeMap::new();
        for (p, ring) in rings.iter().enumerate() {
            res.insert((p, p), RingHom::identity(ring));
        }
        for ((a, b), h) in cover_homs {
            res.insert((*a, *b), h.clone());
        }
        loop {
            let mut added = Vec::new();
            for (&(a, b), h1) in &res {
                for (&(b2, c), h2) in &res {
                    if b != b2 || a == c || res.contains_key(&(a, c)) {
                        continue;
                    }
                    added.push(((a, c), h1.compose(h2)));
                }
            }
            if added.is_empty() {
                break;
            }
            for (k, v) in added {
                res.entry(k).or_insert(v);
            }
        }
        PosetSite::new(poset.labels.clone(), leq, rings, res)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for p in 0..n {
            if !self.le(p, p) {
                return Err(Error::SiteMismatch("order not reflexive".into()));
            }
            for q in 0..n {
                if p != q && self.le(p, q) && self.le(q, p) {
                    return Err(Error::SiteMismatch("order not antisymmetric".into()));
                }
                for s in 0..n {
                    if self.le(p, q) && self.le(q, s) && !self.le(p, s) {
                        return Err(Error::SiteMismatch("order not transitive".into()));
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                if !self.le(p, q) {
                    continue;
                }
                let h = self
                    .res
                    .get(&(p, q))
                    .ok_or_else(|| Error::SiteMismatch(format!("missing restriction {}≤{}", p, q)))?;
                if h.source != self.rings[p] || h.target != self.rings[q] {
                    return Err(Error::SiteMismatch("restriction hom ring mismatch".into()));
                }
                if p == q {
                    let id = RingHom::identity(&self.rings[p]);
                    for (a, b) in h.images.iter().zip(&id.images) {
                        if !self.rings[p].eq(a, b) {
                            return Err(Error::SiteMismatch("identity restriction not id".into()));
                        }
                    }
                }
                for s in 0..n {
                    if !self.le(q, s) {
                        continue;
                    }
                    let h2 = &self.res[&(q, s)];
                    let h3 = &self.res[&(p, s)];
                    let comp = h.compose(h2);
                    for (a, b) in comp.images.iter().zip(&h3.images) {
                        if !self.rings[s].eq(a, b) {
                            return Err(Error::SiteMismatch(format!(
                                "restrictions not functorial on {}≤{}≤{}",
                                p, q, s
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn le(&self, p: usize, q: usize) -> bool {
        self.leq[p * self.n + q]
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        p != q && self.le(p, q)
    }

    pub fn res(&self, p: usize, q: usize) -> &RingHom {
        &self.res[&(p, q)]
    }

    /// Same underlying poset with different ring data; revalidates. The map
    /// must contain an entry for every pair p ≤ q, including p = q.
    pub fn with_rings(
        &self,
        rings: Vec<FiniteRing>,
        res: BTreeMap<(usize, usize), RingHom>,
    ) -> Result<PosetSite> {
        let s = PosetSite { labels: self.labels.clone(), n: self.n, leq: self.leq.clone(), rings, res };
        s.validate()?;
        Ok(s)
    }

    /// Working modulus: lcm of all stalk ring moduli.
    pub fn modulus(&self) -> u64 {
        self.rings.iter().fold(1, |acc, r| lcm(acc, r.modulus()))
    }

    /// Strictly increasing chains with k+1 elements (degree k), lexicographic.
    pub fn chains(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.chains_rec(k, &mut cur, &mut out);
        out
    }

    fn chains_rec(&self, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for q in 0..self.n {
            if let Some(&last) = cur.last() {
                if !self.lt(last, q) {
                    continue;
                }
            }
            cur.push(q);
            self.chains_rec(k, cur, out);
            cur.pop();
        }
    }

    /// Longest chain degree (number of elements in a maximal chain minus 1).
    pub fn top_degree(&self) -> usize {
        let mut k = 0;
        while !self.chains(k + 1).is_empty() {
            k += 1;
        }
        k
    }

    /// All maximal chains (facets of the order complex).
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in (0..=self.top_degree()).rev() {
            for c in self.chains(k) {
                if !out.iter().any(|m: &Vec<usize>| is_subchain(&c, m)) {
                    out.push(c);
                }
            }
        }
        out
    }
}

fn is_subchain(sub: &[usize], sup: &[usize]) -> bool {
    sub.iter().all(|x| sup.contains(x))
}

/// Sheaf of modules: covariant functor, stalk at p is an FpModule over
/// O(p), restriction maps are semilinear over the ring restrictions.
#[derive(Clone, Debug)]
pub struct SheafModule {
    pub site: PosetSite,
    pub stalks: Vec<FpModule>,
    rho: BTreeMap<(usize, usize), RMatrix>,
}

impl SheafModule {
    pub fn new(
        site: PosetSite,
        stalks: Vec<FpModule>,
        rho: BTreeMap<(usize, usize), RMatrix>,
    ) -> Result<Self> {
        let sheaf = SheafModule { site, stalks, rho };
        sheaf.validate()?;
        Ok(sheaf)
    }

    /// Constant free sheaf of the given rank (identity restrictions) on a
    /// site whose ring restrictions carry entries across stalks.
    pub fn constant_free(site: &PosetSite, rank: usize) -> Self {
        let n = site.len();
        let stalks = (0..n).map(|p| FpModule::free(&site.rings[p], rank)).collect();
        let mut rho = BTreeMap::new();
        for p in 0..n {
            for q in 0..n {
                if site.le(p, q) {
                    rho.insert((p, q), RMatrix::identity(&site.rings[q], rank));
                }
            }
        }
        SheafModule { site: site.clone(), stalks, rho }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.site.len();
        if self.stalks.len() != n {
            return Err(Error::Dimension("stalk count".into()));
        }
        for (p, stalk) in self.stalks.iter().enumerate() {
            if stalk.ring != self.site.rings[p] {
                return Err(Error::RingMismatch);
            }
        }
        for p in 0..n {
            for q in 0..n {
                if !self.site.le(p, q) {
                    continue;
                }
                let r = self
                    .rho
                    .get(&(p, q))
                    .ok_or_else(|| Error::SiteMismatch(format!("missing sheaf restriction {}≤{}", p, q)))?;
                if r.ring != self.site.rings[q]
                    || r.cols != self.stalks[p].gens
                    || r.rows != self.stalks[q].gens
                {
                    return Err(Error::Dimension(format!("sheaf restriction {}≤{}", p, q)));
                }
                // restrictions must kill relations
                for rel in &self.stalks[p].rels {
                    let img = base_change_apply(r, self.site.res(p, q), rel);
                    if !elem_is_zero(&self.stalks[q], &img) {
                        return Err(Error::SiteMismatch("restriction does not respect relations".into()));
                    }
                }
                for s in 0..n {
                    if !self.site.le(q, s) {
                        continue;
                    }
                    let a = self.rho[&(q, s)].mul(&r.map_hom(self.site.res(q, s)));
                    let b = &self.rho[&(p, s)];
                    if !map_eq(&a, b, &self.stalks[s]) {
                        return Err(Error::SiteMismatch(format!(
                            "sheaf restrictions not functorial on {}≤{}≤{}",
                            p, q, s
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rho(&self, p: usize, q: usize) -> &RMatrix {
        &self.rho[&(p, q)]
    }

    /// Restrict a stalk element from p to q.
    pub fn restrict(&self, p: usize, q: usize, x: &ModElem) -> ModElem {
        base_change_apply(self.rho(p, q), self.site.res(p, q), x)
    }
}

/// Apply a semilinear map: base-change the input coordinates, then the matrix.
pub fn base_change_apply(mat: &RMatrix, hom: &RingHom, x: &ModElem) -> ModElem {
    let mapped: ModElem = x.iter().map(|e| hom.apply(e)).collect();
    mat.apply(&mapped)
}

pub fn elem_is_zero(module: &FpModule, x: &ModElem) -> bool {
    let m = module.ring.modulus();
    module.add_pres(m).is_zero(&module.elem_to_coords(x))
}

pub fn map_eq(a: &RMatrix, b: &RMatrix, target: &FpModule) -> bool {
    let d = a.sub(b);
    (0..d.cols).all(|j| elem_is_zero(target, &d.col(j)))
}

/// Nerve (Čech) complex of a sheaf of modules: degree-k term is the product
/// over strictly increasing chains p₀<…<p_k of F(p_k), with the alternating
/// face differential (sheaf restriction on the last face).  Assembled over
/// Z/m with m the lcm of the stalk moduli.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub site: PosetSite,
    pub sheaf: SheafModule,
    pub m: u64,
    pub chains: Vec<Vec<Vec<usize>>>,
    pub offsets: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    pub rels: Vec<ZnMat>,
    pub diffs: Vec<ZnMat>,
}

pub fn nerve_complex(site: &PosetSite, sheaf: &SheafModule) -> CechComplex {
    let m = site.modulus();
    let top = site.top_degree();
    let mut chains = Vec::new();
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    let mut rels = Vec::new();
    for k in 0..=top {
        let cs = site.chains(k);
        let mut offs = Vec::new();
        let mut dim = 0;
        let mut rel_cols: Vec<Vec<u64>> = Vec::new();
        for c in &cs {
            offs.push(dim);
            let stalk = &sheaf.stalks[*c.last().unwrap()];
            dim += stalk.add_rank();
            // placeholder; relation columns are embedded after dim is final
            rel_cols.push(Vec::new());
        }
        let mut relmat_cols: Vec<Vec<u64>> = Vec::new();
        for (ci, c) in cs.iter().enumerate() {
            let stalk = &sheaf.stalks[*c.last().unwrap()];
            let pres = stalk.add_pres(m);
            for j in 0..pres.rels.cols {
                let mut col = vec![0u64; dim];
                for i in 0..pres.ambient {
                    col[offs[ci] + i] = pres.rels.get(i, j);
                }
                relmat_cols.push(col);
            }
        }
        let _ = rel_cols;
        rels.push(ZnMat::from_cols(m, dim, &relmat_cols));
        chains.push(cs);
        offsets.push(offs);
        dims.push(dim);
    }
    let mut diffs = Vec::new();
    for k in 0..top {
        let mut d = ZnMat::zero(m, dims[k + 1], dims[k]);
        for (ti, tc) in chains[k + 1].iter().enumerate() {
            let toff = offsets[k + 1][ti];
            for face in 0..=k + 1 {
                let mut sc = tc.clone();
                sc.remove(face);
                let si = chains[k].iter().position(|c| *c == sc).unwrap();
                let soff = offsets[k][si];
                let sign_neg = face % 2 == 1;
                if face < k + 1 {
                    // same end stalk: identity block
                    let stalk = &sheaf.stalks[*tc.last().unwrap()];
                    for i in 0..stalk.add_rank() {
                        let v = if sign_neg { (m - 1) % m } else { 1 % m };
                        let cur = d.get(toff + i, soff + i);
                        d.set(toff + i, soff + i, (cur + v) % m);
                    }
                } else {
                    // restriction from the chain's second-to-last element
                    let p = sc[k];
                    let q = tc[k + 1];
                    let block = sheaf.rho(p, q).additive_matrix(m, Some(site.res(p, q)));
                    for i in 0..block.rows {
                        for j in 0..block.cols {
                            let mut v = block.get(i, j);
                            if sign_neg {
                                v = (m - v) % m;
                            }
                            let cur = d.get(toff + i, soff + j);
                            d.set(toff + i, soff + j, (cur + v) % m);
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    CechComplex {
        site: site.clone(),
        sheaf: sheaf.clone(),
        m,
        chains,
        offsets,
        dims,
        rels,
        diffs,
    }
}

impl CechComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, k: i64) -> usize {
        if k < 0 || k as usize >= self.dims.len() {
            0
        } else {
            self.dims[k as usize]
        }
    }

    pub fn diff(&self, k: i64) -> ZnMat {
        if k >= 0 && (k as usize) < self.diffs.len() {
            self.diffs[k as usize].clone()
        } else {
            ZnMat::zero(self.m, self.dim(k + 1), self.dim(k))
        }
    }

    fn rel(&self, k: i64) -> ZnMat {
        if k >= 0 && (k as usize) < self.rels.len() {
            self.rels[k as usize].clone()
        } else {
            ZnMat::zero(self.m, self.dim(k), 0)
        }
    }

    pub fn cohomology(&self, k: i64) -> Subquotient {
        Subquotient::homology(self.m, &self.diff(k - 1), &self.rel(k), &self.diff(k), &self.rel(k + 1))
    }

    /// Pack one stalk element per degree-k chain into additive coordinates.
    pub fn pack(&self, k: usize, values: &[ModElem]) -> Vec<u64> {
        if k >= self.chains.len() {
            assert!(values.is_empty());
            return Vec::new();
        }
        assert_eq!(values.len(), self.chains[k].len());
        let mut out = vec![0u64; self.dims[k]];
        for (ci, c) in self.chains[k].iter().enumerate() {
            let stalk = &self.sheaf.stalks[*c.last().unwrap()];
            let coords = stalk.elem_to_coords(&values[ci]);
            out[self.offsets[k][ci]..self.offsets[k][ci] + coords.len()].copy_from_slice(&coords);
        }
        out
    }

    pub fn unpack(&self, k: usize, coords: &[u64]) -> Vec<ModElem> {
        let mut out = Vec::new();
        if k >= self.chains.len() {
            return out;
        }
        for (ci, c) in self.chains[k].iter().enumerate() {
            let stalk = &self.sheaf.stalks[*c.last().unwrap()];
            let o = self.offsets[k][ci];
            out.push(stalk.coords_to_elem(&coords[o..o + stalk.add_rank()]));
        }
        out
    }
}

/// Sheaf cohomology H^k(S, F) with cocycle lift/test via the Subquotient.
pub fn sheaf_cohomology(site: &PosetSite, sheaf: &SheafModule, k: i64) -> Subquotient {
    nerve_complex(site, sheaf).cohomology(k)
}

/// Invertible sheaves up to isomorphism: unit-valued 1-cocycles modulo unit
/// coboundaries (each stalk free of rank 1).  Returns one representative
/// cocycle per class, aligned with site.chains(1).
pub fn invertible_sheaves(site: &PosetSite, max_elements: u128) -> Result<Vec<Vec<Elem>>> {
    let ones = site.chains(1);
    let twos = site.chains(2);
    let unit_lists: Vec<Vec<Elem>> = site
        .rings
        .iter()
        .map(|r| units(r).map(|u| u.elems))
        .collect::<Result<_>>()?;
    let mut total: u128 = 1;
    for c in &ones {
        total = total.saturating_mul(unit_lists[*c.last().unwrap()].len() as u128);
        if total > max_elements {
            return Err(Error::TooLarge(total));
        }
    }
    let mut vtotal: u128 = 1;
    for p in 0..site.len() {
        vtotal = vtotal.saturating_mul(unit_lists[p].len() as u128);
        if vtotal > max_elements {
            return Err(Error::TooLarge(vtotal));
        }
    }
    // enumerate cocycles
    let radices: Vec<usize> = ones.iter().map(|c| unit_lists[*c.last().unwrap()].len()).collect();
    let mut cocycles: Vec<Vec<Elem>> = Vec::new();
    let mut idx = vec![0usize; ones.len()];
    'outer: loop {
        let u: Vec<Elem> = idx
            .iter()
            .zip(&ones)
            .map(|(&i, c)| unit_lists[*c.last().unwrap()][i].clone())
            .collect();
        let mut ok = true;
        for t in &twos {
            let (p0, p1, p2) = (t[0], t[1], t[2]);
            let i01 = ones.iter().position(|c| c == &vec![p0, p1]).unwrap();
            let i12 = ones.iter().position(|c| c == &vec![p1, p2]).unwrap();
            let i02 = ones.iter().position(|c| c == &vec![p0, p2]).unwrap();
            let r2 = &site.rings[p2];
            let lhs = &u[i02];
            let rhs = r2.mul(&u[i12], &site.res(p1, p2).apply(&u[i01]));
            if !r2.eq(lhs, &rhs) {
                ok = false;
                break;
            }
        }
        if ok {
            cocycles.push(u);
        }
        // increment mixed radix
        for pos in 0..idx.len() {
            idx[pos] += 1;
            if idx[pos] < radices[pos] {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        if idx.is_empty() {
            // no 1-chains: single (empty) cocycle already pushed
            break;
        }
        break;
    }
    if ones.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    // quotient by coboundaries: u ~ u' iff u'_{pq} = v_q · res(v_p)^{-1} · u_{pq}
    let vradices: Vec<usize> = (0..site.len()).map(|p| unit_lists[p].len()).collect();
    let mut reps: Vec<Vec<Elem>> = Vec::new();
    let mut seen: Vec<bool> = vec![false; cocycles.len()];
    let key = |u: &Vec<Elem>| -> Vec<Vec<u64>> { u.iter().map(|e| e.0.clone()).collect() };
    let index_of = |u: &Vec<Elem>, cocycles: &Vec<Vec<Elem>>| -> Option<usize> {
        cocycles.iter().position(|c| key(c) == key(u))
    };
    for start in 0..cocycles.len() {
        if seen[start] {
            continue;
        }
        reps.push(cocycles[start].clone());
        // orbit of start under all unit 0-cochains
        let mut vidx = vec![0usize; site.len()];
        'orbit: loop {
            let v: Vec<Elem> = vidx.iter().enumerate().map(|(p, &i)| unit_lists[p][i].clone()).collect();
            let acted: Vec<Elem> = ones
                .iter()
                .zip(&cocycles[start])
                .map(|(c, upq)| {
                    let (p, q) = (c[0], c[1]);
                    let rq = &site.rings[q];
                    let vp_res = site.res(p, q).apply(&v[p]);
                    let vp_inv = rq.inv(&vp_res).expect("unit image is a unit");
                    rq.mul(&v[q], &rq.mul(&vp_inv, upq))
                })
                .collect();
            if let Some(i) = index_of(&acted, &cocycles) {
                seen[i] = true;
            }
            for pos in 0..vidx.len() {
                vidx[pos] += 1;
                if vidx[pos] < vradices[pos] {
                    continue 'orbit;
                }
                vidx[pos] = 0;
            }
            break;
        }
    }
    Ok(reps)
}

/// Independent simplicial cochain cohomology of a simplicial complex given
/// by its facets, with Z/coeff coefficients; returns the invariant factors
/// in each degree.  Shares only the Z/m normal-form engine.
pub fn simplicial_cohomology(facets: &[Vec<usize>], coeff: u64, k: i64) -> Vec<u64> {
    use std::collections::BTreeSet;
    let mut simplices: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for f in facets {
        let mut sorted = f.clone();
        sorted.sort_unstable();
        // all nonempty subsets
        let t = sorted.len();
        for mask in 1u32..(1 << t) {
            let sub: Vec<usize> =
                (0..t).filter(|i| mask >> i & 1 == 1).map(|i| sorted[i]).collect();
            let d = sub.len() - 1;
            while simplices.len() <= d {
                simplices.push(BTreeSet::new());
            }
            simplices[d].insert(sub);
        }
    }
    let lists: Vec<Vec<Vec<usize>>> =
        simplices.iter().map(|s| s.iter().cloned().collect()).collect();
    let dim_at = |d: i64| -> usize {
        if d < 0 || d as usize >= lists.len() {
            0
        } else {
            lists[d as usize].len()
        }
    };
    let coboundary = |d: i64| -> ZnMat {
        let rows = dim_at(d + 1);
        let cols = dim_at(d);
        let mut mat = ZnMat::zero(coeff, rows, cols);
        if d < 0 || rows == 0 {
            return mat;
        }
        for (ti, t) in lists[(d + 1) as usize].iter().enumerate() {
            for face in 0..t.len() {
                let mut s = t.clone();
                s.remove(face);
                let si = lists[d as usize].iter().position(|x| *x == s).unwrap();
                let v = if face % 2 == 0 { 1 % coeff } else { (coeff - 1) % coeff };
                let cur = mat.get(ti, si);
                mat.set(ti, si, (cur + v) % coeff);
            }
        }
        mat
    };
    let rels_b = ZnMat::zero(coeff, dim_at(k), 0);
    let rels_c = ZnMat::zero(coeff, dim_at(k + 1), 0);
    Subquotient::homology(coeff, &coboundary(k - 1), &rels_b, &coboundary(k), &rels_c).invariants()
}

// ---- standard posets -------------------------------------------------------

fn mk_poset(labels: &[&str], covers: &[(usize, usize)]) -> Poset {
    Poset { labels: labels.iter().map(|s| s.to_string()).collect(), covers: covers.to_vec() }
}

pub fn point_poset() -> Poset {
    mk_poset(&["p"], &[])
}

pub fn chain_poset(n: usize) -> Poset {
    let labels: Vec<String> = (0..n).map(|i| format!("c{}", i)).collect();
    Poset { labels, covers: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect() }
}

/// a, b < c, d: the order complex is a circle.
pub fn pseudo_circle_poset() -> Poset {
    mk_poset(&["a", "b", "c", "d"], &[(0, 2), (0, 3), (1, 2), (1, 3)])
}

/// Suspension of the pseudo-circle: order complex triangulates the 2-sphere.
pub fn sphere6_poset() -> Poset {
    mk_poset(
        &["a", "b", "c", "d", "e", "f"],
        &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)],
    )
}

/// Root below two incomparable points (contractible order complex).
pub fn wedge3_poset() -> Poset {
    mk_poset(&["r", "x", "y"], &[(0, 1), (0, 2)])
}

/// Product of two pseudo-circles: order complex is a torus (16 elements).
pub fn torus_poset() -> Poset {
    let pc = pseudo_circle_poset();
    let leq = pc.leq_table();
    let n = 4;
    let labels: Vec<String> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| format!("{}{}", pc.labels[i], pc.labels[j]))
        .collect();
    let mut covers = Vec::new();
    let le = |a: usize, b: usize| leq[a * n + b];
    let idx = |i: usize, j: usize| i * n + j;
    for i in 0..n {
        for j in 0..n {
            for i2 in 0..n {
                for j2 in 0..n {
                    if (i, j) == (i2, j2) || !le(i, i2) || !le(j, j2) {
                        continue;
                    }
                    // keep only covering relations
                    let mut is_cover = true;
                    for k1 in 0..n {
                        for k2 in 0..n {
                            if (k1, k2) != (i, j)
                                && (k1, k2) != (i2, j2)
                                && le(i, k1)
                                && le(j, k2)
                                && le(k1, i2)
                                && le(k2, j2)
                            {
                                is_cover = false;
                            }
                        }
                    }
                    if is_cover {
                        covers.push((idx(i, j), idx(i2, j2)));
                    }
                }
            }
        }
    }
    Poset { labels, covers }
}

/// Facets of the 6-vertex triangulation of the real projective plane.
pub fn rp2_facets() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 3],
        vec![0, 1, 5],
        vec![0, 2, 3],
        vec![0, 2, 4],
        vec![0, 4, 5],
        vec![1, 2, 4],
        vec![1, 2, 5],
        vec![1, 3, 4],
        vec![2, 3, 5],
        vec![3, 4, 5],
    ]
}

/// Face poset of the 6-vertex projective plane (31 elements); its order
/// complex is the barycentric subdivision, again a projective plane.
pub fn rp2_poset() -> Poset {
    let facets = rp2_facets();
    use std::collections::BTreeSet;
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in &facets {
        for mask in 1u32..(1 << f.len()) {
            let sub: Vec<usize> =
                (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            faces.insert(sub);
        }
    }
    let faces: Vec<Vec<usize>> = faces.into_iter().collect();
    let labels: Vec<String> = faces
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    let mut covers = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if b.len() == a.len() + 1 && a.iter().all(|v| b.contains(v)) {
                covers.push((i, j));
            }
        }
    }
    Poset { labels, covers }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FiniteRing {
        FiniteRing::cyclic(n)
    }

    #[test]
    fn point_site_cohomology() {
        let site = PosetSite::constant(&point_poset(), &z(3));
        let f = SheafModule::constant_free(&site, 1);
        assert_eq!(sheaf_cohomology(&site, &f, 0).invariants(), vec![3]);
        assert!(sheaf_cohomology(&site, &f, 1).is_trivial());
    }

    #[test]
    fn pseudo_circle_constant_z3() {
        let site = PosetSite::constant(&pseudo_circle_poset(), &z(3));
        let f = SheafModule::constant_free(&site, 1);
        assert_eq!(sheaf_cohomology(&site, &f, 0).invariants(), vec![3]);
        assert_eq!(sheaf_cohomology(&site, &f, 1).invariants(), vec![3]);
        assert!(sheaf_cohomology(&site, &f, 2).is_trivial());
    }

    #[test]
    fn sphere6_constant_z2() {
        let site = PosetSite::constant(&sphere6_poset(), &z(2));
        let f = SheafModule::constant_free(&site, 1);
        assert_eq!(sheaf_cohomology(&site, &f, 0).invariants(), vec![2]);
        assert!(sheaf_cohomology(&site, &f, 1).is_trivial());
        assert_eq!(sheaf_cohomology(&site, &f, 2).invariants(), vec![2]);
    }

    #[test]
    fn chain_and_wedge_contractible() {
        for poset in [chain_poset(4), wedge3_poset()] {
            let site = PosetSite::constant(&poset, &z(4));
            let f = SheafModule::constant_free(&site, 1);
            assert_eq!(sheaf_cohomology(&site, &f, 0).invariants(), vec![4]);
            for k in 1..=site.top_degree() as i64 {
                assert!(sheaf_cohomology(&site, &f, k).is_trivial());
            }
            // the constant global section generates H^0
            let nc = nerve_complex(&site, &f);
            let ones: Vec<ModElem> =
                (0..site.len()).map(|p| vec![site.rings[p].one().clone()]).collect();
            let coords = nc.pack(0, &ones);
            let h0 = nc.cohomology(0);
            let cls = h0.class_of(&coords).expect("constant section is a cocycle");
            assert!(cls.iter().any(|&c| c != 0));
        }
    }

    #[test]
    fn simplicial_oracle_matches_nerve_on_corpus() {
        for (poset, coeff) in [
            (point_poset(), 3u64),
            (chain_poset(3), 4),
            (pseudo_circle_poset(), 3),
            (sphere6_poset(), 2),
        ] {
            let site = PosetSite::constant(&poset, &z(coeff));
            let f = SheafModule::constant_free(&site, 1);
            let facets = site.maximal_chains();
            for k in 0..=site.top_degree() as i64 + 1 {
                assert_eq!(
                    sheaf_cohomology(&site, &f, k).invariants(),
                    simplicial_cohomology(&facets, coeff, k),
                    "degree {} mismatch",
                    k
                );
            }
        }
    }

    #[test]
    fn torus_cohomology_z3() {
        let site = PosetSite::constant(&torus_poset(), &z(3));
        let f = SheafModule::constant_free(&site, 1);
        assert_eq!(sheaf_cohomology(&site, &f, 0).invariants(), vec![3]);
        assert_eq!(sheaf_cohomology(&site, &f, 1).invariants(), vec![3, 3]);
        assert_eq!(sheaf_cohomology(&site, &f, 2).invariants(), vec![3]);
    }

    #[test]
    fn rp2_cohomology() {
        // simplicial: H^0 = Z/2, H^1 = Z/2, H^2 = Z/2 with Z/2 coefficients;
        // with Z/3 coefficients H^1 = H^2 = 0 except orientation twist
        assert_eq!(simplicial_cohomology(&rp2_facets(), 2, 0), vec![2]);
        assert_eq!(simplicial_cohomology(&rp2_facets(), 2, 1), vec![2]);
        assert_eq!(simplicial_cohomology(&rp2_facets(), 2, 2), vec![2]);
        assert_eq!(simplicial_cohomology(&rp2_facets(), 3, 1), Vec::<u64>::new());
        // the face poset sees the same cohomology (barycentric subdivision)
        let site = PosetSite::constant(&rp2_poset(), &z(2));
        let f = SheafModule::constant_free(&site, 1);
        assert_eq!(sheaf_cohomology(&site, &f, 1).invariants(), vec![2]);
        assert_eq!(sheaf_cohomology(&site, &f, 2).invariants(), vec![2]);
    }

    #[test]
    fn invertible_sheaves_counts() {
        let pt = PosetSite::constant(&point_poset(), &z(4));
        assert_eq!(invertible_sheaves(&pt, 1 << 16).unwrap().len(), 1);
        let pc2 = PosetSite::constant(&pseudo_circle_poset(), &z(2));
        assert_eq!(invertible_sheaves(&pc2, 1 << 16).unwrap().len(), 1);
        let pc4 = PosetSite::constant(&pseudo_circle_poset(), &z(4));
        // H^1 of the circle with {±1} coefficients: two classes
        assert_eq!(invertible_sheaves(&pc4, 1 << 16).unwrap().len(), 2);
    }

    #[test]
    fn varying_rings_site() {
        // chain site Z/4 → Z/2 with the quotient hom
        let r4 = z(4);
        let r2 = z(2);
        let poset = chain_poset(2);
        let mut homs = BTreeMap::new();
        homs.insert((0usize, 1usize), RingHom::new(r4.clone(), r2.clone(), vec![r2.from_int(1)]));
        let site = PosetSite::from_homs(&poset, vec![r4.clone(), r2.clone()], &homs).unwrap();
        let f = SheafModule::constant_free(&site, 1);
        let h0 = sheaf_cohomology(&site, &f, 0);
        // sections: pairs (x mod 4, y mod 2) with y = x mod 2 → Z/4
        assert_eq!(h0.order(), 4);
        assert!(sheaf_cohomology(&site, &f, 1).is_trivial());
    }

    #[test]
    fn site_validation_catches_breakage() {
        let poset = pseudo_circle_poset();
        let ring = z(4);
        let mut site = PosetSite::constant(&poset, &ring);
        // break antisymmetry
        site.leq[2 * 4] = true; // c ≤ a as well as a ≤ c
        assert!(site.validate().is_err());
    }

    #[test]
    fn sheaf_validation_catches_nonfunctorial() {
        let site = PosetSite::constant(&chain_poset(3), &z(4));
        let mut f = SheafModule::constant_free(&site, 1);
        f.rho.insert((0, 2), RMatrix::from_ints(&z(4), &[vec![3]]));
        assert!(f.validate().is_err());
    }
}
