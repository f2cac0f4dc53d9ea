//! Deterministic instance corpus: seeded generators for sites, square-zero
//! extensions, sheaf complexes, filtered endomorphisms, graded lines, and
//! the randomized witness search.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cechhom::SheafComplex;
use crate::complex::Complex;
use crate::deform::SquareZeroExt;
use crate::detline::GradedLine;
use crate::module::RMatrix;
use crate::ring::{units, Elem, FiniteRing, RingHom};
use crate::site::{
    chain_poset, nerve_complex, point_poset, pseudo_circle_poset, rp2_poset, sphere6_poset,
    torus_poset, wedge3_poset, Poset, PosetSite, SheafModule,
};
use crate::trace::{EndoData, FilteredComplex, FilteredMap};
use crate::{Error, Result};

/// One corpus entry: an extension, a complex over the down site, optional
/// filtration levels, and the seed that produced it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub ext: SquareZeroExt,
    pub e: SheafComplex,
    pub levels: Option<BTreeMap<(usize, i64), Vec<i64>>>,
    pub seed: u64,
}

pub const SITE_KINDS: [&str; 7] =
    ["point", "chain", "pseudo-circle", "wedge3", "sphere6", "torus-model", "rp2"];

pub fn poset_by_name(name: &str) -> Result<Poset> {
    Ok(match name {
        "point" => point_poset(),
        "chain" => chain_poset(3),
        "pseudo-circle" => pseudo_circle_poset(),
        "wedge3" => wedge3_poset(),
        "sphere6" => sphere6_poset(),
        "torus-model" => torus_poset(),
        "rp2" => rp2_poset(),
        _ => return Err(Error::Invalid(format!("unknown site kind {}", name))),
    })
}

pub const RING_KINDS: [&str; 6] = ["z4-z2", "z9-z3", "z8-z4", "z27-z9", "trivial-z4", "product"];

fn cyclic_quot(up_n: u64, down_n: u64) -> RingHom {
    let down = FiniteRing::cyclic(down_n);
    RingHom::new(FiniteRing::cyclic(up_n), down.clone(), vec![down.from_int(1)])
}

/// Constant-ring extension on a poset by ring-pair name.
pub fn ext_by_name(poset: &Poset, ring_kind: &str) -> Result<SquareZeroExt> {
    let cyc = |up_n: u64, down_n: u64| -> Result<SquareZeroExt> {
        let up = PosetSite::constant(poset, &FiniteRing::cyclic(up_n));
        let down = PosetSite::constant(poset, &FiniteRing::cyclic(down_n));
        let quot = (0..down.len()).map(|_| cyclic_quot(up_n, down_n)).collect();
        SquareZeroExt::new(up, down, quot)
    };
    match ring_kind {
        "z4-z2" => cyc(4, 2),
        "z9-z3" => cyc(9, 3),
        "z8-z4" => cyc(8, 4),
        "z27-z9" => cyc(27, 9),
        "z16-z8" => cyc(16, 8),
        "trivial-z4" => {
            SquareZeroExt::trivial(&PosetSite::constant(poset, &FiniteRing::cyclic(4)))
        }
        "trivial-z3" => {
            SquareZeroExt::trivial(&PosetSite::constant(poset, &FiniteRing::cyclic(3)))
        }
        "product" => {
            // Z/4 × Z/9 → Z/2 × Z/3, componentwise reduction
            let upr = FiniteRing::product(&FiniteRing::cyclic(4), &FiniteRing::cyclic(9));
            let downr = FiniteRing::product(&FiniteRing::cyclic(2), &FiniteRing::cyclic(3));
            let mut e0 = downr.zero();
            e0.0[0] = 1;
            let mut e1 = downr.zero();
            e1.0[1] = 1;
            let up = PosetSite::constant(poset, &upr);
            let down = PosetSite::constant(poset, &downr);
            let quot = (0..down.len())
                .map(|_| RingHom::new(upr.clone(), downr.clone(), vec![e0.clone(), e1.clone()]))
                .collect();
            SquareZeroExt::new(up, down, quot)
        }
        _ => Err(Error::Invalid(format!("unknown ring kind {}", ring_kind))),
    }
}

/// Random invertible matrix: product of transvections and unit scalings.
pub fn random_invertible(
    ring: &FiniteRing,
    unit_elems: &[Elem],
    n: usize,
    rng: &mut impl Rng,
) -> RMatrix {
    let mut m = RMatrix::identity(ring, n);
    if n == 0 {
        return m;
    }
    for _ in 0..2 * n + 2 {
        let i = rng.gen_range(0..n);
        // unit scaling of row i
        let u = &unit_elems[rng.gen_range(0..unit_elems.len())];
        for c in 0..n {
            m.set(i, c, ring.mul(u, m.get(i, c)));
        }
        if n > 1 {
            // transvection: row i += r · row j
            let mut j = rng.gen_range(0..n);
            if j == i {
                j = (j + 1) % n;
            }
            let r = ring.from_int(rng.gen_range(0..ring.modulus() as i64));
            for c in 0..n {
                let v = ring.add(m.get(i, c), &ring.mul(&r, m.get(j, c)));
                m.set(i, c, v);
            }
        }
    }
    m
}

/// Model differential with alternating diagonal supports, so d² = 0 holds
/// entrywise for arbitrary diagonal values.
fn model_diffs(ring: &FiniteRing, ranks: &[usize], rng: &mut impl Rng) -> Vec<RMatrix> {
    let mut diffs = Vec::new();
    for n in 0..ranks.len().saturating_sub(1) {
        let (rows, cols) = (ranks[n + 1], ranks[n]);
        let mut d = RMatrix::zero(ring, rows, cols);
        for i in 0..rows.min(cols) {
            if (i + n) % 2 == 0 {
                d.set(i, i, ring.from_int(rng.gen_range(0..ring.modulus() as i64)));
            }
        }
        diffs.push(d);
    }
    diffs
}

/// Random stalkwise strictly perfect complex on a constant-ring site: common
/// model complex conjugated stalkwise by random invertible changes of basis;
/// restrictions are the transition matrices, hence always invertible.
pub fn random_sheaf_complex(
    down: &PosetSite,
    ranks: &[usize],
    rng: &mut impl Rng,
) -> Result<SheafComplex> {
    let ring = &down.rings[0];
    let unit_elems = units(ring)?.elems;
    let diffs = model_diffs(ring, ranks, rng);
    // per-stalk graded changes of basis
    let qmats: Vec<Vec<RMatrix>> = (0..down.len())
        .map(|_| ranks.iter().map(|&r| random_invertible(ring, &unit_elems, r, rng)).collect())
        .collect();
    let mut stalks = Vec::new();
    for p in 0..down.len() {
        let mut ds = Vec::new();
        for n in 0..diffs.len() {
            let inv = qmats[p][n].inverse()?;
            ds.push(qmats[p][n + 1].mul(&diffs[n]).mul(&inv));
        }
        stalks.push(Complex::from_free(ring, 0, ranks, ds)?);
    }
    let mut rho = BTreeMap::new();
    for p in 0..down.len() {
        for q in 0..down.len() {
            if !down.le(p, q) {
                continue;
            }
            let mut per = BTreeMap::new();
            for (n, &_r) in ranks.iter().enumerate() {
                per.insert(n as i64, qmats[q][n].mul(&qmats[p][n].inverse()?));
            }
            rho.insert((p, q), per);
        }
    }
    SheafComplex::new(down.clone(), stalks, rho)
}

const RANK_PROFILES: [&[usize]; 6] = [&[1, 1], &[2, 1], &[2, 2], &[1, 2, 1], &[1, 1, 1], &[2, 2, 1]];

/// Deterministic instance for (site kind, ring kind, seed).
pub fn generate(site_kind: &str, ring_kind: &str, seed: u64) -> Result<Instance> {
    let poset = poset_by_name(site_kind)?;
    let ext = ext_by_name(&poset, ring_kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = RANK_PROFILES[rng.gen_range(0..RANK_PROFILES.len())];
    let e = random_sheaf_complex(&ext.down, profile, &mut rng)?;
    Ok(Instance {
        id: format!("{}-{}-{}", site_kind, ring_kind, seed),
        ext,
        e,
        levels: None,
        seed,
    })
}

/// The Thm-(ii) showcase: pseudo-circle over Z/9 → Z/3, rank-2 trivial
/// complex in degree 0, where Ext¹ classes have nonzero H¹ trace.
pub fn showcase_pseudo_circle() -> Instance {
    let poset = pseudo_circle_poset();
    let ext = ext_by_name(&poset, "z9-z3").unwrap();
    let e = SheafComplex::constant(&ext.down, &Complex::concentrated(&FiniteRing::cyclic(3), 0, 2));
    Instance { id: "showcase-pseudo-circle".into(), ext, e, levels: None, seed: 0 }
}

/// Point-site three-term complex over Z/2 that lifts to Z/4.
pub fn three_term_z2() -> Instance {
    let poset = point_poset();
    let ext = ext_by_name(&poset, "z4-z2").unwrap();
    let r2 = FiniteRing::cyclic(2);
    let c = Complex::from_free(
        &r2,
        0,
        &[1, 2, 1],
        vec![RMatrix::from_ints(&r2, &[vec![1], vec![1]]), RMatrix::from_ints(&r2, &[vec![1, 1]])],
    )
    .unwrap();
    let e = SheafComplex::constant(&ext.down, &c);
    Instance { id: "three-term-z2".into(), ext, e, levels: None, seed: 0 }
}

/// Point-site three-term complex with nonzero obstruction (no lift exists).
pub fn nonliftable(up_n: u64, down_n: u64, d: i64) -> Instance {
    let poset = point_poset();
    let ext = ext_by_name(&poset, &format!("z{}-z{}", up_n, down_n)).unwrap();
    let r = FiniteRing::cyclic(down_n);
    let c = Complex::from_free(
        &r,
        0,
        &[1, 1, 1],
        vec![RMatrix::from_ints(&r, &[vec![d]]), RMatrix::from_ints(&r, &[vec![d]])],
    )
    .unwrap();
    let e = SheafComplex::constant(&ext.down, &c);
    Instance {
        id: format!("nonliftable-z{}-z{}", up_n, down_n),
        ext,
        e,
        levels: None,
        seed: 0,
    }
}

/// The standard corpus: all site kinds on small posets crossed with all ring
/// kinds and several seeds, plus the named showcase instances.
pub fn standard_corpus(base_seed: u64) -> Vec<Instance> {
    let mut out = vec![
        showcase_pseudo_circle(),
        three_term_z2(),
        nonliftable(8, 4, 2),
        nonliftable(27, 9, 3),
    ];
    let sites = ["point", "chain", "pseudo-circle", "wedge3", "sphere6"];
    for (si, site) in sites.iter().enumerate() {
        for (ri, ring) in RING_KINDS.iter().enumerate() {
            let per = 7;
            for t in 0..per {
                let seed = base_seed
                    .wrapping_mul(1_000_003)
                    .wrapping_add((si * 1000 + ri * 10 + t) as u64);
                if let Ok(inst) = generate(site, ring, seed) {
                    out.push(inst);
                }
            }
        }
    }
    out
}

/// Filtered endomorphism instances: E = C ⊕ C with the two summands at
/// filtration levels 0 and 1, d = [[d_C, 0],[λ·d_C, d_C]], and
/// u = [[a·id, 0],[v·id, b·id]] ⊗ κ, which preserves the filtration.
pub fn filtered_instances(count: usize, base_seed: u64) -> Result<Vec<(String, FilteredMap)>> {
    let mut out = Vec::new();
    let sites = ["point", "chain", "pseudo-circle", "wedge3"];
    let rings = ["z4-z2", "z9-z3", "z8-z4", "trivial-z3"];
    let mut t = 0usize;
    while out.len() < count {
        let site_kind = sites[t % sites.len()];
        let ring_kind = rings[(t / sites.len()) % rings.len()];
        let seed = base_seed.wrapping_add(t as u64);
        t += 1;
        let poset = poset_by_name(site_kind)?;
        let ext = ext_by_name(&poset, ring_kind)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = RANK_PROFILES[rng.gen_range(0..RANK_PROFILES.len())];
        let c = random_sheaf_complex(&ext.down, profile, &mut rng)?;
        let ring = &ext.down.rings[0];
        // two flavors: coupled summands (λ ≠ 0, equal diagonal scalars so u
        // stays a chain map) or decoupled summands with distinct scalars
        let coupled = t % 2 == 0;
        let lam = if coupled {
            ring.from_int(rng.gen_range(0..ring.modulus() as i64))
        } else {
            ring.zero()
        };
        // double complex: block upper-triangular in the two copies of C
        let (lo, hi) = c.span();
        let mut stalks = Vec::new();
        for p in 0..ext.down.len() {
            let ranks: Vec<usize> = (lo..=hi).map(|n| 2 * c.stalks[p].rank(n)).collect();
            let mut diffs = Vec::new();
            for n in lo..hi {
                let d = c.stalks[p].diff(n);
                let mut m = RMatrix::zero(ring, 2 * d.rows, 2 * d.cols);
                for i in 0..d.rows {
                    for j in 0..d.cols {
                        m.set(i, j, d.get(i, j).clone());
                        m.set(d.rows + i, d.cols + j, d.get(i, j).clone());
                        m.set(d.rows + i, j, ring.mul(&lam, d.get(i, j)));
                    }
                }
                diffs.push(m);
            }
            stalks.push(Complex::from_free(ring, lo, &ranks, diffs)?);
        }
        let mut rho = BTreeMap::new();
        for p in 0..ext.down.len() {
            for q in 0..ext.down.len() {
                if !ext.down.le(p, q) {
                    continue;
                }
                let mut per = BTreeMap::new();
                for n in lo..=hi {
                    let r = c.rho_at(p, q, n);
                    let mut m = RMatrix::zero(ring, 2 * r.rows, 2 * r.cols);
                    for i in 0..r.rows {
                        for j in 0..r.cols {
                            m.set(i, j, r.get(i, j).clone());
                            m.set(r.rows + i, r.cols + j, r.get(i, j).clone());
                        }
                    }
                    per.insert(n, m);
                }
                rho.insert((p, q), per);
            }
        }
        let e2 = SheafComplex::new(ext.down.clone(), stalks, rho)?;
        let mut levels = BTreeMap::new();
        for p in 0..ext.down.len() {
            for n in lo..=hi {
                let r = c.stalks[p].rank(n);
                let mut lv = vec![0i64; r];
                lv.extend(std::iter::repeat(1).take(r));
                levels.insert((p, n), lv);
            }
        }
        let fc = FilteredComplex::new(e2, levels)?;
        // u = scalar per level plus a level-raising scalar block, tensored
        // with a kernel generator
        let k = &ext.ksheaf;
        if ext.kdata[0].gens.is_empty() {
            continue;
        }
        let a = rng.gen_range(0..ring.modulus() as i64);
        let b = if coupled { a } else { rng.gen_range(0..ring.modulus() as i64) };
        let v = rng.gen_range(0..ring.modulus() as i64);
        let g = ext.kdata[0].gens.len();
        let mut parts = BTreeMap::new();
        for p in 0..ext.down.len() {
            for n in lo..=hi {
                let r = c.stalks[p].rank(n);
                if r == 0 {
                    continue;
                }
                // target has K-block rows (row e-index × g + K-index); put the
                // scalars on the first kernel generator coordinate
                let mut m = RMatrix::zero(ring, 2 * r * g, 2 * r);
                for i in 0..r {
                    m.set(i * g, i, ring.from_int(a));
                    m.set((r + i) * g, r + i, ring.from_int(b));
                    m.set((r + i) * g, i, ring.from_int(v));
                }
                parts.insert((p, n), m);
            }
        }
        let u = EndoData { parts };
        let fm = FilteredMap::new(fc, k.clone(), u)?;
        out.push((format!("filtered-{}-{}-{}", site_kind, ring_kind, seed), fm));
    }
    Ok(out)
}

/// Multiplicative order of a unit.
pub fn unit_order(ring: &FiniteRing, u: &Elem) -> u64 {
    let mut acc = u.clone();
    let mut k = 1;
    while !ring.eq(&acc, ring.one()) {
        acc = ring.mul(&acc, u);
        k += 1;
    }
    k
}

/// Lines built from unit cocycles g^φ, with φ drawn from H¹ of the constant
/// sheaf Z/ord(g) (plus coboundaries), so the unit cocycle condition holds
/// by construction.
pub fn lines_from_unit(
    down: &PosetSite,
    g: &Elem,
    rank: i64,
    include_nonzero_classes: bool,
) -> Result<Vec<GradedLine>> {
    let ring = &down.rings[0];
    let m = unit_order(ring, g);
    let mut out = vec![GradedLine::trivial(down, rank)];
    if m == 1 {
        return Ok(out);
    }
    let zm = FiniteRing::cyclic(m);
    let aux = PosetSite::constant(&down_poset(down), &zm);
    let nerve = nerve_complex(&aux, &SheafModule::constant_free(&aux, 1));
    let h1 = nerve.cohomology(1);
    let classes: Vec<Vec<u64>> =
        if include_nonzero_classes { h1.all_classes() } else { vec![h1.zero_class()] };
    for cls in classes {
        if cls.iter().all(|&x| x == 0) && !out.is_empty() {
            continue; // trivial line already included
        }
        let coords = h1.lift(&cls);
        let vals = nerve.unpack(1, &coords);
        let mut units_map = BTreeMap::new();
        for (ci, c) in down.chains(1).into_iter().enumerate() {
            let (p, q) = (c[0], c[1]);
            let exp = vals[ci][0].0[0] as i64;
            units_map.insert((p, q), ring.unit_pow(g, exp).ok_or(Error::NotInvertible)?);
        }
        out.push(GradedLine::new(down.clone(), vec![rank; down.len()], units_map)?);
    }
    Ok(out)
}

fn down_poset(site: &PosetSite) -> Poset {
    let mut covers = Vec::new();
    for p in 0..site.len() {
        for q in 0..site.len() {
            if !site.lt(p, q) {
                continue;
            }
            // covering relation: nothing strictly between
            if (0..site.len()).all(|r| r == p || r == q || !(site.lt(p, r) && site.lt(r, q))) {
                covers.push((p, q));
            }
        }
    }
    Poset { labels: site.labels.clone(), covers }
}

/// Line corpus on one extension: the trivial line, coboundary lines from
/// random unit 0-cochains, and (where H¹ permits) cohomologically nontrivial
/// unit cocycles.
pub fn line_corpus(ext: &SquareZeroExt, seed: u64) -> Result<Vec<GradedLine>> {
    let down = &ext.down;
    let ring = &down.rings[0];
    let unit_elems = units(ring)?.elems;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![GradedLine::trivial(down, 1)];
    for _ in 0..4 {
        let v: Vec<Elem> =
            (0..down.len()).map(|_| unit_elems[rng.gen_range(0..unit_elems.len())].clone()).collect();
        let units_map = down
            .chains(1)
            .into_iter()
            .map(|c| {
                let (p, q) = (c[0], c[1]);
                let rq = &down.rings[q];
                ((p, q), rq.mul(&v[q], &rq.inv(&v[p]).unwrap()))
            })
            .collect();
        out.push(GradedLine::new(down.clone(), vec![1; down.len()], units_map)?);
    }
    for g in unit_elems.iter().take(3) {
        if unit_order(ring, g) <= 4 {
            out.extend(lines_from_unit(down, g, 1, true)?);
        }
    }
    Ok(out)
}

/// Local rings of the corpus, all of order ≤ 512.
pub fn corpus_local_rings() -> Vec<FiniteRing> {
    let mut out: Vec<FiniteRing> = [
        2u64, 4, 8, 16, 32, 64, 128, 256, 512, 3, 9, 27, 81, 243, 5, 25, 125, 7, 49, 343, 11, 121,
        13, 169,
    ]
    .iter()
    .map(|&n| FiniteRing::cyclic(n))
    .collect();
    for n in [2u64, 3, 4, 8, 9, 16] {
        out.push(FiniteRing::dual_numbers(&FiniteRing::cyclic(n)));
    }
    out
}

/// Search over corpus sites, ring pairs, and unit generators for a graded
/// line whose deformation obstruction class is nonzero. Returns the first
/// witness found within the budget, with the extension it lives on.
pub fn search_line_witness(
    budget: u64,
    _seed: u64,
) -> Result<Option<(String, SquareZeroExt, GradedLine)>> {
    let site_kinds = ["pseudo-circle", "sphere6", "rp2"];
    let ring_kinds = ["z9-z3", "z16-z8", "z8-z4", "z27-z9"];
    let mut tried = 0u64;
    for site_kind in site_kinds {
        let poset = poset_by_name(site_kind)?;
        for ring_kind in ring_kinds {
            let ext = ext_by_name(&poset, ring_kind)?;
            let ring = &ext.down.rings[0];
            let unit_elems = units(ring)?.elems;
            for g in &unit_elems {
                if unit_order(ring, g) > 4 {
                    continue;
                }
                for line in lines_from_unit(&ext.down, g, 1, true)? {
                    if tried >= budget {
                        return Ok(None);
                    }
                    tried += 1;
                    let lo = crate::deform::line_obstruction(&ext, &line)?;
                    if lo.class.iter().any(|&x| x != 0) {
                        let id = format!("witness-{}-{}", site_kind, ring_kind);
                        return Ok(Some((id, ext, line)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A rank-1 complex concentrated in degree 0 carrying a graded line, for
/// running the full obstruction machinery on a line witness.
pub fn line_as_complex(ext: &SquareZeroExt, line: &GradedLine) -> Result<SheafComplex> {
    let down = &ext.down;
    let stalks: Vec<Complex> =
        (0..down.len()).map(|p| Complex::concentrated(&down.rings[p], 0, 1)).collect();
    let mut rho = BTreeMap::new();
    for p in 0..down.len() {
        for q in 0..down.len() {
            if !down.le(p, q) {
                continue;
            }
            let mut m = RMatrix::zero(&down.rings[q], 1, 1);
            m.set(0, 0, line.unit(p, q));
            let mut per = BTreeMap::new();
            per.insert(0i64, m);
            rho.insert((p, q), per);
        }
    }
    SheafComplex::new(down.clone(), stalks, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_is_deterministic() {
        let a = generate("pseudo-circle", "z9-z3", 42).unwrap();
        let b = generate("pseudo-circle", "z9-z3", 42).unwrap();
        assert_eq!(a.e.stalks[0].diff(0), b.e.stalks[0].diff(0));
        let c = generate("pseudo-circle", "z9-z3", 43).unwrap();
        assert_eq!(c.id, "pseudo-circle-z9-z3-43");
    }

    #[test]
    fn random_complexes_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in ["point", "chain", "pseudo-circle", "sphere6"] {
            let poset = poset_by_name(kind).unwrap();
            let ext = ext_by_name(&poset, "z9-z3").unwrap();
            let e = random_sheaf_complex(&ext.down, &[2, 2], &mut rng).unwrap();
            assert!(e.is_stalkwise_strictly_perfect());
        }
    }

    #[test]
    fn corpus_size_and_kinds() {
        let corpus = standard_corpus(7);
        assert!(corpus.len() >= 200, "corpus has {} instances", corpus.len());
    }

    #[test]
    fn filtered_instances_validate() {
        let insts = filtered_instances(8, 3).unwrap();
        assert_eq!(insts.len(), 8);
    }

    #[test]
    fn line_witness_found_on_rp2() {
        let w = search_line_witness(10_000, 0).unwrap();
        let (id, ext, line) = w.expect("a nonzero line obstruction witness exists");
        let lo = crate::deform::line_obstruction(&ext, &line).unwrap();
        assert!(lo.class.iter().any(|&x| x != 0), "{}", id);
    }

    #[test]
    fn local_rings_are_local() {
        for r in corpus_local_rings() {
            let (loc, _) = crate::ring::is_local(&r).unwrap();
            assert!(loc);
        }
    }
}
