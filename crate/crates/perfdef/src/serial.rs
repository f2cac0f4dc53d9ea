//! Line-oriented text serialization (`perfdef v1`): diffable corpus files.
//!
//! Layout: a header line, then sections introduced by keywords. Integers in
//! decimal, matrices row-major, ring elements as coordinate tuples.

use std::collections::BTreeMap;

use crate::cechhom::SheafComplex;
use crate::complex::Complex;
use crate::corpus::Instance;
use crate::deform::SquareZeroExt;
use crate::module::RMatrix;
use crate::ring::{Elem, FiniteRing, RingHom};
use crate::site::{Poset, PosetSite};
use crate::{Error, Result};

pub const HEADER: &str = "perfdef v1";

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

fn write_elem(out: &mut String, e: &Elem) {
    for (i, c) in e.0.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&c.to_string());
    }
    if e.0.is_empty() {
        out.push('-');
    }
}

fn write_ring(out: &mut String, tag: &str, r: &FiniteRing) {
    out.push_str(&format!("RING {} {}", tag, r.k()));
    for o in r.orders() {
        out.push_str(&format!(" {}", o));
    }
    out.push('\n');
    for i in 0..r.k() {
        for j in 0..r.k() {
            let mut ei = r.zero();
            ei.0[i] = 1 % r.orders()[i].max(1);
            let mut ej = r.zero();
            ej.0[j] = 1 % r.orders()[j].max(1);
            out.push_str(&format!("M {} {} ", i, j));
            write_elem(out, &r.mul(&ei, &ej));
            out.push('\n');
        }
    }
    out.push_str("ONE ");
    write_elem(out, r.one());
    out.push('\n');
}

fn write_hom(out: &mut String, tag: &str, h: &RingHom) {
    out.push_str(&format!("HOM {} {}\n", tag, h.images.len()));
    for img in &h.images {
        out.push_str("H ");
        write_elem(out, img);
        out.push('\n');
    }
}

fn write_matrix(out: &mut String, tag: &str, m: &RMatrix) {
    out.push_str(&format!("MAT {} {} {}\n", tag, m.rows, m.cols));
    for i in 0..m.rows {
        out.push_str("R ");
        for j in 0..m.cols {
            if j > 0 {
                out.push(' ');
            }
            write_elem(out, m.get(i, j));
        }
        if m.cols == 0 {
            out.push('-');
        }
        out.push('\n');
    }
}

fn write_site(out: &mut String, tag: &str, s: &PosetSite) {
    out.push_str(&format!("SITE {} {}\n", tag, s.len()));
    for l in &s.labels {
        out.push_str(&format!("LABEL {}\n", l));
    }
    for p in 0..s.len() {
        for q in 0..s.len() {
            if p != q && s.le(p, q) {
                out.push_str(&format!("LE {} {}\n", p, q));
            }
        }
    }
    for p in 0..s.len() {
        write_ring(out, &format!("stalk{}", p), &s.rings[p]);
    }
    for p in 0..s.len() {
        for q in 0..s.len() {
            if s.le(p, q) {
                write_hom(out, &format!("res{}:{}", p, q), s.res(p, q));
            }
        }
    }
}

fn write_complex(out: &mut String, e: &SheafComplex) {
    let site = &e.site;
    out.push_str(&format!("SHEAFCOMPLEX {}\n", site.len()));
    for p in 0..site.len() {
        let c = &e.stalks[p];
        out.push_str(&format!("COMPLEX {} {} {}", p, c.lo, c.hi));
        for n in c.lo..=c.hi {
            out.push_str(&format!(" {}", c.rank(n)));
        }
        out.push('\n');
        for n in c.lo..c.hi {
            write_matrix(out, &format!("d{}:{}", p, n), &c.diff(n));
        }
    }
    let (lo, hi) = e.span();
    for p in 0..site.len() {
        for q in 0..site.len() {
            if !site.le(p, q) || p == q {
                continue;
            }
            for n in lo..=hi {
                write_matrix(out, &format!("rho{}:{}:{}", p, q, n), &e.rho_at(p, q, n));
            }
        }
    }
}

/// Serialize an instance to the `perfdef v1` text format.
pub fn serialize(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("INSTANCE {} {}\n", inst.id, inst.seed));
    write_site(&mut out, "up", &inst.ext.up);
    write_site(&mut out, "down", &inst.ext.down);
    for (p, q) in inst.ext.quot.iter().enumerate() {
        write_hom(&mut out, &format!("quot{}", p), q);
    }
    write_complex(&mut out, &inst.e);
    if let Some(levels) = &inst.levels {
        for ((p, n), lv) in levels {
            out.push_str(&format!("LEVELS {} {}", p, n));
            for l in lv {
                out.push_str(&format!(" {}", l));
            }
            out.push('\n');
        }
    }
    out.push_str("END\n");
    out
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(s: &'a str) -> Self {
        Reader { lines: s.lines().filter(|l| !l.trim().is_empty()).collect(), pos: 0 }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn next_line(&mut self) -> Result<&'a str> {
        let l = self.lines.get(self.pos).copied().ok_or_else(|| parse_err("unexpected end"))?;
        self.pos += 1;
        Ok(l)
    }

    fn expect(&mut self, kw: &str) -> Result<Vec<&'a str>> {
        let l = self.next_line()?;
        let mut parts = l.split_whitespace();
        let head = parts.next().ok_or_else(|| parse_err("empty line"))?;
        if head != kw {
            return Err(parse_err(&format!("expected {}, found {}", kw, head)));
        }
        Ok(parts.collect())
    }
}

fn parse_err(msg: &str) -> Error {
    Error::Invalid(format!("parse: {}", msg))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse().map_err(|_| parse_err(&format!("bad integer {}", s)))
}

fn parse_i64(s: &str) -> Result<i64> {
    s.parse().map_err(|_| parse_err(&format!("bad integer {}", s)))
}

fn parse_elem(s: &str) -> Result<Elem> {
    if s == "-" {
        return Ok(Elem(Vec::new()));
    }
    let coords: Result<Vec<u64>> = s.split(',').map(parse_u64).collect();
    Ok(Elem(coords?))
}

fn read_ring(r: &mut Reader) -> Result<(String, FiniteRing)> {
    let args = r.expect("RING")?;
    if args.len() < 2 {
        return Err(parse_err("RING header"));
    }
    let tag = args[0].to_string();
    let k = parse_u64(args[1])? as usize;
    if args.len() != 2 + k {
        return Err(parse_err("RING orders"));
    }
    let orders: Result<Vec<u64>> = args[2..].iter().map(|s| parse_u64(s)).collect();
    let orders = orders?;
    let mut mult = vec![Elem(vec![0; k]); k * k];
    for _ in 0..k * k {
        let m = r.expect("M")?;
        let (i, j) = (parse_u64(m[0])? as usize, parse_u64(m[1])? as usize);
        if i >= k || j >= k {
            return Err(parse_err("mult index"));
        }
        mult[i * k + j] = parse_elem(m[2])?;
    }
    let one_args = r.expect("ONE")?;
    let one = parse_elem(one_args[0])?;
    let modulus = orders.iter().copied().fold(1u64, lcm);
    Ok((tag, FiniteRing::new(modulus, orders, mult, one, "parsed")))
}

fn read_hom(r: &mut Reader, source: &FiniteRing, target: &FiniteRing) -> Result<(String, RingHom)> {
    let args = r.expect("HOM")?;
    let tag = args[0].to_string();
    let n = parse_u64(args[1])? as usize;
    let mut images = Vec::new();
    for _ in 0..n {
        let h = r.expect("H")?;
        images.push(parse_elem(h[0])?);
    }
    Ok((tag, RingHom::new(source.clone(), target.clone(), images)))
}

fn read_matrix(r: &mut Reader, ring: &FiniteRing) -> Result<(String, RMatrix)> {
    let args = r.expect("MAT")?;
    let tag = args[0].to_string();
    let rows = parse_u64(args[1])? as usize;
    let cols = parse_u64(args[2])? as usize;
    let mut m = RMatrix::zero(ring, rows, cols);
    for i in 0..rows {
        let vals = r.expect("R")?;
        if cols > 0 && vals.len() != cols {
            return Err(parse_err("matrix row width"));
        }
        for (j, v) in vals.iter().take(cols).enumerate() {
            m.set(i, j, parse_elem(v)?);
        }
    }
    Ok((tag, m))
}

fn read_site(r: &mut Reader) -> Result<PosetSite> {
    let args = r.expect("SITE")?;
    let n = parse_u64(args[1])? as usize;
    let mut labels = Vec::new();
    for _ in 0..n {
        let l = r.expect("LABEL")?;
        labels.push(l.join(" "));
    }
    let mut le_pairs = Vec::new();
    while let Some(l) = r.peek() {
        if !l.starts_with("LE ") {
            break;
        }
        let args = r.expect("LE")?;
        le_pairs.push((parse_u64(args[0])? as usize, parse_u64(args[1])? as usize));
    }
    let mut rings = Vec::new();
    for _ in 0..n {
        rings.push(read_ring(r)?.1);
    }
    let mut res = BTreeMap::new();
    for p in 0..n {
        for q in 0..n {
            if p == q || le_pairs.contains(&(p, q)) {
                let (_, h) = read_hom(r, &rings[p], &rings[q])?;
                res.insert((p, q), h);
            }
        }
    }
    let poset = Poset { labels, covers: le_pairs };
    let template = PosetSite::constant(&poset, &rings[0]);
    template.with_rings(rings, res)
}

fn read_complex(r: &mut Reader, site: &PosetSite) -> Result<SheafComplex> {
    let args = r.expect("SHEAFCOMPLEX")?;
    let n = parse_u64(args[0])? as usize;
    if n != site.len() {
        return Err(parse_err("sheaf complex site size"));
    }
    let mut stalks = Vec::new();
    for p in 0..n {
        let c = r.expect("COMPLEX")?;
        let lo = parse_i64(c[1])?;
        let hi = parse_i64(c[2])?;
        let ranks: Result<Vec<usize>> = c[3..].iter().map(|s| Ok(parse_u64(s)? as usize)).collect();
        let ranks = ranks?;
        if (hi - lo + 1) as usize != ranks.len() {
            return Err(parse_err("complex rank count"));
        }
        let mut diffs = Vec::new();
        for _ in lo..hi {
            diffs.push(read_matrix(r, &site.rings[p])?.1);
        }
        stalks.push(Complex::from_free(&site.rings[p], lo, &ranks, diffs)?);
    }
    let lo = stalks.iter().map(|c| c.lo).min().unwrap_or(0);
    let hi = stalks.iter().map(|c| c.hi).max().unwrap_or(0);
    let mut rho: BTreeMap<(usize, usize), BTreeMap<i64, RMatrix>> = BTreeMap::new();
    for p in 0..n {
        for q in 0..n {
            if !site.le(p, q) {
                continue;
            }
            let mut per = BTreeMap::new();
            for nn in lo..=hi {
                if p == q {
                    per.insert(nn, RMatrix::identity(&site.rings[p], stalks[p].rank(nn)));
                } else {
                    per.insert(nn, read_matrix(r, &site.rings[q])?.1);
                }
            }
            rho.insert((p, q), per);
        }
    }
    SheafComplex::new(site.clone(), stalks, rho)
}

/// Parse an instance from the `perfdef v1` text format; all components are
/// re-validated on construction.
pub fn parse(s: &str) -> Result<Instance> {
    let mut r = Reader::new(s);
    if r.next_line()? != HEADER {
        return Err(parse_err("missing header"));
    }
    let args = r.expect("INSTANCE")?;
    let id = args[0].to_string();
    let seed = parse_u64(args[1])?;
    let up = read_site(&mut r)?;
    let down = read_site(&mut r)?;
    let mut quot = Vec::new();
    for p in 0..down.len() {
        quot.push(read_hom(&mut r, &up.rings[p], &down.rings[p])?.1);
    }
    let ext = SquareZeroExt::new(up, down, quot)?;
    let e = read_complex(&mut r, &ext.down)?;
    let mut levels: BTreeMap<(usize, i64), Vec<i64>> = BTreeMap::new();
    while let Some(l) = r.peek() {
        if !l.starts_with("LEVELS ") {
            break;
        }
        let args = r.expect("LEVELS")?;
        let p = parse_u64(args[0])? as usize;
        let n = parse_i64(args[1])?;
        let lv: Result<Vec<i64>> = args[2..].iter().map(|s| parse_i64(s)).collect();
        levels.insert((p, n), lv?);
    }
    r.expect("END")?;
    Ok(Instance { id, ext, e, levels: if levels.is_empty() { None } else { Some(levels) }, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn roundtrip_generated_instances() {
        for (kind, ring) in [
            ("point", "z4-z2"),
            ("pseudo-circle", "z9-z3"),
            ("chain", "trivial-z4"),
            ("wedge3", "product"),
        ] {
            let inst = corpus::generate(kind, ring, 5).unwrap();
            let text = serialize(&inst);
            let back = parse(&text).unwrap();
            assert_eq!(serialize(&back), text, "roundtrip for {}-{}", kind, ring);
            assert_eq!(back.id, inst.id);
            assert_eq!(back.seed, inst.seed);
        }
    }

    #[test]
    fn roundtrip_showcases() {
        for inst in [
            corpus::showcase_pseudo_circle(),
            corpus::three_term_z2(),
            corpus::nonliftable(8, 4, 2),
        ] {
            let text = serialize(&inst);
            let back = parse(&text).unwrap();
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("perfdef v0\nINSTANCE x 0\n").is_err());
        assert!(parse("").is_err());
    }
}
