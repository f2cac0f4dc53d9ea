use std::time::Instant;

fn main() {
    let text = std::fs::read_to_string(std::env::args().nth(1).unwrap()).unwrap();
    let inst = perfdef::serial::parse(&text).unwrap();
    let t = Instant::now();
    let f = perfdef::trace::tensor_sheaf_complex(&inst.e, &inst.ext.ksheaf).unwrap();
    eprintln!("tensor {:?}", t.elapsed());
    let t = Instant::now();
    let ch = perfdef::cechhom::cech_hom_total(&inst.ext.down, &inst.e, &f).unwrap();
    eprintln!("cech_hom_total {:?} dims {} {} {}", t.elapsed(), ch.dim(1), ch.dim(2), ch.dim(3));
    let t = Instant::now();
    let h2 = ch.cohomology(2);
    eprintln!("cohomology(2) {:?} inv {:?}", t.elapsed(), h2.invariants());
    let t = Instant::now();
    let ob = perfdef::deform::obstruction_cocycle(&inst.ext, &inst.e).unwrap();
    eprintln!("obstruction_cocycle {:?}", t.elapsed());
    let t = Instant::now();
    let tr = perfdef::trace::ext_trace(&ob.ch, &inst.ext.ksheaf, &ob.cocycle).unwrap();
    eprintln!("ext_trace {:?}", t.elapsed());
    let t = Instant::now();
    let dl = perfdef::detline::det_complex(&inst.e).unwrap();
    eprintln!("det_complex {:?}", t.elapsed());
    let t = Instant::now();
    let lob = perfdef::deform::line_obstruction(&inst.ext, &dl).unwrap();
    eprintln!("line_obstruction {:?}", t.elapsed());
    let t = Instant::now();
    let tcls = lob.h2.class_of(&tr.packed).unwrap();
    eprintln!("class_of {:?}", t.elapsed());
    let t = Instant::now();
    let eq = lob.h2.classes_eq(&tcls, &lob.class);
    eprintln!("classes_eq {:?} => {}", t.elapsed(), eq);
}
