use perfdef::cechhom::cech_hom_total;
use perfdef::corpus;
use perfdef::deform::obstruction_cocycle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let insts = corpus::standard_corpus(1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for inst in insts.iter().filter(|i| i.id.contains("sphere6")) {
        let ob = match obstruction_cocycle(&inst.ext, &inst.e) {
            Ok(o) => o,
            Err(e) => {
                println!("{}: obstruction error {:?}", inst.id, e);
                continue;
            }
        };
        let ch = &ob.ch;
        let h1 = ch.cohomology(1);
        // sanity: strictify of a coboundary must succeed
        let mut cob_fail = 0;
        for _ in 0..5 {
            let dim0 = ch.dim(0);
            let coords: Vec<u64> =
                (0..dim0).map(|_| rand::Rng::gen_range(&mut rng, 0..ch.m)).collect();
            let beta = ch.unpack(0, &coords);
            let db = ch.apply_d(&beta);
            if ch.strictify(&db).is_none() {
                cob_fail += 1;
            }
        }
        // sampled classes
        let mut cls_fail = 0;
        let mut cls_tot = 0;
        for _ in 0..10 {
            let cls = h1.random_class(&mut rng);
            let alpha = ch.unpack(1, &h1.lift(&cls));
            cls_tot += 1;
            if ch.strictify(&alpha).is_none() {
                cls_fail += 1;
            }
        }
        let chee = cech_hom_total(&inst.ext.down, &inst.e, &inst.e);
        let _ = chee;
        println!(
            "{}: h1={:?} coboundary-strictify-fail={} class-strictify-fail={}/{}",
            inst.id,
            h1.invariants(),
            cob_fail,
            cls_fail,
            cls_tot
        );
    }
}
