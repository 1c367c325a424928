use kfvd::branching::{BranchSolver, BranchStats, Mode};
use kfvd::generators::gen_random;
use kfvd::metrics::{k_width, min_dfvs, Capped};
use kfvd::oracle::{brute_force_min, DisjointInstance};

fn add(total: &mut BranchStats, s: BranchStats) {
    total.sinkv_violations += s.sinkv_violations;
    total.border_head_excess += s.border_head_excess;
    total.border_total_excess += s.border_total_excess;
    total.unguarded_arcs += s.unguarded_arcs;
    total.leaves += s.leaves;
    total.contractions += s.contractions;
    total.max_b = total.max_b.max(s.max_b);
}

#[test]
fn both_drivers_match_brute_force() {
    let mut totals = [BranchStats::default(), BranchStats::default()];
    let mut checked = 0;
    for seed in 0..700u64 {
        let n = 3 + (seed % 7) as usize;
        let p = [0.2, 0.3, 0.45][(seed % 3) as usize];
        let g = gen_random(n, p, seed).unwrap();
        let Some(f) = min_dfvs(&g, 3) else { continue };
        for k in 0..=3 {
            let expect = brute_force_min(&DisjointInstance::new(g.clone(), k)).status;
            let inst = DisjointInstance::new(g.clone(), k).with_dfvs(f.clone()).unwrap();
            for (i, mode) in [Mode::KWidth, Mode::Path].into_iter().enumerate() {
                let mut solver = BranchSolver::new(mode);
                let sol = solver.solve(&inst).unwrap();
                assert_eq!(sol.status, expect, "seed {seed} k {k} {mode:?}");
                add(&mut totals[i], solver.stats());
            }
            checked += 1;
        }
    }
    assert!(checked >= 500);
    for t in &totals {
        assert_eq!(t.sinkv_violations, 0, "{t:?}");
        assert_eq!(t.border_head_excess, 0, "{t:?}");
        assert_eq!(t.unguarded_arcs, 0, "{t:?}");
    }
    eprintln!("kwidth {:?}\npath {:?}", totals[0], totals[1]);
}

#[test]
fn branch_set_items_respect_kwidth() {
    for seed in 0..200u64 {
        let g = gen_random(7, 0.3, 5000 + seed).unwrap();
        let Some(f) = min_dfvs(&g, 3) else { continue };
        let b = kfvd::branching::build_branch_set_b(&g, &f);
        if let Capped::Exact(kappa) = k_width(&g, 1000) {
            assert!(b.max_item <= kappa);
            assert!(b.vertices.len() <= kappa * f.len().pow(4));
        }
    }
}
