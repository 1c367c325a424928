use kfvd::generators::gen_random;
use kfvd::oracle::{brute_force_optimum, verify_solution, DisjointInstance};
use kfvd::treewidth::{min_fill_decomposition, solve_treewidth, treewidth_optimum, TreeDecomposition};

#[test]
fn optimum_matches_brute_force_on_random_graphs() {
    for seed in 0..400u64 {
        let n = 2 + (seed % 8) as usize;
        let p = [0.15, 0.3, 0.5][(seed % 3) as usize];
        let g = gen_random(n, p, seed).unwrap();
        let (opt, _) = brute_force_optimum(&g);
        let (dp, witness) = treewidth_optimum(&g, None).unwrap();
        assert_eq!(dp, opt, "seed {seed}");
        assert_eq!(witness.len(), opt);
        let inst = DisjointInstance::new(g.clone(), n);
        assert!(verify_solution(&inst, &witness.into_iter().collect()).valid);
    }
}

#[test]
fn any_valid_decomposition_gives_the_same_answer() {
    for seed in 0..60u64 {
        let g = gen_random(6, 0.35, 1000 + seed).unwrap();
        let (opt, _) = brute_force_optimum(&g);
        let trivial = TreeDecomposition::trivial(6);
        assert_eq!(treewidth_optimum(&g, Some(&trivial)).unwrap().0, opt);
        let heuristic = min_fill_decomposition(&g);
        for k in 0..4 {
            let sol = solve_treewidth(&g, k, Some(&heuristic)).unwrap();
            assert_eq!(sol.status.is_yes(), opt <= k);
        }
    }
}
