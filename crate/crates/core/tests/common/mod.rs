use wsaic::functions::OptimaRegistry;
use wsaic::metrics::effective_niche_radius;
use wsaic::Position;

/// Maximum bipartite matching between solutions and known optima, by exhaustive
/// search over the optima.
pub fn brute_force_matching(sol: &[(Position, f64)], reg: &OptimaRegistry, eps: f64, radius: f64) -> u64 {
    let r = effective_niche_radius(reg, radius);
    let ok = |a: usize, o: usize| {
        let (x, f) = &sol[a];
        let d: f64 = x
            .iter()
            .zip(reg.representatives()[o].iter())
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        *f <= reg.minimum_value() + eps && d <= r
    };
    fn go(o: usize, used: &mut Vec<bool>, n_opt: usize, ok: &dyn Fn(usize, usize) -> bool) -> u64 {
        if o == n_opt {
            return 0;
        }
        let mut best = go(o + 1, used, n_opt, ok);
        for a in 0..used.len() {
            if !used[a] && ok(a, o) {
                used[a] = true;
                best = best.max(1 + go(o + 1, used, n_opt, ok));
                used[a] = false;
            }
        }
        best
    }
    let mut used = vec![false; sol.len()];
    go(0, &mut used, reg.representatives().len(), &ok)
}
