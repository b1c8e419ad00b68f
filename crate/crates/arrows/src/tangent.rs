use num_bigint::BigUint;

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `t_1 = 1`, `t_k = Σ_{l=1}^{k-1} C(2k-2, 2l-1) t_l t_{k-l}`; returns `t_1..t_k`.
pub fn tangent_numbers(k: usize) -> Vec<BigUint> {
    let mut t: Vec<BigUint> = Vec::with_capacity(k);
    for n in 1..=k {
        if n == 1 {
            t.push(BigUint::from(1u32));
            continue;
        }
        let s = (1..n).map(|l| binomial(2 * n - 2, 2 * l - 1) * &t[l - 1] * &t[n - l - 1]).sum();
        t.push(s);
    }
    t
}

/// `t_k · k!` for `k = 1..=k`: the clique degrees in the random graph.
pub fn rado_clique_degrees(k: usize) -> Vec<BigUint> {
    let mut fact = BigUint::from(1u32);
    tangent_numbers(k)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            fact *= BigUint::from(i + 1);
            t * &fact
        })
        .collect()
}
