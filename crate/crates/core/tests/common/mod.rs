#![allow(dead_code)]

use proptest::prelude::*;
use supercompact::duality::FinPoset;
use supercompact::fincat::{ConcreteBuilder, FiniteCategory};

/// A random partial order on up to `max` elements, from a random strict
/// upper triangular relation closed transitively.
pub fn arb_poset(max: usize) -> impl Strategy<Value = FinPoset> {
    (0..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let covers: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * n + j]).collect();
            let names = (0..n).map(|i| i.to_string()).collect();
            FinPoset::from_covers(names, &covers).expect("acyclic relation")
        })
    })
}

/// A random subcategory of finite sets: up to three objects of size at most
/// two, generated by up to three functions.
pub fn arb_concrete() -> impl Strategy<Value = FiniteCategory> {
    let sizes = proptest::collection::vec(1usize..=2, 1..=3);
    sizes.prop_flat_map(|sizes| {
        let k = sizes.len();
        let arrow = (0..k, 0..k, proptest::collection::vec(0usize..2, 2));
        proptest::collection::vec(arrow, 0..=3).prop_map(move |arrows| {
            let mut b = ConcreteBuilder::new();
            for (i, &s) in sizes.iter().enumerate() {
                b = b.object(&format!("X{i}"), s);
            }
            let mut seen: Vec<(usize, usize, Vec<usize>)> = Vec::new();
            for (j, (d, c, vals)) in arrows.into_iter().enumerate() {
                let map: Vec<usize> = (0..sizes[d]).map(|e| vals[e] % sizes[c]).collect();
                let identity = d == c && map.iter().enumerate().all(|(e, &v)| e == v);
                if identity || seen.contains(&(d, c, map.clone())) {
                    continue;
                }
                seen.push((d, c, map.clone()));
                b = b.arrow(&format!("m{j}"), &format!("X{d}"), &format!("X{c}"), &map);
            }
            b.build().expect("distinct generators")
        })
    })
}

/// Every subset of `items`, in order of the bitmask.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u64..(1u64 << items.len()))
        .map(|mask| (0..items.len()).filter(|&i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}
