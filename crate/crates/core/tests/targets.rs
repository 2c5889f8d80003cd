//! Target sets and compositions against direct enumeration.

use subgroup_decomp::field::odd_primes_in;
use subgroup_decomp::set::{build_target, compose_sets, Composition, TargetVariant};
use subgroup_decomp::{ElementSet, FieldContext};

fn brute_target(p: u64, g: &[u64], v: TargetVariant) -> Vec<u32> {
    let mut out: Vec<u64> = match v {
        TargetVariant::ShiftMinusLambda { lambda } => g.iter().map(|x| (x + p - lambda as u64) % p).collect(),
        TargetVariant::XiShift { xi, mu } => g.iter().map(|x| (x * xi as u64 + mu as u64) % p).collect(),
        TargetVariant::XiShiftWithZero { xi, mu } => g
            .iter()
            .map(|x| (x * xi as u64 + mu as u64) % p)
            .chain([mu as u64 % p])
            .collect(),
        TargetVariant::GUnionZero => g.iter().copied().chain([0]).collect(),
    };
    if !matches!(v, TargetVariant::GUnionZero) {
        out.retain(|&x| x != 0);
    }
    out.sort_unstable();
    out.dedup();
    out.into_iter().map(|x| x as u32).collect()
}

#[test]
fn targets_match_enumeration() {
    for p in odd_primes_in(3, 23) {
        let ctx = FieldContext::new(p as u64).unwrap();
        for g in ctx.proper_subgroups() {
            // Subgroup elements as the d-th powers of the nonzero residues.
            let k = (p - 1) / g.order();
            let mut elems: Vec<u64> = (1..p as u64).map(|x| (0..k).fold(1, |acc, _| acc * x % p as u64)).collect();
            elems.sort_unstable();
            elems.dedup();
            assert_eq!(g.elements().to_vec(), elems.iter().map(|&x| x as u32).collect::<Vec<_>>());
            let mut variants = vec![TargetVariant::GUnionZero];
            for a in 1..p {
                variants.push(TargetVariant::ShiftMinusLambda { lambda: a });
                for b in [1, p - 1] {
                    variants.push(TargetVariant::XiShift { xi: a, mu: b });
                    variants.push(TargetVariant::XiShiftWithZero { xi: a, mu: b });
                }
            }
            for v in variants {
                let t = build_target(&g, v).unwrap();
                assert_eq!(t.to_vec(), brute_target(p as u64, &elems, v), "p={p} |G|={} {v:?}", g.order());
            }
        }
    }
}

#[test]
fn compositions_match_enumeration() {
    let p = 13u32;
    let ctx = FieldContext::new(p as u64).unwrap();
    let a = ElementSet::from_residues(p, [0, 2, 5, 11]);
    let b = ElementSet::from_residues(p, [1, 3, 12]);
    let pow = |x: u32, e: u32| (0..e).fold(1u32, |acc, _| acc * x % p);
    let expect = |f: &dyn Fn(u32, u32) -> Option<u32>| {
        ElementSet::from_residues(p, a.iter().flat_map(|x| b.iter().filter_map(move |y| f(x, y))))
    };
    assert_eq!(compose_sets(&ctx, &a, &b, Composition::Sum).unwrap(), expect(&|x, y| Some((x + y) % p)));
    assert_eq!(compose_sets(&ctx, &a, &b, Composition::Difference).unwrap(), expect(&|x, y| Some((x + p - y) % p)));
    assert_eq!(compose_sets(&ctx, &a, &b, Composition::Product).unwrap(), expect(&|x, y| Some(x * y % p)));
    assert_eq!(
        compose_sets(&ctx, &a, &b, Composition::Ratio).unwrap(),
        expect(&|x, y| Some(x * pow(y, p - 2) % p))
    );
}
