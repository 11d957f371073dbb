use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::stringset::StringSet;
use crate::tree::FiniteTree;

/// Depth-`depth` truncation of the pruned tree with paths `{τ1∗z : τ0 ≺ z}`.
///
/// Each zero of `z` at position `p` spawns the path `z↾p·1·z`. These paths
/// accumulate on `z`, so `z` is a path too and `z↾depth` is a leaf.
pub fn derived_tree(zprefix: &BitString, depth: usize) -> Result<FiniteTree> {
    if depth > zprefix.len() {
        return Err(Error::pre(format!(
            "depth {depth} needs {depth} bits of z, only {} given",
            zprefix.len()
        )));
    }
    if !zprefix.bits().contains(&false) {
        return Err(Error::pre(format!(
            "z prefix {zprefix} has no zero, so no τ with τ0 ≺ z is visible and the tree is empty"
        )));
    }
    let mut leaves = StringSet::singleton(zprefix.prefix(depth));
    for p in (0..depth).filter(|&p| !zprefix.bit(p)) {
        let mut path = zprefix.prefix(p);
        path.push(true);
        leaves.insert(path.concat(&zprefix.prefix(depth - p - 1)));
    }
    FiniteTree::new(depth, leaves)
}

/// Recovers `z↾h` from a derived tree of height `h`: every other path turns
/// right off `z` at a zero of `z`, so `z` is the leftmost path.
pub fn decode(t: &FiniteTree) -> BitString {
    t.leaves()
        .first()
        .cloned()
        .expect("trees have at least one leaf")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bs;
    use crate::rng::{random_word, RngSeed};
    use crate::stringset::set;

    #[test]
    fn examples() {
        let t = derived_tree(&bs("0101"), 4).unwrap();
        assert_eq!(t.leaves(), &set(&["1010", "0110", "0101"]));
        assert_eq!(t.to_leaves_format(), "height=4\n0101\n0110\n1010\n");
        assert!(derived_tree(&bs("1111"), 4).is_err());
        assert!(derived_tree(&bs("01"), 3).is_err());
        assert_eq!(
            derived_tree(&bs("1110"), 2).unwrap().leaves(),
            &set(&["11"])
        );
    }

    /// Truncating the paths of a long `z` directly gives the same tree.
    #[test]
    fn matches_path_definition() {
        let mut rng = RngSeed::new(9, 0).rng();
        for _ in 0..200 {
            let z = random_word(&mut rng, 96);
            for d in [1, 5, 12, 20] {
                let direct: StringSet = (0..z.len())
                    .filter(|&p| !z.bit(p))
                    .map(|p| {
                        let mut path = z.prefix(p);
                        path.push(true);
                        path.concat(&z).prefix(d)
                    })
                    .collect();
                if !z.prefix(d).bits().contains(&false) {
                    continue;
                }
                assert_eq!(derived_tree(&z.prefix(d), d).unwrap().leaves(), &direct);
            }
        }
    }

    #[test]
    fn round_trip() {
        let mut rng = RngSeed::new(4, 0).rng();
        let mut checked = 0;
        while checked < 100 {
            let z = random_word(&mut rng, 8);
            if !z.bits().contains(&false) {
                continue;
            }
            let back = decode(&derived_tree(&z, 8).unwrap());
            assert!(back.is_prefix_of(&z) && back.len() >= 3);
            checked += 1;
        }
    }
}
