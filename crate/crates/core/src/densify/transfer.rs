use crate::bitstring::BitString;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::kc::{ComplexityOracle, KcRequest};

use super::HittingFamily;

/// Checks `upper(σ) ≤ |σ| − c` for every entry.
pub fn certify(oracle: &dyn ComplexityOracle, compressed: &[(BitString, usize)]) -> Result<()> {
    for (sigma, c) in compressed {
        let u = oracle.upper(sigma);
        if u + c > sigma.len() {
            return Err(Error::pre(format!(
                "σ = {sigma} has upper bound {u}, above |σ| − c = {}",
                sigma.len() as i64 - *c as i64
            )));
        }
    }
    Ok(())
}

/// Requests `(τ, |τ| − c)` for each `(σ, c)` and `τ ∈ H_σ`, so that a machine
/// built from them compresses every `τ ∈ H_σ` as well as `σ` is compressed.
pub fn transfer_requests(
    fam: &HittingFamily,
    compressed: &[(BitString, usize)],
) -> Result<Vec<KcRequest>> {
    let mut out = Vec::new();
    for (sigma, c) in compressed {
        let h = fam
            .set(sigma)
            .ok_or_else(|| Error::pre(format!("σ = {sigma} is not a family index")))?;
        if *c > sigma.len() {
            return Err(Error::pre(format!("c = {c} exceeds |σ| = {}", sigma.len())));
        }
        out.extend(
            h.iter()
                .map(|tau| KcRequest::new(tau.clone(), tau.len() - c)),
        );
    }
    Ok(out)
}

/// `Σ 2^{c − |σ|}`, the exact weight of [`transfer_requests`] since
/// `μ(H_σ) = 2^{−|σ|}`.
pub fn transfer_weight(compressed: &[(BitString, usize)]) -> Dyadic {
    compressed
        .iter()
        .map(|(sigma, c)| Dyadic::pow2(*c as i64 - sigma.len() as i64))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bs;
    use crate::densify::family_build;
    use crate::error::Error;
    use crate::kc::{replay, request_weight, KcAllocator, MachineOracle, StubOracle, TableOracle};
    use crate::rng::RngSeed;
    use crate::schedule::LevelSchedule;
    use rand::Rng;

    fn small() -> HittingFamily {
        let l = LevelSchedule::from_depths(vec![0, 1, 3]).unwrap();
        let m = LevelSchedule::from_depths(vec![0, 1, 2]).unwrap();
        family_build(&l, &m, 2).unwrap()
    }

    #[test]
    fn examples() {
        let f = small();
        let reqs = transfer_requests(&f, &[(bs("00"), 1)]).unwrap();
        assert_eq!(
            reqs,
            vec![KcRequest::new(bs("000"), 2), KcRequest::new(bs("001"), 2)]
        );
        assert_eq!(request_weight(&reqs), "1/2".parse().unwrap());
        assert!(transfer_requests(&f, &[]).unwrap().is_empty());

        let over = [(bs("0"), 1), (bs("1"), 1)];
        let reqs = transfer_requests(&f, &over).unwrap();
        assert!(matches!(replay(&reqs), Err(Error::Allocation { .. })));
        assert!(transfer_requests(&f, &[(bs("000"), 0)]).is_err());
    }

    #[test]
    fn certification() {
        let o = TableOracle::new([(bs("00"), 1)]);
        assert!(certify(&o, &[(bs("00"), 1)]).is_ok());
        let err = certify(&o, &[(bs("00"), 2)]).unwrap_err();
        assert!(err.to_string().contains("σ = 00"), "{err}");
        assert!(certify(&StubOracle, &[(bs("01"), 0)]).is_ok());
    }

    /// Compressions read off a prefix-free machine transfer without overflow,
    /// and the transferred weight equals the machine's own weight.
    #[test]
    fn machine_domains_fit() {
        let l: LevelSchedule = "2n2".parse().unwrap();
        let m = LevelSchedule::square();
        let f = family_build(&l, &m, 2).unwrap();
        let indices: Vec<BitString> = (1..=2)
            .flat_map(|k| f.indices(k).cloned().collect::<Vec<_>>())
            .collect();
        let mut rng = RngSeed::new(17, 0).rng();
        for _ in 0..300 {
            let mut machine = KcAllocator::new();
            let mut compressed = Vec::new();
            for _ in 0..rng.gen_range(0..8) {
                let sigma = indices[rng.gen_range(0..indices.len())].clone();
                if machine.code_length(&sigma).is_some() {
                    continue;
                }
                let len = rng.gen_range(0..=sigma.len());
                if machine.push(&KcRequest::new(sigma.clone(), len)).is_ok() {
                    compressed.push((sigma.clone(), sigma.len() - len));
                }
            }
            certify(&MachineOracle::new(&machine), &compressed).unwrap();
            let reqs = transfer_requests(&f, &compressed).unwrap();
            assert_eq!(request_weight(&reqs), transfer_weight(&compressed));
            assert_eq!(transfer_weight(&compressed), machine.assigned_weight());
            let derived = replay(&reqs).unwrap();
            for (sigma, c) in &compressed {
                for tau in f.set(sigma).unwrap() {
                    assert!(derived.code_length(tau).unwrap() <= tau.len() - c);
                }
            }
        }
    }
}
