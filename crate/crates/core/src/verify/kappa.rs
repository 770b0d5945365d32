use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;

use super::report::{invariants_value, CheckReport};
use crate::error::{Error, Result};
use crate::fpmod::{base_change, coker_map, homology_h1, ker_map, tor_mod_n, FPModule, ModuleMap};
use crate::groupring::GroupRingElement;
use crate::tower::{Chain, Tower};
use crate::zlinalg::AbelianInvariants;

/// `κ_a : (K_{a+1})_Δ -> K_a ⊂ R_a^t` for the kernels of a chain, with
/// `Δ = ker ρ_{a+1}`.
///
/// Checks that `ker κ_a` is finite of exponent dividing `|Δ|` and records
/// `H_1(Δ, R^t_{a+1}/K_{a+1})`, of which `ker κ_a` is a quotient. The same is
/// done for the image at level `a + 1` of the top-level kernel.
pub fn check_kappa(t: &Tower, chain: &Chain, a: usize) -> Result<CheckReport> {
    if a >= t.max_level() {
        return Err(Error::InvalidArgument(format!(
            "kappa needs levels {a} and {} below the top {}",
            a + 1,
            t.max_level()
        )));
    }
    let mut r = CheckReport::new("kappa")
        .param("p", t.p())
        .param("d", t.rank())
        .param("M", t.max_level())
        .param("a", a)
        .param("chain", &chain.name);
    let theta_up = chain.at_level(t, a + 1)?;
    let theta = chain.at_level(t, a)?;
    let (_, incl) = ker_map(&theta_up)?;
    r.push(kappa_for(t, a, &incl, &theta, "level_kernel")?);
    let (_, stable) = chain.stable_kernel_image(t, a + 1)?;
    let mut st = kappa_for(t, a, &stable, &theta, "stable_kernel")?;
    let diverges = stable.image_lattice() != incl.image_lattice();
    st.set_witness("differs_from_level_kernel", diverges);
    r.push(st);
    Ok(r)
}

/// The κ check for a submodule `incl : K -> R^t_{a+1}` inside `ker θ_{a+1}`.
fn kappa_for(t: &Tower, a: usize, incl: &ModuleMap, theta: &ModuleMap, name: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new(name);
    let rho = t.rho(a + 1);
    let delta = t.delta(a + 1);
    let (kb, _) = base_change(rho, incl.source())?;
    let pushed: Vec<Vec<GroupRingElement>> = incl
        .matrix()
        .iter()
        .map(|row| row.iter().map(|x| x.push(rho)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let kappa = ModuleMap::new(kb, theta.source().clone(), pushed)?;
    r.push(CheckReport::leaf("image_in_kernel", kappa.then(theta)?.is_zero()));
    let ker = kappa.kernel_invariants();
    let dsize = BigInt::from(delta.order());
    let divides = ker.is_finite() && dsize.is_multiple_of(&ker.torsion_exponent());
    r.push(
        CheckReport::leaf("exponent_divides_delta", divides)
            .with_witness("ker_kappa", invariants_value(&ker))
            .with_witness("delta_order", dsize.to_string()),
    );
    let c = coker_map(incl)?;
    let h1 = homology_h1(delta, &c)?;
    let quotient_ok = match (ker.order(), h1.order()) {
        (Some(k), Some(h)) => h.is_multiple_of(&k) && h1.torsion_exponent().is_multiple_of(&ker.torsion_exponent()),
        _ => false,
    };
    r.push(
        CheckReport::leaf("quotient_of_h1", quotient_ok)
            .with_witness("h1", invariants_value(&h1)),
    );
    Ok(r)
}

/// `p^m`-torsion of the underlying group of `m`.
pub fn p_power_torsion(m: &FPModule, p: u64, e: u32) -> AbelianInvariants {
    m.underlying_invariants().n_torsion(&BigInt::from(p).pow(e))
}

/// `Tor_1(R/p^e, M)` from a resolution against `M[p^e]` from the Smith form.
pub fn check_tor_ppower(m: &FPModule, p: u64, e: u32) -> Result<CheckReport> {
    if e == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    let n = BigInt::from(p).pow(e);
    let tor = tor_mod_n(1, &n, m)?;
    let tors = p_power_torsion(m, p, e);
    let r = CheckReport::leaf("tor_ppower", tor == tors)
        .param("group", format!("{:?}", m.group()))
        .param("p", p)
        .param("e", e)
        .with_witness("tor1", invariants_value(&tor))
        .with_witness("torsion", invariants_value(&tors));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::FiniteAbelianGroup;
    use crate::tower::TowerSpec;

    fn tower(p: u64, m: usize) -> Tower {
        Tower::build(&TowerSpec::new(p, 1, m), 128).unwrap()
    }

    #[test]
    fn kappa_on_simple_chains() {
        let t = tower(2, 2);
        let r = check_kappa(&t, &Chain::identity(&t).unwrap(), 1).unwrap();
        assert!(r.passed, "{:?}", r.failed_leaves());
        let ker = &r.find("level_kernel").unwrap().find("exponent_divides_delta").unwrap().witness["ker_kappa"];
        assert_eq!(ker["free_rank"], serde_json::json!(0));
        assert_eq!(ker["torsion"], serde_json::json!([]));
        let r = check_kappa(&t, &Chain::zero(&t).unwrap(), 1).unwrap();
        assert!(r.passed, "{:?}", r.failed_leaves());
        let r = check_kappa(&t, &Chain::varpi(&t).unwrap(), 1).unwrap();
        assert!(r.passed, "{:?}", r.failed_leaves());
    }

    #[test]
    fn tor_against_torsion() {
        let g = FiniteAbelianGroup::cyclic(3);
        let three = GroupRingElement::one(&g).scale(&3.into());
        let m = FPModule::cyclic(&g, &[three]).unwrap();
        let r = check_tor_ppower(&m, 3, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.witness["tor1"]["torsion"], serde_json::json!(["3", "3", "3"]));
        assert!(check_tor_ppower(&FPModule::free(&g, 2), 3, 2).unwrap().passed);
        assert!(check_tor_ppower(&FPModule::trivial_z(&FiniteAbelianGroup::cyclic(5)), 5, 1).unwrap().passed);
    }
}
