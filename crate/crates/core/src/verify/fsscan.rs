use serde_json::json;

use super::report::CheckReport;
use crate::error::Result;
use crate::fpmod::{fs_bound, ker_map, FsBound};
use crate::tower::{Chain, Tower};

fn bound_value(b: &FsBound) -> serde_json::Value {
    let per: serde_json::Map<String, serde_json::Value> =
        b.per_prime.iter().map(|(l, n)| (l.to_string(), json!(n))).collect();
    json!({ "per_prime": per, "bound": b.bound })
}

/// Generator bounds for the kernels `K_m = ker θ_m` at each requested level,
/// and for the images `ϱ_m(K_M)` of the top kernel.
///
/// The witness records whether `μ_p(K_m)` is constant in `m` and the maximum
/// bound `c`. The check passes when every bound was computed.
pub fn fs_scan(t: &Tower, chain: &Chain, levels: &[usize]) -> Result<CheckReport> {
    let lv: Vec<String> = levels.iter().map(|m| m.to_string()).collect();
    let mut r = CheckReport::new("fsscan")
        .param("p", t.p())
        .param("d", t.rank())
        .param("M", t.max_level())
        .param("chain", &chain.name)
        .param("levels", lv.join(","));
    let p = t.p();
    let mut mu_p = Vec::new();
    let mut c = 0usize;
    for &m in levels {
        t.level(m)?;
        let (k, _) = ker_map(&chain.at_level(t, m)?)?;
        let b = fs_bound(&k, p)?;
        let (s, _) = chain.stable_kernel_image(t, m)?;
        let sb = fs_bound(&s, p)?;
        mu_p.push(b.per_prime.get(&p).copied().unwrap_or(0));
        c = c.max(b.bound).max(sb.bound);
        let differs = sb != b;
        r.push(
            CheckReport::leaf(format!("level_{m}"), true)
                .with_witness("kernel", bound_value(&b))
                .with_witness("stable_image", bound_value(&sb))
                .with_witness("differs", differs),
        );
    }
    let constant = mu_p.windows(2).all(|w| w[0] == w[1]);
    r.set_witness("mu_p", json!(mu_p));
    r.set_witness("p_constant", constant);
    r.set_witness("c", c);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::TowerSpec;

    #[test]
    fn varpi_chain_has_constant_bound() {
        let t = Tower::build(&TowerSpec::new(3, 1, 3), 128).unwrap();
        let r = fs_scan(&t, &Chain::varpi(&t).unwrap(), &[0, 1, 2, 3]).unwrap();
        assert!(r.passed);
        assert_eq!(r.witness["p_constant"], json!(true));
        assert_eq!(r.witness["mu_p"], json!([1, 1, 1, 1]));
        assert_eq!(r.witness["c"], json!(2));
    }
}
