use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{invariants_value, CheckReport};
use crate::error::{Error, Result};
use crate::fpmod::{
    base_change, fs_bound, submodule_from_generators, FPModule, ModuleMap, SmithCoordinates,
};
use crate::groupring::{FiniteAbelianGroup, GroupRingElement};
use crate::tower::{Tower, TowerModule};
use crate::zlinalg::{solve, Lattice};

/// A generator of the limit module: one flat vector per level.
pub type LiftedGenerator = Vec<Vec<BigInt>>;

/// `x * v` for a flat vector `v` of `Z[Γ]^n`.
fn act(g: &FiniteAbelianGroup, x: &GroupRingElement, v: &[BigInt]) -> Vec<BigInt> {
    let n = g.order();
    let coeffs = x.numerators();
    let mut out = vec![BigInt::zero(); v.len()];
    for (b, chunk) in v.chunks(n).enumerate() {
        for (h, c) in chunk.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, e) in coeffs.iter().enumerate() {
                if !e.is_zero() {
                    out[b * n + g.add(a, h)] += c * e;
                }
            }
        }
    }
    out
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Some `y` with `f(y) = v` in the target of `f`.
fn lift_through(f: &ModuleMap, v: &[BigInt]) -> Result<Vec<BigInt>> {
    let rel = f.target().relation_lattice().basis_columns();
    let a = if rel.cols() == 0 { f.flat().clone() } else { f.flat().hstack(&rel)? };
    let z = solve(&a, v)?
        .ok_or_else(|| Error::NotContained("element has no preimage under the transition".into()))?;
    Ok(z[..f.source().flat_dim()].to_vec())
}

/// Some `s` in the lattice `sub` with `f(s) = v` in the target of `f`.
fn lift_into(f: &ModuleMap, sub: &Lattice, v: &[BigInt]) -> Result<Vec<BigInt>> {
    let b = sub.basis_columns();
    if b.cols() == 0 {
        return Ok(vec![BigInt::zero(); f.source().flat_dim()]);
    }
    let fb = f.flat().checked_mul(&b)?;
    let rel = f.target().relation_lattice().basis_columns();
    let a = if rel.cols() == 0 { fb } else { fb.hstack(&rel)? };
    let z = solve(&a, v)?
        .ok_or_else(|| Error::NotContained("correction does not lift into the submodule".into()))?;
    b.mul_vec(&z[..b.cols()])
}

fn unit_matrix(g: &FiniteAbelianGroup, n: usize) -> Vec<Vec<GroupRingElement>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { GroupRingElement::one(g) } else { GroupRingElement::zero(g, crate::BaseRing::Int) })
                .collect()
        })
        .collect()
}

/// Global minimal generator count of a finite module: the maximum over
/// the primes dividing its order.
fn finite_mu(m: &FPModule) -> Result<usize> {
    let inv = m.underlying_invariants();
    if inv.is_zero() {
        return Ok(0);
    }
    let order = inv
        .order()
        .ok_or_else(|| Error::InvalidArgument("module is not finite".into()))?;
    let p = crate::fpmod::prime_divisors(&order)?;
    let first = *p.first().expect("nontrivial order");
    Ok(fs_bound(m, first)?.per_prime.values().copied().max().unwrap_or(0))
}

/// Lifts generators through a tower module, following the inductive proof:
/// `X_0` generates `M_(0)` over `Z`; each `X_n` lifts `X_{n-1}` and generates
/// a submodule `M_n` of finite prime-to-`p` index (P1) with
/// `R_{n-1} ⊗ M_n ≅ M_{n-1}` (P2); the quotient `Q_n = M_(n)/M_n` splits
/// under the idempotent of `ker ρ_n` and its `(1 - e_n)` part contributes at
/// most `d` further generators.
///
/// Returns the generators (empty on failure) and the report; a tower that
/// is not pro-discrete fails with the base-change kernel as witness.
pub fn nakayama_lift(t: &Tower, tm: &TowerModule, d: usize) -> Result<(Vec<LiftedGenerator>, CheckReport)> {
    let mm = t.max_level();
    let mut r = CheckReport::new("nakayama")
        .param("p", t.p())
        .param("d", t.rank())
        .param("M", mm)
        .param("module", tm.name())
        .param("bound", d);
    if tm.height() != mm {
        return Err(Error::DimensionMismatch("tower module height".into()));
    }

    let bad = tm.non_surjective_transitions();
    let mut onto = CheckReport::leaf("transitions_onto", bad.is_empty());
    if let Some(&m) = bad.first() {
        onto.set_witness("level", m + 1);
        onto.set_witness("cokernel", invariants_value(&tm.transition(m).cokernel_invariants()));
    }
    if !r.push(onto) {
        return Ok((Vec::new(), r));
    }

    let defects = tm.base_change_defects(t)?;
    let mut p2 = CheckReport::leaf("p2_tower", defects.is_empty());
    if let Some(df) = defects.first() {
        p2.set_witness("level", df.level);
        p2.set_witness("kernel", invariants_value(&df.kernel));
        p2.set_witness("cokernel", invariants_value(&df.cokernel));
    }
    if !r.push(p2) {
        return Ok((Vec::new(), r));
    }

    let m0 = tm.level(0);
    let sc = SmithCoordinates::of(m0);
    let kappa = sc.rank();
    let mut x_levels: Vec<Vec<Vec<BigInt>>> = vec![sc.lift.column_vecs()];
    let (mut prev_sub, _) = submodule_from_generators(m0, &x_levels[0]);
    // z-generators: per generator, its flat vector at every level so far
    let mut z_levels: Vec<Vec<Vec<BigInt>>> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e616b61);
    let p = BigInt::from(t.p());

    for n in 1..=mm {
        let mn = tm.level(n);
        let tr = tm.transition(n - 1);
        let g = t.group(n);
        let xs: Vec<Vec<BigInt>> = x_levels[n - 1]
            .iter()
            .map(|x| lift_through(tr, x))
            .collect::<Result<_>>()?;
        let s = mn.submodule_lattice(&xs);
        let index = Lattice::full(mn.flat_dim()).quotient_invariants(&s)?;
        let p1_ok = index.order().is_some_and(|o| !o.is_multiple_of(&p));
        let p1 = CheckReport::leaf(format!("p1_level_{n}"), p1_ok)
            .with_witness("index", invariants_value(&index));
        if !r.push(p1) {
            return Ok((Vec::new(), r));
        }

        let (sub_n, _) = submodule_from_generators(mn, &xs);
        let (sub_b, _) = base_change(t.rho(n), &sub_n)?;
        let iso = ModuleMap::new(sub_b, prev_sub.clone(), unit_matrix(t.group(n - 1), kappa))?;
        let mut p2n = CheckReport::leaf(format!("p2_level_{n}"), iso.is_isomorphism());
        if !p2n.passed {
            p2n.set_witness("kernel", invariants_value(&iso.kernel_invariants()));
        }
        if !r.push(p2n) {
            return Ok((Vec::new(), r));
        }

        let q = FPModule::from_flat_relations(g, mn.n_gens(), s.basis().to_vec());
        let mut split = CheckReport::new(format!("q_split_level_{n}"))
            .with_witness("q", invariants_value(&index));
        let mut new_z: Vec<Vec<BigInt>> = Vec::new();
        if index.is_zero() {
            for z in z_levels.iter_mut() {
                let y = lift_through(tr, &z[n - 1])?;
                z.push(y);
            }
            split.set_witness("mu_one_minus_e", 0);
        } else {
            let delta = t.delta(n);
            let dsize = BigInt::from(delta.order());
            let norm = GroupRingElement::subgroup_norm(delta);
            let u = GroupRingElement::scalar(g, crate::BaseRing::Int, dsize.clone()).checked_sub(&norm)?;
            let cands: Vec<Vec<BigInt>> = (0..mn.n_gens())
                .map(|i| act(g, &u, &mn.generator_vector(i)))
                .collect();
            let (w_mod, _) = submodule_from_generators(&q, &cands);
            let mu = finite_mu(&w_mod)?;
            split.set_witness("mu_one_minus_e", mu);
            split.push(CheckReport::leaf("mu_at_most_d", mu <= d));
            let target = mn.submodule_lattice(&[s.basis().to_vec(), cands.clone()].concat());
            let ws = explicit_generators(g, &s, &target, &cands, mu, &mut rng);
            split.set_witness("chosen", ws.len());

            let exponent = index.torsion_exponent();
            let c = inverse_mod(&dsize, &exponent)?;
            for (i, z) in z_levels.iter_mut().enumerate() {
                let prev = &z[n - 1];
                let y = lift_through(tr, prev)?;
                let mut up = act(g, &norm, &y).into_iter().map(|v| v * &c).collect::<Vec<_>>();
                if let Some(w) = ws.get(i) {
                    up = add(&up, w);
                }
                let diff = sub(&tr.apply_flat(&up), prev);
                let fix = lift_into(tr, &s, &diff)?;
                z.push(sub(&up, &fix));
            }
            for w in ws.iter().skip(z_levels.len()) {
                new_z.push(w.clone());
            }
        }
        r.push(split);
        for w in new_z {
            let mut tuple: Vec<Vec<BigInt>> =
                (0..n).map(|k| vec![BigInt::zero(); tm.level(k).flat_dim()]).collect();
            tuple.push(w);
            z_levels.push(tuple);
        }
        x_levels.push(xs);
        prev_sub = sub_n;
    }

    let mut gens: Vec<LiftedGenerator> = (0..kappa)
        .map(|i| x_levels.iter().map(|lv| lv[i].clone()).collect())
        .collect();
    gens.extend(z_levels);

    let mut gen_check = CheckReport::new("generates");
    for n in 0..=mm {
        let vs: Vec<Vec<BigInt>> = gens.iter().map(|gv| gv[n].clone()).collect();
        gen_check.push(CheckReport::leaf(format!("level_{n}"), tm.level(n).generated_by(&vs)));
    }
    r.push(gen_check);

    let compatible = gens.iter().all(|gv| {
        (1..=mm).all(|n| {
            let down = tm.transition(n - 1).apply_flat(&gv[n]);
            tm.level(n - 1).same_element(&down, &gv[n - 1])
        })
    });
    r.push(CheckReport::leaf("compatible", compatible));

    let count = gens.len();
    r.push(
        CheckReport::leaf("count_bound", count <= kappa + d)
            .with_witness("count", count)
            .with_witness("mu_z", kappa)
            .with_witness("d", d),
    );
    Ok((gens, r))
}

/// Elements `w_1..w_k` of `target` with `base + R{w} = target`, aiming for
/// `k = want`: greedy over the candidates, then seeded random combinations.
fn explicit_generators(
    g: &FiniteAbelianGroup,
    base: &Lattice,
    target: &Lattice,
    cands: &[Vec<BigInt>],
    want: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<BigInt>> {
    let span = |ws: &[Vec<BigInt>]| {
        let mut l = base.clone();
        for w in ws {
            l.extend((0..g.order()).map(|h| shift(g, w, h)));
        }
        l
    };
    let mut greedy = Vec::new();
    let mut l = base.clone();
    for c in cands {
        if l == *target {
            break;
        }
        if l.contains(c) {
            continue;
        }
        l.extend((0..g.order()).map(|h| shift(g, c, h)));
        greedy.push(c.clone());
    }
    if greedy.len() <= want {
        return greedy;
    }
    for _ in 0..200 {
        let ws: Vec<Vec<BigInt>> = (0..want)
            .map(|_| {
                let mut acc = vec![BigInt::zero(); base.dim()];
                for c in cands {
                    for h in 0..g.order() {
                        let k: i64 = rng.gen_range(-2..=2);
                        if k != 0 {
                            let sh = shift(g, c, h);
                            for (a, x) in acc.iter_mut().zip(&sh) {
                                *a += x * k;
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        if span(&ws) == *target {
            return ws;
        }
    }
    greedy
}

fn shift(g: &FiniteAbelianGroup, v: &[BigInt], h: usize) -> Vec<BigInt> {
    act(g, &GroupRingElement::basis(g, h), v)
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if m.is_one() {
        return Ok(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::InvalidArgument(format!("{a} is not invertible mod {m}")));
    }
    Ok(e.x.mod_floor(m))
}
