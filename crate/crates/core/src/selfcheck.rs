//! The self-verifying invariant suite.
//!
//! Every module's invariants run here at desk scale with a deterministic
//! seeded generator, so two runs produce identical reports. Lattice checks
//! use their stated ground-set bounds; the `order` parameter caps the
//! truncation order of the randomized series/distribution checks (bounds
//! with a pinned order, like the triple-agreement check at order 5, ignore
//! it).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dalg::DiagonalScalar;
use crate::json;
use crate::ncpart::{
    catalan, mobius_brute, mobius_full, noncrossing_partitions, NoncrossingPartition,
};
use crate::rational::Rat;
use crate::series::{mob_series, zeta_series, TruncatedSeries};
use crate::stardist::{
    check_freeness, classify_even, classify_r_diagonal, classify_semicircular, divide_free,
    joint_from_cumulant_fn, joint_from_free_pair, mixed_cumulant, product_moments_through_joint,
    sum_moments_through_joint, Classification, JointDistribution, StarWord,
};
use crate::transforms::{
    cumulants_to_moments, f_homomorphism, free_add_convolve, free_mult_convolve_all,
    moment_series, moments_to_cumulants, r_transform, s_transform, CumulantSequence, Distribution,
    MultMethod,
};

/// One invariant's verdict.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The whole suite's report.
#[derive(Clone, Debug)]
pub struct SelfcheckReport {
    pub order: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

type CheckResult = Result<String, String>;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xD1A6_0000 ^ seed)
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=4))
}

fn rand_nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let r = rand_rat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn rand_scalar(rng: &mut ChaCha8Rng, n: usize) -> DiagonalScalar {
    DiagonalScalar::new((0..n).map(|_| rand_rat(rng)).collect()).expect("n >= 1")
}

fn rand_invertible_scalar(rng: &mut ChaCha8Rng, n: usize) -> DiagonalScalar {
    DiagonalScalar::new((0..n).map(|_| rand_nonzero_rat(rng)).collect()).expect("n >= 1")
}

fn rand_distribution(rng: &mut ChaCha8Rng, n: usize, order: usize) -> Distribution {
    Distribution::new(n, order, (0..order).map(|_| rand_scalar(rng, n)).collect())
        .expect("well-formed")
}

fn rand_invertible_mean_distribution(
    rng: &mut ChaCha8Rng,
    n: usize,
    order: usize,
) -> Distribution {
    let mut moments = vec![rand_invertible_scalar(rng, n)];
    moments.extend((1..order).map(|_| rand_scalar(rng, n)));
    Distribution::new(n, order, moments).expect("well-formed")
}

fn rand_theta_series(rng: &mut ChaCha8Rng, n: usize, order: usize) -> TruncatedSeries {
    let mut series = TruncatedSeries::zero(n, order).expect("order >= 1");
    for degree in 1..=order {
        series
            .set_coeff(degree, rand_scalar(rng, n))
            .expect("in range");
    }
    series
}

fn rand_theta_inv_series(rng: &mut ChaCha8Rng, n: usize, order: usize) -> TruncatedSeries {
    let mut series = rand_theta_series(rng, n, order);
    series
        .set_coeff(1, rand_invertible_scalar(rng, n))
        .expect("in range");
    series
}

fn rand_series(rng: &mut ChaCha8Rng, n: usize, order: usize) -> TruncatedSeries {
    let mut series = rand_theta_series(rng, n, order);
    series
        .set_coeff(0, rand_scalar(rng, n))
        .expect("in range");
    series
}

fn fail(message: impl Into<String>) -> CheckResult {
    Err(message.into())
}

// ---------------------------------------------------------------------------
// ncpart

fn check_catalan_counts(_order: usize) -> CheckResult {
    for n in 1..=10usize {
        let count = noncrossing_partitions(n).map_err(|e| e.to_string())?.len();
        let expected = catalan(n);
        if num::BigInt::from(count) != expected {
            return fail(format!("|NC({})| = {} but C_{} = {}", n, count, n, expected));
        }
    }
    Ok("|NC(n)| matches the Catalan recurrence for n = 1..=10".to_string())
}

fn check_kreweras_identities(_order: usize) -> CheckResult {
    let mut seen = 0usize;
    for n in 1..=8usize {
        for pi in noncrossing_partitions(n).map_err(|e| e.to_string())?.iter() {
            let kr = pi.kreweras();
            if pi.num_blocks() + kr.num_blocks() != n + 1 {
                return fail(format!("|{}| + |Kr| != {} + 1", pi, n));
            }
            let mut a = pi.block_sizes();
            let mut b = kr.kreweras().block_sizes();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return fail(format!("Kr^2 changed the block sizes of {}", pi));
            }
            seen += 1;
        }
    }
    Ok(format!(
        "block-count and Kr^2 multiset identities on {} partitions, n <= 8",
        seen
    ))
}

fn check_mobius_closed_form(_order: usize) -> CheckResult {
    let mut seen = 0usize;
    for n in 1..=7usize {
        let top = NoncrossingPartition::full(n).map_err(|e| e.to_string())?;
        for pi in noncrossing_partitions(n).map_err(|e| e.to_string())?.iter() {
            let closed = mobius_full(pi);
            let brute = mobius_brute(pi, &top).map_err(|e| e.to_string())?;
            if closed != brute {
                return fail(format!(
                    "mu({}, 1_{}) = {} by the closed form, {} by the recursion",
                    pi, n, closed, brute
                ));
            }
            seen += 1;
        }
    }
    Ok(format!(
        "closed form equals the defining recursion on {} partitions, n <= 7",
        seen
    ))
}

fn check_zeta_mobius_inversion(_order: usize) -> CheckResult {
    for n in 1..=6usize {
        let all = noncrossing_partitions(n).map_err(|e| e.to_string())?;
        for pi in all.iter() {
            let mut total = Rat::zero();
            for sigma in all.iter() {
                if sigma.leq(pi).map_err(|e| e.to_string())? {
                    total = &total + mobius_brute(sigma, pi).map_err(|e| e.to_string())?.value();
                }
            }
            let expected = if pi.is_singletons() {
                Rat::one()
            } else {
                Rat::zero()
            };
            if total != expected {
                return fail(format!(
                    "sum of mu(sigma, {}) over sigma <= pi is {}, expected {}",
                    pi, total, expected
                ));
            }
        }
    }
    Ok("column sums of the Möbius function collapse to the delta at the bottom, n <= 6".to_string())
}

fn check_leq_partial_order(_order: usize) -> CheckResult {
    for n in 1..=6usize {
        let all = noncrossing_partitions(n).map_err(|e| e.to_string())?;
        for p in all.iter() {
            if !p.leq(p).map_err(|e| e.to_string())? {
                return fail(format!("{} not <= itself", p));
            }
        }
        for p in all.iter() {
            for q in all.iter() {
                let pq = p.leq(q).map_err(|e| e.to_string())?;
                let qp = q.leq(p).map_err(|e| e.to_string())?;
                if pq && qp && p != q {
                    return fail(format!("{} and {} violate antisymmetry", p, q));
                }
                if !pq {
                    continue;
                }
                for r in all.iter() {
                    if q.leq(r).map_err(|e| e.to_string())?
                        && !p.leq(r).map_err(|e| e.to_string())?
                    {
                        return fail(format!("transitivity fails on {}, {}, {}", p, q, r));
                    }
                }
            }
        }
    }
    Ok("refinement is reflexive, antisymmetric and transitive, n <= 6".to_string())
}

// ---------------------------------------------------------------------------
// dalg

fn check_ring_axioms(_order: usize) -> CheckResult {
    let mut rng = rng_for(6);
    for case in 0..1000usize {
        let n = rng.gen_range(1..=8);
        let a = rand_scalar(&mut rng, n);
        let b = rand_scalar(&mut rng, n);
        let c = rand_scalar(&mut rng, n);
        let err = |law: &str| fail(format!("case {}: {} fails on N={}", case, law, n));
        let assoc_add = a.add(&b).unwrap().add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap();
        if !assoc_add {
            return err("additive associativity");
        }
        if a.add(&b).unwrap() != b.add(&a).unwrap() {
            return err("additive commutativity");
        }
        let assoc_mul = a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap();
        if !assoc_mul {
            return err("multiplicative associativity");
        }
        if a.mul(&b).unwrap() != b.mul(&a).unwrap() {
            return err("multiplicative commutativity");
        }
        let distributes = a.mul(&b.add(&c).unwrap()).unwrap()
            == a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        if !distributes {
            return err("distributivity");
        }
        if a.add(&DiagonalScalar::zero(n)).unwrap() != a {
            return err("additive identity");
        }
        if a.mul(&DiagonalScalar::one(n)).unwrap() != a {
            return err("multiplicative identity");
        }
        if !a.add(&a.neg()).unwrap().is_zero() {
            return err("additive inverse");
        }
    }
    Ok("commutative unital ring axioms on 1000 random tuples, N <= 8".to_string())
}

fn check_inversion(_order: usize) -> CheckResult {
    let mut rng = rng_for(7);
    for case in 0..300usize {
        let n = rng.gen_range(1..=6);
        let a = rand_scalar(&mut rng, n);
        match a.invert() {
            Ok(inv) => {
                if inv.invert().unwrap() != a {
                    return fail(format!("case {}: inversion is not an involution", case));
                }
                if a.mul(&inv).unwrap() != DiagonalScalar::one(n) {
                    return fail(format!("case {}: a * a^-1 != 1", case));
                }
                if !a.is_invertible() {
                    return fail(format!("case {}: invert succeeded off the unit set", case));
                }
            }
            Err(_) => {
                if a.is_invertible() {
                    return fail(format!("case {}: invert failed on the unit set", case));
                }
            }
        }
    }
    Ok("inversion is an involution and errors exactly off the unit set (300 cases)".to_string())
}

// ---------------------------------------------------------------------------
// series

fn check_series_ring_laws(order: usize) -> CheckResult {
    let mut rng = rng_for(8);
    let cap = order.clamp(1, 8);
    for case in 0..25usize {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=cap);
        let f = rand_series(&mut rng, n, m);
        let g = rand_series(&mut rng, n, m);
        let h = rand_series(&mut rng, n, m);
        let err = |law: &str| fail(format!("case {}: {} fails at N={}, M={}", case, law, n, m));
        if f.add(&g).unwrap() != g.add(&f).unwrap() {
            return err("additive commutativity");
        }
        if f.add(&g).unwrap().add(&h).unwrap() != f.add(&g.add(&h).unwrap()).unwrap() {
            return err("additive associativity");
        }
        if f.mul(&g).unwrap() != g.mul(&f).unwrap() {
            return err("multiplicative commutativity");
        }
        if f.mul(&g).unwrap().mul(&h).unwrap() != f.mul(&g.mul(&h).unwrap()).unwrap() {
            return err("multiplicative associativity");
        }
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        if lhs != rhs {
            return err("distributivity");
        }
        let one = TruncatedSeries::constant(&DiagonalScalar::one(n), m).unwrap();
        if f.mul(&one).unwrap() != f {
            return err("multiplicative identity");
        }
    }
    Ok(format!(
        "series ring laws on 25 random cases, N <= 4, M <= {}",
        cap
    ))
}

fn check_composition_associativity(order: usize) -> CheckResult {
    let mut rng = rng_for(9);
    let cap = order.clamp(1, 6);
    for case in 0..15usize {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=cap);
        let f = rand_series(&mut rng, n, m);
        let g = rand_theta_series(&mut rng, n, m);
        let h = rand_theta_series(&mut rng, n, m);
        let lhs = f.compose(&g).unwrap().compose(&h).unwrap();
        let rhs = f.compose(&g.compose(&h).unwrap()).unwrap();
        if lhs != rhs {
            return fail(format!("case {}: (f o g) o h != f o (g o h) at M={}", case, m));
        }
    }
    Ok(format!(
        "composition associativity on 15 random cases, M <= {}",
        cap
    ))
}

fn check_comp_inverse_roundtrip(order: usize) -> CheckResult {
    let mut rng = rng_for(10);
    let cap = order.clamp(1, 6);
    for case in 0..15usize {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=cap);
        let g = rand_theta_inv_series(&mut rng, n, m);
        let inverse = g.comp_inverse().map_err(|e| e.to_string())?;
        let identity = TruncatedSeries::identity(n, m).unwrap();
        if g.compose(&inverse).unwrap() != identity || inverse.compose(&g).unwrap() != identity {
            return fail(format!("case {}: compositional inverse fails at M={}", case, m));
        }
    }
    Ok(format!(
        "compositional inverse round trip on 15 random cases, M <= {}",
        cap
    ))
}

fn check_boxed_group_laws(_order: usize) -> CheckResult {
    let mut rng = rng_for(11);
    let m = 5usize;
    let identity2 = TruncatedSeries::identity(2, m).unwrap();
    for case in 0..10usize {
        let g1 = rand_theta_inv_series(&mut rng, 2, m);
        let g2 = rand_theta_inv_series(&mut rng, 2, m);
        let g3 = rand_theta_inv_series(&mut rng, 2, m);
        let lhs = g1
            .boxed_convolve(&g2)
            .unwrap()
            .boxed_convolve(&g3)
            .unwrap();
        let rhs = g1
            .boxed_convolve(&g2.boxed_convolve(&g3).unwrap())
            .unwrap();
        if lhs != rhs {
            return fail(format!("case {}: boxed convolution is not associative", case));
        }
        if g1.boxed_convolve(&identity2).unwrap() != g1 {
            return fail(format!("case {}: identity series fails on the right", case));
        }
        if identity2.boxed_convolve(&g1).unwrap() != g1 {
            return fail(format!("case {}: identity series fails on the left", case));
        }
        let inverse = g1.boxed_inverse().map_err(|e| e.to_string())?;
        if g1.boxed_convolve(&inverse).unwrap() != identity2
            || inverse.boxed_convolve(&g1).unwrap() != identity2
        {
            return fail(format!("case {}: boxed inverse does not round trip", case));
        }
    }
    Ok("boxed-convolution group laws on 10 random triples at order 5".to_string())
}

fn check_zeta_mob_inverse(_order: usize) -> CheckResult {
    let m = 6usize;
    for n in 1..=3usize {
        let zeta = zeta_series(n, m).unwrap();
        let mob = mob_series(n, m).unwrap();
        let identity = TruncatedSeries::identity(n, m).unwrap();
        if zeta.boxed_convolve(&mob).unwrap() != identity {
            return fail(format!("Zeta boxed Mob != z at N={}", n));
        }
        if mob.boxed_convolve(&zeta).unwrap() != identity {
            return fail(format!("Mob boxed Zeta != z at N={}", n));
        }
    }
    Ok("Zeta and Mob are mutual boxed inverses up to order 6".to_string())
}

// ---------------------------------------------------------------------------
// transforms

fn check_moment_cumulant_roundtrip(order: usize) -> CheckResult {
    let mut rng = rng_for(13);
    let cap = order.clamp(1, 8);
    for case in 0..40usize {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=cap);
        let d = rand_distribution(&mut rng, n, m);
        let k = moments_to_cumulants(&d).map_err(|e| e.to_string())?;
        let back = cumulants_to_moments(&k).map_err(|e| e.to_string())?;
        if back != d {
            return fail(format!("case {}: roundtrip broke at N={}, M={}", case, n, m));
        }
    }
    Ok(format!(
        "moment-cumulant roundtrip exact on 40 random distributions, N <= 4, M <= {}",
        cap
    ))
}

fn check_series_route_identities(order: usize) -> CheckResult {
    let mut rng = rng_for(14);
    let cap = order.clamp(1, 6);
    for case in 0..15usize {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=cap);
        let d = rand_distribution(&mut rng, n, m);
        let moments = moment_series(&d).map_err(|e| e.to_string())?;
        let r = r_transform(&d).map_err(|e| e.to_string())?;
        let zeta = zeta_series(n, m).unwrap();
        let mob = mob_series(n, m).unwrap();
        if r.boxed_convolve(&zeta).unwrap() != moments {
            return fail(format!("case {}: M != R boxed Zeta at M={}", case, m));
        }
        if moments.boxed_convolve(&mob).unwrap() != r {
            return fail(format!("case {}: R != M boxed Mob at M={}", case, m));
        }
    }
    Ok(format!(
        "moment/R series identities through Zeta and Mob, M <= {}",
        cap
    ))
}

fn check_additivity(order: usize) -> CheckResult {
    let mut rng = rng_for(15);
    let cap = order.clamp(1, 5);
    for case in 0..8usize {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=cap);
        let x = rand_distribution(&mut rng, n, m);
        let y = rand_distribution(&mut rng, n, m);
        let sum = free_add_convolve(&x, &y).map_err(|e| e.to_string())?;
        let kx = moments_to_cumulants(&x).unwrap();
        let ky = moments_to_cumulants(&y).unwrap();
        let ks = moments_to_cumulants(&sum).unwrap();
        for degree in 1..=m {
            let expected = kx.cumulant(degree).add(ky.cumulant(degree)).unwrap();
            if ks.cumulant(degree) != &expected {
                return fail(format!(
                    "case {}: cumulants of the sum are not the sums at degree {}",
                    case, degree
                ));
            }
        }
        let joint = joint_from_free_pair(&x, &y, m).map_err(|e| e.to_string())?;
        let through_joint =
            sum_moments_through_joint(&joint, (0, 1), m).map_err(|e| e.to_string())?;
        if through_joint != sum {
            return fail(format!(
                "case {}: word expansion of (x+y)^n disagrees with cumulant additivity",
                case
            ));
        }
    }
    Ok(format!(
        "additive convolution matches the joint-table expansion, M <= {}",
        cap
    ))
}

fn check_mult_triple_agreement(_order: usize) -> CheckResult {
    let mut rng = rng_for(16);
    let m = 5usize;
    for case in 0..50usize {
        let n = rng.gen_range(1..=3);
        let x = rand_invertible_mean_distribution(&mut rng, n, m);
        let y = rand_invertible_mean_distribution(&mut rng, n, m);
        let report = free_mult_convolve_all(&x, &y).map_err(|e| e.to_string())?;
        if !report.agreement {
            return fail(format!(
                "case {}: multiplicative routes disagree at N={}",
                case, n
            ));
        }
    }
    Ok("three multiplicative routes agree on 50 random invertible-mean pairs at order 5".to_string())
}

fn check_s_constant_term(order: usize) -> CheckResult {
    let mut rng = rng_for(17);
    let cap = order.clamp(2, 6);
    for case in 0..20usize {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(2..=cap);
        let d = rand_invertible_mean_distribution(&mut rng, n, m);
        let s = s_transform(&d).map_err(|e| e.to_string())?;
        if s.coeff(0) != d.moment(1).invert().unwrap() {
            return fail(format!("case {}: S(0) != 1/E(x)", case));
        }
    }
    Ok("S-transform constant term is the inverse mean on 20 random cases".to_string())
}

fn check_f_homomorphism(_order: usize) -> CheckResult {
    let mut rng = rng_for(18);
    let m = 5usize;
    for case in 0..30usize {
        let n = rng.gen_range(1..=2);
        let g1 = rand_theta_inv_series(&mut rng, n, m);
        let g2 = rand_theta_inv_series(&mut rng, n, m);
        let lhs = f_homomorphism(&g1.boxed_convolve(&g2).unwrap()).map_err(|e| e.to_string())?;
        let rhs = f_homomorphism(&g1)
            .map_err(|e| e.to_string())?
            .mul(&f_homomorphism(&g2).map_err(|e| e.to_string())?)
            .unwrap();
        if lhs != rhs {
            return fail(format!("case {}: F(g1 boxed g2) != F(g1) F(g2)", case));
        }
    }
    Ok("F turns boxed convolution into series multiplication on 30 random pairs at order 5".to_string())
}

fn check_componentwise_pipelines(_order: usize) -> CheckResult {
    let mut rng = rng_for(19);
    let m = 5usize;
    for case in 0..5usize {
        let x = rand_invertible_mean_distribution(&mut rng, 3, m);
        let y = rand_invertible_mean_distribution(&mut rng, 3, m);
        let x_parts = x.split();
        let y_parts = y.split();

        let whole_k = moments_to_cumulants(&x).unwrap();
        let part_k: Vec<CumulantSequence> = x_parts
            .iter()
            .map(|p| moments_to_cumulants(p).unwrap())
            .collect();
        if CumulantSequence::zip(&part_k).unwrap() != whole_k {
            return fail(format!("case {}: moments_to_cumulants does not split", case));
        }

        let whole_sum = free_add_convolve(&x, &y).unwrap();
        let part_sum: Vec<Distribution> = x_parts
            .iter()
            .zip(&y_parts)
            .map(|(a, b)| free_add_convolve(a, b).unwrap())
            .collect();
        let zipped_sum = Distribution::zip(&part_sum).unwrap();
        if zipped_sum != whole_sum {
            return fail(format!("case {}: free_add_convolve does not split", case));
        }
        let whole_json = json::to_json_string(&json::distribution_to_doc(&whole_sum));
        let zipped_json = json::to_json_string(&json::distribution_to_doc(&zipped_sum));
        if whole_json != zipped_json {
            return fail(format!("case {}: emitted JSON differs for the sum", case));
        }

        for method in MultMethod::ALL {
            let whole = crate::transforms::free_mult_convolve(&x, &y, method).unwrap();
            let parts: Vec<Distribution> = x_parts
                .iter()
                .zip(&y_parts)
                .map(|(a, b)| crate::transforms::free_mult_convolve(a, b, method).unwrap())
                .collect();
            let zipped = Distribution::zip(&parts).unwrap();
            if zipped != whole {
                return fail(format!(
                    "case {}: {} route does not split",
                    case,
                    method.name()
                ));
            }
            let whole_json = json::to_json_string(&json::distribution_to_doc(&whole));
            let zipped_json = json::to_json_string(&json::distribution_to_doc(&zipped));
            if whole_json != zipped_json {
                return fail(format!(
                    "case {}: emitted JSON differs on the {} route",
                    case,
                    method.name()
                ));
            }
        }

        let whole_s = s_transform(&x).unwrap();
        let part_s: Vec<TruncatedSeries> =
            x_parts.iter().map(|p| s_transform(p).unwrap()).collect();
        if TruncatedSeries::zip(&part_s).unwrap() != whole_s {
            return fail(format!("case {}: s_transform does not split", case));
        }

        let whole_div = divide_free(&x, 3).unwrap();
        let part_div: Vec<Distribution> =
            x_parts.iter().map(|p| divide_free(p, 3).unwrap()).collect();
        if Distribution::zip(&part_div).unwrap() != whole_div {
            return fail(format!("case {}: divide_free does not split", case));
        }
    }
    Ok("N=3 pipelines equal zipped 1-component runs, byte-exact on emitted JSON (5 cases)".to_string())
}

// ---------------------------------------------------------------------------
// stardist

fn check_marginal_consistency(order: usize) -> CheckResult {
    let mut rng = rng_for(20);
    let cap = order.clamp(1, 6);
    for case in 0..5usize {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=cap);
        let x = rand_distribution(&mut rng, n, m);
        let y = rand_distribution(&mut rng, n, m);
        let joint = joint_from_free_pair(&x, &y, m).map_err(|e| e.to_string())?;
        if joint.marginal(0).map_err(|e| e.to_string())? != x {
            return fail(format!("case {}: x marginal drifted", case));
        }
        if joint.marginal(1).map_err(|e| e.to_string())? != y {
            return fail(format!("case {}: y marginal drifted", case));
        }
    }
    Ok(format!(
        "free-pair joints reproduce their marginals exactly, M <= {}",
        cap
    ))
}

fn check_freeness_detection(order: usize) -> CheckResult {
    let mut rng = rng_for(21);
    let m = order.clamp(2, 4);
    for case in 0..3usize {
        let x = rand_distribution(&mut rng, 1, m);
        let y = rand_distribution(&mut rng, 1, m);
        let joint = joint_from_free_pair(&x, &y, m).map_err(|e| e.to_string())?;
        let report = check_freeness(&joint, (0, 1), m).map_err(|e| e.to_string())?;
        if !report.free {
            return fail(format!("case {}: a constructed free pair failed the check", case));
        }
        // perturb every mixed cumulant, one at a time
        let kx = moments_to_cumulants(&x).unwrap();
        let ky = moments_to_cumulants(&y).unwrap();
        let mixed_words: Vec<StarWord> = (2..=m)
            .flat_map(|len| crate::stardist::all_words(2, false, len))
            .filter(|w| w.single_var().is_none())
            .collect();
        for target in &mixed_words {
            let delta = DiagonalScalar::from_ints(&[3]);
            let perturbed = joint_from_cumulant_fn(1, m, 2, false, |word| {
                if word == target {
                    return Ok(delta.clone());
                }
                Ok(match word.single_var() {
                    Some(0) => kx.cumulant(word.len()).clone(),
                    Some(1) => ky.cumulant(word.len()).clone(),
                    _ => DiagonalScalar::zero(1),
                })
            })
            .map_err(|e| e.to_string())?;
            let report = check_freeness(&perturbed, (0, 1), m).map_err(|e| e.to_string())?;
            match report.witness {
                Some((word, _)) if &word == target && !report.free => {}
                _ => {
                    return fail(format!(
                        "case {}: perturbation at {:?} was not pinned",
                        case,
                        target.to_string()
                    ))
                }
            }
        }
    }
    Ok(format!(
        "freeness holds by construction and every single perturbation is pinned, M = {}",
        m
    ))
}

fn check_product_through_joint(order: usize) -> CheckResult {
    let mut rng = rng_for(22);
    let cap = order.clamp(1, 4);
    for case in 0..4usize {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=cap);
        let x = rand_distribution(&mut rng, n, 2 * m);
        let y = rand_distribution(&mut rng, n, 2 * m);
        let joint = joint_from_free_pair(&x, &y, 2 * m).map_err(|e| e.to_string())?;
        let through_joint =
            product_moments_through_joint(&joint, (0, 1), m).map_err(|e| e.to_string())?;
        let direct = crate::transforms::free_mult_convolve(
            &x.truncate(m).unwrap(),
            &y.truncate(m).unwrap(),
            MultMethod::ProductFormula,
        )
        .map_err(|e| e.to_string())?;
        if through_joint != direct {
            return fail(format!(
                "case {}: joint-table product moments disagree at M={}",
                case, m
            ));
        }
    }
    Ok(format!(
        "product moments through the joint table match the convolution, M <= {}",
        cap
    ))
}

fn check_divide_recombine(order: usize) -> CheckResult {
    let mut rng = rng_for(23);
    let cap = order.clamp(1, 6);
    for case in 0..5usize {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=cap);
        let d = rand_distribution(&mut rng, n, m);
        for parts in [1usize, 2, 3, 5] {
            let piece = divide_free(&d, parts).map_err(|e| e.to_string())?;
            let mut acc = piece.clone();
            for _ in 1..parts {
                acc = free_add_convolve(&acc, &piece).unwrap();
            }
            if acc != d {
                return fail(format!(
                    "case {}: {} pieces do not recombine at M={}",
                    case, parts, m
                ));
            }
        }
    }
    Ok(format!(
        "divide_free recombines exactly for 1, 2, 3 and 5 parts, M <= {}",
        cap
    ))
}

fn check_classifier_componentwise(_order: usize) -> CheckResult {
    let m = 6usize;
    let semi = Distribution::semicircular(&DiagonalScalar::one(1), m).unwrap();
    let fp = Distribution::free_poisson(&DiagonalScalar::one(1), m).unwrap();
    let zero = Distribution::zero(1, m).unwrap();

    let tuple = Distribution::zip(&[semi.clone(), zero.clone(), semi.clone()]).unwrap();
    let whole = classify_semicircular(&tuple, m).map_err(|e| e.to_string())?;
    if whole.classification != Classification::Holds {
        return fail("semicircular tuple with a zero slot should hold".to_string());
    }
    let bad = Distribution::zip(&[semi.clone(), fp.clone()]).unwrap();
    if classify_semicircular(&bad, m)
        .map_err(|e| e.to_string())?
        .classification
        != Classification::Fails
    {
        return fail("tuple with a free Poisson slot should fail".to_string());
    }
    if classify_semicircular(&fp, m)
        .map_err(|e| e.to_string())?
        .classification
        != Classification::Fails
    {
        return fail("free Poisson alone should fail".to_string());
    }

    if classify_even(&Distribution::zip(&[semi.clone(), zero.clone()]).unwrap(), m)
        .map_err(|e| e.to_string())?
        .classification
        != Classification::Holds
    {
        return fail("even tuple with a zero slot should hold".to_string());
    }

    // R-diagonality: a Haar-style component zipped with a zero component
    let haar = joint_from_cumulant_fn(1, m, 1, true, |word| {
        if word.is_star_alternating() {
            let half = word.len() / 2;
            let mut value = Rat::from_bigint(catalan(half - 1));
            if half % 2 == 0 {
                value = -value;
            }
            Ok(DiagonalScalar::new(vec![value]).unwrap())
        } else {
            Ok(DiagonalScalar::zero(1))
        }
    })
    .map_err(|e| e.to_string())?;
    let zero_star = joint_from_cumulant_fn(1, m, 1, true, |_| Ok(DiagonalScalar::zero(1)))
        .map_err(|e| e.to_string())?;
    let pair = JointDistribution::zip(&[haar.clone(), zero_star]).map_err(|e| e.to_string())?;
    if classify_r_diagonal(&pair, m)
        .map_err(|e| e.to_string())?
        .classification
        != Classification::Holds
    {
        return fail("R-diagonal tuple with a zero slot should hold".to_string());
    }
    if classify_r_diagonal(&haar, m)
        .map_err(|e| e.to_string())?
        .classification
        != Classification::Holds
    {
        return fail("Haar-style component alone should hold".to_string());
    }
    Ok("classifiers agree with their per-component verdicts".to_string())
}

fn check_single_var_cumulants(order: usize) -> CheckResult {
    let mut rng = rng_for(24);
    let cap = order.clamp(1, 5);
    for case in 0..5usize {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=cap);
        let x = rand_distribution(&mut rng, n, m);
        let y = rand_distribution(&mut rng, n, m);
        let joint = joint_from_free_pair(&x, &y, m).map_err(|e| e.to_string())?;
        let kx = moments_to_cumulants(&x).unwrap();
        for degree in 1..=m {
            let word = StarWord::plain(&vec![0; degree]).unwrap();
            let from_joint = mixed_cumulant(&joint, &word).map_err(|e| e.to_string())?;
            if &from_joint != kx.cumulant(degree) {
                return fail(format!(
                    "case {}: single-variable word cumulant drifts at degree {}",
                    case, degree
                ));
            }
        }
    }
    Ok(format!(
        "single-variable word cumulants match the transform route, M <= {}",
        cap
    ))
}

// ---------------------------------------------------------------------------
// json

fn check_json_closure(order: usize) -> CheckResult {
    let mut rng = rng_for(25);
    let cap = order.clamp(1, 6);
    for case in 0..10usize {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=cap);
        let d = rand_distribution(&mut rng, n, m);
        let emitted = json::to_json_string(&json::distribution_to_doc(&d));
        let reparsed = json::parse_distribution(&emitted).map_err(|e| e.to_string())?;
        if reparsed != d {
            return fail(format!("case {}: distribution closure broke", case));
        }
        if json::to_json_string(&json::distribution_to_doc(&reparsed)) != emitted {
            return fail(format!("case {}: distribution emission is unstable", case));
        }

        let s = rand_series(&mut rng, n, m);
        let emitted = json::to_json_string(&json::series_to_doc(&s));
        let reparsed = json::parse_series(&emitted).map_err(|e| e.to_string())?;
        if reparsed != s {
            return fail(format!("case {}: series closure broke", case));
        }

        let x = rand_distribution(&mut rng, n, m.min(3));
        let y = rand_distribution(&mut rng, n, m.min(3));
        let joint = joint_from_free_pair(&x, &y, m.min(3)).map_err(|e| e.to_string())?;
        let names = vec!["x".to_string(), "y".to_string()];
        let emitted = json::to_json_string(&json::joint_to_doc(&joint, &names));
        let reparsed = json::parse_joint(&emitted).map_err(|e| e.to_string())?;
        if reparsed.joint != joint {
            return fail(format!("case {}: joint closure broke", case));
        }
    }
    Ok("emitted documents re-parse to identical values and stable bytes (10 cases)".to_string())
}

type CheckFn = fn(usize) -> CheckResult;

/// Runs the whole suite. Deterministic for a fixed `order`.
pub fn run_selfcheck(order: usize) -> SelfcheckReport {
    let checks: Vec<(&'static str, CheckFn)> = vec![
        ("ncpart.catalan_counts", check_catalan_counts),
        ("ncpart.kreweras_identities", check_kreweras_identities),
        ("ncpart.mobius_closed_form", check_mobius_closed_form),
        ("ncpart.zeta_mobius_inversion", check_zeta_mobius_inversion),
        ("ncpart.leq_partial_order", check_leq_partial_order),
        ("dalg.ring_axioms", check_ring_axioms),
        ("dalg.inversion", check_inversion),
        ("series.ring_laws", check_series_ring_laws),
        (
            "series.composition_associativity",
            check_composition_associativity,
        ),
        ("series.comp_inverse_roundtrip", check_comp_inverse_roundtrip),
        ("series.boxed_group_laws", check_boxed_group_laws),
        ("series.zeta_mob_inverse", check_zeta_mob_inverse),
        (
            "transforms.moment_cumulant_roundtrip",
            check_moment_cumulant_roundtrip,
        ),
        (
            "transforms.series_route_identities",
            check_series_route_identities,
        ),
        ("transforms.additivity_sum_through_joint", check_additivity),
        (
            "transforms.mult_triple_agreement",
            check_mult_triple_agreement,
        ),
        ("transforms.s_constant_term", check_s_constant_term),
        ("transforms.f_homomorphism", check_f_homomorphism),
        (
            "transforms.componentwise_pipelines",
            check_componentwise_pipelines,
        ),
        ("stardist.marginal_consistency", check_marginal_consistency),
        ("stardist.freeness_detection", check_freeness_detection),
        ("stardist.single_var_cumulants", check_single_var_cumulants),
        (
            "stardist.product_through_joint",
            check_product_through_joint,
        ),
        ("stardist.divide_recombine", check_divide_recombine),
        (
            "stardist.classifier_componentwise",
            check_classifier_componentwise,
        ),
        ("json.roundtrip_closure", check_json_closure),
    ];
    let mut outcomes = Vec::with_capacity(checks.len());
    for (name, check) in checks {
        let outcome = match check(order) {
            Ok(detail) => CheckOutcome {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckOutcome {
                name,
                passed: false,
                detail,
            },
        };
        outcomes.push(outcome);
    }
    SelfcheckReport {
        order,
        checks: outcomes,
    }
}
