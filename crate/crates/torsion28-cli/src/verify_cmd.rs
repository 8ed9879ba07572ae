//! The invariant suites behind `t28 verify`: each check prints one line
//! and the first failure aborts with a witness.

use anyhow::{bail, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use torsion28::descent::{archimedean_cassels_factor, family_descents, TwoTorsionForm};
use torsion28::family::{
    conductor_bound_holds, count_exact, enumerate_parameters, height_sandwich_holds,
    model_minimal_integral, model_minimal_short, model_product, short_model_is_minimal,
    torsion_point8_product,
};
use torsion28::local::tate::tate;
use torsion28::local::{bad_primes, ratio_factor, reduction_type, tamagawa_cp, tamagawa_ratio};
use torsion28::stats::{local_density, verify_h_functions};

pub struct VerifyBounds {
    /// Height bound for the per-curve model and height invariants.
    pub curve_height: u64,
    /// Height bound for the descent / Cassels / Tate cross-checks.
    pub descent_height: u64,
    /// Prime-power bound for the h-function oracles.
    pub oracle_bound: u64,
    /// Height bound for the divisor-density sample.
    pub density_height: u64,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds {
            curve_height: 49,
            descent_height: 49,
            oracle_bound: 2000,
            density_height: 199,
        }
    }
}

pub fn run_verify(bounds: &VerifyBounds) -> Result<()> {
    let params = enumerate_parameters(bounds.curve_height);
    if params.len() as u64 != count_exact(bounds.curve_height) {
        bail!("enumeration count mismatch at height {}", bounds.curve_height);
    }
    println!("ok: enumeration matches the exact count ({} curves)", params.len());

    for p in &params {
        if !height_sandwich_holds(p) {
            bail!("height comparison fails at t = {p}");
        }
        if !conductor_bound_holds(p) {
            bail!("conductor bound fails at t = {p}");
        }
        let (a, b) = model_minimal_short(p);
        if !short_model_is_minimal(&a, &b) {
            bail!("short model not minimal at t = {p}");
        }
        let n = torsion28::family::conductor(p);
        if !(model_product(p).discriminant() % &n).is_zero() {
            bail!("conductor does not divide the discriminant at t = {p}");
        }
    }
    println!(
        "ok: height sandwich, conductor bound, minimality ({} curves)",
        params.len()
    );

    for p in params.iter().filter(|p| p.height() < 50) {
        let m = model_product(p);
        let pt = torsion_point8_product(p);
        if m.mul(8, &pt).unwrap() != torsion28::family::RationalPoint::Infinity
            || m.mul(4, &pt).unwrap() == torsion28::family::RationalPoint::Infinity
        {
            bail!("marked point does not have order 8 at t = {p}");
        }
    }
    println!("ok: order-8 torsion point (heights below 50)");

    let descent_params = enumerate_parameters(bounds.descent_height);
    for p in &descent_params {
        let integral = model_minimal_integral(p);
        let (_, ep_model, _) = torsion28::family::isogeny_chain(p);
        for q in bad_primes(p) {
            let inv = reduction_type(p, q)?;
            let generic = tate(&integral, q);
            if generic.c != tamagawa_cp(p, q) || generic.c != inv.c_p {
                bail!(
                    "Tamagawa number mismatch at t = {p}, q = {q}: case formula {} vs Tate {}",
                    tamagawa_cp(p, q),
                    generic.c
                );
            }
            if generic.v_delta != inv.v_delta {
                bail!("discriminant valuation mismatch at t = {p}, q = {q}");
            }
            if q != 2 {
                let cp_ep = tate(&ep_model, q).c;
                let expect = ratio_factor(p, q);
                let got = num_rational::Rational64::new(cp_ep as i64, generic.c as i64);
                if got != expect {
                    bail!(
                        "local ratio factor mismatch at t = {p}, q = {q}: c(E')/c(E) = {got} vs {expect}"
                    );
                }
            }
        }
    }
    println!(
        "ok: Tamagawa numbers and local ratio factors against Tate's algorithm ({} curves)",
        descent_params.len()
    );

    for p in &descent_params {
        let d = family_descents(p);
        let lhs = BigRational::new(
            BigInt::from(d.pair1.sel_phi.size()),
            BigInt::from(d.pair1.sel_phi_hat.size()),
        );
        let arch = archimedean_cassels_factor(&TwoTorsionForm::for_e(p));
        let rhs = tamagawa_ratio(p).ratio
            * BigRational::new(BigInt::from(*arch.numer()), BigInt::from(*arch.denom()));
        if lhs != rhs {
            bail!("Cassels identity fails at t = {p}: {lhs} vs {rhs}");
        }
    }
    println!(
        "ok: Cassels identity |Sel_phi|/|Sel_phihat| = product of local factors ({} curves)",
        descent_params.len()
    );

    let checked = verify_h_functions(bounds.oracle_bound)
        .map_err(|e| anyhow::anyhow!(e.to_string()))?;
    println!("ok: h-function oracles match the closed forms ({checked} prime powers)");

    let sample = enumerate_parameters(bounds.density_height);
    for q in [3u64, 5, 7, 11, 13] {
        let d = local_density(q, &sample).map_err(|e| anyhow::anyhow!(e.to_string()))?;
        if !d.within_standard_errors(3.0) {
            bail!(
                "divisor density at q = {q} outside three standard errors: {:?} vs {:?}, {:?} vs {:?}",
                d.h1_empirical,
                d.h1_predicted,
                d.h2_empirical,
                d.h2_predicted
            );
        }
    }
    println!(
        "ok: divisor densities within three standard errors ({} curves)",
        sample.len()
    );
    Ok(())
}
