use torsion28::descent::quartic::torsor_soluble_at;
use torsion28::descent::TwoTorsionForm;
use torsion28::family::Parameter;
use num_bigint::BigInt;
use std::time::Instant;

fn main() {
    let p = Parameter::new(1, 4).unwrap();
    let form = TwoTorsionForm::for_e(&p);
    let dual = form.dual();
    println!("form a={} b={}", form.a, form.b);
    println!("dual a={} b={}", dual.a, dual.b);
    let places = torsion28::local::bad_primes(&p);
    println!("places {:?}", places);
    for (a, b, tag) in [(&form.a, &form.b, "phihat"), (&dual.a, &dual.b, "phi")] {
        for &q in &places {
            let reps: Vec<i64> = if q == 2 { vec![1,-1,5,-5,2,-2,10,-10] } else { vec![1, 3, q as i64, 3*q as i64] };
            for r in reps {
                let t0 = Instant::now();
                let ok = torsor_soluble_at(a, b, &BigInt::from(r), q);
                let dt = t0.elapsed();
                if dt.as_millis() > 50 {
                    println!("{tag} q={q} d={r}: {ok} in {:?}", dt);
                }
            }
        }
    }
    println!("done");
}
