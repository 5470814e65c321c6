use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::library::or_gate;
use crate::sim::check_subset;

/// Single-output circuit whose correlation with parity on `|T|` inputs equals
/// the felinity of the state `c|0^m>` restricted to `targets`.
///
/// Layout: inputs at `0..n`, the prepared register at `n..n+m` and the
/// output at `n+m`. Input `i` is paired with `targets[i]`.
pub fn felinity_to_parity_circuit(c: &Circuit, targets: &[usize]) -> Result<Circuit> {
    if c.n_inputs != 0 {
        return Err(Error::Precondition(alloc::format!(
            "expected a preparation circuit, got {} inputs",
            c.n_inputs
        )));
    }
    let m = c.n_qubits();
    check_subset(targets, m)?;
    if targets.is_empty() {
        return Err(Error::Precondition(alloc::string::String::from(
            "empty target set",
        )));
    }
    let n = targets.len();
    crate::check_cap(n + m + 1)?;
    let a = n + m;
    let map: Vec<usize> = (0..m).map(|q| n + q).collect();
    let prep = c.embed(&map, n, m + 1)?;

    let mut out = Circuit::new(n, m + 1).with_output(a);
    out.append(&prep)?;
    out.push_layer(
        targets
            .iter()
            .enumerate()
            .map(|(i, &t)| Gate::cz(i, n + t))
            .collect(),
    );
    out.append(&prep.dagger())?;
    for g in or_gate(&map, a)? {
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{correlation, extract_fc, parity_fn, wht};
    use crate::random::random_prep_circuit;
    use crate::rng::SplitMix64;
    use crate::sim::run;
    use crate::states::felinity;

    fn check(c: &Circuit, targets: &[usize]) -> (f64, f64) {
        let fc = extract_fc(&felinity_to_parity_circuit(c, targets).unwrap()).unwrap();
        let corr = correlation(&fc, &parity_fn(targets.len())).unwrap();
        let top = wht(&fc).coeff((1 << targets.len()) - 1);
        assert!((corr - top).abs() < 1e-12);
        let rho = run(c, 0).unwrap().partial_trace(targets).unwrap();
        (corr, felinity(&rho).unwrap())
    }

    #[test]
    fn cat_and_zero_examples() {
        let mut cat = Circuit::new(0, 2);
        cat.push(Gate::h(0));
        cat.push(Gate::cnot(0, 1));
        let (corr, fel) = check(&cat, &[0, 1]);
        assert!((corr - 1.0).abs() < 1e-9 && (fel - 1.0).abs() < 1e-12);
        let (corr, _) = check(&Circuit::new(0, 2), &[0, 1]);
        assert!(corr.abs() < 1e-9);
    }

    #[test]
    fn random_preparations() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let c = random_prep_circuit(&mut rng, 3, 3);
            let targets = rng.choose_distinct(3, 2);
            let (corr, fel) = check(&c, &targets);
            assert!((corr - fel).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(felinity_to_parity_circuit(&Circuit::new(1, 1), &[0]).is_err());
        assert!(felinity_to_parity_circuit(&Circuit::new(0, 2), &[2]).is_err());
        assert!(felinity_to_parity_circuit(&Circuit::new(0, 2), &[]).is_err());
    }
}
