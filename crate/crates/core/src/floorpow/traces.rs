//! Exact power-sum sequences of polynomial roots: Newton's identities for
//! the first k values, then the companion recurrence.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::certreal::error::{CertError, CertResult};
use crate::certreal::IntPolynomial;

/// Power sums T_n over all roots of a monic integer polynomial, exact for
/// every index. Append-only: completed prefixes never change.
#[derive(Clone, Debug)]
pub struct TraceSequence {
    source_poly: IntPolynomial,
    recurrence_coeffs: Vec<BigInt>,
    values: Vec<BigInt>,
}

/// T_1..T_k for a monic polynomial of degree k >= 2, by Newton's
/// identities: T_n = -n*a_{k-n} - sum_{i=1}^{n-1} a_{k-i} T_{n-i}.
pub fn trace_init_newton(p: &IntPolynomial) -> CertResult<Vec<BigInt>> {
    if !p.is_monic() {
        return Err(CertError::NotMonic);
    }
    let k = p.degree().unwrap();
    if k < 2 {
        return Err(CertError::BadDegree { got: k, min: 2 });
    }
    let a = p.coeffs(); // a[j] multiplies x^j, a[k] = 1
    let mut t: Vec<BigInt> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut s = -BigInt::from(n as i64) * &a[k - n];
        for i in 1..n {
            s -= &a[k - i] * &t[n - i - 1];
        }
        t.push(s);
    }
    Ok(t)
}

impl TraceSequence {
    pub fn new(p: &IntPolynomial) -> CertResult<TraceSequence> {
        let init = trace_init_newton(p)?;
        let k = p.degree().unwrap();
        let mut values = vec![BigInt::from(k as i64)];
        values.extend(init);
        // x^k = -(a_{k-1} x^{k-1} + ... + a_0) transfers to the traces
        let recurrence_coeffs = p.coeffs()[..k].iter().map(|c| -c).collect();
        Ok(TraceSequence {
            source_poly: p.clone(),
            recurrence_coeffs,
            values,
        })
    }

    pub fn source_poly(&self) -> &IntPolynomial {
        &self.source_poly
    }

    /// Coefficients r_i with T_n = sum_i r_i * T_{n-k+i}.
    pub fn recurrence_coeffs(&self) -> &[BigInt] {
        &self.recurrence_coeffs
    }

    /// Number of computed values (indices 0..len-1 are available).
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false // always holds T_0
    }

    pub fn value(&self, n: u64) -> Option<&BigInt> {
        self.values.get(n as usize)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Extend with exact recurrence steps until index `up_to` exists.
    pub fn extend_to(&mut self, up_to: u64) {
        let k = self.recurrence_coeffs.len();
        while self.values.len() <= up_to as usize {
            let n = self.values.len();
            let mut s = BigInt::zero();
            for (i, r) in self.recurrence_coeffs.iter().enumerate() {
                s += r * &self.values[n - k + i];
            }
            self.values.push(s);
        }
    }
}
