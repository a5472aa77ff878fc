//! Integer parts of powers of an algebraic base x > 1, certified by
//! interval escalation, together with the exact trace route: a_n can be
//! computed either by enclosing x^n directly or as T_n - u_n, where T_n
//! is the integer power sum over all conjugates and u_n records whether
//! T_n overshoots x^n. Keeping both routes independent is the point; they
//! cross-check each other index by index.

pub mod signs;
pub mod traces;

pub use signs::{residual_threshold, residual_threshold_auto, sign_sequence, SignSequence};
pub use traces::{trace_init_newton, TraceSequence};

use std::io;

use num_bigint::BigInt;

use crate::algnum::AlgebraicReal;
use crate::certreal::error::{CertError, CertResult};
use crate::certreal::{Dyadic, DyadicInterval, PrecisionPolicy};

/// Floor of x^n with the precision that settled it. Escalates along the
/// policy ladder until the power's enclosure pins a single integer.
pub fn floor_pow(x: &AlgebraicReal, n: u64, policy: &PrecisionPolicy) -> CertResult<(BigInt, u32)> {
    let one = Dyadic::one();
    for work in policy.ladder() {
        let xe = x.enclosure(work);
        if xe.hi() <= &one {
            return Err(CertError::BadParameter {
                what: "base must exceed 1".into(),
            });
        }
        if xe.lo() <= &one {
            continue; // base not yet separated from 1 at this precision
        }
        if let Some(f) = xe.pow(n, work).floor_decision() {
            return Ok((f, work));
        }
    }
    Err(CertError::PrecisionExhausted { n })
}

/// Contiguous run of floors a_n = floor(x^n) with the fractional parts
/// and the precision that decided each index. Values never change once
/// pushed; the run only grows at the end.
#[derive(Clone, Debug)]
pub struct FloorPowerSequence {
    base: AlgebraicReal,
    start: u64,
    values: Vec<BigInt>,
    frac_enclosures: Vec<DyadicInterval>,
    precision_log: Vec<u32>,
}

/// One export line: index, floor value, comparison bit when defined, and
/// the precision that decided the floor.
#[derive(Clone, Copy, Debug)]
pub struct SequenceRecord<'a> {
    pub index: u64,
    pub value: &'a BigInt,
    pub sign: Option<u8>,
    pub bits_used: u32,
}

impl FloorPowerSequence {
    /// Compute floors over [start, end], advancing incrementally (one
    /// interval product per index) and re-powering from scratch whenever
    /// accumulated width spoils a floor decision.
    pub fn compute(
        x: &AlgebraicReal,
        start: u64,
        end: u64,
        policy: &PrecisionPolicy,
    ) -> CertResult<FloorPowerSequence> {
        if start > end {
            return Err(CertError::EmptyWindow);
        }
        let one = Dyadic::one();
        let ladder: Vec<u32> = policy.ladder().collect();
        let mut rung = 0usize;
        let mut work = ladder[0];
        let mut xe = x.enclosure(work);
        while xe.lo() <= &one {
            if xe.hi() <= &one {
                return Err(CertError::BadParameter {
                    what: "base must exceed 1".into(),
                });
            }
            rung += 1;
            if rung == ladder.len() {
                return Err(CertError::PrecisionExhausted { n: start });
            }
            work = ladder[rung];
            xe = x.enclosure(work);
        }

        let expect = (end - start + 1) as usize;
        let mut values = Vec::with_capacity(expect);
        let mut frac_enclosures = Vec::with_capacity(expect);
        let mut precision_log = Vec::with_capacity(expect);
        let mut n = start;
        let mut pw = xe.pow(n, work);
        let mut fresh = true;
        loop {
            match pw.floor_decision() {
                Some(f) => {
                    frac_enclosures.push(pw.sub_dyadic(&Dyadic::from_int(f.clone())));
                    values.push(f);
                    precision_log.push(work);
                    if n == end {
                        break;
                    }
                    n += 1;
                    pw = pw.mul(&xe);
                    fresh = false;
                }
                None if !fresh => {
                    // drift from the incremental products; re-power sharp
                    pw = xe.pow(n, work);
                    fresh = true;
                }
                None => {
                    rung += 1;
                    if rung == ladder.len() {
                        return Err(CertError::PrecisionExhausted { n });
                    }
                    work = ladder[rung];
                    xe = x.enclosure(work);
                    pw = xe.pow(n, work);
                }
            }
        }
        Ok(FloorPowerSequence {
            base: x.clone(),
            start,
            values,
            frac_enclosures,
            precision_log,
        })
    }

    pub fn base(&self) -> &AlgebraicReal {
        &self.base
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// Last covered index (inclusive).
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64 - 1
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, n: u64) -> Option<&BigInt> {
        self.slot(n).map(|i| &self.values[i])
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Enclosure of the fractional part x^n - a_n, contained in [0, 1).
    pub fn frac(&self, n: u64) -> Option<&DyadicInterval> {
        self.slot(n).map(|i| &self.frac_enclosures[i])
    }

    pub fn bits_used(&self, n: u64) -> Option<u32> {
        self.slot(n).map(|i| self.precision_log[i])
    }

    fn slot(&self, n: u64) -> Option<usize> {
        n.checked_sub(self.start)
            .map(|i| i as usize)
            .filter(|&i| i < self.values.len())
    }

    /// Per-index records, pairing each floor with its comparison bit when
    /// the supplied sign run covers that index.
    pub fn records<'a>(
        &'a self,
        signs: Option<&'a SignSequence>,
    ) -> impl Iterator<Item = SequenceRecord<'a>> + 'a {
        self.values.iter().enumerate().map(move |(i, v)| {
            let index = self.start + i as u64;
            SequenceRecord {
                index,
                value: v,
                sign: signs.and_then(|s| s.sign(index)),
                bits_used: self.precision_log[i],
            }
        })
    }

    /// One record per line: index, value, sign bit or "-", bits used.
    pub fn write_delimited<W: io::Write>(
        &self,
        signs: Option<&SignSequence>,
        sep: char,
        out: &mut W,
    ) -> io::Result<()> {
        for r in self.records(signs) {
            match r.sign {
                Some(u) => writeln!(
                    out,
                    "{}{sep}{}{sep}{}{sep}{}",
                    r.index, r.value, u, r.bits_used
                )?,
                None => writeln!(
                    out,
                    "{}{sep}{}{sep}-{sep}{}",
                    r.index, r.value, r.bits_used
                )?,
            }
        }
        Ok(())
    }
}
