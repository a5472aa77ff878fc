/// Escalation schedule for adaptive-precision computations: start at
/// `init` bits and double until `max`, then give up rather than loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub init: u32,
    pub max: u32,
}

impl PrecisionPolicy {
    pub fn new(init: u32, max: u32) -> PrecisionPolicy {
        assert!(init >= 8 && init <= max);
        PrecisionPolicy { init, max }
    }

    /// Working precisions in escalation order: init, 2*init, ..., capped
    /// at max (max itself is always the final attempt).
    pub fn ladder(&self) -> impl Iterator<Item = u32> + '_ {
        let (init, max) = (self.init, self.max);
        let mut cur = Some(init);
        std::iter::from_fn(move || {
            let bits = cur?;
            cur = if bits >= max {
                None
            } else {
                Some(bits.saturating_mul(2).min(max))
            };
            Some(bits)
        })
    }
}

impl Default for PrecisionPolicy {
    fn default() -> PrecisionPolicy {
        PrecisionPolicy { init: 64, max: 1 << 20 }
    }
}
