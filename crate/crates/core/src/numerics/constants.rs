//! Mathematical constants, computed once per precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::Float;

use super::{zeta, Real};

/// Constants at one precision.
#[derive(Debug)]
pub struct Constants {
    pub prec: u32,
    pub pi: Real,
    pub sqrt_pi: Real,
    pub euler_gamma: Real,
    pub ln2: Real,
    pub zeta2: Real,
    pub zeta3: Real,
    pub zeta5: Real,
}

impl Constants {
    /// Shared table for `prec` bits. Concurrent first calls may both compute
    /// the table; whichever lands first is kept, and both are identical.
    pub fn get(prec: u32) -> Arc<Constants> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Constants>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().expect("constants cache poisoned").get(&prec) {
            return c.clone();
        }
        let fresh = Arc::new(Constants::compute(prec));
        cache
            .lock()
            .expect("constants cache poisoned")
            .entry(prec)
            .or_insert(fresh)
            .clone()
    }

    fn compute(prec: u32) -> Constants {
        let pi = Real::from_float(Float::with_val(prec, Constant::Pi));
        let sqrt_pi = pi.sqrt();
        let euler_gamma = Real::from_float(Float::with_val(prec, Constant::Euler));
        let ln2 = Real::from_float(Float::with_val(prec, Constant::Log2));
        let z = |s: i64| zeta(&Real::from_int(prec, s)).expect("zeta at integer > 1");
        Constants {
            prec,
            zeta2: z(2),
            zeta3: z(3),
            zeta5: z(5),
            pi,
            sqrt_pi,
            euler_gamma,
            ln2,
        }
    }
}
