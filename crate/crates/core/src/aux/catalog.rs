//! Selection of the auxiliary code used for each order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{
    aux_flip, aux_stitched, search_parity_preserving, verify_aux, AuxCode, SearchConstraints,
};
use crate::error::{Error, Result};

/// Size of the largest parity-preserving code of order 5.
pub const ORDER_FIVE_SIZE: usize = 57;

/// Largest certificate verified exhaustively on load.
const CERTIFICATE_LIMIT: u128 = 10_000_000;

fn trivial3() -> &'static Arc<AuxCode> {
    static CODE: OnceLock<Arc<AuxCode>> = OnceLock::new();
    CODE.get_or_init(|| {
        Arc::new(
            search_parity_preserving(3, 3, &SearchConstraints::default())
                .expect("the order-3 cycle always exists"),
        )
    })
}

fn order_five() -> Result<Arc<AuxCode>> {
    static CODE: OnceLock<Arc<AuxCode>> = OnceLock::new();
    if let Some(c) = CODE.get() {
        return Ok(c.clone());
    }
    let c = SearchConstraints {
        must_use: vec![3],
        ..Default::default()
    };
    let code = Arc::new(search_parity_preserving(5, ORDER_FIVE_SIZE, &c)?);
    Ok(CODE.get_or_init(|| code).clone())
}

/// Chooses, builds and caches auxiliary codes by order.
///
/// Odd orders above 5 need a certificate: a parity-preserving code supplied by
/// the caller (see [`AuxCatalog::add_certificate`]).
#[derive(Debug, Default)]
pub struct AuxCatalog {
    certificates: HashMap<usize, Arc<AuxCode>>,
    cache: Mutex<HashMap<(usize, bool), Arc<AuxCode>>>,
}

impl AuxCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a code for its order after verifying it.
    pub fn add_certificate(&mut self, code: AuxCode) -> Result<()> {
        let report = verify_aux(&code, CERTIFICATE_LIMIT)?;
        if !report.passed() {
            return Err(Error::InvalidParams(format!(
                "certificate rejected: {report}"
            )));
        }
        let k = code.order();
        self.certificates.insert(k, Arc::new(code));
        self.cache
            .lock()
            .expect("cache lock")
            .retain(|&(o, _), _| o != k && o != k + 1);
        Ok(())
    }

    pub fn has_certificate(&self, k: usize) -> bool {
        self.certificates.contains_key(&k)
    }

    /// The auxiliary code of order `k`. With `rankable`, the flip code is
    /// preferred over the larger stitched code for even orders.
    pub fn get(&self, k: usize, rankable: bool) -> Result<Arc<AuxCode>> {
        if let Some(c) = self.cache.lock().expect("cache lock").get(&(k, rankable)) {
            return Ok(c.clone());
        }
        let code = self.build(k, rankable)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert((k, rankable), code.clone());
        Ok(code)
    }

    fn build(&self, k: usize, rankable: bool) -> Result<Arc<AuxCode>> {
        match k {
            0..=2 => Err(Error::InvalidOrder(format!(
                "aux order must be ≥ 3, got {k}"
            ))),
            3 => Ok(trivial3().clone()),
            4 => Ok(Arc::new(aux_flip(4)?)),
            5 => match self.certificates.get(&5) {
                Some(c) => Ok(c.clone()),
                None => order_five(),
            },
            _ if k % 2 == 1 => self.certificates.get(&k).cloned().ok_or_else(|| {
                Error::Unsupported(format!(
                    "no auxiliary code of odd order {k} without a certificate"
                ))
            }),
            _ if rankable => Ok(Arc::new(aux_flip(k)?)),
            6 => Ok(Arc::new(aux_stitched(6, &*self.get(5, false)?)?)),
            _ => match self.certificates.get(&(k - 1)) {
                Some(odd) if odd.is_parity_preserving() => Ok(Arc::new(aux_stitched(k, odd)?)),
                _ => Ok(Arc::new(aux_flip(k)?)),
            },
        }
    }
}
