use serde::Serialize;
use thiserror::Error;

use super::Key;

/// Level count `k` and buckets per level `p` of a cascading bucket system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CbsParams {
    pub k: usize,
    pub p: u64,
}

impl CbsParams {
    pub fn capacity(&self) -> Key {
        self.p.saturating_pow(self.k as u32)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("key span ({key_span}) and item count ({item_count}) must be positive")]
pub struct ParamError {
    pub key_span: u64,
    pub item_count: u64,
}

/// Smallest `p >= 2` with `p^k >= target`.
fn root_ceil(target: u64, k: usize) -> u64 {
    let covers = |p: u64| p.checked_pow(k as u32).is_none_or(|v| v >= target);
    let mut p = ((target as f64).powf(1.0 / k as f64).floor() as u64).max(2);
    while p > 2 && covers(p - 1) {
        p -= 1;
    }
    while !covers(p) {
        p += 1;
    }
    p
}

/// Parameters for a key span of `key_span` over `item_count` queue items:
/// `k = ceil(log2(span / items))` levels and the smallest `p >= 2` with
/// `p^k >= span / items`. Spans no larger than the item count degenerate to a
/// single level.
pub fn choose_cbs_params(key_span: u64, item_count: u64) -> Result<CbsParams, ParamError> {
    if key_span == 0 || item_count == 0 {
        return Err(ParamError {
            key_span,
            item_count,
        });
    }
    if key_span <= item_count {
        return Ok(CbsParams { k: 1, p: 2 });
    }
    let ratio = key_span.div_ceil(item_count);
    let k = (64 - (ratio - 1).leading_zeros()) as usize;
    Ok(CbsParams {
        k,
        p: root_ceil(ratio, k),
    })
}

/// Keep `k`, raising `p` until the structure spans `window` keys above its base.
pub fn widen_to_window(params: CbsParams, window: Key) -> CbsParams {
    if params.capacity() >= window {
        params
    } else {
        CbsParams {
            k: params.k,
            p: root_ceil(window, params.k),
        }
    }
}

/// Explicit level count, e.g. the `log r / log log r` refinement.
pub fn cbs_params_with_levels(key_span: u64, item_count: u64, k: usize) -> CbsParams {
    assert!(k >= 1);
    let ratio = key_span.div_ceil(item_count.max(1)).max(1);
    CbsParams {
        k,
        p: root_ceil(ratio, k),
    }
}
