//! Process-wide evaluation defaults, set once by front ends (CLI flags,
//! config files) and read wherever grids and thread pools are built.
//! Results are bit-identical across thread counts by construction, so the
//! thread setting never changes values.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

static THREADS: AtomicUsize = AtomicUsize::new(1);
static MB_STEP: AtomicU64 = AtomicU64::new(0); // 0 = unset, use built-in
static MB_HEIGHT: AtomicU64 = AtomicU64::new(0);
static QUAD_WINDOW: AtomicU64 = AtomicU64::new(0);

pub fn set_threads(n: usize) {
    THREADS.store(n.max(1), Ordering::Relaxed);
}

pub fn threads() -> usize {
    THREADS.load(Ordering::Relaxed).max(1)
}

/// Override the base contour step (default 0.1 when unset).
pub fn set_mb_step(h: f64) {
    MB_STEP.store(if h > 0.0 { h.to_bits() } else { 0 }, Ordering::Relaxed);
}

pub fn mb_step() -> f64 {
    match MB_STEP.load(Ordering::Relaxed) {
        0 => 0.1,
        bits => f64::from_bits(bits),
    }
}

/// Override the base truncation height; callers keep their per-formula
/// choices when unset.
pub fn set_mb_height(t: f64) {
    MB_HEIGHT.store(if t > 0.0 { t.to_bits() } else { 0 }, Ordering::Relaxed);
}

pub fn mb_height_or(default: f64) -> f64 {
    match MB_HEIGHT.load(Ordering::Relaxed) {
        0 => default,
        bits => f64::from_bits(bits),
    }
}

/// Cap on the half-width of exp-substituted quadrature windows.
pub fn set_quad_window(u: f64) {
    QUAD_WINDOW.store(if u > 0.0 { u.to_bits() } else { 0 }, Ordering::Relaxed);
}

pub fn quad_window_or(default: f64) -> f64 {
    match QUAD_WINDOW.load(Ordering::Relaxed) {
        0 => default,
        bits => f64::from_bits(bits),
    }
}
