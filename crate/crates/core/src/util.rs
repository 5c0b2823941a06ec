//! Shared helpers: exact-coordinate text formatting/parsing and a bounded
//! worker pool for the independent per-level computations.

use crate::Coord;

/// Render a coordinate exactly: integers as `7`, terminating decimals as
/// `6.5`, everything else as `num/den`.
pub fn format_coord(c: Coord) -> String {
    let denom = *c.denom();
    if denom == 1 {
        return c.numer().to_string();
    }
    // Terminating decimal iff denom = 2^a · 5^b.
    let mut d = denom;
    let mut digits = 0u32;
    while d % 2 == 0 {
        d /= 2;
        digits += 1;
    }
    let mut fives = 0u32;
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    digits = digits.max(fives);
    if d == 1 && digits <= 12 {
        let scale = 10i64.pow(digits);
        let scaled = c * Coord::from_integer(scale);
        debug_assert_eq!(*scaled.denom(), 1);
        let n = *scaled.numer();
        let sign = if n < 0 { "-" } else { "" };
        let n = n.abs();
        let int = n / scale;
        let frac = n % scale;
        let frac_str = format!("{:0width$}", frac, width = digits as usize);
        let frac_str = frac_str.trim_end_matches('0');
        return format!("{sign}{int}.{frac_str}");
    }
    format!("{}/{}", c.numer(), c.denom())
}

/// Parse `7`, `-3.25`, `5/3`, or `inf`/`-inf` (as `None`).
pub fn parse_coord(s: &str) -> Option<Coord> {
    let s = s.trim();
    if let Ok(n) = s.parse::<i64>() {
        return Some(Coord::from_integer(n));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().ok()?;
        let d: i64 = den.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Coord::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let frac_part: i64 = frac.parse().ok()?;
        let abs = Coord::from_integer(int_part.abs()) + Coord::new(frac_part, scale);
        return Some(if negative { -abs } else { abs });
    }
    None
}

pub fn coord_to_f64(c: Coord) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

/// Worker-pool size: `GPD_THREADS` when set and positive, otherwise the
/// machine's available parallelism.
pub fn worker_threads() -> usize {
    if let Ok(v) = std::env::var("GPD_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Apply `f` to every item, fanning out across at most [`worker_threads`]
/// scoped threads; results come back in input order regardless of
/// schedule.
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let threads = worker_threads().min(items.len().max(1));
    if threads <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = Vec::with_capacity(items.len());
    slots.resize_with(items.len(), || None);
    let jobs: Vec<(usize, T)> = items.into_iter().enumerate().collect();
    let queue = std::sync::Mutex::new(jobs.into_iter());
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().next();
                let Some((idx, item)) = job else { break };
                let out = f(item);
                results.lock().unwrap()[idx] = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("worker filled slot"))
        .collect()
}
