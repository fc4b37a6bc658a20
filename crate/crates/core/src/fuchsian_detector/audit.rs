use std::thread;

use crate::isometries::GroupElement;

use super::words::{word_ball, GroupPresentation, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceWitness {
    pub word: Word,
    /// Imaginary part of the witness trace (signed).
    pub imag_trace: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceAuditReport {
    pub radius: usize,
    pub words_checked: usize,
    pub max_imag_trace: f64,
    /// First word in ball order whose trace has `|Im| > eps`.
    pub witness: Option<TraceWitness>,
}

/// Audits every word of length `≤ radius` for a non-real trace.
pub fn trace_audit(presentation: &GroupPresentation, radius: usize, eps: f64) -> TraceAuditReport {
    trace_audit_parallel(presentation, radius, eps, 1)
}

/// Same as [`trace_audit`], splitting the ball over `jobs` worker threads. The
/// result does not depend on `jobs`.
pub fn trace_audit_parallel(
    presentation: &GroupPresentation,
    radius: usize,
    eps: f64,
    jobs: usize,
) -> TraceAuditReport {
    let ball = word_ball(presentation, radius);
    audit_ball(&ball, radius, eps, jobs)
}

pub(crate) fn audit_ball(ball: &[(Word, GroupElement)], radius: usize, eps: f64, jobs: usize) -> TraceAuditReport {
    let scan = |chunk: &[(Word, GroupElement)], offset: usize| {
        let mut max_imag: f64 = 0.0;
        let mut first: Option<usize> = None;
        for (i, (_, g)) in chunk.iter().enumerate() {
            let im = g.trace().im.abs();
            max_imag = max_imag.max(im);
            if first.is_none() && im > eps {
                first = Some(offset + i);
            }
        }
        (max_imag, first)
    };

    let jobs = jobs.max(1).min(ball.len().max(1));
    let partials: Vec<(f64, Option<usize>)> = if jobs == 1 {
        vec![scan(ball, 0)]
    } else {
        let chunk_len = ball.len().div_ceil(jobs);
        thread::scope(|s| {
            let handles: Vec<_> = ball
                .chunks(chunk_len)
                .enumerate()
                .map(|(k, chunk)| s.spawn(move || scan(chunk, k * chunk_len)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("audit worker panicked")).collect()
        })
    };

    let max_imag_trace = partials.iter().map(|p| p.0).fold(0.0, f64::max);
    let witness = partials.iter().filter_map(|p| p.1).min().map(|i| TraceWitness {
        word: ball[i].0.clone(),
        imag_trace: ball[i].1.trace().im,
    });
    TraceAuditReport {
        radius,
        words_checked: ball.len(),
        max_imag_trace,
        witness,
    }
}
