//! ε-sweeps on a bounded worker pool.
//!
//! Rows are independent. Finished rows arrive in any order; they are written
//! in ε order as soon as every earlier row is done, so a crash leaves a
//! valid prefix on disk.

use std::io::Write;
use std::sync::mpsc;

use rayon::prelude::*;

use crate::config::Config;
use crate::error::{HarnessError, Result};
use crate::record::{CsvSink, SweepRecord};
use crate::scenarios::run_row;

pub fn run_sweep(cfg: &Config) -> Result<Vec<SweepRecord>> {
    run_sweep_into::<Vec<u8>>(cfg, None)
}

/// Runs the sweep, appending rows to `sink` as their prefix completes.
pub fn run_sweep_into<W: Write>(cfg: &Config, mut sink: Option<&mut CsvSink<W>>) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let n = cfg.eps_list.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let (tx, rx) = mpsc::channel::<(usize, SweepRecord)>();
    let mut slots: Vec<Option<SweepRecord>> = vec![None; n];
    let mut next = 0;
    std::thread::scope(|s| -> Result<()> {
        s.spawn(|| {
            pool.install(|| {
                cfg.eps_list.par_iter().enumerate().for_each_with(tx, |tx, (i, &eps)| {
                    // the receiver outlives the workers
                    let _ = tx.send((i, run_row(cfg, i, eps)));
                })
            })
        });
        for (i, rec) in rx.iter() {
            slots[i] = Some(rec);
            while next < n {
                let Some(rec) = &slots[next] else { break };
                if let Some(sink) = sink.as_deref_mut() {
                    sink.push(rec)?;
                }
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(slots.into_iter().map(|r| r.expect("every row reported")).collect())
}

/// Serial reference run, for comparison with the pooled one.
pub fn run_sweep_serial(cfg: &Config) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    Ok(cfg.eps_list.iter().enumerate().map(|(i, &e)| run_row(cfg, i, e)).collect())
}
