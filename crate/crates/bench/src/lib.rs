//! Experiment harness: deadline-ratio sweeps over random grid instances,
//! tardy-fraction and runtime aggregation, CSV output.

mod report;
mod sweep;

pub use report::{emit_csv, manifest, runtime_csv, tardy_csv, write_manifest, RUNTIME_HEADER, TARDY_HEADER};
pub use sweep::{
    run_sweep, Algorithm, RunRecord, RunStatus, RuntimeCell, SweepConfig, SweepError, SweepResult, TardyCell,
};

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_ratios(s: &str) -> Result<Vec<f64>, String> {
    let number = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad ratio `{v}`: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if !(step > 0.0 && stop >= start) {
                return Err(format!("range `{s}` needs step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // round away accumulated binary error, e.g. 1.2000000000000002
            Ok((0..count).map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9).collect())
        }
        [_] => s.split(',').map(number).collect(),
        _ => Err(format!("expected start:stop:step or a comma list, got `{s}`")),
    }
}

/// Parses a comma-separated list such as `25,50,75,100`.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(|v| v.trim().parse::<T>().map_err(|e| format!("bad list entry `{v}`: {e}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_range() {
        let r = parse_ratios("1.0:2.0:0.1").unwrap();
        assert_eq!(r.len(), 11);
        assert_eq!(r[2], 1.2);
        assert_eq!(r[10], 2.0);
        assert_eq!(parse_ratios("1.5").unwrap(), vec![1.5]);
        assert_eq!(parse_ratios("1.0,1.25").unwrap(), vec![1.0, 1.25]);
        assert!(parse_ratios("2:1:0.1").is_err());
        assert!(parse_ratios("1:2").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<usize>("25, 50,75").unwrap(), vec![25, 50, 75]);
        assert_eq!(parse_list::<Algorithm>("baseline,exact").unwrap(), vec![Algorithm::Baseline, Algorithm::Exact]);
        assert!(parse_list::<Algorithm>("fast").is_err());
    }
}
