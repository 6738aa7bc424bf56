/// A point in time or a duration, in integer ticks.
pub type Tick = i64;

/// Number of ticks per user-facing time unit.
///
/// Instance files store tick values directly; the scale only records how to
/// convert them back into the unit the instance was authored in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeScale {
    ticks_per_unit: u32,
}

impl TimeScale {
    /// Returns `None` for a zero scale.
    pub fn new(ticks_per_unit: u32) -> Option<Self> {
        (ticks_per_unit > 0).then_some(Self { ticks_per_unit })
    }

    pub fn ticks_per_unit(&self) -> u32 {
        self.ticks_per_unit
    }

    pub fn to_units(&self, ticks: Tick) -> f64 {
        ticks as f64 / f64::from(self.ticks_per_unit)
    }

    /// Converts a value in units to ticks, or `None` if it is not an exact
    /// multiple of one tick.
    pub fn to_ticks(&self, units: f64) -> Option<Tick> {
        let scaled = units * f64::from(self.ticks_per_unit);
        let rounded = scaled.round();
        ((scaled - rounded).abs() < 1e-9 && rounded.abs() < 9.0e15).then_some(rounded as Tick)
    }
}

impl Default for TimeScale {
    fn default() -> Self {
        Self { ticks_per_unit: 1 }
    }
}
