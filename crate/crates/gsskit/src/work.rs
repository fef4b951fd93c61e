//! Instrumentation counters for the work-scaling experiments; counts discrete
//! search steps, not wall clock.

/// Work performed by a single solve call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkStats {
    /// Partial coefficient vectors enumerated (meet-in-the-middle halves,
    /// brute-force states).
    pub partials_enumerated: u64,
    /// DP table cells written during construction.
    pub dp_cells: u64,
    /// Half-partitions collected or sampled into candidate lists.
    pub list_elements: u64,
    /// Candidate pairs examined by the matched search (incl. pseudosolutions).
    pub pairs_examined: u64,
}

impl WorkStats {
    pub fn total(&self) -> u64 {
        self.partials_enumerated + self.dp_cells + self.list_elements + self.pairs_examined
    }

    pub fn add(&mut self, other: &WorkStats) {
        self.partials_enumerated += other.partials_enumerated;
        self.dp_cells += other.dp_cells;
        self.list_elements += other.list_elements;
        self.pairs_examined += other.pairs_examined;
    }
}
