//! Two-phase decoding: peeling with doped or inactivated stalls, then one
//! small dense elimination over everything that stayed inactive.
//!
//! Each received equation keeps a payload and an inactive-variable mask.
//! Peeling decodes a row whenever an equation's live degree reaches one;
//! the decoded expression (payload plus mask) is folded into every other
//! equation containing that row. A stall either injects a repaired symbol
//! on the spot (sequential doping) or turns the chosen symbol into a fresh
//! mask variable and carries on (dynamic inactivation). Equations that
//! never get used to decode a row end up with live degree zero and form the
//! final system `D`: their masks constrain exactly the inactive variables,
//! and its rank deficiency is the extra repair traffic the block needs.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::encoder::{expand_rows, EncodedSymbol};
use super::{
    complexity_report, CodecError, CodeParams, ComplexityReport, DecodeMode, DopingMode, Policy,
};
use crate::bitlinalg::{BitVector, DenseBitMatrix, Solve, SparseColumnMatrix};
use crate::degree::Family;
use crate::seeding;

/// Supplies true source-symbol values on request (the repair path).
pub trait DopingSource {
    /// Values for `rows`, in request order.
    fn fetch(&mut self, rows: &[u32]) -> Result<Vec<BitVector>, String>;
}

/// Repair source backed by a locally known block, for tests and for
/// re-decoding with the original at hand.
pub struct BlockDopingSource<'a> {
    block: &'a [BitVector],
    /// Round trips taken.
    pub requests: u64,
    /// Symbols handed out over all requests.
    pub rows_served: u64,
}

impl<'a> BlockDopingSource<'a> {
    #[must_use]
    pub fn new(block: &'a [BitVector]) -> Self {
        BlockDopingSource {
            block,
            requests: 0,
            rows_served: 0,
        }
    }
}

impl DopingSource for BlockDopingSource<'_> {
    fn fetch(&mut self, rows: &[u32]) -> Result<Vec<BitVector>, String> {
        self.requests += 1;
        self.rows_served += rows.len() as u64;
        rows.iter()
            .map(|&r| {
                self.block
                    .get(r as usize)
                    .cloned()
                    .ok_or_else(|| format!("row {r} out of range"))
            })
            .collect()
    }
}

/// Work counters for one decode.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct OpCounters {
    /// Payload XORs during peeling and symbol injection.
    pub peel_symbol_xors: u64,
    /// Payload XORs inside the final elimination.
    pub ge_symbol_xors: u64,
    /// Payload XORs while substituting inactive values back.
    pub backsub_symbol_xors: u64,
    /// Equations whose live degree reached one.
    pub releases: u64,
}

/// Shape of the final system `D` (equations = unused leftovers, variables =
/// reserved + dynamically inactivated).
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct RankReport {
    pub equations: usize,
    pub variables: usize,
    pub rank: usize,
    /// Rank of the reserved-variable columns alone.
    pub reserved_rank: usize,
    /// Rank of the dynamically inactivated columns alone.
    pub dynamic_rank: usize,
    pub deficiency: usize,
}

/// Optional per-step instrumentation collected during peeling.
#[derive(Clone, Debug, Default)]
pub struct TraceData {
    /// Symbols processed at the moment of each stall.
    pub stall_ells: Vec<usize>,
    /// Equations released by each regular peeling step (doped and
    /// inactivation steps excluded). Empty unless recording was enabled.
    pub increments: Vec<u32>,
    /// Live-degree histograms of the unreleased equations, taken when the
    /// processed count crosses each requested threshold. Index = degree.
    pub degree_snapshots: Vec<(usize, Vec<u64>)>,
}

/// Everything a decode reports besides the block itself.
#[derive(Clone, Debug, Serialize)]
pub struct DecodeOutcome {
    pub k: usize,
    pub p: usize,
    /// Equations ingested.
    pub received: usize,
    pub mode: DecodeMode,
    pub policy: Policy,
    pub doping_mode: DopingMode,
    /// Dynamically inactivated symbols.
    pub i: usize,
    /// Symbols no received equation covers.
    pub u: usize,
    /// Symbols repaired over the back channel.
    pub d: usize,
    /// Least repair count any finalization could have achieved:
    /// `u + (variables − rank(D))`.
    pub d_min: usize,
    pub doped_rows: Vec<u32>,
    pub rank: RankReport,
    pub complexity: ComplexityReport,
    /// Repaired fraction `d / k`.
    pub m_fraction: f64,
    pub counters: OpCounters,
    #[serde(skip)]
    pub trace: TraceData,
}

/// A decoded block plus its outcome report.
#[derive(Debug)]
pub struct Decoded {
    pub block: Vec<BitVector>,
    pub outcome: DecodeOutcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RowState {
    Pending,
    Decoded,
    Inactivated(u32),
    Uncovered,
}

/// Value expression: payload XOR the inactive variables set in the mask.
#[derive(Clone, Debug)]
struct Expr {
    payload: BitVector,
    mask: BitVector,
}

/// One decode in progress. Use [`decode`] unless instrumentation flags are
/// needed; the instance is consumed by [`Decoder::run`].
pub struct Decoder {
    params: CodeParams,
    /// Rows that take part in peeling: `k − p` conditional, `k` otherwise.
    active_rows: usize,
    /// Leading ledger entries reserved for the non-peeling rows.
    permanents: usize,
    matrix: SparseColumnMatrix,
    eqs: Vec<Expr>,
    consumed: Vec<bool>,
    released: Vec<bool>,
    ripple: VecDeque<u32>,
    row_state: Vec<RowState>,
    decoded_expr: Vec<Option<Expr>>,
    /// Ledger entries past the permanents, in creation order.
    dynamic_rows: Vec<u32>,
    uncovered: Vec<u32>,
    /// Active rows decoded, inactivated, or known uncovered.
    resolved: usize,
    /// Symbols processed so far (decoded + injected + inactivated).
    ell: usize,
    rng: ChaCha8Rng,
    counters: OpCounters,
    trace: TraceData,
    record_increments: bool,
    snapshot_targets: Vec<usize>,
    snapshot_next: usize,
    doped_rows: Vec<u32>,
    /// Stall injections under the sequential policy (uncovered excluded).
    stall_dopes: usize,
}

impl Decoder {
    pub fn new(
        symbols: &[EncodedSymbol],
        params: &CodeParams,
        family: Family,
        seed: u64,
    ) -> Result<Self, CodecError> {
        params.validate()?;
        if symbols.is_empty() {
            return Err(CodecError::EmptySymbols);
        }
        let (active_rows, permanents) = match params.mode {
            DecodeMode::Conditional => (params.k - params.p, params.p),
            DecodeMode::Unconditional => (params.k, 0),
        };
        let dist = family.distribution(params.k, params.p);
        let mut matrix = SparseColumnMatrix::new(active_rows);
        let mut eqs = Vec::with_capacity(symbols.len());
        for sym in symbols {
            if sym.payload.len() != params.s_bits {
                return Err(CodecError::BadSymbol {
                    column_id: sym.column_id,
                    reason: format!(
                        "payload is {} bits, session says {}",
                        sym.payload.len(),
                        params.s_bits
                    ),
                });
            }
            let rows = expand_rows(&dist, params.k, params.p, &sym.header).map_err(|reason| {
                CodecError::BadSymbol {
                    column_id: sym.column_id,
                    reason,
                }
            })?;
            let mut active = Vec::with_capacity(rows.len());
            let mut mask = BitVector::zeros(permanents);
            for &row in &rows {
                if (row as usize) < active_rows {
                    active.push(row);
                } else {
                    mask.set(row as usize - active_rows, true);
                }
            }
            matrix.push_column(&active);
            eqs.push(Expr {
                payload: sym.payload.clone(),
                mask,
            });
        }

        let mut row_state = vec![RowState::Pending; active_rows];
        let mut uncovered = Vec::new();
        for row in 0..active_rows {
            if matrix.row_degree(row as u32) == 0 {
                row_state[row] = RowState::Uncovered;
                uncovered.push(row as u32);
            }
        }
        let resolved = uncovered.len();

        let mut ripple = VecDeque::new();
        let mut released = vec![false; eqs.len()];
        for e in 0..eqs.len() as u32 {
            if matrix.degree(e) == 1 {
                released[e as usize] = true;
                ripple.push_back(e);
            }
        }

        Ok(Decoder {
            params: params.clone(),
            active_rows,
            permanents,
            matrix,
            consumed: vec![false; eqs.len()],
            released,
            ripple,
            row_state,
            decoded_expr: vec![None; active_rows],
            dynamic_rows: Vec::new(),
            uncovered,
            resolved,
            ell: 0,
            rng: seeding::stream(seed, 0x0D0F),
            counters: OpCounters::default(),
            trace: TraceData::default(),
            record_increments: false,
            snapshot_targets: Vec::new(),
            snapshot_next: 0,
            doped_rows: Vec::new(),
            stall_dopes: 0,
            eqs,
        })
    }

    /// Record how many equations each regular peeling step releases.
    pub fn record_increments(&mut self) {
        self.record_increments = true;
    }

    /// Snapshot the unreleased-equation degree histogram when the processed
    /// count reaches each of `ells`.
    pub fn snapshot_cloud_at(&mut self, ells: &[usize]) {
        self.snapshot_targets = ells.to_vec();
        self.snapshot_targets.sort_unstable();
        self.snapshot_targets.dedup();
        self.snapshot_next = 0;
    }

    fn ledger_len(&self) -> usize {
        self.permanents + self.dynamic_rows.len()
    }

    fn ledger_row(&self, v: usize) -> u32 {
        if v < self.permanents {
            (self.active_rows + v) as u32
        } else {
            self.dynamic_rows[v - self.permanents]
        }
    }

    fn step(&mut self) {
        self.ell += 1;
        if self
            .snapshot_targets
            .get(self.snapshot_next)
            .is_some_and(|&t| t == self.ell)
        {
            self.snapshot_next += 1;
            let mut hist: Vec<u64> = Vec::new();
            for e in 0..self.eqs.len() as u32 {
                let d = self.matrix.degree(e);
                if d >= 2 {
                    if hist.len() <= d {
                        hist.resize(d + 1, 0);
                    }
                    hist[d] += 1;
                }
            }
            self.trace.degree_snapshots.push((self.ell, hist));
        }
    }

    /// Decodes `row` as `expr`, folding it into every other equation that
    /// contains the row. `src` is the consumed equation for ripple decodes,
    /// `None` for injected repair symbols.
    fn apply_known(&mut self, row: u32, expr: Expr, src: Option<u32>, regular: bool) {
        let r = row as usize;
        debug_assert!(matches!(
            self.row_state[r],
            RowState::Pending | RowState::Uncovered
        ));
        if self.row_state[r] == RowState::Pending {
            self.resolved += 1;
        }
        self.row_state[r] = RowState::Decoded;
        let mut released_now = 0u32;
        for (col, new_deg) in self.matrix.remove_row(row) {
            if src == Some(col) {
                continue;
            }
            let c = col as usize;
            self.eqs[c].payload.xor_assign(&expr.payload);
            self.counters.peel_symbol_xors += 1;
            if !expr.mask.is_empty() {
                self.eqs[c].mask.xor_assign_zext(&expr.mask);
            }
            if new_deg == 1 && !self.released[c] {
                self.released[c] = true;
                self.ripple.push_back(col);
                released_now += 1;
            }
        }
        self.counters.releases += u64::from(released_now);
        if regular && self.record_increments {
            self.trace.increments.push(released_now);
        }
        self.decoded_expr[r] = Some(expr);
        self.step();
    }

    /// Turns `row` into a fresh ledger variable: equations containing it
    /// trade the row for a mask bit and no payload work happens at all.
    fn inactivate(&mut self, row: u32) {
        let v = self.ledger_len();
        self.dynamic_rows.push(row);
        let r = row as usize;
        debug_assert_eq!(self.row_state[r], RowState::Pending);
        self.row_state[r] = RowState::Inactivated(v as u32);
        self.resolved += 1;
        let mut mask = BitVector::zeros(v + 1);
        mask.set(v, true);
        self.decoded_expr[r] = Some(Expr {
            payload: BitVector::zeros(self.params.s_bits),
            mask,
        });
        let mut released_now = 0u32;
        for (col, new_deg) in self.matrix.remove_row(row) {
            let c = col as usize;
            let m = &mut self.eqs[c].mask;
            if m.len() <= v {
                m.grow(v + 1);
            }
            m.set(v, true);
            if new_deg == 1 && !self.released[c] {
                self.released[c] = true;
                self.ripple.push_back(col);
                released_now += 1;
            }
        }
        self.counters.releases += u64::from(released_now);
        self.step();
    }

    fn drain_ripple(&mut self) {
        while let Some(eq) = self.ripple.pop_front() {
            if self.matrix.degree(eq) == 0 {
                // Its last row was decoded by another equation first; this
                // one goes to the leftovers.
                continue;
            }
            let row = self.matrix.live_rows(eq).next().expect("live degree 1");
            let expr = self.eqs[eq as usize].clone();
            self.consumed[eq as usize] = true;
            self.apply_known(row, expr, Some(eq), true);
        }
    }

    /// A row to dope or inactivate: uniform among the live rows of a
    /// uniformly chosen minimum-degree cloud equation (degree two unless
    /// the cloud has thinned past that).
    fn pick_stall_row(&mut self) -> Option<u32> {
        let mut best = usize::MAX;
        let mut candidates: Vec<u32> = Vec::new();
        for e in 0..self.matrix.columns() as u32 {
            let d = self.matrix.degree(e);
            if d < 2 {
                continue;
            }
            if d < best {
                best = d;
                candidates.clear();
            }
            if d == best {
                candidates.push(e);
            }
        }
        if candidates.is_empty() {
            return None;
        }
        let eq = candidates[self.rng.gen_range(0..candidates.len())];
        let rows: Vec<u32> = self.matrix.live_rows(eq).collect();
        Some(rows[self.rng.gen_range(0..rows.len())])
    }

    fn fetch_rows(
        source: &mut Option<&mut dyn DopingSource>,
        rows: &[u32],
        s_bits: usize,
    ) -> Result<Vec<BitVector>, CodecError> {
        let Some(src) = source.as_mut() else {
            return Err(CodecError::DopingNeeded {
                rows: rows.to_vec(),
            });
        };
        let values = src.fetch(rows).map_err(CodecError::DopingSourceFailed)?;
        if values.len() != rows.len() {
            return Err(CodecError::DopingSourceFailed(format!(
                "asked for {} symbols, got {}",
                rows.len(),
                values.len()
            )));
        }
        for v in &values {
            if v.len() != s_bits {
                return Err(CodecError::DopingSourceFailed(format!(
                    "repair symbol is {} bits, session says {s_bits}",
                    v.len()
                )));
            }
        }
        Ok(values)
    }

    /// Runs the decode to completion, consuming the decoder.
    pub fn run(
        mut self,
        policy: Policy,
        doping_mode: DopingMode,
        mut source: Option<&mut dyn DopingSource>,
    ) -> Result<Decoded, CodecError> {
        let s_bits = self.params.s_bits;

        // Sequential repair cannot postpone anything, so uncovered symbols
        // are requested up front, one round trip each.
        if policy == Policy::Sequential && !self.uncovered.is_empty() {
            let rows = self.uncovered.clone();
            if source.is_none() {
                return Err(CodecError::DopingNeeded { rows });
            }
            for row in rows {
                let mut values = Self::fetch_rows(&mut source, &[row], s_bits)?;
                self.doped_rows.push(row);
                self.apply_known(
                    row,
                    Expr {
                        payload: values.pop().expect("one value"),
                        mask: BitVector::zeros(0),
                    },
                    None,
                    false,
                );
            }
        }

        loop {
            self.drain_ripple();
            if self.resolved == self.active_rows {
                break;
            }
            self.trace.stall_ells.push(self.ell);
            let row = self
                .pick_stall_row()
                .expect("stalled with pending rows but no cloud equation");
            match policy {
                Policy::Sequential => {
                    let mut values = Self::fetch_rows(&mut source, &[row], s_bits)?;
                    self.doped_rows.push(row);
                    self.stall_dopes += 1;
                    self.apply_known(
                        row,
                        Expr {
                            payload: values.pop().expect("one value"),
                            mask: BitVector::zeros(0),
                        },
                        None,
                        false,
                    );
                }
                Policy::Postponed => self.inactivate(row),
            }
        }

        self.finalize(policy, doping_mode, source)
    }

    /// Leftover equations and the chosen extra dopings as a dense system
    /// over the ledger variables.
    fn build_system(&self, leftovers: &[usize], extra: &BTreeSet<usize>) -> DenseBitMatrix {
        let lcols = self.ledger_len();
        let mut m = DenseBitMatrix::zeros(leftovers.len() + extra.len(), lcols);
        for (ri, &e) in leftovers.iter().enumerate() {
            m.set_row(ri, &self.eqs[e].mask);
        }
        for (j, &v) in extra.iter().enumerate() {
            m.set(leftovers.len() + j, v, true);
        }
        m
    }

    fn column_span_rank(&self, leftovers: &[usize], from: usize, to: usize) -> usize {
        let mut m = DenseBitMatrix::zeros(leftovers.len(), to - from);
        for (ri, &e) in leftovers.iter().enumerate() {
            for bit in self.eqs[e].mask.iter_ones() {
                if bit >= from && bit < to {
                    m.set(ri, bit - from, true);
                }
            }
        }
        m.rank()
    }

    fn finalize(
        mut self,
        policy: Policy,
        doping_mode: DopingMode,
        mut source: Option<&mut dyn DopingSource>,
    ) -> Result<Decoded, CodecError> {
        let s_bits = self.params.s_bits;
        let i = self.dynamic_rows.len();
        let u = self.uncovered.len();
        let lcols = self.ledger_len();
        let leftovers: Vec<usize> = (0..self.eqs.len()).filter(|&e| !self.consumed[e]).collect();
        let w = leftovers.len();
        // Every received equation either decoded one row or is a leftover,
        // and rows resolve by peeling unless uncovered, inactivated, or
        // injected at a stall.
        debug_assert_eq!(
            w,
            self.eqs.len() - (self.active_rows - u - i - self.stall_dopes)
        );

        let dmat = self.build_system(&leftovers, &BTreeSet::new());
        let rank = dmat.rank();
        let d_min = u + (lcols - rank);
        let rank_report = RankReport {
            equations: w,
            variables: lcols,
            rank,
            reserved_rank: self.column_span_rank(&leftovers, 0, self.permanents),
            dynamic_rank: self.column_span_rank(&leftovers, self.permanents, lcols),
            deficiency: lcols - rank,
        };

        // Decide which ledger variables to repair rather than solve. Fixing
        // every free column of a deficient system always yields full rank,
        // so the loop settles in one extra pass at most.
        let mut extra: BTreeSet<usize> = match doping_mode {
            DopingMode::DopeAll => (self.permanents..lcols).collect(),
            DopingMode::Minimal => BTreeSet::new(),
        };
        if lcols > 0 {
            loop {
                let aug = self.build_system(&leftovers, &extra);
                let zero_rhs = vec![BitVector::zeros(0); aug.rows()];
                match aug.solve(&zero_rhs).expect("zero rhs is always consistent").0 {
                    Solve::Unique(_) => break,
                    Solve::Deficient { free_columns, .. } => {
                        let before = extra.len();
                        extra.extend(free_columns);
                        assert!(extra.len() > before, "deficient system added no free column");
                    }
                }
            }
        }

        let mut request: Vec<u32> = Vec::new();
        if policy == Policy::Postponed {
            request.extend(&self.uncovered);
        }
        request.extend(extra.iter().map(|&v| self.ledger_row(v)));

        let fetched = if request.is_empty() {
            Vec::new()
        } else if source.is_none() {
            return Err(CodecError::DopingNeeded { rows: request });
        } else if policy == Policy::Postponed {
            // One batched round trip covers the whole doping set.
            Self::fetch_rows(&mut source, &request, s_bits)?
        } else {
            // Sequential repair stays one request per symbol.
            let mut all = Vec::with_capacity(request.len());
            for &row in &request {
                all.extend(Self::fetch_rows(&mut source, &[row], s_bits)?);
            }
            all
        };
        self.doped_rows.extend(&request);

        let uncovered_fetched = if policy == Policy::Postponed { u } else { 0 };
        for (j, &row) in self.uncovered.clone().iter().enumerate().take(uncovered_fetched) {
            self.row_state[row as usize] = RowState::Decoded;
            self.decoded_expr[row as usize] = Some(Expr {
                payload: fetched[j].clone(),
                mask: BitVector::zeros(0),
            });
        }

        // Final solve with values: leftovers first, doped singletons after.
        let ledger_values = if lcols == 0 {
            for &e in &leftovers {
                if !self.eqs[e].payload.is_zero() {
                    return Err(CodecError::Integrity);
                }
            }
            Vec::new()
        } else {
            let aug = self.build_system(&leftovers, &extra);
            let mut rhs: Vec<BitVector> =
                leftovers.iter().map(|&e| self.eqs[e].payload.clone()).collect();
            rhs.extend_from_slice(&fetched[uncovered_fetched..]);
            let (solve, stats) = aug.solve(&rhs).map_err(|_| CodecError::Integrity)?;
            self.counters.ge_symbol_xors = stats.row_xors;
            match solve {
                Solve::Unique(values) => values,
                Solve::Deficient { .. } => unreachable!("doped columns left the system deficient"),
            }
        };

        let block = self.back_substitute(&ledger_values);

        let d = self.doped_rows.len();
        let complexity = complexity_report(
            self.params.k,
            self.permanents,
            i + self.stall_dopes,
            u,
            d,
            self.params.ge_exponent,
        );
        let outcome = DecodeOutcome {
            k: self.params.k,
            p: self.params.p,
            received: self.eqs.len(),
            mode: self.params.mode,
            policy,
            doping_mode,
            i,
            u,
            d,
            d_min,
            doped_rows: self.doped_rows,
            rank: rank_report,
            complexity,
            m_fraction: d as f64 / self.params.k as f64,
            counters: self.counters,
            trace: self.trace,
        };
        Ok(Decoded { block, outcome })
    }

    fn back_substitute(&mut self, ledger_values: &[BitVector]) -> Vec<BitVector> {
        let k = self.params.k;
        let mut block = Vec::with_capacity(k);
        for r in 0..k {
            if r >= self.active_rows {
                block.push(ledger_values[r - self.active_rows].clone());
                continue;
            }
            match self.row_state[r] {
                RowState::Decoded => {
                    let expr = self.decoded_expr[r].take().expect("decoded row has expression");
                    let mut value = expr.payload;
                    for v in expr.mask.iter_ones() {
                        value.xor_assign(&ledger_values[v]);
                        self.counters.backsub_symbol_xors += 1;
                    }
                    block.push(value);
                }
                RowState::Inactivated(v) => block.push(ledger_values[v as usize].clone()),
                RowState::Pending | RowState::Uncovered => {
                    unreachable!("row {r} left unresolved")
                }
            }
        }
        block
    }

    /// One line per row state and per equation, for debugging small systems.
    #[must_use]
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "k={} p={} mode={} processed={} resolved={}/{}",
            self.params.k,
            self.params.p,
            self.params.mode.label(),
            self.ell,
            self.resolved,
            self.active_rows
        );
        let states: String = self
            .row_state
            .iter()
            .map(|s| match s {
                RowState::Pending => '.',
                RowState::Decoded => 'D',
                RowState::Inactivated(_) => 'I',
                RowState::Uncovered => 'U',
            })
            .collect();
        let _ = writeln!(out, "rows: {states}");
        for e in 0..self.eqs.len() {
            let rows: Vec<u32> = self.matrix.live_rows(e as u32).collect();
            let mask: Vec<usize> = self.eqs[e].mask.iter_ones().collect();
            let status = if self.consumed[e] {
                "consumed"
            } else if self.released[e] {
                "released"
            } else {
                "cloud"
            };
            let _ = writeln!(out, "eq {e:3} [{status}] rows {rows:?} mask {mask:?}");
        }
        out
    }
}

/// Decodes `symbols` in one call. `source` handles repair requests; without
/// one, any needed doping surfaces as [`CodecError::DopingNeeded`] carrying
/// the rows a source would have been asked for.
pub fn decode(
    symbols: &[EncodedSymbol],
    params: &CodeParams,
    family: Family,
    policy: Policy,
    doping_mode: DopingMode,
    seed: u64,
    source: Option<&mut dyn DopingSource>,
) -> Result<Decoded, CodecError> {
    Decoder::new(symbols, params, family, seed)?.run(policy, doping_mode, source)
}
