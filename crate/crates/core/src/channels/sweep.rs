//! Exact iterated standard channel versus the first-order modified
//! expectation, over a grid of gate counts, rates and repetition counts.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    depolarize_standard, expval, expval_modified_m, first_order_modified_raw, iterate_channel,
    ChannelKind, DensityMatrix, Observable,
};
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::gates::{apply_unitary, conjugate, Gate};
use crate::linalg2::MulCounter;

pub const SWEEP_CSV_HEADER: &str = "gates,p,m,abs_diff";

/// Where the `m` channel applications sit relative to the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepPlacement {
    /// Whole circuit first, then the channel `m` times.
    #[default]
    Terminal,
    /// The channel `m` times after every gate.
    Interleaved,
}

impl FromStr for SweepPlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "terminal" => Ok(SweepPlacement::Terminal),
            "interleaved" | "per-layer" => Ok(SweepPlacement::Interleaved),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub gates: usize,
    pub p: f64,
    pub m: usize,
    pub abs_diff: f64,
}

/// Cells ordered by `(gates, p, m)` in the order the inputs were given.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub gate_counts: Vec<usize>,
    pub p_values: Vec<f64>,
    pub m_values: Vec<usize>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn shape(&self) -> (usize, usize, usize) {
        (
            self.gate_counts.len(),
            self.p_values.len(),
            self.m_values.len(),
        )
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.cells.iter().fold(0.0, |acc, c| acc.max(c.abs_diff))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.cells.len() + 1));
        out.push_str(SWEEP_CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.gates,
                fmt_f64(c.p),
                c.m,
                fmt_f64(c.abs_diff)
            );
        }
        out
    }
}

/// `gates` rotations alternating RY, RX, RY, … with angles uniform in
/// `[0, 2π)`. Each gate count draws from its own ChaCha stream, so a circuit
/// does not depend on which other counts are swept alongside it.
pub fn alternating_circuit(gates: usize, seed: u64) -> Vec<Gate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(gates as u64);
    (0..gates)
        .map(|i| {
            let theta = rng.gen_range(0.0..TAU);
            if i % 2 == 0 {
                Gate::ry(theta)
            } else {
                Gate::rx(theta)
            }
        })
        .collect()
}

pub fn expectation_sweep(
    gate_counts: &[usize],
    p_values: &[f64],
    m_values: &[usize],
    seed: u64,
    placement: SweepPlacement,
) -> Result<SweepGrid> {
    if gate_counts.is_empty() || p_values.is_empty() || m_values.is_empty() {
        return Err(Error::Input("sweep lists must be nonempty".into()));
    }
    for &p in p_values {
        super::check_rate(p)?;
    }
    let z = Observable::pauli_z();
    let mut cells = Vec::with_capacity(gate_counts.len() * p_values.len() * m_values.len());
    for &g in gate_counts {
        let circuit = alternating_circuit(g, seed);
        let prepared = circuit.iter().fold(DensityMatrix::ket0(), |rho, gate| {
            apply_unitary(gate, &rho, None)
        });
        for &p in p_values {
            for &m in m_values {
                let (exact, approx) = match placement {
                    SweepPlacement::Terminal => {
                        let exact_state = iterate_channel(&prepared, p, m, ChannelKind::Standard)?;
                        let exact = expval(&z, exact_state.mat(), None)?;
                        let approx =
                            expval_modified_m(&z, &prepared, p, m, &mut MulCounter::new())?;
                        (exact, approx)
                    }
                    SweepPlacement::Interleaved => interleaved_pair(&circuit, p, m, &z)?,
                };
                cells.push(SweepCell {
                    gates: g,
                    p,
                    m,
                    abs_diff: (exact - approx).abs(),
                });
            }
        }
    }
    Ok(SweepGrid {
        gate_counts: gate_counts.to_vec(),
        p_values: p_values.to_vec(),
        m_values: m_values.to_vec(),
        cells,
    })
}

/// Channel block after every gate: exact iteration vs first-order update.
fn interleaved_pair(circuit: &[Gate], p: f64, m: usize, z: &Observable) -> Result<(f64, f64)> {
    let mut exact = DensityMatrix::ket0();
    let mut approx = *DensityMatrix::ket0().mat();
    for gate in circuit {
        exact = apply_unitary(gate, &exact, None);
        for _ in 0..m {
            exact = depolarize_standard(&exact, p, None)?;
        }
        approx = conjugate(gate.matrix(), &approx, None);
        approx = first_order_modified_raw(&approx, p, m, None);
    }
    Ok((expval(z, exact.mat(), None)?, expval(z, &approx, None)?))
}
