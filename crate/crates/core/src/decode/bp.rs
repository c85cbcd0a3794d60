//! Sum-product decoding with flooding and bit-serial (shuffled) schedules.

use super::channel::{hard_decision, ChannelObservation, LLR_CLAMP};
use super::{DecodeResult, Flavor, WordDecoder};
use crate::gf2::{BinMatrix, BinVector};

/// Message-passing schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// All checks, then all variables, per iteration.
    #[default]
    Flooding,
    /// Variables in ascending order; each variable pulls fresh check messages
    /// computed from the latest variable messages.
    Serial,
}

/// Final result plus the a-posteriori LLRs of the last iteration.
#[derive(Clone, Debug)]
pub struct BpOutput {
    pub result: DecodeResult,
    pub posteriors: Vec<f64>,
}

/// Sum-product decoder with a precomputed edge layout.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    h: BinMatrix,
    schedule: Schedule,
    max_iter: usize,
    /// Edges are numbered check-major; `check_start[c]..check_start[c + 1]`.
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    edge_check: Vec<usize>,
    /// Edge ids per variable, flattened.
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
}

// Smallest magnitude fed to phi, keeps phi finite.
const PHI_MIN: f64 = 1e-12;
const PROD_MAX: f64 = 1.0 - 1e-15;

/// `phi(x) = -ln tanh(x / 2)`, its own inverse on `x > 0`.
#[inline]
fn phi(x: f64) -> f64 {
    let x = x.clamp(PHI_MIN, 2.0 * LLR_CLAMP);
    (2.0 / x.exp_m1()).ln_1p()
}

#[inline]
fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_CLAMP, LLR_CLAMP)
}

impl BpDecoder {
    pub fn new(h: &BinMatrix, schedule: Schedule, max_iter: usize) -> Self {
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::new();
        let mut edge_check = Vec::new();
        check_start.push(0);
        for c in 0..h.rows() {
            for v in h.row_support(c) {
                edge_var.push(v);
                edge_check.push(c);
            }
            check_start.push(edge_var.len());
        }
        let mut per_var = vec![Vec::new(); h.cols()];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_start = Vec::with_capacity(h.cols() + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_start.push(0);
        for edges in per_var {
            var_edges.extend(edges);
            var_start.push(var_edges.len());
        }
        BpDecoder {
            h: h.clone(),
            schedule,
            max_iter,
            check_start,
            edge_var,
            edge_check,
            var_start,
            var_edges,
        }
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    fn flavor(&self) -> Flavor {
        match self.schedule {
            Schedule::Flooding => Flavor::Flooding,
            Schedule::Serial => Flavor::Serial,
        }
    }

    fn syndrome_zero(&self, hard: &BinVector) -> bool {
        (0..self.h.rows()).all(|c| {
            self.edge_var[self.check_start[c]..self.check_start[c + 1]]
                .iter()
                .filter(|&&v| hard.get(v))
                .count()
                % 2
                == 0
        })
    }

    /// Runs the decoder and also returns the final posteriors.
    pub fn run(&self, obs: &ChannelObservation) -> BpOutput {
        assert_eq!(obs.len(), self.h.cols(), "observation length mismatch");
        let llr: Vec<f64> = obs.llr().iter().map(|&l| clamp_llr(l)).collect();
        let hard = hard_decision(&llr);
        if self.syndrome_zero(&hard) {
            return BpOutput {
                result: DecodeResult::success(hard, 0, self.flavor()),
                posteriors: llr,
            };
        }
        match self.schedule {
            Schedule::Flooding => self.run_flooding(llr),
            Schedule::Serial => self.run_serial(llr),
        }
    }

    fn run_flooding(&self, llr: Vec<f64>) -> BpOutput {
        let edges = self.edge_var.len();
        let mut q: Vec<f64> = self.edge_var.iter().map(|&v| llr[v]).collect();
        let mut r = vec![0.0; edges];
        let mut post = llr.clone();
        let mut t = Vec::new();
        let mut suffix = Vec::new();

        for it in 1..=self.max_iter {
            for c in 0..self.h.rows() {
                let (lo, hi) = (self.check_start[c], self.check_start[c + 1]);
                let deg = hi - lo;
                t.clear();
                t.extend(q[lo..hi].iter().map(|&x| (x / 2.0).tanh()));
                suffix.clear();
                suffix.resize(deg + 1, 1.0);
                for i in (0..deg).rev() {
                    suffix[i] = suffix[i + 1] * t[i];
                }
                let mut prefix = 1.0;
                for i in 0..deg {
                    let prod = (prefix * suffix[i + 1]).clamp(-PROD_MAX, PROD_MAX);
                    r[lo + i] = clamp_llr(2.0 * prod.atanh());
                    prefix *= t[i];
                }
            }
            for v in 0..self.h.cols() {
                let es = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                let total = llr[v] + es.iter().map(|&e| r[e]).sum::<f64>();
                post[v] = total;
                for &e in es {
                    q[e] = clamp_llr(total - r[e]);
                }
            }
            let hard = hard_decision(&post);
            if self.syndrome_zero(&hard) {
                return BpOutput {
                    result: DecodeResult::success(hard, it, Flavor::Flooding),
                    posteriors: post,
                };
            }
        }
        BpOutput {
            result: DecodeResult::failure(self.max_iter, Flavor::Flooding),
            posteriors: post,
        }
    }

    fn run_serial(&self, llr: Vec<f64>) -> BpOutput {
        let checks = self.h.rows();
        let mut q: Vec<f64> = self.edge_var.iter().map(|&v| llr[v]).collect();
        let mut phi_q: Vec<f64> = q.iter().map(|x| phi(x.abs())).collect();
        let mut sum = vec![0.0; checks];
        let mut negatives = vec![0usize; checks];
        let mut post = llr.clone();
        let mut r_local = Vec::new();

        for it in 1..=self.max_iter {
            // Exact refresh of the per-check state bounds accumulated drift.
            for c in 0..checks {
                let (lo, hi) = (self.check_start[c], self.check_start[c + 1]);
                sum[c] = phi_q[lo..hi].iter().sum();
                negatives[c] = q[lo..hi].iter().filter(|&&x| x < 0.0).count();
            }
            for v in 0..self.h.cols() {
                let es = &self.var_edges[self.var_start[v]..self.var_start[v + 1]];
                r_local.clear();
                let mut total = llr[v];
                for &e in es {
                    let c = self.edge_check[e];
                    let own_negative = usize::from(q[e] < 0.0);
                    let mag = phi((sum[c] - phi_q[e]).max(0.0));
                    let msg = if (negatives[c] - own_negative) % 2 == 1 {
                        -mag
                    } else {
                        mag
                    };
                    let msg = clamp_llr(msg);
                    r_local.push(msg);
                    total += msg;
                }
                post[v] = total;
                for (&e, &msg) in es.iter().zip(&r_local) {
                    let c = self.edge_check[e];
                    let new_q = clamp_llr(total - msg);
                    let new_phi = phi(new_q.abs());
                    sum[c] += new_phi - phi_q[e];
                    negatives[c] =
                        negatives[c] + usize::from(new_q < 0.0) - usize::from(q[e] < 0.0);
                    q[e] = new_q;
                    phi_q[e] = new_phi;
                }
            }
            let hard = hard_decision(&post);
            if self.syndrome_zero(&hard) {
                return BpOutput {
                    result: DecodeResult::success(hard, it, Flavor::Serial),
                    posteriors: post,
                };
            }
        }
        BpOutput {
            result: DecodeResult::failure(self.max_iter, Flavor::Serial),
            posteriors: post,
        }
    }
}

impl WordDecoder for BpDecoder {
    fn matrix(&self) -> &BinMatrix {
        &self.h
    }

    fn decode(&self, obs: &ChannelObservation) -> DecodeResult {
        self.run(obs).result
    }
}

/// Flooding sum-product.
pub fn sum_product_bsc(h: &BinMatrix, obs: &ChannelObservation, max_iter: usize) -> DecodeResult {
    BpDecoder::new(h, Schedule::Flooding, max_iter).decode(obs)
}

/// Bit-serial (shuffled) sum-product.
pub fn bit_serial_sp(h: &BinMatrix, obs: &ChannelObservation, max_iter: usize) -> DecodeResult {
    BpDecoder::new(h, Schedule::Serial, max_iter).decode(obs)
}
