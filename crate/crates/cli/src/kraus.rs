//! Sampled Kraus families for the custom-channel scenario: a CSV-like file
//! with header `t,ell,row,col,re,im` lists every nonzero entry of every
//! Kraus operator at every sample time. The sample grid becomes the scenario
//! grid; derivatives are finite differences between neighboring samples.

use std::collections::BTreeMap;

use uqsl_core::channels::{ChannelError, KrausChannel};
use uqsl_core::ComplexMatrix;
use uqsl_core::C64;

use crate::CliError;

pub struct SampledChannel {
    dim: usize,
    times: Vec<f64>,
    samples: Vec<Vec<ComplexMatrix>>,
}

impl SampledChannel {
    pub fn parse(text: &str, dim: usize) -> Result<Self, CliError> {
        let mut lines = text.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, line)) if line.trim().is_empty() || line.trim_start().starts_with('#') => {
                    continue;
                }
                Some((_, line)) => break line.trim(),
                None => return Err(CliError::Config("kraus file is empty".into())),
            }
        };
        if header != "t,ell,row,col,re,im" {
            return Err(CliError::Config(format!(
                "kraus file header must be `t,ell,row,col,re,im`, got `{header}`"
            )));
        }
        // group entries by time; BTreeMap on the raw bits keeps times ordered
        type Entry = (usize, usize, usize, C64);
        let mut by_time: BTreeMap<u64, (f64, Vec<Entry>)> = BTreeMap::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(CliError::Config(format!(
                    "kraus file line {}: expected 6 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let bad = |what: &str| {
                CliError::Config(format!("kraus file line {}: bad {what}", lineno + 1))
            };
            let t: f64 = fields[0].trim().parse().map_err(|_| bad("time"))?;
            if !t.is_finite() || t < 0.0 {
                return Err(bad("time"));
            }
            let ell: usize = fields[1]
                .trim()
                .parse()
                .map_err(|_| bad("operator index"))?;
            let row: usize = fields[2].trim().parse().map_err(|_| bad("row"))?;
            let col: usize = fields[3].trim().parse().map_err(|_| bad("col"))?;
            if row >= dim || col >= dim {
                return Err(bad("matrix index"));
            }
            let re: f64 = fields[4].trim().parse().map_err(|_| bad("re"))?;
            let im: f64 = fields[5].trim().parse().map_err(|_| bad("im"))?;
            by_time
                .entry(t.to_bits())
                .or_insert_with(|| (t, Vec::new()))
                .1
                .push((ell, row, col, C64::new(re, im)));
        }
        if by_time.len() < 2 {
            return Err(CliError::Config(
                "kraus file needs at least two sample times".into(),
            ));
        }
        let operator_count = 1 + by_time
            .values()
            .flat_map(|(_, entries)| entries.iter().map(|(ell, ..)| *ell))
            .max()
            .unwrap_or(0);
        let mut times = Vec::with_capacity(by_time.len());
        let mut samples = Vec::with_capacity(by_time.len());
        for (_, (t, entries)) in by_time {
            let mut ops = vec![ComplexMatrix::zeros(dim, dim); operator_count];
            for (ell, row, col, value) in entries {
                ops[ell].set(row, col, value);
            }
            times.push(t);
            samples.push(ops);
        }
        if times[0] != 0.0 {
            return Err(CliError::Config(format!(
                "kraus file grid must start at t = 0, got {}",
                times[0]
            )));
        }
        Ok(Self {
            dim,
            times,
            samples,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn nearest(&self, t: f64) -> usize {
        match self.times.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) if k == self.times.len() => k - 1,
            Err(k) => {
                if (t - self.times[k - 1]).abs() <= (self.times[k] - t).abs() {
                    k - 1
                } else {
                    k
                }
            }
        }
    }
}

impl KrausChannel for SampledChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    /// Operators at the nearest sample; the scenario only queries grid times.
    fn kraus_at(&self, t: f64) -> Vec<ComplexMatrix> {
        self.samples[self.nearest(t)].clone()
    }

    fn kraus_dot_at(&self, t: f64) -> Result<Vec<ComplexMatrix>, ChannelError> {
        let k = self.nearest(t);
        let n = self.times.len();
        let (lo, hi) = if k == 0 {
            (0, 1)
        } else if k == n - 1 {
            (n - 2, n - 1)
        } else {
            (k - 1, k + 1)
        };
        let dt = self.times[hi] - self.times[lo];
        Ok(self.samples[lo]
            .iter()
            .zip(&self.samples[hi])
            .map(|(a, b)| (b - a).scale_real(1.0 / dt))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use uqsl_core::channels::{completeness_deviation, evolve_channel};
    use uqsl_core::DensityMatrix;

    /// Render an amplitude-damping family into the file format.
    fn ad_file(gamma: f64, times: &[f64]) -> String {
        let mut out = String::from("t,ell,row,col,re,im\n");
        for &t in times {
            let decay = (-gamma * t).exp();
            out.push_str(&format!("{t},0,0,0,1,0\n"));
            out.push_str(&format!("{t},0,1,1,{},0\n", decay.sqrt()));
            out.push_str(&format!("{t},1,0,1,{},0\n", (1.0 - decay).sqrt()));
        }
        out
    }

    #[test]
    fn parses_and_evolves_a_sampled_family() {
        let times: Vec<f64> = (0..51).map(|k| k as f64 * 0.1).collect();
        let channel = SampledChannel::parse(&ad_file(1.0, &times), 2).unwrap();
        assert_eq!(channel.times().len(), 51);
        for &t in channel.times() {
            assert!(completeness_deviation(&channel, t) < 1e-12);
        }
        let rho0 = DensityMatrix::maximally_mixed(2);
        let evolved = evolve_channel(&channel, &rho0, 5.0).unwrap();
        // population flows towards |0><0|
        assert!(evolved.matrix().get(0, 0).re > 0.99);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(SampledChannel::parse("", 2).is_err());
        assert!(SampledChannel::parse("wrong,header\n", 2).is_err());
        assert!(SampledChannel::parse("t,ell,row,col,re,im\n0,0,0,0,1\n", 2).is_err());
        assert!(SampledChannel::parse("t,ell,row,col,re,im\n0,0,5,0,1,0\n", 2).is_err());
        // single sample time is not a family
        assert!(SampledChannel::parse("t,ell,row,col,re,im\n0,0,0,0,1,0\n", 2).is_err());
    }
}
