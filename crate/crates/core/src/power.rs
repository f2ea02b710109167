// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Dynamic switching power, `P = alpha * C * V^2 * f` per net, with a fanout
//! based capacitance proxy.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::netlist::{NetId, Netlist, NetlistError};
use crate::profile::{ActivityProfile, ProfileError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("power parameter `{0}` must be strictly positive and finite")]
    BadConfig(&'static str),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("baseline {0} is zero; percentages are undefined")]
    ZeroBaseline(&'static str),
}

/// Electrical operating point and capacitance model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    /// Volts.
    pub supply_voltage: f64,
    /// Hertz.
    pub clock_freq: f64,
    /// Farads per net.
    pub c_base: f64,
    /// Farads per sink.
    pub c_per_fanout: f64,
    /// Farads added to each duplicated copy of a driver.
    pub c_dup_overhead: f64,
    /// Exponent applied to fanout in the wiring term. 1.0 is the linear proxy;
    /// larger values model wiring that grows faster than the sink count.
    pub fanout_exponent: f64,
}

impl Default for PowerConfig {
    fn default() -> Self {
        PowerConfig {
            supply_voltage: 1.0,
            clock_freq: 1e8,
            c_base: 5e-15,
            c_per_fanout: 2e-15,
            c_dup_overhead: 1e-15,
            fanout_exponent: 1.0,
        }
    }
}

impl PowerConfig {
    /// Defaults with quadratic fanout wiring, where splitting a large load
    /// across two drivers shortens total wiring.
    pub fn wire_dominated() -> Self {
        PowerConfig {
            fanout_exponent: 2.0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), PowerError> {
        let fields = [
            ("supply_voltage", self.supply_voltage),
            ("clock_freq", self.clock_freq),
            ("c_base", self.c_base),
            ("c_per_fanout", self.c_per_fanout),
            ("c_dup_overhead", self.c_dup_overhead),
            ("fanout_exponent", self.fanout_exponent),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(PowerError::BadConfig(name));
            }
        }
        Ok(())
    }
}

/// `c_base + c_per_fanout * fanout^exponent`.
pub fn net_capacitance(nl: &Netlist, net: NetId, cfg: &PowerConfig) -> Result<f64, NetlistError> {
    let fanout = nl.fanout(net)? as f64;
    let wiring = if cfg.fanout_exponent == 1.0 {
        fanout
    } else {
        fanout.powf(cfg.fanout_exponent)
    };
    Ok(cfg.c_base + cfg.c_per_fanout * wiring)
}

/// Output nets of cells that duplicate an earlier cell (same function, same inputs).
pub fn duplicated_driver_nets(nl: &Netlist) -> Vec<NetId> {
    let mut seen = HashSet::new();
    nl.cells()
        .iter()
        .filter(|c| !c.is_constant())
        .filter(|c| !seen.insert((c.inputs.as_slice(), &c.function)))
        .map(|c| c.output)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetPower {
    pub net: String,
    pub alpha: f64,
    /// Farads.
    pub capacitance: f64,
    /// Watts.
    pub power: f64,
}

/// Percent changes versus a baseline. Positive `power_pct` is power saved;
/// positive `area_pct` is area grown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub power_pct: f64,
    pub area_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub name: String,
    /// Per-net entries in ascending net-name order.
    pub nets: Vec<NetPower>,
    pub total_power: f64,
    pub area_luts: usize,
    pub delta: Option<Delta>,
}

impl PowerReport {
    /// A report with totals only, for comparing externally measured numbers.
    pub fn summary(name: impl Into<String>, total_power: f64, area_luts: usize) -> Self {
        PowerReport {
            name: name.into(),
            nets: Vec::new(),
            total_power,
            area_luts,
            delta: None,
        }
    }

    /// Fill [`PowerReport::delta`] against `baseline`.
    pub fn with_baseline(mut self, baseline: &PowerReport) -> Result<Self, PowerError> {
        self.delta = Some(compare_reports(baseline, &self)?);
        Ok(self)
    }

    pub fn net(&self, name: &str) -> Option<&NetPower> {
        self.nets.iter().find(|n| n.net == name)
    }
}

pub fn estimate_dynamic_power(
    nl: &Netlist,
    profile: &ActivityProfile,
    cfg: &PowerConfig,
) -> Result<PowerReport, PowerError> {
    cfg.validate()?;
    profile.check_matches(nl)?;
    let dups: HashSet<NetId> = duplicated_driver_nets(nl).into_iter().collect();
    let v2f = cfg.supply_voltage * cfg.supply_voltage * cfg.clock_freq;
    let mut ids: Vec<NetId> = nl.net_ids().collect();
    ids.sort_by(|a, b| nl.net_name(*a).cmp(nl.net_name(*b)));
    let mut nets = Vec::with_capacity(ids.len());
    for id in ids {
        let name = nl.net_name(id);
        let alpha = profile.alpha(name).unwrap_or(0.0);
        let mut capacitance = net_capacitance(nl, id, cfg)?;
        if dups.contains(&id) {
            capacitance += cfg.c_dup_overhead;
        }
        nets.push(NetPower {
            net: name.to_string(),
            alpha,
            capacitance,
            power: alpha * capacitance * v2f,
        });
    }
    let total_power = nets.iter().map(|n| n.power).sum();
    Ok(PowerReport {
        name: nl.name().to_string(),
        nets,
        total_power,
        area_luts: nl.area_luts(),
        delta: None,
    })
}

/// `power_pct = 100 (base - opt) / base`, `area_pct = 100 (opt - base) / base`.
pub fn compare_reports(baseline: &PowerReport, optimized: &PowerReport) -> Result<Delta, PowerError> {
    if baseline.total_power <= 0.0 {
        return Err(PowerError::ZeroBaseline("power"));
    }
    let area_pct = match (baseline.area_luts, optimized.area_luts) {
        (0, 0) => 0.0,
        (0, _) => return Err(PowerError::ZeroBaseline("area")),
        (b, o) => 100.0 * (o as f64 - b as f64) / b as f64,
    };
    Ok(Delta {
        power_pct: 100.0 * (baseline.total_power - optimized.total_power) / baseline.total_power,
        area_pct,
    })
}

/// Table text: `name, power_W, area_luts, dP_pct, dA_pct`, one row per report,
/// then per-net sections when `verbose`.
pub fn write_power_table(reports: &[PowerReport], verbose: bool) -> String {
    let mut s = String::from("# name, power_W, area_luts, dP_pct, dA_pct\n");
    for r in reports {
        let (dp, da) = match r.delta {
            Some(d) => (format!("{:.1}", d.power_pct), format!("{:.1}", d.area_pct)),
            None => ("-".to_string(), "-".to_string()),
        };
        writeln!(s, "{}, {:.6e}, {}, {dp}, {da}", r.name, r.total_power, r.area_luts).unwrap();
    }
    if verbose {
        for r in reports {
            writeln!(s, "\n## nets {}\n# net, alpha, C_F, power_W", r.name).unwrap();
            for n in &r.nets {
                writeln!(s, "{}, {:.6}, {:.6e}, {:.6e}", n.net, n.alpha, n.capacitance, n.power).unwrap();
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blif::parse_blif;

    fn fanout_net(k: usize) -> Netlist {
        let mut doc = String::from(".model f\n.inputs a\n.outputs");
        for i in 0..k {
            doc += &format!(" o{i}");
        }
        doc += "\n.names a n\n1 1\n";
        for i in 0..k {
            doc += &format!(".names n o{i}\n1 1\n");
        }
        doc += ".end\n";
        parse_blif(&doc).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-30)
    }

    #[test]
    fn capacitance_formula() {
        let cfg = PowerConfig::default();
        let nl = fanout_net(4);
        let n = nl.find_net("n").unwrap();
        assert!(close(net_capacitance(&nl, n, &cfg).unwrap(), 1.3e-14));
        let o = nl.find_net("o0").unwrap();
        assert!(close(net_capacitance(&nl, o, &cfg).unwrap(), 7e-15));
        let nl = fanout_net(0);
        let n = nl.find_net("n").unwrap();
        assert!(close(net_capacitance(&nl, n, &cfg).unwrap(), 5e-15));
        let nl = fanout_net(2);
        let n = nl.find_net("n").unwrap();
        assert!(close(2.0 * net_capacitance(&nl, n, &cfg).unwrap(), 1.8e-14));
    }

    #[test]
    fn per_net_power_arithmetic() {
        let cfg = PowerConfig::default();
        let p: f64 = 0.5 * 2e-12 * cfg.supply_voltage.powi(2) * cfg.clock_freq;
        assert!(close(p, 1e-4));
    }

    #[test]
    fn zero_activity_zero_power() {
        let nl = fanout_net(3);
        let counters = nl.net_ids().map(|n| (nl.net_name(n).to_string(), 0)).collect();
        let prof = ActivityProfile::from_parts(100, counters, 0, vec![]).unwrap();
        let r = estimate_dynamic_power(&nl, &prof, &PowerConfig::default()).unwrap();
        assert_eq!(r.total_power, 0.0);
        assert_eq!(r.area_luts, 4);
    }

    #[test]
    fn mismatched_profile_rejected() {
        let nl = fanout_net(1);
        let prof = ActivityProfile::from_parts(10, [("zz".to_string(), 1)].into_iter().collect(), 0, vec![]).unwrap();
        assert!(matches!(
            estimate_dynamic_power(&nl, &prof, &PowerConfig::default()),
            Err(PowerError::Profile(ProfileError::NetMismatch { .. }))
        ));
    }

    #[test]
    fn config_validation() {
        let cfg = PowerConfig {
            c_base: 0.0,
            ..Default::default()
        };
        assert_eq!(cfg.validate(), Err(PowerError::BadConfig("c_base")));
        assert!(PowerConfig::wire_dominated().validate().is_ok());
    }

    #[test]
    fn compare_identical_and_zero() {
        let a = PowerReport::summary("x", 0.5, 10);
        let d = compare_reports(&a, &a).unwrap();
        assert_eq!((d.power_pct, d.area_pct), (0.0, 0.0));
        let z = PowerReport::summary("z", 0.0, 10);
        assert_eq!(compare_reports(&z, &a), Err(PowerError::ZeroBaseline("power")));
    }

    #[test]
    fn duplicates_detected_structurally() {
        let nl = parse_blif(
            ".model d\n.inputs a b\n.outputs x y z\n.names a b x\n11 1\n.names a b y\n11 1\n.names a b z\n01 1\n.end\n",
        )
        .unwrap();
        assert_eq!(duplicated_driver_nets(&nl), vec![nl.find_net("y").unwrap()]);
    }

    #[test]
    fn table_format() {
        let base = PowerReport::summary("adder", 0.428, 102);
        let opt = PowerReport::summary("adder/opt", 0.415, 119).with_baseline(&base).unwrap();
        let text = write_power_table(&[base, opt], false);
        assert_eq!(
            text,
            "# name, power_W, area_luts, dP_pct, dA_pct\nadder, 4.280000e-1, 102, -, -\nadder/opt, 4.150000e-1, 119, 3.0, 16.7\n"
        );
    }
}
