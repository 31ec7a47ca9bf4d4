//! Named scenarios reproducing the data behind each figure.
//!
//! Time axes are not given with the figures; every time-resolved preset uses
//! lambda t in [0, 50]. Curves drawn against N_s sample N_s in [0, 10] at
//! steps of 0.25.

use crate::config::{Kind, OutputKind, QMode, ScenarioConfig};

pub const PRESET_NAMES: [&str; 17] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "fig12", "fig13", "fig14", "fig15", "fig16", "fig17",
];

const FIGURE_NS: [f64; 6] = [0.0, 1.0, 2.0, 5.0, 8.0, 10.0];
const FIXED_Q: f64 = 0.8;

fn ns_sweep() -> Vec<f64> {
    (0..=40).map(|k| k as f64 * 0.25).collect()
}

fn figure(kind: Kind, n_c: f64, outputs: Vec<OutputKind>) -> ScenarioConfig {
    ScenarioConfig {
        kind,
        n_c,
        n_s_list: FIGURE_NS.to_vec(),
        q_mode: if n_c == 20.0 {
            QMode::Derived
        } else {
            QMode::Fixed(FIXED_Q)
        },
        outputs,
        ..Default::default()
    }
}

fn sweep(n_c: f64, output: OutputKind) -> ScenarioConfig {
    ScenarioConfig {
        kind: Kind::Mscs,
        n_c,
        n_s_list: ns_sweep(),
        q_mode: QMode::Fixed(FIXED_Q),
        outputs: vec![output],
        ..Default::default()
    }
}

/// Scenarios for a preset, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<Vec<ScenarioConfig>> {
    use Kind::{Mscs, Pscs};
    use OutputKind::*;
    let one = |c: ScenarioConfig| Some(vec![c]);
    match name {
        // N_c = 20, q derived from N_s
        "fig1" => one(figure(Pscs, 20.0, vec![Pcd])),
        "fig2" => one(figure(Mscs, 20.0, vec![Pcd, Qweight])),
        "fig3" => one(figure(Pscs, 20.0, vec![Inversion])),
        "fig4" => one(figure(Mscs, 20.0, vec![Inversion])),
        "fig5" => one(figure(Pscs, 20.0, vec![Negativity])),
        "fig6" => one(figure(Mscs, 20.0, vec![Negativity])),
        // N_c = 10, q = 0.8
        "fig7" => one(figure(Pscs, 10.0, vec![Pcd])),
        "fig8" => one(figure(Mscs, 10.0, vec![Pcd])),
        "fig9" => one(figure(Pscs, 10.0, vec![Inversion])),
        "fig10" => one(figure(Mscs, 10.0, vec![Inversion])),
        "fig11" => one(figure(Pscs, 10.0, vec![Negativity])),
        "fig12" => one(figure(Mscs, 10.0, vec![Negativity])),
        // both variances and their product share one table
        "fig13" | "fig14" | "fig15" => one(sweep(10.0, Quadratures)),
        "fig16" => Some(
            [10.0, 20.0, 30.0]
                .iter()
                .map(|&n_c| sweep(n_c, MandelQ))
                .collect(),
        ),
        "fig17" => one(ScenarioConfig {
            kind: Mscs,
            n_c: 10.0,
            n_s_list: vec![2.0],
            q_mode: QMode::Fixed(FIXED_Q),
            outputs: vec![Wigner],
            ..Default::default()
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_a_valid_preset() {
        for name in PRESET_NAMES {
            let configs = preset(name).unwrap_or_else(|| panic!("{name}"));
            for c in configs {
                c.validate().unwrap();
            }
        }
        assert!(preset("fig18").is_none());
    }

    #[test]
    fn regimes() {
        assert_eq!(preset("fig2").unwrap()[0].q_mode, QMode::Derived);
        assert_eq!(preset("fig8").unwrap()[0].q_mode, QMode::Fixed(0.8));
        let fig16 = preset("fig16").unwrap();
        assert_eq!(
            fig16.iter().map(|c| c.n_c).collect::<Vec<_>>(),
            [10.0, 20.0, 30.0]
        );
        assert_eq!(fig16[0].n_s_list.len(), 41);
        assert_eq!(preset("fig4").unwrap()[0].time_max, 50.0);
    }
}
