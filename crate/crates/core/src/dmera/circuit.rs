//! Gate-fabric circuits and their plain-text form.
//!
//! ```text
//! INIT 0 0
//! INIT 1 1
//! GATE 0 1 0.30000000000000000 -1.2000000000000000
//! ```
//! `INIT w b` fixes wire `w` to `|b>`; `GATE a b t0 t1` applies the gate with
//! `a` on the left leg. Blank lines and lines starting with `#` are skipped.

use super::fabric::{gate_fabric, Ancilla, GateFabricParams};
use crate::qsim::{GateApplication, MixedState, PureState};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitGate {
    pub wires: (usize, usize),
    pub params: GateFabricParams,
}

/// Product-state preparation followed by gate-fabric gates in time order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub num_wires: usize,
    pub inits: Vec<Ancilla>,
    pub gates: Vec<CircuitGate>,
}

impl Circuit {
    pub fn new(inits: Vec<Ancilla>, gates: Vec<CircuitGate>) -> Result<Self> {
        let num_wires = inits.len();
        for g in &gates {
            for w in [g.wires.0, g.wires.1] {
                if w >= num_wires {
                    return Err(Error::WireOutOfRange { wire: w, num_wires });
                }
            }
            if g.wires.0 == g.wires.1 {
                return Err(Error::RepeatedWire(g.wires.0));
            }
        }
        Ok(Self { num_wires, inits, gates })
    }

    pub fn initial_state(&self) -> PureState {
        let bits: Vec<u8> = self.inits.iter().map(|a| a.bit()).collect();
        PureState::from_bits(&bits)
    }

    pub fn applications(&self) -> impl Iterator<Item = (usize, usize, crate::qsim::Mat4)> + '_ {
        self.gates.iter().map(|g| (g.wires.0, g.wires.1, gate_fabric(g.params)))
    }

    pub fn simulate(&self) -> PureState {
        let mut psi = self.initial_state();
        for (a, b, u) in self.applications() {
            psi.apply_unchecked((a, b), &u);
        }
        psi
    }

    pub fn simulate_mixed(&self) -> MixedState {
        let mut rho = MixedState::from_pure(&self.initial_state());
        for (a, b, u) in self.applications() {
            rho.apply_unchecked((a, b), &u);
        }
        rho
    }

    pub fn gate_application(&self, index: usize) -> GateApplication {
        let g = &self.gates[index];
        GateApplication { wires: g.wires, unitary: gate_fabric(g.params) }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (w, a) in self.inits.iter().enumerate() {
            out.push_str(&format!("INIT {w} {}\n", a.bit()));
        }
        for g in &self.gates {
            out.push_str(&format!(
                "GATE {} {} {:.16e} {:.16e}\n",
                g.wires.0, g.wires.1, g.params.theta0, g.params.theta1
            ));
        }
        out
    }

    /// Every wire needs exactly one `INIT` line; wires are numbered densely.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut inits: Vec<Option<Ancilla>> = Vec::new();
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let int = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad wire index `{s}`")));
            let float = |s: &str| s.parse::<f64>().map_err(|_| err(&format!("bad angle `{s}`")));
            match fields[0] {
                "INIT" if fields.len() == 3 => {
                    let w = int(fields[1])?;
                    let a = match fields[2] {
                        "0" => Ancilla::Zero,
                        "1" => Ancilla::One,
                        other => return Err(err(&format!("init value must be 0 or 1, got `{other}`"))),
                    };
                    if inits.len() <= w {
                        inits.resize(w + 1, None);
                    }
                    if inits[w].replace(a).is_some() {
                        return Err(err(&format!("wire {w} initialized twice")));
                    }
                }
                "GATE" if fields.len() == 5 => {
                    let wires = (int(fields[1])?, int(fields[2])?);
                    let params = GateFabricParams::new(float(fields[3])?, float(fields[4])?);
                    if !params.theta0.is_finite() || !params.theta1.is_finite() {
                        return Err(err("angles must be finite"));
                    }
                    gates.push(CircuitGate { wires, params });
                }
                "INIT" | "GATE" => return Err(err("wrong number of fields")),
                other => return Err(err(&format!("unknown directive `{other}`"))),
            }
        }
        let inits = inits
            .into_iter()
            .enumerate()
            .map(|(w, a)| a.ok_or(Error::Parse { line: 0, msg: format!("wire {w} has no INIT line") }))
            .collect::<Result<Vec<_>>>()?;
        Circuit::new(inits, gates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        Circuit::new(
            vec![Ancilla::Zero, Ancilla::One, Ancilla::Zero],
            vec![
                CircuitGate { wires: (0, 1), params: GateFabricParams::new(0.1, -2.0 / 3.0) },
                CircuitGate { wires: (2, 1), params: GateFabricParams::new(std::f64::consts::PI, 1e-17) },
            ],
        )
        .unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let c = sample();
        let back = Circuit::from_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = Circuit::from_text("INIT 0 0\nINIT 1 0\nGATE 0 x 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = Circuit::from_text("INIT 0 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = Circuit::from_text("INIT 1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 0, .. }));
        assert!(matches!(Circuit::from_text("INIT 0 0\nGATE 0 3 0 0\n"), Err(Error::WireOutOfRange { .. })));
    }

    #[test]
    fn zero_angles_keep_the_product_state() {
        let mut c = sample();
        c.gates.iter_mut().for_each(|g| g.params = GateFabricParams::default());
        assert_eq!(c.simulate(), PureState::from_bits(&[0, 1, 0]));
    }
}
