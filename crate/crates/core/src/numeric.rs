//! Fixed-step RK4 on float-lowered fields and first-integral drift.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::algebra::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::vectorfield::VectorField;

/// A polynomial lowered to floats: (coefficient, [(variable index, exponent)]).
#[derive(Clone, Debug)]
struct FloatPoly(Vec<(f64, Vec<(usize, i32)>)>);

impl FloatPoly {
    fn lower(p: &Poly, index: &HashMap<Symbol, usize>) -> Result<Self> {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let mut powers = Vec::new();
            for &(s, e) in m.pairs() {
                let i = *index
                    .get(&s)
                    .ok_or_else(|| Error::UnspecializedParameter(s.to_string()))?;
                powers.push((i, e as i32));
            }
            terms.push((c.to_f64().unwrap_or(f64::NAN), powers));
        }
        Ok(FloatPoly(terms))
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|(c, pw)| pw.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

/// A field whose components can be evaluated in floating point.
#[derive(Clone, Debug)]
pub struct FloatField {
    components: Vec<(FloatPoly, FloatPoly)>,
}

impl FloatField {
    /// Fails with UnspecializedParameter if anything but the variables remains symbolic.
    pub fn lower(s: &VectorField) -> Result<Self> {
        if !s.diff_params().is_empty() {
            return Err(Error::UnspecializedParameter(s.diff_params()[0].name.to_string()));
        }
        let index: HashMap<Symbol, usize> = s.vars().iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let components = s
            .components()
            .iter()
            .map(|c: &RatFunc| Ok((FloatPoly::lower(c.numer(), &index)?, FloatPoly::lower(c.denom(), &index)?)))
            .collect::<Result<_>>()?;
        Ok(FloatField { components })
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    /// The velocity, or None at a pole.
    pub fn eval(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(x.len());
        for (n, d) in &self.components {
            let den = d.eval(x);
            if den == 0.0 || !den.is_finite() {
                return None;
            }
            out.push(n.eval(x) / den);
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StopReason {
    Completed,
    /// A component's denominator vanished at this time.
    Pole(f64),
    /// The state stopped being finite at this time.
    NonFinite(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: f64,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("a trajectory holds its start")
    }

    pub fn completed(&self) -> bool {
        self.stop == StopReason::Completed
    }
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Classical RK4 from t = 0 to `t_end` with a uniform step.
pub fn integrate_rk4(s: &VectorField, start: &[f64], t_end: f64, step: f64) -> Result<Trajectory> {
    let field = FloatField::lower(s)?;
    integrate_lowered(&field, start, t_end, step)
}

pub fn integrate_lowered(field: &FloatField, start: &[f64], t_end: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument("need step > 0 and t_end >= 0".into()));
    }
    if start.len() != field.dimension() {
        return Err(Error::InvalidArgument(format!(
            "start has {} coordinates, field has {}",
            start.len(),
            field.dimension()
        )));
    }
    if start.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState(0.0));
    }
    if field.eval(start).is_none() {
        return Err(Error::PoleEncountered(0.0));
    }
    let steps = (t_end / step).round() as usize;
    let mut times = vec![0.0];
    let mut states = vec![start.to_vec()];
    let mut stop = StopReason::Completed;
    for k in 0..steps {
        let t = k as f64 * step;
        let x = states.last().expect("nonempty");
        let next = (|| {
            let k1 = field.eval(x)?;
            let k2 = field.eval(&axpy(x, step / 2.0, &k1))?;
            let k3 = field.eval(&axpy(x, step / 2.0, &k2))?;
            let k4 = field.eval(&axpy(x, step, &k3))?;
            Some(
                (0..x.len())
                    .map(|i| x[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect::<Vec<_>>(),
            )
        })();
        match next {
            None => {
                stop = StopReason::Pole(t);
                break;
            }
            Some(v) if v.iter().any(|c| !c.is_finite()) => {
                stop = StopReason::NonFinite(t + step);
                break;
            }
            Some(v) => {
                times.push((k + 1) as f64 * step);
                states.push(v);
            }
        }
    }
    Ok(Trajectory {
        times,
        states,
        step,
        stop,
    })
}

/// Y − X + b·ln|Y| − d·ln|X|, constant along LV[1,b,1,d].
pub fn lv_first_integral(x: f64, y: f64, b: f64, d: f64) -> f64 {
    y - x + b * y.abs().ln() - d * x.abs().ln()
}

/// Largest deviation of the first integral from its starting value.
pub fn first_integral_drift(traj: &Trajectory, b: f64, d: f64) -> Result<f64> {
    let first = traj.states.first().ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))?;
    if first.len() != 2 {
        return Err(Error::InvalidArgument("drift needs a planar trajectory".into()));
    }
    let sx = first[0].signum();
    let sy = first[1].signum();
    if first[0] == 0.0 || first[1] == 0.0 {
        return Err(Error::SignChange("start lies on an axis".into()));
    }
    let f0 = lv_first_integral(first[0], first[1], b, d);
    let mut worst: f64 = 0.0;
    for (t, p) in traj.times.iter().zip(&traj.states) {
        if p[0] == 0.0 || p[1] == 0.0 || p[0].signum() != sx || p[1].signum() != sy {
            return Err(Error::SignChange(format!("the trajectory crosses an axis at t = {t}")));
        }
        worst = worst.max((lv_first_integral(p[0], p[1], b, d) - f0).abs());
    }
    Ok(worst)
}
