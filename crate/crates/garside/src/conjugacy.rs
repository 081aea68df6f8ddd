//! Cycling, decycling and reduction to the super summit set.

use std::collections::HashSet;

use thiserror::Error;

use crate::braid::Braid;
use crate::simple::SimpleBraid;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclingError {
    #[error("cycling is undefined for braids of canonical length zero")]
    ZeroLength,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SummitError {
    #[error("summit reduction exceeded its step budget ({steps} steps)")]
    BudgetExceeded { steps: usize },
}

/// Step budget for iterated cycling and decycling.
#[derive(Clone, Copy, Debug)]
pub struct SummitBudget {
    pub max_steps: usize,
}

impl Default for SummitBudget {
    fn default() -> Self {
        SummitBudget { max_steps: 100_000 }
    }
}

/// Cycling moves the (twisted) first factor to the end:
/// `c(delta^k x_1 .. x_l) = delta^k x_2 .. x_l tau^k(x_1)`, a conjugate by
/// `tau^-k(x_1)`. Returns the result and that conjugator.
pub fn cycling(x: &Braid) -> Result<(Braid, SimpleBraid), CyclingError> {
    if x.is_empty() {
        return Err(CyclingError::ZeroLength);
    }
    let k = x.inf();
    let first = x.factors()[0].clone();
    let twisted = if k.rem_euclid(2) == 1 { first.tau() } else { first.clone() };
    let mut factors: Vec<SimpleBraid> = x.factors()[1..].to_vec();
    factors.push(twisted.clone());
    let result = Braid::from_parts(x.n(), k, factors);
    // tau is an involution, so tau^-k(x_1) = tau^k(x_1).
    Ok((result, twisted))
}

/// Decycling moves the last factor to the front:
/// `d(delta^k x_1 .. x_l) = delta^k tau^k(x_l) x_1 .. x_{l-1}`, a conjugate by
/// `delta^k x_1 .. x_{l-1}`. Returns the result and that conjugator.
pub fn decycling(x: &Braid) -> Result<(Braid, Braid), CyclingError> {
    if x.is_empty() {
        return Err(CyclingError::ZeroLength);
    }
    let k = x.inf();
    let last = x.factors().last().unwrap().clone();
    let twisted = if k.rem_euclid(2) == 1 { last.tau() } else { last.clone() };
    let mut factors = vec![twisted];
    factors.extend_from_slice(&x.factors()[..x.len() - 1]);
    let result = Braid::from_parts(x.n(), k, factors);
    let conjugator = Braid::from_parts(x.n(), k, x.factors()[..x.len() - 1].to_vec());
    Ok((result, conjugator))
}

/// Witness that `representative = conjugator^-1 * input * conjugator` lies in
/// the super summit set.
#[derive(Clone, Debug)]
pub struct SummitCertificate {
    pub representative: Braid,
    pub conjugator: Braid,
}

impl SummitCertificate {
    pub fn inf(&self) -> i64 {
        self.representative.inf()
    }

    pub fn sup(&self) -> i64 {
        self.representative.sup()
    }
}

/// Reduces `x` to a super summit element by iterated cycling (to raise the
/// infimum) and decycling (to lower the supremum). Recurrence of an exact
/// braid value within a phase certifies that the phase can improve no more.
pub fn to_super_summit(x: &Braid, budget: SummitBudget) -> Result<SummitCertificate, SummitError> {
    let mut current = x.clone();
    let mut conjugator = Braid::identity(x.n());
    let mut steps = 0usize;
    let step = |steps: &mut usize| -> Result<(), SummitError> {
        *steps += 1;
        if *steps > budget.max_steps {
            return Err(SummitError::BudgetExceeded { steps: *steps });
        }
        Ok(())
    };

    loop {
        let mut improved = false;

        // Cycling phase: raise inf until the trajectory revisits a value.
        'cycle: loop {
            if current.is_empty() {
                break;
            }
            let target_inf = current.inf();
            let mut seen: HashSet<String> = HashSet::new();
            let mut probe = current.clone();
            let mut probe_conj = Braid::identity(x.n());
            seen.insert(probe.key());
            loop {
                step(&mut steps)?;
                let (next, c) = cycling(&probe).expect("nonzero length");
                probe_conj = probe_conj.multiply(&Braid::from_simple(c));
                probe = next;
                if probe.inf() > target_inf {
                    current = probe;
                    conjugator = conjugator.multiply(&probe_conj);
                    improved = true;
                    continue 'cycle;
                }
                if !seen.insert(probe.key()) {
                    break 'cycle;
                }
            }
        }

        // Decycling phase: lower sup the same way.
        'decycle: loop {
            if current.is_empty() {
                break;
            }
            let target_sup = current.sup();
            let mut seen: HashSet<String> = HashSet::new();
            let mut probe = current.clone();
            let mut probe_conj = Braid::identity(x.n());
            seen.insert(probe.key());
            loop {
                step(&mut steps)?;
                let (next, c) = decycling(&probe).expect("nonzero length");
                probe_conj = probe_conj.multiply(&c);
                probe = next;
                if probe.sup() < target_sup {
                    current = probe;
                    conjugator = conjugator.multiply(&probe_conj);
                    improved = true;
                    continue 'decycle;
                }
                if !seen.insert(probe.key()) {
                    break 'decycle;
                }
            }
        }

        if !improved {
            break;
        }
    }

    debug_assert_eq!(x.conjugate_with(&conjugator), current);
    Ok(SummitCertificate { representative: current, conjugator })
}

/// Walks the cycling orbit of a super summit element until it closes, and
/// returns a rigid braid from the closed cycle together with the conjugator
/// into it, or `None` when the cycle contains no rigid element.
pub fn rigid_in_cycling_orbit(x: &Braid) -> Option<(Braid, Braid)> {
    if x.is_empty() {
        return None;
    }
    let mut trail: Vec<(String, Braid, Braid)> = Vec::new();
    let mut probe = x.clone();
    let mut conj = Braid::identity(x.n());
    loop {
        let key = probe.key();
        if let Some(pos) = trail.iter().position(|(k, _, _)| *k == key) {
            // The cycle is trail[pos..]; look for a rigid member.
            return trail[pos..]
                .iter()
                .find(|(_, b, _)| b.is_rigid())
                .map(|(_, b, c)| (b.clone(), c.clone()));
        }
        trail.push((key, probe.clone(), conj.clone()));
        let (next, c) = cycling(&probe).expect("nonzero length");
        probe = next;
        conj = conj.multiply(&Braid::from_simple(c));
    }
}
