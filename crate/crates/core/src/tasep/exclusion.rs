use super::clocks::{BondClocks, BondDriven, ClockQueue};
use super::window::{Boundary, Occupancies, Window};

/// The exclusion process `η` with a jump counter per bond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionProcess {
    occ: Occupancies,
    /// `J_i`, indexed by `i − first bond`.
    currents: Vec<u64>,
    attempts: u64,
}

impl ExclusionProcess {
    pub fn new(occ: Occupancies) -> Self {
        let n = occ.window().bonds().count();
        ExclusionProcess {
            occ,
            currents: vec![0; n],
            attempts: 0,
        }
    }

    pub fn occupancies(&self) -> &Occupancies {
        &self.occ
    }

    pub fn into_occupancies(self) -> Occupancies {
        self.occ
    }

    pub fn window(&self) -> Window {
        self.occ.window()
    }

    /// Jumps across bond `i` so far; zero for bonds outside the window.
    pub fn current(&self, bond: i64) -> u64 {
        let first = *self.window().bonds().start();
        if self.window().bonds().contains(&bond) {
            self.currents[(bond - first) as usize]
        } else {
            0
        }
    }

    pub fn currents(&self) -> &[u64] {
        &self.currents
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }
}

impl BondDriven for ExclusionProcess {
    fn on_epoch(&mut self, bond: i64, _time: f64) {
        let w = self.window();
        if !w.bonds().contains(&bond) {
            return;
        }
        self.attempts += 1;
        let to = w.target(bond);
        if self.occ.get(bond) && !self.occ.get(to) {
            self.occ.set(bond, false);
            self.occ.set(to, true);
            self.currents[(bond - w.bonds().start()) as usize] += 1;
        }
    }
}

/// A running exclusion process together with its clocks.
pub struct Simulation {
    process: ExclusionProcess,
    queue: ClockQueue,
}

impl Simulation {
    pub fn new(occ: Occupancies, clocks: &BondClocks) -> Self {
        let queue = ClockQueue::new(clocks, occ.window().bonds());
        Simulation {
            process: ExclusionProcess::new(occ),
            queue,
        }
    }

    pub fn time(&self) -> f64 {
        self.queue.time()
    }

    pub fn run_until(&mut self, t: f64) {
        let p = &mut self.process;
        self.queue.advance_to(t, |bond, time| p.on_epoch(bond, time));
    }

    pub fn process(&self) -> &ExclusionProcess {
        &self.process
    }

    pub fn events(&self) -> u64 {
        self.queue.events()
    }
}

/// Runs the exclusion process to `horizon`; returns the final state and `J_i` per bond.
pub fn evolve(occ: Occupancies, clocks: &BondClocks, horizon: f64) -> (Occupancies, Vec<u64>) {
    let mut sim = Simulation::new(occ, clocks);
    sim.run_until(horizon.max(0.0));
    let ExclusionProcess { occ, currents, .. } = sim.process;
    (occ, currents)
}

/// Time of the first jump out of `site` for a lone particle, or `None` by `horizon`.
pub fn first_jump_time(window: Window, site: i64, clocks: &BondClocks, horizon: f64) -> Option<f64> {
    if window.boundary == Boundary::Closed && site == window.half_width {
        return None;
    }
    let occ = Occupancies::from_sites(window, &[site]).ok()?;
    let mut p = ExclusionProcess::new(occ);
    let mut q = ClockQueue::new(clocks, window.bonds());
    let mut hit = None;
    let mut t = 0.0;
    while hit.is_none() && t < horizon {
        t = (t + 1.0).min(horizon);
        q.advance_to(t, |bond, time| {
            if hit.is_none() {
                p.on_epoch(bond, time);
                if !p.occupancies().get(site) {
                    hit = Some(time);
                }
            }
        });
    }
    hit
}
