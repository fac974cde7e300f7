//! Kinematic stand-in for the external vehicle simulator, plus the clock
//! abstraction that decouples simulated time from wall time.

use super::bus::ControlCommand;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveMode {
    Stopped,
    Following,
}

/// Constant-speed point vehicle tracking the distance left on its route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleSim {
    pub distance_remaining: f64,
    pub speed: f64,
    pub mode: DriveMode,
}

impl VehicleSim {
    /// Starts at the route head, following its trajectory.
    pub fn new(route_length: f64, speed: f64) -> Self {
        VehicleSim {
            distance_remaining: route_length,
            speed,
            mode: DriveMode::Following,
        }
    }

    pub fn apply_control(&mut self, command: ControlCommand) {
        self.mode = match command {
            ControlCommand::Stop => DriveMode::Stopped,
            ControlCommand::FollowTrajectory => DriveMode::Following,
        };
    }

    /// Advances `dt` seconds: progress only while following, never below
    /// zero distance.
    pub fn tick(&mut self, dt: f64) {
        if self.mode == DriveMode::Following {
            self.distance_remaining = (self.distance_remaining - self.speed * dt).max(0.0);
        }
    }

    pub fn arrived(&self) -> bool {
        self.distance_remaining <= 0.0
    }
}

/// Pacing hook for the mission loop. Simulated time always advances in
/// fixed control periods; an implementation may wait some wall-clock
/// fraction of `sim_dt` (real-time or scaled-down), but mission outcomes
/// never depend on it.
pub trait MissionClock {
    fn wait(&mut self, sim_dt: f64);
}

/// Runs the simulation as fast as the host allows.
#[derive(Debug, Default, Clone, Copy)]
pub struct InstantClock;

impl MissionClock for InstantClock {
    fn wait(&mut self, _sim_dt: f64) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn following_advances_linearly() {
        let mut v = VehicleSim::new(100.0, 2.0);
        v.tick(1.0);
        assert_eq!(v.distance_remaining, 98.0);
    }

    #[test]
    fn stopped_does_not_move() {
        let mut v = VehicleSim::new(100.0, 2.0);
        v.apply_control(ControlCommand::Stop);
        v.tick(5.0);
        assert_eq!(v.distance_remaining, 100.0);
        v.apply_control(ControlCommand::FollowTrajectory);
        v.tick(5.0);
        assert_eq!(v.distance_remaining, 90.0);
    }

    #[test]
    fn distance_clamps_at_zero() {
        let mut v = VehicleSim::new(1.0, 2.0);
        v.tick(10.0);
        assert_eq!(v.distance_remaining, 0.0);
        assert!(v.arrived());
    }
}
