#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "spingas/classical.hpp"
#include "spingas/rng.hpp"

namespace spingas {

// Hard spheres in a rectangular box with reflecting walls. Equal masses;
// free flight between events.
struct BallState {
  double diameter = 1.0;
  double mass = 1.0;
  Eigen::Vector3d box = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> pos;
  std::vector<Eigen::Vector3d> vel;

  int count() const { return static_cast<int>(pos.size()); }
  double kinetic_energy() const;

  // No overlaps (within tol) and all centers inside the shrunk box.
  void validate(double tol = 1e-9) const;
};

// Centers uniform in [d/2, box - d/2] per axis, resampled on overlap with at
// most `attempt_cap` attempts per ball; velocity components i.i.d. normal
// with standard deviation velocity_sigma (Boltzmann at fixed temperature).
BallState billiard_init(int n, double diameter, const Eigen::Vector3d& box,
                        double mass, double velocity_sigma, RngStream& rng,
                        int attempt_cap = 10000);

struct BilliardEvent {
  enum class Kind { Wall, Pair };
  Kind kind = Kind::Wall;
  double dt = std::numeric_limits<double>::infinity();
  int a = -1;     // ball index
  int b = -1;     // second ball (pair events)
  int axis = -1;  // wall axis (wall events)
};

// Earliest future event from the current state, full O(n^2) scan.
// Simultaneous events break ties pair-before-wall, then lowest indices.
// Throws NumericError if nothing will ever happen (all velocities zero).
BilliardEvent billiard_next_event(const BallState& s);

// Free flight for dt.
void billiard_advance(BallState& s, double dt);

// Resolve an event whose time has already been advanced to. Wall: reflect
// the normal velocity component (position snapped onto the wall plane).
// Pair: exchange the velocity components along the center line (equal
// masses). Throws NumericError if the geometry does not match the event
// within 1e-6.
void billiard_resolve(BallState& s, const BilliardEvent& ev);

// Event-driven loop emitting one InteractionEvent per pair collision; wall
// bounces advance time silently. Keeps per-ball candidate events so that an
// event only triggers O(n) recomputation instead of the full O(n^2) scan;
// equivalence with billiard_next_event is covered by tests.
class BilliardSource final : public EventSource {
 public:
  explicit BilliardSource(BallState s);

  InteractionEvent next() override;
  int particle_count() const override { return state_.count(); }

  const BallState& state() const { return state_; }
  std::int64_t wall_events() const { return wall_events_; }
  double time() const { return time_; }
  // max |KE(t) - KE(0)| / KE(0) seen at event boundaries
  double max_energy_drift() const { return max_energy_drift_; }

 private:
  struct Candidate {
    double time = std::numeric_limits<double>::infinity();  // absolute
    int partner = -1;  // pair partner, or -1 for wall
    int axis = -1;
  };

  void refresh_ball(int i);
  void refresh_against_all(int i);
  BilliardEvent pop_next();

  BallState state_;
  std::vector<Candidate> candidates_;
  double time_ = 0.0;
  std::int64_t step_ = 0;
  std::int64_t wall_events_ = 0;
  double initial_energy_ = 0.0;
  double max_energy_drift_ = 0.0;
};

// Time to contact of balls i and j (relative), or +inf. Collision requires
// approach (relative position dot relative velocity < 0).
double pair_contact_time(const BallState& s, int i, int j);

// Earliest wall crossing for ball i: (relative time, axis), or +inf.
std::pair<double, int> wall_contact_time(const BallState& s, int i);

}  // namespace spingas
