#include "spingas/billiard.hpp"

#include <cmath>
#include <string>

#include "spingas/errors.hpp"

namespace spingas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContactTol = 1e-6;

}  // namespace

double BallState::kinetic_energy() const {
  double twice = 0.0;
  for (const auto& v : vel) twice += v.squaredNorm();
  return 0.5 * mass * twice;
}

void BallState::validate(double tol) const {
  const double lo = 0.5 * diameter;
  for (int i = 0; i < count(); ++i) {
    for (int ax = 0; ax < 3; ++ax) {
      if (pos[i][ax] < lo - tol || pos[i][ax] > box[ax] - lo + tol) {
        throw NumericError("ball " + std::to_string(i) +
                           " is outside the box on axis " +
                           std::to_string(ax));
      }
    }
    for (int j = i + 1; j < count(); ++j) {
      const double dist = (pos[i] - pos[j]).norm();
      if (dist < diameter - tol) {
        throw NumericError("balls " + std::to_string(i) + " and " +
                           std::to_string(j) + " overlap, distance " +
                           std::to_string(dist));
      }
    }
  }
}

BallState billiard_init(int n, double diameter, const Eigen::Vector3d& box,
                        double mass, double velocity_sigma, RngStream& rng,
                        int attempt_cap) {
  if (n < 1) throw InvalidInputError("billiard_init needs n >= 1");
  if (diameter <= 0.0 || mass <= 0.0 || velocity_sigma < 0.0) {
    throw InvalidInputError("billiard_init: nonpositive diameter/mass/sigma");
  }
  for (int ax = 0; ax < 3; ++ax) {
    if (box[ax] < diameter) {
      throw InvalidInputError("box does not admit a ball on axis " +
                              std::to_string(ax));
    }
  }

  BallState s;
  s.diameter = diameter;
  s.mass = mass;
  s.box = box;
  s.pos.reserve(n);
  s.vel.reserve(n);

  const double lo = 0.5 * diameter;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < attempt_cap; ++attempt) {
      Eigen::Vector3d p;
      for (int ax = 0; ax < 3; ++ax) {
        p[ax] = lo + rng.next_double() * (box[ax] - diameter);
      }
      bool overlaps = false;
      for (const auto& q : s.pos) {
        if ((p - q).squaredNorm() < diameter * diameter) {
          overlaps = true;
          break;
        }
      }
      if (!overlaps) {
        s.pos.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw PackingError("could not place ball " + std::to_string(i) +
                         " within " + std::to_string(attempt_cap) +
                         " attempts");
    }
  }
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d v;
    for (int ax = 0; ax < 3; ++ax) v[ax] = rng.next_normal(velocity_sigma);
    s.vel.push_back(v);
  }
  return s;
}

double pair_contact_time(const BallState& s, int i, int j) {
  const Eigen::Vector3d dr = s.pos[j] - s.pos[i];
  const Eigen::Vector3d dv = s.vel[j] - s.vel[i];
  const double b = dr.dot(dv);
  if (b >= 0.0) return kInf;  // receding or tangent
  const double a = dv.squaredNorm();
  const double c = dr.squaredNorm() - s.diameter * s.diameter;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return kInf;
  const double t = (-b - std::sqrt(disc)) / a;
  return t < 0.0 ? 0.0 : t;  // tiny negatives: already at contact
}

std::pair<double, int> wall_contact_time(const BallState& s, int i) {
  const double lo = 0.5 * s.diameter;
  double best = kInf;
  int best_axis = -1;
  for (int ax = 0; ax < 3; ++ax) {
    const double v = s.vel[i][ax];
    double t = kInf;
    if (v > 0.0) {
      t = (s.box[ax] - lo - s.pos[i][ax]) / v;
    } else if (v < 0.0) {
      t = (lo - s.pos[i][ax]) / v;
    }
    if (t < 0.0) t = 0.0;
    if (t < best) {
      best = t;
      best_axis = ax;
    }
  }
  return {best, best_axis};
}

BilliardEvent billiard_next_event(const BallState& s) {
  BilliardEvent best;
  // Pairs first so that exact ties prefer pair events.
  for (int i = 0; i < s.count(); ++i) {
    for (int j = i + 1; j < s.count(); ++j) {
      const double t = pair_contact_time(s, i, j);
      if (t < best.dt) {
        best = {BilliardEvent::Kind::Pair, t, i, j, -1};
      }
    }
  }
  for (int i = 0; i < s.count(); ++i) {
    const auto [t, axis] = wall_contact_time(s, i);
    if (t < best.dt) {
      best = {BilliardEvent::Kind::Wall, t, i, -1, axis};
    }
  }
  if (!(best.dt < kInf)) {
    throw NumericError("billiard is static: no future event exists");
  }
  return best;
}

void billiard_advance(BallState& s, double dt) {
  if (dt < 0.0) throw InvalidInputError("billiard_advance: negative dt");
  for (int i = 0; i < s.count(); ++i) s.pos[i] += s.vel[i] * dt;
}

void billiard_resolve(BallState& s, const BilliardEvent& ev) {
  if (ev.kind == BilliardEvent::Kind::Wall) {
    if (ev.a < 0 || ev.a >= s.count() || ev.axis < 0 || ev.axis > 2) {
      throw InvalidInputError("billiard_resolve: bad wall event");
    }
    const double lo = 0.5 * s.diameter;
    const double hi = s.box[ev.axis] - lo;
    double plane;
    if (std::abs(s.pos[ev.a][ev.axis] - lo) <= kContactTol) {
      plane = lo;
    } else if (std::abs(s.pos[ev.a][ev.axis] - hi) <= kContactTol) {
      plane = hi;
    } else {
      throw NumericError("wall event resolved away from any wall plane");
    }
    s.pos[ev.a][ev.axis] = plane;
    s.vel[ev.a][ev.axis] = -s.vel[ev.a][ev.axis];
    return;
  }

  if (ev.a < 0 || ev.b < 0 || ev.a == ev.b || ev.a >= s.count() ||
      ev.b >= s.count()) {
    throw InvalidInputError("billiard_resolve: bad pair event");
  }
  const Eigen::Vector3d n = s.pos[ev.b] - s.pos[ev.a];
  const double dist = n.norm();
  if (std::abs(dist - s.diameter) > kContactTol) {
    throw NumericError("pair event resolved at distance " +
                       std::to_string(dist) + ", contact expected at " +
                       std::to_string(s.diameter));
  }
  const Eigen::Vector3d nhat = n / dist;
  // Equal masses: exchange the normal velocity components.
  const double closing = (s.vel[ev.a] - s.vel[ev.b]).dot(nhat);
  s.vel[ev.a] -= closing * nhat;
  s.vel[ev.b] += closing * nhat;
}

BilliardSource::BilliardSource(BallState s) : state_(std::move(s)) {
  if (state_.count() < 2) {
    throw InvalidInputError("billiard source needs at least 2 balls");
  }
  initial_energy_ = state_.kinetic_energy();
  candidates_.resize(state_.count());
  for (int i = 0; i < state_.count(); ++i) refresh_ball(i);
}

void BilliardSource::refresh_ball(int i) {
  Candidate c;
  const auto [twall, axis] = wall_contact_time(state_, i);
  if (twall < kInf) {
    c.time = time_ + twall;
    c.partner = -1;
    c.axis = axis;
  }
  for (int j = 0; j < state_.count(); ++j) {
    if (j == i) continue;
    const double t = pair_contact_time(state_, i, j);
    if (t == kInf) continue;
    const double abs_t = time_ + t;
    if (abs_t < c.time || (abs_t == c.time && c.partner == -1)) {
      c = {abs_t, j, -1};
    }
  }
  candidates_[i] = c;
}

void BilliardSource::refresh_against_all(int i) {
  refresh_ball(i);
  // Ball i's velocity changed; a pair (i, j) may now precede j's candidate.
  for (int j = 0; j < state_.count(); ++j) {
    if (j == i) continue;
    const double t = pair_contact_time(state_, i, j);
    if (t == kInf) continue;
    const double abs_t = time_ + t;
    if (abs_t < candidates_[j].time ||
        (abs_t == candidates_[j].time && candidates_[j].partner == -1)) {
      candidates_[j] = {abs_t, i, -1};
    }
  }
}

BilliardEvent BilliardSource::pop_next() {
  int best = -1;
  for (int i = 0; i < state_.count(); ++i) {
    const Candidate& c = candidates_[i];
    if (c.time == kInf) continue;
    if (best == -1) {
      best = i;
      continue;
    }
    const Candidate& cb = candidates_[best];
    if (c.time < cb.time ||
        (c.time == cb.time && c.partner >= 0 && cb.partner == -1)) {
      best = i;
    }
  }
  if (best == -1) {
    throw NumericError("billiard is static: no future event exists");
  }
  const Candidate& c = candidates_[best];
  BilliardEvent ev;
  ev.dt = c.time - time_;
  if (ev.dt < 0.0) ev.dt = 0.0;
  if (c.partner >= 0) {
    ev.kind = BilliardEvent::Kind::Pair;
    ev.a = std::min(best, c.partner);
    ev.b = std::max(best, c.partner);
  } else {
    ev.kind = BilliardEvent::Kind::Wall;
    ev.a = best;
    ev.axis = c.axis;
  }
  return ev;
}

InteractionEvent BilliardSource::next() {
  for (;;) {
    const BilliardEvent ev = pop_next();
    billiard_advance(state_, ev.dt);
    time_ += ev.dt;
    billiard_resolve(state_, ev);

    if (initial_energy_ > 0.0) {
      const double drift =
          std::abs(state_.kinetic_energy() - initial_energy_) /
          initial_energy_;
      if (drift > max_energy_drift_) max_energy_drift_ = drift;
    }

    if (ev.kind == BilliardEvent::Kind::Pair) {
      // Candidates that referenced a or b are stale now.
      for (int k = 0; k < state_.count(); ++k) {
        if (k == ev.a || k == ev.b) continue;
        if (candidates_[k].partner == ev.a || candidates_[k].partner == ev.b) {
          refresh_ball(k);
        }
      }
      refresh_against_all(ev.a);
      refresh_against_all(ev.b);
      return InteractionEvent::make(step_++, {{ev.a, ev.b}});
    }

    ++wall_events_;
    for (int k = 0; k < state_.count(); ++k) {
      if (k == ev.a) continue;
      if (candidates_[k].partner == ev.a) refresh_ball(k);
    }
    refresh_against_all(ev.a);
  }
}

}  // namespace spingas
