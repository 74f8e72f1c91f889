#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spingas/classical.hpp"

namespace spingas {

// Shortest decimal that round-trips the exact double; locale-independent.
std::string format_double(double v);

// Two-column scalar series: header "step,<value_column>".
void write_series_csv(const std::filesystem::path& path,
                      const std::string& value_column,
                      std::span<const std::int64_t> steps,
                      std::span<const double> values);

// Wide per-particle table: header "step,p_1,...,p_N".
void write_probs_csv(const std::filesystem::path& path,
                     std::span<const std::int64_t> steps,
                     std::span<const Eigen::VectorXd> probs);

// Square table with 1-based row/column labels: header "k,c_1,...,c_N".
void write_table_csv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& table);

// Binary snapshot: magic "SGSNAP01", uint64 rows, uint64 cols, then
// column-major (re, im) float64 pairs. Little-endian throughout.
void write_matrix_snapshot(const std::filesystem::path& path,
                           const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix_snapshot(const std::filesystem::path& path);

// Event-stream text format, one line per classical step:
//   t <step> : k1-k2 [k3-k4 ...]
// Particle indices are 1-based in the file; a step with no interacting
// pairs keeps its line so replay stays step-aligned.
std::string format_event_line(const InteractionEvent& ev);
InteractionEvent parse_event_line(const std::string& line, int particles,
                                  const std::string& origin, int line_no);

void write_event_log(const std::filesystem::path& path,
                     std::span<const InteractionEvent> events);
std::vector<InteractionEvent> read_event_log(
    const std::filesystem::path& path, int particles);

// Tees events from an inner source into a buffer (for --dump-events).
class RecordingSource final : public EventSource {
 public:
  explicit RecordingSource(EventSource& inner) : inner_(&inner) {}

  InteractionEvent next() override {
    InteractionEvent ev = inner_->next();
    events_.push_back(ev);
    return ev;
  }
  int particle_count() const override { return inner_->particle_count(); }
  const std::vector<InteractionEvent>& events() const { return events_; }

 private:
  EventSource* inner_;
  std::vector<InteractionEvent> events_;
};

// Replays a recorded stream (for --replay-events).
class ReplaySource final : public EventSource {
 public:
  ReplaySource(std::vector<InteractionEvent> events, int particles);

  InteractionEvent next() override;  // throws IoError once exhausted
  int particle_count() const override { return particles_; }

 private:
  std::vector<InteractionEvent> events_;
  std::size_t pos_ = 0;
  int particles_;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace spingas
