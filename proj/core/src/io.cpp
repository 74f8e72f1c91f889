#include "spingas/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "spingas/errors.hpp"
#include "spingas/linalg.hpp"

namespace spingas {

namespace {

constexpr char kSnapshotMagic[8] = {'S', 'G', 'S', 'N', 'A', 'P', '0', '1'};

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  return is;
}

void finish_write(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_series_csv(const std::filesystem::path& path,
                      const std::string& value_column,
                      std::span<const std::int64_t> steps,
                      std::span<const double> values) {
  if (steps.size() != values.size()) {
    throw InvalidInputError("series length mismatch for " + path.string());
  }
  auto os = open_out(path, false);
  os << "step," << value_column << "\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    os << steps[i] << ',' << format_double(values[i]) << "\n";
  }
  finish_write(os, path);
}

void write_probs_csv(const std::filesystem::path& path,
                     std::span<const std::int64_t> steps,
                     std::span<const Eigen::VectorXd> probs) {
  if (steps.size() != probs.size()) {
    throw InvalidInputError("series length mismatch for " + path.string());
  }
  auto os = open_out(path, false);
  const Eigen::Index n = probs.empty() ? 0 : probs[0].size();
  os << "step";
  for (Eigen::Index k = 0; k < n; ++k) os << ",p_" << (k + 1);
  os << "\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (probs[i].size() != n) {
      throw InvalidInputError("ragged probability table for " + path.string());
    }
    os << steps[i];
    for (Eigen::Index k = 0; k < n; ++k) {
      os << ',' << format_double(probs[i][k]);
    }
    os << "\n";
  }
  finish_write(os, path);
}

void write_table_csv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& table) {
  if (table.rows() != table.cols()) {
    throw InvalidInputError("table must be square for " + path.string());
  }
  auto os = open_out(path, false);
  os << "k";
  for (Eigen::Index c = 0; c < table.cols(); ++c) os << ",c_" << (c + 1);
  os << "\n";
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    os << (r + 1);
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      os << ',' << format_double(table(r, c));
    }
    os << "\n";
  }
  finish_write(os, path);
}

void write_matrix_snapshot(const std::filesystem::path& path,
                           const Eigen::MatrixXcd& m) {
  auto os = open_out(path, true);
  os.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  os.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  os.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  // std::complex<double> is layout-compatible with double[2] = (re, im).
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  finish_write(os, path);
}

Eigen::MatrixXcd read_matrix_snapshot(const std::filesystem::path& path) {
  auto is = open_in(path, true);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw IoError(path.string() + " is not a snapshot file");
  }
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  is.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  is.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!is || rows == 0 || cols == 0 || rows > (1u << 20) ||
      cols > (1u << 20)) {
    throw IoError(path.string() + " has a malformed snapshot header");
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(cols));
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  if (!is) throw IoError(path.string() + " is truncated");
  return m;
}

std::string format_event_line(const InteractionEvent& ev) {
  std::string line = "t " + std::to_string(ev.step) + " :";
  for (const auto& [a, b] : ev.pairs) {
    line += ' ';
    line += std::to_string(a + 1);
    line += '-';
    line += std::to_string(b + 1);
  }
  return line;
}

InteractionEvent parse_event_line(const std::string& line, int particles,
                                  const std::string& origin, int line_no) {
  const auto fail = [&](const std::string& what) -> IoError {
    return IoError(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  std::istringstream is(line);
  std::string tok;
  if (!(is >> tok) || tok != "t") throw fail("expected 't <step> : ...'");
  std::int64_t step = 0;
  if (!(is >> step)) throw fail("missing step number");
  if (!(is >> tok) || tok != ":") throw fail("expected ':' after the step");

  std::vector<std::pair<int, int>> pairs;
  while (is >> tok) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size()) {
      throw fail("malformed pair '" + tok + "'");
    }
    int a = 0;
    int b = 0;
    const char* ab = tok.data();
    const char* ae = ab + dash;
    const char* bb = ab + dash + 1;
    const char* be = tok.data() + tok.size();
    if (std::from_chars(ab, ae, a).ptr != ae ||
        std::from_chars(bb, be, b).ptr != be) {
      throw fail("malformed pair '" + tok + "'");
    }
    if (a < 1 || b < 1 || a > particles || b > particles) {
      throw fail("particle index out of range in '" + tok + "'");
    }
    pairs.emplace_back(a - 1, b - 1);
  }
  try {
    return InteractionEvent::make(step, std::move(pairs));
  } catch (const Error& e) {
    throw fail(e.what());
  }
}

void write_event_log(const std::filesystem::path& path,
                     std::span<const InteractionEvent> events) {
  auto os = open_out(path, false);
  for (const InteractionEvent& ev : events) {
    os << format_event_line(ev) << "\n";
  }
  finish_write(os, path);
}

std::vector<InteractionEvent> read_event_log(
    const std::filesystem::path& path, int particles) {
  auto is = open_in(path, false);
  std::vector<InteractionEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    events.push_back(parse_event_line(line, particles, path.string(), line_no));
  }
  return events;
}

ReplaySource::ReplaySource(std::vector<InteractionEvent> events, int particles)
    : events_(std::move(events)), particles_(particles) {
  if (particles_ < 2) throw InvalidInputError("replay needs >= 2 particles");
}

InteractionEvent ReplaySource::next() {
  if (pos_ >= events_.size()) {
    throw IoError("event log exhausted before the requested horizon (" +
                  std::to_string(events_.size()) + " steps recorded)");
  }
  return events_[pos_++];
}

std::string read_text_file(const std::filesystem::path& path) {
  auto is = open_in(path, true);
  std::ostringstream ss;
  ss << is.rdbuf();
  if (!is && !is.eof()) throw IoError("read from " + path.string() + " failed");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  auto os = open_out(path, true);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  finish_write(os, path);
}

}  // namespace spingas
