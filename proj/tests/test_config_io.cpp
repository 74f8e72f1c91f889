#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "spingas/ensemble.hpp"
#include "spingas/errors.hpp"
#include "spingas/io.hpp"
#include "spingas/presets.hpp"
#include "spingas/run_config.hpp"

using namespace spingas;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spingas-test-" + std::to_string(std::rand()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig parse(const std::string& text) {
  return parse_run_config_text(text, "test.cfg");
}

}  // namespace

TEST_CASE("manual config parses and auto engine resolves") {
  RunConfig cfg = parse(R"(
# comment line
[model]
kind = lattice-gas
particles = 8
sites = 16
lattice_init = uniform-random

[quantum]
coupling = xx
eta = 1.0
engine = auto
initial = k:3
steps = 500

[ensemble]
trajectories = 40
seed = 9

[output]
snapshots = all
series = entropy, sigma2
)");
  finalize_run_config(cfg);
  CHECK(cfg.preset.empty());
  CHECK(cfg.plan.model.kind == ModelSpec::Kind::LatticeGas);
  CHECK(cfg.plan.model.particles == 8);
  CHECK(cfg.plan.model.sites == 16);
  CHECK(cfg.plan.model.lattice_init == ModelSpec::LatticeInit::UniformRandom);
  CHECK(cfg.plan.eta == 1.0);
  CHECK(cfg.plan.engine == EngineKind::Subspace);  // xx + one excitation
  CHECK(cfg.plan.initial_state.excited == 2);      // external k:3 is 1-based
  CHECK(cfg.plan.steps == 500);
  CHECK(cfg.plan.n_traj == 40);
  CHECK(cfg.plan.seed == 9);
  CHECK(cfg.snapshots == RunConfig::Snapshots::All);
  CHECK(cfg.series == std::vector<std::string>{"entropy", "sigma2"});
  CHECK(cfg.plan.sample_times.front() == 0);
  CHECK(cfg.plan.sample_times.back() == 500);

  // Ising coupling leaves the excitation sector, so auto picks Full.
  RunConfig ising = parse(
      "[model]\nkind = random-pairs\nparticles = 4\n"
      "[quantum]\ncoupling = ising\ninitial = bits:1000\nsteps = 10\n");
  finalize_run_config(ising);
  CHECK(ising.plan.engine == EngineKind::Full);
  CHECK(ising.plan.initial_state.bits == "1000");
}

TEST_CASE("superposition initial state with complex amplitudes") {
  RunConfig cfg = parse(
      "[model]\nkind = chain\nparticles = 4\n"
      "[quantum]\ncoupling = xx\nengine = full\n"
      "initial = super:(0.70710678118654752,0),(0,0.70710678118654752)\n"
      "steps = 5\n");
  finalize_run_config(cfg);
  CHECK(cfg.plan.initial_state.kind == InitialStateSpec::Kind::Superposition);
  CHECK(cfg.plan.initial_state.c0.real() ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(cfg.plan.initial_state.c1.imag() ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

  // Plain reals are accepted too.
  RunConfig plain = parse(
      "[model]\nkind = chain\nparticles = 4\n"
      "[quantum]\ncoupling = xx\nengine = full\n"
      "initial = super:0.6,0.8\nsteps = 5\n");
  CHECK(plain.plan.initial_state.c0.real() == doctest::Approx(0.6));
  CHECK(plain.plan.initial_state.c1.real() == doctest::Approx(0.8));
}

TEST_CASE("config errors carry origin and line diagnostics") {
  const std::string bad =
      "[model]\n"
      "kind = random-pairs\n"
      "particles = 5\n"
      "wheels = 4\n";
  try {
    parse(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("test.cfg:4") != std::string::npos);
    CHECK(msg.find("wheels") != std::string::npos);
  }

  CHECK_THROWS_AS(parse("[garage]\n"), ConfigError);
  CHECK_THROWS_AS(parse("kind = chain\n"), ConfigError);  // key before section
  CHECK_THROWS_AS(parse("[model]\nparticles = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\nkind\n"), ConfigError);  // missing '='
  CHECK_THROWS_AS(
      parse("[model]\nkind = chain\nparticles = 4\n"
            "[quantum]\ncoupling = zz\nsteps = 1\n"),
      ConfigError);
  CHECK_THROWS_AS(
      parse("[model]\nkind = chain\nparticles = 4\n"
            "[quantum]\ncoupling = xx\ninitial = q:3\nsteps = 1\n"),
      ConfigError);
}

TEST_CASE("missing required fields are reported together") {
  try {
    parse("[model]\nkind = lattice-gas\nparticles = 4\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[model] sites") != std::string::npos);
    CHECK(msg.find("[quantum] steps") != std::string::npos);
  }
}

TEST_CASE("presets are exclusive with manual model sections") {
  CHECK_THROWS_AS(parse("preset = fig1-A\n[model]\nkind = chain\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[model]\nkind = chain\nparticles = 4\npreset = x\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("preset = not-a-preset\n"), ConfigError);
}

TEST_CASE("preset configs accept ensemble overrides") {
  RunConfig cfg = parse(
      "preset = fig5-P1\n"
      "[ensemble]\ntrajectories = 5\nseed = 42\n"
      "[output]\nsnapshots = none\n");
  finalize_run_config(cfg);
  CHECK(cfg.preset == "fig5-P1");
  CHECK(cfg.plan.n_traj == 5);
  CHECK(cfg.plan.seed == 42);
  CHECK(cfg.snapshots == RunConfig::Snapshots::None);
  // Untouched preset parameters survive the overlay.
  CHECK(cfg.plan.model.particles == 8);
  CHECK(cfg.plan.model.sites == 16);
  CHECK(cfg.plan.eta == 1.0);

  // Without overrides the preset's own ensemble size applies.
  RunConfig plainCfg = parse("preset = fig5-P1\n");
  finalize_run_config(plainCfg);
  CHECK(plainCfg.plan.n_traj == 3000);
}

TEST_CASE("preset registry lists the published experiments") {
  const std::string table = preset_table();
  CHECK(table.find("fig5-P3: 32 particles, 33 sites") != std::string::npos);
  CHECK(table.find("figBB: box 150×150×150, diameter 1, sigma 0.32") !=
        std::string::npos);
  CHECK_THROWS_AS(preset_config("fig9000"), ConfigError);

  // Every registered preset must survive finalize + validation.
  for (const PresetInfo& info : preset_catalog()) {
    RunConfig cfg = preset_config(info.name);
    CHECK_NOTHROW(finalize_run_config(cfg));
  }
}

TEST_CASE("doubles format with round-trip precision") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
  CHECK(format_double(0.0099) == "0.0099");
  for (const double v : {1.0 / 3.0, 2.2250738585072014e-308, 12345.678901,
                         9.87e300, -0.1}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("series and probability tables have stable bytes") {
  TempDir tmp;
  const std::vector<std::int64_t> steps = {0, 1, 2};
  const std::vector<double> values = {0.0099, 0.5, 1.0 / 3.0};
  write_series_csv(tmp.path / "s.csv", "sigma2", steps, values);
  const std::string got = read_text_file(tmp.path / "s.csv");
  CHECK(got ==
        "step,sigma2\n0,0.0099\n1,0.5\n2," + format_double(1.0 / 3.0) + "\n");

  std::vector<Eigen::VectorXd> probs(2, Eigen::VectorXd::Zero(3));
  probs[0] << 1.0, 0.0, 0.0;
  probs[1] << 0.25, 0.5, 0.25;
  write_probs_csv(tmp.path / "p.csv", std::vector<std::int64_t>{0, 5}, probs);
  CHECK(read_text_file(tmp.path / "p.csv") ==
        "step,p_1,p_2,p_3\n0,1,0,0\n5,0.25,0.5,0.25\n");

  Eigen::MatrixXd table(2, 2);
  table << 0.0, 0.75, 0.75, 0.0;
  write_table_csv(tmp.path / "t.csv", table);
  CHECK(read_text_file(tmp.path / "t.csv") ==
        "k,c_1,c_2\n1,0,0.75\n2,0.75,0\n");
}

TEST_CASE("matrix snapshots round-trip exactly") {
  TempDir tmp;
  Eigen::MatrixXcd m(2, 3);
  m << Complex(1.0 / 3.0, -0.25), Complex(0, 1), Complex(2, 0),
      Complex(-5e-300, 3e300), Complex(0.1, 0.2), Complex(7, -7);
  write_matrix_snapshot(tmp.path / "m.bin", m);
  const Eigen::MatrixXcd back = read_matrix_snapshot(tmp.path / "m.bin");
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

  write_text_file(tmp.path / "junk.bin", "notasnapshot");
  CHECK_THROWS_AS(read_matrix_snapshot(tmp.path / "junk.bin"), IoError);
  CHECK_THROWS_AS(read_matrix_snapshot(tmp.path / "absent.bin"), IoError);
}

TEST_CASE("event lines format and parse inversely") {
  const InteractionEvent ev = InteractionEvent::make(4, {{0, 2}, {1, 3}});
  const std::string line = format_event_line(ev);
  CHECK(line == "t 4 : 1-3 2-4");  // external indices are 1-based

  const InteractionEvent back = parse_event_line(line, 4, "log", 1);
  CHECK(back.step == 4);
  CHECK(back.pairs == ev.pairs);

  // A silent step keeps its line.
  const InteractionEvent idle = InteractionEvent::make(5, {});
  CHECK(format_event_line(idle) == "t 5 :");
  CHECK(parse_event_line("t 5 :", 4, "log", 1).pairs.empty());

  CHECK_THROWS_AS(parse_event_line("t x : 1-2", 4, "log", 3), IoError);
  CHECK_THROWS_AS(parse_event_line("1-2", 4, "log", 3), IoError);
  CHECK_THROWS_AS(parse_event_line("t 1 : 1-9", 4, "log", 3), IoError);
  CHECK_THROWS_AS(parse_event_line("t 1 : 0-2", 4, "log", 3), IoError);
  CHECK_THROWS_AS(parse_event_line("t 1 : 2-2", 4, "log", 3), IoError);
  try {
    parse_event_line("t 1 : 1-9", 4, "events.log", 12);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("events.log:12") != std::string::npos);
  }
}

TEST_CASE("event logs round-trip through files") {
  TempDir tmp;
  std::vector<InteractionEvent> events;
  events.push_back(InteractionEvent::make(0, {{0, 1}}));
  events.push_back(InteractionEvent::make(1, {}));
  events.push_back(InteractionEvent::make(2, {{2, 3}, {0, 1}}));
  write_event_log(tmp.path / "ev.log", events);
  const auto back = read_event_log(tmp.path / "ev.log", 4);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].step == events[i].step);
    CHECK(back[i].pairs == events[i].pairs);
  }
}

TEST_CASE("replay sources are strict about exhaustion") {
  std::vector<InteractionEvent> events = {InteractionEvent::make(0, {{0, 1}})};
  ReplaySource src(events, 2);
  CHECK(src.particle_count() == 2);
  CHECK(src.next().pairs.size() == 1);
  CHECK_THROWS_AS(src.next(), IoError);
}

TEST_CASE("recording source tees events through unchanged") {
  ChainSource chain(3);
  RecordingSource rec(chain);
  const InteractionEvent a = rec.next();
  const InteractionEvent b = rec.next();
  REQUIRE(rec.events().size() == 2);
  CHECK(rec.events()[0].pairs == a.pairs);
  CHECK(rec.events()[1].step == b.step);
}
