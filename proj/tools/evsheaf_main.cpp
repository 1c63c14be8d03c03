#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "evsheaf/blocks.hpp"
#include "evsheaf/csv.hpp"
#include "evsheaf/laws.hpp"
#include "evsheaf/optomotor.hpp"
#include "evsheaf/scenario.hpp"

using namespace evsheaf;

namespace {

constexpr int kOk = 0;
constexpr int kLawFailure = 1;
constexpr int kBadInput = 2;
constexpr int kRuntime = 3;

int report(const Error& e) {
  std::cerr << e.name() << ": " << e.what() << '\n';
  return e.code() == ErrorCode::ConfigError ? kBadInput : kRuntime;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct RunArgs {
  std::string config;
  std::string out;
  std::string record;
};

int cmd_run(const RunArgs& a) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(a.config);
    if (!a.record.empty()) {
      cfg.record = split_list(a.record);
      validate(cfg);
    }
  } catch (const Error& e) {
    return report(e);
  }
  try {
    ScenarioRun r = run_scenario(cfg);
    write_run(a.out, cfg, r);
    const RunSummary& s = r.summary;
    std::printf("final_heading %s\nabs_error_initial %s\nabs_error_final %s\n", format_real(s.final_heading).c_str(),
                format_real(s.abs_error_initial).c_str(), format_real(s.abs_error_final).c_str());
    for (const auto& w : s.wires) std::printf("rows %s %zu\n", w.name.c_str(), w.rows);
    std::printf("wall_seconds %.3f\n", s.wall_seconds);
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

struct BlockArgs {
  std::string name;
  std::string in;
  std::string out;
  Tick period = 0;
  Tick phase = 0;
  double level = 0;
  std::string a0;
  double contrast = 0;
  double i0 = 1.0;
  double i_min = 1e-6;
};

RealVector parse_vector(const std::string& s, std::size_t dim) {
  RealVector v;
  for (const auto& f : split_list(s)) {
    try {
      v.push_back(std::stod(f));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad number '" + f + "' in --a0");
    }
  }
  if (v.empty()) v.assign(dim, 0.0);
  if (v.size() == 1 && dim > 1) v.assign(dim, v[0]);
  if (v.size() != dim) throw Error(ErrorCode::ConfigError, "--a0 needs " + std::to_string(dim) + " components");
  return v;
}

std::size_t value_dim(const Events& e) {
  for (const auto& ev : e.events())
    if (std::holds_alternative<RealVector>(ev.value.v)) return ev.value.as_vector().size();
  return 1;
}

int cmd_block(const BlockArgs& a) {
  CsvSection in;
  Machine m;
  try {
    in = read_csv_file(a.in);
    const Section& s = in.section;
    if (a.name == "sampler" || a.name == "levelcross" || a.name == "pixel") {
      if (!s.is_linear()) throw Error(ErrorCode::ConfigError, a.name + " reads a linear trajectory CSV");
    } else if (!s.is_events()) {
      throw Error(ErrorCode::ConfigError, "zoh reads an events CSV");
    }
    if (a.name == "sampler") {
      if (a.period < 1) throw Error(ErrorCode::ConfigError, "sampler needs --period >= 1");
      m = make_sampler(SamplerConfig{a.period, a.phase}, s.linear().dim());
    } else if (a.name == "levelcross") {
      if (!(a.level > 0)) throw Error(ErrorCode::ConfigError, "levelcross needs --level > 0");
      m = make_level_crossing(a.level, parse_vector(a.a0, s.linear().dim()));
    } else if (a.name == "zoh") {
      Events reals(s.length());
      for (const auto& ev : s.events().events()) {
        if (std::holds_alternative<std::int64_t>(ev.value.v))
          reals.push_back(ev.t, Value(static_cast<double>(ev.value.as_integer())));
        else
          reals.push_back(ev.t, ev.value);
      }
      in.section = reals;
      m = make_zoh(parse_vector(a.a0, value_dim(reals)));
    } else {
      if (s.linear().dim() != 1) throw Error(ErrorCode::ConfigError, "pixel reads a scalar intensity");
      if (!(a.contrast > 0)) throw Error(ErrorCode::ConfigError, "pixel needs --contrast > 0");
      m = make_pixel(a.contrast, a.i0, a.i_min);
    }
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return kBadInput;
  }
  try {
    BehaviorTrace tr = run(m, in.section, std::max<Tick>(in.section.length(), 1));
    write_csv_file(a.out, tr.output, in.scale);
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

struct LawArgs {
  std::size_t budget = 10000;
  std::string fixture;
};

int cmd_laws(const LawArgs& a) {
  if (a.budget == 0) {
    std::cerr << "budget 0: nothing to check\n";
    return kBadInput;
  }
  const Tick horizon = 5;
  if (!a.fixture.empty()) {
    FiniteMachineTable t;
    try {
      t = table_fixture(a.fixture);
    } catch (const Error& e) {
      std::cerr << e.name() << ": " << e.what() << '\n';
      return kBadInput;
    }
    auto rep = check_total_deterministic(t, horizon, a.budget * 100);
    std::printf("fixture %s: %s\n", a.fixture.c_str(), describe(rep).c_str());
    return rep.total && rep.deterministic ? kOk : kLawFailure;
  }
  std::mt19937_64 rng(20240611);
  std::vector<LawResult> all;
  auto add = [&](std::vector<LawResult> rs) {
    for (auto& r : rs) all.push_back(std::move(r));
  };
  std::size_t n = a.budget;
  try {
    add(ph_category_laws(rng, n));
    add(gluing_laws(rng, n));
    all.push_back(gluing_uniqueness(std::min<Tick>(6, static_cast<Tick>(n)), 2));
    add(restriction_laws(rng, n));
    add(monoidal_laws(rng, n));
    add(series_category_laws(rng, std::max<std::size_t>(1, n / 100)));
    all.push_back(pullback_law(rng, std::max<std::size_t>(1, std::min<std::size_t>(n / 100, 40)), 3));
    all.push_back(fixture_classification(horizon, a.budget * 100));
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return kRuntime;
  }
  bool ok = true;
  for (const auto& r : all) {
    std::printf("%-24s %s (%zu cases)\n", r.name.c_str(), r.passed ? "pass" : "FAIL", r.cases);
    if (!r.passed) {
      std::printf("  counterexample: %s\n", r.counterexample.c_str());
      ok = false;
    }
  }
  return ok ? kOk : kLawFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evsheaf: event-based block simulation and law checks"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a closed-loop scenario and write CSV wires");
  run_cmd->add_option("--config", run_args.config, "Scenario YAML")->required();
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--record", run_args.record, "Comma-separated wires to write (overrides config)");

  BlockArgs block_args;
  auto* block_cmd = app.add_subcommand("block", "Run one block over a CSV stream");
  block_cmd->add_option("name", block_args.name, "sampler | levelcross | zoh | pixel")
      ->required()
      ->check(CLI::IsMember({"sampler", "levelcross", "zoh", "pixel"}));
  block_cmd->add_option("--in", block_args.in, "Input CSV")->required();
  block_cmd->add_option("--out", block_args.out, "Output CSV")->required();
  block_cmd->add_option("--period", block_args.period, "Sampler period (ticks)");
  block_cmd->add_option("--phase", block_args.phase, "Sampler phase (ticks)");
  block_cmd->add_option("--level", block_args.level, "Level-crossing spacing");
  block_cmd->add_option("--a0", block_args.a0, "Initial value, comma-separated for vectors");
  block_cmd->add_option("--contrast", block_args.contrast, "Pixel contrast threshold");
  block_cmd->add_option("--i0", block_args.i0, "Pixel reference intensity");
  block_cmd->add_option("--i-min", block_args.i_min, "Pixel intensity floor");

  LawArgs law_args;
  auto* laws_cmd = app.add_subcommand("laws", "Run the algebraic law suites");
  laws_cmd->add_option("--budget", law_args.budget, "Random cases per law");
  laws_cmd->add_option("--fixture", law_args.fixture, "Check one bundled table: good | partial | nondet");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  if (*run_cmd) return cmd_run(run_args);
  if (*block_cmd) return cmd_block(block_args);
  return cmd_laws(law_args);
}
