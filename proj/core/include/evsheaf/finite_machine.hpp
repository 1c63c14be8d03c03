#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "evsheaf/machine.hpp"

namespace evsheaf {

// "No event at this tick" for inputs and outputs.
inline constexpr int kSilent = -1;

struct TableRow {
  int state;
  int input;
  int next;
  int output;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

// Per-tick transition relation over small alphabets. Symbols are 0..n-1.
// A table may be partial or nondeterministic; only total deterministic ones
// can be turned into a Machine.
struct FiniteMachineTable {
  std::string name;
  int states = 1;
  int inputs = 1;
  int outputs = 1;
  int initial = 0;
  std::vector<TableRow> rows;

  std::vector<TableRow> matches(int state, int input) const;
  void validate() const;
};

// Event stream of integer symbols in, integer symbols out; records the state
// after every tick on `state_wire`.
Machine table_machine(const FiniteMachineTable& table, const std::string& state_wire = "state");

// Per-tick view of one behavior over ticks 0..horizon.
struct TableBehavior {
  std::vector<int> input;
  std::vector<int> state;
  std::vector<int> output;

  auto operator<=>(const TableBehavior&) const = default;
};

struct SeriesBehavior {
  std::vector<int> input;
  std::vector<int> state1;
  std::vector<int> middle;
  std::vector<int> state2;
  std::vector<int> output;

  auto operator<=>(const SeriesBehavior&) const = default;
};

// Every behavior of the table: brute force over all input/state/output
// sequences, keeping those the relation allows.
std::vector<TableBehavior> enumerate_behaviors(const FiniteMachineTable& table, Tick horizon);

// Pairs of behaviors agreeing on the shared wire.
std::set<SeriesBehavior> pullback_behaviors(const FiniteMachineTable& t1, const FiniteMachineTable& t2,
                                            Tick horizon);

// Behaviors of the executable series composite over every input sequence.
std::set<SeriesBehavior> executable_series_behaviors(const FiniteMachineTable& t1, const FiniteMachineTable& t2,
                                                     Tick horizon, Tick step = 1);

struct TotalDeterministicReport {
  bool total = true;
  bool deterministic = true;
  std::size_t prefixes_checked = 0;
  std::string total_counterexample;
  std::string deterministic_counterexample;
};

// Every consistent prefix over [0, l] with l < horizon, every one-tick input
// extension: at least one (total) and at most one (deterministic) state extension.
TotalDeterministicReport check_total_deterministic(const FiniteMachineTable& table, Tick horizon,
                                                   std::size_t budget = 1'000'000);

// Bundled fixtures: "good", "partial", "nondet".
FiniteMachineTable table_fixture(const std::string& name);
std::vector<std::string> table_fixture_names();

// Random total deterministic table.
FiniteMachineTable random_table(std::mt19937_64& rng, int states, int inputs, int outputs);

Events symbols_to_events(const std::vector<int>& symbols);
std::vector<int> events_to_symbols(const Events& e);

}  // namespace evsheaf
