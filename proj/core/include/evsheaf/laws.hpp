#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evsheaf/finite_machine.hpp"
#include "evsheaf/sheaf.hpp"

namespace evsheaf {

struct LawResult {
  LawResult() = default;
  explicit LawResult(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string counterexample;  // first failure only
};

// Random inputs shared by the law suites, tests and benchmarks.
using IntEvents = EventStream<std::int64_t>;
IntEvents random_int_events(std::mt19937_64& rng, Tick length, double density, std::int64_t values);
Events random_value_events(std::mt19937_64& rng, Tick length, double density);
LinearTrajectory random_linear(std::mt19937_64& rng, Tick length, std::size_t dim, std::size_t knots);
StepTrajectory random_step(std::mt19937_64& rng, Tick length, std::size_t dim, std::size_t steps);

// Translation category: unit, associativity, composite of homs is a hom.
std::vector<LawResult> ph_category_laws(std::mt19937_64& rng, std::size_t cases);

// Restrict-after-glue round trip for events, linear and step sections.
std::vector<LawResult> gluing_laws(std::mt19937_64& rng, std::size_t cases);

// Every event stream over {0..values-1} on [0, n], n <= max_length, is the
// unique glue of its two restrictions at every cut.
LawResult gluing_uniqueness(Tick max_length, std::int64_t values);

std::vector<LawResult> restriction_laws(std::mt19937_64& rng, std::size_t cases);

// merge/split inverse pair, naturality in maps and in restriction.
std::vector<LawResult> monoidal_laws(std::mt19937_64& rng, std::size_t cases);

// Series composite of random table machines: unit and associativity on behaviors.
std::vector<LawResult> series_category_laws(std::mt19937_64& rng, std::size_t cases);

// Executable series vs brute-force pullback on random table pairs.
LawResult pullback_law(std::mt19937_64& rng, std::size_t pairs, Tick horizon);

// Expected classification of the bundled fixtures.
LawResult fixture_classification(Tick horizon, std::size_t budget);

std::string describe(const TotalDeterministicReport& r);

}  // namespace evsheaf
