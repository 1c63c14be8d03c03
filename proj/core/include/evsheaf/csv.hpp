#pragma once

#include <iosfwd>
#include <string>

#include "evsheaf/value.hpp"

namespace evsheaf {

// Comment preamble (kind, length_ticks, seconds_per_tick, dim), header row,
// then one row per event / breakpoint / step.
void write_csv(std::ostream& os, const Section& s, const TickScale& scale);
void write_csv_file(const std::string& path, const Section& s, const TickScale& scale);

// Number of data rows write_csv emits for s.
std::size_t csv_row_count(const Section& s);

struct CsvSection {
  Section section;
  TickScale scale;
};

// Reads what write_csv writes. Event values parse as integer, real or vector.
CsvSection read_csv(std::istream& is);
CsvSection read_csv_file(const std::string& path);

}  // namespace evsheaf
