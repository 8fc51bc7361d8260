// csv.hpp: deterministic CSV output. Numbers use the shortest decimal that
// round-trips, lines end in LF, and '#' lines carry free-form metadata.

#pragma once

#include "dicke/dynamics.hpp"
#include "dicke/protocol.hpp"

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dicke {

// Shortest round-trip representation; "nan", "inf", "-inf" for non-finite.
std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  // Each line of `text` becomes "# <line>".
  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  // Pre-formatted cells (e.g. empty cells for missing values).
  void row_cells(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

// Columns: t, re_cplus, im_cplus, re_cminus, im_cminus, jz, parity, norm, leakage.
void write_evolution(CsvWriter& csv, const EvolutionResult& result);

// Columns: <parameter>, jz_numeric, jz_demkov, jz_tanh, leakage, delta_i,
// preparation_ratio, bias_ratio, nonadiabatic_ratio, conditions_ok, error.
// Missing values are left empty.
void write_signal_curve(CsvWriter& csv, const SignalCurve& curve);

}  // namespace dicke
