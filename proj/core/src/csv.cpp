#include "dicke/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace dicke {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

void CsvWriter::comment(std::string_view text) {
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line = text.substr(start, end - start);
    out_ << '#';
    if (!line.empty()) out_ << ' ' << line;
    out_ << '\n';
    if (end == std::string_view::npos || end + 1 == text.size()) break;
    start = end + 1;
  }
}

void CsvWriter::header(const std::vector<std::string>& columns) { row_cells(columns); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void write_evolution(CsvWriter& csv, const EvolutionResult& r) {
  csv.header({"t", "re_cplus", "im_cplus", "re_cminus", "im_cminus", "jz", "parity", "norm",
              "leakage"});
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    csv.row({r.times[i], r.c_plus[i].real(), r.c_plus[i].imag(), r.c_minus[i].real(),
             r.c_minus[i].imag(), r.jz[i], r.parity[i], r.norm[i], r.leakage[i]});
  }
}

void write_signal_curve(CsvWriter& csv, const SignalCurve& curve) {
  csv.header({to_string(curve.parameter), "jz_numeric", "jz_demkov", "jz_tanh", "leakage",
              "delta_i", "preparation_ratio", "bias_ratio", "nonadiabatic_ratio",
              "conditions_ok", "error"});
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const SignalPoint& p : curve.points) {
    std::string error = p.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    const ConditionReport* r = p.report ? &*p.report : nullptr;
    auto field = [r](double ConditionReport::*member) {
      return r ? format_double(r->*member) : std::string();
    };
    csv.row_cells({format_double(p.value), cell(p.jz_numeric), cell(p.jz_demkov),
                   format_double(p.jz_tanh), cell(p.leakage), field(&ConditionReport::delta_i),
                   field(&ConditionReport::preparation_ratio), field(&ConditionReport::bias_ratio),
                   field(&ConditionReport::nonadiabatic_ratio),
                   r ? (r->all_ok() ? "1" : "0") : "", error});
  }
}

}  // namespace dicke
