#include "qagarch/series_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "qagarch/errors.hpp"

namespace qagarch {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, std::size_t line) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed == 0 || consumed != text.size()) {
    throw InvalidInput("line " + std::to_string(line) + ": cannot parse number '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_full(double value) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << value;
  return os.str();
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  out << "t,x\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << (i + 1) << ',' << format_full(series[i]) << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  write_series_csv(out, series);
}

TimeSeries read_series_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  // Skip leading comment lines.
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (!line.empty() && line.front() != '#') break;
  }
  if (line != "t,x") {
    throw InvalidInput("expected CSV header 't,x', got '" + line + "'");
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 't,x'");
    }
    const double t = parse_double(trim(line.substr(0, comma)), line_no);
    if (t != static_cast<double>(values.size() + 1)) {
      throw InvalidInput("line " + std::to_string(line_no) + ": t must run 1, 2, 3, ...");
    }
    values.push_back(parse_double(trim(line.substr(comma + 1)), line_no));
  }
  if (values.empty()) throw InvalidInput("series CSV has no observations");
  return TimeSeries(std::move(values));
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return read_series_csv(in);
}

}  // namespace qagarch
