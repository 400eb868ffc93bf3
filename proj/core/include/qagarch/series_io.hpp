#pragma once

#include <filesystem>
#include <iosfwd>

#include "qagarch/types.hpp"

namespace qagarch {

// CSV layout: header `t,x`, then one row per observation with 1-based t.

void write_series_csv(std::ostream& out, const TimeSeries& series);
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);

/// Parses the `t,x` format. Throws InvalidInput on a malformed header, a row that
/// does not parse, out-of-sequence t, or an empty series.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::filesystem::path& path);

/// Formats a double so that it round-trips exactly (max_digits10).
std::string format_full(double value);

}  // namespace qagarch
