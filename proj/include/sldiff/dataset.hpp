#pragma once

#include <istream>
#include <string>

#include "sldiff/series.hpp"

namespace sldiff {

/// Names of the datasets compiled into the library.
inline constexpr const char* kBuiltinUsNatgas = "us-natgas";

/// Compiled-in dataset by id. Currently `us-natgas`: U.S. electricity
/// production from natural gas sources, percent of total, annual 1990-2023
/// (34 observations, World Bank series). Throws InvalidInput for unknown ids.
TimeSeries builtin_series(const std::string& id);

/**
 * Load a `time,value` delimited text file (comma separator, `.` decimal
 * point, UTF-8, header required). Parsing is locale-independent.
 * Throws ParseError (with the offending line number) on malformed input and
 * ValidationError when a parsed row breaks a series invariant.
 */
TimeSeries load_series(std::istream& in, const std::string& label = "");
TimeSeries load_series_file(const std::string& path);

}  // namespace sldiff
