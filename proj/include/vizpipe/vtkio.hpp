#pragma once

#include "vizpipe/dataset.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace vizpipe {

/// Parses an ASCII legacy VTK document holding STRUCTURED_POINTS or POLYDATA.
/// Every failure is a ParseError (or subclass) carrying the line number.
Dataset read_legacy(std::string_view text);

/// Canonical ASCII legacy VTK text. Numbers use the shortest decimal form that
/// reads back to the same double.
std::string write_legacy(const Dataset& d);

Dataset read_legacy_file(const std::filesystem::path& path);
void write_legacy_file(const std::filesystem::path& path, const Dataset& d);

/// Whitespace-separated table, one row per line. Yields dims (ncols, nrows, 1)
/// with unit spacing at the origin.
ImageData read_array_text(std::string_view text);
ImageData read_array_text_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

} // namespace vizpipe
