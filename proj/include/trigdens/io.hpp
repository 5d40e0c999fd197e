#pragma once

#include <ostream>
#include <string>

#include "trigdens/expfam.hpp"

namespace trigdens::io {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double x);

// Dataset CSV: header "x", one sample per row.
void write_dataset_csv(std::ostream& os, const Dataset& data);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Parses a dataset CSV; throws std::runtime_error on malformed content or
// unreadable files.
Dataset read_dataset_csv(const std::string& path);

// Density CSV: header "x,f", values at grid midpoints.
void write_density_csv(std::ostream& os, const GridDensity& f);
void write_density_csv(const std::string& path, const GridDensity& f);

// Figure-style CSV: header "x,truth,est9,est10".
void write_comparison_csv(const std::string& path, const GridDensity& truth,
                          const GridDensity& est9, const GridDensity& est10);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace trigdens::io
