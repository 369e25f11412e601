//==============================================================================
// io.hpp
// File formats for the operator surface: point CSVs (header "x,y"), binary
// PGM (P5, maxval 255) images, and feature-vector CSVs. Parsers report the
// offending line on malformed input via FormatError.
//==============================================================================
#pragma once

#include <array>
#include <string>
#include <vector>

#include "genads/data.hpp"

namespace genads {

void write_points_csv(const std::string& path,
                      const std::vector<std::array<double, 2>>& points);
std::vector<std::array<double, 2>> read_points_csv(const std::string& path);

// pixels in [0, 1], row-major side x side; written as round(255 * pixel).
void write_pgm(const std::string& path, const std::vector<double>& pixels,
               int side);
std::vector<double> read_pgm(const std::string& path, int& side);

// One feature vector per line, comma-separated.
std::vector<std::vector<double>> read_feature_csv(const std::string& path);

}  // namespace genads
