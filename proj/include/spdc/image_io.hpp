#pragma once

#include <string>
#include <vector>

#include "spdc/mode_function.hpp"

namespace spdc {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// 16-bit binary PGM (magic P5, maxval 65535, big-endian samples),
/// mapping [0,1] linearly onto [0,65535]. Rows are written top first.
void write_pgm16(const std::string& path, const Image& image);

/// Companion CSV with header x_mm,y_mm,rate in the image's row-major
/// storage order (top row first).
void write_image_csv(const std::string& path, const Image& image);

/// Generic CSV writer: one header line, then rows of numbers.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

} // namespace spdc
