#include "spdc/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace spdc {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return {buf, ptr};
}

namespace {

std::ofstream open_out(const std::string& path, std::ios_base::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

} // namespace

void write_pgm16(const std::string& path, const Image& image) {
    auto out = open_out(path, std::ios::binary);
    const int n = image.samples_per_axis;
    out << "P5\n" << n << " " << n << "\n65535\n";
    std::vector<unsigned char> row(static_cast<size_t>(n) * 2);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double v = std::clamp(image.at(r, c), 0.0, 1.0);
            const auto sample = static_cast<uint16_t>(std::lround(v * 65535.0));
            row[static_cast<size_t>(c) * 2] = static_cast<unsigned char>(sample >> 8);
            row[static_cast<size_t>(c) * 2 + 1] = static_cast<unsigned char>(sample & 0xff);
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

void write_image_csv(const std::string& path, const Image& image) {
    auto out = open_out(path, std::ios::out);
    out << "x_mm,y_mm,rate\n";
    const int n = image.samples_per_axis;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            out << format_double(image.x_of_col(c)) << ',' << format_double(image.y_of_row(r)) << ','
                << format_double(image.at(r, c)) << '\n';
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path, std::ios::out);
    out << header << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

} // namespace spdc
