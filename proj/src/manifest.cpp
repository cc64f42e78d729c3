#include "spdc/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include "spdc/image_io.hpp"

namespace spdc {

void write_manifest(const std::string& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "# spdcsim run manifest\n";
    out << "# subcommand: " << manifest.subcommand << "\n";
    out << "# rerun: spdcsim " << manifest.subcommand << " --config " << path;
    if (!manifest.args.empty()) out << " " << manifest.args;
    out << "\n";
    if (!manifest.grid_note.empty()) out << "# grid: " << manifest.grid_note << "\n";
    for (const auto& o : manifest.outputs) out << "# output: " << o << "\n";
    out << "# duration_s: " << format_double(manifest.duration_s) << "\n";
    out << "# config snapshot\n";
    out << manifest.config_snapshot;
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

} // namespace spdc
