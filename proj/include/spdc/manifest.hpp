#pragma once

#include <string>
#include <vector>

namespace spdc {

/// Provenance record emitted next to every output set. The body is a
/// valid config snapshot; everything else lives in comment lines, so the
/// manifest itself can be passed back to --config to reproduce the run.
struct RunManifest {
    std::string subcommand;
    std::string args; // flags as given, config path omitted
    std::string grid_note;
    std::vector<std::string> outputs;
    double duration_s = 0.0;
    std::string config_snapshot;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

} // namespace spdc
