#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ymflow/field.hpp"
#include "ymflow/flow.hpp"
#include "ymflow/lattice.hpp"
#include "ymflow/perturbation.hpp"

namespace ymflow {

// Run configuration, read from an INI-style text file.
struct RunConfig {
    std::array<int, 4> dims{8, 8, 8, 8};
    BoundaryMode low = BoundaryMode::Frozen;
    BoundaryMode high = BoundaryMode::Frozen;
    int frozen_depth = 1;
    std::array<int, 3> twist{0, 0, 0};

    double beta = 0.0;   // perturbation strength; 0 disables it
    double w0 = 1.0;

    FlowSchedule schedule{};

    std::uint64_t seed = 1;
    std::string initial = "flat";   // flat | random | instanton | file
    std::string initial_file;
    double noise = 0.0;             // random_near amplitude
    double rho = 2.0;               // instanton scale
    int instanton_sign = +1;

    LatticeGeometry make_geometry() const;
    PerturbationSpec make_perturbation() const;
};

// Parses the INI text. Unknown keys are rejected with the line number in the
// exception message. Missing keys keep their defaults.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

// Canonical round-trippable serialization (sorted sections/keys).
std::string serialize_config(const RunConfig& cfg);

// Binary snapshot format "YMFL": magic, version, geometry, link data
// (little-endian IEEE doubles, site-major / direction-minor quaternions).
void write_snapshot(std::ostream& out, const LinkField& field);
void write_snapshot_file(const std::string& path, const LinkField& field);
LinkField read_snapshot(std::istream& in, const LatticeGeometry*& geo_out);
LinkField read_snapshot_file(const std::string& path, const LatticeGeometry*& geo_out);

// CSV with a pinned header: tau,action,ym_k,fplus_sq,cs_estimate,grad_norm_sq,Q,dtau
void write_flow_csv(std::ostream& out, const std::vector<FlowSample>& samples);
void write_flow_csv_file(const std::string& path, const std::vector<FlowSample>& samples);

// JSON run summary with "schema": 1.
std::string summary_json(const RunConfig& cfg, const FlowTrace& trace);

} // namespace ymflow
