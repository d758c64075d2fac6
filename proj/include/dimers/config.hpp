#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dimers/schottky.hpp"
#include "dimers/surface.hpp"

namespace dimers {

inline constexpr int kConfigSchemaVersion = 1;

struct LatticeSpec {
    int m = 1, n = 1;    // clusters of alpha and beta points
    int H = 64, W = 64;  // sampler vertex grid
};

struct ChainConfig {
    std::int64_t sweeps = 1000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::optional<double> volume_target;    // absolute sum of face heights
    std::optional<double> volume_fraction;  // in [-1, 1], relative to the reachable range
    std::int64_t record_interval = 1;
    double burn_in_fraction = 0.5;
};

struct Thresholds {
    double fay = 1e-9;
    double dirac = 1e-9;
    double periodicity = 1e-10;
};

struct SamplingGrid {
    int boundary_samples = 200;  // per boundary component
    int amoeba_grid = 24;        // interior grid is amoeba_grid x amoeba_grid points
    int ronkin_grid = 8;
};

struct OutputSpec {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json", "svg"};
    bool wants(const std::string& f) const;
};

struct RunConfig {
    int schema_version = kConfigSchemaVersion;
    SchottkyData schottky;
    HarnackData harnack;
    std::vector<double> D;  // empty means zero
    int max_letters = 8;
    double theta_tol = 1e-12;
    double quad_tol = 1e-9;
    LatticeSpec lattice;
    ChainConfig chain;
    Thresholds thresholds;
    SamplingGrid grid;
    OutputSpec outputs;

    std::vector<double> D_or_zero() const;
};

// Throws Error(validation) with the JSON path of the offending field, or Error(invalid_argument) on syntax errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace dimers
