#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dimers/common.hpp"

namespace dimers {

// Dimer configuration on an H x W grid of vertices, stored as 4-bit codes on the
// (H-1) x (W-1) faces: bit 1 north edge, 2 west, 4 south, 8 east.
// Vertex (r, c) is black when r + c is even. Code 5 (north and south edges) is the
// vertical pair, code 10 the horizontal pair.
//
// Face (r, c) sits at site (X, Y) = (c + r + 1, c - r) of the doubled diagonal lattice
// used by FockModel, so its weight is FockModel::face_weight at that site.
class DimerConfig {
public:
    DimerConfig() = default;
    DimerConfig(int H, int W);

    int H() const { return H_; }
    int W() const { return W_; }
    int face_rows() const { return H_ - 1; }
    int face_cols() const { return W_ - 1; }

    std::uint8_t code(int r, int c) const { return codes_[static_cast<size_t>(r * (W_ - 1) + c)]; }
    std::uint8_t& code(int r, int c) { return codes_[static_cast<size_t>(r * (W_ - 1) + c)]; }
    const std::vector<std::uint8_t>& codes() const { return codes_; }

    // Horizontal edge (r,c)-(r,c+1) and vertical edge (r,c)-(r+1,c).
    bool has_h(int r, int c) const;
    bool has_v(int r, int c) const;
    void set_h(int r, int c, bool on);
    void set_v(int r, int c, bool on);

    // Lists shared-edge inconsistencies (impossible by construction here) and vertices not covered exactly once.
    ValidationReport check() const;

    std::string hex_dump() const;

    bool operator==(const DimerConfig& o) const = default;
    bool operator<(const DimerConfig& o) const { return codes_ < o.codes_; }

private:
    int H_ = 0, W_ = 0;
    std::vector<std::uint8_t> codes_;
};

enum class InitPattern { brickwork_horizontal, brickwork_vertical };
DimerConfig init_config(int H, int W, InitPattern pattern);

enum class FlipKind { none, vertical_to_horizontal, horizontal_to_vertical };
FlipKind flippable(const DimerConfig& cfg, int r, int c);
void flip(DimerConfig& cfg, int r, int c);
// Height change of face (r,c) when it is flipped in its current state (+1 or -1).
int flip_height_change(const DimerConfig& cfg, int r, int c);

// Edge weights: h[r*(W-1)+c] for horizontal edges, v[r*W+c] for vertical ones.
struct EdgeWeights {
    int H = 0, W = 0;
    std::vector<double> h, v;
    static EdgeWeights uniform(int H, int W);
    double face_ratio(int r, int c) const;  // ν_n ν_s / (ν_e ν_w)
};

// Height on faces; the reference face is the exterior face above face (0,0), at height 0.
// With a reference configuration the flow ω_ref replaces the constant 1/4.
std::vector<double> height_field(const DimerConfig& cfg, const DimerConfig* reference = nullptr);
double volume(const std::vector<double>& heights);

double configuration_weight(const DimerConfig& cfg, const EdgeWeights& w);
std::map<DimerConfig, double> brute_force_distribution(int H, int W, const EdgeWeights& w, int max_edges = 40);

// |det| of the signed white-black matrix; horizontal edges +1, vertical edges (-1)^c.
double kasteleyn_partition(const EdgeWeights& w);

// Uniform variates from a 64-bit Mersenne twister.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }
    static constexpr const char* algorithm() { return "mt19937_64"; }

private:
    std::mt19937_64 eng_;
};

// Face weights are row-major over the (H-1) x (W-1) faces.
bool mh_step(DimerConfig& cfg, const std::vector<double>& face_weights, Rng& rng);

// Volume-preserving pair chain; keeps the up and down flippable face sets and the heights in sync.
class VolumeChain {
public:
    VolumeChain(DimerConfig cfg, const std::vector<double>& face_weights);

    const DimerConfig& config() const { return cfg_; }
    const std::vector<double>& heights() const { return heights_; }
    double volume() const { return volume_; }
    size_t up_count() const { return up_.items.size(); }
    size_t down_count() const { return down_.items.size(); }

    // Greedy random flips until the volume is within 1/2 of target.
    void drive_to_volume(double target, Rng& rng);
    // One proposal; returns true when accepted. Throws when no pair exists.
    bool step(Rng& rng);
    void flip_face(int f);

private:
    struct IndexedSet {
        std::vector<int> items;
        std::vector<int> pos;
        void insert(int f);
        void erase(int f);
    };
    void classify(int f);

    DimerConfig cfg_;
    std::vector<double> w_;
    std::vector<double> heights_;
    double volume_ = 0.0;
    IndexedSet up_, down_;
};

bool mh_step_volume(VolumeChain& chain, Rng& rng);

// Lowest and highest volume reachable from cfg by flips (greedy descent and ascent reach the
// unique extremal configurations).
std::pair<double, double> volume_range(const DimerConfig& cfg);

struct ChainSpec {
    std::int64_t sweeps = 0;
    std::uint64_t seed = 0;
    std::optional<double> volume_target;
    std::int64_t record_interval = 1;  // sweeps between recorded heights
    double burn_in_fraction = 0.5;
};

struct ChainResult {
    DimerConfig final_config;
    std::vector<double> mean_height;
    std::int64_t proposals = 0;
    std::int64_t accepted = 0;
    std::int64_t samples = 0;
    double acceptance_rate = 0.0;
    double initial_volume = 0.0;
    double final_volume = 0.0;
};

ChainResult run_chain(const ChainSpec& spec, const std::vector<double>& face_weights, const DimerConfig& init);

// Average slope (d/dcol, d/drow) of a face height field over a window, using even strides.
struct Slope {
    double dc = 0, dr = 0;
};
Slope local_slope(const std::vector<double>& heights, int rows, int cols, int r, int c, int half_width = 2);

// Slopes of the four frozen running-bond phases, measured on a generated pattern.
// They are the corners of the slope polygon, the square |dc| + |dr| <= 1/2.
std::vector<Slope> frozen_slopes();

struct SlopeAnalysis {
    // corners ordered top-left, top-right, bottom-left, bottom-right; each quadrant is rows/4 x cols/4
    std::array<double, 4> corner_frozen_fraction{};
    Slope central;            // mean slope over the central block
    double central_l1 = 0.0;  // |dc| + |dr| of that mean
    bool central_inside = false;
};
// A face counts as frozen when its local slope is within tol (l1) of a frozen slope; the centre
// is inside when its mean slope keeps l1 distance tol from the boundary of the polygon.
SlopeAnalysis analyse_slopes(const std::vector<double>& heights, int rows, int cols, double tol = 0.1);

}  // namespace dimers
