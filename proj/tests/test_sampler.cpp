#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dimers/sampler.hpp"
#include "oracles.hpp"

using namespace dimers;

namespace {

std::vector<double> face_weights(const EdgeWeights& w) {
    std::vector<double> out;
    for (int r = 0; r + 1 < w.H; ++r)
        for (int c = 0; c + 1 < w.W; ++c) out.push_back(w.face_ratio(r, c));
    return out;
}

EdgeWeights random_weights(int H, int W, std::uint64_t seed) {
    Rng rng(seed);
    EdgeWeights w = EdgeWeights::uniform(H, W);
    for (auto& x : w.h) x = 0.3 + 2.0 * rng.uniform();
    for (auto& x : w.v) x = 0.3 + 2.0 * rng.uniform();
    return w;
}

std::map<std::vector<std::uint8_t>, double> exact(const std::map<DimerConfig, double>& d) {
    std::map<std::vector<std::uint8_t>, double> out;
    for (const auto& [cfg, p] : d) out[cfg.codes()] = p;
    return out;
}

double mh_total_variation(int H, int W, const EdgeWeights& w, std::int64_t proposals, std::uint64_t seed) {
    const auto target = exact(brute_force_distribution(H, W, w));
    const auto fw = face_weights(w);
    DimerConfig cfg = init_config(H, W, H % 2 == 0 ? InitPattern::brickwork_vertical : InitPattern::brickwork_horizontal);
    Rng rng(seed);
    std::map<std::vector<std::uint8_t>, double> counts;
    for (std::int64_t i = 0; i < proposals; ++i) {
        mh_step(cfg, fw, rng);
        counts[cfg.codes()] += 1.0;
    }
    for (auto& kv : counts) kv.second /= static_cast<double>(proposals);
    return oracle::total_variation(counts, target);
}

bool affine(const std::vector<double>& h, int rows, int cols) {
    for (int r = 0; r < rows; ++r)
        for (int c = 1; c + 1 < cols; c += 1) {
            // brickwork heights repeat with period two; compare across two steps
            if (c + 2 < cols) {
                const double d1 = h[static_cast<size_t>(r * cols + c + 2)] - h[static_cast<size_t>(r * cols + c)];
                const double d0 = h[static_cast<size_t>(r * cols + c + 1)] - h[static_cast<size_t>(r * cols + c - 1)];
                if (std::abs(d1 - d0) > 1e-12) return false;
            }
        }
    for (int c = 0; c < cols; ++c)
        for (int r = 1; r + 2 < rows; ++r) {
            const double d1 = h[static_cast<size_t>((r + 2) * cols + c)] - h[static_cast<size_t>(r * cols + c)];
            const double d0 = h[static_cast<size_t>((r + 1) * cols + c)] - h[static_cast<size_t>((r - 1) * cols + c)];
            if (std::abs(d1 - d0) > 1e-12) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("initial configurations are perfect matchings") {
    for (auto p : {InitPattern::brickwork_horizontal, InitPattern::brickwork_vertical}) {
        const auto cfg = init_config(8, 8, p);
        CHECK(cfg.check().empty());
        int flippable_faces = 0, codes_5_10 = 0;
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < 7; ++c) {
                flippable_faces += flippable(cfg, r, c) != FlipKind::none;
                codes_5_10 += cfg.code(r, c) == 5 || cfg.code(r, c) == 10;
            }
        CHECK(flippable_faces == codes_5_10);
        CHECK(flippable_faces > 0);
    }
    CHECK_THROWS_AS(init_config(8, 7, InitPattern::brickwork_horizontal), Error);
    CHECK_THROWS_AS(DimerConfig(1, 5), Error);
}

TEST_CASE("flippable classification") {
    DimerConfig cfg(2, 2);
    cfg.set_v(0, 0, true);
    cfg.set_v(0, 1, true);
    CHECK(cfg.code(0, 0) == 10);
    CHECK(flippable(cfg, 0, 0) == FlipKind::horizontal_to_vertical);
    flip(cfg, 0, 0);
    CHECK(cfg.code(0, 0) == 5);
    CHECK(flippable(cfg, 0, 0) == FlipKind::vertical_to_horizontal);
    DimerConfig partial(2, 2);
    partial.set_h(0, 0, true);
    partial.set_v(0, 0, true);
    CHECK(partial.code(0, 0) == 3);
    CHECK(flippable(partial, 0, 0) == FlipKind::none);
    CHECK_THROWS_AS(flip(partial, 0, 0), Error);
}

TEST_CASE("random flips keep a valid matching and change heights locally") {
    DimerConfig cfg = init_config(16, 16, InitPattern::brickwork_vertical);
    Rng rng(17);
    const int R = 15, C = 15;
    auto h = height_field(cfg);
    int flips = 0;
    for (int i = 0; i < 100000; ++i) {
        const int r = static_cast<int>(rng.below(R)), c = static_cast<int>(rng.below(C));
        if (flippable(cfg, r, c) == FlipKind::none) continue;
        const int dh = flip_height_change(cfg, r, c);
        const DimerConfig before = cfg;
        flip(cfg, r, c);
        ++flips;
        if (i % 97 == 0) {
            DimerConfig twice = cfg;
            flip(twice, r, c);
            CHECK(twice == before);
        }
        if (i % 1000 == 0) {
            CHECK(cfg.check().empty());
            const auto h2 = height_field(cfg);
            for (int f = 0; f < R * C; ++f) {
                const double expect = h[static_cast<size_t>(f)] + (f == r * C + c ? dh : 0);
                CHECK(std::abs(h2[static_cast<size_t>(f)] - expect) < 1e-12);
            }
            CHECK(std::abs(volume(h2) - volume(h) - dh) < 1e-9);
        }
        h[static_cast<size_t>(r * C + c)] += dh;
    }
    CHECK(flips > 1000);
    CHECK(cfg.check().empty());
}

TEST_CASE("brickwork heights are affine") {
    for (auto p : {InitPattern::brickwork_horizontal, InitPattern::brickwork_vertical}) {
        const auto cfg = init_config(10, 10, p);
        CHECK(affine(height_field(cfg), 9, 9));
    }
}

TEST_CASE("height differences do not depend on the reference flow") {
    DimerConfig a = init_config(8, 8, InitPattern::brickwork_vertical);
    DimerConfig b = a;
    Rng rng(3);
    const auto fw = std::vector<double>(49, 1.0);
    for (int i = 0; i < 5000; ++i) mh_step(b, fw, rng);
    const DimerConfig ref = init_config(8, 8, InitPattern::brickwork_horizontal);
    const auto ha = height_field(a), hb = height_field(b);
    const auto ra = height_field(a, &ref), rb = height_field(b, &ref);
    for (size_t f = 0; f < ha.size(); ++f) CHECK(std::abs((hb[f] - ha[f]) - (rb[f] - ra[f])) < 1e-12);
}

TEST_CASE("enumeration: small grids") {
    const auto d2 = brute_force_distribution(2, 2, EdgeWeights::uniform(2, 2));
    REQUIRE(d2.size() == 2);
    for (const auto& kv : d2) CHECK(kv.second == doctest::Approx(0.5));
    CHECK(brute_force_distribution(4, 4, EdgeWeights::uniform(4, 4)).size() == 36);
    CHECK(brute_force_distribution(3, 4, EdgeWeights::uniform(3, 4)).size() == 11);
    CHECK(brute_force_distribution(2, 4, EdgeWeights::uniform(2, 4)).size() == 5);
    CHECK_THROWS_AS(brute_force_distribution(3, 3, EdgeWeights::uniform(3, 3)), Error);
}

TEST_CASE("Kasteleyn determinant matches enumeration") {
    CHECK(kasteleyn_partition(EdgeWeights::uniform(2, 2)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(kasteleyn_partition(EdgeWeights::uniform(4, 4)) == doctest::Approx(36.0).epsilon(1e-12));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const EdgeWeights w = random_weights(3, 4, seed);
        double Z = 0.0;
        DimerConfig dummy;
        const auto dist = brute_force_distribution(3, 4, w);
        for (const auto& kv : dist) Z += configuration_weight(kv.first, w);
        CHECK(std::abs(kasteleyn_partition(w) - Z) < 1e-12 * Z);
    }
    const EdgeWeights w44 = random_weights(4, 4, 9);
    double Z = 0.0;
    for (const auto& kv : brute_force_distribution(4, 4, w44)) Z += configuration_weight(kv.first, w44);
    CHECK(std::abs(kasteleyn_partition(w44) - Z) < 1e-9 * Z);
    CHECK(kasteleyn_partition(EdgeWeights::uniform(3, 3)) == 0.0);
}

TEST_CASE("gauge transformations leave the measure unchanged") {
    const EdgeWeights w = random_weights(3, 4, 4);
    EdgeWeights g = w;
    // scale every edge at vertex (1, 2) by 3
    const int r = 1, c = 2, W = 4;
    g.h[static_cast<size_t>(r * (W - 1) + c - 1)] *= 3.0;
    g.h[static_cast<size_t>(r * (W - 1) + c)] *= 3.0;
    g.v[static_cast<size_t>((r - 1) * W + c)] *= 3.0;
    g.v[static_cast<size_t>(r * W + c)] *= 3.0;
    const auto a = brute_force_distribution(3, 4, w), b = brute_force_distribution(3, 4, g);
    for (const auto& [cfg, p] : a) CHECK(std::abs(b.at(cfg) - p) < 1e-14);
    CHECK(std::abs(kasteleyn_partition(g) - 3.0 * kasteleyn_partition(w)) < 1e-12 * kasteleyn_partition(g));
    const auto fa = face_weights(w), fb = face_weights(g);
    for (size_t i = 0; i < fa.size(); ++i) CHECK(std::abs(fa[i] - fb[i]) < 1e-14 * fa[i]);
}

TEST_CASE("Metropolis chain: uniform weights accept every flippable proposal") {
    DimerConfig cfg = init_config(8, 8, InitPattern::brickwork_vertical);
    const std::vector<double> ones(49, 1.0);
    Rng rng(5);
    for (int i = 0; i < 5000; ++i) {
        // the proposal draws the face first; replay it to learn whether it was flippable
        Rng probe = rng;
        const std::uint64_t f = probe.below(49);
        const bool can = flippable(cfg, static_cast<int>(f / 7), static_cast<int>(f % 7)) != FlipKind::none;
        CHECK(mh_step(cfg, ones, rng) == can);
    }
}

TEST_CASE("Metropolis chain: two-state detailed balance") {
    // 2 x 2 grid: the two matchings differ by one flip with ratio W
    for (double W : {0.2, 1.0, 4.5}) {
        DimerConfig v(2, 2), h(2, 2);
        v.set_v(0, 0, true), v.set_v(0, 1, true);
        h.set_h(0, 0, true), h.set_h(1, 0, true);
        // flipping the vertical pair into the horizontal one multiplies the weight by W
        const double pi_v = 1 / (1 + W), pi_h = W / (1 + W);
        // empirical transition probabilities
        Rng rng(8);
        const std::vector<double> fw{W};
        int vh = 0, hv = 0;
        const int N = 200000;
        for (int i = 0; i < N; ++i) {
            DimerConfig a = v;
            mh_step(a, fw, rng);
            vh += !(a == v);
            DimerConfig b = h;
            mh_step(b, fw, rng);
            hv += !(b == h);
        }
        const double p_vh = static_cast<double>(vh) / N, p_hv = static_cast<double>(hv) / N;
        CHECK(std::abs(pi_v * p_vh - pi_h * p_hv) < 5e-3);
        const EdgeWeights ew{2, 2, {std::sqrt(W), std::sqrt(W)}, {1.0, 1.0}};
        CHECK(std::abs(ew.face_ratio(0, 0) - W) < 1e-12);
        CHECK(std::abs(configuration_weight(h, ew) / configuration_weight(v, ew) - W) < 1e-12);
    }
}

TEST_CASE("Metropolis chain reproduces the Boltzmann distribution on a small patch") {
    const EdgeWeights w = random_weights(2, 4, 12);
    const double early = mh_total_variation(2, 4, w, 10000, 1);
    const double late = mh_total_variation(2, 4, w, 1000000, 1);
    CHECK(late < 0.05);
    CHECK(late <= early);
    const EdgeWeights w3 = random_weights(3, 4, 13);
    CHECK(mh_total_variation(3, 4, w3, 1000000, 2) < 0.05);
}

TEST_CASE("Metropolis chain visits every matching of the 4 x 4 grid") {
    DimerConfig cfg = init_config(4, 4, InitPattern::brickwork_vertical);
    const std::vector<double> ones(9, 1.0);
    Rng rng(99);
    std::set<DimerConfig> seen;
    for (int i = 0; i < 100000; ++i) {
        mh_step(cfg, ones, rng);
        seen.insert(cfg);
    }
    CHECK(seen.size() == 36);
}

TEST_CASE("volume-constrained chain preserves the volume exactly") {
    const EdgeWeights w = random_weights(10, 10, 21);
    VolumeChain chain(init_config(10, 10, InitPattern::brickwork_vertical), face_weights(w));
    Rng rng(4);
    const auto [lo, hi] = volume_range(chain.config());
    CHECK(lo < chain.volume());
    CHECK(hi > chain.volume());
    chain.drive_to_volume(chain.volume() + 10.0, rng);
    const double v0 = chain.volume();
    for (int i = 0; i < 20000; ++i) {
        mh_step_volume(chain, rng);
        CHECK(chain.volume() == v0);
    }
    const auto h = height_field(chain.config());
    CHECK(volume(h) == v0);
    for (size_t f = 0; f < h.size(); ++f) CHECK(h[f] == chain.heights()[f]);
    CHECK(chain.config().check().empty());
}

TEST_CASE("volume-constrained chain samples the conditional measure") {
    const int H = 3, W = 4;
    const EdgeWeights w = random_weights(H, W, 31);
    const auto dist = brute_force_distribution(H, W, w);
    VolumeChain chain(init_config(H, W, InitPattern::brickwork_horizontal), face_weights(w));
    const double v0 = chain.volume();
    std::map<std::vector<std::uint8_t>, double> target;
    double mass = 0.0;
    for (const auto& [cfg, p] : dist)
        if (volume(height_field(cfg)) == v0) target[cfg.codes()] = p, mass += p;
    REQUIRE(target.size() >= 2);
    for (auto& kv : target) kv.second /= mass;
    Rng rng(6);
    std::map<std::vector<std::uint8_t>, double> counts;
    const int N = 400000;
    for (int i = 0; i < N; ++i) {
        mh_step_volume(chain, rng);
        counts[chain.config().codes()] += 1.0 / N;
    }
    CHECK(oracle::total_variation(counts, target) < 0.05);
}

TEST_CASE("volume-constrained chain stalls when no pair can move") {
    const std::vector<double> fw{1.0};
    VolumeChain chain(init_config(2, 2, InitPattern::brickwork_vertical), fw);
    Rng rng(1);
    CHECK_THROWS_AS(chain.step(rng), Error);
    ChainSpec spec;
    spec.sweeps = 10;
    spec.volume_target = chain.volume();
    CHECK_THROWS_AS(run_chain(spec, fw, init_config(2, 2, InitPattern::brickwork_vertical)), Error);
}

TEST_CASE("run_chain: zero sweeps and determinism") {
    const auto init = init_config(12, 12, InitPattern::brickwork_vertical);
    const auto fw = face_weights(random_weights(12, 12, 2));
    ChainSpec spec;
    spec.sweeps = 0;
    spec.seed = 5;
    const auto r0 = run_chain(spec, fw, init);
    CHECK(r0.final_config == init);
    CHECK(r0.proposals == 0);
    spec.sweeps = 200;
    const auto a = run_chain(spec, fw, init), b = run_chain(spec, fw, init);
    CHECK(a.final_config == b.final_config);
    CHECK(a.mean_height == b.mean_height);
    CHECK(a.accepted == b.accepted);
    CHECK(a.proposals == 200 * 121);
    spec.seed = 6;
    CHECK_FALSE(run_chain(spec, fw, init).final_config == a.final_config);
    spec.volume_target = r0.initial_volume + 20.0;
    const auto v = run_chain(spec, fw, init);
    CHECK(v.final_volume == r0.initial_volume + 20.0);
    CHECK(volume(height_field(v.final_config)) == v.final_volume);
}

TEST_CASE("hex dump: one lowercase digit per face") {
    const auto cfg = init_config(3, 4, InitPattern::brickwork_horizontal);
    const std::string hex = cfg.hex_dump();
    CHECK(hex.size() == 2 * 3 + 2);
    for (char ch : hex) CHECK((ch == '\n' || (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f')));
    CHECK(hex == "505\n505\n");
}

TEST_CASE("slopes: frozen phases and the slope diamond") {
    const auto fs = frozen_slopes();
    CHECK(fs.size() == 4);
    for (const auto& s : fs) CHECK(std::abs(s.dc) + std::abs(s.dr) == doctest::Approx(0.5));
    const int n = 31;
    // linear fields with a frozen slope are frozen everywhere
    for (const auto& s : fs) {
        std::vector<double> h(static_cast<size_t>(n * n));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) h[static_cast<size_t>(r * n + c)] = s.dc * c + s.dr * r;
        const auto a = analyse_slopes(h, n, n);
        for (double f : a.corner_frozen_fraction) CHECK(f == doctest::Approx(1.0));
        CHECK(std::abs(a.central_l1 - 0.5) < 1e-12);
        CHECK_FALSE(a.central_inside);
        const Slope mid = local_slope(h, n, n, 15, 15);
        CHECK(std::abs(mid.dc - s.dc) < 1e-12);
        CHECK(std::abs(mid.dr - s.dr) < 1e-12);
    }
    // aligned brickwork is flat on even strides
    for (auto p : {InitPattern::brickwork_horizontal, InitPattern::brickwork_vertical}) {
        const auto h = height_field(init_config(32, 32, p));
        const auto a = analyse_slopes(h, n, n);
        CHECK(a.central_l1 < 1e-12);
        CHECK(a.central_inside);
        for (double f : a.corner_frozen_fraction) CHECK(f == 0.0);
    }
}
