#include "dimers/sampler.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace dimers {

namespace {

constexpr std::uint8_t kN = 1, kW = 2, kS = 4, kE = 8;

bool is_black(int r, int c) { return ((r + c) & 1) == 0; }

}  // namespace

DimerConfig::DimerConfig(int H, int W) : H_(H), W_(W) {
    if (H < 2 || W < 2) fail(ErrorCode::invalid_argument, "patch must have at least 2x2 vertices");
    codes_.assign(static_cast<size_t>((H - 1) * (W - 1)), 0);
}

bool DimerConfig::has_h(int r, int c) const {
    if (r < H_ - 1) return code(r, c) & kN;
    return code(r - 1, c) & kS;
}

bool DimerConfig::has_v(int r, int c) const {
    if (c < W_ - 1) return code(r, c) & kW;
    return code(r, c - 1) & kE;
}

void DimerConfig::set_h(int r, int c, bool on) {
    auto apply = [on](std::uint8_t& x, std::uint8_t bit) { x = on ? (x | bit) : (x & ~bit); };
    if (r < H_ - 1) apply(code(r, c), kN);
    if (r > 0) apply(code(r - 1, c), kS);
}

void DimerConfig::set_v(int r, int c, bool on) {
    auto apply = [on](std::uint8_t& x, std::uint8_t bit) { x = on ? (x | bit) : (x & ~bit); };
    if (c < W_ - 1) apply(code(r, c), kW);
    if (c > 0) apply(code(r, c - 1), kE);
}

ValidationReport DimerConfig::check() const {
    ValidationReport rep;
    const int R = H_ - 1, C = W_ - 1;
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            if (r + 1 < R && bool(code(r, c) & kS) != bool(code(r + 1, c) & kN))
                rep.push_back({"south/north bits disagree", {r, c}});
            if (c + 1 < C && bool(code(r, c) & kE) != bool(code(r, c + 1) & kW))
                rep.push_back({"east/west bits disagree", {r, c}});
        }
    for (int r = 0; r < H_; ++r)
        for (int c = 0; c < W_; ++c) {
            int deg = 0;
            if (c > 0 && has_h(r, c - 1)) ++deg;
            if (c + 1 < W_ && has_h(r, c)) ++deg;
            if (r > 0 && has_v(r - 1, c)) ++deg;
            if (r + 1 < H_ && has_v(r, c)) ++deg;
            if (deg != 1) rep.push_back({"vertex not covered exactly once", {r, c}});
        }
    return rep;
}

std::string DimerConfig::hex_dump() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(codes_.size() + static_cast<size_t>(H_));
    for (int r = 0; r < H_ - 1; ++r) {
        for (int c = 0; c < W_ - 1; ++c) out.push_back(digits[code(r, c)]);
        out.push_back('\n');
    }
    return out;
}

DimerConfig init_config(int H, int W, InitPattern pattern) {
    DimerConfig cfg(H, W);
    if (pattern == InitPattern::brickwork_horizontal) {
        if (W % 2) fail(ErrorCode::invalid_argument, "horizontal pattern needs an even number of columns");
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; c += 2) cfg.set_h(r, c, true);
    } else {
        if (H % 2) fail(ErrorCode::invalid_argument, "vertical pattern needs an even number of rows");
        for (int r = 0; r < H; r += 2)
            for (int c = 0; c < W; ++c) cfg.set_v(r, c, true);
    }
    return cfg;
}

FlipKind flippable(const DimerConfig& cfg, int r, int c) {
    const auto x = cfg.code(r, c);
    if (x == 5) return FlipKind::vertical_to_horizontal;
    if (x == 10) return FlipKind::horizontal_to_vertical;
    return FlipKind::none;
}

void flip(DimerConfig& cfg, int r, int c) {
    if (r < 0 || c < 0 || r >= cfg.face_rows() || c >= cfg.face_cols())
        fail(ErrorCode::invalid_argument, "face out of range");
    if (flippable(cfg, r, c) == FlipKind::none) fail(ErrorCode::invalid_argument, "face is not flippable");
    cfg.code(r, c) ^= 15;
    if (r > 0) cfg.code(r - 1, c) ^= kS;
    if (r + 1 < cfg.face_rows()) cfg.code(r + 1, c) ^= kN;
    if (c > 0) cfg.code(r, c - 1) ^= kE;
    if (c + 1 < cfg.face_cols()) cfg.code(r, c + 1) ^= kW;
}

int flip_height_change(const DimerConfig& cfg, int r, int c) {
    // Only the north edge term changes along the path into this face.
    const int sign = is_black(r, c) ? 1 : -1;
    return cfg.code(r, c) == 5 ? -sign : sign;
}

EdgeWeights EdgeWeights::uniform(int H, int W) {
    EdgeWeights w;
    w.H = H;
    w.W = W;
    w.h.assign(static_cast<size_t>(H * (W - 1)), 1.0);
    w.v.assign(static_cast<size_t>((H - 1) * W), 1.0);
    return w;
}

double EdgeWeights::face_ratio(int r, int c) const {
    const double n = h[static_cast<size_t>(r * (W - 1) + c)];
    const double s = h[static_cast<size_t>((r + 1) * (W - 1) + c)];
    const double wv = v[static_cast<size_t>(r * W + c)];
    const double e = v[static_cast<size_t>(r * W + c + 1)];
    return n * s / (e * wv);
}

std::vector<double> height_field(const DimerConfig& cfg, const DimerConfig* reference) {
    if (reference && (reference->H() != cfg.H() || reference->W() != cfg.W()))
        fail(ErrorCode::invalid_argument, "reference configuration has a different shape");
    const int R = cfg.face_rows(), C = cfg.face_cols();
    auto omega_h = [&](int r, int c) { return reference ? (reference->has_h(r, c) ? 1.0 : 0.0) : 0.25; };
    auto omega_v = [&](int r, int c) { return reference ? (reference->has_v(r, c) ? 1.0 : 0.0) : 0.25; };
    // Crossing a horizontal edge southwards: the vertex on the right is the west end (r, c).
    auto cross_south = [&](int r, int c) {
        const double s = is_black(r, c) ? 1.0 : -1.0;
        return s * ((cfg.has_h(r, c) ? 1.0 : 0.0) - omega_h(r, c));
    };
    // Crossing a vertical edge eastwards: the vertex on the right is the south end (r+1, c).
    auto cross_east = [&](int r, int c) {
        const double s = is_black(r + 1, c) ? 1.0 : -1.0;
        return s * ((cfg.has_v(r, c) ? 1.0 : 0.0) - omega_v(r, c));
    };
    std::vector<double> h(static_cast<size_t>(R * C));
    h[0] = cross_south(0, 0);
    for (int c = 1; c < C; ++c) h[static_cast<size_t>(c)] = h[static_cast<size_t>(c - 1)] + cross_east(0, c);
    for (int r = 1; r < R; ++r)
        for (int c = 0; c < C; ++c)
            h[static_cast<size_t>(r * C + c)] = h[static_cast<size_t>((r - 1) * C + c)] + cross_south(r, c);
    return h;
}

double volume(const std::vector<double>& heights) {
    double v = 0.0;
    for (double x : heights) v += x;
    return v;
}

double configuration_weight(const DimerConfig& cfg, const EdgeWeights& w) {
    double p = 1.0;
    for (int r = 0; r < cfg.H(); ++r)
        for (int c = 0; c + 1 < cfg.W(); ++c)
            if (cfg.has_h(r, c)) p *= w.h[static_cast<size_t>(r * (cfg.W() - 1) + c)];
    for (int r = 0; r + 1 < cfg.H(); ++r)
        for (int c = 0; c < cfg.W(); ++c)
            if (cfg.has_v(r, c)) p *= w.v[static_cast<size_t>(r * cfg.W() + c)];
    return p;
}

std::map<DimerConfig, double> brute_force_distribution(int H, int W, const EdgeWeights& w, int max_edges) {
    const int edges = H * (W - 1) + (H - 1) * W;
    if (edges > max_edges) fail(ErrorCode::invalid_argument, "patch too large for enumeration");
    if (w.H != H || w.W != W) fail(ErrorCode::invalid_argument, "edge weights do not match the patch");
    DimerConfig cfg(H, W);
    std::vector<char> used(static_cast<size_t>(H * W), 0);
    std::map<DimerConfig, double> out;
    double Z = 0.0;
    std::function<void(int)> rec = [&](int idx) {
        while (idx < H * W && used[static_cast<size_t>(idx)]) ++idx;
        if (idx == H * W) {
            const double p = configuration_weight(cfg, w);
            out[cfg] = p;
            Z += p;
            return;
        }
        const int r = idx / W, c = idx % W;
        used[static_cast<size_t>(idx)] = 1;
        if (c + 1 < W && !used[static_cast<size_t>(idx + 1)]) {
            used[static_cast<size_t>(idx + 1)] = 1;
            cfg.set_h(r, c, true);
            rec(idx + 1);
            cfg.set_h(r, c, false);
            used[static_cast<size_t>(idx + 1)] = 0;
        }
        if (r + 1 < H && !used[static_cast<size_t>(idx + W)]) {
            used[static_cast<size_t>(idx + W)] = 1;
            cfg.set_v(r, c, true);
            rec(idx + 1);
            cfg.set_v(r, c, false);
            used[static_cast<size_t>(idx + W)] = 0;
        }
        used[static_cast<size_t>(idx)] = 0;
    };
    rec(0);
    if (out.empty()) fail(ErrorCode::invalid_argument, "patch admits no perfect matching");
    for (auto& kv : out) kv.second /= Z;
    return out;
}

double kasteleyn_partition(const EdgeWeights& w) {
    const int H = w.H, W = w.W;
    auto sign_h = [](int, int) { return 1.0; };
    auto sign_v = [](int, int c) { return (c % 2) ? -1.0 : 1.0; };
    for (int r = 0; r + 1 < H; ++r)
        for (int c = 0; c + 1 < W; ++c) {
            const double alt = sign_h(r, c) * sign_h(r + 1, c) / (sign_v(r, c) * sign_v(r, c + 1));
            if (alt > 0) fail(ErrorCode::numeric, "sign assignment violates the face condition");
        }
    std::vector<int> index(static_cast<size_t>(H * W));
    int nb = 0, nw = 0;
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) index[static_cast<size_t>(r * W + c)] = is_black(r, c) ? nb++ : nw++;
    if (nb != nw) return 0.0;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nw, nb);
    auto add = [&](int r1, int c1, int r2, int c2, double val) {
        if (is_black(r1, c1)) std::swap(r1, r2), std::swap(c1, c2);
        K(index[static_cast<size_t>(r1 * W + c1)], index[static_cast<size_t>(r2 * W + c2)]) = val;
    };
    for (int r = 0; r < H; ++r)
        for (int c = 0; c + 1 < W; ++c) add(r, c, r, c + 1, sign_h(r, c) * w.h[static_cast<size_t>(r * (W - 1) + c)]);
    for (int r = 0; r + 1 < H; ++r)
        for (int c = 0; c < W; ++c) add(r, c, r + 1, c, sign_v(r, c) * w.v[static_cast<size_t>(r * W + c)]);
    return std::abs(K.partialPivLu().determinant());
}

namespace {

double accept_ratio(const DimerConfig& cfg, int r, int c, double wf) {
    return cfg.code(r, c) == 10 ? wf : 1.0 / wf;
}

}  // namespace

bool mh_step(DimerConfig& cfg, const std::vector<double>& face_weights, Rng& rng) {
    const int R = cfg.face_rows(), C = cfg.face_cols();
    const int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(R * C)));
    const int r = f / C, c = f % C;
    if (flippable(cfg, r, c) == FlipKind::none) return false;
    const double ratio = accept_ratio(cfg, r, c, face_weights[static_cast<size_t>(f)]);
    if (ratio >= 1.0 || rng.uniform() < ratio) {
        flip(cfg, r, c);
        return true;
    }
    return false;
}

void VolumeChain::IndexedSet::insert(int f) {
    if (pos[static_cast<size_t>(f)] >= 0) return;
    pos[static_cast<size_t>(f)] = static_cast<int>(items.size());
    items.push_back(f);
}

void VolumeChain::IndexedSet::erase(int f) {
    const int p = pos[static_cast<size_t>(f)];
    if (p < 0) return;
    const int last = items.back();
    items[static_cast<size_t>(p)] = last;
    pos[static_cast<size_t>(last)] = p;
    items.pop_back();
    pos[static_cast<size_t>(f)] = -1;
}

VolumeChain::VolumeChain(DimerConfig cfg, const std::vector<double>& face_weights)
    : cfg_(std::move(cfg)), w_(face_weights) {
    const size_t F = static_cast<size_t>(cfg_.face_rows() * cfg_.face_cols());
    if (w_.size() != F) fail(ErrorCode::invalid_argument, "face weight count does not match the patch");
    heights_ = height_field(cfg_);
    volume_ = dimers::volume(heights_);
    up_.pos.assign(F, -1);
    down_.pos.assign(F, -1);
    for (size_t f = 0; f < F; ++f) classify(static_cast<int>(f));
}

void VolumeChain::classify(int f) {
    const int C = cfg_.face_cols();
    const int r = f / C, c = f % C;
    up_.erase(f);
    down_.erase(f);
    if (flippable(cfg_, r, c) == FlipKind::none) return;
    if (flip_height_change(cfg_, r, c) > 0)
        up_.insert(f);
    else
        down_.insert(f);
}

void VolumeChain::flip_face(int f) {
    const int R = cfg_.face_rows(), C = cfg_.face_cols();
    const int r = f / C, c = f % C;
    const int dh = flip_height_change(cfg_, r, c);
    flip(cfg_, r, c);
    heights_[static_cast<size_t>(f)] += dh;
    volume_ += dh;
    classify(f);
    if (r > 0) classify(f - C);
    if (r + 1 < R) classify(f + C);
    if (c > 0) classify(f - 1);
    if (c + 1 < C) classify(f + 1);
}

void VolumeChain::drive_to_volume(double target, Rng& rng) {
    while (std::abs(volume_ - target) > 0.5) {
        IndexedSet& s = volume_ < target ? up_ : down_;
        if (s.items.empty()) fail(ErrorCode::numeric, "volume target is out of reach");
        flip_face(s.items[static_cast<size_t>(rng.below(s.items.size()))]);
    }
}

bool VolumeChain::step(Rng& rng) {
    if (up_.items.empty() || down_.items.empty()) fail(ErrorCode::numeric, "volume chain stall: no flippable pair");
    const int C = cfg_.face_cols();
    const double nu = static_cast<double>(up_.items.size()), nd = static_cast<double>(down_.items.size());
    const int a = up_.items[static_cast<size_t>(rng.below(up_.items.size()))];
    const int b = down_.items[static_cast<size_t>(rng.below(down_.items.size()))];
    const double ra = accept_ratio(cfg_, a / C, a % C, w_[static_cast<size_t>(a)]);
    flip_face(a);
    if (down_.pos[static_cast<size_t>(b)] < 0) {
        flip_face(a);
        return false;
    }
    const double rb = accept_ratio(cfg_, b / C, b % C, w_[static_cast<size_t>(b)]);
    flip_face(b);
    // The pair is drawn uniformly, so the reverse proposal has probability 1/(|U'||D'|).
    const double ratio = ra * rb * (nu * nd) /
                         (static_cast<double>(up_.items.size()) * static_cast<double>(down_.items.size()));
    if (ratio >= 1.0 || rng.uniform() < ratio) return true;
    flip_face(b);
    flip_face(a);
    return false;
}

bool mh_step_volume(VolumeChain& chain, Rng& rng) { return chain.step(rng); }

std::pair<double, double> volume_range(const DimerConfig& cfg) {
    const std::vector<double> ones(static_cast<size_t>(cfg.face_rows() * cfg.face_cols()), 1.0);
    Rng rng(0);
    VolumeChain lo(cfg, ones), hi(cfg, ones);
    while (lo.down_count() > 0) lo.drive_to_volume(lo.volume() - 1.0, rng);
    while (hi.up_count() > 0) hi.drive_to_volume(hi.volume() + 1.0, rng);
    return {lo.volume(), hi.volume()};
}

ChainResult run_chain(const ChainSpec& spec, const std::vector<double>& face_weights, const DimerConfig& init) {
    if (spec.sweeps < 0) fail(ErrorCode::invalid_argument, "sweeps must be non-negative");
    if (spec.record_interval < 1) fail(ErrorCode::invalid_argument, "record_interval must be at least 1");
    if (!(spec.burn_in_fraction >= 0.0 && spec.burn_in_fraction < 1.0))
        fail(ErrorCode::invalid_argument, "burn_in_fraction must lie in [0, 1)");
    const auto bad = init.check();
    if (!bad.empty()) fail(ErrorCode::validation, "initial configuration: " + bad.front().what);
    const size_t F = static_cast<size_t>(init.face_rows() * init.face_cols());
    if (face_weights.size() != F) fail(ErrorCode::invalid_argument, "face weight count does not match the patch");
    for (double x : face_weights)
        if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::invalid_argument, "face weights must be positive");

    ChainResult res;
    res.final_config = init;
    res.mean_height = height_field(init);
    res.initial_volume = res.final_volume = volume(res.mean_height);
    if (spec.sweeps == 0) return res;

    Rng rng(spec.seed);
    const std::int64_t burn = static_cast<std::int64_t>(std::floor(spec.burn_in_fraction * static_cast<double>(spec.sweeps)));
    std::vector<double> acc(F, 0.0);
    auto record = [&](const std::vector<double>& h) {
        for (size_t i = 0; i < F; ++i) acc[i] += h[i];
        ++res.samples;
    };

    if (spec.volume_target) {
        VolumeChain chain(init, face_weights);
        chain.drive_to_volume(*spec.volume_target, rng);
        res.initial_volume = chain.volume();
        for (std::int64_t s = 0; s < spec.sweeps; ++s) {
            for (size_t k = 0; k < F; ++k) {
                ++res.proposals;
                if (chain.step(rng)) ++res.accepted;
            }
            if (s >= burn && (s - burn) % spec.record_interval == 0) record(chain.heights());
        }
        res.final_config = chain.config();
        res.final_volume = chain.volume();
    } else {
        DimerConfig cfg = init;
        for (std::int64_t s = 0; s < spec.sweeps; ++s) {
            for (size_t k = 0; k < F; ++k) {
                ++res.proposals;
                if (mh_step(cfg, face_weights, rng)) ++res.accepted;
            }
            if (s >= burn && (s - burn) % spec.record_interval == 0) record(height_field(cfg));
        }
        res.final_config = cfg;
        res.final_volume = volume(height_field(cfg));
    }
    for (size_t i = 0; i < F; ++i) res.mean_height[i] = acc[i] / static_cast<double>(res.samples);
    res.acceptance_rate = static_cast<double>(res.accepted) / static_cast<double>(res.proposals);
    return res;
}

Slope local_slope(const std::vector<double>& heights, int rows, int cols, int r, int c, int half_width) {
    auto span = [](int centre, int n, int hw) {
        int lo = std::max(0, centre - hw), hi = std::min(n - 1, centre + hw);
        if ((hi - lo) % 2) {
            if (hi < n - 1 && hi - centre < centre - lo) ++hi;
            else if (lo > 0) --lo;
            else --hi;
        }
        return std::pair<int, int>{lo, hi};
    };
    auto at = [&](int rr, int cc) { return heights[static_cast<size_t>(rr * cols + cc)]; };
    Slope s;
    const auto [c0, c1] = span(c, cols, half_width);
    const auto [r0, r1] = span(r, rows, half_width);
    if (c1 > c0) s.dc = (at(r, c1) - at(r, c0)) / (c1 - c0);
    if (r1 > r0) s.dr = (at(r1, c) - at(r0, c)) / (r1 - r0);
    return s;
}

std::vector<Slope> frozen_slopes() {
    // White vertex matched to its north, south, west or east neighbour everywhere.
    const int n = 24;
    const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    std::vector<Slope> out;
    for (int k = 0; k < 4; ++k) {
        DimerConfig cfg(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                if (is_black(r, c)) continue;
                const int r2 = r + dr[k], c2 = c + dc[k];
                if (r2 < 0 || c2 < 0 || r2 >= n || c2 >= n) continue;
                if (dr[k]) cfg.set_v(std::min(r, r2), c, true);
                else cfg.set_h(r, std::min(c, c2), true);
            }
        const auto h = height_field(cfg);
        out.push_back(local_slope(h, n - 1, n - 1, n / 2, n / 2, 4));
    }
    return out;
}

SlopeAnalysis analyse_slopes(const std::vector<double>& heights, int rows, int cols, double tol) {
    if (static_cast<int>(heights.size()) != rows * cols || rows < 8 || cols < 8)
        fail(ErrorCode::invalid_argument, "slope analysis needs a height field of at least 8 x 8 faces");
    const auto frozen = frozen_slopes();
    SlopeAnalysis out;
    const int qr = rows / 4, qc = cols / 4;
    const int origins[4][2] = {{0, 0}, {0, cols - qc}, {rows - qr, 0}, {rows - qr, cols - qc}};
    for (int k = 0; k < 4; ++k) {
        int hit = 0;
        for (int r = origins[k][0]; r < origins[k][0] + qr; ++r)
            for (int c = origins[k][1]; c < origins[k][1] + qc; ++c) {
                const Slope s = local_slope(heights, rows, cols, r, c);
                for (const auto& f : frozen)
                    if (std::abs(s.dc - f.dc) + std::abs(s.dr - f.dr) < tol) {
                        ++hit;
                        break;
                    }
            }
        out.corner_frozen_fraction[static_cast<size_t>(k)] = static_cast<double>(hit) / (qr * qc);
    }
    const int br = std::max(1, rows / 16), bc = std::max(1, cols / 16);
    int n = 0;
    for (int r = rows / 2 - br; r < rows / 2 + br; ++r)
        for (int c = cols / 2 - bc; c < cols / 2 + bc; ++c) {
            const Slope s = local_slope(heights, rows, cols, r, c);
            out.central.dc += s.dc;
            out.central.dr += s.dr;
            ++n;
        }
    out.central.dc /= n;
    out.central.dr /= n;
    out.central_l1 = std::abs(out.central.dc) + std::abs(out.central.dr);
    out.central_inside = out.central_l1 < 0.5 - tol;
    return out;
}

}  // namespace dimers
