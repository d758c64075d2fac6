#include "dimers/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dimers {

RVec marked_points(const HarnackData& h) {
    RVec pts;
    for (const auto& p : h.alphas) {
        pts.push_back(p.p_minus);
        pts.push_back(p.p_plus);
    }
    for (const auto& p : h.betas) {
        pts.push_back(p.p_minus);
        pts.push_back(p.p_plus);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

ValidationReport validate_harnack(const SchottkyData& data, const HarnackData& h, double min_distance) {
    ValidationReport rep;
    if (h.alphas.empty()) rep.push_back({"harnack data needs at least one alpha pair", {}});
    if (h.betas.empty()) rep.push_back({"harnack data needs at least one beta pair", {}});
    auto finite_check = [&](const std::vector<TrackPair>& v, const char* name) {
        for (size_t i = 0; i < v.size(); ++i)
            if (!std::isfinite(v[i].p_minus) || !std::isfinite(v[i].p_plus))
                rep.push_back({std::string(name) + " marked point is not finite", {static_cast<int>(i) + 1}});
    };
    finite_check(h.alphas, "alpha");
    finite_check(h.betas, "beta");
    if (!rep.empty()) return rep;

    auto lo_hi = [](const std::vector<TrackPair>& v, bool minus) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& p : v) {
            const double x = minus ? p.p_minus : p.p_plus;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return std::pair<double, double>{lo, hi};
    };
    const auto bm = lo_hi(h.betas, true);
    const auto ap = lo_hi(h.alphas, false);
    const auto bp = lo_hi(h.betas, false);
    const auto am = lo_hi(h.alphas, true);
    if (!(bm.second < ap.first && ap.second < bp.first && bp.second < am.first))
        rep.push_back({"cluster ordering violated (need beta- < alpha+ < beta+ < alpha-)", {}});

    const RVec pts = marked_points(h);
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i] == pts[i - 1]) rep.push_back({"marked points coincide", {static_cast<int>(i)}});

    // discs never meet the real axis for valid U2 data, but the margin is still enforced
    for (int n = 1; n <= data.genus(); ++n) {
        const auto& G = data.generators[n - 1];
        if (!(G.A.imag() > 0.0 && G.mu > 0.0 && G.mu < 1.0)) continue;
        const Circle c = hole_disc_closed_form(G);
        for (double x : pts) {
            const double d = std::abs(cplx{x, 0.0} - c.center) - c.radius;
            const double d2 = std::abs(cplx{x, 0.0} - std::conj(c.center)) - c.radius;
            if (std::min(d, d2) < min_distance) rep.push_back({"marked point inside or too close to a Schottky disc", {n}});
        }
    }
    return rep;
}

Surface::Surface(SchottkyData data, int max_letters) : data_(std::move(data)), max_letters_(max_letters) {
    group_ = enumerate_words(data_, max_letters_, CosetFilter::full());
    for (int n = 1; n <= genus(); ++n) {
        cosets_.push_back(enumerate_words(data_, max_letters_, CosetFilter::right(n)));
        holes_.push_back(hole_disc_closed_form(data_.generators[n - 1]));
    }
}

bool Surface::in_disc(cplx z, double margin) const {
    for (const auto& c : holes_) {
        if (std::abs(z - c.center) <= c.radius + margin) return true;
        if (std::abs(z - std::conj(c.center)) <= c.radius + margin) return true;
    }
    return false;
}

void Surface::check_outside(cplx z) const {
    // points on the circles themselves are allowed
    for (const auto& c : holes_) {
        const double tol = 1e-12 * (1.0 + c.radius);
        if (std::abs(z - c.center) < c.radius - tol || std::abs(z - std::conj(c.center)) < c.radius - tol)
            fail(ErrorCode::invalid_argument, "point lies inside a Schottky disc");
    }
}

PeriodMatrixResult Surface::period_matrix() const {
    const int g = genus();
    if (g < 1) fail(ErrorCode::invalid_argument, "period matrix needs genus >= 1");
    CVec b(static_cast<size_t>(g * g));
    std::vector<double> level_max(static_cast<size_t>(max_letters_ + 1), 0.0);
    for (int n = 1; n <= g; ++n) {
        const cplx Bn = std::conj(data_.generators[n - 1].A);
        const cplx An = data_.generators[n - 1].A;
        for (int m = 1; m <= g; ++m) {
            const cplx Bm = std::conj(data_.generators[m - 1].A);
            const cplx Am = data_.generators[m - 1].A;
            cplx total = (n == m) ? cplx{std::log(data_.generators[n - 1].mu), 0.0} : cplx{};
            const CosetFilter f = (n == m) ? CosetFilter::double_coset_excluding_identity(m, n)
                                           : CosetFilter::double_coset(m, n);
            for (const auto& wm : group_) {
                if (!f.accepts(wm.word)) continue;
                const cplx z1 = Bm, z2 = wm.map.apply(Bn), z3 = Am, z4 = wm.map.apply(An);
                const cplx cr = (z1 - z2) / (z2 - z3) * ((z3 - z4) / (z4 - z1));
                const cplx term = std::log(cr);
                total += term;
                auto& lm = level_max[static_cast<size_t>(wm.word.mass())];
                lm = std::max(lm, std::abs(term));
            }
            b[static_cast<size_t>((n - 1) * g + (m - 1))] = total / kTwoPiI;
        }
    }
    for (int k = 3; k <= max_letters_; ++k) {
        const double prev = level_max[static_cast<size_t>(k - 1)], cur = level_max[static_cast<size_t>(k)];
        if (prev > 1e-13 && cur > 0.9 * prev)
            fail(ErrorCode::numeric, "period matrix series terms are not decaying (mass " + std::to_string(k) + ")");
    }
    double asym = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            cplx& x = b[static_cast<size_t>(i * g + j)];
            cplx& y = b[static_cast<size_t>(j * g + i)];
            asym = std::max(asym, std::abs(x - y));
            const cplx avg = 0.5 * (x + y);
            x = avg;
            y = avg;
        }
    return {PeriodMatrix(g, std::move(b)), asym};
}

cplx Surface::holomorphic_differential(int n, cplx z) const {
    if (n < 1 || n > genus()) fail(ErrorCode::invalid_argument, "differential index out of range");
    check_outside(z);
    const cplx An = data_.generators[n - 1].A;
    const cplx Bn = std::conj(An);
    cplx total{};
    for (const auto& wm : right_coset(n)) total += 1.0 / (z - wm.map.apply(Bn)) - 1.0 / (z - wm.map.apply(An));
    return total / kTwoPiI;
}

CVec Surface::abel(cplx P) const {
    check_outside(P);
    CVec out(static_cast<size_t>(genus()));
    for (int n = 1; n <= genus(); ++n) {
        const cplx An = data_.generators[n - 1].A;
        const cplx Bn = std::conj(An);
        cplx total{};
        for (const auto& wm : right_coset(n)) total += log_ratio(P, wm.map.apply(Bn), wm.map.apply(An));
        out[static_cast<size_t>(n - 1)] = total / kTwoPiI;
    }
    return out;
}

RVec Surface::abel_real(double x) const {
    const CVec a = abel(cplx{x, 0.0});
    RVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].imag()) > 1e-9) fail(ErrorCode::numeric, "Abel map on the real oval has an imaginary part");
        out[i] = a[i].real();
    }
    return out;
}

double Surface::abel_increment(double P, double Q, int n) const {
    if (n < 1 || n > genus()) fail(ErrorCode::invalid_argument, "Abel index out of range");
    if (P == Q) return 0.0;
    const double d = abel_real(P)[static_cast<size_t>(n - 1)] - abel_real(Q)[static_cast<size_t>(n - 1)];
    double r = d - std::floor(d);
    if (r >= 1.0) r -= 1.0;
    return r;
}

cplx Surface::zeta_pair(const TrackPair& pair, cplx z) const {
    const double pm = pair.p_minus, pp = pair.p_plus;
    if (z == cplx{pm, 0.0} || z == cplx{pp, 0.0}) fail(ErrorCode::numeric, "zeta evaluated at a marked point");
    cplx total{};
    for (const auto& wm : group_) {
        if (wm.word.is_identity()) {
            if (z.imag() == 0.0) {
                // boundary value from the upper half-plane
                const double x = z.real();
                const double re = std::log(std::abs((x - pm) / (x - pp)));
                const double im = kPi * ((x < pm ? 1.0 : 0.0) - (x < pp ? 1.0 : 0.0));
                total += cplx{re, im};
            } else {
                total += log_ratio(z, cplx{pm, 0.0}, cplx{pp, 0.0});
            }
            continue;
        }
        const cplx a = wm.map.apply(cplx{pm, 0.0});
        const cplx b = wm.map.apply(cplx{pp, 0.0});
        if (z == a || z == b) fail(ErrorCode::numeric, "zeta evaluated at a pole");
        total += log_ratio(z, a, b);
    }
    return total;
}

cplx Surface::zeta_pair(const TrackPair& pair, const ExtComplex& z) const {
    if (z.infinite) return {0.0, 0.0};
    return zeta_pair(pair, z.z);
}

cplx Surface::dzeta_pair(const TrackPair& pair, cplx z) const {
    cplx total{};
    for (const auto& wm : group_) {
        const cplx a = wm.map.apply(cplx{pair.p_minus, 0.0});
        const cplx b = wm.map.apply(cplx{pair.p_plus, 0.0});
        if (z == a || z == b) fail(ErrorCode::numeric, "dzeta evaluated at a pole");
        total += 1.0 / (z - a) - 1.0 / (z - b);
    }
    return total;
}

cplx Surface::zeta1(const HarnackData& h, cplx z) const {
    cplx s{};
    for (const auto& p : h.alphas) s += zeta_pair(p, z);
    return s;
}
cplx Surface::zeta2(const HarnackData& h, cplx z) const {
    cplx s{};
    for (const auto& p : h.betas) s += zeta_pair(p, z);
    return s;
}
cplx Surface::dzeta1(const HarnackData& h, cplx z) const {
    cplx s{};
    for (const auto& p : h.alphas) s += dzeta_pair(p, z);
    return s;
}
cplx Surface::dzeta2(const HarnackData& h, cplx z) const {
    cplx s{};
    for (const auto& p : h.betas) s += dzeta_pair(p, z);
    return s;
}

AmoebaPolygonSample Surface::amoeba_map(const HarnackData& h, cplx z) const {
    check_outside(z);
    const cplx z1 = zeta1(h, z);
    const cplx z2 = zeta2(h, z);
    AmoebaPolygonSample s;
    s.z = z;
    s.x1 = z1.real();
    s.x2 = z2.real();
    s.y1 = z1.imag();
    s.y2 = z2.imag();
    s.s1 = -s.y2 / kPi;
    s.s2 = s.y1 / kPi;
    return s;
}

std::vector<BoundaryPolyline> Surface::trace_amoeba_boundary(const HarnackData& h, int samples, double clip) const {
    if (samples < 8) fail(ErrorCode::invalid_argument, "need at least 8 samples per component");
    std::vector<BoundaryPolyline> out;
    // real oval through the angle x = tan(phi/2)
    const RVec pts = marked_points(h);
    RVec phis;
    for (double x : pts) phis.push_back(2.0 * std::atan(x));
    const size_t k = phis.size();
    for (size_t arc = 0; arc < k; ++arc) {
        // arc 0 passes through infinity: from the largest point round to the smallest
        double lo, hi;
        if (arc == 0) {
            lo = phis[k - 1];
            hi = phis[0] + 2.0 * kPi;
        } else {
            lo = phis[arc - 1];
            hi = phis[arc];
        }
        BoundaryPolyline pl;
        pl.kind = BoundaryKind::real_arc;
        pl.index = static_cast<int>(arc);
        // cosine spacing concentrates samples near the tentacle ends
        for (int i = 0; i < samples; ++i) {
            const double t = (i + 0.5) / samples;
            const double u = 0.5 * (1.0 - std::cos(kPi * t));
            double phi = lo + (hi - lo) * u;
            if (std::abs(std::remainder(phi, 2.0 * kPi) - kPi) < 1e-12 || std::abs(std::remainder(phi, 2.0 * kPi) + kPi) < 1e-12)
                phi += 1e-9;
            const double x = std::tan(0.5 * phi);
            AmoebaPolygonSample s = amoeba_map(h, cplx{x, 0.0});
            if (std::abs(s.x1) > clip || std::abs(s.x2) > clip) continue;
            pl.points.push_back(s);
        }
        out.push_back(std::move(pl));
    }
    for (int n = 1; n <= genus(); ++n) {
        BoundaryPolyline pl;
        pl.kind = BoundaryKind::oval;
        pl.index = n;
        const Circle& c = hole(n);
        for (int i = 0; i < samples; ++i) {
            const double t = 2.0 * kPi * i / samples;
            pl.points.push_back(amoeba_map(h, c.center + c.radius * std::polar(1.0, t)));
        }
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace dimers
