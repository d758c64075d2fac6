#include "dimers/ronkin.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace dimers {

namespace {

struct Obstacle {
    cplx center;
    double radius;
};

std::vector<Obstacle> obstacles(const Surface& s, const HarnackData& h) {
    std::vector<Obstacle> out;
    for (int n = 1; n <= s.genus(); ++n) {
        const Circle& c = s.hole(n);
        out.push_back({c.center, c.radius});
        out.push_back({std::conj(c.center), c.radius});
    }
    for (double x : marked_points(h)) out.push_back({cplx{x, 0.0}, 0.0});
    return out;
}

double segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

bool path_clear(const std::vector<Obstacle>& obs, const std::vector<cplx>& wp, double margin) {
    const cplx target = wp.back();
    for (size_t i = 0; i + 1 < wp.size(); ++i) {
        if (wp[i].imag() < 0.0 || wp[i + 1].imag() < 0.0) return false;
        for (const auto& o : obs) {
            // the target may sit closer than the margin; then only half its own clearance is demanded
            const double tclear = std::abs(target - o.center) - o.radius;
            const double m = std::min(margin, 0.5 * std::max(tclear, 0.0));
            if (segment_distance(o.center, wp[i], wp[i + 1]) - o.radius < m) return false;
        }
    }
    return true;
}

double scale_of(const Surface& s, const HarnackData& h) {
    double L = 1.0;
    for (double x : marked_points(h)) L = std::max(L, std::abs(x));
    for (int n = 1; n <= s.genus(); ++n) L = std::max(L, std::abs(s.hole(n).center) + s.hole(n).radius);
    return L;
}

// Globally adaptive 15-point Kronrod integration of f over [0,1]. Stops at the absolute
// tolerance or when the remaining error is at the rounding floor of the L1 norm.
template <class F>
double adaptive_gk(const F& f, double tol, double& err_total) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Piece {
        double a, b, val, err, l1;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    auto eval = [&](double a, double b) {
        Piece p{a, b, 0.0, 0.0, 0.0};
        p.val = GK::integrate(f, a, b, 0, 0.0, &p.err, &p.l1);
        return p;
    };
    std::priority_queue<Piece> q;
    q.push(eval(0.0, 1.0));
    double val = q.top().val, err = q.top().err, l1 = q.top().l1;
    for (int it = 0; it < 4000; ++it) {
        if (err <= tol || err <= 1e3 * std::numeric_limits<double>::epsilon() * l1) break;
        const Piece p = q.top();
        q.pop();
        const double m = 0.5 * (p.a + p.b);
        const Piece l = eval(p.a, m), r = eval(m, p.b);
        val += l.val + r.val - p.val;
        err += l.err + r.err - p.err;
        l1 += l.l1 + r.l1 - p.l1;
        q.push(l);
        q.push(r);
    }
    // recompute sums to shed accumulated cancellation
    double v = 0.0, e = 0.0, n1 = 0.0;
    while (!q.empty()) {
        v += q.top().val;
        e += q.top().err;
        n1 += q.top().l1;
        q.pop();
    }
    // the rounding floor is not counted as quadrature error
    err_total += std::max(0.0, e - 1e3 * std::numeric_limits<double>::epsilon() * n1);
    return v;
}

// Integrates f(z) dz along a segment, splitting geometrically where the segment reaches far out.
double integrate_segment(const std::function<double(cplx, cplx)>& f, cplx a, cplx b, double L, double quad_tol,
                         double& err_total) {
    std::vector<double> ts{0.0, 1.0};
    auto add_far_end = [&](cplx far, cplx near, bool far_is_start) {
        if (std::abs(far) <= 10.0 * L) return;
        const double len = std::abs(far - near);
        for (double d = len / 4.0; d > 4.0 * L; d /= 4.0) {
            const double frac = d / len;
            ts.push_back(far_is_start ? 1.0 - frac : frac);
        }
    };
    add_far_end(a, b, true);
    add_far_end(b, a, false);
    std::sort(ts.begin(), ts.end());
    const cplx d = b - a;
    double total = 0.0;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        const cplx za = a + ts[i] * d;
        const cplx dz = (ts[i + 1] - ts[i]) * d;
        auto g = [&](double t) { return f(za + t * dz, dz); };
        total += adaptive_gk(g, quad_tol / static_cast<double>(ts.size()), err_total);
    }
    return total;
}

double path_integral(const Surface& s, const HarnackData& h, const IntegrationPath& path, double quad_tol,
                     const std::function<double(cplx, cplx)>& f) {
    if (!(quad_tol > 0.0)) fail(ErrorCode::invalid_argument, "quadrature tolerance must be positive");
    const double L = scale_of(s, h);
    double err = 0.0, total = 0.0;
    for (size_t i = 0; i + 1 < path.waypoints.size(); ++i)
        total += integrate_segment(f, path.waypoints[i], path.waypoints[i + 1], L, quad_tol, err);
    if (!(err < quad_tol) || !std::isfinite(total))
        fail(ErrorCode::numeric, "path quadrature did not converge (path too close to a singularity?)");
    return total;
}

}  // namespace

IntegrationPath build_path(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts, int detour_hint) {
    if (z.imag() < 0.0) fail(ErrorCode::invalid_argument, "path target must lie in the closed upper half-plane");
    if (s.in_disc(z, -1e-12)) fail(ErrorCode::invalid_argument, "path target lies inside a Schottky disc");
    const auto obs = obstacles(s, h);
    const RVec pts = marked_points(h);
    const double Q = opts.base_point;
    std::vector<std::vector<cplx>> cands;

    if (z.imag() == 0.0 && !pts.empty()) {
        if (z.real() > pts.back()) cands.push_back({cplx{Q, 0.0}, z});
        if (z.real() < pts.front()) cands.push_back({cplx{-Q, 0.0}, z});
    }
    double top = 1.0;
    for (int n = 1; n <= s.genus(); ++n) top = std::max(top, s.hole(n).center.imag() + s.hole(n).radius + 1.0);

    for (double base : {Q, -Q}) {
        const cplx q{base, 0.0};
        cands.push_back({q, z});
        if (z.imag() < top) {
            cands.push_back({q, cplx{z.real(), top}, z});
            std::vector<double> xs;
            double lo = 0.0, hi = 0.0;
            bool any = false;
            for (int n = 1; n <= s.genus(); ++n) {
                const Circle& c = s.hole(n);
                const double pad = std::max(2.0 * opts.margin, 0.25 * c.radius);
                xs.push_back(c.center.real() - c.radius - pad);
                xs.push_back(c.center.real() + c.radius + pad);
                lo = any ? std::min(lo, xs[xs.size() - 2]) : xs[xs.size() - 2];
                hi = any ? std::max(hi, xs.back()) : xs.back();
                any = true;
            }
            if (any) {
                xs.push_back(lo - 1.0);
                xs.push_back(hi + 1.0);
            }
            for (double x : xs) cands.push_back({q, cplx{x, top}, cplx{x, z.imag()}, z});
        }
    }
    std::vector<IntegrationPath> ok;
    for (auto& c : cands) {
        // drop repeated points
        std::vector<cplx> wp;
        for (const auto& p : c)
            if (wp.empty() || std::abs(wp.back() - p) > 0.0) wp.push_back(p);
        if (wp.size() < 2) wp.push_back(z);
        if (path_clear(obs, wp, opts.margin)) ok.push_back({wp});
    }
    if (ok.empty()) fail(ErrorCode::numeric, "no admissible integration path to the requested point");
    if (detour_hint < 0) detour_hint = 0;
    return ok[static_cast<size_t>(detour_hint) % ok.size()];
}

bool path_is_admissible(const Surface& s, const HarnackData& h, const IntegrationPath& path, double margin) {
    if (path.waypoints.size() < 2) return false;
    return path_clear(obstacles(s, h), path.waypoints, margin);
}

double h_value(const Surface& s, const HarnackData& h, const IntegrationPath& path, double quad_tol) {
    auto f = [&](cplx z, cplx dz) { return (s.zeta2(h, z) * s.dzeta1(h, z) * dz).imag(); };
    return path_integral(s, h, path, quad_tol, f) / kPi;
}

double h_value_symmetric(const Surface& s, const HarnackData& h, const IntegrationPath& path, double quad_tol) {
    auto f = [&](cplx z, cplx dz) {
        return ((s.zeta2(h, z) * s.dzeta1(h, z) - s.zeta1(h, z) * s.dzeta2(h, z)) * dz).imag();
    };
    return 0.5 * path_integral(s, h, path, quad_tol, f) / kPi;
}

cplx r_ratio(const Surface& s, const HarnackData& h, cplx z) {
    const cplx d2 = s.dzeta2(h, z);
    if (d2 == cplx{}) fail(ErrorCode::numeric, "dzeta2 vanishes");
    return s.dzeta1(h, z) / d2;
}

RonkinSample ronkin_sample(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts) {
    RonkinSample r;
    const AmoebaPolygonSample a = s.amoeba_map(h, z);
    r.z = z;
    r.x1 = a.x1;
    r.x2 = a.x2;
    r.y1 = a.y1;
    r.y2 = a.y2;
    r.s1 = a.s1;
    r.s2 = a.s2;
    r.h = h_value(s, h, build_path(s, h, z, opts), opts.quad_tol);
    r.rho = -r.h + r.x2 * r.y1 / kPi;
    r.sigma = r.h - r.x1 * r.y2 / kPi;
    r.R = r_ratio(s, h, z);
    const double im = r.R.imag();
    if (z.imag() > 0.0 && !(im > 0.0)) fail(ErrorCode::numeric, "Im R is not positive at an interior point");
    const double k = 1.0 / (kPi * im);
    r.hess = {{{k, -k * r.R.real()}, {-k * r.R.real(), k * std::norm(r.R)}}};
    return r;
}

double sigma_explicit(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts) {
    const IntegrationPath path = build_path(s, h, z, opts, 1);
    double total = 0.0;
    for (const auto& al : h.alphas) {
        for (const auto& be : h.betas) {
            auto f = [&](cplx w, cplx dw) {
                return ((s.zeta_pair(be, w) * s.dzeta_pair(al, w) - s.zeta_pair(al, w) * s.dzeta_pair(be, w)) * dw)
                    .imag();
            };
            const double I = path_integral(s, h, path, opts.quad_tol, f);
            const cplx za = s.zeta_pair(al, z), zb = s.zeta_pair(be, z);
            total += I / (2.0 * kPi) + (zb.real() * za.imag() - za.real() * zb.imag()) / (2.0 * kPi);
        }
    }
    return total;
}

namespace {

// Newton on (f1, f2) = part(zeta_k(z)) - target with Jacobian from dzeta.
cplx newton_invert(const Surface& s, const HarnackData& h, double t1, double t2, cplx z, bool real_part) {
    auto residual = [&](cplx w, double& f1, double& f2) {
        const cplx a = s.zeta1(h, w), b = s.zeta2(h, w);
        f1 = (real_part ? a.real() : a.imag()) - t1;
        f2 = (real_part ? b.real() : b.imag()) - t2;
    };
    auto admissible = [&](cplx w) { return w.imag() > 0.0 && !s.in_disc(w, 0.0); };
    if (!admissible(z)) fail(ErrorCode::invalid_argument, "inversion start point outside the open half-domain");
    double f1, f2;
    residual(z, f1, f2);
    const double scale = 1.0 + std::abs(t1) + std::abs(t2);
    for (int it = 0; it < 80; ++it) {
        const double fn = std::hypot(f1, f2);
        if (fn < 1e-13 * scale) return z;
        const cplx c1 = s.dzeta1(h, z), c2 = s.dzeta2(h, z);
        // d/du and d/dv of zeta are c and i c
        double j11, j12, j21, j22;
        if (real_part) {
            j11 = c1.real(); j12 = -c1.imag();
            j21 = c2.real(); j22 = -c2.imag();
        } else {
            j11 = c1.imag(); j12 = c1.real();
            j21 = c2.imag(); j22 = c2.real();
        }
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        const double du = -(j22 * f1 - j12 * f2) / det;
        const double dv = -(-j21 * f1 + j11 * f2) / det;
        double lam = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k, lam *= 0.5) {
            const cplx w = z + lam * cplx{du, dv};
            if (!admissible(w)) continue;
            double g1, g2;
            residual(w, g1, g2);
            if (std::hypot(g1, g2) < fn) {
                z = w;
                f1 = g1;
                f2 = g2;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    if (std::hypot(f1, f2) < 1e-10 * scale) return z;
    fail(ErrorCode::numeric, "Newton inversion did not converge");
}

}  // namespace

cplx invert_amoeba(const Surface& s, const HarnackData& h, double x1, double x2, cplx start) {
    return newton_invert(s, h, x1, x2, start, true);
}

cplx invert_polygon(const Surface& s, const HarnackData& h, double s1, double s2, cplx start) {
    // y1 = pi s2, y2 = -pi s1
    return newton_invert(s, h, kPi * s2, -kPi * s1, start, false);
}

double rho_at(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts) {
    const AmoebaPolygonSample a = s.amoeba_map(h, z);
    return -h_value(s, h, build_path(s, h, z, opts), opts.quad_tol) + a.x2 * a.y1 / kPi;
}

double sigma_at(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts) {
    const AmoebaPolygonSample a = s.amoeba_map(h, z);
    return h_value(s, h, build_path(s, h, z, opts), opts.quad_tol) - a.x1 * a.y2 / kPi;
}

std::array<double, 2> rho_gradient_fd(const Surface& s, const HarnackData& h, cplx z, double step,
                                      const RonkinOptions& opts) {
    const AmoebaPolygonSample a = s.amoeba_map(h, z);
    std::array<double, 2> g{};
    for (int k = 0; k < 2; ++k) {
        const double e1 = k == 0 ? step : 0.0, e2 = k == 1 ? step : 0.0;
        const cplx zp = invert_amoeba(s, h, a.x1 + e1, a.x2 + e2, z);
        const cplx zm = invert_amoeba(s, h, a.x1 - e1, a.x2 - e2, z);
        g[static_cast<size_t>(k)] = (rho_at(s, h, zp, opts) - rho_at(s, h, zm, opts)) / (2.0 * step);
    }
    return g;
}

double euler_lagrange_residual(const Surface& s, const HarnackData& h, cplx z, double fd_step,
                               const RonkinOptions& opts) {
    if (!(fd_step > 0.0)) fail(ErrorCode::invalid_argument, "finite-difference step must be positive");
    const AmoebaPolygonSample a = s.amoeba_map(h, z);
    // grad sigma at polygon point (s1, s2), by central differences of sigma
    auto grad_sigma = [&](double s1, double s2, cplx start, int comp) {
        const double e1 = comp == 0 ? fd_step : 0.0, e2 = comp == 1 ? fd_step : 0.0;
        const cplx zp = invert_polygon(s, h, s1 + e1, s2 + e2, start);
        const cplx zm = invert_polygon(s, h, s1 - e1, s2 - e2, start);
        return (sigma_at(s, h, zp, opts) - sigma_at(s, h, zm, opts)) / (2.0 * fd_step);
    };
    double div = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double e1 = k == 0 ? fd_step : 0.0, e2 = k == 1 ? fd_step : 0.0;
        double val[2];
        for (int sgn = 0; sgn < 2; ++sgn) {
            const double sg = sgn == 0 ? 1.0 : -1.0;
            const cplx w = invert_amoeba(s, h, a.x1 + sg * e1, a.x2 + sg * e2, z);
            const AmoebaPolygonSample b = s.amoeba_map(h, w);
            // grad rho at the shifted amoeba point is (s1, s2)
            val[sgn] = grad_sigma(b.s1, b.s2, w, k);
        }
        div += (val[0] - val[1]) / (2.0 * fd_step);
    }
    return std::abs(div - 2.0);
}

}  // namespace dimers
