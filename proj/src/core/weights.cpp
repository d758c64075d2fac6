#include "dimers/weights.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace dimers {

namespace {

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int mod(int a, int b) { return a - b * floor_div(a, b); }

RVec add(const RVec& a, const RVec& b) {
    RVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

RVec sub(const RVec& a, const RVec& b) {
    RVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

}  // namespace

SiteKind site_kind(Site s) {
    const bool xo = (s.X & 1) != 0, yo = (s.Y & 1) != 0;
    if (!xo && !yo) return SiteKind::black;
    if (xo && yo) return SiteKind::white;
    return xo ? SiteKind::face_a : SiteKind::face_b;
}

FockModel::FockModel(const Surface& surface, HarnackData harnack, PeriodMatrix B, WeightOptions opts)
    : g_(surface.genus()), h_(std::move(harnack)), B_(std::move(B)), tol_(opts.theta_tol), surface_(&surface) {
    if (B_.genus() != g_) fail(ErrorCode::invalid_argument, "period matrix genus does not match the surface");
    if (h_.alphas.empty() || h_.betas.empty()) fail(ErrorCode::invalid_argument, "need at least one alpha and one beta pair");
    D_ = opts.D.empty() ? RVec(static_cast<size_t>(g_), 0.0) : opts.D;
    if (static_cast<int>(D_.size()) != g_) fail(ErrorCode::invalid_argument, "D has the wrong dimension");
    if (g_ > 0) {
        delta_ = opts.delta ? *opts.delta : Characteristic::odd_default(g_);
        if (static_cast<int>(delta_.delta1.size()) != g_ || delta_.parity() != 1)
            fail(ErrorCode::invalid_argument, "prime-form characteristic must be odd and of size g");
    }
    for (const auto& p : h_.alphas) {
        a_am_.push_back(surface.abel_real(p.p_minus));
        a_ap_.push_back(surface.abel_real(p.p_plus));
    }
    for (const auto& p : h_.betas) {
        a_bm_.push_back(surface.abel_real(p.p_minus));
        a_bp_.push_back(surface.abel_real(p.p_plus));
    }
    auto build_prefix = [&](bool alpha) {
        const int cnt = alpha ? m() : n();
        std::vector<RVec> pre{RVec(static_cast<size_t>(g_), 0.0)};
        for (int k = 0; k < 2 * cnt; ++k) {
            const TrackLabel l = alpha ? vertical_strip(k) : horizontal_strip(k);
            const RVec& a = abel_of(l);
            pre.push_back(l.minus ? add(pre.back(), a) : sub(pre.back(), a));
        }
        return pre;
    };
    prefix_alpha_ = build_prefix(true);
    prefix_beta_ = build_prefix(false);
}

const RVec& FockModel::abel_of(const TrackLabel& l) const {
    const size_t i = static_cast<size_t>(l.index);
    if (l.alpha) return l.minus ? a_am_.at(i) : a_ap_.at(i);
    return l.minus ? a_bm_.at(i) : a_bp_.at(i);
}

double FockModel::point_of(const TrackLabel& l) const {
    const size_t i = static_cast<size_t>(l.index);
    if (l.alpha) return l.minus ? h_.alphas.at(i).p_minus : h_.alphas.at(i).p_plus;
    return l.minus ? h_.betas.at(i).p_minus : h_.betas.at(i).p_plus;
}

TrackLabel FockModel::vertical_strip(int k) const {
    return {true, mod(k, 2) == 0, mod(floor_div(k, 2), m())};
}

TrackLabel FockModel::horizontal_strip(int k) const {
    return {false, mod(k, 2) == 0, mod(floor_div(k, 2), n())};
}

RVec FockModel::strip_sum(int K, bool alpha) const {
    const auto& pre = alpha ? prefix_alpha_ : prefix_beta_;
    const int period = static_cast<int>(pre.size()) - 1;
    const int q = floor_div(K, period);
    const int r = K - q * period;
    RVec out = pre[static_cast<size_t>(r)];
    for (size_t i = 0; i < out.size(); ++i) out[i] += q * pre.back()[i];
    return out;
}

RVec FockModel::eta(Site s) const { return add(strip_sum(s.X, true), strip_sum(s.Y, false)); }

double FockModel::theta_shifted(const RVec& e) const {
    if (g_ == 0) return 1.0;
    return theta(add(e, D_), B_, tol_).real();
}

cplx FockModel::theta_shifted(const CVec& z) const {
    if (g_ == 0) return 1.0;
    CVec w(z);
    for (int i = 0; i < g_; ++i) w[static_cast<size_t>(i)] += D_[static_cast<size_t>(i)];
    return theta(w, B_, tol_);
}

cplx FockModel::ehat_general(cplx a, const CVec& Aa, cplx b, const CVec& Ab) const {
    if (g_ == 0) return b - a;
    CVec d(static_cast<size_t>(g_));
    for (int i = 0; i < g_; ++i) d[static_cast<size_t>(i)] = Ab[static_cast<size_t>(i)] - Aa[static_cast<size_t>(i)];
    return theta_char(delta_, d, B_, tol_);
}

double FockModel::ehat(const TrackLabel& a, const TrackLabel& b) const {
    if (g_ == 0) return point_of(b) - point_of(a);
    return theta_char(delta_, sub(abel_of(b), abel_of(a)), B_, tol_).real();
}

cplx FockModel::ehat_point(const PointContext& ctx, const TrackLabel& l) const {
    const size_t i = static_cast<size_t>(l.index);
    if (l.alpha) return l.minus ? ctx.e_alpha_minus.at(i) : ctx.e_alpha_plus.at(i);
    return l.minus ? ctx.e_beta_minus.at(i) : ctx.e_beta_plus.at(i);
}

void FockModel::check_site(Site s, SiteKind k, const char* what) const {
    const SiteKind actual = site_kind(s);
    const bool ok = (k == SiteKind::face_a) ? (actual == SiteKind::face_a || actual == SiteKind::face_b) : actual == k;
    if (!ok) fail(ErrorCode::invalid_argument, std::string(what) + " has the wrong lattice parity");
}

double FockModel::edge_weight(Site w, Site b) const {
    check_site(w, SiteKind::white, "white vertex");
    check_site(b, SiteKind::black, "black vertex");
    const int dx = w.X - b.X, dy = w.Y - b.Y;
    if (std::abs(dx) != 1 || std::abs(dy) != 1) fail(ErrorCode::invalid_argument, "vertices are not adjacent");
    const TrackLabel al = vertical_strip(std::min(w.X, b.X));
    const TrackLabel be = horizontal_strip(std::min(w.Y, b.Y));
    const double num = dx * dy > 0 ? ehat(be, al) : ehat(al, be);
    if (num == 0.0) fail(ErrorCode::numeric, "prime form vanishes on an edge (coincident track points)");
    const Site f1{w.X, b.Y}, f2{b.X, w.Y};
    return num / (theta_shifted(eta(f1)) * theta_shifted(eta(f2)));
}

FockModel::FaceCorners FockModel::face_corners(Site f) const {
    check_site(f, SiteKind::face_a, "face");
    if (site_kind(f) == SiteKind::face_a)
        return {{f.X - 1, f.Y}, {f.X + 1, f.Y}, {f.X, f.Y + 1}, {f.X, f.Y - 1}};
    return {{f.X, f.Y - 1}, {f.X, f.Y + 1}, {f.X + 1, f.Y}, {f.X - 1, f.Y}};
}

double FockModel::alternating_ratio(Site f) const {
    const FaceCorners c = face_corners(f);
    return edge_weight(c.w1, c.bA) * edge_weight(c.w2, c.bB) / (edge_weight(c.w1, c.bB) * edge_weight(c.w2, c.bA));
}

double FockModel::face_weight_alternating(Site f) const { return std::abs(alternating_ratio(f)); }

double FockModel::face_weight(Site f) const {
    const FaceCorners c = face_corners(f);
    // prime-form labels of an edge and the face across it from f
    auto parts = [&](Site w, Site b, double& e, double& th) {
        const int dx = w.X - b.X, dy = w.Y - b.Y;
        const TrackLabel al = vertical_strip(std::min(w.X, b.X));
        const TrackLabel be = horizontal_strip(std::min(w.Y, b.Y));
        e = dx * dy > 0 ? ehat(be, al) : ehat(al, be);
        Site other{w.X, b.Y};
        if (other == f) other = Site{b.X, w.Y};
        th = theta_shifted(eta(other));
    };
    double e1, t1, e2, t2, e3, t3, e4, t4;
    parts(c.w1, c.bA, e1, t1);
    parts(c.w2, c.bB, e2, t2);
    parts(c.w1, c.bB, e3, t3);
    parts(c.w2, c.bA, e4, t4);
    return std::abs((e1 * e2) / (e3 * e4)) * (t3 * t4) / (t1 * t2);
}

PointContext FockModel::context(cplx P) const {
    PointContext ctx;
    ctx.P = P;
    ctx.abel = g_ > 0 ? surface_->abel(P) : CVec{};
    auto e = [&](double x, const RVec& Ax) {
        CVec a(Ax.begin(), Ax.end());
        return ehat_general(P, ctx.abel, cplx{x, 0.0}, a);
    };
    for (int i = 0; i < m(); ++i) {
        ctx.e_alpha_minus.push_back(e(h_.alphas[static_cast<size_t>(i)].p_minus, a_am_[static_cast<size_t>(i)]));
        ctx.e_alpha_plus.push_back(e(h_.alphas[static_cast<size_t>(i)].p_plus, a_ap_[static_cast<size_t>(i)]));
    }
    for (int j = 0; j < n(); ++j) {
        ctx.e_beta_minus.push_back(e(h_.betas[static_cast<size_t>(j)].p_minus, a_bm_[static_cast<size_t>(j)]));
        ctx.e_beta_plus.push_back(e(h_.betas[static_cast<size_t>(j)].p_plus, a_bp_[static_cast<size_t>(j)]));
    }
    ctx.theta_base = theta_shifted(ctx.abel);
    if (std::abs(ctx.theta_base) < 1e-14)
        fail(ErrorCode::numeric, "theta(A(P) + D) vanishes; move D or P");
    return ctx;
}

cplx FockModel::ba_function(Site b, const PointContext& ctx) const {
    check_site(b, SiteKind::black, "black vertex");
    const RVec e = eta(b);
    CVec z = ctx.abel;
    for (int i = 0; i < g_; ++i) z[static_cast<size_t>(i)] += e[static_cast<size_t>(i)];
    cplx val = theta_shifted(z) / ctx.theta_base;
    auto strips = [&](int K, bool alpha) {
        const int lo = std::min(0, K), hi = std::max(0, K);
        for (int k = lo; k < hi; ++k) {
            const TrackLabel l = alpha ? vertical_strip(k) : horizontal_strip(k);
            cplx f = ehat_point(ctx, l);
            if (!l.minus) f = 1.0 / f;
            if (K < 0) f = 1.0 / f;
            val *= f;
        }
    };
    strips(b.X, true);
    strips(b.Y, false);
    return val;
}

double FockModel::dirac_residual(Site w, const PointContext& ctx) const {
    check_site(w, SiteKind::white, "white vertex");
    cplx sum{};
    double mx = 0.0;
    for (int dx : {-1, 1})
        for (int dy : {-1, 1}) {
            const Site b{w.X + dx, w.Y + dy};
            const cplx t = edge_weight(w, b) * ba_function(b, ctx);
            sum += t;
            mx = std::max(mx, std::abs(t));
        }
    if (mx == 0.0) fail(ErrorCode::numeric, "all Dirac terms vanish");
    return std::abs(sum) / mx;
}

std::pair<cplx, cplx> FockModel::monodromies(const PointContext& ctx) const {
    cplx z{1.0, 0.0}, w{1.0, 0.0};
    for (int i = 0; i < m(); ++i) z *= ctx.e_alpha_minus[static_cast<size_t>(i)] / ctx.e_alpha_plus[static_cast<size_t>(i)];
    for (int j = 0; j < n(); ++j) w *= ctx.e_beta_minus[static_cast<size_t>(j)] / ctx.e_beta_plus[static_cast<size_t>(j)];
    return {z, w};
}

RVec FockModel::alpha_period() const { return prefix_alpha_.back(); }
RVec FockModel::beta_period() const { return prefix_beta_.back(); }

RVec FockModel::periodicity_residual() const {
    RVec out;
    for (const RVec* v : {&prefix_alpha_.back(), &prefix_beta_.back()})
        for (double x : *v) out.push_back(std::abs(x - std::round(x)));
    return out;
}

cplx FockModel::spectral_det(cplx z, cplx w, int i0, int j0, double* row_norm_product) const {
    const int M = m(), N = n();
    const int size = M * N;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(size, size);
    auto index = [&](int i, int j) { return i * N + j; };
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) {
            const Site wv{2 * (i0 + i) + 1, 2 * (j0 + j) + 1};
            for (int dx : {-1, 1})
                for (int dy : {-1, 1}) {
                    const Site b{wv.X + dx, wv.Y + dy};
                    const int bx = b.X / 2 - i0, by = b.Y / 2 - j0;
                    const int p = floor_div(bx, M), q = floor_div(by, N);
                    const cplx factor = std::pow(z, p) * std::pow(w, q);
                    K(index(i, j), index(bx - p * M, by - q * N)) += edge_weight(wv, b) * factor;
                }
        }
    if (row_norm_product) {
        double prod = 1.0;
        for (int r = 0; r < size; ++r) prod *= K.row(r).norm();
        *row_norm_product = prod;
    }
    return K.partialPivLu().determinant();
}

double fay_residual(const FockModel& model, cplx P, double a1, double a2, double a3) {
    const PointContext ctx = model.context(P);
    const int g = model.genus();
    auto abel_point = [&](double x) {
        const PointContext c = model.context(cplx{x, 0.0});
        return c.abel;
    };
    const CVec A1 = abel_point(a1), A2 = abel_point(a2), A3 = abel_point(a3), AP = ctx.abel;
    auto sum = [&](const CVec& u, const CVec& v) {
        CVec r(static_cast<size_t>(g));
        for (int i = 0; i < g; ++i) r[static_cast<size_t>(i)] = u[static_cast<size_t>(i)] + v[static_cast<size_t>(i)];
        return r;
    };
    const cplx x1{a1, 0.0}, x2{a2, 0.0}, x3{a3, 0.0};
    const cplx t1 = model.theta_shifted(sum(A2, A3)) * model.theta_shifted(sum(AP, A1)) *
                    model.ehat_general(x2, A2, x3, A3) * model.ehat_general(P, AP, x1, A1);
    const cplx t2 = model.theta_shifted(sum(A1, A3)) * model.theta_shifted(sum(AP, A2)) *
                    model.ehat_general(x3, A3, x1, A1) * model.ehat_general(P, AP, x2, A2);
    const cplx t3 = model.theta_shifted(sum(A1, A2)) * model.theta_shifted(sum(AP, A3)) *
                    model.ehat_general(x1, A1, x2, A2) * model.ehat_general(P, AP, x3, A3);
    const double mx = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    if (mx == 0.0) fail(ErrorCode::numeric, "all Fay terms vanish (coincident points)");
    return std::abs(t1 + t2 + t3) / mx;
}

namespace {

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

void accumulate(KasteleynTypeResult& r, double v) {
    const int s = sign_of(v);
    if (r.combinations == 0) r.sign = s;
    else if (r.sign != s) r.sign = 0;
    ++r.combinations;
}

}  // namespace

KasteleynReport kasteleyn_check(const HarnackData& h) {
    KasteleynReport rep;
    for (const auto& ai : h.alphas)
        for (const auto& aj : h.alphas)
            for (const auto& bk : h.betas) {
                // first square type
                const double v = ((ai.p_plus - bk.p_minus) * (aj.p_minus - bk.p_plus)) /
                                 ((bk.p_minus - aj.p_minus) * (bk.p_plus - ai.p_plus));
                accumulate(rep.type1, v);
            }
    for (const auto& ai : h.alphas)
        for (const auto& bj : h.betas)
            for (const auto& bk : h.betas) {
                const double v = ((bj.p_minus - ai.p_plus) * (bk.p_plus - ai.p_minus)) /
                                 ((ai.p_plus - bk.p_plus) * (ai.p_minus - bj.p_minus));
                accumulate(rep.type2, v);
            }
    rep.type1.pass = rep.type1.sign == -1;
    rep.type2.pass = rep.type2.sign == -1;
    return rep;
}

KasteleynReport kasteleyn_check(const FockModel& model, int patch) {
    KasteleynReport rep = kasteleyn_check(model.harnack());
    for (int X = 0; X < 2 * patch; ++X)
        for (int Y = 0; Y < 2 * patch; ++Y) {
            const Site f{X, Y};
            const SiteKind k = site_kind(f);
            if (k != SiteKind::face_a && k != SiteKind::face_b) continue;
            ++rep.patch_faces;
            if (!(model.alternating_ratio(f) < 0.0)) ++rep.patch_failures;
        }
    return rep;
}

MovablePoints MovablePoints::last_points(const HarnackData& h, int g) {
    const int m = static_cast<int>(h.alphas.size()), n = static_cast<int>(h.betas.size());
    if (m < g || n < g) fail(ErrorCode::invalid_argument, "need at least g alpha and g beta pairs to move");
    MovablePoints mp;
    for (int i = m - g; i < m; ++i) mp.alpha_minus.push_back(i);
    for (int j = n - g; j < n; ++j) mp.beta_minus.push_back(j);
    return mp;
}

namespace {

// Solve sum_i A(p_i^-) - A(p_i^+) in Z^g by moving the listed minus points inside (lo, hi) in the angle phi = 2 atan x.
void solve_family(const Surface& surface, std::vector<TrackPair>& pairs, const std::vector<int>& movable, double lo,
                  double hi, double tol, const char* name) {
    const int g = surface.genus();
    if (static_cast<int>(movable.size()) != g)
        fail(ErrorCode::invalid_argument, std::string("need exactly g movable ") + name + " points");
    std::vector<RVec> fixed_minus(pairs.size()), plus(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
        plus[i] = surface.abel_real(pairs[i].p_plus);
        fixed_minus[i] = surface.abel_real(pairs[i].p_minus);
    }
    auto total = [&](const RVec& phis) {
        RVec s(static_cast<size_t>(g), 0.0);
        std::vector<RVec> minus = fixed_minus;
        for (size_t k = 0; k < movable.size(); ++k)
            minus[static_cast<size_t>(movable[k])] = surface.abel_real(std::tan(0.5 * phis[k]));
        for (size_t i = 0; i < pairs.size(); ++i)
            for (int c = 0; c < g; ++c) s[static_cast<size_t>(c)] += minus[i][static_cast<size_t>(c)] - plus[i][static_cast<size_t>(c)];
        return s;
    };
    RVec phi0(movable.size());
    for (size_t k = 0; k < movable.size(); ++k) phi0[k] = 2.0 * std::atan(pairs[static_cast<size_t>(movable[k])].p_minus);
    const double pad = 1e-9 * (hi - lo);

    RVec sol;
    if (g == 1) {
        auto centred = [&](double phi) {
            const double v = total(RVec{phi})[0];
            return v - std::round(v);
        };
        const int N = 2000;
        std::vector<double> ph(N + 1), val(N + 1);
        for (int i = 0; i <= N; ++i) {
            ph[static_cast<size_t>(i)] = lo + pad + (hi - lo - 2 * pad) * i / N;
            val[static_cast<size_t>(i)] = centred(ph[static_cast<size_t>(i)]);
        }
        double best = NAN;
        for (int i = 0; i < N; ++i) {
            double a = ph[static_cast<size_t>(i)], b = ph[static_cast<size_t>(i + 1)];
            double fa = val[static_cast<size_t>(i)], fb = val[static_cast<size_t>(i + 1)];
            if (std::abs(fa - fb) >= 0.5) continue;  // wrap of the centring, not a root
            if (fa == 0.0) b = a;
            else if (fa * fb > 0.0) continue;
            for (int it = 0; it < 200 && b - a > 0.0; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid == a || mid == b) break;
                const double fm = centred(mid);
                if ((fm < 0) == (fa < 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const double root = std::abs(centred(a)) < std::abs(centred(b)) ? a : b;
            if (std::isnan(best) || std::abs(root - phi0[0]) < std::abs(best - phi0[0])) best = root;
        }
        if (std::isnan(best))
            fail(ErrorCode::numeric, std::string("no periodic position for the movable ") + name +
                                         " point within its cluster arc; enlarge the fundamental domain");
        sol = {best};
    } else {
        RVec phi = phi0;
        for (auto& p : phi) p = std::clamp(p, lo + pad, hi - pad);
        RVec target = total(phi);
        for (auto& t : target) t = std::round(t);
        auto resid = [&](const RVec& p) { return sub(total(p), target); };
        auto norm = [](const RVec& v) {
            double s = 0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        };
        RVec r = resid(phi);
        for (int it = 0; it < 100 && norm(r) > tol; ++it) {
            Eigen::MatrixXd J(g, g);
            const double hstep = 1e-7;
            for (int k = 0; k < g; ++k) {
                RVec pp = phi, pm = phi;
                pp[static_cast<size_t>(k)] += hstep;
                pm[static_cast<size_t>(k)] -= hstep;
                const RVec fp = total(pp), fm = total(pm);
                for (int c = 0; c < g; ++c) J(c, k) = (fp[static_cast<size_t>(c)] - fm[static_cast<size_t>(c)]) / (2 * hstep);
            }
            Eigen::VectorXd rv(g);
            for (int c = 0; c < g; ++c) rv(c) = r[static_cast<size_t>(c)];
            const Eigen::VectorXd step = J.fullPivLu().solve(-rv);
            double lam = 1.0;
            bool moved = false;
            for (int k = 0; k < 40; ++k, lam *= 0.5) {
                RVec cand = phi;
                bool inside = true;
                for (int c = 0; c < g; ++c) {
                    cand[static_cast<size_t>(c)] += lam * step(c);
                    if (!(cand[static_cast<size_t>(c)] > lo + pad && cand[static_cast<size_t>(c)] < hi - pad)) inside = false;
                }
                if (!inside) continue;
                const RVec rc = resid(cand);
                if (norm(rc) < norm(r)) {
                    phi = cand;
                    r = rc;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        if (norm(r) > tol)
            fail(ErrorCode::numeric, std::string("periodicity solve for the ") + name +
                                         " points did not converge within the cluster arcs; enlarge the fundamental domain");
        sol = phi;
    }
    for (size_t k = 0; k < movable.size(); ++k) pairs[static_cast<size_t>(movable[k])].p_minus = std::tan(0.5 * sol[k]);
}

}  // namespace

HarnackData solve_periodic(const Surface& surface, const PeriodMatrix& B, const HarnackData& h,
                           const MovablePoints& movable, double tol) {
    (void)B;
    if (surface.genus() == 0) return h;
    const ValidationReport rep = validate_harnack(surface.data(), h);
    if (!rep.empty()) fail(ErrorCode::validation, "harnack data invalid: " + rep.front().what);
    HarnackData out = h;
    const RVec pts = marked_points(h);
    double max_bp = -INFINITY, min_ap = INFINITY;
    for (const auto& b : h.betas) max_bp = std::max(max_bp, b.p_plus);
    for (const auto& a : h.alphas) min_ap = std::min(min_ap, a.p_plus);
    // α^- may range over (max β^+, +inf), β^- over (-inf, min α^+)
    solve_family(surface, out.alphas, movable.alpha_minus, 2.0 * std::atan(max_bp), kPi, tol, "alpha");
    solve_family(surface, out.betas, movable.beta_minus, -kPi, 2.0 * std::atan(min_ap), tol, "beta");
    if (!validate_harnack(surface.data(), out).empty())
        fail(ErrorCode::numeric, "periodicity solve broke the cluster ordering");
    return out;
}

std::vector<double> sampler_face_weights(const FockModel& model, int H, int W) {
    if (H < 2 || W < 2) fail(ErrorCode::invalid_argument, "vertex grid must be at least 2 x 2");
    std::vector<double> out;
    out.reserve(static_cast<size_t>((H - 1) * (W - 1)));
    for (int r = 0; r < H - 1; ++r)
        for (int c = 0; c < W - 1; ++c) out.push_back(model.face_weight_alternating(Site{c + r + 1, c - r}));
    return out;
}

}  // namespace dimers
