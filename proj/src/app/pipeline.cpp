#include "dimers/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "dimers/ronkin.hpp"
#include "dimers/sampler.hpp"
#include "dimers/surface.hpp"
#include "dimers/theta.hpp"
#include "dimers/weights.hpp"
#include "json.hpp"
#include "svg.hpp"

#ifndef DIMERS_VERSION_STRING
#define DIMERS_VERSION_STRING "0.0.0"
#endif

namespace dimers {

using ojson = nlohmann::ordered_json;

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"validate", "amoeba", "ronkin", "weights", "sample", "selftest"};
    return names;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Surface, period matrix and weights built once per command.
struct Model {
    std::unique_ptr<Surface> surface;
    PeriodMatrix B;
    double asymmetry = 0.0;
    std::unique_ptr<FockModel> fock;

    explicit Model(const RunConfig& cfg) {
        surface = std::make_unique<Surface>(cfg.schottky, cfg.max_letters);
        if (cfg.schottky.genus() > 0) {
            auto pm = surface->period_matrix();
            B = pm.B;
            asymmetry = pm.asymmetry;
        } else {
            B = PeriodMatrix(0, {});
        }
        WeightOptions wo;
        wo.D = cfg.D_or_zero();
        wo.theta_tol = cfg.theta_tol;
        fock = std::make_unique<FockModel>(*surface, cfg.harnack, B, wo);
    }
};

// A point of the upper half plane away from the Schottky discs.
cplx random_point(const Surface& s, Rng& rng) {
    for (int tries = 0; tries < 10000; ++tries) {
        const cplx P(-3.0 + 6.0 * rng.uniform(), 0.05 + 3.0 * rng.uniform());
        if (!s.in_disc(P, 0.05)) return P;
    }
    fail(ErrorCode::numeric, "could not place a sample point outside the Schottky discs");
}

struct Checks {
    bool period_matrix = true, kasteleyn = true, periodicity = true, fay = true, dirac = true;
    bool all(bool require_periodic) const {
        return period_matrix && kasteleyn && fay && dirac && (periodicity || !require_periodic);
    }
};

ojson residual_report(const Model& m, const RunConfig& cfg, std::uint64_t seed, Checks& checks) {
    const FockModel& fm = *m.fock;
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    ojson r;

    ojson pm;
    pm["genus"] = fm.genus();
    ojson im = ojson::array();
    for (const auto& b : m.B.entries()) im.push_back(b.imag());
    pm["imag_entries"] = im;
    pm["asymmetry"] = m.asymmetry;
    const auto pv = m.B.validate(1e-9);
    checks.period_matrix = pv.empty();
    pm["pass"] = checks.period_matrix;
    r["period_matrix"] = pm;

    const auto kr = kasteleyn_check(fm, 3);
    checks.kasteleyn = kr.pass();
    r["kasteleyn"] = {{"type1_sign", kr.type1.sign},
                      {"type2_sign", kr.type2.sign},
                      {"patch_faces", kr.patch_faces},
                      {"patch_failures", kr.patch_failures},
                      {"pass", checks.kasteleyn}};

    double per = 0.0;
    for (double x : fm.periodicity_residual()) per = std::max(per, std::abs(x));
    checks.periodicity = per < cfg.thresholds.periodicity;
    r["periodicity"] = {{"max_residual", per}, {"threshold", cfg.thresholds.periodicity}, {"pass", checks.periodicity}};

    double fay = 0.0;
    for (int i = 0; i < 20; ++i) {
        const cplx P = random_point(*m.surface, rng);
        const double a1 = -3 + 6 * rng.uniform(), a2 = -3 + 6 * rng.uniform(), a3 = -3 + 6 * rng.uniform();
        fay = std::max(fay, fay_residual(fm, P, a1, a2, a3));
    }
    checks.fay = fay < cfg.thresholds.fay;
    r["fay"] = {{"max_residual", fay}, {"threshold", cfg.thresholds.fay}, {"pass", checks.fay}};

    double dirac = 0.0;
    for (int i = 0; i < 20; ++i) {
        const cplx P = random_point(*m.surface, rng);
        const auto ctx = fm.context(P);
        const int X = 2 * static_cast<int>(rng.below(6)) - 5, Y = 2 * static_cast<int>(rng.below(6)) - 5;
        dirac = std::max(dirac, fm.dirac_residual(Site{X, Y}, ctx));
    }
    checks.dirac = dirac < cfg.thresholds.dirac;
    r["dirac"] = {{"max_residual", dirac}, {"threshold", cfg.thresholds.dirac}, {"pass", checks.dirac}};
    return r;
}

class Output {
public:
    Output(const RunConfig& cfg, const CommandOptions& opts)
        : dir_(opts.out_dir.empty() ? cfg.outputs.directory : opts.out_dir), spec_(cfg.outputs) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) fail(ErrorCode::io, "cannot create output directory " + dir_.string() + ": " + ec.message());
    }
    bool wants(const std::string& fmt) const { return spec_.wants(fmt); }
    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
        out << content;
        if (!out) fail(ErrorCode::io, "write failed for " + path.string());
        files_.push_back(path.string());
    }
    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    OutputSpec spec_;
    std::vector<std::string> files_;
};

std::string csv_row(std::initializer_list<double> xs) {
    std::string s;
    bool first = true;
    for (double x : xs) {
        if (!first) s += ',';
        s += format_real(x);
        first = false;
    }
    return s + '\n';
}

double plot_extent(const HarnackData& h) {
    double L = 0.0;
    for (double x : marked_points(h)) L = std::max(L, std::abs(x));
    return 1.5 * L + 1.0;
}

// Upper half-plane grid, log-spaced in the imaginary direction.
std::vector<cplx> half_plane_grid(const Surface& s, const HarnackData& h, int n, double ymin_frac) {
    const double L = plot_extent(h);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -L + 2.0 * L * (i + 0.5) / n;
            const double y = L * std::pow(ymin_frac, 1.0 - (j + 0.5) / n);
            const cplx z(x, y);
            if (!s.in_disc(z, 1e-2)) out.push_back(z);
        }
    return out;
}

void cmd_amoeba(const Model& m, const RunConfig& cfg, Output& out, ojson& summary) {
    const auto& h = cfg.harnack;
    const auto lines = m.surface->trace_amoeba_boundary(h, cfg.grid.boundary_samples);
    std::string csv = "component,kind,index,x1,x2,s1,s2\n";
    int arcs = 0, ovals = 0;
    std::vector<svg::Series> amoeba, polygon;
    for (size_t k = 0; k < lines.size(); ++k) {
        const auto& pl = lines[k];
        const bool oval = pl.kind == BoundaryKind::oval;
        (oval ? ovals : arcs)++;
        svg::Series a{{}, oval ? "#d62728" : "#1f77b4"}, p{{}, a.color};
        for (const auto& s : pl.points) {
            csv += std::to_string(k) + (oval ? ",oval," : ",arc,") + std::to_string(pl.index) + ',' +
                   format_real(s.x1) + ',' + format_real(s.x2) + ',' + format_real(s.s1) + ',' + format_real(s.s2) + '\n';
            a.points.emplace_back(s.x1, s.x2);
            p.points.emplace_back(s.s1, s.s2);
        }
        amoeba.push_back(std::move(a));
        polygon.push_back(std::move(p));
    }
    std::string grid = "re_z,im_z,x1,x2,s1,s2\n";
    int interior = 0;
    for (const cplx z : half_plane_grid(*m.surface, h, cfg.grid.amoeba_grid, 1e-3)) {
        const auto s = m.surface->amoeba_map(h, z);
        grid += csv_row({z.real(), z.imag(), s.x1, s.x2, s.s1, s.s2});
        ++interior;
    }
    if (out.wants("csv")) {
        out.write("amoeba_boundary.csv", csv);
        out.write("amoeba_interior.csv", grid);
    }
    if (out.wants("svg")) {
        out.write("amoeba.svg", svg::line_plot("amoeba boundary", amoeba, "x1", "x2"));
        out.write("polygon.svg", svg::line_plot("Newton polygon boundary", polygon, "s1", "s2"));
    }
    summary["amoeba"] = {{"arcs", arcs}, {"ovals", ovals}, {"interior_points", interior}};
}

void cmd_ronkin(const Model& m, const RunConfig& cfg, Output& out, ojson& summary) {
    const auto& h = cfg.harnack;
    RonkinOptions ro;
    ro.quad_tol = cfg.quad_tol;
    std::string csv = "re_z,im_z,x1,x2,y1,y2,s1,s2,rho,sigma,h,ReR,ImR,hess11,hess12,hess22\n";
    int ok = 0, skipped = 0;
    double worst_det = 0.0;
    std::vector<svg::Series> pts;
    for (const cplx z : half_plane_grid(*m.surface, h, cfg.grid.ronkin_grid, 2e-2)) {
        try {
            const auto r = ronkin_sample(*m.surface, h, z, ro);
            csv += csv_row({z.real(), z.imag(), r.x1, r.x2, r.y1, r.y2, r.s1, r.s2, r.rho, r.sigma, r.h, r.R.real(),
                            r.R.imag(), r.hess[0][0], r.hess[0][1], r.hess[1][1]});
            const double det = r.hess[0][0] * r.hess[1][1] - r.hess[0][1] * r.hess[1][0];
            worst_det = std::max(worst_det, std::abs(det * kPi * kPi - 1.0));
            const double d = 0.05;
            pts.push_back({{{r.x1 - d, r.x2}, {r.x1 + d, r.x2}, {r.x1, r.x2}, {r.x1, r.x2 - d}, {r.x1, r.x2 + d}}, "#2ca02c"});
            ++ok;
        } catch (const Error&) {
            ++skipped;
        }
    }
    if (out.wants("csv")) out.write("ronkin.csv", csv);
    if (out.wants("svg")) {
        auto lines = m.surface->trace_amoeba_boundary(h, cfg.grid.boundary_samples);
        for (const auto& pl : lines) {
            svg::Series s{{}, "#1f77b4"};
            for (const auto& p : pl.points) s.points.emplace_back(p.x1, p.x2);
            pts.push_back(std::move(s));
        }
        out.write("ronkin.svg", svg::line_plot("Ronkin samples over the amoeba", pts, "x1", "x2"));
    }
    summary["ronkin"] = {{"points", ok}, {"skipped", skipped}, {"max_hessian_det_defect", worst_det}};
}

void cmd_weights(const Model& m, const RunConfig& cfg, Output& out, ojson& summary) {
    const int H = cfg.lattice.H, W = cfg.lattice.W;
    const auto fw = sampler_face_weights(*m.fock, H, W);
    std::string csv = "row,col,X,Y,weight\n";
    double lmax = 0.0, wmin = fw.front(), wmax = fw.front();
    for (double x : fw) {
        lmax = std::max(lmax, std::abs(std::log(x)));
        wmin = std::min(wmin, x);
        wmax = std::max(wmax, x);
    }
    std::vector<std::string> colors;
    for (int r = 0; r < H - 1; ++r)
        for (int c = 0; c < W - 1; ++c) {
            const double x = fw[static_cast<size_t>(r * (W - 1) + c)];
            csv += std::to_string(r) + ',' + std::to_string(c) + ',' + std::to_string(c + r + 1) + ',' +
                   std::to_string(c - r) + ',' + format_real(x) + '\n';
            colors.push_back(svg::diverging(lmax > 0 ? std::log(x) / lmax : 0.0));
        }
    if (out.wants("csv")) out.write("face_weights.csv", csv);
    if (out.wants("svg")) out.write("face_weights.svg", svg::cell_map("log face weight", H - 1, W - 1, colors));
    summary["weights"] = {{"faces", fw.size()}, {"min", wmin}, {"max", wmax}};
}

void cmd_sample(const Model& m, const RunConfig& cfg, std::uint64_t seed, Output& out, ojson& summary) {
    const int H = cfg.lattice.H, W = cfg.lattice.W;
    const auto fw = sampler_face_weights(*m.fock, H, W);
    const auto init = init_config(H, W, W % 2 == 0 ? InitPattern::brickwork_horizontal : InitPattern::brickwork_vertical);
    ChainSpec spec;
    spec.sweeps = cfg.chain.sweeps;
    spec.seed = seed;
    spec.record_interval = cfg.chain.record_interval;
    spec.burn_in_fraction = cfg.chain.burn_in_fraction;
    spec.volume_target = cfg.chain.volume_target;
    if (cfg.chain.volume_fraction) {
        const double v0 = volume(height_field(init));
        const auto [lo, hi] = volume_range(init);
        const double f = *cfg.chain.volume_fraction;
        spec.volume_target = f >= 0 ? v0 + f * (hi - v0) : v0 + f * (v0 - lo);
    }
    const auto res = run_chain(spec, fw, init);
    const int R = H - 1, C = W - 1;

    out.write("config.hex", res.final_config.hex_dump());
    if (out.wants("csv")) {
        std::string csv = "row,col,height\n";
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c)
                csv += std::to_string(r) + ',' + std::to_string(c) + ',' +
                       format_real(res.mean_height[static_cast<size_t>(r * C + c)]) + '\n';
        out.write("mean_height.csv", csv);
    }
    if (out.wants("svg")) {
        std::vector<std::string> colors;
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                const auto s = local_slope(res.mean_height, R, C, r, c);
                const double liquid = 1.0 - 2.0 * (std::abs(s.dc) + std::abs(s.dr));
                colors.push_back(svg::rgb(0.5 + s.dc, 0.5 + s.dr, 0.35 + 0.65 * liquid));
            }
        out.write("height.svg", svg::cell_map("mean height, colored by local slope", R, C, colors));
    }
    ojson s;
    s["H"] = H;
    s["W"] = W;
    s["sweeps"] = spec.sweeps;
    s["record_interval"] = spec.record_interval;
    s["burn_in_fraction"] = spec.burn_in_fraction;
    s["volume_target"] = spec.volume_target ? ojson(*spec.volume_target) : ojson(nullptr);
    s["initial_volume"] = res.initial_volume;
    s["final_volume"] = res.final_volume;
    s["proposals"] = res.proposals;
    s["accepted"] = res.accepted;
    s["samples"] = res.samples;
    if (R >= 8 && C >= 8) {
        const auto an = analyse_slopes(res.mean_height, R, C);
        s["corner_frozen_fraction"] = an.corner_frozen_fraction;
        s["central_slope"] = {an.central.dc, an.central.dr};
        s["central_inside"] = an.central_inside;
    }
    summary["acceptance_rate"] = res.acceptance_rate;
    summary["sampler"] = s;
}

bool cmd_selftest(const Model& m, const RunConfig& cfg, ojson& summary) {
    ojson tests = ojson::array();
    bool all = true;
    auto add = [&](const std::string& name, bool pass, double value) {
        tests.push_back({{"name", name}, {"pass", pass}, {"value", value}});
        all = all && pass;
    };
    const auto uni = EdgeWeights::uniform(4, 4);
    const double zenum = static_cast<double>(brute_force_distribution(4, 4, uni).size());
    add("enumeration_4x4", zenum == 36.0, zenum);
    const double zdet = kasteleyn_partition(uni);
    add("determinant_4x4", std::abs(zdet - 36.0) < 1e-9 * 36.0, zdet);
    auto cfg4 = init_config(4, 4, InitPattern::brickwork_horizontal);
    const auto before = cfg4;
    flip(cfg4, 0, 0);
    flip(cfg4, 0, 0);
    add("flip_involution", cfg4 == before, 0.0);
    if (cfg.schottky.genus() == 1) {
        const cplx closed = std::log(cfg.schottky.generators[0].mu) / kTwoPiI;
        const double err = std::abs(m.B(0, 0) - closed);
        add("genus1_closed_form", err < 1e-12, err);
    }
    const double th = m.B.genus() > 0 ? theta(RVec(static_cast<size_t>(m.B.genus()), 0.3), m.B, cfg.theta_tol).real() : 1.0;
    add("theta_positive", th > 0.0, th);
    summary["selftest"] = tests;
    return all;
}

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::invalid_argument:
        case ErrorCode::validation: return 2;
        case ErrorCode::numeric: return 3;
        case ErrorCode::io: return 4;
    }
    return 3;
}

const char* status_name(int code) {
    switch (code) {
        case 0: return "ok";
        case 2: return "validation_failure";
        case 3: return "numeric_failure";
        case 4: return "io_failure";
    }
    return "failure";
}

}  // namespace

CommandResult run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts) {
    const auto t0 = Clock::now();
    CommandResult result;
    const std::uint64_t seed = opts.seed ? *opts.seed : cfg.chain.seed;
    ojson summary;
    summary["schema_version"] = kConfigSchemaVersion;
    summary["command"] = name;
    summary["version"] = DIMERS_VERSION_STRING;
    summary["status"] = "ok";
    summary["exit_code"] = 0;
    summary["message"] = "";
    summary["seed"] = seed;
    summary["seed_source"] = opts.seed ? "command_line" : (cfg.chain.seed_given ? "config" : "default");
    summary["rng"] = Rng::algorithm();
    summary["residuals"] = nullptr;
    summary["acceptance_rate"] = nullptr;
    ojson times;
    std::unique_ptr<Output> out;
    try {
        if (std::find(command_names().begin(), command_names().end(), name) == command_names().end())
            fail(ErrorCode::invalid_argument, "unknown command '" + name + "'");
        out = std::make_unique<Output>(cfg, opts);
        auto t = Clock::now();
        const Model model(cfg);
        times["model"] = seconds_since(t);
        t = Clock::now();
        Checks checks;
        summary["residuals"] = residual_report(model, cfg, seed, checks);
        times["residuals"] = seconds_since(t);
        t = Clock::now();
        if (name == "validate") {
            if (!checks.all(opts.require_periodic)) {
                result.exit_code = 2;
                std::string failed;
                if (!checks.period_matrix) failed += " period_matrix";
                if (!checks.kasteleyn) failed += " kasteleyn";
                if (!checks.fay) failed += " fay";
                if (!checks.dirac) failed += " dirac";
                if (opts.require_periodic && !checks.periodicity)
                    failed += " periodicity (residual " + format_real(summary["residuals"]["periodicity"]["max_residual"].get<double>()) + ")";
                result.message = "checks failed:" + failed;
            }
        } else {
            if (opts.require_periodic && !checks.periodicity)
                fail(ErrorCode::validation, "weights are not periodic (residual " +
                                                format_real(summary["residuals"]["periodicity"]["max_residual"].get<double>()) + ")");
            if (name == "amoeba") cmd_amoeba(model, cfg, *out, summary);
            else if (name == "ronkin") cmd_ronkin(model, cfg, *out, summary);
            else if (name == "weights") cmd_weights(model, cfg, *out, summary);
            else if (name == "sample") cmd_sample(model, cfg, seed, *out, summary);
            else if (name == "selftest" && !cmd_selftest(model, cfg, summary)) {
                result.exit_code = 3;
                result.message = "selftest failed";
            }
        }
        times["command"] = seconds_since(t);
    } catch (const Error& e) {
        result.exit_code = exit_code_for(e.code());
        result.message = e.what();
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.message = std::string("internal error: ") + e.what();
    }
    times["total"] = seconds_since(t0);
    summary["status"] = status_name(result.exit_code);
    summary["exit_code"] = result.exit_code;
    summary["message"] = result.message;
    summary["wall_times"] = times;
    result.summary_json = summary.dump(2) + "\n";
    if (out && out->wants("json")) {
        try {
            out->write("summary.json", result.summary_json);
        } catch (const Error& e) {
            if (result.exit_code == 0) {
                result.exit_code = 4;
                result.message = e.what();
            }
        }
    }
    if (out) result.files = out->files();
    return result;
}

}  // namespace dimers
