#include "dimers/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dimers {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
    fail(ErrorCode::validation, path + ": " + msg);
}

double get_real(const json& j, const std::string& path) {
    if (!j.is_number()) field_error(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) field_error(path, "must be finite");
    return v;
}

std::int64_t get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) field_error(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::vector<double> get_reals(const json& j, const std::string& path) {
    if (!j.is_array()) field_error(path, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(get_real(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

template <class F>
void optional_field(const json& obj, const char* key, const std::string& path, F&& f) {
    if (obj.contains(key) && !obj.at(key).is_null()) f(obj.at(key), path + "." + key);
}

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) field_error(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }) == keys.end())
            field_error(path + "." + it.key(), "unknown field");
}

std::string join_indices(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

bool OutputSpec::wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

std::vector<double> RunConfig::D_or_zero() const {
    if (!D.empty()) return D;
    return std::vector<double>(static_cast<size_t>(schottky.genus()), 0.0);
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::invalid_argument, std::string("config syntax error: ") + e.what());
    }
    check_object(j, "$", {"schema_version", "schottky", "harnack", "D", "max_letters", "theta_tol", "quad_tol",
                          "lattice", "chain", "thresholds", "grid", "outputs"});
    RunConfig c;
    optional_field(j, "schema_version", "$", [&](const json& v, const std::string& p) {
        c.schema_version = static_cast<int>(get_int(v, p));
        if (c.schema_version != kConfigSchemaVersion)
            field_error(p, "unsupported schema version " + std::to_string(c.schema_version));
    });

    optional_field(j, "schottky", "$", [&](const json& v, const std::string& p) {
        if (!v.is_array()) field_error(p, "expected an array of [re(A), im(A), mu] triples");
        for (size_t i = 0; i < v.size(); ++i) {
            const std::string pi = p + "[" + std::to_string(i) + "]";
            const auto t = get_reals(v[i], pi);
            if (t.size() != 3) field_error(pi, "expected [re(A), im(A), mu]");
            c.schottky.generators.push_back({cplx(t[0], t[1]), t[2]});
        }
    });

    if (!j.contains("harnack")) field_error("$.harnack", "required");
    {
        const json& h = j.at("harnack");
        check_object(h, "$.harnack", {"alpha_minus", "alpha_plus", "beta_minus", "beta_plus"});
        for (const char* k : {"alpha_minus", "alpha_plus", "beta_minus", "beta_plus"})
            if (!h.contains(k)) field_error(std::string("$.harnack.") + k, "required");
        const auto am = get_reals(h.at("alpha_minus"), "$.harnack.alpha_minus");
        const auto ap = get_reals(h.at("alpha_plus"), "$.harnack.alpha_plus");
        const auto bm = get_reals(h.at("beta_minus"), "$.harnack.beta_minus");
        const auto bp = get_reals(h.at("beta_plus"), "$.harnack.beta_plus");
        if (am.size() != ap.size()) field_error("$.harnack.alpha_plus", "length differs from alpha_minus");
        if (bm.size() != bp.size()) field_error("$.harnack.beta_plus", "length differs from beta_minus");
        for (size_t i = 0; i < am.size(); ++i) c.harnack.alphas.push_back({am[i], ap[i]});
        for (size_t i = 0; i < bm.size(); ++i) c.harnack.betas.push_back({bm[i], bp[i]});
    }
    c.lattice.m = static_cast<int>(c.harnack.alphas.size());
    c.lattice.n = static_cast<int>(c.harnack.betas.size());

    optional_field(j, "D", "$", [&](const json& v, const std::string& p) { c.D = get_reals(v, p); });
    optional_field(j, "max_letters", "$", [&](const json& v, const std::string& p) {
        c.max_letters = static_cast<int>(get_int(v, p));
        if (c.max_letters < 0 || c.max_letters > 16) field_error(p, "must lie in [0, 16]");
    });
    optional_field(j, "theta_tol", "$", [&](const json& v, const std::string& p) {
        c.theta_tol = get_real(v, p);
        if (!(c.theta_tol > 0.0)) field_error(p, "must be positive");
    });
    optional_field(j, "quad_tol", "$", [&](const json& v, const std::string& p) {
        c.quad_tol = get_real(v, p);
        if (!(c.quad_tol > 0.0)) field_error(p, "must be positive");
    });

    optional_field(j, "lattice", "$", [&](const json& v, const std::string& p) {
        check_object(v, p, {"m", "n", "H", "W"});
        optional_field(v, "m", p, [&](const json& x, const std::string& q) {
            if (get_int(x, q) != c.lattice.m) field_error(q, "does not match the number of alpha pairs");
        });
        optional_field(v, "n", p, [&](const json& x, const std::string& q) {
            if (get_int(x, q) != c.lattice.n) field_error(q, "does not match the number of beta pairs");
        });
        optional_field(v, "H", p, [&](const json& x, const std::string& q) { c.lattice.H = static_cast<int>(get_int(x, q)); });
        optional_field(v, "W", p, [&](const json& x, const std::string& q) { c.lattice.W = static_cast<int>(get_int(x, q)); });
        if (c.lattice.H < 2 || c.lattice.W < 2) field_error(p, "H and W must be at least 2");
        if ((c.lattice.H % 2) && (c.lattice.W % 2)) field_error(p, "patch admits no perfect matching (H*W odd)");
    });

    optional_field(j, "chain", "$", [&](const json& v, const std::string& p) {
        check_object(v, p, {"sweeps", "seed", "volume_target", "volume_fraction", "record_interval", "burn_in_fraction"});
        optional_field(v, "sweeps", p, [&](const json& x, const std::string& q) {
            c.chain.sweeps = get_int(x, q);
            if (c.chain.sweeps < 0) field_error(q, "must be non-negative");
        });
        optional_field(v, "seed", p, [&](const json& x, const std::string& q) {
            if (x.is_number_unsigned()) c.chain.seed = x.get<std::uint64_t>();
            else if (x.is_number_integer() && x.get<std::int64_t>() >= 0) c.chain.seed = static_cast<std::uint64_t>(x.get<std::int64_t>());
            else field_error(q, "expected a non-negative 64-bit integer");
            c.chain.seed_given = true;
        });
        optional_field(v, "volume_target", p, [&](const json& x, const std::string& q) { c.chain.volume_target = get_real(x, q); });
        optional_field(v, "volume_fraction", p, [&](const json& x, const std::string& q) {
            c.chain.volume_fraction = get_real(x, q);
            if (std::abs(*c.chain.volume_fraction) > 1.0) field_error(q, "must lie in [-1, 1]");
        });
        if (c.chain.volume_target && c.chain.volume_fraction)
            field_error(p, "volume_target and volume_fraction are mutually exclusive");
        optional_field(v, "record_interval", p, [&](const json& x, const std::string& q) {
            c.chain.record_interval = get_int(x, q);
            if (c.chain.record_interval < 1) field_error(q, "must be at least 1");
        });
        optional_field(v, "burn_in_fraction", p, [&](const json& x, const std::string& q) {
            c.chain.burn_in_fraction = get_real(x, q);
            if (c.chain.burn_in_fraction < 0.0 || c.chain.burn_in_fraction >= 1.0) field_error(q, "must lie in [0, 1)");
        });
    });

    optional_field(j, "thresholds", "$", [&](const json& v, const std::string& p) {
        check_object(v, p, {"fay", "dirac", "periodicity"});
        optional_field(v, "fay", p, [&](const json& x, const std::string& q) { c.thresholds.fay = get_real(x, q); });
        optional_field(v, "dirac", p, [&](const json& x, const std::string& q) { c.thresholds.dirac = get_real(x, q); });
        optional_field(v, "periodicity", p, [&](const json& x, const std::string& q) { c.thresholds.periodicity = get_real(x, q); });
    });

    optional_field(j, "grid", "$", [&](const json& v, const std::string& p) {
        check_object(v, p, {"boundary_samples", "amoeba_grid", "ronkin_grid"});
        auto positive = [&](const json& x, const std::string& q, int& dst) {
            dst = static_cast<int>(get_int(x, q));
            if (dst < 2 || dst > 100000) field_error(q, "must lie in [2, 100000]");
        };
        optional_field(v, "boundary_samples", p, [&](const json& x, const std::string& q) { positive(x, q, c.grid.boundary_samples); });
        optional_field(v, "amoeba_grid", p, [&](const json& x, const std::string& q) { positive(x, q, c.grid.amoeba_grid); });
        optional_field(v, "ronkin_grid", p, [&](const json& x, const std::string& q) { positive(x, q, c.grid.ronkin_grid); });
    });

    optional_field(j, "outputs", "$", [&](const json& v, const std::string& p) {
        check_object(v, p, {"directory", "formats"});
        optional_field(v, "directory", p, [&](const json& x, const std::string& q) {
            if (!x.is_string()) field_error(q, "expected a string");
            c.outputs.directory = x.get<std::string>();
        });
        optional_field(v, "formats", p, [&](const json& x, const std::string& q) {
            if (!x.is_array()) field_error(q, "expected an array of strings");
            c.outputs.formats.clear();
            for (size_t i = 0; i < x.size(); ++i) {
                const std::string qi = q + "[" + std::to_string(i) + "]";
                if (!x[i].is_string()) field_error(qi, "expected a string");
                const auto f = x[i].get<std::string>();
                if (f != "csv" && f != "json" && f != "svg") field_error(qi, "unknown format '" + f + "'");
                c.outputs.formats.push_back(f);
            }
        });
    });

    // Model-level constraints.
    if (!c.D.empty() && static_cast<int>(c.D.size()) != c.schottky.genus())
        field_error("$.D", "length must equal the genus " + std::to_string(c.schottky.genus()));
    for (const auto& v : validate_u2(c.schottky))
        field_error("$.schottky", v.what + " (generators " + join_indices(v.indices) + ")");
    for (const auto& v : validate_harnack(c.schottky, c.harnack)) {
        std::ostringstream vals;
        vals.precision(17);
        for (double x : marked_points(c.harnack)) vals << ' ' << x;
        field_error("$.harnack", v.what + (v.indices.empty() ? "" : " (index " + join_indices(v.indices) + ")") +
                                     "; points:" + vals.str());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["schottky"] = json::array();
    for (const auto& g : c.schottky.generators) j["schottky"].push_back({g.A.real(), g.A.imag(), g.mu});
    json h;
    for (const char* k : {"alpha_minus", "alpha_plus", "beta_minus", "beta_plus"}) h[k] = json::array();
    for (const auto& a : c.harnack.alphas) {
        h["alpha_minus"].push_back(a.p_minus);
        h["alpha_plus"].push_back(a.p_plus);
    }
    for (const auto& b : c.harnack.betas) {
        h["beta_minus"].push_back(b.p_minus);
        h["beta_plus"].push_back(b.p_plus);
    }
    j["harnack"] = h;
    j["D"] = c.D;
    j["max_letters"] = c.max_letters;
    j["theta_tol"] = c.theta_tol;
    j["quad_tol"] = c.quad_tol;
    j["lattice"] = {{"m", c.lattice.m}, {"n", c.lattice.n}, {"H", c.lattice.H}, {"W", c.lattice.W}};
    json ch = {{"sweeps", c.chain.sweeps},
               {"record_interval", c.chain.record_interval},
               {"burn_in_fraction", c.chain.burn_in_fraction}};
    if (c.chain.seed_given) ch["seed"] = c.chain.seed;
    if (c.chain.volume_target) ch["volume_target"] = *c.chain.volume_target;
    if (c.chain.volume_fraction) ch["volume_fraction"] = *c.chain.volume_fraction;
    j["chain"] = ch;
    j["thresholds"] = {{"fay", c.thresholds.fay}, {"dirac", c.thresholds.dirac}, {"periodicity", c.thresholds.periodicity}};
    j["grid"] = {{"boundary_samples", c.grid.boundary_samples},
                 {"amoeba_grid", c.grid.amoeba_grid},
                 {"ronkin_grid", c.grid.ronkin_grid}};
    j["outputs"] = {{"directory", c.outputs.directory}, {"formats", c.outputs.formats}};
    return j.dump(2) + "\n";
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    auto gens_eq = [](const SchottkyData& x, const SchottkyData& y) {
        if (x.generators.size() != y.generators.size()) return false;
        for (size_t i = 0; i < x.generators.size(); ++i)
            if (x.generators[i].A != y.generators[i].A || x.generators[i].mu != y.generators[i].mu) return false;
        return true;
    };
    auto pairs_eq = [](const std::vector<TrackPair>& x, const std::vector<TrackPair>& y) {
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i)
            if (x[i].p_minus != y[i].p_minus || x[i].p_plus != y[i].p_plus) return false;
        return true;
    };
    return a.schema_version == b.schema_version && gens_eq(a.schottky, b.schottky) &&
           pairs_eq(a.harnack.alphas, b.harnack.alphas) && pairs_eq(a.harnack.betas, b.harnack.betas) && a.D == b.D &&
           a.max_letters == b.max_letters && a.theta_tol == b.theta_tol && a.quad_tol == b.quad_tol &&
           a.lattice.m == b.lattice.m && a.lattice.n == b.lattice.n && a.lattice.H == b.lattice.H &&
           a.lattice.W == b.lattice.W && a.chain.sweeps == b.chain.sweeps && a.chain.seed == b.chain.seed &&
           a.chain.seed_given == b.chain.seed_given && a.chain.volume_target == b.chain.volume_target &&
           a.chain.volume_fraction == b.chain.volume_fraction && a.chain.record_interval == b.chain.record_interval &&
           a.chain.burn_in_fraction == b.chain.burn_in_fraction && a.thresholds.fay == b.thresholds.fay &&
           a.thresholds.dirac == b.thresholds.dirac && a.thresholds.periodicity == b.thresholds.periodicity &&
           a.grid.boundary_samples == b.grid.boundary_samples && a.grid.amoeba_grid == b.grid.amoeba_grid &&
           a.grid.ronkin_grid == b.grid.ronkin_grid && a.outputs.directory == b.outputs.directory &&
           a.outputs.formats == b.outputs.formats;
}

}  // namespace dimers
