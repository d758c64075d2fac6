#include "dimers/dimers_c.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "dimers/config.hpp"
#include "dimers/pipeline.hpp"
#include "dimers/ronkin.hpp"
#include "dimers/sampler.hpp"
#include "dimers/weights.hpp"

struct dimers_model {
    dimers::RunConfig cfg;
    std::unique_ptr<dimers::Surface> surface;
    std::optional<dimers::PeriodMatrix> B;
    std::unique_ptr<dimers::FockModel> fock;

    const dimers::PeriodMatrix& period_matrix() {
        if (!B) B = cfg.schottky.genus() > 0 ? surface->period_matrix().B : dimers::PeriodMatrix(0, {});
        return *B;
    }
    const dimers::FockModel& model() {
        if (!fock) {
            dimers::WeightOptions wo;
            wo.D = cfg.D_or_zero();
            wo.theta_tol = cfg.theta_tol;
            fock = std::make_unique<dimers::FockModel>(*surface, cfg.harnack, period_matrix(), wo);
        }
        return *fock;
    }
};

struct dimers_chain {
    dimers::VolumeChain state;
    std::vector<double> weights;
    dimers::Rng rng;
};

namespace {

thread_local std::string g_last_error;

dimers_status to_status(dimers::ErrorCode c) {
    switch (c) {
        case dimers::ErrorCode::invalid_argument: return DIMERS_INVALID_ARGUMENT;
        case dimers::ErrorCode::validation: return DIMERS_VALIDATION;
        case dimers::ErrorCode::numeric: return DIMERS_NUMERIC;
        case dimers::ErrorCode::io: return DIMERS_IO;
    }
    return DIMERS_INTERNAL;
}

template <class F>
dimers_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return DIMERS_OK;
    } catch (const dimers::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DIMERS_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return DIMERS_INTERNAL;
    }
}

void require(bool ok, const char* msg) {
    if (!ok) dimers::fail(dimers::ErrorCode::invalid_argument, msg);
}

char* copy_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

dimers_model* make_model(dimers::RunConfig cfg) {
    auto m = std::make_unique<dimers_model>();
    m->cfg = std::move(cfg);
    m->surface = std::make_unique<dimers::Surface>(m->cfg.schottky, m->cfg.max_letters);
    return m.release();
}

}  // namespace

extern "C" {

const char* dimers_version(void) { return DIMERS_VERSION_STRING; }
const char* dimers_last_error(void) { return g_last_error.c_str(); }
const char* dimers_rng_algorithm(void) { return dimers::Rng::algorithm(); }

dimers_status dimers_model_from_json(const char* json_text, dimers_model** out) {
    return guarded([&] {
        require(json_text && out, "null argument");
        *out = make_model(dimers::parse_config(json_text));
    });
}

dimers_status dimers_model_load(const char* path, dimers_model** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = make_model(dimers::load_config(path));
    });
}

void dimers_model_free(dimers_model* model) { delete model; }

int dimers_model_genus(const dimers_model* model) { return model ? model->cfg.schottky.genus() : -1; }

dimers_status dimers_model_period_matrix(dimers_model* model, double* imag_out, size_t cap) {
    return guarded([&] {
        require(model && (imag_out || cap == 0), "null argument");
        const auto& B = model->period_matrix();
        require(cap >= B.entries().size(), "buffer too small");
        for (size_t i = 0; i < B.entries().size(); ++i) imag_out[i] = B.entries()[i].imag();
    });
}

dimers_status dimers_model_face_weights(dimers_model* model, int H, int W, double* out, size_t cap) {
    return guarded([&] {
        require(model && out, "null argument");
        const auto fw = dimers::sampler_face_weights(model->model(), H, W);
        require(cap >= fw.size(), "buffer too small");
        std::copy(fw.begin(), fw.end(), out);
    });
}

dimers_status dimers_model_ronkin(dimers_model* model, double re_z, double im_z, double out[12]) {
    return guarded([&] {
        require(model && out, "null argument");
        dimers::RonkinOptions ro;
        ro.quad_tol = model->cfg.quad_tol;
        const auto r = dimers::ronkin_sample(*model->surface, model->cfg.harnack, {re_z, im_z}, ro);
        const double v[12] = {r.x1, r.x2, r.s1, r.s2, r.rho, r.sigma, r.h, r.R.real(), r.R.imag(),
                              r.hess[0][0], r.hess[0][1], r.hess[1][1]};
        std::copy(v, v + 12, out);
    });
}

dimers_status dimers_run_command(dimers_model* model, const char* command, const char* out_dir, int has_seed,
                                 uint64_t seed, int require_periodic, int* exit_code, char** summary_json) {
    return guarded([&] {
        require(model && command && exit_code, "null argument");
        dimers::CommandOptions opts;
        if (out_dir) opts.out_dir = out_dir;
        if (has_seed) opts.seed = seed;
        opts.require_periodic = require_periodic != 0;
        const auto res = dimers::run_command(command, model->cfg, opts);
        *exit_code = res.exit_code;
        if (summary_json) *summary_json = copy_string(res.summary_json);
        if (res.exit_code != 0) g_last_error = res.message;
    });
}

void dimers_string_free(char* s) { std::free(s); }

dimers_status dimers_chain_new(dimers_model* model, int H, int W, uint64_t seed, dimers_chain** out) {
    return guarded([&] {
        require(model && out, "null argument");
        auto fw = dimers::sampler_face_weights(model->model(), H, W);
        auto init = dimers::init_config(H, W, W % 2 == 0 ? dimers::InitPattern::brickwork_horizontal
                                                          : dimers::InitPattern::brickwork_vertical);
        *out = new dimers_chain{dimers::VolumeChain(std::move(init), fw), fw, dimers::Rng(seed)};
    });
}

void dimers_chain_free(dimers_chain* chain) { delete chain; }

dimers_status dimers_chain_run(dimers_chain* chain, int64_t sweeps, int volume_mode, double volume_target,
                               double* acceptance_rate) {
    return guarded([&] {
        require(chain && sweeps >= 0, "invalid chain arguments");
        auto& st = chain->state;
        const auto& cfg = st.config();
        const int C = cfg.face_cols();
        const std::int64_t F = static_cast<std::int64_t>(cfg.face_rows()) * C;
        std::int64_t acc = 0;
        if (volume_mode) {
            st.drive_to_volume(volume_target, chain->rng);
            for (std::int64_t k = 0; k < sweeps * F; ++k) acc += st.step(chain->rng) ? 1 : 0;
        } else {
            // Same proposal rule as mh_step, routed through the chain so heights stay current.
            for (std::int64_t k = 0; k < sweeps * F; ++k) {
                const int f = static_cast<int>(chain->rng.below(static_cast<std::uint64_t>(F)));
                const auto code = st.config().code(f / C, f % C);
                if (code != 5 && code != 10) continue;
                const double w = chain->weights[static_cast<size_t>(f)];
                const double ratio = code == 10 ? w : 1.0 / w;
                if (ratio >= 1.0 || chain->rng.uniform() < ratio) {
                    st.flip_face(f);
                    ++acc;
                }
            }
        }
        if (acceptance_rate) *acceptance_rate = sweeps > 0 ? static_cast<double>(acc) / static_cast<double>(sweeps * F) : 0.0;
    });
}

dimers_status dimers_chain_heights(const dimers_chain* chain, double* out, size_t cap) {
    return guarded([&] {
        require(chain && out, "null argument");
        const auto& h = chain->state.heights();
        require(cap >= h.size(), "buffer too small");
        std::copy(h.begin(), h.end(), out);
    });
}

dimers_status dimers_chain_volume(const dimers_chain* chain, double* out) {
    return guarded([&] {
        require(chain && out, "null argument");
        *out = chain->state.volume();
    });
}

dimers_status dimers_chain_dump(const dimers_chain* chain, char** out) {
    return guarded([&] {
        require(chain && out, "null argument");
        *out = copy_string(chain->state.config().hex_dump());
    });
}

}  // extern "C"
