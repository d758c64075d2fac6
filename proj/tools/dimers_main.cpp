// dimers <command> <config.json> [--out DIR] [--seed N] [--require-periodic]
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "dimers/dimers_c.h"

namespace {

int exit_for(dimers_status s) {
    switch (s) {
        case DIMERS_OK: return 0;
        case DIMERS_INVALID_ARGUMENT:
        case DIMERS_VALIDATION: return 2;
        case DIMERS_IO: return 4;
        default: return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fock-weighted dimer models on M-curves: validation, amoebas, Ronkin functions and sampling"};
    app.set_version_flag("--version", std::string(dimers_version()));
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool require_periodic = false;
    const struct {
        const char* name;
        const char* help;
    } commands[] = {
        {"validate", "check the Schottky data, Harnack clusters and weight residuals"},
        {"amoeba", "trace the amoeba and Newton polygon boundaries"},
        {"ronkin", "sample the Ronkin function and surface tension"},
        {"weights", "write the face weights of the sampler grid"},
        {"sample", "run the Metropolis-Hastings chain"},
        {"selftest", "run built-in oracle checks"},
    };
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "random seed (overrides the config)");
        sub->add_flag("--require-periodic", require_periodic, "fail unless the weights are periodic");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const bool has_seed = app.get_subcommands().front()->count("--seed") > 0;

    dimers_model* model = nullptr;
    if (dimers_status s = dimers_model_load(config_path.c_str(), &model); s != DIMERS_OK) {
        std::fprintf(stderr, "dimers: %s\n", dimers_last_error());
        return exit_for(s);
    }
    int code = 0;
    char* summary = nullptr;
    const dimers_status s = dimers_run_command(model, command.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                               has_seed, seed, require_periodic, &code, &summary);
    if (s != DIMERS_OK) {
        std::fprintf(stderr, "dimers: %s\n", dimers_last_error());
        dimers_model_free(model);
        return exit_for(s);
    }
    std::fputs(summary, stdout);
    if (code != 0) std::fprintf(stderr, "dimers: %s\n", dimers_last_error());
    dimers_string_free(summary);
    dimers_model_free(model);
    return code;
}
