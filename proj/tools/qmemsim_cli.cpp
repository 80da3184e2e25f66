// Batch experiment runner over the qmemsim C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qmemsim.h"

int main(int argc, char** argv) {
    CLI::App app{"qmemsim — atomic-ensemble polarization-photon quantum memory simulator"};

    std::string config_path;
    std::string mode = "exact";
    std::string out_dir = ".";
    std::string format = "json";
    long trials = -1;
    long long seed = -1;
    bool validate_only = false;

    app.add_option("--config", config_path, "Config file (flat key = value)")->required();
    app.add_option("--mode", mode, "exact|montecarlo|both")
        ->check(CLI::IsMember({"exact", "montecarlo", "both"}));
    app.add_option("--trials", trials, "Monte Carlo trial count (overrides config)");
    app.add_option("--seed", seed, "Random seed (overrides config)");
    app.add_option("--out", out_dir, "Output directory for report files");
    app.add_option("--format", format, "Comma-separated report formats: json,csv");
    app.add_flag("--validate", validate_only, "Only validate the config and print diagnostics");

    CLI11_PARSE(app, argc, argv);

    qms_experiment* exp = qms_experiment_create();
    if (!exp) {
        std::fprintf(stderr, "error: out of memory\n");
        return 2;
    }

    int status = qms_experiment_load_config(exp, config_path.c_str());
    if (status != QMS_OK) {
        std::fprintf(stderr, "error: %s\n", qms_experiment_last_error(exp));
        qms_experiment_destroy(exp);
        return status == QMS_ERR_CONFIG ? 1 : 2;
    }

    // Command-line flags take precedence over config-file values.
    if (trials >= 0)
        status = qms_experiment_set(exp, "trials", std::to_string(trials).c_str());
    if (status == QMS_OK && seed >= 0)
        status = qms_experiment_set(exp, "seed", std::to_string(seed).c_str());
    if (status != QMS_OK) {
        std::fprintf(stderr, "error: %s\n", qms_experiment_last_error(exp));
        qms_experiment_destroy(exp);
        return 1;
    }

    if (validate_only) {
        char* diags = qms_experiment_validate(exp);
        if (!diags) {
            std::fprintf(stderr, "error: %s\n", qms_experiment_last_error(exp));
            qms_experiment_destroy(exp);
            return 2;
        }
        std::printf("%s\n", diags);
        bool clean = std::string(diags).find("\"error\"") == std::string::npos;
        qms_string_free(diags);
        qms_experiment_destroy(exp);
        return clean ? 0 : 1;
    }

    status = qms_experiment_run(exp, mode.c_str(), out_dir.c_str(), format.c_str());
    if (status != QMS_OK) {
        std::fprintf(stderr, "error: %s\n", qms_experiment_last_error(exp));
        qms_experiment_destroy(exp);
        return status == QMS_ERR_CONFIG ? 1 : 2;
    }

    std::printf("wrote %s/summary.json\n", out_dir.c_str());
    qms_experiment_destroy(exp);
    return 0;
}
