#include "qmemsim.h"

#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "qmem/analysis.hpp"
#include "qmem/experiment.hpp"

struct qms_experiment {
    qmem::ProtocolConfig config;
    std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int fail(qms_experiment* exp, int code, const std::string& message) {
    exp->last_error = message;
    return code;
}

}  // namespace

extern "C" {

const char* qms_version(void) { return qmem::kToolVersion; }

qms_experiment* qms_experiment_create(void) { return new (std::nothrow) qms_experiment(); }

void qms_experiment_destroy(qms_experiment* exp) { delete exp; }

int qms_experiment_load_config(qms_experiment* exp, const char* path) {
    if (!exp) return QMS_ERR_INVALID_ARG;
    if (!path) return fail(exp, QMS_ERR_INVALID_ARG, "path is NULL");
    try {
        exp->config = qmem::parse_config_file(path);
        exp->last_error.clear();
        return QMS_OK;
    } catch (const qmem::ConfigError& e) {
        return fail(exp, QMS_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(exp, QMS_ERR_RUNTIME, e.what());
    }
}

int qms_experiment_set(qms_experiment* exp, const char* key, const char* value) {
    if (!exp) return QMS_ERR_INVALID_ARG;
    if (!key || !value) return fail(exp, QMS_ERR_INVALID_ARG, "key/value is NULL");
    try {
        qmem::apply_config_entry(exp->config, key, value, "qms_experiment_set");
        exp->last_error.clear();
        return QMS_OK;
    } catch (const qmem::ConfigError& e) {
        return fail(exp, QMS_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(exp, QMS_ERR_RUNTIME, e.what());
    }
}

const char* qms_experiment_last_error(const qms_experiment* exp) {
    return exp ? exp->last_error.c_str() : "invalid handle";
}

char* qms_experiment_validate(qms_experiment* exp) {
    if (!exp) return nullptr;
    try {
        return dup_string(qmem::diagnostics_to_json(qmem::validate_config(exp->config)));
    } catch (const std::exception& e) {
        fail(exp, QMS_ERR_RUNTIME, e.what());
        return nullptr;
    }
}

char* qms_experiment_exact_probabilities(qms_experiment* exp) {
    if (!exp) return nullptr;
    try {
        nlohmann::ordered_json obj;
        for (const auto& [cls, p] : qmem::exact_success_probability(exp->config))
            obj[qmem::to_string(cls)] = p;
        return dup_string(obj.dump());
    } catch (const std::exception& e) {
        fail(exp, QMS_ERR_RUNTIME, e.what());
        return nullptr;
    }
}

int qms_experiment_run(qms_experiment* exp, const char* mode, const char* out_dir,
                       const char* formats) {
    if (!exp) return QMS_ERR_INVALID_ARG;
    if (!mode || !out_dir) return fail(exp, QMS_ERR_INVALID_ARG, "mode/out_dir is NULL");
    try {
        qmem::ExperimentSpec spec;
        spec.config = exp->config;
        spec.mode = qmem::run_mode_from_string(mode);
        spec.output_dir = out_dir;
        std::string fmt = formats ? formats : "json";
        spec.write_json = fmt.find("json") != std::string::npos;
        spec.write_csv = fmt.find("csv") != std::string::npos;
        std::string diagnostic;
        int status = qmem::run_experiment(spec, diagnostic);
        exp->last_error = diagnostic;
        if (status == 0) return QMS_OK;
        return status == 1 ? QMS_ERR_CONFIG : QMS_ERR_RUNTIME;
    } catch (const qmem::ConfigError& e) {
        return fail(exp, QMS_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(exp, QMS_ERR_RUNTIME, e.what());
    }
}

void qms_string_free(char* s) { delete[] s; }

}  // extern "C"
