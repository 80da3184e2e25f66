#ifndef QMEM_EXPERIMENT_HPP
#define QMEM_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "qmem/analysis.hpp"
#include "qmem/protocol.hpp"

namespace qmem {

inline constexpr const char* kToolVersion = "0.1.0";

enum class RunMode { exact, montecarlo, both };

RunMode run_mode_from_string(const std::string& s);
const char* to_string(RunMode m);

struct Diagnostic {
    enum class Severity { error, warning };
    std::string key;
    std::string message;
    Severity severity = Severity::error;
};

struct ExperimentSpec {
    ProtocolConfig config;
    RunMode mode = RunMode::exact;
    std::string output_dir = ".";
    bool write_json = true;
    bool write_csv = false;
    bool write_trials = true;  // trials.jsonl, montecarlo modes only
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat "key = value" config file with '#' comments.
ProtocolConfig parse_config_file(const std::string& path);
ProtocolConfig parse_config_text(const std::string& text, const std::string& origin);

// Applies one "key = value" override on top of an existing config.
void apply_config_entry(ProtocolConfig& config, const std::string& key,
                        const std::string& value, const std::string& origin);

std::vector<Diagnostic> validate_config(const ProtocolConfig& config);
std::vector<Diagnostic> validate_config_file(const std::string& path);

std::string diagnostics_to_json(const std::vector<Diagnostic>& diags);

// Writes summary.json (and optionally trials.jsonl / summary.csv) into
// spec.output_dir. Returns the process exit status: 0 ok, 1 config error,
// 2 runtime error; error text goes to `diagnostic`.
int run_experiment(const ExperimentSpec& spec, std::string& diagnostic);

std::string trial_record_to_json(const TrialRecord& record, long index);

}  // namespace qmem

#endif  // QMEM_EXPERIMENT_HPP
