#include "qmem/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qmem {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

RunMode run_mode_from_string(const std::string& s) {
    if (s == "exact") return RunMode::exact;
    if (s == "montecarlo") return RunMode::montecarlo;
    if (s == "both") return RunMode::both;
    throw ConfigError("unknown mode '" + s + "' (expected exact|montecarlo|both)");
}

const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::exact: return "exact";
        case RunMode::montecarlo: return "montecarlo";
        case RunMode::both: return "both";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key, const std::string& origin) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin + ": key '" + key + "' has non-numeric value '" + value + "'");
    }
}

long parse_long(const std::string& value, const std::string& key, const std::string& origin) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin + ": key '" + key + "' has non-integer value '" + value + "'");
    }
}

// Accepts "0.5", "-0.5", "0.3+0.4i", "0.3-0.4i", "0.4i".
Complex parse_complex(const std::string& value, const std::string& key,
                      const std::string& origin) {
    std::string v = trim(value);
    if (v.empty()) throw ConfigError(origin + ": key '" + key + "' is empty");
    if (v.back() == 'i' || v.back() == 'j') {
        std::string body = v.substr(0, v.size() - 1);
        // Split on the last +/- that is not an exponent sign or leading sign.
        for (std::size_t idx = body.size(); idx-- > 1;) {
            char c = body[idx];
            if ((c == '+' || c == '-') && body[idx - 1] != 'e' && body[idx - 1] != 'E') {
                double re = parse_double(body.substr(0, idx), key, origin);
                std::string im_str = body.substr(idx);
                if (im_str == "+" || im_str == "-") im_str += "1";
                return {re, parse_double(im_str, key, origin)};
            }
        }
        std::string im_str = body.empty() || body == "+" ? "1" : (body == "-" ? "-1" : body);
        return {0.0, parse_double(im_str, key, origin)};
    }
    return {parse_double(v, key, origin), 0.0};
}

bool parse_detector_kind(const std::string& value, const std::string& key,
                         const std::string& origin) {
    if (value == "resolving") return true;
    if (value == "bucket") return false;
    throw ConfigError(origin + ": key '" + key + "' must be 'resolving' or 'bucket', got '" +
                      value + "'");
}

}  // namespace

void apply_config_entry(ProtocolConfig& config, const std::string& key, const std::string& value,
                        const std::string& origin) {
    if (key == "p") config.p = parse_double(value, key, origin);
    else if (key == "phi_a") config.phi_a = parse_double(value, key, origin);
    else if (key == "phi_b") config.phi_b = parse_double(value, key, origin);
    else if (key == "c1") config.c1 = parse_double(value, key, origin);
    else if (key == "c2") config.c2 = parse_double(value, key, origin);
    else if (key == "alpha") config.alpha = parse_complex(value, key, origin);
    else if (key == "beta") config.beta = parse_complex(value, key, origin);
    else if (key == "prep_detector") config.prep_detector.number_resolving = parse_detector_kind(value, key, origin);
    else if (key == "prep_efficiency") config.prep_detector.efficiency = parse_double(value, key, origin);
    else if (key == "prep_dark_prob") config.prep_detector.dark_prob = parse_double(value, key, origin);
    else if (key == "bell_detector") config.bell_detector.number_resolving = parse_detector_kind(value, key, origin);
    else if (key == "bell_efficiency") config.bell_detector.efficiency = parse_double(value, key, origin);
    else if (key == "bell_dark_prob") config.bell_detector.dark_prob = parse_double(value, key, origin);
    else if (key == "eta_retrieval") config.eta_retrieval = parse_double(value, key, origin);
    else if (key == "max_prep_attempts") config.max_prep_attempts = int(parse_long(value, key, origin));
    else if (key == "trials") config.trials = int(parse_long(value, key, origin));
    else if (key == "seed") config.seed = std::uint64_t(parse_long(value, key, origin));
    else if (key == "memory") {
        if (value == "ideal") config.provenance = MemoryProvenance::ideal;
        else if (value == "heralded") config.provenance = MemoryProvenance::heralded;
        else if (value == "noisy") config.provenance = MemoryProvenance::noisy;
        else throw ConfigError(origin + ": key 'memory' must be ideal|heralded|noisy, got '" + value + "'");
    } else {
        throw ConfigError(origin + ": unknown key '" + key + "'");
    }
}

ProtocolConfig parse_config_text(const std::string& text, const std::string& origin) {
    ProtocolConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        apply_config_entry(config, key, value, origin + ":" + std::to_string(line_no));
    }
    return config;
}

ProtocolConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::vector<Diagnostic> validate_config(const ProtocolConfig& config) {
    std::vector<Diagnostic> diags;
    auto err = [&](const std::string& key, const std::string& msg) {
        diags.push_back({key, msg, Diagnostic::Severity::error});
    };
    auto warn = [&](const std::string& key, const std::string& msg) {
        diags.push_back({key, msg, Diagnostic::Severity::warning});
    };

    if (config.p <= 0.0) err("p", "emission probability must be > 0; herald is impossible");
    else if (config.p >= 1.0) err("p", "emission probability must be < 1");
    else if (config.p > 0.1) warn("p", "p is large; double-excitation contamination grows as p^2");

    double qubit_norm = std::norm(config.alpha) + std::norm(config.beta);
    if (std::abs(qubit_norm - 1.0) > 1e-10)
        err("alpha", "input qubit is not normalized: |alpha|^2+|beta|^2 = " +
                         std::to_string(qubit_norm));

    if (config.c1 < 0.0) err("c1", "vacuum admixture must be >= 0");
    if (config.c2 < 0.0) err("c2", "vacuum admixture must be >= 0");

    for (const auto& [name, model] :
         {std::pair<const char*, const DetectorModel&>{"prep", config.prep_detector},
          {"bell", config.bell_detector}}) {
        std::string prefix(name);
        if (model.efficiency < 0.0 || model.efficiency > 1.0)
            err(prefix + "_efficiency", "detector efficiency must be in [0, 1]");
        if (model.dark_prob < 0.0 || model.dark_prob >= 1.0)
            err(prefix + "_dark_prob", "dark count probability must be in [0, 1)");
    }

    if (config.eta_retrieval < 0.0 || config.eta_retrieval > 1.0)
        err("eta_retrieval", "retrieval efficiency must be in [0, 1]");
    if (config.max_prep_attempts <= 0) err("max_prep_attempts", "must be positive");
    if (config.trials <= 0) err("trials", "must be positive");
    return diags;
}

std::vector<Diagnostic> validate_config_file(const std::string& path) {
    try {
        return validate_config(parse_config_file(path));
    } catch (const ConfigError& e) {
        return {{"", e.what(), Diagnostic::Severity::error}};
    }
}

std::string diagnostics_to_json(const std::vector<Diagnostic>& diags) {
    json arr = json::array();
    for (const auto& d : diags)
        arr.push_back({{"key", d.key},
                       {"message", d.message},
                       {"severity", d.severity == Diagnostic::Severity::error ? "error" : "warning"}});
    return arr.dump();
}

std::string trial_record_to_json(const TrialRecord& record, long index) {
    json obj;
    obj["trial"] = index;
    obj["prep_attempts_a"] = record.prep_attempts_a;
    obj["prep_attempts_b"] = record.prep_attempts_b;
    obj["pattern"] = record.pattern.str();
    obj["class"] = to_string(record.pattern_class);
    if (record.pattern_class != PatternClass::Reject) {
        obj["stored"] = record.stored.is_vacuum_only()
                            ? json("vacuum")
                            : json::parse(record.stored.to_json_string());
        obj["readout_fidelity"] = record.readout_fidelity.value();
    }
    return obj.dump();
}

namespace {

json config_echo(const ProtocolConfig& c) {
    json obj;
    obj["p"] = c.p;
    obj["phi_a"] = c.phi_a;
    obj["phi_b"] = c.phi_b;
    obj["c1"] = c.c1;
    obj["c2"] = c.c2;
    obj["alpha"] = {{"re", c.alpha.real()}, {"im", c.alpha.imag()}};
    obj["beta"] = {{"re", c.beta.real()}, {"im", c.beta.imag()}};
    obj["prep_detector"] = c.prep_detector.number_resolving ? "resolving" : "bucket";
    obj["prep_efficiency"] = c.prep_detector.efficiency;
    obj["prep_dark_prob"] = c.prep_detector.dark_prob;
    obj["bell_detector"] = c.bell_detector.number_resolving ? "resolving" : "bucket";
    obj["bell_efficiency"] = c.bell_detector.efficiency;
    obj["bell_dark_prob"] = c.bell_detector.dark_prob;
    obj["eta_retrieval"] = c.eta_retrieval;
    obj["max_prep_attempts"] = c.max_prep_attempts;
    obj["trials"] = c.trials;
    obj["seed"] = c.seed;
    obj["memory"] = to_string(c.provenance);
    return obj;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec, std::string& diagnostic) {
    try {
        auto diags = validate_config(spec.config);
        for (const auto& d : diags) {
            if (d.severity == Diagnostic::Severity::error) {
                diagnostic = "config error: " + d.key + ": " + d.message;
                return 1;
            }
        }
        if ((spec.mode == RunMode::exact || spec.mode == RunMode::both) &&
            spec.config.provenance == MemoryProvenance::heralded) {
            diagnostic = "config error: memory: exact mode requires ideal or noisy provenance";
            return 1;
        }

        fs::create_directories(spec.output_dir);
        json summary;
        summary["tool"] = "qmemsim";
        summary["version"] = kToolVersion;
        summary["mode"] = to_string(spec.mode);
        summary["seed"] = spec.config.seed;
        summary["config"] = config_echo(spec.config);

        std::map<PatternClass, double> exact;
        if (spec.mode == RunMode::exact || spec.mode == RunMode::both) {
            exact = exact_success_probability(spec.config);
            json probs;
            for (const auto& [cls, p] : exact) probs[to_string(cls)] = p;
            summary["exact"] = probs;
        }

        RunStatistics stats;
        if (spec.mode == RunMode::montecarlo || spec.mode == RunMode::both) {
            std::vector<TrialRecord> records;
            records.reserve(std::size_t(spec.config.trials));
            std::ofstream trials_out;
            if (spec.write_trials) {
                trials_out.open(fs::path(spec.output_dir) / "trials.jsonl",
                                std::ios::binary | std::ios::trunc);
                if (!trials_out) {
                    diagnostic = "runtime error: cannot write trials.jsonl in " + spec.output_dir;
                    return 2;
                }
            }
            for (long k = 0; k < spec.config.trials; ++k) {
                Rng rng = Rng::substream(spec.config.seed, std::uint64_t(k));
                TrialRecord record = run_trial(spec.config, rng);
                if (spec.write_trials) trials_out << trial_record_to_json(record, k) << "\n";
                records.push_back(std::move(record));
            }
            stats = aggregate(records);
            summary["montecarlo"] = json::parse(stats.to_json_string());
        }

        if (spec.mode == RunMode::both) {
            json diff;
            for (const auto& [cls, p] : exact) {
                auto it = stats.class_counts.find(cls);
                double freq = it == stats.class_counts.end()
                                  ? 0.0
                                  : double(it->second) / double(stats.trials);
                diff[to_string(cls)] = std::abs(freq - p);
            }
            summary["exact_vs_montecarlo_abs_diff"] = diff;
        }

        if (spec.write_json) {
            std::ofstream out(fs::path(spec.output_dir) / "summary.json",
                              std::ios::binary | std::ios::trunc);
            if (!out) {
                diagnostic = "runtime error: cannot write summary.json in " + spec.output_dir;
                return 2;
            }
            out << summary.dump(2) << "\n";
        }
        if (spec.write_csv && (spec.mode == RunMode::montecarlo || spec.mode == RunMode::both)) {
            std::ofstream out(fs::path(spec.output_dir) / "summary.csv",
                              std::ios::binary | std::ios::trunc);
            out << RunStatistics::csv_header() << "\n" << stats.to_csv_row() << "\n";
        }
        diagnostic.clear();
        return 0;
    } catch (const ConfigError& e) {
        diagnostic = std::string("config error: ") + e.what();
        return 1;
    } catch (const std::exception& e) {
        diagnostic = std::string("runtime error: ") + e.what();
        return 2;
    }
}

}  // namespace qmem
