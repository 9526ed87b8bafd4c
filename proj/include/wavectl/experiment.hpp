#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wavectl {

enum class Scenario {
    DirichletEc,
    NeumannEc,
    Penalty,
    TwoSided,
    BangBang,
    Stab,
    Of,
    Mismatch,
    Semilinear,
    Iss,
    Quasilinear,
};

const char* scenario_name(Scenario s);

/// One experiment: a scenario plus its validated flat key set. Numeric keys
/// carry defaults filled in by the parser; unknown keys are rejected.
struct ExperimentConfig {
    Scenario scenario = Scenario::Stab;
    std::map<std::string, double> nums;
    std::map<std::string, std::string> strs;

    double num(const std::string& key) const;
    int num_int(const std::string& key) const;
    bool has_str(const std::string& key) const { return strs.count(key) != 0; }
    std::string str(const std::string& key) const;
};

struct ParseError {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ParseError> errors;  // all errors, not just the first

    bool ok() const { return errors.empty() && config.has_value(); }
};

/// Line-based `key = value` format with a `[scenario]` header.
ParseResult parse_config(const std::string& text);

/// Execute a scenario and write its CSV (and optional SVG) artifacts under
/// out_dir; returns the written paths. Deterministic for a fixed seed.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                        const std::string& file_suffix = "");

}  // namespace wavectl
