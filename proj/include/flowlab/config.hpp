#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowlab/flow.hpp"

namespace flowlab {

struct Diagnostic {
    enum class Level { Error, Warning };
    Level level = Level::Error;
    std::string field;
    std::string message;
    int line = 0;  // 0 when not tied to a line

    std::string to_string() const;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

// Flat `key = value` text with dotted sections, '#' comments and
// comma-separated lists.  Values stay as text until they are built into a
// typed config, so hashing and echoing are byte-faithful.
struct ConfigMap {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries;
    std::string raw;  // original bytes

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    const std::string* find(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
};

ConfigMap parse_config_text(const std::string& text);  // throws ConfigError on syntax
ConfigMap load_config_file(const std::string& path);   // adds an IO diagnostic on failure

// All violations in one pass; empty means valid.  Pure.
std::vector<Diagnostic> validate_config(const ConfigMap& map);
std::vector<Diagnostic> validate_config_file(const std::string& path);

// Names of the experiments the runner can dispatch.
const std::vector<std::string>& known_experiments();

// Typed configuration built from a validated map.
struct ExperimentConfig {
    // system block
    int dimension = 4;
    std::vector<double> rotation;
    bool rotation_has_symbolic = false;
    std::vector<double> p_base;
    std::string profile_kind = "power_bump";
    int profile_ell = 3;
    double profile_theta = 0.2;
    int schedule_i0 = 2;
    int schedule_torus_depth = 0;        // > 0: compose from the base dimension
    std::vector<double> schedule_ells;   // used with schedule_deltas
    std::vector<double> schedule_deltas;
    std::vector<double> schedule_betas;  // direct alternative
    double r_v = 0.25;
    QuadratureParams quad;

    // experiment block
    std::string experiment;
    std::map<std::string, std::string> params;  // experiment.* subkeys, raw text

    // sweep / run block
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    std::string output_dir = "out";
    int workers = 1;
    std::uint64_t seed = 12345;

    std::string config_hash;  // FNV-1a of the raw bytes
    ConfigMap source;

    TimeProfile make_profile() const;
    FlowSystem make_system() const;

    // typed access to experiment.* parameters with defaults
    double param_real(const std::string& name, double fallback) const;
    long long param_int(const std::string& name, long long fallback) const;
    std::vector<double> param_list(const std::string& name,
                                   std::vector<double> fallback) const;
};

// Validates and builds; throws ConfigError carrying every error found.
ExperimentConfig build_config(const ConfigMap& map);
ExperimentConfig load_config(const std::string& path);

// Value of a symbolic rotation token (sqrt2, sqrt3, sqrt5, sqrt7, golden),
// reduced mod 1; returns false for non-symbolic text.
bool expand_rotation_token(const std::string& token, double& out);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace flowlab
