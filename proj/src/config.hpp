#pragma once
#include <string>

#include "synth.hpp"
#include "vault.hpp"

namespace ffv {

/// Flat "key = value" configuration covering system parameters, matcher
/// constants, noise model, synthetic-data generation, and budgets. Unknown
/// keys are rejected so experiment files stay typo-proof.
struct Config {
    SystemParams sp;
    NoiseModel noise;
    int gen_per_finger = 40;
    int gen_spacing = 8;
    std::string tables_file; // empty: use the built-in reference tables
    double log_base = 2.0;   // base of the log^2(k) attack-cost factor
    double mu_override = -1, tau_override = -1;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Set one key on an existing config (same keys as the file format).
void config_set(Config& c, const std::string& key, const std::string& value);

/// Canonical serialization; parse(dump(c)) round-trips.
std::string dump_config(const Config& c);

} // namespace ffv
