#pragma once

// Run configuration shared by the CLI and its config files. A RunConfig
// echoed by --dump-config re-parses to an identical RunConfig.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "catbell/analytic.hpp"

namespace catbell {

// Accepts "a+bi" (optional whitespace, "i"/"-i"/"2i" shorthands) and the
// pair form "(re, im)". Throws std::invalid_argument on malformed input.
Amplitude parse_complex(const std::string& text);

// "min:max" with min < max.
std::pair<double, double> parse_range(const std::string& text);

struct RunConfig {
    std::string command;  // eval | scan | verify | optimize

    std::optional<Amplitude> sigma, eta;
    std::optional<double> phi;
    std::optional<Amplitude> z, zp, w, wp;

    std::optional<std::pair<double, double>> alpha_range, omega_range;
    std::optional<std::pair<int, int>> steps;

    std::optional<int> cutoff, samples, restarts, workers;
    std::optional<long> budget;
    std::optional<std::uint64_t> seed;
    std::optional<double> settings_box;

    std::optional<std::string> out, format;

    bool paper_setting = false;
    bool literal_vacuum = false;

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace catbell
