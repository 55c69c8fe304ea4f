#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvahedge/sim_engine.hpp"

namespace cvahedge {

struct ConfigError : std::runtime_error {
    int line = 0;
    ConfigError(int line_no, const std::string& msg)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

// "key = value" lines, '#' comments. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_string(const std::string& text);

// Flat key/value echo, parseable by parse_config.
std::vector<std::pair<std::string, std::string>> config_pairs(const ExperimentConfig& c);
std::string config_text(const ExperimentConfig& c);

std::vector<std::string> config_keys();

}  // namespace cvahedge
