#pragma once
#include <string>

#include "utb/booster.hpp"

namespace utb {

// Model files are JSON, format_version 1. Keys are emitted in sorted order and
// real numbers use their shortest exact decimal form, so saving is
// deterministic and save -> load -> save is byte-stable.

std::string model_to_json(const BoosterModel& model);
BoosterModel model_from_json(const std::string& text);

void save_model(const BoosterModel& model, const std::string& path);
BoosterModel load_model(const std::string& path);

}  // namespace utb
