#pragma once

#include "qrabi/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qrabi {

/// Model parameters plus truncation as read from a JSON parameter file.
struct ParamFile {
    ModelParams params;
    int n_max = 0;
};

/// Keys: omega1, omega2, gamma_x, gamma_y, gamma_z, omega_mode, lambda1, lambda2, n_max.
/// All keys are required and must be finite numbers; anything else is a ConfigError.
ParamFile parse_params_json(std::string_view text);
ParamFile load_params_json(const std::filesystem::path& path);

/// 12 significant digits, the fixed float rendering of every CSV we write.
std::string format_double(double v);

/// Writes through a sibling temp file and renames, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace qrabi
