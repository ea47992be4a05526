#include "qrabi/io.hpp"

#include "qrabi/error.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qrabi {

namespace {

constexpr std::array<std::string_view, 9> kParamKeys = {"omega1",     "omega2",  "gamma_x", "gamma_y", "gamma_z",
                                                       "omega_mode", "lambda1", "lambda2", "n_max"};

double finite_number(const nlohmann::json& doc, std::string_view key) {
    const auto it = doc.find(std::string(key));
    if (it == doc.end()) raise(ErrorCode::ConfigError, "parameter file is missing '" + std::string(key) + "'");
    if (!it->is_number()) raise(ErrorCode::ConfigError, "'" + std::string(key) + "' must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) raise(ErrorCode::ConfigError, "'" + std::string(key) + "' is not finite");
    return v;
}

} // namespace

ParamFile parse_params_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorCode::ConfigError, std::string("malformed parameter JSON: ") + e.what());
    }
    if (!doc.is_object()) raise(ErrorCode::ConfigError, "parameter file must hold a JSON object");
    for (const auto& item : doc.items()) {
        bool known = false;
        for (std::string_view k : kParamKeys) known = known || item.key() == k;
        if (!known) raise(ErrorCode::ConfigError, "unknown key '" + item.key() + "' in parameter file");
    }

    ParamFile out;
    ModelParams& p = out.params;
    p.omega1 = finite_number(doc, "omega1");
    p.omega2 = finite_number(doc, "omega2");
    p.gamma_x = finite_number(doc, "gamma_x");
    p.gamma_y = finite_number(doc, "gamma_y");
    p.gamma_z = finite_number(doc, "gamma_z");
    p.omega_mode = finite_number(doc, "omega_mode");
    p.lambda1 = finite_number(doc, "lambda1");
    p.lambda2 = finite_number(doc, "lambda2");
    const double n = finite_number(doc, "n_max");
    if (n != std::floor(n) || n < 1 || n > 1e6) raise(ErrorCode::ConfigError, "n_max must be a positive integer");
    out.n_max = static_cast<int>(n);
    try {
        p.validate();
    } catch (const Error& e) {
        raise(ErrorCode::ConfigError, e.what());
    }
    return out;
}

ParamFile load_params_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::ConfigError, "cannot open parameter file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_params_json(buf.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::IoError, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            raise(ErrorCode::IoError, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        raise(ErrorCode::IoError, "cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

} // namespace qrabi
