#pragma once

#include <string>

#include "json.hpp"
#include "velpert/perturbation.hpp"
#include "velpert/spectral.hpp"

namespace velpert {

/// {"domain": [a, b], "coeffs": [c0, ..., cN]}
nlohmann::json to_json(const SpectralFun& f);
SpectralFun spectral_from_json(const nlohmann::json& j, double tol_rel = SpectralOptions{}.tol_rel);

/// {"n", "E0", "user_scale", "user_norm",
///  "orders": [{"j", "E", "y": <SpectralFun>}, ...], "norm": [N0, ...]}
/// Stored y_j are the internally normalized corrections.
nlohmann::json to_json(const PerturbationSeries& series);
PerturbationSeries series_from_json(const nlohmann::json& j, double tol_rel = SpectralOptions{}.tol_rel);

/// Two-space indented dump; doubles use the shortest round-trip form.
std::string dump(const nlohmann::json& j);

/// Shortest round-trip text for a double, independent of the locale.
std::string format_number(double v);

PerturbationSeries load_series_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace velpert
