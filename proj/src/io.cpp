#include "velpert/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "velpert/errors.hpp"

namespace velpert {

using nlohmann::json;

json to_json(const SpectralFun& f) {
  const auto c = f.coeffs();
  return json{{"domain", {f.domain().a, f.domain().b}}, {"coeffs", std::vector<double>(c.begin(), c.end())}};
}

SpectralFun spectral_from_json(const json& j, double tol_rel) {
  try {
    const auto dom = j.at("domain").get<std::vector<double>>();
    if (dom.size() != 2) throw ConfigError("spectral function: 'domain' must have two entries");
    auto coeffs = j.at("coeffs").get<std::vector<double>>();
    if (coeffs.empty()) throw ConfigError("spectral function: empty 'coeffs'");
    return SpectralFun({dom[0], dom[1]}, std::move(coeffs), tol_rel);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed spectral function: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed spectral function: ") + e.what());
  }
}

json to_json(const PerturbationSeries& series) {
  json orders = json::array();
  for (std::size_t j = 0; j < series.orders.size(); ++j) {
    orders.push_back({{"j", j}, {"E", series.orders[j].E}, {"y", to_json(series.orders[j].y)}});
  }
  return json{{"n", series.state.n},
              {"E0", series.state.E0},
              {"user_scale", series.state.user_scale},
              {"user_norm", series.state.user_norm},
              {"orders", orders},
              {"norm", series.norm}};
}

PerturbationSeries series_from_json(const json& j, double tol_rel) {
  try {
    PerturbationSeries series;
    series.state.n = j.at("n").get<int>();
    series.state.E0 = j.at("E0").get<double>();
    series.state.user_scale = j.value("user_scale", 1.0);
    series.state.user_norm = j.value("user_norm", 1.0);
    const auto& orders = j.at("orders");
    if (!orders.is_array() || orders.empty()) throw ConfigError("series: 'orders' must be a non-empty array");
    for (std::size_t k = 0; k < orders.size(); ++k) {
      if (orders[k].at("j").get<std::size_t>() != k) throw ConfigError("series: orders out of sequence");
      series.orders.push_back({orders[k].at("E").get<double>(), spectral_from_json(orders[k].at("y"), tol_rel)});
    }
    series.state.y0 = series.orders[0].y;
    series.state.dy0 = series.state.y0.derivative();
    series.norm = j.at("norm").get<std::vector<double>>();
    if (series.norm.size() != series.orders.size()) throw ConfigError("series: 'norm' length mismatch");
    return series;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed series: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

PerturbationSeries load_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("series file '" + path + "' is not valid JSON: " + e.what());
  }
  return series_from_json(j);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace velpert
