#include "velpert/problem.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <system_error>

#include "velpert/errors.hpp"

namespace velpert {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

Expr parse_value(std::string_view text, const std::string& key) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

// Constant expression such as "pi^2 + 2".
double parse_constant(std::string_view text, const std::string& key) {
  const Expr e = parse_value(text, key);
  if (e.depends_on_x()) throw ConfigError("key '" + key + "': must not depend on x");
  try {
    return e.eval(0.0);
  } catch (const DomainError& err) {
    throw ConfigError("key '" + key + "': " + err.what());
  }
}

constexpr std::size_t kSamplePoints = 64;

}  // namespace

bool LinearOperator::is_zero() const {
  return p2.is_constant(0.0) && p1.is_constant(0.0) && p0.is_constant(0.0);
}

SpectralFun LinearOperator::apply(const SpectralFun& f) const {
  const Interval dom = f.domain();
  const SpectralOptions opts{.tol_rel = f.tol_rel()};
  SpectralFun out = SpectralFun::constant(dom, 0.0, f.tol_rel());
  if (!p0.is_constant(0.0)) out = out + to_spectral(p0, dom, opts) * f;
  if (!p1.is_constant(0.0) || !p2.is_constant(0.0)) {
    const SpectralFun df = f.derivative();
    if (!p1.is_constant(0.0)) out = out + to_spectral(p1, dom, opts) * df;
    if (!p2.is_constant(0.0)) out = out + to_spectral(p2, dom, opts) * df.derivative();
  }
  return out;
}

double LinearOperator::apply_at(double x, double f, double df, double d2f) const {
  return p2.eval(x) * d2f + p1.eval(x) * df + p0.eval(x) * f;
}

bool PerturbationProblem::v0_is_zero() const {
  if (!v0.depends_on_x()) return v0.eval(domain.a) == 0.0;
  for (std::size_t i = 0; i < kSamplePoints; ++i) {
    const double x = domain.a + domain.length() * static_cast<double>(i) / (kSamplePoints - 1);
    if (v0.eval(x) != 0.0) return false;
  }
  return true;
}

PerturbationProblem load_problem(std::string_view config_text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::istringstream in{std::string(config_text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (value.empty()) throw ConfigError("key '" + key + "': empty value");
    if (!entries.emplace(key, std::string(value)).second) {
      throw ConfigError("key '" + key + "' given more than once");
    }
  }

  PerturbationProblem problem;
  auto take = [&](const std::string& key) -> std::string {
    auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError("missing key '" + key + "'");
    std::string v = std::move(it->second);
    entries.erase(it);
    return v;
  };

  {
    const std::string text = take("domain");
    std::istringstream parts(text);
    std::string a_text;
    std::string b_text;
    std::string extra;
    if (!(parts >> a_text >> b_text) || (parts >> extra)) {
      throw ConfigError("key 'domain': expected two numbers '<a> <b>'");
    }
    problem.domain = {parse_number(a_text, "domain"), parse_number(b_text, "domain")};
    if (!(problem.domain.a < problem.domain.b)) throw ConfigError("key 'domain': need a < b");
  }
  problem.v0 = parse_value(take("v0"), "v0");

  // Perturbation orders must run 1, 2, ... without gaps.
  std::map<int, std::map<std::string, std::string>> orders;
  for (auto it = entries.begin(); it != entries.end();) {
    const std::string& key = it->first;
    constexpr std::string_view prefix = "perturbation.";
    if (key.rfind(prefix, 0) != 0) {
      ++it;
      continue;
    }
    const std::string_view rest = std::string_view(key).substr(prefix.size());
    const auto dot = rest.find('.');
    int k = 0;
    const std::string_view k_text = rest.substr(0, dot);
    auto res = std::from_chars(k_text.data(), k_text.data() + k_text.size(), k);
    const std::string_view part = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    if (dot == std::string_view::npos || res.ec != std::errc() || res.ptr != k_text.data() + k_text.size() ||
        k < 1 || (part != "p2" && part != "p1" && part != "p0")) {
      throw ConfigError("unknown key '" + key + "'");
    }
    orders[k][std::string(part)] = it->second;
    it = entries.erase(it);
  }
  if (orders.empty()) throw ConfigError("empty perturbation list: need perturbation.1.{p2,p1,p0}");
  int expected = 1;
  for (auto& [k, parts] : orders) {
    if (k != expected) {
      throw ConfigError("perturbation orders must be contiguous from 1; missing perturbation." +
                        std::to_string(expected));
    }
    ++expected;
    const std::string base = "perturbation." + std::to_string(k) + ".";
    LinearOperator op;
    for (const char* name : {"p2", "p1", "p0"}) {
      auto it = parts.find(name);
      if (it == parts.end()) throw ConfigError("missing key '" + base + name + "'");
      Expr e = parse_value(it->second, base + name);
      if (std::string_view(name) == "p2") op.p2 = e;
      else if (std::string_view(name) == "p1") op.p1 = e;
      else op.p0 = e;
    }
    problem.perturbations.push_back(std::move(op));
  }

  const bool has_y0 = entries.contains("y0");
  const bool has_E0 = entries.contains("E0");
  if (has_y0 != has_E0) throw ConfigError(has_y0 ? "missing key 'E0'" : "missing key 'y0'");
  if (has_y0) {
    ClosedFormState state;
    state.y0 = parse_value(take("y0"), "y0");
    state.E0 = parse_constant(take("E0"), "E0");
    problem.unperturbed = std::move(state);
  }
  if (!entries.empty()) throw ConfigError("unknown key '" + entries.begin()->first + "'");
  return problem;
}

PerturbationProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_problem(buffer.str());
}

std::string to_config(const PerturbationProblem& problem) {
  std::ostringstream out;
  out << "domain = " << format_double(problem.domain.a) << ' ' << format_double(problem.domain.b) << '\n';
  out << "v0 = " << to_string(problem.v0) << '\n';
  for (std::size_t k = 0; k < problem.perturbations.size(); ++k) {
    const auto& op = problem.perturbations[k];
    const std::string base = "perturbation." + std::to_string(k + 1) + ".";
    out << base << "p2 = " << to_string(op.p2) << '\n';
    out << base << "p1 = " << to_string(op.p1) << '\n';
    out << base << "p0 = " << to_string(op.p0) << '\n';
  }
  if (problem.unperturbed) {
    out << "y0 = " << to_string(problem.unperturbed->y0) << '\n';
    out << "E0 = " << format_double(problem.unperturbed->E0) << '\n';
  }
  return out.str();
}

SpectralFun to_spectral(const Expr& e, Interval domain, const SpectralOptions& opts) {
  if (!e.depends_on_x()) return SpectralFun::constant(domain, e.eval(domain.a), opts.tol_rel);
  return SpectralFun::from_function([&e](double x) { return e.eval(x); }, domain, opts);
}

UnperturbedState analytic_sine_state(const PerturbationProblem& problem, int n, double amplitude,
                                     const SpectralOptions& opts) {
  if (n < 1) throw ConfigError("quantum number n must be >= 1");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ConfigError("amplitude must be positive");
  if (!problem.v0_is_zero()) {
    throw ConfigError("analytic sine state requires v0 == 0; supply y0/E0 in the problem file");
  }
  const Interval dom = problem.domain;
  const double k = n * std::numbers::pi / dom.length();
  const double c = std::sqrt(2.0 / dom.length());
  UnperturbedState state;
  state.n = n;
  state.E0 = k * k;
  state.y0 = SpectralFun::from_function([=](double x) { return c * std::sin(k * (x - dom.a)); }, dom, opts);
  state.dy0 = SpectralFun::from_function([=](double x) { return c * k * std::cos(k * (x - dom.a)); }, dom, opts);
  state.user_scale = amplitude;
  state.user_norm = amplitude / c;
  return state;
}

UnperturbedState closed_form_state(const PerturbationProblem& problem, const SpectralOptions& opts) {
  if (!problem.unperturbed) throw ConfigError("problem has no closed-form unperturbed state (y0/E0)");
  const Interval dom = problem.domain;
  const Expr& y0 = problem.unperturbed->y0;
  const SpectralFun user_y0 = to_spectral(y0, dom, opts);
  const double norm = std::sqrt((user_y0 * user_y0).definite_integral());
  if (!(norm > 0.0)) throw InvalidStateError("closed-form y0 vanishes identically");

  UnperturbedState state;
  state.E0 = problem.unperturbed->E0;
  state.y0 = (1.0 / norm) * user_y0;
  state.dy0 = (1.0 / norm) * to_spectral(differentiate(y0), dom, opts);
  state.user_scale = 1.0;
  state.user_norm = norm;

  constexpr int samples = 1001;
  const double floor = 1e-8 * state.y0.max_abs();
  int changes = 0;
  double previous = 0.0;
  for (int i = 1; i < samples - 1; ++i) {
    const double v = state.y0(dom.a + dom.length() * i / (samples - 1));
    if (std::abs(v) <= floor) continue;
    if (previous != 0.0 && (v > 0.0) != (previous > 0.0)) ++changes;
    previous = v;
  }
  state.n = changes + 1;

  const ResidualReport report = validate_state(problem, state);
  if (!state_is_valid(state, report)) {
    std::ostringstream msg;
    msg << "closed-form state fails validation: ODE residual " << report.ode << ", |y0(a)| " << report.left
        << ", |y0(b)| " << report.right;
    throw InvalidStateError(msg.str());
  }
  return state;
}

UnperturbedState default_state(const PerturbationProblem& problem, int n, std::optional<double> amplitude,
                               const SpectralOptions& opts) {
  if (problem.unperturbed) return closed_form_state(problem, opts);
  return analytic_sine_state(problem, n, amplitude.value_or(std::sqrt(2.0 / problem.domain.length())), opts);
}

ResidualReport validate_state(const PerturbationProblem& problem, const UnperturbedState& state) {
  const Interval dom = problem.domain;
  const SpectralFun d2y0 = state.dy0.derivative();
  constexpr int samples = 256;
  ResidualReport report;
  for (int i = 0; i < samples; ++i) {
    const double x = std::min(dom.a + dom.length() * i / (samples - 1), dom.b);
    const double y = state.y0(x);
    report.ode = std::max(report.ode, std::abs(d2y0(x) - problem.v0.eval(x) * y + state.E0 * y));
  }
  report.left = std::abs(state.y0(dom.a));
  report.right = std::abs(state.y0(dom.b));
  return report;
}

bool state_is_valid(const UnperturbedState& state, const ResidualReport& report) {
  const double scale = state.y0.max_abs();
  return report.ode <= 1e-9 * state.dy0.derivative().max_abs() && report.left <= 1e-11 * scale &&
         report.right <= 1e-11 * scale;
}

}  // namespace velpert
