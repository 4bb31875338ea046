#include "gaffney/registry.hpp"

#include <cmath>
#include <stdexcept>

#include "gaffney/counterexamples.hpp"

namespace gaffney {

namespace {

AnalyticField linear_field() {
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd& x) { return x[0]; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(1.0, 0.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd& x) { return x[1]; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 1.0).eval();
                         }}});
}

AnalyticField constant_field() {
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd&) { return 1.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd&) { return 0.0; },
                         [](const Eigen::VectorXd&) {
                           return Eigen::Vector2d(0.0, 0.0).eval();
                         }}});
}

AnalyticField poly_field() {
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd& x) { return x[0] * x[0] - x[1]; },
                         [](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(2.0 * x[0], -1.0).eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd& x) { return x[0] * x[1]; },
                         [](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(x[1], x[0]).eval();
                         }}});
}

AnalyticField trig_field() {
  return AnalyticField(
      2, {ScalarFunction{[](const Eigen::VectorXd& x) {
                           return std::sin(x[0]) * std::cos(x[1]);
                         },
                         [](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(std::cos(x[0]) * std::cos(x[1]),
                                                  -std::sin(x[0]) * std::sin(x[1]))
                               .eval();
                         }},
          ScalarFunction{[](const Eigen::VectorXd& x) {
                           return std::exp(0.5 * x[0]) * std::sin(x[1]);
                         },
                         [](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(
                                      0.5 * std::exp(0.5 * x[0]) * std::sin(x[1]),
                                      std::exp(0.5 * x[0]) * std::cos(x[1]))
                               .eval();
                         }}});
}

/// intro_family(2) values with the sign of d omega_1 / d x_2 flipped in the
/// coded partials; the declared Jacobian then carries a spurious curl.
AnalyticField wrong_sign_curl_fixture() {
  const int n = 2;
  return AnalyticField(
      2, {ScalarFunction{[n](const Eigen::VectorXd& x) {
                           return std::exp(n * x[0]) * std::cos(n * x[1]);
                         },
                         [n](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(
                                      n * std::exp(n * x[0]) * std::cos(n * x[1]),
                                      n * std::exp(n * x[0]) * std::sin(n * x[1]))
                               .eval();
                         }},
          ScalarFunction{[n](const Eigen::VectorXd& x) {
                           return -std::exp(n * x[0]) * std::sin(n * x[1]);
                         },
                         [n](const Eigen::VectorXd& x) {
                           return Eigen::Vector2d(
                                      -n * std::exp(n * x[0]) * std::sin(n * x[1]),
                                      -n * std::exp(n * x[0]) * std::cos(n * x[1]))
                               .eval();
                         }}});
}

int parse_suffix_int(const std::string& name, std::size_t pos) {
  try {
    return std::stoi(name.substr(pos));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad field name '" + name + "'");
  }
}

}  // namespace

AnalyticField lookup_field(const std::string& name) {
  if (name == "linear") return linear_field();
  if (name == "swap") return harmonic_lambda_field();
  if (name == "constant") return constant_field();
  if (name == "poly") return poly_field();
  if (name == "trig") return trig_field();
  if (name == "defect:wrong_sign_curl") return wrong_sign_curl_fixture();
  if (name.rfind("intro_family:", 0) == 0)
    return intro_family(parse_suffix_int(name, 13));
  if (name.rfind("scalar_lambda_family:", 0) == 0)
    return scalar_lambda_family(parse_suffix_int(name, 21));
  throw std::invalid_argument("unknown field '" + name + "'");
}

TwoForm3 lookup_two_form(const std::string& name) {
  const std::string prefix = "two_form_family:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    const std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      const int n = parse_suffix_int(rest, 0);
      const std::string sign_text = rest.substr(colon + 1);
      if (sign_text == "+1" || sign_text == "1") return two_form_family(n, 1);
      if (sign_text == "-1") return two_form_family(n, -1);
    }
  }
  throw std::invalid_argument("unknown two-form '" + name + "'");
}

std::vector<std::string> default_field_corpus() {
  std::vector<std::string> names = {"linear", "swap", "constant", "poly", "trig"};
  for (int n : {1, 2, 3}) {
    names.push_back("intro_family:" + std::to_string(n));
    names.push_back("scalar_lambda_family:" + std::to_string(n));
  }
  return names;
}

}  // namespace gaffney
