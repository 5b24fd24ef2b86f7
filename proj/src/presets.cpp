#include <cmath>

#include "preq/sphere.hpp"

namespace preq {

namespace {

using Param = std::function<double(const std::string&, double)>;

PolynomialTerm term(double c, int a, int b, int d, std::function<double(double)> profile = {}) {
  return PolynomialTerm{c, a, b, d, std::move(profile)};
}

PathPtr poly(std::vector<PolynomialTerm> terms, std::string name) {
  bool autonomous = true;
  for (const auto& t : terms) autonomous = autonomous && !t.profile;
  return std::make_shared<PolynomialPath>(std::move(terms), std::move(name), autonomous);
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"zero", "0", "", true},
      {"constant", "c", "c=1", true},
      {"height", "a x3", "a=1", true},
      {"const_height", "c + a x3", "c=1, a=1", true},
      {"rot_x", "a x1", "a=1", true},
      {"rot_y", "a x2", "a=1", true},
      {"tilted_rotation", "a (x3 + b t x1)", "a=1, b=0.5", true},
      {"constant_rotation", "-tau", "tau=1", true},
      {"twist", "a x3^2", "a=1", false},
      {"shear", "a x1 x3", "a=1", false},
      {"saddle", "a x1 x2", "a=1", false},
      {"mixed", "a (sin(pi t) x1 + t x3^2)", "a=1", false},
  };
  return catalog;
}

PathPtr make_preset(const std::string& name, const Param& param) {
  const double a = param("a", 1.0);
  if (name == "zero") return poly({}, "0");
  if (name == "constant") {
    const double c = param("c", 1.0);
    return poly({term(c, 0, 0, 0)}, "constant " + std::to_string(c));
  }
  if (name == "height") return poly({term(a, 0, 0, 1)}, "a x3");
  if (name == "const_height") {
    const double c = param("c", 1.0);
    return poly({term(c, 0, 0, 0), term(a, 0, 0, 1)}, "c + a x3");
  }
  if (name == "rot_x") return poly({term(a, 1, 0, 0)}, "a x1");
  if (name == "rot_y") return poly({term(a, 0, 1, 0)}, "a x2");
  if (name == "tilted_rotation") {
    const double b = param("b", 0.5);
    return poly({term(a, 0, 0, 1), term(a * b, 1, 0, 0, [](double t) { return t; })},
                "a (x3 + b t x1)");
  }
  if (name == "constant_rotation") {
    const double tau = param("tau", 1.0);
    return poly({term(-tau, 0, 0, 0)}, "-tau");
  }
  if (name == "twist") return poly({term(a, 0, 0, 2)}, "a x3^2");
  if (name == "shear") return poly({term(a, 1, 0, 1)}, "a x1 x3");
  if (name == "saddle") return poly({term(a, 1, 1, 0)}, "a x1 x2");
  if (name == "mixed")
    return poly({term(a, 1, 0, 0, [](double t) { return std::sin(kPi * t); }),
                 term(a, 0, 0, 2, [](double t) { return t; })},
                "a (sin(pi t) x1 + t x3^2)");
  throw ConfigError("unknown preset '" + name + "'");
}

PathPtr make_preset(const std::string& name) {
  return make_preset(name, [](const std::string&, double d) { return d; });
}

}  // namespace preq
