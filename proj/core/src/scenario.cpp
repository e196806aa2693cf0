#include "spiral/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spiral {

namespace {

Scenario build(std::string name, SupportSpec support, EvolutionParams params, double t_end,
               XiForm form) {
  Scenario sc;
  sc.name = std::move(name);
  sc.support = std::move(support);
  sc.density = dual(sc.support);
  sc.shape = wulff_shape_from_support(sc.support);
  sc.params = params;
  sc.t_end = t_end;
  sc.xi_form = form;
  sc.u0 = sc.shape.phi[0] + 1.5 * kPi;
  if (!normalization_check(sc.support, sc.shape).pass)
    throw std::invalid_argument("scenario " + sc.name + " violates the normalization gamma°(N_j)=1");
  return sc;
}

SupportSpec regular_support(int count, double psi0) {
  SupportSpec spec;
  for (int j = 0; j < count; ++j) spec.facets.push_back({1.0, psi0 + kTwoPi * j / count});
  return spec;
}

XiForm xi_form_from_string(const std::string& s) {
  if (s == "smoothed-l1" || s == "square") return XiForm::smoothed_l1;
  if (s == "smoothed-l1-rotated" || s == "diagonal") return XiForm::smoothed_l1_rotated;
  if (s == "sector-sum") return XiForm::sector_sum;
  throw std::invalid_argument("unknown xi form: " + s);
}

}  // namespace

Scenario preset(const std::string& name) {
  if (name == "square")
    return build("square", regular_support(4, 0.0), {1.0, 0.02}, 1.0, XiForm::smoothed_l1);
  if (name == "diagonal")
    return build("diagonal", regular_support(4, kPi / 4.0), {1.0, 0.02}, 1.0,
                 XiForm::smoothed_l1_rotated);
  if (name == "triangle")
    return build("triangle", regular_support(3, 0.0), {1.0, 0.01}, 0.8, XiForm::sector_sum);
  throw std::invalid_argument("unknown scenario preset: " + name);
}

Scenario scenario_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Scenario sc;
  if (j.contains("preset")) {
    sc = preset(j.at("preset").get<std::string>());
  } else {
    if (!j.contains("support"))
      throw std::invalid_argument("scenario config needs \"preset\" or \"support\"");
    SupportSpec spec;
    for (const auto& pair : j.at("support")) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("support entries must be [eta, psi] pairs");
      spec.facets.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    EvolutionParams params{j.value("U", 1.0), j.value("rho_c", 0.01)};
    XiForm form = xi_form_from_string(j.value("xi", std::string("sector-sum")));
    sc = build(j.value("name", std::string("custom")), std::move(spec), params,
               j.value("tmax", 1.0), form);
  }
  if (j.contains("U")) sc.params.U = j.at("U").get<double>();
  if (j.contains("rho_c")) sc.params.rho_c = j.at("rho_c").get<double>();
  if (j.contains("tmax")) sc.t_end = j.at("tmax").get<double>();
  if (j.contains("u0")) sc.u0 = j.at("u0").get<double>();
  if (j.contains("xi")) sc.xi_form = xi_form_from_string(j.at("xi").get<std::string>());
  if (!(sc.params.U > 0.0) || !(sc.params.rho_c > 0.0))
    throw std::invalid_argument("scenario parameters U and rho_c must be positive");
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

}  // namespace spiral
