#include "kpls/report.hpp"

namespace kpls {

using nlohmann::ordered_json;

ordered_json to_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

namespace {

ordered_json named(const NamedValues& values) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, v] : values) o[k] = v;
  return o;
}

}  // namespace

ordered_json to_json(const PlsFit& fit) {
  ordered_json j;
  j["variant"] = to_string(fit.variant);
  j["k"] = fit.k;
  j["k_effective"] = fit.k_effective;
  j["alpha"] = fit.alpha ? to_json(*fit.alpha) : ordered_json::array();
  j["beta_hat"] = to_json(fit.beta_hat);
  j["rcond"] = fit.rcond_theta;
  return j;
}

ordered_json to_json(const AssumptionReport& rep) {
  ordered_json j;
  j["a1_holds"] = rep.a1_holds;
  j["rho_min_r"] = rep.rho_min_r;
  j["a2_holds"] = rep.a2_holds;
  j["a2_margins"] = to_json(rep.a2_margins);
  j["a2_signal"] = to_json(rep.a2_signal);
  j["a2_threshold"] = to_json(rep.a2_threshold);
  j["t_used"] = rep.t_used;
  return j;
}

ordered_json to_json(const BoundReport& rep) {
  ordered_json j;
  j["theorem"] = to_string(rep.theorem);
  j["certified"] = rep.certified;
  j["a2_holds"] = rep.a2_holds;
  j["bias"] = rep.bias;
  j["variance_bound"] = rep.variance_bound;
  j["total"] = rep.total;
  j["pieces"] = named(rep.pieces);
  j["constants"] = named(rep.constants);
  if (rep.alpha.size() > 0) j["alpha"] = to_json(rep.alpha);
  return j;
}

ordered_json to_json(const CoverageResult& res) {
  ordered_json j;
  j["target"] = to_string(res.target);
  j["param"] = res.param;
  j["hits"] = res.hits;
  j["reps"] = res.reps;
  j["fraction"] = res.fraction;
  j["stderr"] = res.stderr_mc;
  j["radius"] = res.radius;
  j["a2_holds"] = res.a2_holds;
  j["certified"] = res.certified;
  j["details"] = named(res.details);
  return j;
}

}  // namespace kpls
