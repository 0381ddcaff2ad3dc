#include "conformal/report.hpp"

#include <cmath>
#include <sstream>

namespace conformal {

namespace {

Json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string generator_name(GeneratorSpec::Id id) {
  return id == GeneratorSpec::Id::ExampleA ? "example_a" : "example_b";
}

}  // namespace

Json to_json(const Interval& interval) {
  Json j;
  j["lower"] = interval.lower_infinite ? Json(nullptr) : Json(interval.lower);
  j["upper"] = interval.upper_infinite ? Json(nullptr) : Json(interval.upper);
  j["lower_closed"] = !interval.lower_infinite && interval.lower_closed;
  j["upper_closed"] = !interval.upper_infinite && interval.upper_closed;
  return j;
}

Json to_json(const PredictionRegion& region) {
  Json j;
  j["kind"] = region.kind_name();
  j["intervals"] = Json::array();
  for (const auto& iv : region.intervals()) j["intervals"].push_back(to_json(iv));
  j["length"] = finite_or_null(region.length());
  return j;
}

Json to_json(const RankConstants& rc) {
  Json j;
  j["n"] = rc.n;
  j["m"] = rc.m;
  j["r1"] = rc.r1;
  j["r2"] = rc.r2;
  j["r3"] = rc.r3;
  j["trivial"] = rc.trivial();
  return j;
}

Json to_json(const std::vector<Verdict>& verdicts) {
  Json j = Json::array();
  for (const auto& v : verdicts) {
    Json item;
    item["question"] = v.id;
    item["pass"] = v.pass;
    item["detail"] = v.detail;
    j.push_back(std::move(item));
  }
  return j;
}

Json to_json(const MethodReport& method) {
  Json j;
  j["method"] = method.method.name();
  j["hits"] = method.hits;
  j["coverage"] = method.coverage;
  j["mc_se"] = method.mc_se;
  j["mean_length"] = finite_or_null(method.mean_length);
  j["length_ratio_full"] = finite_or_null(method.length_ratio_full);
  j["length_ratio_half"] = finite_or_null(method.length_ratio_half);
  return j;
}

Json to_json(const SimulationReport& report) {
  Json j;
  Json gen;
  gen["id"] = generator_name(report.config.generator.id);
  gen["n"] = report.config.generator.n;
  gen["seed"] = report.config.generator.seed;
  gen["eps_convention"] =
      report.config.generator.eps_convention == GeneratorSpec::EpsConvention::Variance02
          ? "variance_02"
          : "variance_sqrt_02";
  gen["eps_variance"] = report.config.generator.eps_variance();
  j["generator"] = std::move(gen);
  j["replications"] = report.config.replications;
  j["alpha"] = report.config.alpha;
  j["fixed_eta"] =
      report.config.fixed_eta ? Json(*report.config.fixed_eta) : Json(nullptr);
  j["bounded_variant"] = report.config.bounded_variant == BoundedVariant::RankedEndpoints
                             ? "ranked_endpoints"
                             : "full_region";
  j["oracle_length"] = report.oracle_length;
  j["methods"] = Json::array();
  for (const auto& m : report.methods) j["methods"].push_back(to_json(m));
  return j;
}

namespace {

void flatten(const Json& node, const std::string& prefix, std::ostringstream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (node.is_array()) {
    std::size_t i = 0;
    for (const auto& value : node) flatten(value, prefix + "[" + std::to_string(i++) + "]", out);
    if (node.empty()) out << prefix << ": []\n";
  } else {
    out << prefix << ": " << node.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  flatten(report, "", out);
  return out.str();
}

}  // namespace conformal
