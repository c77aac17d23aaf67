#include "pregret/io.hpp"

#include <cstdio>

namespace pregret {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

const char* method_name(CurveMethod m) {
  return m == CurveMethod::ClosedForm ? "closed_form" : "brute_force";
}

Json prob_vec_json(const ProbVec& q) {
  Json arr = Json::array();
  for (double x : q.components()) arr.push_back(x);
  return arr;
}

}  // namespace

std::string curve_csv(const ModulusCurve& curve) {
  std::string out = "r,omega,method,heuristic\n";
  for (const auto& pt : curve.points) {
    out += format_double(pt.r);
    out += ',';
    out += format_double(pt.omega);
    out += ',';
    out += method_name(pt.method);
    out += ',';
    out += pt.heuristic ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string curve_comparison_csv(const ModulusCurve& closed, const ModulusCurve& brute) {
  if (closed.points.size() != brute.points.size()) {
    throw InputError("curve_comparison_csv: grids differ");
  }
  std::string out = "r,omega,method,heuristic,omega_brute,abs_diff\n";
  for (std::size_t i = 0; i < closed.points.size(); ++i) {
    const auto& c = closed.points[i];
    const auto& b = brute.points[i];
    out += format_double(c.r);
    out += ',';
    out += format_double(c.omega);
    out += ',';
    out += method_name(c.method);
    out += ',';
    out += b.heuristic ? "true" : "false";
    out += ',';
    out += format_double(b.omega);
    out += ',';
    out += format_double(std::fabs(c.omega - b.omega));
    out += '\n';
  }
  return out;
}

Json curve_json(const ModulusCurve& curve) {
  Json j;
  j["family"] = curve.family;
  j["alpha"] = curve.alpha;
  j["N"] = curve.N;
  j["p"] = curve.p.to_string();
  Json points = Json::array();
  for (const auto& pt : curve.points) {
    Json pj;
    pj["r"] = pt.r;
    pj["omega"] = pt.omega;
    pj["method"] = method_name(pt.method);
    pj["heuristic"] = pt.heuristic;
    if (pt.minimizer) {
      Json m;
      m["q"] = prob_vec_json(pt.minimizer->q);
      m["q_check"] = prob_vec_json(pt.minimizer->q_check);
      m["distance"] = pt.minimizer->distance;
      pj["minimizer"] = m;
    } else {
      pj["minimizer"] = nullptr;
    }
    points.push_back(pj);
  }
  j["points"] = points;
  return j;
}

std::string profile_csv(const OrderProfile& profile) {
  std::string out = "r,omega,sigma,K\n";
  for (std::size_t i = 0; i < profile.r.size(); ++i) {
    out += format_double(profile.r[i]);
    out += ',';
    out += format_double(profile.omega[i]);
    out += ',';
    out += format_double(profile.sigma[i]);
    out += ',';
    out += format_double(profile.K[i]);
    out += '\n';
  }
  return out;
}

Json barrier_json(const BarrierReport& report) {
  Json j;
  j["kappa"] = report.kappa;
  j["limsup_sigma"] = report.limsup_sigma;
  j["liminf_sigma"] = report.liminf_sigma;
  j["C1"] = report.c1;
  j["C2"] = report.c2;
  j["pass"] = report.pass;
  return j;
}

Json witness_json(const Witness& w) {
  Json j;
  j["q"] = prob_vec_json(w.q);
  j["q_hat"] = prob_vec_json(w.q_hat);
  j["value"] = w.value;
  return j;
}

Json report_json(const CertReport& report) {
  Json j;
  j["family"] = report.family;
  j["alpha"] = report.alpha;
  j["N"] = report.N;
  j["p"] = report.p ? Json(*report.p) : Json(nullptr);
  j["pass"] = report.pass;
  j["worst_witness"] = report.worst_witness ? witness_json(*report.worst_witness) : Json(nullptr);
  j["margin"] = report.margin;
  j["detail"] = report.detail;
  return j;
}

Json report_json(const StrongPropernessReport& report) {
  Json j;
  j["family"] = report.family;
  j["alpha"] = report.alpha;
  j["N"] = report.N;
  j["p"] = "2";
  j["pass"] = report.pass;
  j["worst_witness"] = report.worst_witness ? witness_json(*report.worst_witness) : Json(nullptr);
  j["margin"] = report.min_ratio - report.kappa;
  j["kappa"] = report.kappa;
  j["min_ratio"] = report.min_ratio;
  j["samples"] = report.samples;
  return j;
}

Json chain_json(const ChainReport& report) {
  Json j;
  j["task"] = task_name(report.task);
  j["task_regret"] = report.task_regret;
  j["surrogate_regret"] = report.surrogate;
  j["p_norm_bound"] = report.p_norm_bound;
  j["chained_bound"] = report.chained_bound;
  j["vacuous"] = report.vacuous;
  j["pass"] = report.pass;
  return j;
}

}  // namespace pregret
