#pragma once

#include <codelta/json_util.hpp>
#include <codelta/laws.hpp>
#include <codelta/sampled_grid.hpp>

namespace codelta {

inline Json law_result_json(const LawResult& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back(Json{{"inputs", s.inputs}, {"detail", s.detail}});
  return Json{{"name", r.name},
              {"anchor", r.anchor},
              {"cases", r.cases},
              {"failures", r.failures},
              {"max_residual", to_string(r.max_residual)},
              {"samples", samples}};
}

inline Json law_report_json(const LawReport& rep) {
  Json laws = Json::array();
  for (const auto& l : rep.laws) laws.push_back(law_result_json(l));
  Json j{{"schema", "law-report/1"},
         {"config", Json{{"space", rep.config.space.to_string()},
                         {"order", rep.config.order},
                         {"cases", rep.config.cases},
                         {"seed", rep.config.seed},
                         {"tol", rep.config.tol}}},
         {"passed", rep.all_passed()},
         {"total_failures", rep.total_failures()},
         {"laws", laws}};
  if (rep.config.cases == 0) j["note"] = "no cases";
  return j;
}

inline Json sampled_report_json(const SampledReport& rep) {
  Json orders = Json::array();
  for (const auto& o : rep.orders) {
    Json windows = Json::array();
    for (const auto& w : o.windows) {
      Json times = Json::array();
      for (const auto& t : w.times) times.push_back(to_string(t));
      Json values = Json::array();
      for (const auto& v : w.values) values.push_back(to_string(v));
      windows.push_back(
          Json{{"stride", w.stride}, {"t", times}, {"q", values}, {"max_abs", to_string(w.max_abs)}});
    }
    orders.push_back(Json{{"order", o.order},
                          {"windows", windows},
                          {"max_abs", to_string(o.max_abs)},
                          {"growth_exponent", o.growth_exponent},
                          {"identically_zero", o.identically_zero},
                          {"bounded", o.bounded}});
  }
  return Json{{"schema", "curve-report/1"},
              {"samples", rep.samples},
              {"max_order", rep.max_order},
              {"smooth", rep.smooth},
              {"first_bad_order", rep.first_bad_order},
              {"orders", orders}};
}

}  // namespace codelta
