#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirrep/directional.hpp"
#include "dirrep/error_analysis.hpp"
#include "dirrep/table_io.hpp"

namespace dirrep {

enum class OutputFormat { Csv, Json };

inline OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + s + "'");
}

namespace detail {

inline const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace detail

// `test`: one directional test per feature. The query's n must match the
// table; r, alpha, combiner and rule come from flags.
inline void cmd_test(const FeatureTable& table, const ReplicabilityQuery& query,
                     OutputFormat format, std::ostream& out) {
  ReplicabilityQuery q = query;
  q.n = table.n;
  q.validate();

  std::vector<DirectionalResult> results;
  results.reserve(table.features.size());
  for (const auto& f : table.features)
    results.push_back(directional_test(StudyVector(f.z), q));

  if (format == OutputFormat::Csv) {
    out << "feature_id,p_plus,p_minus,p_final,rule_applied,reject,sign,warning\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& d = results[i];
      out << csv_quote(table.features[i].id) << ',' << format_real(d.p_plus) << ','
          << format_real(d.p_minus) << ',' << format_real(d.p_final) << ','
          << to_string(d.rule_applied) << ',' << detail::bool_str(d.reject) << ','
          << to_string(d.sign) << ',' << detail::bool_str(d.unproven_min_rule) << '\n';
    }
    return;
  }
  out << "{\"n\":" << q.n << ",\"r\":" << q.r << ",\"alpha\":" << format_real(q.alpha)
      << ",\"combiner\":\"" << to_string(q.combiner) << "\",\"rule\":\"" << to_string(q.rule)
      << "\",\"features\":[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& d = results[i];
    if (i) out << ',';
    out << "{\"feature_id\":" << json_quote(table.features[i].id)
        << ",\"p_plus\":" << format_real(d.p_plus) << ",\"p_minus\":" << format_real(d.p_minus)
        << ",\"p_final\":" << format_real(d.p_final) << ",\"rule_applied\":\""
        << to_string(d.rule_applied) << "\",\"reject\":" << detail::bool_str(d.reject)
        << ",\"sign\":\"" << to_string(d.sign)
        << "\",\"warning\":" << detail::bool_str(d.unproven_min_rule) << '}';
  }
  out << "]}\n";
}

// `adaptive`: sequential choice of r per feature. CSV is flattened to one
// row per tested step; JSON nests steps under each feature.
inline void cmd_adaptive(const FeatureTable& table, double alpha, Combiner combiner,
                         OutputFormat format, std::ostream& out) {
  std::vector<AdaptiveResult> results;
  results.reserve(table.features.size());
  for (const auto& f : table.features)
    results.push_back(adaptive_r(StudyVector(f.z), alpha, combiner));

  if (format == OutputFormat::Csv) {
    out << "feature_id,k,l,r,p_final,reject\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& a = results[i];
      for (const auto& step : a.per_step)
        out << csv_quote(table.features[i].id) << ',' << a.k << ',' << a.l << ',' << step.r << ','
            << format_real(step.p_final) << ',' << detail::bool_str(step.reject) << '\n';
    }
    return;
  }
  out << "{\"alpha\":" << format_real(alpha) << ",\"combiner\":\"" << to_string(combiner)
      << "\",\"features\":[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& a = results[i];
    if (i) out << ',';
    out << "{\"feature_id\":" << json_quote(table.features[i].id) << ",\"k\":" << a.k
        << ",\"l\":" << a.l << ",\"steps\":[";
    for (std::size_t j = 0; j < a.per_step.size(); ++j) {
      const auto& step = a.per_step[j];
      if (j) out << ',';
      out << "{\"r\":" << step.r << ",\"p_final\":" << format_real(step.p_final)
          << ",\"reject\":" << detail::bool_str(step.reject) << '}';
    }
    out << "]}";
  }
  out << "]}\n";
}

// `type1-curve`: the two closed-form Type I error curves, with the alpha and
// 2*alpha reference lines carried along for plotting.
inline void cmd_type1_curve(int n, double alpha, OutputFormat format, std::ostream& out) {
  const TypeOneCurve curve = type1_curve(n, alpha);
  if (format == OutputFormat::Csv) {
    out << "r,c_concordant,c_discordant,ref_alpha,ref_two_alpha\n";
    for (const auto& row : curve.rows)
      out << row.r << ',' << format_real(row.c_concordant) << ',' << format_real(row.c_discordant)
          << ',' << format_real(alpha) << ',' << format_real(2.0 * alpha) << '\n';
    return;
  }
  out << "{\"n\":" << n << ",\"alpha\":" << format_real(alpha) << ",\"rows\":[";
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    const auto& row = curve.rows[i];
    if (i) out << ',';
    out << "{\"r\":" << row.r << ",\"c_concordant\":" << format_real(row.c_concordant)
        << ",\"c_discordant\":" << format_real(row.c_discordant)
        << ",\"ref_alpha\":" << format_real(alpha)
        << ",\"ref_two_alpha\":" << format_real(2.0 * alpha) << '}';
  }
  out << "]}\n";
}

// `gg-curve`: g(g(theta1)) on the grid 0, step, 2*step, ... up to grid_max.
inline void cmd_gg_curve(double alpha, double grid_max, double grid_step, OutputFormat format,
                         std::ostream& out) {
  if (!(grid_step > 0.0)) throw std::domain_error("gg-curve: grid-step must be positive");
  if (!(grid_max >= 0.0)) throw std::domain_error("gg-curve: grid-max must be nonnegative");
  std::vector<double> grid;
  for (long long j = 0;; ++j) {
    const double theta1 = static_cast<double>(j) * grid_step;
    if (theta1 > grid_max * (1.0 + 1e-12) + 1e-15) break;
    grid.push_back(theta1);
  }
  const auto curve = gg_curve(grid, alpha);
  if (format == OutputFormat::Csv) {
    out << "theta1,gg\n";
    for (const auto& [theta1, gg] : curve)
      out << format_real(theta1) << ',' << format_real(gg) << '\n';
    return;
  }
  out << "{\"alpha\":" << format_real(alpha) << ",\"rows\":[";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i) out << ',';
    out << "{\"theta1\":" << format_real(curve[i].first) << ",\"gg\":" << format_real(curve[i].second)
        << '}';
  }
  out << "]}\n";
}

enum class SimulateMode { Type1, Type3 };

inline SimulateMode simulate_mode_from_string(const std::string& s) {
  if (s == "type1") return SimulateMode::Type1;
  if (s == "type3") return SimulateMode::Type3;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

// `simulate`: seeded Monte Carlo estimate at a theta point, with every input
// echoed so the run can be reproduced from the report alone.
inline void cmd_simulate(const ThetaPoint& theta, const ReplicabilityQuery& query, long long reps,
                         std::uint64_t seed, SimulateMode mode, OutputFormat format,
                         std::ostream& out) {
  const McEstimate est = mode == SimulateMode::Type1 ? mc_type1(theta, query, reps, seed)
                                                     : mc_type3(theta, query, reps, seed);
  const char* mode_str = mode == SimulateMode::Type1 ? "type1" : "type3";
  if (format == OutputFormat::Csv) {
    out << "mode,n,r,alpha,combiner,rule,reps,seed,estimate,std_error\n";
    out << mode_str << ',' << query.n << ',' << query.r << ',' << format_real(query.alpha) << ','
        << to_string(query.combiner) << ',' << to_string(query.rule) << ',' << est.reps << ','
        << est.seed << ',' << format_real(est.estimate) << ',' << format_real(est.std_error)
        << '\n';
    return;
  }
  out << "{\"mode\":\"" << mode_str << "\",\"n\":" << query.n << ",\"r\":" << query.r
      << ",\"alpha\":" << format_real(query.alpha) << ",\"combiner\":\""
      << to_string(query.combiner) << "\",\"rule\":\"" << to_string(query.rule)
      << "\",\"reps\":" << est.reps << ",\"seed\":" << est.seed
      << ",\"estimate\":" << format_real(est.estimate)
      << ",\"std_error\":" << format_real(est.std_error) << "}\n";
}

}  // namespace dirrep
