#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "neurovariety/geometry.hpp"
#include "neurovariety/hompoly.hpp"
#include "neurovariety/network.hpp"
#include "neurovariety/tickets.hpp"

namespace nv {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kMonomialOrder = "grlex";

json to_json(const ScalarField& field);
ScalarField field_from_json(const json& j);

// Scalars: residues as integers, rationals as decimal strings, complex
// values as [re, im].
json scalar_to_json(const ModP& a);
json scalar_to_json(const Rational& a);
json scalar_to_json(const Complex& a);

Rational rational_from_json(const json& j);
ModP residue_from_json(const json& j);
Complex complex_from_json(const json& j);

// {"vars": n, "degree": D, "order": "grlex", "terms": [[coeff, [e_1..e_n]], ...]}
// listing nonzero terms in basis order.
template <typename Scalar>
json poly_to_json(const HomPoly<Scalar>& p) {
  json terms = json::array();
  const MonomialIndexer idx(p.num_vars(), p.degree());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (FieldTraits<Scalar>::is_zero(p[i])) continue;
    terms.push_back(json::array({scalar_to_json(p[i]), idx.unrank(i)}));
  }
  return json{{"vars", p.num_vars()}, {"degree", p.degree()}, {"order", kMonomialOrder}, {"terms", terms}};
}

// Throws UsageError on malformed input and DegreeMismatchError when a term's
// exponents do not sum to the declared degree.
HomPoly<Rational> poly_from_json(const json& j);
// Either a JSON list of polynomial objects or {"polys": [...]}.
std::vector<HomPoly<Rational>> family_from_json(const json& j);

// {"field": ..., "matrices": [[[entries]]], "seed"?: n}
template <typename Scalar>
json weights_to_json(const WeightSet<Scalar>& w, const ScalarField& field) {
  json mats = json::array();
  for (const auto& m : w.matrices) {
    json rows = json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      json row = json::array();
      for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(scalar_to_json(m(a, b)));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  return json{{"field", to_json(field)}, {"matrices", mats}};
}

WeightSet<Complex> complex_weights_from_json(const json& j);
WeightSet<ModP> residue_weights_from_json(const json& j);

struct ReportOptions {
  bool timing = false;  // emit elapsed_ms; otherwise null so reruns are byte-identical
};

json to_json(const Architecture& arch);
json to_json(const ExpectedDimension& e, const Architecture& arch);
json to_json(const DimensionReport& r, const ReportOptions& opts = {});
json to_json(const ThresholdReport& r, const ReportOptions& opts = {});
json to_json(const HomogeneityCheckResult& r, const Architecture& arch, std::uint64_t seed);
json to_json(const FiberCheck& r, const ReportOptions& opts = {});
json to_json(const std::optional<ZeroWitness>& w, const Architecture& arch);

template <typename Scalar>
json to_json(const TicketReport<Scalar>& r) {
  json certs = json::object();
  for (const auto& [m, alpha] : r.certificates) {
    json a = json::array();
    for (Eigen::Index i = 0; i < alpha.size(); ++i) a.push_back(scalar_to_json(alpha(i)));
    certs[std::to_string(m)] = std::move(a);
  }
  json skipped = json::array();
  for (const auto& [m, why] : r.skipped) skipped.push_back(json{{"m", m}, {"reason", why}});
  return json{{"schema_version", kSchemaVersion},
              {"kind", "ticket"},
              {"field", to_json(r.field)},
              {"exact_confirmation", r.exact_confirmation},
              {"m_max", r.m_max},
              {"inspected_range", json::array({1, r.m_max})},
              {"members", r.members},
              {"certificates", certs},
              {"pairwise_proportional", r.pairwise_proportional},
              {"ns_bound", r.ns_bound},
              {"bound_check_enabled", r.bound_check_enabled},
              {"bound_violations", r.bound_violations},
              {"refuted_by_exact", r.refuted_by_exact},
              {"skipped", skipped}};
}

// Defect tables: columns arch, r, dim, edim, defect, read from a dimension
// record so CSV rows match the JSON field-for-field.
std::string csv_header();
std::string csv_row(const json& dimension_record);
std::string markdown_header();
std::string markdown_row(const json& dimension_record);
std::string arch_text(const json& arch);

// Reads and parses a JSON file; UsageError when unreadable or malformed.
json read_json_file(const std::string& path);

}  // namespace nv
