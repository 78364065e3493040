#include "neurovariety/io.hpp"

#include <fstream>
#include <sstream>

#include "neurovariety/errors.hpp"

namespace nv {

json to_json(const ScalarField& field) {
  json j{{"kind", to_string(field.kind)}};
  if (field.kind == FieldKind::PrimeField) j["prime"] = field.prime;
  return j;
}

ScalarField field_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "fp" || s == "PrimeField") return ScalarField::prime_field();
    if (s == "float" || s == "ComplexFloat") return ScalarField::complex_float();
    if (s == "exact" || s == "ExactRational") return ScalarField::exact();
    throw UsageError("unknown field '" + s + "'");
  }
  if (j.is_object() && j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "PrimeField") {
      const std::uint64_t p = j.value("prime", ModP::kMersenne61);
      return ScalarField::parse("fp", p);
    }
    return field_from_json(json(kind));
  }
  throw UsageError("field must be a string or an object with a kind");
}

json scalar_to_json(const ModP& a) { return a.residue(); }
json scalar_to_json(const Rational& a) { return format_rational(a); }
json scalar_to_json(const Complex& a) { return json::array({a.real(), a.imag()}); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw UsageError("coefficient must be an integer or a decimal string, got " + j.dump());
}

ModP residue_from_json(const json& j) {
  if (j.is_number_unsigned()) return ModP::from_residue(j.get<std::uint64_t>());
  if (j.is_number_integer()) return ModP(j.get<std::int64_t>());
  if (j.is_string()) return reduce(parse_rational(j.get<std::string>()));
  throw UsageError("prime-field entry must be an integer residue, got " + j.dump());
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw UsageError("complex entry must be a number or [re, im], got " + j.dump());
}

HomPoly<Rational> poly_from_json(const json& j) {
  try {
    if (!j.is_object()) throw UsageError("polynomial must be a JSON object");
    const int vars = j.at("vars").get<int>();
    const int degree = j.at("degree").get<int>();
    if (vars < 1 || degree < 0) throw UsageError("polynomial needs vars >= 1 and degree >= 0");
    if (j.contains("order") && j.at("order").get<std::string>() != kMonomialOrder) {
      throw UsageError("unsupported monomial order '" + j.at("order").get<std::string>() + "'");
    }
    std::vector<std::pair<Rational, Exponents>> terms;
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 2) throw UsageError("term must be [coeff, [exponents]]");
      terms.emplace_back(rational_from_json(t[0]), t[1].get<Exponents>());
    }
    return HomPoly<Rational>::from_terms(vars, degree, terms);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed polynomial: ") + e.what());
  }
}

std::vector<HomPoly<Rational>> family_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("polys") ? j.at("polys") : j;
  if (!list.is_array()) throw UsageError("family must be a JSON list of polynomial objects");
  std::vector<HomPoly<Rational>> out;
  for (const auto& p : list) out.push_back(poly_from_json(p));
  return out;
}

namespace {

template <typename Scalar, typename Parse>
WeightSet<Scalar> weights_from_json(const json& j, Parse parse) {
  try {
    WeightSet<Scalar> w;
    for (const auto& mat : j.at("matrices")) {
      if (!mat.is_array() || mat.empty() || !mat[0].is_array()) throw UsageError("matrix must be a list of rows");
      const auto rows = static_cast<Eigen::Index>(mat.size());
      const auto cols = static_cast<Eigen::Index>(mat[0].size());
      Matrix<Scalar> m(rows, cols);
      for (Eigen::Index a = 0; a < rows; ++a) {
        const auto& row = mat[static_cast<std::size_t>(a)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw UsageError("ragged matrix");
        for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = parse(row[static_cast<std::size_t>(b)]);
      }
      w.matrices.push_back(std::move(m));
    }
    if (w.matrices.empty()) throw UsageError("weight set has no matrices");
    return w;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed weight set: ") + e.what());
  }
}

}  // namespace

WeightSet<Complex> complex_weights_from_json(const json& j) {
  return weights_from_json<Complex>(j, complex_from_json);
}

WeightSet<ModP> residue_weights_from_json(const json& j) { return weights_from_json<ModP>(j, residue_from_json); }

json to_json(const Architecture& arch) { return arch.widths(); }

json to_json(const ExpectedDimension& e, const Architecture& arch) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "edim"},
              {"arch", to_json(arch)},
              {"degree", arch.activation_degree()},
              {"edim", e.value},
              {"edim_branch", to_string(e.branch)},
              {"parameter_side", e.parameter_side},
              {"ambient_side", e.ambient_side}};
}

namespace {

json timing(const std::optional<double>& ms, const ReportOptions& opts) {
  if (!opts.timing || !ms) return nullptr;
  return static_cast<std::int64_t>(*ms + 0.5);
}

}  // namespace

json to_json(const DimensionReport& r, const ReportOptions& opts) {
  json bound = r.rank.failure_bound ? json(*r.rank.failure_bound) : json(nullptr);
  return json{{"schema_version", kSchemaVersion},
              {"kind", "dimension"},
              {"arch", to_json(r.arch)},
              {"degree", r.degree()},
              {"field", to_json(r.field)},
              {"monomial_order", kMonomialOrder},
              {"seed", r.seed},
              {"trials", r.trials},
              {"params", r.params},
              {"ambient", r.ambient},
              {"rank_per_trial", r.rank.per_trial_ranks},
              {"dim", r.dim},
              {"edim", r.expected.value},
              {"edim_branch", to_string(r.expected.branch)},
              {"edim_parameter_side", r.expected.parameter_side},
              {"edim_ambient_side", r.expected.ambient_side},
              {"defect", r.defect},
              {"fiber_dim", r.fiber_dim},
              {"hidden_width_sum", r.hidden_width_sum},
              {"sz_failure_bound", bound},
              {"elapsed_ms", timing(r.elapsed_ms, opts)}};
}

json to_json(const ThresholdReport& r, const ReportOptions& opts) {
  json degrees = json::array();
  for (const auto& d : r.degrees) {
    json entry{{"degree", d.degree}};
    if (d.report) {
      entry["status"] = "ok";
      entry["report"] = to_json(*d.report, opts);
    } else {
      entry["status"] = "skipped";
      entry["reason"] = d.skipped_reason.value_or("");
    }
    degrees.push_back(std::move(entry));
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "threshold"},
              {"arch", to_json(r.arch)},
              {"field", to_json(r.field)},
              {"seed", r.seed},
              {"trials", r.trials},
              {"probed_range", json::array({1, r.r_max})},
              {"deficient_degrees", r.deficient_degrees},
              {"estimated_threshold", r.estimated_threshold},
              {"theoretical_bound", r.theoretical_bound},
              {"verified_up_to", r.verified_up_to},
              {"width_hypothesis_met", r.width_hypothesis_met},
              {"note", "estimate covers degrees 1.." + std::to_string(r.verified_up_to) +
                           " only; the threshold concerns every larger degree"},
              {"degrees", degrees}};
}

json to_json(const HomogeneityCheckResult& r, const Architecture& arch, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "homogeneity_check"},
              {"arch", to_json(arch)},
              {"degree", arch.activation_degree()},
              {"seed", seed},
              {"trials_run", r.trials_run},
              {"passed", r.passed},
              {"failing_seed", r.failing_seed ? json(*r.failing_seed) : json(nullptr)}};
}

json to_json(const FiberCheck& r, const ReportOptions& opts) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", "fiber_check"},
              {"arch", to_json(r.report.arch)},
              {"degree", r.report.degree()},
              {"fiber_dim", r.report.fiber_dim},
              {"lower_bound", r.lower_bound},
              {"passed", r.passed},
              {"report", to_json(r.report, opts)}};
}

json to_json(const std::optional<ZeroWitness>& w, const Architecture& arch) {
  json j{{"schema_version", kSchemaVersion},
         {"kind", "zero_witness"},
         {"arch", to_json(arch)},
         {"degree", arch.activation_degree()},
         {"found", w.has_value()}};
  if (w) {
    json point = json::array();
    for (Eigen::Index i = 0; i < w->point.size(); ++i) point.push_back(scalar_to_json(w->point(i)));
    j["point"] = point;
    j["residual"] = w->residual;
    j["scale"] = w->scale;
    j["singular_layer_index"] = w->singular_layer_index;
  }
  return j;
}

std::string arch_text(const json& arch) {
  std::string out;
  for (std::size_t i = 0; i < arch.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(arch[i].get<int>());
  }
  return out;
}

std::string csv_header() { return "arch,r,dim,edim,defect"; }

std::string csv_row(const json& rec) {
  std::ostringstream os;
  os << '"' << arch_text(rec.at("arch")) << "\"," << rec.at("degree").get<int>() << ','
     << rec.at("dim").get<std::uint64_t>() << ',' << rec.at("edim").get<std::uint64_t>() << ','
     << rec.at("defect").get<std::int64_t>();
  return os.str();
}

std::string markdown_header() { return "| arch | r | dim | edim | defect |\n|---|---|---|---|---|"; }

std::string markdown_row(const json& rec) {
  std::ostringstream os;
  os << "| (" << arch_text(rec.at("arch")) << ") | " << rec.at("degree").get<int>() << " | "
     << rec.at("dim").get<std::uint64_t>() << " | " << rec.at("edim").get<std::uint64_t>() << " | "
     << rec.at("defect").get<std::int64_t>() << " |";
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace nv
