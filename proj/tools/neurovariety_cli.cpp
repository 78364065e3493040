#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"
#include "neurovariety/geometry.hpp"
#include "neurovariety/io.hpp"
#include "neurovariety/store.hpp"
#include "neurovariety/sweep.hpp"
#include "neurovariety/tickets.hpp"

namespace {

using nv::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;

struct Options {
  std::string arch;
  int degree = 0;
  int rmax = 5;
  std::string field = "fp";
  std::uint64_t prime = nv::ModP::kMersenne61;
  int trials = 3;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool force = false;
  int jobs = 0;  // 0: take the sweep file's value
  std::string input;
  int mmax = 5;
  bool timing = false;
  bool no_confirm = false;
  bool omit_inverse_scaling = false;
};

// Stage label for error messages; set before each step that can fail.
std::string stage = "parsing arguments";

nv::Architecture require_arch(const Options& o, bool need_degree = true) {
  if (o.arch.empty()) throw nv::UsageError("--arch is required");
  if (need_degree && o.degree < 1) throw nv::UsageError("--degree must be given and >= 1");
  return nv::Architecture::parse(o.arch, need_degree ? o.degree : 1);
}

nv::DimensionOptions dimension_options(const Options& o) {
  return {.field = nv::ScalarField::parse(o.field, o.prime), .trials = o.trials, .seed = o.seed};
}

std::optional<nv::ResultStore> open_store(const Options& o) {
  if (o.out.empty()) return std::nullopt;
  stage = "opening result store";
  return nv::ResultStore(o.out);
}

void emit_dimension_record(const json& rec, const std::string& format) {
  if (format == "csv") {
    std::cout << nv::csv_header() << '\n' << nv::csv_row(rec) << '\n';
  } else if (format == "md") {
    std::cout << nv::markdown_header() << '\n' << nv::markdown_row(rec) << '\n';
  } else {
    std::cout << rec.dump(2) << '\n';
  }
}

void require_json_format(const Options& o, const std::string& cmd) {
  if (o.format != "json") throw nv::UsageError(cmd + " only supports --format json");
}

int cmd_dim(const Options& o) {
  const auto arch = require_arch(o);
  const auto dopts = dimension_options(o);
  auto store = open_store(o);
  const std::string key = nv::store_key("dim", arch, dopts.field, dopts.seed, dopts.trials);
  std::optional<json> rec;
  if (store && !o.force) rec = store->find(key);
  if (!rec) {
    stage = "computing generic Jacobian rank";
    rec = nv::to_json(nv::dimension(arch, dopts), {.timing = o.timing});
    if (store) {
      stage = "writing result store";
      store->append(key, *rec);
    }
  }
  emit_dimension_record(*rec, o.format);
  return kExitOk;
}

int cmd_edim(const Options& o) {
  const auto arch = require_arch(o);
  stage = "computing expected dimension";
  const auto e = nv::edim(arch);
  if (o.format == "json") {
    std::cout << nv::to_json(e, arch).dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "arch,r,edim,edim_branch\n\"" << arch.to_string() << "\"," << o.degree << ',' << e.value << ','
              << nv::to_string(e.branch) << '\n';
  } else {
    std::cout << "| arch | r | edim | edim_branch |\n|---|---|---|---|\n| (" << arch.to_string() << ") | " << o.degree
              << " | " << e.value << " | " << nv::to_string(e.branch) << " |\n";
  }
  return kExitOk;
}

int cmd_threshold(const Options& o) {
  require_json_format(o, "threshold");
  const auto arch = require_arch(o, false);
  const auto dopts = dimension_options(o);
  auto store = open_store(o);
  const std::string key = "threshold|" + arch.to_string() + "|rmax=" + std::to_string(o.rmax) + "|" +
                          dopts.field.descriptor() + "|seed=" + std::to_string(dopts.seed) +
                          "|trials=" + std::to_string(dopts.trials);
  std::optional<json> rec;
  if (store && !o.force) rec = store->find(key);
  if (!rec) {
    stage = "probing degrees 1.." + std::to_string(o.rmax);
    rec = nv::to_json(nv::threshold_probe(arch, o.rmax, dopts), {.timing = o.timing});
    if (store) {
      stage = "writing result store";
      store->append(key, *rec);
    }
  }
  std::cout << rec->dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  if (o.input.empty()) throw nv::UsageError("sweep needs a spec file (--input or positional)");
  stage = "reading sweep spec";
  auto spec = nv::parse_sweep_spec(nv::read_json_file(o.input));
  if (o.jobs > 0) spec.jobs = o.jobs;
  if (!o.out.empty()) spec.out = o.out;
  std::optional<nv::ResultStore> store;
  if (!spec.out.empty()) {
    stage = "opening result store";
    store.emplace(spec.out);
  }
  stage = "running sweep";
  const auto results = nv::run_sweep(spec, store ? &*store : nullptr, {.force = o.force, .timing = o.timing});

  bool any_ok = false;
  for (const auto& r : results) any_ok = any_ok || r.record.has_value();
  if (o.format == "json") {
    json jobs = json::array();
    for (const auto& r : results) {
      json j{{"arch", r.widths}, {"degree", r.degree}, {"key", r.key}, {"status", nv::to_string(r.status)}};
      if (r.record) j["record"] = *r.record;
      if (!r.reason.empty()) j["reason"] = r.reason;
      jobs.push_back(std::move(j));
    }
    json summary{{"schema_version", nv::kSchemaVersion},
                 {"kind", "sweep"},
                 {"field", nv::to_json(spec.field)},
                 {"seed", spec.seed},
                 {"trials", spec.trials},
                 {"jobs", jobs}};
    std::cout << summary.dump(2) << '\n';
  } else {
    std::cout << (o.format == "csv" ? nv::csv_header() : nv::markdown_header()) << '\n';
    for (const auto& r : results) {
      if (r.record) std::cout << (o.format == "csv" ? nv::csv_row(*r.record) : nv::markdown_row(*r.record)) << '\n';
    }
  }
  for (const auto& r : results) {
    if (!r.record) std::cerr << "job " << r.key << " " << nv::to_string(r.status) << ": " << r.reason << '\n';
  }
  return any_ok ? kExitOk : kExitComputation;
}

int cmd_ticket(const Options& o) {
  require_json_format(o, "ticket");
  if (o.input.empty()) throw nv::UsageError("ticket needs --input <family.json>");
  stage = "reading polynomial family";
  const json raw = nv::read_json_file(o.input);
  nv::PolyFamily<nv::Rational> family(nv::family_from_json(raw));
  const auto field = nv::ScalarField::parse(o.field, o.prime);
  auto store = open_store(o);
  std::string mode = field.kind == nv::FieldKind::ExactRational ? "exact" : (o.no_confirm ? "prime" : "confirmed");
  const std::string key = "ticket|" + raw.dump() +
                          "|mmax=" + std::to_string(o.mmax) + "|" + field.descriptor() + "|" + mode;
  std::optional<json> rec;
  if (store && !o.force) rec = store->find(key);
  if (!rec) {
    stage = "computing ticket";
    if (field.kind == nv::FieldKind::ExactRational) {
      rec = nv::to_json(nv::ticket(family, o.mmax));
    } else if (field.kind == nv::FieldKind::PrimeField && o.no_confirm) {
      nv::ScopedModulus mod(field.prime);
      rec = nv::to_json(nv::ticket(nv::reduce(family), o.mmax));
    } else if (field.kind == nv::FieldKind::PrimeField) {
      rec = nv::to_json(nv::ticket_confirmed(family, o.mmax, field.prime));
    } else {
      throw nv::UnsupportedFieldError("tickets need an exact field (fp or exact), not float");
    }
    if (store) {
      stage = "writing result store";
      store->append(key, *rec);
    }
  }
  std::cout << rec->dump(2) << '\n';
  return kExitOk;
}

int cmd_zero_witness(const Options& o) {
  require_json_format(o, "zero-witness");
  if (o.input.empty()) throw nv::UsageError("zero-witness needs --input <weights.json>");
  if (o.degree < 1) throw nv::UsageError("--degree must be given and >= 1");
  stage = "reading weight set";
  const auto w = nv::complex_weights_from_json(nv::read_json_file(o.input));
  const auto arch = nv::architecture_of(w, o.degree);
  stage = "constructing zero witness";
  std::cout << nv::to_json(nv::zero_witness(arch, w), arch).dump(2) << '\n';
  return kExitOk;
}

int cmd_homogeneity_check(const Options& o) {
  require_json_format(o, "homogeneity-check");
  const auto arch = require_arch(o);
  stage = "checking multi-homogeneity";
  const auto res = nv::homogeneity_check(arch, o.seed, o.trials, o.omit_inverse_scaling, o.prime);
  std::cout << nv::to_json(res, arch, o.seed).dump(2) << '\n';
  return res.passed ? kExitOk : kExitComputation;
}

int cmd_fiber_check(const Options& o) {
  require_json_format(o, "fiber-check");
  const auto arch = require_arch(o);
  stage = "computing generic Jacobian rank";
  const auto res = nv::fiber_check(arch, dimension_options(o));
  std::cout << nv::to_json(res, {.timing = o.timing}).dump(2) << '\n';
  return res.passed ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension, defect and activation threshold of polynomial neural network neurovarieties"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML config file; flags given on the command line win");

  Options o;
  app.add_option("--arch", o.arch, "Widths d0,d1,...,dL");
  app.add_option("--degree", o.degree, "Activation degree r")->check(CLI::PositiveNumber);
  app.add_option("--rmax", o.rmax, "Largest degree probed by threshold")->check(CLI::PositiveNumber);
  app.add_option("--field", o.field, "Scalar field")->check(CLI::IsMember({"fp", "float", "exact"}));
  app.add_option("--prime", o.prime, "Prime modulus for --field fp");
  app.add_option("--trials", o.trials, "Random trials")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--out", o.out, "JSONL result store");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "md"}));
  app.add_flag("--force", o.force, "Recompute even when the store has the record");
  app.add_option("--jobs", o.jobs, "Sweep worker threads")->check(CLI::PositiveNumber);
  app.add_option("--input", o.input, "Input file (sweep spec, family or weight set)");
  app.add_option("--mmax", o.mmax, "Largest power inspected by ticket")->check(CLI::PositiveNumber);
  app.add_flag("--timing", o.timing, "Record elapsed_ms in reports");
  app.add_flag("--no-confirm", o.no_confirm, "ticket: prime field only, no exact confirmation");
  app.add_flag("--omit-inverse-scaling", o.omit_inverse_scaling,
               "homogeneity-check: drop the D^-r compensation (negative control)");

  using Handler = int (*)(const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands{
      {app.add_subcommand("dim", "Dimension of the neurovariety"), cmd_dim},
      {app.add_subcommand("edim", "Expected dimension"), cmd_edim},
      {app.add_subcommand("defect", "Expected minus actual dimension"), cmd_dim},
      {app.add_subcommand("threshold", "Probe degrees 1..rmax for defects"), cmd_threshold},
      {app.add_subcommand("sweep", "Architecture x degree sweep from a JSON spec"), cmd_sweep},
      {app.add_subcommand("ticket", "Exponents m whose powers are linearly dependent"), cmd_ticket},
      {app.add_subcommand("zero-witness", "Nonzero zero of an equi-width network"), cmd_zero_witness},
      {app.add_subcommand("homogeneity-check", "Verify multi-homogeneity invariance"), cmd_homogeneity_check},
      {app.add_subcommand("fiber-check", "Verify the generic fiber lower bound"), cmd_fiber_check},
  };
  for (auto& [sub, handler] : commands) sub->fallthrough();
  commands[4].first->add_option("spec", o.input, "Sweep spec file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto& [sub, handler] : commands) {
      if (sub->parsed()) return handler(o);
    }
  } catch (const nv::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nv::UnsupportedFieldError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error while " << stage << ": " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}
