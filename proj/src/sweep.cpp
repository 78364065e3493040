#include "neurovariety/sweep.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"

namespace nv {

std::string to_string(JobStatus s) {
  switch (s) {
    case JobStatus::Computed:
      return "computed";
    case JobStatus::Cached:
      return "cached";
    case JobStatus::Skipped:
      return "skipped";
    case JobStatus::Failed:
      return "failed";
  }
  return "unknown";
}

SweepSpec parse_sweep_spec(const json& j) {
  try {
    SweepSpec spec;
    if (j.contains("architectures")) {
      for (const auto& a : j.at("architectures")) spec.architectures.push_back(a.get<std::vector<int>>());
    }
    if (j.contains("grids")) {
      for (const auto& g : j.at("grids")) {
        if (!g.contains("equi_width")) throw UsageError("unknown grid kind: " + g.dump());
        const auto& ew = g.at("equi_width");
        for (int d : ew.at("widths").get<std::vector<int>>()) {
          for (int L : ew.at("depths").get<std::vector<int>>()) {
            if (L < 1) throw UsageError("grid depth must be >= 1");
            spec.architectures.emplace_back(static_cast<std::size_t>(L) + 1, d);
          }
        }
      }
    }
    const json& deg = j.at("degrees");
    if (deg.is_array()) {
      spec.degrees = deg.get<std::vector<int>>();
    } else {
      for (int r = deg.at("from").get<int>(); r <= deg.at("to").get<int>(); ++r) spec.degrees.push_back(r);
    }
    const std::uint64_t prime = j.value("prime", ModP::kMersenne61);
    spec.field = ScalarField::parse(j.value("field", std::string("fp")), prime);
    spec.trials = j.value("trials", 3);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.jobs = j.value("jobs", 1);
    spec.out = j.value("out", std::string());
    if (spec.architectures.empty()) throw UsageError("sweep spec lists no architectures");
    if (spec.degrees.empty()) throw UsageError("sweep spec lists no degrees");
    if (spec.trials < 1) throw UsageError("sweep trials must be >= 1");
    if (spec.jobs < 1) throw UsageError("sweep jobs must be >= 1");
    return spec;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed sweep spec: ") + e.what());
  }
}

namespace {

struct Job {
  std::size_t index;
  Architecture arch;
};

struct Completed {
  std::size_t index;
  std::optional<json> record;
  std::string error;
};

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, ResultStore* store, const SweepOptions& opts) {
  std::vector<SweepRecord> results;
  std::vector<Job> pending;
  const DimensionOptions dim_opts{.field = spec.field, .trials = spec.trials, .seed = spec.seed};
  const ReportOptions report_opts{.timing = opts.timing};

  for (const auto& widths : spec.architectures) {
    for (int r : spec.degrees) {
      SweepRecord rec;
      rec.widths = widths;
      rec.degree = r;
      const std::size_t index = results.size();
      try {
        const Architecture arch(widths, r);
        rec.key = store_key("dim", arch, spec.field, spec.seed, spec.trials);
        const std::uint64_t ambient = ambient_count(arch);
        if (ambient > capacity_cap()) {
          rec.status = JobStatus::Skipped;
          rec.reason = "ambient dimension " + std::to_string(ambient) + " exceeds capacity cap " +
                       std::to_string(capacity_cap());
        } else if (auto hit = store && !opts.force ? store->find(rec.key) : std::nullopt) {
          rec.status = JobStatus::Cached;
          rec.record = std::move(hit);
        } else {
          pending.push_back(Job{index, arch});
        }
      } catch (const Error& e) {
        rec.status = JobStatus::Skipped;
        rec.reason = e.what();
      }
      results.push_back(std::move(rec));
    }
  }

  std::mutex mutex;
  std::condition_variable ready;
  std::deque<Completed> done;
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      Completed c{pending[i].index, std::nullopt, {}};
      try {
        c.record = to_json(dimension(pending[i].arch, dim_opts), report_opts);
      } catch (const std::exception& e) {
        c.error = e.what();
      }
      {
        const std::lock_guard lock(mutex);
        done.push_back(std::move(c));
      }
      ready.notify_one();
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), pending.size());
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

  // Single writer: this thread drains completions into the store.
  for (std::size_t received = 0; received < pending.size(); ++received) {
    Completed c;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return !done.empty(); });
      c = std::move(done.front());
      done.pop_front();
    }
    SweepRecord& rec = results[c.index];
    if (c.record) {
      rec.status = JobStatus::Computed;
      if (store != nullptr) store->append(rec.key, *c.record);
      rec.record = std::move(c.record);
    } else {
      rec.status = JobStatus::Failed;
      rec.reason = c.error;
    }
  }
  return results;
}

}  // namespace nv
