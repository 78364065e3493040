#include "neurovariety/network.hpp"

#include <charconv>

#include "neurovariety/capacity.hpp"
#include "neurovariety/errors.hpp"

namespace nv {

Architecture::Architecture(std::vector<int> widths, int activation_degree)
    : widths_(std::move(widths)), activation_degree_(activation_degree) {
  if (widths_.size() < 2) throw UsageError("an architecture needs at least two widths (one weight matrix)");
  for (int d : widths_) {
    if (d < 1) throw UsageError("layer widths must be positive");
  }
  if (depth() >= 2 && activation_degree_ < 1) {
    throw UsageError("activation degree must be >= 1 when the network has a hidden layer");
  }
  if (activation_degree_ < 0) throw UsageError("activation degree must be non-negative");
}

Architecture Architecture::parse(std::string_view text, int activation_degree) {
  std::vector<int> widths;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view field = text.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw UsageError("cannot parse architecture '" + std::string(text) + "' (expected e.g. 2,2,2)");
    }
    widths.push_back(value);
    pos = comma + 1;
  }
  return Architecture(std::move(widths), activation_degree);
}

int Architecture::output_degree() const { return layer_degree(depth()); }

int Architecture::layer_degree(int i) const {
  if (i <= 1) return 1;
  const std::uint64_t d =
      checked_pow(static_cast<std::uint64_t>(activation_degree_), static_cast<std::uint64_t>(i - 1));
  if (d > static_cast<std::uint64_t>(INT32_MAX)) throw CapacityError("polynomial degree overflows");
  return static_cast<int>(d);
}

std::uint64_t Architecture::hidden_width_sum() const {
  std::uint64_t s = 0;
  for (int i = 1; i < depth(); ++i) s += static_cast<std::uint64_t>(width(i));
  return s;
}

bool Architecture::widths_exceed_one() const {
  for (int i = 1; i <= depth(); ++i) {
    if (width(i) <= 1) return false;
  }
  return true;
}

bool Architecture::is_equi_width() const {
  for (int d : widths_) {
    if (d != widths_.front()) return false;
  }
  return true;
}

std::string Architecture::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(widths_[i]);
  }
  return out;
}

std::uint64_t ambient_count(const Architecture& arch) {
  const std::uint64_t basis = basis_size(arch.input_width(), arch.output_degree());
  return checked_mul(static_cast<std::uint64_t>(arch.output_width()), basis);
}

std::uint64_t ambient_dim(const Architecture& arch) {
  const std::uint64_t n = ambient_count(arch);
  require_within_cap(n, "ambient space of " + arch.to_string());
  return n;
}

std::uint64_t param_count(const Architecture& arch) {
  std::uint64_t total = 0;
  for (int i = 0; i < arch.depth(); ++i) {
    total = checked_add(total, checked_mul(static_cast<std::uint64_t>(arch.width(i)),
                                           static_cast<std::uint64_t>(arch.width(i + 1))));
  }
  return total;
}

Homogeneity<ModP> random_homogeneity(const Architecture& arch, Rng& rng) {
  Homogeneity<ModP> h;
  for (int i = 1; i < arch.depth(); ++i) {
    Vector<ModP> d(arch.width(i));
    for (Eigen::Index c = 0; c < d.size(); ++c) d(c) = rng.nonzero_residue();
    h.scalings.push_back(std::move(d));
    h.perms.push_back(rng.permutation(arch.width(i)));
  }
  return h;
}

}  // namespace nv
