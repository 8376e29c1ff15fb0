#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace privsq {

struct Subsystem {
  std::string label;
  std::size_t dim = 1;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

using LabelList = std::vector<std::string>;

// Ordered list of labeled tensor factors.
//
// Flat indices are row-major over the listed order: for systems
// (s_1, ..., s_k) the basis vector |i_1 ... i_k> sits at
// i_1 * (d_2 ... d_k) + ... + i_k, so the first system is most significant.
class SystemLayout {
 public:
  SystemLayout() = default;
  SystemLayout(std::vector<Subsystem> systems);
  SystemLayout(std::initializer_list<Subsystem> systems)
      : SystemLayout(std::vector<Subsystem>(systems)) {}

  const std::vector<Subsystem>& systems() const { return systems_; }
  std::size_t size() const { return systems_.size(); }
  bool empty() const { return systems_.empty(); }
  std::size_t total_dim() const { return total_dim_; }

  bool contains(const std::string& label) const;
  /// Position of `label`; throws LabelError if absent.
  std::size_t position(const std::string& label) const;
  std::size_t dim(const std::string& label) const;
  LabelList labels() const;
  std::vector<std::size_t> dims() const;

  /// Product of the dims of `labels` (1 for an empty list).
  std::size_t dim_of(std::span<const std::string> labels) const;

  /// The listed systems, in the order given.
  SystemLayout select(std::span<const std::string> labels) const;
  /// The listed systems, in this layout's order.
  SystemLayout restrict_to(std::span<const std::string> labels) const;
  /// Labels of this layout that are not in `labels`, in layout order.
  LabelList complement(std::span<const std::string> labels) const;

  /// Stride (in flat index units) of each system.
  std::vector<std::size_t> strides() const;

  friend bool operator==(const SystemLayout&, const SystemLayout&) = default;

 private:
  std::vector<Subsystem> systems_;
  std::size_t total_dim_ = 1;
};

/// Layout `a` followed by `b`; throws LabelError on a repeated label.
SystemLayout concat(const SystemLayout& a, const SystemLayout& b);

std::string to_string(const SystemLayout& layout);

}  // namespace privsq
