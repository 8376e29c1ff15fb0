#include "privsq/layout.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "privsq/errors.hpp"

namespace privsq {

SystemLayout::SystemLayout(std::vector<Subsystem> systems) : systems_(std::move(systems)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : systems_) {
    if (s.dim < 1) throw ShapeError("system '" + s.label + "' has dimension 0");
    if (!seen.insert(s.label).second) throw LabelError("duplicate system label '" + s.label + "'");
    total_dim_ *= s.dim;
  }
}

bool SystemLayout::contains(const std::string& label) const {
  return std::any_of(systems_.begin(), systems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t SystemLayout::position(const std::string& label) const {
  for (std::size_t i = 0; i < systems_.size(); ++i)
    if (systems_[i].label == label) return i;
  throw LabelError("unknown system label '" + label + "' in layout " + to_string(*this));
}

std::size_t SystemLayout::dim(const std::string& label) const { return systems_[position(label)].dim; }

LabelList SystemLayout::labels() const {
  LabelList out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.label);
  return out;
}

std::vector<std::size_t> SystemLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.dim);
  return out;
}

std::size_t SystemLayout::dim_of(std::span<const std::string> labels) const {
  std::size_t d = 1;
  for (const auto& l : labels) d *= dim(l);
  return d;
}

SystemLayout SystemLayout::select(std::span<const std::string> labels) const {
  std::vector<Subsystem> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(systems_[position(l)]);
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::restrict_to(std::span<const std::string> labels) const {
  std::vector<bool> keep(systems_.size(), false);
  for (const auto& l : labels) {
    const std::size_t p = position(l);
    if (keep[p]) throw LabelError("label '" + l + "' listed twice");
    keep[p] = true;
  }
  std::vector<Subsystem> out;
  for (std::size_t i = 0; i < systems_.size(); ++i)
    if (keep[i]) out.push_back(systems_[i]);
  return SystemLayout(std::move(out));
}

LabelList SystemLayout::complement(std::span<const std::string> labels) const {
  for (const auto& l : labels) position(l);
  LabelList out;
  for (const auto& s : systems_)
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) out.push_back(s.label);
  return out;
}

std::vector<std::size_t> SystemLayout::strides() const {
  std::vector<std::size_t> out(systems_.size(), 1);
  std::size_t stride = 1;
  for (std::size_t i = systems_.size(); i-- > 0;) {
    out[i] = stride;
    stride *= systems_[i].dim;
  }
  return out;
}

SystemLayout concat(const SystemLayout& a, const SystemLayout& b) {
  std::vector<Subsystem> out = a.systems();
  out.insert(out.end(), b.systems().begin(), b.systems().end());
  return SystemLayout(std::move(out));
}

std::string to_string(const SystemLayout& layout) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i) os << ", ";
    os << layout.systems()[i].label << ':' << layout.systems()[i].dim;
  }
  os << ']';
  return os.str();
}

}  // namespace privsq
