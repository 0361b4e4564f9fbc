#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpid {

/// Ordered list of tensor factors; fixes the composite index convention
/// (row-major, first label is the slowest index).
struct HilbertLayout {
  std::vector<int> dims;
  std::vector<std::string> labels;

  HilbertLayout() = default;
  HilbertLayout(std::vector<int> d, std::vector<std::string> l)
      : dims(std::move(d)), labels(std::move(l)) {
    validate();
  }

  void validate() const {
    if (dims.size() != labels.size())
      throw std::invalid_argument("HilbertLayout: dims/labels size mismatch");
    if (dims.empty()) throw std::invalid_argument("HilbertLayout: empty");
    for (int d : dims)
      if (d < 1) throw std::invalid_argument("HilbertLayout: dim < 1");
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("HilbertLayout: duplicate labels");
  }

  [[nodiscard]] long total_dim() const {
    long d = 1;
    for (int x : dims) d *= x;
    return d;
  }

  [[nodiscard]] std::size_t factor_count() const { return dims.size(); }

  [[nodiscard]] int index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
      throw std::invalid_argument("HilbertLayout: unknown label " + label);
    return static_cast<int>(it - labels.begin());
  }

  [[nodiscard]] bool has_label(const std::string& label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
  }

  /// Sub-layout of the given labels, in this layout's relative order.
  [[nodiscard]] HilbertLayout sub_layout(
      const std::vector<std::string>& keep) const {
    std::vector<int> d;
    std::vector<std::string> l;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (std::find(keep.begin(), keep.end(), labels[i]) != keep.end()) {
        d.push_back(dims[i]);
        l.push_back(labels[i]);
      }
    }
    for (const auto& k : keep)
      if (!has_label(k))
        throw std::invalid_argument("HilbertLayout: unknown label " + k);
    return {d, l};
  }

  [[nodiscard]] long dim_of(const std::vector<std::string>& subset) const {
    long d = 1;
    for (const auto& l : subset) d *= dims[index_of(l)];
    return d;
  }

  bool operator==(const HilbertLayout& o) const {
    return dims == o.dims && labels == o.labels;
  }
};

}  // namespace qpid
