#pragma once

#include <string>
#include <vector>

namespace normax {

/// One named check with its numeric evidence. `informational` items are
/// reported but do not affect the aggregate verdict.
struct CheckItem {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  bool informational = false;
};

struct Report {
  std::vector<CheckItem> items;

  bool pass() const {
    for (const CheckItem& c : items)
      if (!c.informational && !c.pass) return false;
    return true;
  }
  void add(std::string name, bool ok, double residual, bool info = false) {
    items.push_back({std::move(name), ok, residual, info});
  }
};

}  // namespace normax
