#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlb/tensor.hpp"

namespace qlb {

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
  std::optional<SparseTensor> defect;
};

struct Report {
  std::string title;
  std::vector<CheckItem> items;

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    items.push_back({name, pass, detail, std::nullopt});
  }
  void add_defect(const std::string& name, const SparseTensor& defect,
                  const std::string& detail = "") {
    items.push_back({name, defect.is_zero(), detail, defect});
  }
  void merge(const Report& other) {
    for (const auto& it : other.items) items.push_back(it);
  }
  bool passed() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& it : items)
      if (!it.pass) out.push_back(it.name);
    return out;
  }
};

}  // namespace qlb
