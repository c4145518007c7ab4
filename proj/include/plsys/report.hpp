#pragma once

#include <string>
#include <vector>

#include "plsys/error.hpp"

namespace plsys {

/// Outcome of a validation pass. Empty means the input passed.
struct Report {
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
  void add(std::string p) { problems.push_back(std::move(p)); }
  void merge(const Report& other) { problems.insert(problems.end(), other.problems.begin(), other.problems.end()); }
  std::string first() const { return problems.empty() ? std::string() : problems.front(); }
};

}  // namespace plsys
