#pragma once

#include <map>
#include <string>
#include <vector>

namespace fbawgn::validate {

// One invariant check: pass iff measured <= bound.
struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

std::vector<std::string> suite_names();  // density, laplace, exponents, waterfill, rcu

// Runs a named suite ("all" runs every suite). Overrides replace the bound
// of the matching check name. Throws std::invalid_argument on unknown names.
std::vector<Check> run_suite(const std::string& suite,
                             const std::map<std::string, double>& overrides = {});

}  // namespace fbawgn::validate
