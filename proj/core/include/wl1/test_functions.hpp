#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wl1/basis.hpp"

namespace wl1 {

struct TestFunction {
  std::string id;
  std::string formula;
  RealFunction f;
  /// Family tags: "aliasing", "sweep", "legendre", "fourier", "analytic".
  std::vector<std::string> tags;

  bool has_tag(std::string_view tag) const;
};

/// Built-in functions, all bounded on [-1, 1].
const std::vector<TestFunction>& test_functions();
const TestFunction& find_test_function(std::string_view id);
std::vector<TestFunction> test_functions_tagged(std::string_view tag);

}  // namespace wl1
