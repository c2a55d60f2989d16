// Copyright 2026 The ktdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KTD_SELFTEST_HPP
#define KTD_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ktd {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick analytic checks: two-atom closed forms, real vs complex spectral
/// routes, and the norm-ordering inequalities on random instances.
std::vector<CheckResult> run_selftest(std::uint64_t seed);

}  // namespace ktd

#endif  // KTD_SELFTEST_HPP
