// Copyright 2026 The dsfkit Authors.
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

#ifndef DSFKIT_REPORT_HPP_
#define DSFKIT_REPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "dsfkit/core.hpp"

namespace dsfkit {

struct Witness {
  std::vector<Subset> sets;
  std::vector<std::size_t> elements;  // element ids in the sets' ground set
  double violation = 0.0;
  std::string detail;
  std::uint64_t order = 0;  // deterministic merge key, lower first

  std::string to_string() const {
    if (sets.empty() && elements.empty()) return detail;
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (const auto& s : sets) {
      if (!first) os << ", ";
      os << s.to_string();
      first = false;
    }
    for (std::size_t e : elements) {
      if (!first) os << ", ";
      if (!sets.empty()) {
        os << sets.front().ground().label(e);
      } else {
        os << e;
      }
      first = false;
    }
    os << ")";
    if (!detail.empty()) os << " " << detail;
    return os.str();
  }
};

struct VerificationReport {
  std::string property;
  bool pass = true;
  std::vector<Witness> witnesses;
  double max_violation = 0.0;
  std::uint64_t subsets_checked = 0;
  std::size_t witness_cap = 32;
  std::uint64_t skipped = 0;
  std::vector<std::string> notes;

  explicit VerificationReport(std::string name = {}, std::size_t cap = 32)
      : property(std::move(name)), witness_cap(cap) {}

  void add(Witness w) {
    pass = false;
    max_violation = std::max(max_violation, w.violation);
    witnesses.push_back(std::move(w));
    trim();
  }

  // Folds another partial report into this one keeping the lowest-ordered
  // witnesses, so thread count does not change the result.
  void merge(const VerificationReport& other) {
    pass = pass && other.pass;
    max_violation = std::max(max_violation, other.max_violation);
    subsets_checked += other.subsets_checked;
    skipped += other.skipped;
    witnesses.insert(witnesses.end(), other.witnesses.begin(),
                     other.witnesses.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    trim();
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(12);
    os << property << ": " << (pass ? "PASS" : "FAIL") << " (checked "
       << subsets_checked;
    if (skipped) os << ", skipped " << skipped;
    os << ", max violation " << max_violation << ")\n";
    for (const auto& w : witnesses) {
      os << "  witness " << w.to_string() << " violation " << w.violation
         << "\n";
    }
    for (const auto& n : notes) os << "  note: " << n << "\n";
    return os.str();
  }

 private:
  void trim() {
    std::stable_sort(
        witnesses.begin(), witnesses.end(),
        [](const Witness& a, const Witness& b) { return a.order < b.order; });
    if (witnesses.size() > witness_cap) witnesses.resize(witness_cap);
  }
};

// Combines several reports into one named summary.
inline VerificationReport combine_reports(
    std::string name, const std::vector<VerificationReport>& parts) {
  VerificationReport out(std::move(name));
  for (const auto& p : parts) {
    out.pass = out.pass && p.pass;
    out.max_violation = std::max(out.max_violation, p.max_violation);
    out.subsets_checked += p.subsets_checked;
    for (auto w : p.witnesses) {
      if (out.witnesses.size() >= out.witness_cap) break;
      if (!w.detail.empty()) {
        w.detail = p.property + ": " + w.detail;
      } else {
        w.detail = p.property;
      }
      out.witnesses.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace dsfkit

#endif  // DSFKIT_REPORT_HPP_
