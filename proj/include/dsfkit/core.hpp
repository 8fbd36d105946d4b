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

// Ground sets, subsets, modular functions and the set-function handle that
// every other part of dsfkit consumes.

#ifndef DSFKIT_CORE_HPP_
#define DSFKIT_CORE_HPP_

#include <array>
#include <bit>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dsfkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

// Converts a double to a rational. Dyadic values with a denominator up to
// 2^20 convert exactly; anything else gets the best continued-fraction
// approximation with denominator <= 10^6 and `exact` is cleared.
inline Rational to_rational(double x, bool* exact = nullptr) {
  if (!std::isfinite(x)) throw Error("to_rational: non-finite value");
  if (exact) *exact = true;
  double scaled = x;
  std::int64_t den = 1;
  for (int i = 0; i <= 20; ++i) {
    if (scaled == std::floor(scaled) && std::fabs(scaled) < 9.0e15) {
      return Rational(static_cast<std::int64_t>(scaled), den);
    }
    scaled *= 2.0;
    den *= 2;
  }
  if (exact) *exact = false;
  // Stern-Brocot style continued fraction.
  const std::int64_t max_den = 1000000;
  double v = std::fabs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(frac);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (frac - a < 1e-15) break;
    frac = 1.0 / (frac - a);
  }
  return Rational(x < 0 ? -p1 : p1, q1);
}

// Upper bound on ground-set size; subsets are four 64-bit words.
inline constexpr std::size_t kMaxGroundSize = 256;

namespace detail {
struct GroundData {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> index;
};
}  // namespace detail

// A finite labeled ground set. Element ids are 0..n-1 in label order.
class GroundSet {
 public:
  GroundSet() = default;

  explicit GroundSet(std::vector<std::string> labels) {
    if (labels.empty()) throw Error("GroundSet: needs at least one element");
    if (labels.size() > kMaxGroundSize) {
      throw Error("GroundSet: " + std::to_string(labels.size()) +
                  " elements exceeds the cap of " +
                  std::to_string(kMaxGroundSize));
    }
    auto data = std::make_shared<detail::GroundData>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!data->index.emplace(labels[i], i).second) {
        throw Error("GroundSet: duplicate label '" + labels[i] + "'");
      }
    }
    data->labels = std::move(labels);
    data_ = std::move(data);
  }

  GroundSet(std::initializer_list<std::string> labels)
      : GroundSet(std::vector<std::string>(labels)) {}

  // Labels "prefix0", "prefix1", ...
  static GroundSet numbered(std::size_t n, std::string_view prefix = "v") {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(std::string(prefix) + std::to_string(i));
    }
    return GroundSet(std::move(labels));
  }

  // Single-character labels "a", "b", ... (n <= 26).
  static GroundSet lettered(std::size_t n) {
    if (n > 26) throw Error("GroundSet::lettered: at most 26 elements");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
      labels.emplace_back(1, static_cast<char>('a' + i));
    }
    return GroundSet(std::move(labels));
  }

  std::size_t size() const { return data_ ? data_->labels.size() : 0; }
  bool valid() const { return data_ != nullptr; }

  const std::string& label(std::size_t id) const {
    return data_->labels.at(id);
  }
  const std::vector<std::string>& labels() const { return data_->labels; }

  std::size_t id(std::string_view label) const {
    auto it = data_->index.find(std::string(label));
    if (it == data_->index.end()) {
      throw Error("GroundSet: unknown element '" + std::string(label) + "'");
    }
    return it->second;
  }
  bool contains_label(std::string_view label) const {
    return data_->index.count(std::string(label)) > 0;
  }

  friend bool operator==(const GroundSet& a, const GroundSet& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return a.data_->labels == b.data_->labels;
  }

 private:
  std::shared_ptr<const detail::GroundData> data_;
};

// Fixed-width bitset over a ground set.
template <std::size_t Words>
class BasicSubset {
 public:
  static constexpr std::size_t kCapacity = Words * 64;

  BasicSubset() = default;
  explicit BasicSubset(GroundSet ground) : ground_(std::move(ground)) {
    if (ground_.size() > kCapacity) throw Error("Subset: ground set too large");
  }
  BasicSubset(GroundSet ground, std::initializer_list<std::size_t> ids)
      : BasicSubset(std::move(ground)) {
    for (std::size_t id : ids) insert(id);
  }

  static BasicSubset from_ids(GroundSet ground,
                              std::span<const std::size_t> ids) {
    BasicSubset s(std::move(ground));
    for (std::size_t id : ids) s.insert(id);
    return s;
  }
  static BasicSubset from_labels(GroundSet ground,
                                 const std::vector<std::string>& labels) {
    BasicSubset s(ground);
    for (const auto& l : labels) s.insert(ground.id(l));
    return s;
  }
  // Low 64 ids from a bit mask.
  static BasicSubset from_mask(GroundSet ground, std::uint64_t mask) {
    BasicSubset s(std::move(ground));
    if (s.ground_.size() < 64 && (mask >> s.ground_.size()) != 0) {
      throw Error("Subset::from_mask: bit beyond ground set");
    }
    s.bits_[0] = mask;
    return s;
  }
  static BasicSubset full(GroundSet ground) {
    BasicSubset s(std::move(ground));
    for (std::size_t i = 0; i < s.ground_.size(); ++i) s.insert(i);
    return s;
  }

  const GroundSet& ground() const { return ground_; }
  std::size_t universe_size() const { return ground_.size(); }

  bool contains(std::size_t id) const {
    return id < ground_.size() && ((bits_[id >> 6] >> (id & 63)) & 1u);
  }
  void insert(std::size_t id) {
    check_id(id);
    bits_[id >> 6] |= std::uint64_t{1} << (id & 63);
  }
  void erase(std::size_t id) {
    check_id(id);
    bits_[id >> 6] &= ~(std::uint64_t{1} << (id & 63));
  }
  BasicSubset with(std::size_t id) const {
    BasicSubset s = *this;
    s.insert(id);
    return s;
  }
  BasicSubset without(std::size_t id) const {
    BasicSubset s = *this;
    s.erase(id);
    return s;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const { return count() == 0; }

  std::uint64_t to_mask() const {
    for (std::size_t w = 1; w < Words; ++w) {
      if (bits_[w] != 0) throw Error("Subset::to_mask: ids beyond 63 present");
    }
    return bits_[0];
  }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t id) { out.push_back(id); });
    return out;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < Words; ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        const int bit = std::countr_zero(word);
        fn(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

  bool is_subset_of(const BasicSubset& other) const {
    for (std::size_t w = 0; w < Words; ++w) {
      if (bits_[w] & ~other.bits_[w]) return false;
    }
    return true;
  }
  bool disjoint(const BasicSubset& other) const {
    for (std::size_t w = 0; w < Words; ++w) {
      if (bits_[w] & other.bits_[w]) return false;
    }
    return true;
  }

  BasicSubset complement() const {
    BasicSubset s(ground_);
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      if (!contains(i)) s.insert(i);
    }
    return s;
  }

  friend BasicSubset operator|(BasicSubset a, const BasicSubset& b) {
    a.require_same(b);
    for (std::size_t w = 0; w < Words; ++w) a.bits_[w] |= b.bits_[w];
    return a;
  }
  friend BasicSubset operator&(BasicSubset a, const BasicSubset& b) {
    a.require_same(b);
    for (std::size_t w = 0; w < Words; ++w) a.bits_[w] &= b.bits_[w];
    return a;
  }
  friend BasicSubset operator-(BasicSubset a, const BasicSubset& b) {
    a.require_same(b);
    for (std::size_t w = 0; w < Words; ++w) a.bits_[w] &= ~b.bits_[w];
    return a;
  }
  friend BasicSubset operator^(BasicSubset a, const BasicSubset& b) {
    a.require_same(b);
    for (std::size_t w = 0; w < Words; ++w) a.bits_[w] ^= b.bits_[w];
    return a;
  }

  friend bool operator==(const BasicSubset& a, const BasicSubset& b) {
    return a.bits_ == b.bits_ && a.ground_.size() == b.ground_.size();
  }
  // Orders by the highest differing id, i.e. numeric order of the bitset.
  friend bool operator<(const BasicSubset& a, const BasicSubset& b) {
    for (std::size_t w = Words; w-- > 0;) {
      if (a.bits_[w] != b.bits_[w]) return a.bits_[w] < b.bits_[w];
    }
    return false;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for_each([&](std::size_t id) {
      if (!first) out += ",";
      out += ground_.label(id);
      first = false;
    });
    return out + "}";
  }

 private:
  void check_id(std::size_t id) const {
    if (id >= ground_.size()) {
      throw Error("Subset: element id " + std::to_string(id) +
                  " out of range for ground set of size " +
                  std::to_string(ground_.size()));
    }
  }
  void require_same(const BasicSubset& other) const {
    if (!(ground_ == other.ground_)) throw Error("Subset: ground set mismatch");
  }

  GroundSet ground_;
  std::array<std::uint64_t, Words> bits_{};
};

using Subset = BasicSubset<kMaxGroundSize / 64>;

inline std::vector<double> indicator_vector(const Subset& a) {
  std::vector<double> x(a.universe_size(), 0.0);
  a.for_each([&](std::size_t id) { x[id] = 1.0; });
  return x;
}

// m(A) = sum of per-element weights; m(empty) = 0.
class ModularFunction {
 public:
  ModularFunction() = default;
  ModularFunction(GroundSet ground, std::vector<double> weights,
                  bool nonneg = false)
      : ground_(std::move(ground)),
        weights_(std::move(weights)),
        nonneg_(nonneg) {
    if (weights_.size() != ground_.size()) {
      throw Error("ModularFunction: expected " +
                  std::to_string(ground_.size()) + " weights, got " +
                  std::to_string(weights_.size()));
    }
    for (double w : weights_) {
      if (!std::isfinite(w)) throw Error("ModularFunction: non-finite weight");
      if (nonneg_ && w < 0.0) {
        throw Error(
            "ModularFunction: negative weight in a non-negative "
            "modular function");
      }
    }
  }

  static ModularFunction zero(GroundSet ground) {
    std::vector<double> w(ground.size(), 0.0);
    return ModularFunction(std::move(ground), std::move(w), true);
  }

  const GroundSet& ground() const { return ground_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t id) const { return weights_.at(id); }
  bool nonneg() const { return nonneg_; }

  double operator()(const Subset& a) const {
    if (!(a.ground() == ground_)) {
      throw Error("modular_eval: ground set mismatch");
    }
    double sum = 0.0;
    a.for_each([&](std::size_t id) { sum += weights_[id]; });
    return sum;
  }

  // <m, x> for a real vector x.
  double dot(std::span<const double> x) const {
    if (x.size() != weights_.size()) throw Error("ModularFunction: bad length");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += weights_[i] * x[i];
    return sum;
  }

 private:
  GroundSet ground_;
  std::vector<double> weights_;
  bool nonneg_ = false;
};

inline double modular_eval(const ModularFunction& m, const Subset& a) {
  return m(a);
}

// A deterministic set function f: 2^V -> R, optionally with an exact
// rational evaluator used by the exact-mode verifiers.
class SetFunction {
 public:
  using Evaluator = std::function<double(const Subset&)>;
  using ExactEvaluator = std::function<Rational(const Subset&)>;

  SetFunction() = default;
  SetFunction(GroundSet ground, Evaluator eval, ExactEvaluator exact = {},
              std::string name = {})
      : ground_(std::move(ground)),
        eval_(std::move(eval)),
        exact_(std::move(exact)),
        name_(std::move(name)) {
    if (!eval_ && exact_) {
      eval_ = [ex = exact_](const Subset& s) { return to_double(ex(s)); };
    }
    if (!eval_) throw Error("SetFunction: missing evaluator");
  }

  // An integer-valued function; both evaluators derive from one callable.
  static SetFunction integer(GroundSet ground,
                             std::function<std::int64_t(const Subset&)> fn,
                             std::string name = {}) {
    auto exact = [fn](const Subset& s) { return Rational(fn(s)); };
    auto real = [fn](const Subset& s) { return static_cast<double>(fn(s)); };
    return SetFunction(std::move(ground), real, exact, std::move(name));
  }

  static SetFunction from_modular(const ModularFunction& m) {
    return SetFunction(
        m.ground(), [m](const Subset& s) { return m(s); }, {}, "modular");
  }

  const GroundSet& ground() const { return ground_; }
  const std::string& name() const { return name_; }
  bool has_exact() const { return static_cast<bool>(exact_); }

  double operator()(const Subset& a) const {
    if (!(a.ground() == ground_)) {
      throw Error("SetFunction: ground set mismatch");
    }
    return eval_(a);
  }
  Rational exact(const Subset& a) const {
    if (!exact_) throw Error("SetFunction: no exact evaluator");
    if (!(a.ground() == ground_)) {
      throw Error("SetFunction: ground set mismatch");
    }
    return exact_(a);
  }

  // Conic/linear combination alpha*f + beta*g on the same ground set.
  friend SetFunction combine(double alpha, const SetFunction& f, double beta,
                             const SetFunction& g) {
    if (!(f.ground() == g.ground())) throw Error("combine: ground mismatch");
    return SetFunction(f.ground(), [=](const Subset& s) {
      return alpha * f(s) + beta * g(s);
    });
  }

 private:
  GroundSet ground_;
  Evaluator eval_;
  ExactEvaluator exact_;
  std::string name_;
};

// Number of worker threads: DSFKIT_THREADS if set, else hardware threads.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("DSFKIT_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace dsfkit

#endif  // DSFKIT_CORE_HPP_
