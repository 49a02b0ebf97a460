#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdhmc/counters.hpp"
#include "sdhmc/math.hpp"

namespace sdhmc {

// Thrown when a recorded evaluation produces NaN. Infinities are legal
// log-space values and pass through; callers treat them as divergences.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::uint32_t node)
      : std::runtime_error(what + " (tape node " + std::to_string(node) + ")"),
        node_(node) {}
  std::uint32_t node() const { return node_; }

 private:
  std::uint32_t node_;
};

// Append-only record of one scalar evaluation. Nodes hold edges back to
// their parents as (parent index, local partial) pairs in flat storage.
// Input nodes occupy indices 0..n_inputs-1 and carry no edges.
class Tape {
 public:
  static constexpr std::uint32_t kNoNode = 0xFFFFFFFFu;

  std::uint32_t record(std::span<const std::uint32_t> parents,
                       std::span<const double> partials) {
    for (std::size_t i = 0; i < parents.size(); ++i) {
      parent_.push_back(parents[i]);
      partial_.push_back(partials[i]);
    }
    edge_end_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return static_cast<std::uint32_t>(edge_end_.size() - 1);
  }

  std::uint32_t record1(std::uint32_t p, double w) {
    parent_.push_back(p);
    partial_.push_back(w);
    edge_end_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return static_cast<std::uint32_t>(edge_end_.size() - 1);
  }

  std::uint32_t record2(std::uint32_t p0, double w0, std::uint32_t p1,
                        double w1) {
    parent_.push_back(p0);
    partial_.push_back(w0);
    parent_.push_back(p1);
    partial_.push_back(w1);
    edge_end_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return static_cast<std::uint32_t>(edge_end_.size() - 1);
  }

  std::uint32_t record_input() {
    if (edge_end_.size() != n_inputs_) {
      throw std::logic_error("Tape: inputs must be registered first");
    }
    ++n_inputs_;
    edge_end_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return static_cast<std::uint32_t>(edge_end_.size() - 1);
  }

  std::size_t size() const { return edge_end_.size(); }
  std::size_t n_inputs() const { return n_inputs_; }

  void clear() {
    edge_end_.clear();
    parent_.clear();
    partial_.clear();
    n_inputs_ = 0;
  }

  // Reverse sweep from `out`; writes d(out)/d(input i) into input_grads.
  void adjoints(std::uint32_t out, std::span<double> input_grads);

 private:
  std::vector<std::uint32_t> edge_end_;  // per node, one past its last edge
  std::vector<std::uint32_t> parent_;
  std::vector<double> partial_;
  std::vector<double> adj_;
  std::size_t n_inputs_ = 0;
};

namespace detail {
inline thread_local Tape* g_active_tape = nullptr;
}

inline Tape* active_tape() { return detail::g_active_tape; }

// Activates a tape for the current thread for the guard's lifetime.
class TapeGuard {
 public:
  explicit TapeGuard(Tape& tape) {
    if (detail::g_active_tape != nullptr) {
      throw std::logic_error("TapeGuard: recording is already active");
    }
    detail::g_active_tape = &tape;
  }
  ~TapeGuard() { detail::g_active_tape = nullptr; }
  TapeGuard(const TapeGuard&) = delete;
  TapeGuard& operator=(const TapeGuard&) = delete;
};

// Scalar that records onto the active tape. With no active tape, or when
// built from a plain double, it behaves as a constant.
struct Dual {
  double value = 0.0;
  std::uint32_t node = Tape::kNoNode;

  Dual() = default;
  Dual(double v) : value(v) {}  // NOLINT: implicit by design
  Dual(double v, std::uint32_t n) : value(v), node(n) {}
};

namespace detail {

inline void check_value(double value, const Tape& tape) {
  if (std::isnan(value)) {
    throw EvaluationError("non-finite value in recorded evaluation",
                          static_cast<std::uint32_t>(tape.size()));
  }
}

inline Dual make1(double value, const Dual& a, double da) {
  Tape* t = active_tape();
  if (t == nullptr || a.node == Tape::kNoNode) return {value};
  check_value(value, *t);
  return {value, t->record1(a.node, da)};
}

inline Dual make2(double value, const Dual& a, double da, const Dual& b,
                  double db) {
  Tape* t = active_tape();
  if (t == nullptr) return {value};
  if (a.node == Tape::kNoNode && b.node == Tape::kNoNode) return {value};
  check_value(value, *t);
  if (b.node == Tape::kNoNode) return {value, t->record1(a.node, da)};
  if (a.node == Tape::kNoNode) return {value, t->record1(b.node, db)};
  return {value, t->record2(a.node, da, b.node, db)};
}

inline Dual make3(double value, const Dual& a, double da, const Dual& b,
                  double db, const Dual& c, double dc) {
  Tape* t = active_tape();
  if (t == nullptr) return {value};
  std::uint32_t parents[3];
  double partials[3];
  std::size_t n = 0;
  if (a.node != Tape::kNoNode) {
    parents[n] = a.node;
    partials[n++] = da;
  }
  if (b.node != Tape::kNoNode) {
    parents[n] = b.node;
    partials[n++] = db;
  }
  if (c.node != Tape::kNoNode) {
    parents[n] = c.node;
    partials[n++] = dc;
  }
  if (n == 0) return {value};
  check_value(value, *t);
  return {value, t->record({parents, n}, {partials, n})};
}

}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return detail::make2(a.value + b.value, a, 1.0, b, 1.0);
}
inline Dual operator-(const Dual& a, const Dual& b) {
  return detail::make2(a.value - b.value, a, 1.0, b, -1.0);
}
inline Dual operator-(const Dual& a) {
  return detail::make1(-a.value, a, -1.0);
}
inline Dual operator*(const Dual& a, const Dual& b) {
  return detail::make2(a.value * b.value, a, b.value, b, a.value);
}
inline Dual operator/(const Dual& a, const Dual& b) {
  double inv = 1.0 / b.value;
  return detail::make2(a.value * inv, a, inv, b, -a.value * inv * inv);
}
inline Dual& operator+=(Dual& a, const Dual& b) { return a = a + b; }
inline Dual& operator-=(Dual& a, const Dual& b) { return a = a - b; }
inline Dual& operator*=(Dual& a, const Dual& b) { return a = a * b; }

inline Dual exp(const Dual& a) {
  double e = std::exp(a.value);
  return detail::make1(e, a, e);
}
inline Dual log(const Dual& a) {
  return detail::make1(std::log(a.value), a, 1.0 / a.value);
}
inline Dual sigmoid(const Dual& a) {
  double s = sigmoid(a.value);
  return detail::make1(s, a, s * (1.0 - s));
}

Dual log_add_exp(const Dual& a, const Dual& b);
Dual log_sum_exp(std::span<const Dual> terms);
void log_softmax(std::span<const Dual> u, std::span<Dual> out);

// Evaluates f on tape-backed inputs and returns (f(x), df/dx). The tape is
// thread-local and recycled between calls.
template <class F>
std::pair<double, std::vector<double>> grad(F&& f, std::span<const double> x) {
  thread_local Tape tape;
  thread_local std::vector<Dual> inputs;
  tape.clear();
  TapeGuard guard(tape);
  inputs.clear();
  inputs.reserve(x.size());
  for (double v : x) {
    inputs.push_back(Dual(v, tape.record_input()));
  }
  Dual out = f(std::span<const Dual>(inputs.data(), inputs.size()));
  std::vector<double> g(x.size(), 0.0);
  if (out.node != Tape::kNoNode) {
    tape.adjoints(out.node, g);
  }
  return {out.value, std::move(g)};
}

}  // namespace sdhmc
