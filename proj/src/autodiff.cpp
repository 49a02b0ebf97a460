#include "sdhmc/autodiff.hpp"

namespace sdhmc {

void Tape::adjoints(std::uint32_t out, std::span<double> input_grads) {
  if (out >= edge_end_.size()) {
    throw std::logic_error("Tape::adjoints: output node out of range");
  }
  if (input_grads.size() < n_inputs_) {
    throw std::logic_error("Tape::adjoints: gradient buffer too small");
  }
  adj_.assign(edge_end_.size(), 0.0);
  adj_[out] = 1.0;
  for (std::uint32_t i = static_cast<std::uint32_t>(edge_end_.size()); i-- > 0;) {
    double a = adj_[i];
    if (a == 0.0) continue;
    std::uint32_t begin = i == 0 ? 0 : edge_end_[i - 1];
    for (std::uint32_t e = begin; e < edge_end_[i]; ++e) {
      adj_[parent_[e]] += a * partial_[e];
    }
  }
  for (std::size_t i = 0; i < n_inputs_; ++i) {
    input_grads[i] = adj_[i];
  }
}

Dual log_add_exp(const Dual& a, const Dual& b) {
  eval_counters().lse_terms += 2;
  if (a.value == kNegInf && b.value == kNegInf) return {kNegInf};
  double hi = a.value > b.value ? a.value : b.value;
  double ea = std::exp(a.value - hi);
  double eb = std::exp(b.value - hi);
  double value = hi + std::log(ea + eb);
  double norm = ea + eb;
  return detail::make2(value, a, ea / norm, b, eb / norm);
}

Dual log_sum_exp(std::span<const Dual> terms) {
  if (terms.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  eval_counters().lse_terms += terms.size();
  double hi = kNegInf;
  for (const Dual& t : terms) {
    if (t.value > hi) hi = t.value;
  }
  if (hi == kNegInf) return {kNegInf};
  double norm = 0.0;
  for (const Dual& t : terms) {
    norm += std::exp(t.value - hi);
  }
  double value = hi + std::log(norm);

  Tape* tape = active_tape();
  if (tape == nullptr) return {value};
  thread_local std::vector<std::uint32_t> parents;
  thread_local std::vector<double> partials;
  parents.clear();
  partials.clear();
  for (const Dual& t : terms) {
    if (t.node == Tape::kNoNode) continue;
    parents.push_back(t.node);
    partials.push_back(std::exp(t.value - hi) / norm);
  }
  if (parents.empty()) return {value};
  detail::check_value(value, *tape);
  return {value, tape->record(parents, partials)};
}

void log_softmax(std::span<const Dual> u, std::span<Dual> out) {
  if (u.size() != out.size()) {
    throw std::invalid_argument("log_softmax: size mismatch");
  }
  Dual norm = log_sum_exp(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = u[i] - norm;
  }
}

}  // namespace sdhmc
