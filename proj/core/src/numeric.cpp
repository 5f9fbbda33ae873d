#include "ratelab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ratelab {

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kNegInf;
  double mx = kNegInf;
  for (double x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;  // all -inf, or a +inf term
  KahanSum acc;
  for (double x : xs) acc.add(std::exp(x - mx));
  return mx + std::log(acc.value());
}

double log_sum_exp_if(std::span<const double> xs,
                      const std::function<bool(std::size_t)>& select,
                      long* count) {
  double mx = kNegInf;
  long n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (select(i)) {
      mx = std::max(mx, xs[i]);
      ++n;
    }
  }
  if (count != nullptr) *count = n;
  if (n == 0) return kNegInf;
  if (!std::isfinite(mx)) return mx;
  KahanSum acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (select(i)) acc.add(std::exp(xs[i] - mx));
  }
  return mx + std::log(acc.value());
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t w = workers <= 1 ? 1 : static_cast<std::size_t>(workers);
  w = std::min(w, n);
  if (w == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::size_t chunk = (n + w - 1) / w;
  for (std::size_t k = 0; k < w; ++k) {
    std::size_t b = k * chunk;
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

int default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return static_cast<int>(std::min(hw, 16u));
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    out.push_back(lo + (hi - lo) * i / (count - 1));
  }
  return out;
}

}  // namespace ratelab
