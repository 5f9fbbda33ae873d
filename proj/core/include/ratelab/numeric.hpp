#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace ratelab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Compensated (Kahan) accumulator. All reductions in this library sum in a
// fixed index order with compensation, so results are bit-stable across
// worker counts and accurate to a few ulp even over millions of terms.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(sum_i exp(xs[i])) without overflow; -inf on an empty range.
double log_sum_exp(std::span<const double> xs);

// log(sum over selected i of exp(xs[i])); `count` receives the number of
// selected terms. -inf when nothing is selected.
double log_sum_exp_if(std::span<const double> xs,
                      const std::function<bool(std::size_t)>& select,
                      long* count = nullptr);

// Runs fn(begin, end) over a fixed contiguous partition of [0, n).
// Each index must write only its own output slot; reductions happen
// afterwards in index order, so results do not depend on `workers`.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Hardware-derived default worker count, clamped to [1, 16].
int default_workers();

std::vector<double> linspace(double lo, double hi, int count);

}  // namespace ratelab
