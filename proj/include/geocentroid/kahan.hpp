#pragma once

#include <cmath>

namespace geocentroid {

/// Compensated (Kahan-Neumaier) running sum. Tracks the rounding error of
/// every addition and folds it back into the reported value, so long streams
/// of small increments do not drift.
template <typename T>
struct KahanSum {
  T sum{};
  T compensation{};

  void add(T value) {
    const T t = sum + value;
    if (std::abs(sum) >= std::abs(value)) {
      compensation += (sum - t) + value;
    } else {
      compensation += (value - t) + sum;
    }
    sum = t;
  }

  KahanSum& operator+=(T value) {
    add(value);
    return *this;
  }

  void merge(const KahanSum& other) {
    add(other.sum);
    add(other.compensation);
  }

  T value() const { return sum + compensation; }
};

}  // namespace geocentroid
