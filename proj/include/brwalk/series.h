// Copyright 2026 The brwalk Authors.
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

#ifndef BRWALK_SERIES_H_
#define BRWALK_SERIES_H_

#include <cmath>
#include <limits>

namespace brwalk {

// sum_{k >= 0} x^k / k! for x >= 0, summed until the terms vanish.
template <typename Scalar>
Scalar exp_series(const Scalar& x) {
  using std::abs;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar sum(1), term(1);
  for (int k = 1; k < 100000; ++k) {
    term *= x / Scalar(k);
    sum += term;
    if (Scalar(k) > x && abs(term) <= eps * abs(sum)) break;
  }
  return sum;
}

template <typename Scalar>
Scalar euler() {
  return exp_series(Scalar(1));
}

// sum_{m >= 0} g(j + m) / (j (j+1) ... (j+m)) for j >= 1 and |g(i)| growing at
// most polynomially in i.
template <typename Scalar, typename Numerator>
Scalar weighted_factorial_tail(int j, Numerator&& g) {
  using std::abs;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar sum(0), weight(1);
  for (int m = 0; m < 100000; ++m) {
    weight /= Scalar(j + m);
    const Scalar term = weight * g(j + m);
    sum += term;
    if (m >= 2 && abs(term) <= eps * abs(sum)) break;
    if (weight == Scalar(0)) break;
  }
  return sum;
}

// sum_{m >= 0} x^{m+1} / (j (j+1) ... (j+m))
//   = ((j-1)! / x^{j-1}) sum_{T >= j} x^T / T!.
template <typename Scalar>
Scalar factorial_tail(int j, const Scalar& x) {
  using std::abs;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar sum(0), term(1);
  for (int m = 0; m < 100000; ++m) {
    term *= x / Scalar(j + m);
    sum += term;
    if (Scalar(j + m) > x && abs(term) <= eps * abs(sum)) break;
  }
  return sum;
}

}  // namespace brwalk

#endif  // BRWALK_SERIES_H_
