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

#include "brwalk/rules.h"

#include <random>

#include <gtest/gtest.h>

#include "brwalk/errors.h"
#include "random_games.h"

namespace brwalk {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

TEST(WelfareRuleTest, BentValues) {
  const WelfareRule w = make_welfare_rule(family::Bent{1, 0.5}, 3);
  EXPECT_EQ(w.values(), vec({1.0, 1.5, 2.0}));
  EXPECT_DOUBLE_EQ(w.tail_slope(), 0.5);
  EXPECT_DOUBLE_EQ(w(5), 3.0);
  EXPECT_EQ(w(0), 0.0);
}

TEST(WelfareRuleTest, SetCoveringValues) {
  const WelfareRule w = make_welfare_rule(family::SetCovering{}, 4);
  EXPECT_EQ(w.values(), vec({1, 1, 1, 1}));
  EXPECT_EQ(w.tail_slope(), 0.0);
  EXPECT_TRUE(is_set_covering(w));
}

TEST(WelfareRuleTest, WtaValues) {
  const WelfareRule w = make_welfare_rule(family::Wta{0.5}, 3);
  EXPECT_EQ(w.values(), vec({0.5, 0.75, 0.875}));
  EXPECT_DOUBLE_EQ(w.tail_slope(), 0.0625);
}

TEST(WelfareRuleTest, RejectsBadParameters) {
  EXPECT_THROW(make_welfare_rule(family::Bent{0, 0.5}, 3), ValidationError);
  EXPECT_THROW(make_welfare_rule(family::Bent{1, 1.5}, 3), ValidationError);
  EXPECT_THROW(make_welfare_rule(family::Wta{0.0}, 3), ValidationError);
  EXPECT_THROW(make_welfare_rule(family::Explicit{vec({1, 3}), 0.0}, 3),
               ValidationError);
  EXPECT_THROW(make_welfare_rule(family::Explicit{vec({1, 0.5}), 0.0}, 3),
               ValidationError);
  EXPECT_THROW(make_welfare_rule(family::SetCovering{}, 0), ValidationError);
}

TEST(UtilityRuleTest, RejectsIncreasingUnlessUnrestricted) {
  EXPECT_THROW(UtilityRule(vec({1, 1.2}), 1.2), ValidationError);
  EXPECT_THROW(UtilityRule(vec({1, -0.5}), 0.0), ValidationError);
  const UtilityRule f = UtilityRule::Unrestricted(vec({1, 1.2}), 1.2);
  EXPECT_FALSE(f.nonincreasing());
  EXPECT_DOUBLE_EQ(f(7), 1.2);
}

TEST(CurvatureTest, NamedRules) {
  EXPECT_DOUBLE_EQ(curvature(make_welfare_rule(family::Bent{1, 0.3}, 4)), 0.3);
  EXPECT_DOUBLE_EQ(curvature(make_welfare_rule(family::SetCovering{}, 4)), 1.0);
  EXPECT_DOUBLE_EQ(curvature(make_welfare_rule(family::Wta{0.5}, 60)), 1.0);
}

TEST(CurvatureTest, BentGridIsExact) {
  for (int b = 1; b <= 10; ++b) {
    for (int k = 0; k <= 20; ++k) {
      const double C = 0.05 * k;
      const WelfareRule w = make_welfare_rule(family::Bent{b, C}, 12);
      EXPECT_NEAR(curvature(w), C, 1e-15) << "b=" << b << " C=" << C;
    }
  }
}

TEST(AsBentTest, RecognizesFamilies) {
  auto bent = as_bent(make_welfare_rule(family::Bent{3, 0.4}, 8));
  ASSERT_TRUE(bent.has_value());
  EXPECT_EQ(bent->b, 3);
  EXPECT_NEAR(bent->C, 0.4, 1e-12);
  bent = as_bent(make_welfare_rule(family::SetCovering{}, 3));
  ASSERT_TRUE(bent.has_value());
  EXPECT_EQ(bent->b, 1);
  EXPECT_DOUBLE_EQ(bent->C, 1.0);
  EXPECT_FALSE(as_bent(make_welfare_rule(family::Harmonic{}, 5)).has_value());
}

TEST(ConvertRuleTest, Examples) {
  EXPECT_TRUE(convert_rule(Conversion::kToMarginal, vec({1, 1.5, 1.5}))
                  .isApprox(vec({1, 0.5, 0})));
  EXPECT_EQ(convert_rule(Conversion::kToCumulative, vec({1, 0, 0})), vec({1, 1, 1}));
  const Eigen::VectorXd w = vec({1, 1.8, 2.2});
  EXPECT_LE((convert_rule(Conversion::kToCumulative,
                          convert_rule(Conversion::kToMarginal, w)) -
             w).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_THROW(convert_rule(Conversion::kToMarginal, vec({1, 1.2, 2.0})),
               ValidationError);
}

TEST(ConvertRuleTest, RoundTripOnRandomRules) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd w = testing::random_welfare(rng, size(rng)).values();
    const Eigen::VectorXd back = convert_rule(
        Conversion::kToCumulative, convert_rule(Conversion::kToMarginal, w));
    ASSERT_LE((back - w).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
}  // namespace brwalk
