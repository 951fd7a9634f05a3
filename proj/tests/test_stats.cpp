// tests/test_stats.cpp

// Copyright 2026  The wordgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// The t distribution helpers against Boost.Math as reference.

#include <boost/math/distributions/students_t.hpp>
#include <gtest/gtest.h>

#include "wordgeom/stats.hpp"

namespace wordgeom::stats {
namespace {

TEST(StudentT, CdfAgreesWithReference) {
  for (double dof : {1.0, 2.0, 3.0, 4.0, 7.0, 10.0, 30.0, 120.0}) {
    boost::math::students_t ref(dof);
    for (double t : {-8.0, -3.1, -1.0, -0.2, 0.0, 0.4, 1.5, 2.2, 4.0, 12.0})
      EXPECT_NEAR(student_t_cdf(t, dof), boost::math::cdf(ref, t), 1e-10) << dof << " " << t;
  }
}

TEST(StudentT, QuantileAgreesWithReference) {
  for (double dof : {1.0, 2.0, 4.0, 9.0, 29.0, 200.0}) {
    boost::math::students_t ref(dof);
    for (double p : {0.6, 0.9, 0.975, 0.995})
      EXPECT_NEAR(student_t_quantile(p, dof), boost::math::quantile(ref, p), 1e-8) << dof << " " << p;
  }
}

TEST(StudentT, TableValues) {
  EXPECT_NEAR(student_t_quantile(0.975, 1), 12.706, 5e-4);
  EXPECT_NEAR(student_t_quantile(0.975, 4), 2.776, 5e-4);
}

TEST(StudentT, TwoTailedP) {
  EXPECT_NEAR(student_t_two_tailed_p(0.0, 5), 1.0, 1e-12);
  boost::math::students_t ref(8);
  EXPECT_NEAR(student_t_two_tailed_p(2.5, 8), 2 * boost::math::cdf(boost::math::complement(ref, 2.5)),
              1e-10);
  EXPECT_NEAR(student_t_two_tailed_p(-2.5, 8), student_t_two_tailed_p(2.5, 8), 1e-15);
}

TEST(IncompleteBeta, Boundaries) {
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 1.0), 1.0);
  // I_x(1, 1) = x; I_x(a, 1) = x^a.
  EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-14);
  EXPECT_NEAR(incomplete_beta(3, 1, 0.5), 0.125, 1e-14);
}

}  // namespace
}  // namespace wordgeom::stats
