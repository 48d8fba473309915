#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/kernel.hpp"

namespace hmfsvm {
namespace {

TEST(Kernel, FamiliesMatchClosedForms) {
  const Vector x{1.0, 2.0, -1.0};
  const Vector y{0.5, -1.0, 3.0};
  EXPECT_DOUBLE_EQ(eval_kernel({KernelFamily::Linear, 7.0, 3.0}, x, y), 0.5 - 2.0 - 3.0);
  EXPECT_DOUBLE_EQ(eval_kernel({KernelFamily::Rbf, 0.1, 0.0}, x, y),
                   std::exp(-0.1 * (0.25 + 9.0 + 16.0)));
  EXPECT_DOUBLE_EQ(eval_kernel({KernelFamily::Sigmoid, 0.2, -0.5}, x, y),
                   std::tanh(0.2 * -4.5 - 0.5));
}

TEST(Kernel, ParseNames) {
  EXPECT_EQ(parse_kernel_family("rbf"), KernelFamily::Rbf);
  EXPECT_EQ(parse_kernel_family("tanh"), KernelFamily::Sigmoid);
  EXPECT_EQ(to_string(KernelFamily::Linear), "linear");
  EXPECT_THROW(parse_kernel_family("poly"), ConfigError);
}

TEST(Kernel, ValidateRejectsBadParameters) {
  EXPECT_THROW((KernelSpec{KernelFamily::Rbf, 0.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((KernelSpec{KernelFamily::Rbf, -1.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((KernelSpec{KernelFamily::Sigmoid, 1.0, NAN}.validate()), ConfigError);
  EXPECT_NO_THROW((KernelSpec{KernelFamily::Sigmoid, 1.0, -2.0}.validate()));
}

TEST(Kernel, DimensionMismatchThrows) {
  const Vector a{1.0, 2.0};
  const Vector b{1.0};
  EXPECT_THROW(eval_kernel({KernelFamily::Linear, 1.0, 0.0}, a, b), InputError);
  EXPECT_THROW(gram({KernelFamily::Linear, 1.0, 0.0}, {a, b}), InputError);
  EXPECT_THROW(gram({KernelFamily::Linear, 1.0, 0.0}, {}), InputError);
}

TEST(Kernel, GramIsExactlySymmetricAndMatchesPointwise) {
  std::mt19937_64 rng(3);
  for (KernelFamily family : {KernelFamily::Linear, KernelFamily::Rbf, KernelFamily::Sigmoid}) {
    const KernelSpec spec{family, 0.37, -0.2};
    std::vector<Vector> pts;
    for (int i = 0; i < 9; ++i) pts.push_back(testing::uniform_values(3, -2.0, 2.0, rng));
    const GramMatrix g = gram(spec, pts);
    ASSERT_EQ(g.size(), pts.size());
    EXPECT_TRUE(g.all_finite());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        EXPECT_EQ(g(i, j), g(j, i));
        EXPECT_DOUBLE_EQ(g(i, j), eval_kernel(spec, pts[i], pts[j]));
        EXPECT_EQ(g.row(i)[j], g(i, j));
      }
    }
  }
}

TEST(Kernel, RbfDiagonalIsOne) {
  std::mt19937_64 rng(8);
  std::vector<Vector> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(testing::uniform_values(4, -5.0, 5.0, rng));
  const GramMatrix g = gram({KernelFamily::Rbf, 2.0, 0.0}, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(g(i, i), 1.0);
}

}  // namespace
}  // namespace hmfsvm
