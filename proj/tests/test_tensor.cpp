#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "tssnet/errors.hpp"
#include "tssnet/tensor.hpp"

using tssnet::Tensor;

TEST_CASE("construction zero-fills and checks the shape") {
  Tensor t({2, 3});
  CHECK(t.rank() == 2);
  CHECK(t.size() == 6);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == 0.0);

  CHECK_THROWS_AS(Tensor(Tensor::Shape{}), tssnet::InvalidShape);
  CHECK_THROWS_AS(Tensor({2, 0, 3}), tssnet::InvalidShape);
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), tssnet::ShapeMismatch);
}

TEST_CASE("multi-index access is row major") {
  Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(t(0, 0) == 1.0);
  CHECK(t(0, 2) == 3.0);
  CHECK(t(1, 0) == 4.0);
  CHECK(t(1, 2) == 6.0);

  Tensor u({2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(u(0, 1, 0) == 3.0);
  CHECK(u(1, 0, 1) == 6.0);
  CHECK(u(1, 1, 1) == 8.0);

  Tensor v({1, 2, 1, 2}, {9, 8, 7, 6});
  CHECK(v(0, 1, 0, 0) == 7.0);
}

TEST_CASE("at is bounds checked, dim rejects bad axes") {
  Tensor t({2, 2}, {1, 2, 3, 4});
  CHECK(t.at(3) == 4.0);
  CHECK_THROWS_AS(t.at(4), tssnet::OutOfBounds);
  CHECK(t.dim(1) == 2);
  CHECK_THROWS_AS(t.dim(2), tssnet::OutOfBounds);
}

TEST_CASE("reshape preserves elements and count") {
  Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor r = t.reshaped({3, 2});
  CHECK(r(2, 1) == 6.0);
  CHECK_THROWS_AS(t.reshaped({4, 2}), tssnet::ShapeMismatch);
}

TEST_CASE("matmul matches a hand-worked product") {
  Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor b({3, 2}, {7, 8, 9, 10, 11, 12});
  Tensor c = tssnet::matmul(a, b);
  CHECK(c.shape() == Tensor::Shape({2, 2}));
  CHECK(c(0, 0) == 58.0);
  CHECK(c(0, 1) == 64.0);
  CHECK(c(1, 0) == 139.0);
  CHECK(c(1, 1) == 154.0);

  CHECK_THROWS_AS(tssnet::matmul(a, a), tssnet::ShapeMismatch);
  Tensor rank1({3}, {1, 2, 3});
  CHECK_THROWS_AS(tssnet::matmul(rank1, b), tssnet::ShapeMismatch);
}

TEST_CASE("elementwise helpers and their in-place forms agree") {
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor b({2, 2}, {5, 6, 7, 8});

  Tensor sum = tssnet::add(a, b);
  Tensor diff = tssnet::sub(a, b);
  Tensor prod = tssnet::mul(a, b);
  Tensor scaled = tssnet::scale(a, 2.5);
  CHECK(sum(1, 1) == 12.0);
  CHECK(diff(0, 0) == -4.0);
  CHECK(prod(1, 0) == 21.0);
  CHECK(scaled(0, 1) == 5.0);

  Tensor acc = a;
  tssnet::add_inplace(acc, b);
  for (std::size_t i = 0; i < acc.size(); ++i) CHECK(acc[i] == sum[i]);
  tssnet::scale_inplace(acc, 0.5);
  CHECK(acc(1, 1) == 6.0);

  Tensor wrong({4}, {1, 2, 3, 4});
  CHECK_THROWS_AS(tssnet::add(a, wrong), tssnet::ShapeMismatch);
  CHECK_THROWS_AS(tssnet::add_inplace(acc, wrong), tssnet::ShapeMismatch);
}

TEST_CASE("range reductions respect bounds and tie rules") {
  Tensor t({6}, {3, 1, 4, 4, 2, 0});
  CHECK(tssnet::reduce_sum(t, 1, 4) == 9.0);
  CHECK(tssnet::reduce_max(t, 0, 6) == 4.0);
  // Two equal maxima: the lower flat index wins.
  CHECK(tssnet::reduce_argmax(t, 0, 6) == 2);
  CHECK(tssnet::reduce_argmax(t) == 2);
  CHECK(tssnet::reduce_sum(t) == 14.0);

  CHECK_THROWS_AS(tssnet::reduce_sum(t, 4, 4), tssnet::OutOfBounds);
  CHECK_THROWS_AS(tssnet::reduce_max(t, 2, 7), tssnet::OutOfBounds);
  CHECK_THROWS_AS(tssnet::reduce_argmax(t, 5, 3), tssnet::OutOfBounds);
}

TEST_CASE("all_finite flags nan and infinity") {
  Tensor t({2}, {1.0, 2.0});
  CHECK(t.all_finite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
  t[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(t.all_finite());

  t.fill(0.25);
  CHECK(t.all_finite());
  CHECK(t[0] == 0.25);
}
