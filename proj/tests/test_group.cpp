#include <doctest.h>

#include "hflag/error.hpp"
#include "hflag/group.hpp"
#include "support.hpp"

using namespace hflag;

TEST_CASE("group law on basic points") {
  const auto p = compose(GroupPoint(1, 0, 0), GroupPoint(0, 1, 0));
  CHECK(p.x[0] == 1.0);
  CHECK(p.y[0] == 1.0);
  CHECK(p.t == 1.0);
  const auto c = compose(GroupPoint(0, 0, 2.5), GroupPoint(0, 0, -1.0));
  CHECK(c.t == 1.5);
  const auto left = compose(compose(GroupPoint(1, 2, 3), GroupPoint(4, 5, 6)), GroupPoint(7, 8, 9));
  const auto right = compose(GroupPoint(1, 2, 3), compose(GroupPoint(4, 5, 6), GroupPoint(7, 8, 9)));
  CHECK(max_abs_difference(left, right) == 0.0);
  // (1,2,3)(4,5,6) = (5,7,14); (5,7,14)(7,8,9) = (12,15,63)
  CHECK(left.t == 63.0);
}

TEST_CASE("inverse") {
  CHECK(max_abs_difference(inverse(identity(1)), identity(1)) == 0.0);
  const auto q = inverse(GroupPoint(1, 1, 1));
  CHECK(q.x[0] == -1.0);
  CHECK(q.y[0] == -1.0);
  CHECK(q.t == 0.0);
}

TEST_CASE("dilation and norm") {
  const auto d = dilate(GroupPoint(1, 2, 5), 3.0);
  CHECK(d.x[0] == 3.0);
  CHECK(d.y[0] == 6.0);
  CHECK(d.t == 45.0);
  CHECK(norm(GroupPoint(1, -2, 4)) == 5.0);
  CHECK(norm(identity(1)) == 0.0);
  CHECK(norm(dilate(GroupPoint(1, -2, 4), 2.0)) == 10.0);
  CHECK(homogeneous_dimension(1) == 4);
  CHECK(homogeneous_dimension(3) == 8);
  CHECK_THROWS_AS(dilate(GroupPoint(1, 2, 3), 0.0), DomainError);
  CHECK_THROWS_AS(dilate(GroupPoint(1, 2, 3), -1.0), DomainError);
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(compose(identity(1), identity(2)), DimensionError);
  CHECK_THROWS_AS(GroupPoint({1.0, 2.0}, {1.0}, 0.0), DimensionError);
}

TEST_CASE("group properties on random points") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 3u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = testsupport::random_point(rng, n, 5.0);
      const auto b = testsupport::random_point(rng, n, 5.0);
      const auto c = testsupport::random_point(rng, n, 5.0);
      CHECK(max_abs_difference(compose(compose(a, b), c), compose(a, compose(b, c))) <= 1e-12);
      CHECK(max_abs_difference(compose(a, inverse(a)), identity(n)) <= 1e-12);
      CHECK(max_abs_difference(compose(inverse(a), a), identity(n)) <= 1e-12);
      CHECK(max_abs_difference(compose(a, identity(n)), a) == 0.0);
      CHECK(max_abs_difference(compose(identity(n), a), a) == 0.0);
      const double j = testsupport::uniform(rng, 0.1, 10.0);
      CHECK(max_abs_difference(dilate(compose(a, b), j), compose(dilate(a, j), dilate(b, j))) <=
            1e-12 * 100 * j * j);
      for (double s : {0.5, 2.0, 7.0})
        CHECK(std::abs(norm(dilate(a, s)) - s * norm(a)) <= 1e-12 * s * norm(a));
    }
  }
}
