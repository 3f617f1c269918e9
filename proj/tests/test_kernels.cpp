#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "senskit/kernels.hpp"

using namespace senskit;

namespace {

// Brute-force membership oracle.
std::set<std::vector<int>> enumerate_ball(KernelShape shape, int tau, int nd) {
  std::set<std::vector<int>> members;
  std::vector<int> n(nd, -tau);
  while (true) {
    long r2 = 0;
    for (int v : n) r2 += long(v) * v;
    if (shape == KernelShape::rect || r2 <= long(tau) * tau) members.insert(n);
    int a = nd - 1;
    while (a >= 0 && ++n[a] > tau) n[a--] = -tau;
    if (a < 0) break;
  }
  return members;
}

}  // namespace

TEST_CASE("support sizes") {
  CHECK(make_support(KernelShape::rect, 3, 2).size() == 49);
  CHECK(make_support(KernelShape::ellipsoid, 3, 2).size() == 29);
  const KernelSupport degenerate = make_support(KernelShape::rect, 0, 2);
  CHECK(degenerate.size() == 1);
  CHECK(degenerate.offsets(0, 0) == 0);
  CHECK(degenerate.offsets(0, 1) == 0);
}

TEST_CASE("membership matches the brute-force oracle") {
  for (int nd = 1; nd <= 3; ++nd) {
    for (int tau = 0; tau <= 3; ++tau) {
      for (KernelShape shape : {KernelShape::rect, KernelShape::ellipsoid}) {
        const KernelSupport support = make_support(shape, tau, nd);
        const auto oracle = enumerate_ball(shape, tau, nd);
        REQUIRE(support.size() == Index(oracle.size()));
        for (Index i = 0; i < support.size(); ++i) {
          std::vector<int> n(nd);
          for (int a = 0; a < nd; ++a) n[std::size_t(a)] = support.offsets(i, a);
          CHECK(oracle.count(n) == 1);
        }
        if (shape == KernelShape::rect)
          CHECK(support.size() == Index(std::pow(2 * tau + 1, nd)));
      }
    }
  }
}

TEST_CASE("ellipsoid is a subset of rect, both symmetric") {
  for (int tau = 1; tau <= 4; ++tau) {
    const auto rect = enumerate_ball(KernelShape::rect, tau, 2);
    const KernelSupport ell = make_support(KernelShape::ellipsoid, tau, 2);
    std::set<std::vector<int>> seen;
    for (Index i = 0; i < ell.size(); ++i) {
      std::vector<int> n{ell.offsets(i, 0), ell.offsets(i, 1)};
      CHECK(rect.count(n) == 1);
      seen.insert(n);
    }
    for (const auto& n : seen) CHECK(seen.count({-n[0], -n[1]}) == 1);
  }
}

TEST_CASE("enumeration is lexicographic and stable") {
  const KernelSupport a = make_support(KernelShape::ellipsoid, 3, 2);
  const KernelSupport b = make_support(KernelShape::ellipsoid, 3, 2);
  CHECK((a.offsets.array() == b.offsets.array()).all());
  for (Index i = 1; i < a.size(); ++i) {
    const bool ordered = a.offsets(i - 1, 0) < a.offsets(i, 0) ||
                         (a.offsets(i - 1, 0) == a.offsets(i, 0) &&
                          a.offsets(i - 1, 1) < a.offsets(i, 1));
    CHECK(ordered);
  }
}

TEST_CASE("bad arguments") {
  CHECK_THROWS_AS(make_support(KernelShape::rect, -1, 2), DimError);
  CHECK_THROWS_AS(make_support(KernelShape::rect, 1, 0), DimError);
}
