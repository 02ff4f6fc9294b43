#include <cmath>
#include <set>

#include "approx.hpp"
#include "doctest.h"
#include "omcool/rng.hpp"

using namespace omcool;

TEST_CASE("uniform draws lie in the open unit interval") {
  Rng r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 1e5 == rel(0.5).epsilon(0.01));
}

TEST_CASE("normal, exponential and gamma moments") {
  Rng r(2);
  const int n = 200000;
  double m = 0.0, v = 0.0, e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    m += z;
    v += z * z;
    e += r.exponential();
  }
  CHECK(std::abs(m / n) < 0.01);
  CHECK(v / n == rel(1.0).epsilon(0.01));
  CHECK(e / n == rel(1.0).epsilon(0.01));

  for (double shape : {0.5, 1.0, 7.0, 1000.0}) {
    double gm = 0.0, gv = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = r.gamma(shape);
      CHECK(x > 0.0);
      gm += x;
      gv += x * x;
    }
    gm /= n;
    gv = gv / n - gm * gm;
    CHECK(gm == rel(shape).epsilon(0.02));
    CHECK(gv == rel(shape).epsilon(0.05));
  }
}

TEST_CASE("seeded streams are reproducible and split seeds are distinct") {
  Rng a(77), b(77), c(78);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);

  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(split_seed(20, i));
  CHECK(seen.size() == 10000);
  CHECK(split_seed(20, 3) == split_seed(20, 3));
  CHECK(split_seed(20, 3) != split_seed(21, 3));
}

TEST_CASE("mt19937_64 engine output is the standard sequence") {
  // the 10000th output of a default-seeded mt19937_64 is fixed by the standard
  std::mt19937_64 e;
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
  // first output of the reference SplitMix64 generator seeded with 0
  CHECK(split_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0) == 0ULL);
}
