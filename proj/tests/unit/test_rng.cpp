#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "core/parallel.hpp"
#include "core/rng.hpp"

using namespace rmtlab;

TEST_CASE("philox matches the published known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> xa, xb, xc, xd;
  for (int i = 0; i < 64; ++i) {
    xa.push_back(a.next_u64());
    xb.push_back(b.next_u64());
    xc.push_back(c.next_u64());
    xd.push_back(d.next_u64());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  CHECK(xa != xd);
  // Children are functions of (seed, stream, tag) only.
  CHECK(a.child(3).stream_id() == RngStream(42, 7).child(3).stream_id());
  CHECK(a.child(3).stream_id() != a.child(4).stream_id());
}

TEST_CASE("uniforms lie in the open unit interval with the right moments") {
  RngStream r(1, 2);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  CHECK(s / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(s2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.005));
}

TEST_CASE("ziggurat normals: moments and a 3-sigma tail") {
  RngStream r(3, 4);
  const int n = 1000000;
  double m1 = 0, m2 = 0, m4 = 0;
  int tail = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
    if (x > 3.0) ++tail;
  }
  CHECK(std::abs(m1 / n) < 5e-3);
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.005));
  CHECK(m4 / n == doctest::Approx(3.0).epsilon(0.02));
  const double p = 0.5 * std::erfc(3.0 / std::sqrt(2.0));
  CHECK(std::abs(tail / double(n) - p) < 5.0 * std::sqrt(p / n));
}

TEST_CASE("parallel_for results do not depend on the worker count") {
  auto run = [](unsigned threads) {
    set_thread_count(threads);
    std::vector<double> out(257);
    parallel_for(out.size(), [&](std::size_t i) {
      RngStream r = RngStream(9, 0).child(i);
      double s = 0.0;
      for (int k = 0; k < 100; ++k) s += r.normal();
      out[i] = s;
    });
    return out;
  };
  const auto one = run(1), three = run(3), eight = run(8);
  set_thread_count(1);
  CHECK(one == three);
  CHECK(one == eight);
}

TEST_CASE("parallel_for visits every index once and rethrows worker errors") {
  set_thread_count(4);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::set<int>(hits.begin(), hits.end()) == std::set<int>{1});
  CHECK_THROWS(parallel_for(10, [](std::size_t i) {
    if (i == 5) throw std::runtime_error("boom");
  }));
  set_thread_count(1);
}
