#include <doctest.h>

#include <random>
#include <vector>

#include "strichartz/kernels.hpp"

namespace k = strichartz::kernels;
using k::cplx;

namespace {

struct Data {
  std::vector<double> a, w, b;
  std::vector<cplx> x, y;
};

Data make(std::size_t n, std::size_t rows, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Data d;
  d.a.resize(rows * n);
  for (auto& v : d.a) v = u(rng);
  d.w.resize(n);
  for (auto& v : d.w) v = std::abs(u(rng));
  d.b.resize(n);
  for (auto& v : d.b) v = u(rng);
  d.x.resize(n);
  for (auto& v : d.x) v = {u(rng), u(rng)};
  d.y.resize(n);
  for (auto& v : d.y) v = {u(rng), u(rng)};
  return d;
}

double max_diff(const std::vector<cplx>& p, const std::vector<cplx>& q) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
  return m;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar table is always available and active can be switched") {
    CHECK(k::scalar_table().isa == k::Isa::scalar);
    const k::Isa before = k::active().isa;
    k::select(k::Isa::scalar);
    CHECK(k::active().isa == k::Isa::scalar);
    k::select(before);
    CHECK(k::name(k::Isa::avx2) == "avx2");
  }

  TEST_CASE("scalar reference kernels on a hand-checked example") {
    const k::Table& s = k::scalar_table();
    const double a[] = {1, 2, 3, 4};
    const cplx x[] = {{1, 1}, {0, -1}};
    cplx y[2];
    s.gemv(a, 2, 2, x, y);
    CHECK(y[0] == cplx(1, -1));
    CHECK(y[1] == cplx(3, -1));
    double out[2];
    s.abs2(x, out, 2);
    CHECK(out[0] == 2.0);
    CHECK(out[1] == 1.0);
    const double w[] = {0.5, 2.0};
    CHECK(s.weighted_power_sum(w, x, 2, 2) == doctest::Approx(0.5 * 4 + 2.0 * 1));
    CHECK(s.dot(a, a + 2, 2) == doctest::Approx(1 * 3 + 2 * 4));
  }

  TEST_CASE("AVX2 variants agree with the scalar reference") {
    const k::Table* v = k::avx2_table();
    if (!v) {
      MESSAGE("AVX2 variant unavailable on this machine; equivalence not exercised");
      return;
    }
    const k::Table& s = k::scalar_table();
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 97u, 1000u}) {
      CAPTURE(n);
      const std::size_t rows = 9;
      const Data d = make(n, rows, 100 + static_cast<unsigned>(n));

      std::vector<cplx> ys(rows), yv(rows);
      s.gemv(d.a.data(), rows, n, d.x.data(), ys.data());
      v->gemv(d.a.data(), rows, n, d.x.data(), yv.data());
      CHECK(max_diff(ys, yv) <= 1e-13 * static_cast<double>(n));

      std::vector<cplx> as = d.y, av = d.y;
      s.axpy(0.37, d.x.data(), as.data(), n);
      v->axpy(0.37, d.x.data(), av.data(), n);
      CHECK(max_diff(as, av) <= 1e-15);

      std::vector<cplx> ms = d.x, mv = d.x;
      s.cmul(ms.data(), d.y.data(), n);
      v->cmul(mv.data(), d.y.data(), n);
      CHECK(max_diff(ms, mv) <= 1e-15);

      std::vector<double> bs(n), bv(n);
      s.abs2(d.x.data(), bs.data(), n);
      v->abs2(d.x.data(), bv.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(bs[i] == doctest::Approx(bv[i]).epsilon(1e-15));

      for (int power = 1; power <= 3; ++power) {
        const double ps = s.weighted_power_sum(d.w.data(), d.x.data(), n, power);
        const double pv = v->weighted_power_sum(d.w.data(), d.x.data(), n, power);
        CHECK(pv == doctest::Approx(ps).epsilon(1e-13));
      }
      CHECK(v->dot(d.a.data(), d.b.data(), n) == doctest::Approx(s.dot(d.a.data(), d.b.data(), n)).epsilon(1e-13));
    }
  }
}
