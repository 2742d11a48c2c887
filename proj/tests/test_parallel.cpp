#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "mfk/parallel.hpp"
#include "mfk/quadrature.hpp"

TEST_CASE("fills every slot") {
  std::vector<double> out(257, -1.0);
  mfk::parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<double>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<double>(i * i));
}

TEST_CASE("serial and parallel runs produce identical bits") {
  auto work = [](std::size_t i) {
    const double k = 1.0 + 0.37 * static_cast<double>(i);
    auto r = mfk::integrate_adaptive([k](double x) { return std::sin(k * x) / (1.0 + x * x); },
                                     0.0, 8.0);
    return r.value.real();
  };
  std::vector<double> serial(24), parallel(24);
  mfk::parallel_for(serial.size(), [&](std::size_t i) { serial[i] = work(i); }, mfk::Exec::serial);
  mfk::parallel_for(parallel.size(), [&](std::size_t i) { parallel[i] = work(i); },
                    mfk::Exec::parallel);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CAPTURE(i);
    CHECK(serial[i] == parallel[i]);
  }
}

TEST_CASE("exceptions propagate out of the loop") {
  CHECK_THROWS_AS(mfk::parallel_for(8,
                                    [](std::size_t i) {
                                      if (i == 3) throw std::runtime_error("slot 3");
                                    }),
                  std::runtime_error);
}

TEST_CASE("thread cap honors the environment override") {
  CHECK(mfk::max_threads() >= 1);
  setenv("MFK_THREADS", "2", 1);
  CHECK(mfk::max_threads() == 2);
  setenv("MFK_THREADS", "junk", 1);
  CHECK(mfk::max_threads() >= 1);  // malformed values fall back to the default
  unsetenv("MFK_THREADS");
}

TEST_CASE("zero and single iteration counts") {
  int calls = 0;
  mfk::parallel_for(0, [&](std::size_t) { ++calls; });
  CHECK(calls == 0);
  mfk::parallel_for(1, [&](std::size_t) { ++calls; });
  CHECK(calls == 1);
}
