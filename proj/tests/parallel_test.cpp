#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "her2/parallel.hpp"

TEST_SUITE("parallel") {

TEST_CASE("every index runs once") {
  for (int workers : {1, 2, 8}) {
    std::vector<std::atomic<int>> hits(1000);
    her2::ParallelFor(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("lowest failing index wins regardless of workers") {
  for (int workers : {1, 3, 8}) {
    try {
      her2::ParallelFor(200, workers, [](std::size_t i) {
        if (i == 150 || i == 37 || i == 199) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "37");
    }
  }
}

TEST_CASE("zero items is a no-op") {
  her2::ParallelFor(0, 4, [](std::size_t) { FAIL("should not run"); });
}

}
