#include <catch_amalgamated.hpp>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "qhj/parallel.hpp"

using namespace qhj;

TEST_CASE("every index runs exactly once", "[parallel]") {
  for (auto exec : {Execution::Serial, Execution::Parallel}) {
    std::vector<int> hits(1000, 0);
    for_each_index(exec, hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) REQUIRE(h == 1);
  }
  CHECK(max_threads() >= 1);
}

TEST_CASE("exceptions reach the caller", "[parallel]") {
  for (auto exec : {Execution::Serial, Execution::Parallel}) {
    std::atomic<int> ran{0};
    CHECK_THROWS_AS(for_each_index(exec, 100,
                                   [&](std::size_t i) {
                                     ++ran;
                                     if (i == 37) throw std::domain_error("boom");
                                   }),
                    std::domain_error);
    CHECK(ran > 0);
  }
}

TEST_CASE("empty range is a no-op", "[parallel]") {
  for_each_index(Execution::Parallel, 0, [](std::size_t) { FAIL("called"); });
}
