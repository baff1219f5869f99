#include <cmath>
#include <set>

#include "doctest.h"
#include "pfrac/rng.hpp"

using namespace pfrac;

TEST_CASE("derive_seed is a pure function that separates indices") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seen.insert(derive_seed(42, i));
    }
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("uniform stays in [0, 1) and below stays in range") {
    Rng rng(3);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        REQUIRE(rng.below(7) < 7);
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
}

TEST_CASE("normal variates have unit moments") {
    Rng rng(11);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("same seed replays the same stream") {
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(a.next() == b.next());
        REQUIRE(a.normal() == b.normal());
    }
}
