#include <doctest.h>

#include <cmath>

#include "smecorr/rng.hpp"

using namespace smecorr;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Random123 kat_vectors for philox4x32-10
    {
        const auto out = rng::philox4x32({0, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                         {0xffffffffu, 0xffffffffu});
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const auto out = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                         {0xa4093822u, 0x299f31d0u});
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("streams are addressable and reproducible") {
    const auto s1 = rng::Stream::for_trajectory(1234, 7);
    const auto s2 = rng::Stream::for_trajectory(1234, 7);
    const auto s3 = rng::Stream::for_trajectory(1234, 8);
    CHECK(s1.uniform(10, 0, 0) == s2.uniform(10, 0, 0));
    CHECK(s1.normal(99, 2, 0) == s2.normal(99, 2, 0));
    CHECK(s1.uniform(10, 0, 0) != s3.uniform(10, 0, 0));
    // replay out of order
    const double a = s1.uniform(5, 1, 0);
    (void)s1.uniform(6, 1, 0);
    CHECK(s1.uniform(5, 1, 0) == a);
}

TEST_CASE("uniform and normal draws have sane statistics") {
    const auto s = rng::Stream::for_trajectory(99, 0);
    const int n = 200000;
    double mean_u = 0.0, mean_n = 0.0, var_n = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = s.uniform(k, 0, 0);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        mean_u += u;
        const double z = s.normal(k, 1, 0);
        mean_n += z;
        var_n += z * z;
    }
    mean_u /= n;
    mean_n /= n;
    var_n = var_n / n - mean_n * mean_n;
    CHECK(std::abs(mean_u - 0.5) < 4.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(mean_n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var_n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
