// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include <graphfi/tensor.hpp>

#include <doctest.h>

#include <bit>
#include <cstdint>
#include <set>

using namespace graphfi;

TEST_CASE("row-major linear index round-trips with coordinate decoding") {
    const std::vector<int64_t> shape = {2, 3, 4};
    int64_t linear = 0;
    for (int64_t i = 0; i < 2; ++i) {
        for (int64_t j = 0; j < 3; ++j) {
            for (int64_t k = 0; k < 4; ++k) {
                const std::vector<int64_t> coords = {i, j, k};
                CHECK(Tensor::linear_index(shape, coords) == linear);
                CHECK(Tensor::unravel_index(shape, linear) == coords);
                ++linear;
            }
        }
    }
}

TEST_CASE("rank-0 tensor is a single-element scalar") {
    const Tensor t = Tensor::scalar_f32(7.5f);
    CHECK(t.rank() == 0);
    CHECK(t.element_count() == 1);
    CHECK(t.as<float>()[0] == 7.5f);
}

TEST_CASE("construction rejects negative extents and wrong value counts") {
    CHECK_THROWS_AS(Tensor(DType::F32, {2, -1}), BoundsError);
    CHECK_THROWS_AS(Tensor::from_f32({3}, {1.0f, 2.0f}), BoundsError);
    CHECK_THROWS_AS(Tensor::from_bool({1}, {2}), BoundsError);
}

TEST_CASE("bit_flip_element: sign bit of 1.0f gives -1.0f") {
    const Tensor t = Tensor::from_f32({1}, {1.0f});
    const Tensor flipped = bit_flip_element(t, 0, 31);
    CHECK(flipped.as<float>()[0] == -1.0f);
}

TEST_CASE("bit_flip_element: bit 0 of 0.0f gives the smallest subnormal") {
    const Tensor t = Tensor::from_f32({1}, {0.0f});
    const Tensor flipped = bit_flip_element(t, 0, 0);
    // Oracle: interpret the IEEE-754 pattern 0x00000001 with a bit cast.
    const float expected = std::bit_cast<float>(uint32_t{1});
    CHECK(flipped.as<float>()[0] == expected);
    CHECK(flipped.as<float>()[0] == doctest::Approx(1.401e-45).epsilon(1e-3));
}

TEST_CASE("bit_flip_element changes exactly one element") {
    const Tensor t = Tensor::from_f64({4}, {1.0, 2.0, 3.0, 4.0});
    const Tensor flipped = bit_flip_element(t, 2, 63);
    for (int64_t i = 0; i < 4; ++i) {
        if (i == 2) {
            CHECK(flipped.element_bits(i) != t.element_bits(i));
        } else {
            CHECK(flipped.element_bits(i) == t.element_bits(i));
        }
    }
    CHECK(flipped.as<double>()[2] == -3.0);
}

TEST_CASE("bit_flip_element is an involution") {
    RngStream rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        Tensor t(DType::F32, {5});
        for (float& v : t.as<float>()) v = rng.uniform_float() * 100.0f - 50.0f;
        const int64_t elem = static_cast<int64_t>(rng.uniform_index(5));
        const uint32_t bit = static_cast<uint32_t>(rng.uniform_index(32));
        CHECK(bit_flip_element(bit_flip_element(t, elem, bit), elem, bit).bit_identical(t));
    }
}

TEST_CASE("bit_flip_element bounds errors") {
    const Tensor t = Tensor::from_f32({2}, {0.0f, 0.0f});
    CHECK_THROWS_AS(bit_flip_element(t, 2, 0), BoundsError);
    CHECK_THROWS_AS(bit_flip_element(t, 0, 32), BoundsError);
}

TEST_CASE("Bool flips its single logical bit") {
    const Tensor t = Tensor::from_bool({2}, {1, 0});
    const Tensor flipped = bit_flip_element(t, 0, 0);
    CHECK(flipped.as<uint8_t>()[0] == 0);
    CHECK(flipped.as<uint8_t>()[1] == 0);
    CHECK_THROWS_AS(bit_flip_element(t, 0, 1), BoundsError);
}

TEST_CASE("bit_flip_all flips every element once and reports the bits") {
    const Tensor t = Tensor::from_f32({2}, {1.0f, 1.0f});
    auto [flipped, bits] = bit_flip_all(t, [](int64_t) { return 31u; });
    CHECK(flipped.as<float>()[0] == -1.0f);
    CHECK(flipped.as<float>()[1] == -1.0f);
    CHECK(bits == std::vector<uint32_t>{31, 31});

    SUBCASE("bit list length equals element count") {
        const Tensor t5 = Tensor::from_f64({5}, {1, 2, 3, 4, 5});
        RngStream rng(3);
        auto [_, bits5] = bit_flip_all(t5, rng);
        CHECK(bits5.size() == 5);
    }

    SUBCASE("applying the same bit choices twice restores the input") {
        RngStream rng(7);
        Tensor x(DType::I64, {7});
        for (int64_t& v : x.as<int64_t>()) v = static_cast<int64_t>(rng.next_u64());
        auto [once, chosen] = bit_flip_all(x, rng);
        auto [twice, _] =
            bit_flip_all(once, [&chosen](int64_t i) { return chosen[static_cast<size_t>(i)]; });
        CHECK(twice.bit_identical(x));
    }
}

TEST_CASE("zero_like zeroes every dtype and is idempotent") {
    const Tensor f = zero_like(Tensor::from_f32({3}, {1, 2, 3}));
    for (float v : f.as<float>()) CHECK(v == 0.0f);

    const Tensor s = zero_like(Tensor::scalar_f32(7.5f));
    CHECK(s.rank() == 0);
    CHECK(s.as<float>()[0] == 0.0f);

    const Tensor b = zero_like(Tensor::from_bool({2}, {1, 1}));
    for (uint8_t v : b.as<uint8_t>()) CHECK(v == 0);

    CHECK(zero_like(f).bit_identical(f));
}

TEST_CASE("rand_like: range, determinism, empty tensor, dtype errors") {
    Tensor t(DType::F64, {100});
    RngStream rng_a(42);
    RngStream rng_b(42);
    const Tensor a = rand_like(t, rng_a);
    const Tensor b = rand_like(t, rng_b);
    CHECK(a.bit_identical(b)); // same seed, same output
    for (double v : a.as<double>()) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }

    Tensor empty(DType::F32, {0});
    RngStream rng_c(1);
    CHECK(rand_like(empty, rng_c).element_count() == 0);

    Tensor ints(DType::I64, {3});
    CHECK_THROWS_AS(rand_like(ints, rng_c), UnsupportedDtypeError);
}

TEST_CASE("rand_element replaces exactly the requested element") {
    const Tensor t = Tensor::from_f32({3}, {5.0f, 5.0f, 5.0f});
    RngStream rng(9);
    const Tensor out = rand_element(t, 1, rng);
    CHECK(out.as<float>()[0] == 5.0f);
    CHECK(out.as<float>()[2] == 5.0f);
    CHECK(out.as<float>()[1] >= 0.0f);
    CHECK(out.as<float>()[1] < 1.0f);

    SUBCASE("on a single-element tensor it behaves like rand_like") {
        const Tensor one = Tensor::scalar_f32(3.0f);
        RngStream r1(5);
        RngStream r2(5);
        CHECK(rand_element(one, 0, r1).bit_identical(rand_like(one, r2)));
    }
}

TEST_CASE("uniform_index covers its range without bias artifacts") {
    RngStream rng(123);
    std::set<uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t v = rng.uniform_index(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK_THROWS_AS(rng.uniform_index(0), BoundsError);
}

TEST_CASE("bernoulli endpoints are exact") {
    RngStream rng(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(rng.bernoulli(1.0));
        CHECK_FALSE(rng.bernoulli(0.0));
    }
}
