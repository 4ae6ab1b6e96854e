// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "graphfi/dtype.hpp"
#include "graphfi/errors.hpp"
#include "graphfi/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace graphfi {

/// Shaped, typed, flat row-major numeric value. Tensors are immutable values
/// once handed out by an operation: every transform below returns a fresh
/// tensor, so sharing across concurrent workers is safe.
///
/// A rank-0 tensor holds exactly one element and is the "scalar" that the
/// scalar fault type applies to.
class Tensor {
public:
    /// Rank-0 F32 zero.
    Tensor() : Tensor(DType::F32, {}) {}

    /// Zero-initialized tensor of the given dtype and shape.
    Tensor(DType dtype, std::vector<int64_t> shape);

    static Tensor from_f32(std::vector<int64_t> shape, const std::vector<float>& values);
    static Tensor from_f64(std::vector<int64_t> shape, const std::vector<double>& values);
    static Tensor from_i64(std::vector<int64_t> shape, const std::vector<int64_t>& values);
    static Tensor from_bool(std::vector<int64_t> shape, const std::vector<uint8_t>& values);

    static Tensor scalar_f32(float v) { return from_f32({}, {v}); }
    static Tensor scalar_f64(double v) { return from_f64({}, {v}); }
    static Tensor scalar_i64(int64_t v) { return from_i64({}, {v}); }

    DType dtype() const { return dtype_; }
    const std::vector<int64_t>& shape() const { return shape_; }
    int64_t rank() const { return static_cast<int64_t>(shape_.size()); }
    int64_t element_count() const { return element_count_; }

    /// Typed view of the flat buffer. T must match the dtype
    /// (float/F32, double/F64, int64_t/I64, uint8_t/Bool).
    template <typename T> std::span<T> as();
    template <typename T> std::span<const T> as() const;

    std::span<std::byte> raw() { return {data_.data(), data_.size()}; }
    std::span<const std::byte> raw() const { return {data_.data(), data_.size()}; }

    /// Element value widened to double (Bool reads as 0/1).
    double element_as_double(int64_t i) const;

    /// Stored bit pattern of one element, zero-extended to 64 bits.
    uint64_t element_bits(int64_t i) const;

    /// Exact bitwise equality: dtype, shape and every stored byte.
    bool bit_identical(const Tensor& other) const {
        return dtype_ == other.dtype_ && shape_ == other.shape_ && data_ == other.data_;
    }
    friend bool operator==(const Tensor& a, const Tensor& b) { return a.bit_identical(b); }

    std::string shape_str() const;

    /// Row-major linear index of a coordinate; round-trips with unravel_index.
    static int64_t linear_index(std::span<const int64_t> shape, std::span<const int64_t> coords);
    static std::vector<int64_t> unravel_index(std::span<const int64_t> shape, int64_t linear);

private:
    void check_element(int64_t i) const;

    DType dtype_;
    std::vector<int64_t> shape_;
    int64_t element_count_ = 0;
    std::vector<std::byte> data_;

    friend Tensor bit_flip_element(const Tensor&, int64_t, uint32_t);
    friend std::pair<Tensor, std::vector<uint32_t>>
    bit_flip_all(const Tensor&, const std::function<uint32_t(int64_t)>&);
    friend Tensor rand_element(const Tensor&, int64_t, RngStream&);
};

/// Flip exactly one bit of exactly one element; everything else is
/// bit-identical. Applying the same flip twice restores the input.
Tensor bit_flip_element(const Tensor& t, int64_t elem, uint32_t bit);

/// Flip one bit in every element; the per-element bit index comes from
/// `bit_chooser` and the chosen indices are returned for the fault record.
std::pair<Tensor, std::vector<uint32_t>>
bit_flip_all(const Tensor& t, const std::function<uint32_t(int64_t)>& bit_chooser);

/// bit_flip_all with bits drawn uniformly over the dtype's bit width.
std::pair<Tensor, std::vector<uint32_t>> bit_flip_all(const Tensor& t, RngStream& rng);

/// Same dtype/shape, all elements zero (false for Bool).
Tensor zero_like(const Tensor& t);

/// Every element independently uniform on [0,1). F32/F64 only.
Tensor rand_like(const Tensor& t, RngStream& rng);

/// Exactly one element replaced by a uniform [0,1) draw. F32/F64 only.
Tensor rand_element(const Tensor& t, int64_t elem, RngStream& rng);

} // namespace graphfi
