// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/tensor.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <sstream>

namespace graphfi {

namespace {

int64_t checked_element_count(const std::vector<int64_t>& shape) {
    int64_t count = 1;
    for (int64_t extent : shape) {
        if (extent < 0) {
            throw BoundsError("tensor extent must be non-negative, got " + std::to_string(extent));
        }
        if (extent != 0 && count > std::numeric_limits<int64_t>::max() / extent) {
            throw BoundsError("tensor element count overflows int64");
        }
        count *= extent;
    }
    return count;
}

template <typename T>
Tensor from_values(DType dtype, std::vector<int64_t> shape, const std::vector<T>& values) {
    Tensor t(dtype, std::move(shape));
    if (static_cast<int64_t>(values.size()) != t.element_count()) {
        throw BoundsError("value count " + std::to_string(values.size()) +
                          " does not match element count " + std::to_string(t.element_count()));
    }
    std::memcpy(t.raw().data(), values.data(), values.size() * sizeof(T));
    return t;
}

} // namespace

Tensor::Tensor(DType dtype, std::vector<int64_t> shape)
    : dtype_(dtype),
      shape_(std::move(shape)),
      element_count_(checked_element_count(shape_)),
      data_(static_cast<size_t>(element_count_ * dtype_size(dtype))) {}

Tensor Tensor::from_f32(std::vector<int64_t> shape, const std::vector<float>& values) {
    return from_values(DType::F32, std::move(shape), values);
}

Tensor Tensor::from_f64(std::vector<int64_t> shape, const std::vector<double>& values) {
    return from_values(DType::F64, std::move(shape), values);
}

Tensor Tensor::from_i64(std::vector<int64_t> shape, const std::vector<int64_t>& values) {
    return from_values(DType::I64, std::move(shape), values);
}

Tensor Tensor::from_bool(std::vector<int64_t> shape, const std::vector<uint8_t>& values) {
    for (uint8_t v : values) {
        if (v > 1) {
            throw BoundsError("Bool tensor values must be 0 or 1");
        }
    }
    return from_values(DType::Bool, std::move(shape), values);
}

namespace {
template <typename T> constexpr DType dtype_of();
template <> constexpr DType dtype_of<float>() { return DType::F32; }
template <> constexpr DType dtype_of<double>() { return DType::F64; }
template <> constexpr DType dtype_of<int64_t>() { return DType::I64; }
template <> constexpr DType dtype_of<uint8_t>() { return DType::Bool; }
} // namespace

template <typename T> std::span<T> Tensor::as() {
    if (dtype_ != dtype_of<T>()) {
        throw ContractError(std::string("typed access with wrong dtype; tensor is ") +
                            dtype_name(dtype_));
    }
    return {reinterpret_cast<T*>(data_.data()), static_cast<size_t>(element_count_)};
}

template <typename T> std::span<const T> Tensor::as() const {
    if (dtype_ != dtype_of<T>()) {
        throw ContractError(std::string("typed access with wrong dtype; tensor is ") +
                            dtype_name(dtype_));
    }
    return {reinterpret_cast<const T*>(data_.data()), static_cast<size_t>(element_count_)};
}

template std::span<float> Tensor::as<float>();
template std::span<double> Tensor::as<double>();
template std::span<int64_t> Tensor::as<int64_t>();
template std::span<uint8_t> Tensor::as<uint8_t>();
template std::span<const float> Tensor::as<float>() const;
template std::span<const double> Tensor::as<double>() const;
template std::span<const int64_t> Tensor::as<int64_t>() const;
template std::span<const uint8_t> Tensor::as<uint8_t>() const;

void Tensor::check_element(int64_t i) const {
    if (i < 0 || i >= element_count_) {
        throw BoundsError("element index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(element_count_) + ")");
    }
}

double Tensor::element_as_double(int64_t i) const {
    check_element(i);
    switch (dtype_) {
    case DType::F32: return as<float>()[static_cast<size_t>(i)];
    case DType::F64: return as<double>()[static_cast<size_t>(i)];
    case DType::I64: return static_cast<double>(as<int64_t>()[static_cast<size_t>(i)]);
    case DType::Bool: return as<uint8_t>()[static_cast<size_t>(i)] ? 1.0 : 0.0;
    }
    return 0.0;
}

uint64_t Tensor::element_bits(int64_t i) const {
    check_element(i);
    const int64_t width = dtype_size(dtype_);
    uint64_t bits = 0;
    std::memcpy(&bits, data_.data() + static_cast<size_t>(i * width), static_cast<size_t>(width));
    return bits;
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < shape_.size(); ++i) {
        if (i) os << ',';
        os << shape_[i];
    }
    os << ']';
    return os.str();
}

int64_t Tensor::linear_index(std::span<const int64_t> shape, std::span<const int64_t> coords) {
    if (shape.size() != coords.size()) {
        throw BoundsError("coordinate rank does not match shape rank");
    }
    int64_t idx = 0;
    for (size_t d = 0; d < shape.size(); ++d) {
        if (coords[d] < 0 || coords[d] >= shape[d]) {
            throw BoundsError("coordinate " + std::to_string(coords[d]) + " out of extent " +
                              std::to_string(shape[d]));
        }
        idx = idx * shape[d] + coords[d];
    }
    return idx;
}

std::vector<int64_t> Tensor::unravel_index(std::span<const int64_t> shape, int64_t linear) {
    std::vector<int64_t> coords(shape.size());
    for (size_t d = shape.size(); d-- > 0;) {
        coords[d] = linear % shape[d];
        linear /= shape[d];
    }
    return coords;
}

Tensor bit_flip_element(const Tensor& t, int64_t elem, uint32_t bit) {
    t.check_element(elem);
    const uint32_t width = dtype_bit_width(t.dtype());
    if (bit >= width) {
        throw BoundsError("bit index " + std::to_string(bit) + " out of range [0, " +
                          std::to_string(width) + ") for dtype " + dtype_name(t.dtype()));
    }
    Tensor out = t;
    const int64_t size = dtype_size(t.dtype());
    auto* bytes = reinterpret_cast<uint8_t*>(out.data_.data() + static_cast<size_t>(elem * size));
    bytes[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    return out;
}

std::pair<Tensor, std::vector<uint32_t>>
bit_flip_all(const Tensor& t, const std::function<uint32_t(int64_t)>& bit_chooser) {
    const uint32_t width = dtype_bit_width(t.dtype());
    const int64_t size = dtype_size(t.dtype());
    Tensor out = t;
    std::vector<uint32_t> bits;
    bits.reserve(static_cast<size_t>(t.element_count()));
    for (int64_t i = 0; i < t.element_count(); ++i) {
        const uint32_t bit = bit_chooser(i);
        if (bit >= width) {
            throw BoundsError("chosen bit " + std::to_string(bit) + " out of range for dtype " +
                              dtype_name(t.dtype()));
        }
        auto* bytes = reinterpret_cast<uint8_t*>(out.data_.data() + static_cast<size_t>(i * size));
        bytes[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        bits.push_back(bit);
    }
    return {std::move(out), std::move(bits)};
}

std::pair<Tensor, std::vector<uint32_t>> bit_flip_all(const Tensor& t, RngStream& rng) {
    const uint64_t width = dtype_bit_width(t.dtype());
    return bit_flip_all(t, [&rng, width](int64_t) {
        return static_cast<uint32_t>(rng.uniform_index(width));
    });
}

Tensor zero_like(const Tensor& t) {
    return Tensor(t.dtype(), t.shape());
}

Tensor rand_like(const Tensor& t, RngStream& rng) {
    if (!dtype_is_float(t.dtype())) {
        throw UnsupportedDtypeError(std::string("rand_like requires a float dtype, got ") +
                                    dtype_name(t.dtype()));
    }
    Tensor out(t.dtype(), t.shape());
    if (t.dtype() == DType::F32) {
        for (float& v : out.as<float>()) v = rng.uniform_float();
    } else {
        for (double& v : out.as<double>()) v = rng.uniform_double();
    }
    return out;
}

Tensor rand_element(const Tensor& t, int64_t elem, RngStream& rng) {
    if (!dtype_is_float(t.dtype())) {
        throw UnsupportedDtypeError(std::string("rand_element requires a float dtype, got ") +
                                    dtype_name(t.dtype()));
    }
    t.check_element(elem);
    Tensor out = t;
    if (t.dtype() == DType::F32) {
        out.as<float>()[static_cast<size_t>(elem)] = rng.uniform_float();
    } else {
        out.as<double>()[static_cast<size_t>(elem)] = rng.uniform_double();
    }
    return out;
}

} // namespace graphfi
