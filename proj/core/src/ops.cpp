// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0
//
// Operator kernels and per-node shape inference. Kernels are plain loops
// with a fixed iteration order: golden runs must be bit-identical across
// platforms, which rules out vectorized reductions with platform-dependent
// summation order.

#include "graphfi/graph.hpp"

#include "node_attrs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace graphfi {

namespace {

using detail::req_int;
using detail::req_ints;
using detail::req_str;

int64_t shape_product(const std::vector<int64_t>& shape) {
    int64_t p = 1;
    for (int64_t e : shape) p *= e;
    return p;
}

std::string shape_str(const std::vector<int64_t>& s) {
    std::string out = "[";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

void require_float(const Node& n, DType d) {
    if (!dtype_is_float(d)) {
        throw ValidationError(std::string(op_kind_name(n.kind)) + " requires F32/F64, got " +
                              dtype_name(d));
    }
}

// Elementwise binary: identical shapes, or one rank-0 scalar broadcast.
struct BroadcastPlan {
    std::vector<int64_t> shape;
    bool a_scalar = false;
    bool b_scalar = false;
};

BroadcastPlan broadcast_plan(const Node& n, const std::vector<int64_t>& a,
                             const std::vector<int64_t>& b) {
    if (a == b) return {a, false, false};
    if (a.empty()) return {b, true, false};
    if (b.empty()) return {a, false, true};
    throw ValidationError(std::string(op_kind_name(n.kind)) + " shapes are not broadcastable: " +
                          shape_str(a) + " vs " + shape_str(b));
}

int64_t conv_extent(const Node& n, int64_t in, int64_t window, int64_t stride,
                    const std::string& padding) {
    if (padding == "SAME") {
        return (in + stride - 1) / stride;
    }
    if (in < window) {
        throw ValidationError("node '" + n.id + "': input extent " + std::to_string(in) +
                              " smaller than window " + std::to_string(window) +
                              " with VALID padding");
    }
    return (in - window) / stride + 1;
}

int64_t normalize_axis(const Node& n, int64_t axis, int64_t rank) {
    if (axis < 0 || axis >= rank) {
        throw ValidationError("node '" + n.id + "': axis " + std::to_string(axis) +
                              " out of range for rank " + std::to_string(rank));
    }
    return axis;
}

} // namespace

TensorMeta infer_node_meta(const Node& n, const std::vector<TensorMeta>& in) {
    switch (n.kind) {
    case OpKind::Const:
    case OpKind::Placeholder: {
        const std::string& name = req_str(n, "dtype");
        auto dt = dtype_from_name(name);
        if (!dt) {
            throw ValidationError("node '" + n.id + "': unknown dtype '" + name + "'");
        }
        const auto& shape = req_ints(n, "shape");
        for (int64_t e : shape) {
            if (e < 0) {
                throw ValidationError("node '" + n.id + "': negative shape extent");
            }
        }
        return {*dt, shape};
    }

    case OpKind::Add:
    case OpKind::Sub:
    case OpKind::Mul: {
        if (in[0].dtype != in[1].dtype) {
            throw ValidationError(std::string(op_kind_name(n.kind)) + " input dtypes differ");
        }
        if (in[0].dtype == DType::Bool) {
            throw ValidationError(std::string(op_kind_name(n.kind)) + " does not accept Bool");
        }
        return {in[0].dtype, broadcast_plan(n, in[0].shape, in[1].shape).shape};
    }

    case OpKind::Equal: {
        if (in[0].dtype != in[1].dtype) {
            throw ValidationError("Equal input dtypes differ");
        }
        return {DType::Bool, broadcast_plan(n, in[0].shape, in[1].shape).shape};
    }

    case OpKind::MatMul: {
        require_float(n, in[0].dtype);
        if (in[0].dtype != in[1].dtype) {
            throw ValidationError("MatMul input dtypes differ");
        }
        if (in[0].shape.size() != 2 || in[1].shape.size() != 2) {
            throw ValidationError("MatMul requires rank-2 inputs");
        }
        if (in[0].shape[1] != in[1].shape[0]) {
            throw ValidationError("MatMul inner dimensions do not match: " +
                                  shape_str(in[0].shape) + " x " + shape_str(in[1].shape));
        }
        return {in[0].dtype, {in[0].shape[0], in[1].shape[1]}};
    }

    case OpKind::BiasAdd: {
        require_float(n, in[0].dtype);
        if (in[0].dtype != in[1].dtype) {
            throw ValidationError("BiasAdd input dtypes differ");
        }
        if (in[0].shape.empty() || in[1].shape.size() != 1 ||
            in[1].shape[0] != in[0].shape.back()) {
            throw ValidationError("BiasAdd requires value [...,C] and bias [C], got " +
                                  shape_str(in[0].shape) + " and " + shape_str(in[1].shape));
        }
        return {in[0].dtype, in[0].shape};
    }

    case OpKind::Conv2D: {
        require_float(n, in[0].dtype);
        if (in[0].dtype != in[1].dtype) {
            throw ValidationError("Conv2D input dtypes differ");
        }
        if (in[0].shape.size() != 4 || in[1].shape.size() != 4) {
            throw ValidationError("Conv2D requires input [N,H,W,C] and kernel [kh,kw,Cin,Cout]");
        }
        if (in[0].shape[3] != in[1].shape[2]) {
            throw ValidationError("Conv2D channel mismatch: input has " +
                                  std::to_string(in[0].shape[3]) + ", kernel expects " +
                                  std::to_string(in[1].shape[2]));
        }
        const auto& strides = req_ints(n, "strides");
        const std::string& padding = req_str(n, "padding");
        const int64_t oh = conv_extent(n, in[0].shape[1], in[1].shape[0], strides[0], padding);
        const int64_t ow = conv_extent(n, in[0].shape[2], in[1].shape[1], strides[1], padding);
        return {in[0].dtype, {in[0].shape[0], oh, ow, in[1].shape[3]}};
    }

    case OpKind::MaxPool: {
        require_float(n, in[0].dtype);
        if (in[0].shape.size() != 4) {
            throw ValidationError("MaxPool requires an [N,H,W,C] input");
        }
        const auto& window = req_ints(n, "window");
        const auto& strides = req_ints(n, "strides");
        const std::string& padding = req_str(n, "padding");
        const int64_t oh = conv_extent(n, in[0].shape[1], window[0], strides[0], padding);
        const int64_t ow = conv_extent(n, in[0].shape[2], window[1], strides[1], padding);
        return {in[0].dtype, {in[0].shape[0], oh, ow, in[0].shape[3]}};
    }

    case OpKind::ReLU:
    case OpKind::Sigmoid:
        require_float(n, in[0].dtype);
        return in[0];

    case OpKind::Softmax:
        require_float(n, in[0].dtype);
        if (in[0].shape.empty()) {
            throw ValidationError("Softmax requires rank >= 1");
        }
        return in[0];

    case OpKind::Mean: {
        require_float(n, in[0].dtype);
        const int64_t axis =
            normalize_axis(n, req_int(n, "axis"), static_cast<int64_t>(in[0].shape.size()));
        std::vector<int64_t> shape = in[0].shape;
        shape.erase(shape.begin() + axis);
        return {in[0].dtype, shape};
    }

    case OpKind::Reshape: {
        const auto& target = req_ints(n, "shape");
        for (int64_t e : target) {
            if (e < 0) {
                throw ValidationError("node '" + n.id + "': negative target extent");
            }
        }
        std::vector<int64_t> shape = target;
        if (shape_product(shape) != shape_product(in[0].shape)) {
            throw ValidationError("Reshape element count mismatch: " + shape_str(in[0].shape) +
                                  " -> " + shape_str(shape));
        }
        return {in[0].dtype, shape};
    }

    case OpKind::ArgMax: {
        if (in[0].dtype == DType::Bool) {
            throw ValidationError("ArgMax does not accept Bool");
        }
        const int64_t axis =
            normalize_axis(n, req_int(n, "axis"), static_cast<int64_t>(in[0].shape.size()));
        if (in[0].shape.empty()) {
            throw ValidationError("ArgMax requires rank >= 1");
        }
        if (in[0].shape[axis] == 0) {
            throw ValidationError("ArgMax along an empty axis");
        }
        std::vector<int64_t> shape = in[0].shape;
        shape.erase(shape.begin() + axis);
        return {DType::I64, shape};
    }
    }
    throw ValidationError("node '" + n.id + "': unhandled op kind");
}

namespace {

template <typename T, typename F>
Tensor elementwise_binary(const Node& n, const Tensor& a, const Tensor& b, F&& f) {
    const BroadcastPlan plan = broadcast_plan(n, a.shape(), b.shape());
    Tensor out(a.dtype(), plan.shape);
    auto av = a.as<T>();
    auto bv = b.as<T>();
    auto ov = out.as<T>();
    for (size_t i = 0; i < ov.size(); ++i) {
        const T x = plan.a_scalar ? av[0] : av[i];
        const T y = plan.b_scalar ? bv[0] : bv[i];
        ov[i] = f(x, y);
    }
    return out;
}

template <typename F>
Tensor dispatch_arith(const Node& n, const Tensor& a, const Tensor& b, F&& f) {
    switch (a.dtype()) {
    case DType::F32: return elementwise_binary<float>(n, a, b, f);
    case DType::F64: return elementwise_binary<double>(n, a, b, f);
    case DType::I64: return elementwise_binary<int64_t>(n, a, b, f);
    default:
        throw ValidationError(std::string(op_kind_name(n.kind)) + " does not accept Bool");
    }
}

template <typename T>
Tensor equal_kernel(const Node& n, const Tensor& a, const Tensor& b) {
    const BroadcastPlan plan = broadcast_plan(n, a.shape(), b.shape());
    Tensor out(DType::Bool, plan.shape);
    auto av = a.as<T>();
    auto bv = b.as<T>();
    auto ov = out.as<uint8_t>();
    for (size_t i = 0; i < ov.size(); ++i) {
        const T x = plan.a_scalar ? av[0] : av[i];
        const T y = plan.b_scalar ? bv[0] : bv[i];
        ov[i] = (x == y) ? 1 : 0;
    }
    return out;
}

template <typename T>
Tensor matmul_kernel(const Tensor& a, const Tensor& b) {
    const int64_t m = a.shape()[0];
    const int64_t k = a.shape()[1];
    const int64_t n = b.shape()[1];
    Tensor out(a.dtype(), {m, n});
    auto av = a.as<T>();
    auto bv = b.as<T>();
    auto ov = out.as<T>();
    for (int64_t i = 0; i < m; ++i) {
        for (int64_t j = 0; j < n; ++j) {
            T acc = 0;
            for (int64_t p = 0; p < k; ++p) {
                acc += av[i * k + p] * bv[p * n + j];
            }
            ov[i * n + j] = acc;
        }
    }
    return out;
}

template <typename T>
Tensor bias_add_kernel(const Tensor& a, const Tensor& bias) {
    Tensor out = a;
    auto ov = out.as<T>();
    auto bv = bias.as<T>();
    const int64_t c = bias.shape()[0];
    for (int64_t i = 0; i < out.element_count(); ++i) {
        ov[i] += bv[i % c];
    }
    return out;
}

struct Padding2D {
    int64_t top = 0;
    int64_t left = 0;
};

Padding2D same_padding(int64_t in_h, int64_t in_w, int64_t win_h, int64_t win_w, int64_t sh,
                       int64_t sw) {
    const int64_t out_h = (in_h + sh - 1) / sh;
    const int64_t out_w = (in_w + sw - 1) / sw;
    const int64_t pad_h = std::max<int64_t>((out_h - 1) * sh + win_h - in_h, 0);
    const int64_t pad_w = std::max<int64_t>((out_w - 1) * sw + win_w - in_w, 0);
    return {pad_h / 2, pad_w / 2};
}

template <typename T>
Tensor conv2d_kernel(const Node& n, const Tensor& input, const Tensor& kernel) {
    const auto& is = input.shape();  // [N,H,W,Cin]
    const auto& ks = kernel.shape(); // [kh,kw,Cin,Cout]
    const auto& strides = req_ints(n, "strides");
    const std::string& padding = req_str(n, "padding");
    const int64_t sh = strides[0], sw = strides[1];
    const int64_t oh = conv_extent(n, is[1], ks[0], sh, padding);
    const int64_t ow = conv_extent(n, is[2], ks[1], sw, padding);
    Padding2D pad;
    if (padding == "SAME") {
        pad = same_padding(is[1], is[2], ks[0], ks[1], sh, sw);
    }

    Tensor out(input.dtype(), {is[0], oh, ow, ks[3]});
    auto in = input.as<T>();
    auto kn = kernel.as<T>();
    auto ov = out.as<T>();

    const int64_t in_row = is[2] * is[3];
    const int64_t in_img = is[1] * in_row;
    for (int64_t b = 0; b < is[0]; ++b) {
        for (int64_t y = 0; y < oh; ++y) {
            for (int64_t x = 0; x < ow; ++x) {
                for (int64_t co = 0; co < ks[3]; ++co) {
                    T acc = 0;
                    for (int64_t ky = 0; ky < ks[0]; ++ky) {
                        const int64_t iy = y * sh + ky - pad.top;
                        if (iy < 0 || iy >= is[1]) continue; // zero-padded
                        for (int64_t kx = 0; kx < ks[1]; ++kx) {
                            const int64_t ix = x * sw + kx - pad.left;
                            if (ix < 0 || ix >= is[2]) continue;
                            for (int64_t ci = 0; ci < is[3]; ++ci) {
                                acc += in[b * in_img + iy * in_row + ix * is[3] + ci] *
                                       kn[((ky * ks[1] + kx) * ks[2] + ci) * ks[3] + co];
                            }
                        }
                    }
                    ov[((b * oh + y) * ow + x) * ks[3] + co] = acc;
                }
            }
        }
    }
    return out;
}

template <typename T>
Tensor maxpool_kernel(const Node& n, const Tensor& input) {
    const auto& is = input.shape(); // [N,H,W,C]
    const auto& window = req_ints(n, "window");
    const auto& strides = req_ints(n, "strides");
    const std::string& padding = req_str(n, "padding");
    const int64_t sh = strides[0], sw = strides[1];
    const int64_t oh = conv_extent(n, is[1], window[0], sh, padding);
    const int64_t ow = conv_extent(n, is[2], window[1], sw, padding);
    Padding2D pad;
    if (padding == "SAME") {
        pad = same_padding(is[1], is[2], window[0], window[1], sh, sw);
    }

    Tensor out(input.dtype(), {is[0], oh, ow, is[3]});
    auto in = input.as<T>();
    auto ov = out.as<T>();
    const int64_t in_row = is[2] * is[3];
    const int64_t in_img = is[1] * in_row;
    for (int64_t b = 0; b < is[0]; ++b) {
        for (int64_t y = 0; y < oh; ++y) {
            for (int64_t x = 0; x < ow; ++x) {
                for (int64_t c = 0; c < is[3]; ++c) {
                    T best = -std::numeric_limits<T>::infinity();
                    for (int64_t ky = 0; ky < window[0]; ++ky) {
                        const int64_t iy = y * sh + ky - pad.top;
                        if (iy < 0 || iy >= is[1]) continue; // padding never wins
                        for (int64_t kx = 0; kx < window[1]; ++kx) {
                            const int64_t ix = x * sw + kx - pad.left;
                            if (ix < 0 || ix >= is[2]) continue;
                            const T v = in[b * in_img + iy * in_row + ix * is[3] + c];
                            if (v > best) best = v;
                        }
                    }
                    ov[((b * oh + y) * ow + x) * is[3] + c] = best;
                }
            }
        }
    }
    return out;
}

template <typename T, typename F>
Tensor elementwise_unary(const Tensor& a, F&& f) {
    Tensor out = a;
    for (T& v : out.as<T>()) v = f(v);
    return out;
}

template <typename T>
Tensor softmax_kernel(const Tensor& a) {
    // exp-normalize along the last axis with max subtraction for stability
    Tensor out = a;
    auto ov = out.as<T>();
    const int64_t inner = a.shape().back();
    const int64_t rows = inner == 0 ? 0 : a.element_count() / inner;
    for (int64_t r = 0; r < rows; ++r) {
        T* row = ov.data() + r * inner;
        T mx = row[0];
        for (int64_t i = 1; i < inner; ++i) mx = std::max(mx, row[i]);
        T sum = 0;
        for (int64_t i = 0; i < inner; ++i) {
            row[i] = std::exp(row[i] - mx);
            sum += row[i];
        }
        for (int64_t i = 0; i < inner; ++i) row[i] /= sum;
    }
    return out;
}

template <typename T>
Tensor mean_kernel(const Node& n, const Tensor& a) {
    const int64_t rank = a.rank();
    const int64_t axis = normalize_axis(n, req_int(n, "axis"), rank);
    const auto& is = a.shape();
    std::vector<int64_t> out_shape = is;
    out_shape.erase(out_shape.begin() + axis);

    int64_t outer = 1, inner = 1;
    for (int64_t d = 0; d < axis; ++d) outer *= is[d];
    for (int64_t d = axis + 1; d < rank; ++d) inner *= is[d];
    const int64_t extent = is[axis];

    Tensor out(a.dtype(), out_shape);
    auto in = a.as<T>();
    auto ov = out.as<T>();
    for (int64_t o = 0; o < outer; ++o) {
        for (int64_t i = 0; i < inner; ++i) {
            T acc = 0;
            for (int64_t k = 0; k < extent; ++k) {
                acc += in[(o * extent + k) * inner + i];
            }
            ov[o * inner + i] = acc / static_cast<T>(extent);
        }
    }
    return out;
}

template <typename T>
Tensor argmax_kernel(const Node& n, const Tensor& a) {
    const int64_t rank = a.rank();
    const int64_t axis = normalize_axis(n, req_int(n, "axis"), rank);
    const auto& is = a.shape();
    std::vector<int64_t> out_shape = is;
    out_shape.erase(out_shape.begin() + axis);

    int64_t outer = 1, inner = 1;
    for (int64_t d = 0; d < axis; ++d) outer *= is[d];
    for (int64_t d = axis + 1; d < rank; ++d) inner *= is[d];
    const int64_t extent = is[axis];

    Tensor out(DType::I64, out_shape);
    auto in = a.as<T>();
    auto ov = out.as<int64_t>();
    for (int64_t o = 0; o < outer; ++o) {
        for (int64_t i = 0; i < inner; ++i) {
            T best = in[o * extent * inner + i];
            int64_t best_idx = 0; // lowest index wins ties
            for (int64_t k = 1; k < extent; ++k) {
                const T v = in[(o * extent + k) * inner + i];
                if (v > best) {
                    best = v;
                    best_idx = k;
                }
            }
            ov[o * inner + i] = best_idx;
        }
    }
    return out;
}

template <typename F32Fn, typename F64Fn>
Tensor dispatch_float(const Node& n, const Tensor& a, F32Fn&& f32, F64Fn&& f64) {
    switch (a.dtype()) {
    case DType::F32: return f32();
    case DType::F64: return f64();
    default:
        throw ValidationError(std::string(op_kind_name(n.kind)) + " requires F32/F64, got " +
                              dtype_name(a.dtype()));
    }
}

} // namespace

Tensor eval_node(const Node& n, const std::vector<const Tensor*>& in) {
    switch (n.kind) {
    case OpKind::Const:
    case OpKind::Placeholder:
        throw ContractError("eval_node called on a source node");

    case OpKind::Add:
        return dispatch_arith(n, *in[0], *in[1], [](auto a, auto b) { return a + b; });
    case OpKind::Sub:
        return dispatch_arith(n, *in[0], *in[1], [](auto a, auto b) { return a - b; });
    case OpKind::Mul:
        return dispatch_arith(n, *in[0], *in[1], [](auto a, auto b) { return a * b; });

    case OpKind::Equal:
        switch (in[0]->dtype()) {
        case DType::F32: return equal_kernel<float>(n, *in[0], *in[1]);
        case DType::F64: return equal_kernel<double>(n, *in[0], *in[1]);
        case DType::I64: return equal_kernel<int64_t>(n, *in[0], *in[1]);
        case DType::Bool: return equal_kernel<uint8_t>(n, *in[0], *in[1]);
        }
        break;

    case OpKind::MatMul:
        return dispatch_float(
            n, *in[0], [&] { return matmul_kernel<float>(*in[0], *in[1]); },
            [&] { return matmul_kernel<double>(*in[0], *in[1]); });

    case OpKind::BiasAdd:
        return dispatch_float(
            n, *in[0], [&] { return bias_add_kernel<float>(*in[0], *in[1]); },
            [&] { return bias_add_kernel<double>(*in[0], *in[1]); });

    case OpKind::Conv2D:
        return dispatch_float(
            n, *in[0], [&] { return conv2d_kernel<float>(n, *in[0], *in[1]); },
            [&] { return conv2d_kernel<double>(n, *in[0], *in[1]); });

    case OpKind::MaxPool:
        return dispatch_float(
            n, *in[0], [&] { return maxpool_kernel<float>(n, *in[0]); },
            [&] { return maxpool_kernel<double>(n, *in[0]); });

    case OpKind::ReLU:
        return dispatch_float(
            n, *in[0],
            [&] {
                return elementwise_unary<float>(*in[0],
                                                [](float v) { return v > 0.0f ? v : 0.0f; });
            },
            [&] {
                return elementwise_unary<double>(*in[0],
                                                 [](double v) { return v > 0.0 ? v : 0.0; });
            });

    case OpKind::Sigmoid:
        return dispatch_float(
            n, *in[0],
            [&] {
                return elementwise_unary<float>(
                    *in[0], [](float v) { return 1.0f / (1.0f + std::exp(-v)); });
            },
            [&] {
                return elementwise_unary<double>(
                    *in[0], [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
            });

    case OpKind::Softmax:
        return dispatch_float(
            n, *in[0], [&] { return softmax_kernel<float>(*in[0]); },
            [&] { return softmax_kernel<double>(*in[0]); });

    case OpKind::Mean:
        return dispatch_float(
            n, *in[0], [&] { return mean_kernel<float>(n, *in[0]); },
            [&] { return mean_kernel<double>(n, *in[0]); });

    case OpKind::Reshape: {
        const TensorMeta meta = infer_node_meta(n, {{in[0]->dtype(), in[0]->shape()}});
        Tensor out = *in[0];
        // Same flat buffer, new extents.
        Tensor reshaped(meta.dtype, meta.shape);
        std::copy(out.raw().begin(), out.raw().end(), reshaped.raw().begin());
        return reshaped;
    }

    case OpKind::ArgMax:
        switch (in[0]->dtype()) {
        case DType::F32: return argmax_kernel<float>(n, *in[0]);
        case DType::F64: return argmax_kernel<double>(n, *in[0]);
        case DType::I64: return argmax_kernel<int64_t>(n, *in[0]);
        default: throw ValidationError("ArgMax does not accept Bool");
        }
    }
    throw ContractError("eval_node: unhandled op kind");
}

} // namespace graphfi
