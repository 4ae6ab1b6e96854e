// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "reference_ops.hpp"

#include <graphfi/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphfi::ref {

namespace {

int64_t product(const std::vector<int64_t>& shape) {
    int64_t p = 1;
    for (int64_t e : shape) p *= e;
    return p;
}

template <typename T, typename F>
Tensor binary(const Tensor& a, const Tensor& b, DType out_dtype, F&& f) {
    const bool a_scalar = a.rank() == 0 && b.rank() != 0;
    const bool b_scalar = b.rank() == 0 && a.rank() != 0;
    const Tensor& shaped = b_scalar ? a : b;
    Tensor out(out_dtype, shaped.shape());
    for (int64_t i = 0; i < out.element_count(); ++i) {
        const T x = a.as<T>()[a_scalar ? 0 : static_cast<size_t>(i)];
        const T y = b.as<T>()[b_scalar ? 0 : static_cast<size_t>(i)];
        if (out_dtype == DType::Bool) {
            out.as<uint8_t>()[static_cast<size_t>(i)] = f(x, y) != 0 ? 1 : 0;
        } else {
            out.as<T>()[static_cast<size_t>(i)] = static_cast<T>(f(x, y));
        }
    }
    return out;
}

template <typename F> Tensor dispatch_binary(const Tensor& a, const Tensor& b, F&& f) {
    switch (a.dtype()) {
    case DType::F32: return binary<float>(a, b, a.dtype(), f);
    case DType::F64: return binary<double>(a, b, a.dtype(), f);
    case DType::I64: return binary<int64_t>(a, b, a.dtype(), f);
    default: throw ContractError("reference binary op: unsupported dtype");
    }
}

template <typename T> Tensor unary_f(const Tensor& a, T (*f)(T)) {
    Tensor out(a.dtype(), a.shape());
    for (int64_t i = 0; i < a.element_count(); ++i) {
        out.as<T>()[static_cast<size_t>(i)] = f(a.as<T>()[static_cast<size_t>(i)]);
    }
    return out;
}

// Materializes the zero-padded [N,H+ph,W+pw,C] buffer; a different route
// than the interpreter's bounds-checked indexing.
template <typename T>
std::vector<T> pad_nhwc(const Tensor& input, int64_t pad_top, int64_t pad_left, int64_t padded_h,
                        int64_t padded_w, T fill) {
    const auto& is = input.shape();
    std::vector<T> padded(static_cast<size_t>(is[0] * padded_h * padded_w * is[3]), fill);
    auto in = input.as<T>();
    for (int64_t b = 0; b < is[0]; ++b) {
        for (int64_t h = 0; h < is[1]; ++h) {
            for (int64_t w = 0; w < is[2]; ++w) {
                for (int64_t c = 0; c < is[3]; ++c) {
                    padded[static_cast<size_t>(
                        ((b * padded_h + h + pad_top) * padded_w + w + pad_left) * is[3] + c)] =
                        in[static_cast<size_t>(((b * is[1] + h) * is[2] + w) * is[3] + c)];
                }
            }
        }
    }
    return padded;
}

struct PadSpec {
    int64_t out_h, out_w, pad_top, pad_left, padded_h, padded_w;
};

PadSpec pad_spec(int64_t in_h, int64_t in_w, int64_t win_h, int64_t win_w, int64_t sh, int64_t sw,
                 const std::string& padding) {
    PadSpec s{};
    if (padding == "SAME") {
        s.out_h = (in_h + sh - 1) / sh;
        s.out_w = (in_w + sw - 1) / sw;
        const int64_t ph = std::max<int64_t>((s.out_h - 1) * sh + win_h - in_h, 0);
        const int64_t pw = std::max<int64_t>((s.out_w - 1) * sw + win_w - in_w, 0);
        s.pad_top = ph / 2;
        s.pad_left = pw / 2;
        s.padded_h = in_h + ph;
        s.padded_w = in_w + pw;
    } else {
        s.out_h = (in_h - win_h) / sh + 1;
        s.out_w = (in_w - win_w) / sw + 1;
        s.pad_top = 0;
        s.pad_left = 0;
        s.padded_h = in_h;
        s.padded_w = in_w;
    }
    return s;
}

template <typename T>
Tensor conv2d_impl(const Tensor& input, const Tensor& kernel, int64_t sh, int64_t sw,
                   const std::string& padding) {
    const auto& is = input.shape();
    const auto& ks = kernel.shape();
    const PadSpec s = pad_spec(is[1], is[2], ks[0], ks[1], sh, sw, padding);
    const auto padded = pad_nhwc<T>(input, s.pad_top, s.pad_left, s.padded_h, s.padded_w, T{0});
    auto kn = kernel.as<T>();

    Tensor out(input.dtype(), {is[0], s.out_h, s.out_w, ks[3]});
    auto ov = out.as<T>();
    int64_t o = 0;
    for (int64_t b = 0; b < is[0]; ++b) {
        for (int64_t y = 0; y < s.out_h; ++y) {
            for (int64_t x = 0; x < s.out_w; ++x) {
                for (int64_t co = 0; co < ks[3]; ++co) {
                    T acc = 0;
                    for (int64_t ky = 0; ky < ks[0]; ++ky) {
                        for (int64_t kx = 0; kx < ks[1]; ++kx) {
                            for (int64_t ci = 0; ci < ks[2]; ++ci) {
                                acc += padded[static_cast<size_t>(
                                           ((b * s.padded_h + y * sh + ky) * s.padded_w + x * sw +
                                            kx) *
                                               is[3] +
                                           ci)] *
                                       kn[static_cast<size_t>(
                                           ((ky * ks[1] + kx) * ks[2] + ci) * ks[3] + co)];
                            }
                        }
                    }
                    ov[static_cast<size_t>(o++)] = acc;
                }
            }
        }
    }
    return out;
}

template <typename T>
Tensor maxpool_impl(const Tensor& input, int64_t wh, int64_t ww, int64_t sh, int64_t sw,
                    const std::string& padding) {
    const auto& is = input.shape();
    const PadSpec s = pad_spec(is[1], is[2], wh, ww, sh, sw, padding);
    const T lowest = -std::numeric_limits<T>::infinity();
    const auto padded = pad_nhwc<T>(input, s.pad_top, s.pad_left, s.padded_h, s.padded_w, lowest);

    Tensor out(input.dtype(), {is[0], s.out_h, s.out_w, is[3]});
    auto ov = out.as<T>();
    int64_t o = 0;
    for (int64_t b = 0; b < is[0]; ++b) {
        for (int64_t y = 0; y < s.out_h; ++y) {
            for (int64_t x = 0; x < s.out_w; ++x) {
                for (int64_t c = 0; c < is[3]; ++c) {
                    T best = lowest;
                    for (int64_t ky = 0; ky < wh; ++ky) {
                        for (int64_t kx = 0; kx < ww; ++kx) {
                            best = std::max(
                                best,
                                padded[static_cast<size_t>(
                                    ((b * s.padded_h + y * sh + ky) * s.padded_w + x * sw + kx) *
                                        is[3] +
                                    c)]);
                        }
                    }
                    ov[static_cast<size_t>(o++)] = best;
                }
            }
        }
    }
    return out;
}

} // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    return dispatch_binary(a, b, [](auto x, auto y) { return x + y; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    return dispatch_binary(a, b, [](auto x, auto y) { return x - y; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    return dispatch_binary(a, b, [](auto x, auto y) { return x * y; });
}

Tensor equal(const Tensor& a, const Tensor& b) {
    switch (a.dtype()) {
    case DType::F32: return binary<float>(a, b, DType::Bool, [](float x, float y) { return x == y; });
    case DType::F64: return binary<double>(a, b, DType::Bool, [](double x, double y) { return x == y; });
    case DType::I64:
        return binary<int64_t>(a, b, DType::Bool, [](int64_t x, int64_t y) { return x == y; });
    case DType::Bool:
        return binary<uint8_t>(a, b, DType::Bool, [](uint8_t x, uint8_t y) { return x == y; });
    }
    throw ContractError("equal: bad dtype");
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    const int64_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    Tensor out(a.dtype(), {m, n});
    // Accumulate in double regardless of dtype; a different numeric route.
    for (int64_t i = 0; i < m; ++i) {
        for (int64_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int64_t p = 0; p < k; ++p) {
                acc += a.element_as_double(i * k + p) * b.element_as_double(p * n + j);
            }
            if (a.dtype() == DType::F32) {
                out.as<float>()[static_cast<size_t>(i * n + j)] = static_cast<float>(acc);
            } else {
                out.as<double>()[static_cast<size_t>(i * n + j)] = acc;
            }
        }
    }
    return out;
}

Tensor bias_add(const Tensor& a, const Tensor& bias) {
    Tensor out = a;
    const int64_t c = bias.shape()[0];
    for (int64_t i = 0; i < a.element_count(); ++i) {
        if (a.dtype() == DType::F32) {
            out.as<float>()[static_cast<size_t>(i)] += bias.as<float>()[static_cast<size_t>(i % c)];
        } else {
            out.as<double>()[static_cast<size_t>(i)] += bias.as<double>()[static_cast<size_t>(i % c)];
        }
    }
    return out;
}

Tensor conv2d(const Tensor& input, const Tensor& kernel, int64_t stride_h, int64_t stride_w,
              const std::string& padding) {
    return input.dtype() == DType::F32
               ? conv2d_impl<float>(input, kernel, stride_h, stride_w, padding)
               : conv2d_impl<double>(input, kernel, stride_h, stride_w, padding);
}

Tensor maxpool(const Tensor& input, int64_t win_h, int64_t win_w, int64_t stride_h,
               int64_t stride_w, const std::string& padding) {
    return input.dtype() == DType::F32
               ? maxpool_impl<float>(input, win_h, win_w, stride_h, stride_w, padding)
               : maxpool_impl<double>(input, win_h, win_w, stride_h, stride_w, padding);
}

Tensor relu(const Tensor& a) {
    if (a.dtype() == DType::F32) {
        return unary_f<float>(a, [](float v) { return std::max(v, 0.0f); });
    }
    return unary_f<double>(a, [](double v) { return std::max(v, 0.0); });
}

Tensor sigmoid(const Tensor& a) {
    if (a.dtype() == DType::F32) {
        return unary_f<float>(a, [](float v) { return 1.0f / (1.0f + std::exp(-v)); });
    }
    return unary_f<double>(a, [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Tensor softmax(const Tensor& a) {
    // Plain exp-normalize (no max subtraction); fine for small test ranges.
    Tensor out(a.dtype(), a.shape());
    const int64_t inner = a.shape().back();
    const int64_t rows = inner == 0 ? 0 : a.element_count() / inner;
    for (int64_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int64_t i = 0; i < inner; ++i) {
            sum += std::exp(a.element_as_double(r * inner + i));
        }
        for (int64_t i = 0; i < inner; ++i) {
            const double v = std::exp(a.element_as_double(r * inner + i)) / sum;
            if (a.dtype() == DType::F32) {
                out.as<float>()[static_cast<size_t>(r * inner + i)] = static_cast<float>(v);
            } else {
                out.as<double>()[static_cast<size_t>(r * inner + i)] = v;
            }
        }
    }
    return out;
}

Tensor mean(const Tensor& a, int64_t axis) {
    const auto& is = a.shape();
    std::vector<int64_t> out_shape = is;
    out_shape.erase(out_shape.begin() + axis);
    Tensor out(a.dtype(), out_shape);

    // Walk every input coordinate and scatter-add into the reduced output.
    std::vector<double> acc(static_cast<size_t>(std::max<int64_t>(out.element_count(), 1)), 0.0);
    for (int64_t i = 0; i < a.element_count(); ++i) {
        auto coords = Tensor::unravel_index(is, i);
        coords.erase(coords.begin() + axis);
        acc[static_cast<size_t>(Tensor::linear_index(out_shape, coords))] +=
            a.element_as_double(i);
    }
    for (int64_t i = 0; i < out.element_count(); ++i) {
        const double v = acc[static_cast<size_t>(i)] / static_cast<double>(is[axis]);
        if (a.dtype() == DType::F32) {
            out.as<float>()[static_cast<size_t>(i)] = static_cast<float>(v);
        } else {
            out.as<double>()[static_cast<size_t>(i)] = v;
        }
    }
    return out;
}

Tensor reshape(const Tensor& a, std::vector<int64_t> shape) {
    if (product(shape) != a.element_count()) {
        throw ContractError("reference reshape: element count mismatch");
    }
    Tensor out(a.dtype(), std::move(shape));
    std::copy(a.raw().begin(), a.raw().end(), out.raw().begin());
    return out;
}

Tensor argmax(const Tensor& a, int64_t axis) {
    const auto& is = a.shape();
    std::vector<int64_t> out_shape = is;
    out_shape.erase(out_shape.begin() + axis);
    Tensor out(DType::I64, out_shape);

    int64_t outer = 1, inner = 1;
    for (int64_t d = 0; d < axis; ++d) outer *= is[d];
    for (int64_t d = axis + 1; d < a.rank(); ++d) inner *= is[d];
    const int64_t extent = is[axis];

    for (int64_t o = 0; o < outer; ++o) {
        for (int64_t i = 0; i < inner; ++i) {
            // Backward scan with >= keeps the lowest index on ties.
            // Oracle contract: finite inputs only.
            int64_t best_idx = extent - 1;
            double best = a.element_as_double((o * extent + extent - 1) * inner + i);
            for (int64_t k = extent - 2; k >= 0; --k) {
                const double v = a.element_as_double((o * extent + k) * inner + i);
                if (v >= best) {
                    best = v;
                    best_idx = k;
                }
            }
            out.as<int64_t>()[static_cast<size_t>(o * inner + i)] = best_idx;
        }
    }
    return out;
}

Tensor random_tensor(DType dtype, const std::vector<int64_t>& shape, RngStream& rng, double lo,
                     double hi) {
    Tensor t(dtype, shape);
    for (int64_t i = 0; i < t.element_count(); ++i) {
        const double v = lo + rng.uniform_double() * (hi - lo);
        switch (dtype) {
        case DType::F32: t.as<float>()[static_cast<size_t>(i)] = static_cast<float>(v); break;
        case DType::F64: t.as<double>()[static_cast<size_t>(i)] = v; break;
        case DType::I64:
            t.as<int64_t>()[static_cast<size_t>(i)] = static_cast<int64_t>(std::llround(v));
            break;
        case DType::Bool: t.as<uint8_t>()[static_cast<size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0; break;
        }
    }
    return t;
}

double max_rel_error(const Tensor& a, const Tensor& b) {
    double worst = 0.0;
    for (int64_t i = 0; i < a.element_count(); ++i) {
        const double x = a.element_as_double(i);
        const double y = b.element_as_double(i);
        const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
        worst = std::max(worst, std::fabs(x - y) / scale);
    }
    return worst;
}

} // namespace graphfi::ref
