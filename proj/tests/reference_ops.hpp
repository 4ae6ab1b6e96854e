// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0
//
// Naive reference implementations used as oracles by the test suites.
// Deliberately independent of the interpreter kernels: padding is
// materialized instead of index-clamped, argmax scans backwards, softmax
// skips the max-subtraction trick. Test-only code.

#pragma once

#include <graphfi/graph.hpp>
#include <graphfi/rng.hpp>
#include <graphfi/tensor.hpp>

#include <string>
#include <vector>

namespace graphfi::ref {

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor equal(const Tensor& a, const Tensor& b);
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor bias_add(const Tensor& a, const Tensor& bias);
Tensor conv2d(const Tensor& input, const Tensor& kernel, int64_t stride_h, int64_t stride_w,
              const std::string& padding);
Tensor maxpool(const Tensor& input, int64_t win_h, int64_t win_w, int64_t stride_h,
               int64_t stride_w, const std::string& padding);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor softmax(const Tensor& a);
Tensor mean(const Tensor& a, int64_t axis);
Tensor reshape(const Tensor& a, std::vector<int64_t> shape);
Tensor argmax(const Tensor& a, int64_t axis);

/// Uniform random tensor with elements in [lo, hi).
Tensor random_tensor(DType dtype, const std::vector<int64_t>& shape, RngStream& rng,
                     double lo = -4.0, double hi = 4.0);

/// Largest |a-b| / max(1, |a|, |b|) over all elements (elementwise compare).
double max_rel_error(const Tensor& a, const Tensor& b);

} // namespace graphfi::ref
