// SPDX-License-Identifier: Apache-2.0
//
// Hot inner-loop kernels for the tomography reconstruction: dense real dot
// products and weighted accumulation over POVM matrices. Scalar reference
// implementations plus an AVX2/FMA variant selected at runtime; the variants
// are equivalence-tested against each other.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace polarcat::kernels {

enum class Backend { scalar, avx2 };

/// sum_i x_i * y_i
double dot(std::span<const double> x, std::span<const double> y);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// Reference implementations, always scalar (the oracle side of the
/// equivalence tests).
double dot_ref(std::span<const double> x, std::span<const double> y);
void axpy_ref(double a, std::span<const double> x, std::span<double> y);

/// Backend picked at startup from CPU capabilities.
Backend active_backend();
const char* backend_name(Backend b);

/// Overrides dispatch (tests only); nullopt restores auto-detection.
void force_backend(std::optional<Backend> b);

}  // namespace polarcat::kernels
