// SPDX-License-Identifier: Apache-2.0
//
// Homodyne measurement simulation and maximum-likelihood state
// reconstruction.
//
// Quadrature convention: x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2),
// vacuum variance 1/2, so <n|x_theta> = e^{i n theta} psi_n(x) with
// psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)).
//
// Detection inefficiency is part of the measurement model: sampling applies
// the loss channel to the state, and the reconstruction POVM is the adjoint
// loss channel applied to the ideal quadrature projectors,
// Pi_{theta,x} = Lambda_eta^dag(|x_theta><x_theta|), so the estimator returns
// the pre-loss state.

#pragma once

#include <functional>
#include <vector>

#include "polarcat/fock.hpp"

namespace polarcat {

struct QuadratureSample {
    double theta = 0.0;  // phase in [0, pi)
    double x = 0.0;      // quadrature value
};

struct TomographySettings {
    int n_samples = 2500;
    std::vector<double> phase_grid;  // empty -> 12 uniform phases in [0, pi)
    double eta = 0.55;               // efficiency folded into the POVM
    int cutoff = 14;
    int max_iters = 2000;
    double log_likelihood_tol = 1e-9;  // relative improvement threshold
    unsigned long long seed = 12345;

    std::vector<double> phases() const;
};

struct ReconstructionResult {
    DensityOperator rho;
    int iterations = 0;
    double final_log_likelihood = 0.0;
    bool converged = false;
    std::vector<double> log_likelihood_trace;
};

/// Homodyne marginal pr(x | theta) = <x_theta| rho |x_theta> of a single-mode
/// state; integrates to 1 over the real line.
class QuadraturePdf {
  public:
    QuadraturePdf(const DensityOperator& rho, double theta);
    double operator()(double x) const;

  private:
    Eigen::MatrixXd re_rho_theta_;
};

QuadraturePdf quadrature_pdf(const DensityOperator& rho, double theta);

/// Hermite-function values psi_0..psi_{nmax-1} at x.
VectorXd hermite_psi(double x, int nmax);

/// Sampling grid used by both the sampler and its tests.
inline constexpr int kSampleGridPoints = 4096;
inline constexpr double kSampleGridMin = -6.0;
inline constexpr double kSampleGridMax = 6.0;

/// Applies the loss channel at settings.eta, then draws samples: phases
/// round-robin from the grid, values by inverse CDF on the fixed 4096-point
/// grid. Deterministic for a given seed.
std::vector<QuadratureSample> sample_quadratures(const DensityOperator& rho,
                                                 const TomographySettings& settings);

/// Iterative maximum-likelihood reconstruction, rho <- N[R(rho) rho R(rho)]
/// with R = sum_j Pi_j / pr_j over the efficiency-corrected POVM elements.
/// The log-likelihood is non-decreasing across iterations; hitting max_iters
/// clears `converged` but still returns the estimate.
ReconstructionResult maxlik_reconstruct(const std::vector<QuadratureSample>& samples,
                                        const TomographySettings& settings);

struct WignerGrid {
    double x_min = -5.0, x_max = 5.0;
    double p_min = -5.0, p_max = 5.0;
    int n = 101;
};

/// Wigner function on a grid, W(i,j) = W(x_i, p_j), from the displaced-parity
/// form W(alpha) = (1/pi) tr[rho D(alpha) (-1)^n D(-alpha)], alpha = (x+ip)/sqrt(2),
/// evaluated through its closed-form Laguerre kernel (exact for truncated rho).
Eigen::MatrixXd wigner(const DensityOperator& rho, const WignerGrid& grid);

/// Single-point evaluation (same kernel).
double wigner_point(const DensityOperator& rho, double x, double p);

}  // namespace polarcat
