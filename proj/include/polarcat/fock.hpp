// SPDX-License-Identifier: Apache-2.0
//
// Truncated-Fock-space states and operators: multimode amplitude vectors and
// density matrices with labeled modes, elementary bosonic constructors, and
// the tensor/trace/contraction algebra the protocol pipelines are built on.
//
// Conventions used throughout the project:
//   - quadrature operator  x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2),
//     vacuum variance 1/2;
//   - multimode amplitudes are stored row-major: the first mode in the
//     register is the slowest index;
//   - squeezed vacuum is oriented so the anti-squeezed quadrature is x at
//     theta = 0 (even Fock amplitudes all positive), which makes it the
//     low-amplitude approximation of the even cat state along +x.

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polarcat {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors

struct UnknownMode : std::runtime_error {
    explicit UnknownMode(const std::string& label)
        : std::runtime_error("unknown mode: " + label) {}
};

struct CutoffTooSmall : std::runtime_error {
    CutoffTooSmall(double discarded, double limit)
        : std::runtime_error("truncated norm loss " + std::to_string(discarded) +
                             " exceeds " + std::to_string(limit)) {}
};

struct DegenerateCat : std::runtime_error {
    DegenerateCat() : std::runtime_error("odd cat state undefined at gamma = 0") {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroProbability : std::runtime_error {
    explicit ZeroProbability(const std::string& what) : std::runtime_error(what) {}
};

// Default constructor truncation policy: discarding more norm than this is an
// error, not a warning.
inline constexpr double kMaxDiscardedNorm = 1e-6;

// ---------------------------------------------------------------------------
// ModeRegister

struct Mode {
    std::string label;
    int cutoff = 0;  // max photon number, inclusive

    int dim() const { return cutoff + 1; }
};

/// Ordered list of labeled modes with per-mode cutoffs. Labels are unique,
/// cutoffs >= 1.
class ModeRegister {
  public:
    ModeRegister() = default;
    ModeRegister(std::initializer_list<Mode> modes);
    explicit ModeRegister(std::vector<Mode> modes);

    int n_modes() const { return static_cast<int>(modes_.size()); }
    const Mode& mode(int i) const { return modes_.at(i); }
    const std::vector<Mode>& modes() const { return modes_; }

    /// Position of a label; throws UnknownMode.
    int position(const std::string& label) const;
    bool contains(const std::string& label) const;

    /// Total Hilbert-space dimension, prod(cutoff_i + 1).
    long dim() const;

    /// Row-major flattening of an occupation tuple (first mode slowest).
    long flatten(const std::vector<int>& ns) const;
    std::vector<int> unflatten(long index) const;

    bool operator==(const ModeRegister& other) const;

  private:
    void validate() const;
    std::vector<Mode> modes_;
};

ModeRegister concat(const ModeRegister& a, const ModeRegister& b);

// ---------------------------------------------------------------------------
// FockVector

/// Pure multimode state on a truncated Fock space.
class FockVector {
  public:
    FockVector() = default;
    FockVector(ModeRegister reg, VectorXcd amps);

    /// All-amplitudes-zero state (not normalizable; used for annihilated vacuum).
    static FockVector zero(ModeRegister reg);

    const ModeRegister& reg() const { return reg_; }
    const VectorXcd& amps() const { return amps_; }
    VectorXcd& amps() { return amps_; }
    long dim() const { return amps_.size(); }

    cplx amp(const std::vector<int>& ns) const { return amps_(reg_.flatten(ns)); }

    double norm() const { return amps_.norm(); }
    double squared_norm() const { return amps_.squaredNorm(); }

    /// In-place normalization; throws ZeroProbability on a zero vector.
    FockVector& normalize();
    FockVector normalized() const;

    /// Outer product |psi><psi| (unnormalized if the vector is).
    class DensityOperator to_density() const;

  private:
    ModeRegister reg_;
    VectorXcd amps_;
};

// ---------------------------------------------------------------------------
// DensityOperator

/// Multimode density operator; intermediate unnormalized operators carry
/// their true trace (used as event probabilities).
class DensityOperator {
  public:
    DensityOperator() = default;
    DensityOperator(ModeRegister reg, MatrixXcd m);

    static DensityOperator identity(ModeRegister reg);

    const ModeRegister& reg() const { return reg_; }
    const MatrixXcd& matrix() const { return m_; }
    MatrixXcd& matrix() { return m_; }
    long dim() const { return m_.rows(); }

    double trace() const { return m_.trace().real(); }

    DensityOperator& normalize();
    DensityOperator normalized() const;

    /// Checks Hermiticity (1e-10 elementwise), unit trace (1e-10) and
    /// spectrum >= -1e-8; throws on violation.
    void validate(bool require_unit_trace = true) const;

  private:
    ModeRegister reg_;
    MatrixXcd m_;
};

// ---------------------------------------------------------------------------
// Constructors
//
// Each constructor reports the norm it discarded to truncation through
// `discarded` (if non-null) and throws CutoffTooSmall when that exceeds
// `max_discard`. Outputs are renormalized and deterministic.

FockVector vacuum(const ModeRegister& reg);

FockVector coherent(cplx gamma, int cutoff, const std::string& label = "C",
                    double max_discard = kMaxDiscardedNorm,
                    double* discarded = nullptr);

FockVector squeezed_vacuum(double r, int cutoff, const std::string& label = "C",
                           double max_discard = kMaxDiscardedNorm,
                           double* discarded = nullptr);

enum class CatParity { plus, minus };

FockVector cat_state(double gamma, CatParity parity, int cutoff,
                     const std::string& label = "C",
                     double max_discard = kMaxDiscardedNorm,
                     double* discarded = nullptr);

// ---------------------------------------------------------------------------
// Operations

/// Photon annihilation on one mode; result is unnormalized
/// (squared norm = <n> of the input on that mode).
FockVector annihilate(const FockVector& state, const std::string& mode);
DensityOperator annihilate(const DensityOperator& state, const std::string& mode);

FockVector tensor(const FockVector& a, const FockVector& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Trace out everything except `keep` (order of `keep` defines the output order).
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);

cplx overlap(const FockVector& a, const FockVector& b);

/// Applies `op` (dimension = product of the named modes' dims, row-major in
/// the order given) to a state: psi -> U psi, rho -> U rho U^dag.
FockVector apply_matrix(const FockVector& state, const MatrixXcd& op,
                        const std::vector<std::string>& modes);
DensityOperator apply_matrix(const DensityOperator& state, const MatrixXcd& op,
                             const std::vector<std::string>& modes);

/// Contraction with <n| on one mode: returns the (unnormalized) state on the
/// remaining modes.
FockVector fix_mode(const FockVector& state, const std::string& mode, int n);

/// One bra term of a projector: coefficient times <n_1,...,n_k| on the named
/// modes (all terms of a projector must name the same modes).
struct BraTerm {
    cplx coeff;
    std::vector<std::pair<std::string, int>> occupations;
};

/// Contracts the state against sum_i coeff_i <n_i| over the named modes.
/// Returns the unnormalized state on the remaining modes; its squared norm is
/// the projection probability. The density overload applies K rho K^dag.
FockVector project_modes(const FockVector& state, const std::vector<BraTerm>& bras);
DensityOperator project_modes(const DensityOperator& state,
                              const std::vector<BraTerm>& bras);

double mean_photon(const FockVector& state, const std::string& mode);
double mean_photon(const DensityOperator& state, const std::string& mode);

/// Lowers the cutoff of one mode, discarding higher occupations. Throws
/// CutoffTooSmall if the discarded norm exceeds max_discard; renormalizes.
FockVector truncate_mode(const FockVector& state, const std::string& mode,
                         int new_cutoff, double max_discard = kMaxDiscardedNorm,
                         double* discarded = nullptr);

}  // namespace polarcat
