// SPDX-License-Identifier: Apache-2.0
//
// Quantum channels and measurement elements: beamsplitters, photon loss,
// polarization projectors, the Bell-state projector, and the
// visibility-degraded polarization Bell pair.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polarcat/fock.hpp"

namespace polarcat {

// ---------------------------------------------------------------------------
// Beamsplitter

enum class BsPhase {
    real_orthogonal,  // a' = sqrt(T) a1 + sqrt(R) a2, b' = -sqrt(R) a1 + sqrt(T) a2
    symmetric_i       // a' = sqrt(T) a1 + i sqrt(R) a2, b' = i sqrt(R) a1 + sqrt(T) a2
};

struct BeamsplitterSpec {
    double reflectivity = 0.0;  // intensity reflectivity
    std::pair<std::string, std::string> mode_pair;
    BsPhase phase = BsPhase::real_orthogonal;
};

/// Two-mode Fock-basis beamsplitter matrix for modes of equal dimension
/// `dim` (row-major over (n1, n2)). Exactly unitary on the subspace with
/// total photon number < dim; higher blocks are truncated.
MatrixXcd beamsplitter_matrix(const BeamsplitterSpec& spec, int dim);

/// Applies the beamsplitter; the two named modes must share a cutoff.
/// Single photons map as |1,0> -> sqrt(T)|1,0> - sqrt(R)|0,1> under the
/// real-orthogonal convention.
FockVector apply_beamsplitter(const FockVector& state, const BeamsplitterSpec& spec);

// ---------------------------------------------------------------------------
// Loss

struct LossChannel {
    double eta = 1.0;  // transmission efficiency
    std::string mode;
};

/// Kraus operators A_k = sqrt((1-eta)^k / k!) eta^{n/2} a^k, k = 0..dim-1,
/// on a single mode of dimension `dim`. Exactly trace-preserving on the
/// truncated space.
std::vector<Eigen::MatrixXd> loss_kraus_ops(double eta, int dim);

DensityOperator apply_loss(const DensityOperator& rho, const LossChannel& channel);

// ---------------------------------------------------------------------------
// Projectors

/// Projection of a dual-rail spatial mode onto a|H> + b|V>; contracts the two
/// rails against the single-photon bra a* <1,0| + b* <0,1|. Higher-photon
/// components of the rails contribute zero.
struct PolarizationProjector {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    std::string h_rail;
    std::string v_rail;

    PolarizationProjector(cplx a_, cplx b_, std::string h, std::string v);
};

/// Returns the unnormalized conditional state on the remaining modes and the
/// heralding probability (its squared norm / trace).
std::pair<FockVector, double> project_polarization(const FockVector& state,
                                                   const PolarizationProjector& proj);
std::pair<DensityOperator, double> project_polarization(const DensityOperator& state,
                                                        const PolarizationProjector& proj);

/// Bell projector <Psi^-| = (<H_a|<V_b| - <V_a|<H_b|)/sqrt(2) on two dual-rail
/// modes given by their rails.
std::pair<FockVector, double> project_bell_psi_minus(const FockVector& state,
                                                     const std::string& h_rail_a,
                                                     const std::string& v_rail_a,
                                                     const std::string& h_rail_b,
                                                     const std::string& v_rail_b);

// ---------------------------------------------------------------------------
// Sources

/// |Psi^+> Bell pair over rails (HB, VB, HD, VD) with fringe visibility V:
/// rho = V |Psi+><Psi+| + (1-V) (|HV><HV| + |VH><VH|)/2.
DensityOperator bell_pair_psi_plus(double visibility, const std::string& h_rail_b,
                                   const std::string& v_rail_b,
                                   const std::string& h_rail_d,
                                   const std::string& v_rail_d, int rail_cutoff = 2);

}  // namespace polarcat
