// SPDX-License-Identifier: Apache-2.0
//
// Derived metrics: Uhlmann fidelity, two-mode state assembly from conditional
// tomograms, the entanglement fidelity lower bound, the Bloch-sphere-averaged
// teleportation fidelity, and the photon-count-rate model.
//
// Polarization bases are fixed as D = (H+V)/sqrt(2), A = (H-V)/sqrt(2),
// L = (H-iV)/sqrt(2), R = (H+iV)/sqrt(2); the cat bases analogously,
// Theta_D/A = (Theta+ +- Theta-)/sqrt(2).

#pragma once

#include <map>
#include <vector>

#include "polarcat/fock.hpp"
#include "polarcat/protocol.hpp"

namespace polarcat {

struct MissingProjection : std::runtime_error {
    explicit MissingProjection(const std::string& what) : std::runtime_error(what) {}
};

struct NonPhysicalBound : std::runtime_error {
    explicit NonPhysicalBound(double value)
        : std::runtime_error("fidelity lower bound " + std::to_string(value) +
                             " exceeds 1") {}
};

// ---------------------------------------------------------------------------
// Fidelity

/// Uhlmann fidelity F = (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
double fidelity(const DensityOperator& rho1, const DensityOperator& rho2);
/// Pure-state shortcuts: |<a|b>|^2 and <psi| rho |psi>.
double fidelity(const FockVector& a, const FockVector& b);
double fidelity(const DensityOperator& rho, const FockVector& psi);

/// Best-fit cat amplitude: maximizes F(state, |Theta_parity(gamma)>) by scan
/// plus golden-section refinement.
struct CatFit {
    double gamma = 0.0;
    double fidelity = 0.0;
};
CatFit best_cat_fit(const FockVector& state, CatParity parity,
                    double gamma_min = 0.02, double gamma_max = 1.5);

// ---------------------------------------------------------------------------
// Conditional tomograms and two-mode assembly

enum class Pol { H, V, D, A, L, R };
const char* pol_name(Pol p);
/// Projector coefficients (a, b) of the basis state on {|H>, |V>}.
std::pair<cplx, cplx> pol_coefficients(Pol p);

/// Six (or fewer) conditional CV states with their heralding probabilities;
/// stored probability-weighted as (normalized tomogram, probability).
struct ConditionalTomogramSet {
    std::map<Pol, std::pair<DensityOperator, double>> entries;

    const std::pair<DensityOperator, double>& at(Pol p) const;
    bool has(Pol p) const { return entries.count(p) != 0; }
};

/// Exact conditional extraction from a two-mode (qubit x CV) state; the
/// round-trip inverse of assemble_two_mode.
ConditionalTomogramSet exact_conditionals(const DensityOperator& two_mode);

struct AssemblyResult {
    DensityOperator rho;      // normalized two-mode state over ("A", C)
    double clipped_mass = 0;  // eigenvalue mass removed by the PSD projection
};

/// Reassembles the two-mode state from all six conditionals:
/// diagonal blocks from H/V, the cross block from
/// rho_HV = (  <D|rho|D> - <A|rho|A> + i <L|rho|L> - i <R|rho|R> ) / 2.
AssemblyResult assemble_two_mode(const ConditionalTomogramSet& set);

// ---------------------------------------------------------------------------
// Entanglement bound

struct EntanglementBound {
    double f_lb = 0.0;       // lower bound on the fidelity with |Psi_ME>
    bool certified = false;  // f_lb > 1/2
    Eigen::Matrix2d raw_overlap;  // Gram matrix of {Theta+, Theta-} (identity)
};

/// Lower bound on <Psi_ME| rho |Psi_ME> with
/// |Psi_ME> = (|H>|Theta+> - |V>|Theta->)/sqrt(2), from the H, V, D, A
/// conditionals only: diagonal terms read off directly, the cross term
/// estimated from the D/A tomograms in the Theta_D/A basis, and the residual
/// bounded by Cauchy-Schwarz. Needs the cat amplitudes used for the basis.
EntanglementBound entanglement_bound(const ConditionalTomogramSet& set,
                                     double gamma_plus, double gamma_minus);

/// Fidelity with the phase-aligned maximally entangled state built from the
/// state's own conditional CV basis; equals (|alpha|+|beta|)^2 / 2 on pure
/// resource states with normalized branch amplitudes.
double max_entangled_fidelity(const DensityOperator& two_mode);

// ---------------------------------------------------------------------------
// Bloch-sphere teleportation fidelity

struct BlochPoint {
    double theta = 0.0;
    double phi = 0.0;
    double fidelity = 0.0;
};

struct BlochScan {
    double mean = 0.0;
    double min = 1.0;
    double max = 0.0;
    bool beats_classical = false;  // mean > 2/3
    std::vector<BlochPoint> map;
};

/// Mean teleportation fidelity of the mixture model over the Bloch sphere,
/// area-uniform grid of at least n_grid points (uniform in cos theta and phi).
/// The reference is the ideal CV-encoded input qubit
/// N(a |Theta-(gamma-)> - b |Theta+(gamma+)>) at alpha = beta; the model
/// output distorts the amplitudes by beta/alpha and mixes in the double-event
/// contaminant |Theta+><Theta+| with the input-independent weight p_dB.
BlochScan mean_bloch_fidelity(const ProtocolParams& params, int n_grid,
                              double phi_origin = 0.0);

// ---------------------------------------------------------------------------
// Photon count rates

struct RateParams {
    double R_rep = 76e6;     // laser repetition rate (Hz)
    double R_B = 4e3;        // singles rate in the Bell detector from mode B
    double R_alpha = 18e3;   // Bell-detector singles from the coherent state
    double R_beta = 6e3;     // Bell-detector singles from the squeezed state
    double eta_spcm = 0.01;  // single-photon detection efficiency
    cplx a{1.0, 0.0};        // input-state coefficients
    cplx b{0.0, 0.0};
};

struct Rates {
    double p_db = 0.0;
    double p_good = 0.0;
    double triple_rate_hz = 0.0;
};

/// p_dB = (3/2) eta R_B^2 / R^2,
/// p_good = eta R_B (|b|^2 R_alpha + |a|^2 R_beta) / R^2,
/// triple rate = R (p_good + p_dB).
Rates rates(const RateParams& params);

}  // namespace polarcat
