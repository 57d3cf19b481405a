// SPDX-License-Identifier: Apache-2.0

#include "polarcat/protocol.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace polarcat {

double ProtocolParams::beta_first_order() const {
    return std::sqrt(R_tap) * std::sinh(squeeze_r);
}

namespace {

/// Tapped squeezed state over (VA, C): the splitter runs at the CV cutoff on
/// both ports so it is exactly unitary on the populated subspace; rail VA is
/// reduced to the rail cutoff afterwards. The discarded weight (three or more
/// tapped photons, ~2e-6 at default parameters) is reported, not an error, per
/// the pipeline's relaxed discarded-norm contract.
FockVector tap_state(const ProtocolParams& p, double* discarded = nullptr) {
    FockVector sv = squeezed_vacuum(p.squeeze_r, p.cutoff_cv, "C");
    FockVector va = vacuum(ModeRegister{{"VA", p.cutoff_cv}});
    FockVector joint = tensor(va, sv);
    BeamsplitterSpec tap{p.R_tap, {"VA", "C"}, p.tap_phase};
    joint = apply_beamsplitter(joint, tap);
    return truncate_mode(joint, "VA", p.pol_cutoff, 1e-4, discarded);
}

/// Omega ket over (HA, VA, C) for a given injected amplitude.
FockVector omega_ket(const ProtocolParams& p, double alpha_in,
                     double* discarded = nullptr) {
    FockVector ha = coherent(alpha_in, p.pol_cutoff, "HA");
    return tensor(ha, tap_state(p, discarded));
}

}  // namespace

double ProtocolParams::solve_alpha_in() const {
    // Omega is a product coherent_HA (x) tap_(VA,C), and a coherent state's
    // one-to-zero photon amplitude ratio is alpha_in exactly, so the
    // single-photon amplitude ratio is
    //   beta_eff/alpha_eff = |VA=1 slice| / (|VA=0 slice| alpha_in).
    const FockVector tapped = tap_state(*this);
    const double s_h = fix_mode(tapped, "VA", 0).norm();
    const double s_v = fix_mode(tapped, "VA", 1).norm();
    if (s_h <= 0.0) throw ZeroProbability("tap output has no VA-vacuum component");
    return s_v / (s_h * beta_over_alpha);
}

const FockVector& HybridState::ket() const {
    if (const auto* v = std::get_if<FockVector>(&state)) return *v;
    throw DimensionMismatch("hybrid state '" + provenance + "' is not a pure state");
}

const DensityOperator& HybridState::density() const {
    if (const auto* d = std::get_if<DensityOperator>(&state)) return *d;
    throw DimensionMismatch("hybrid state '" + provenance + "' is not a density operator");
}

HybridState prepare_omega(const ProtocolParams& params,
                          std::optional<double> alpha_in, double* discarded) {
    const double a = alpha_in ? *alpha_in : params.solve_alpha_in();
    return HybridState{omega_ket(params, a, discarded), "prepare_omega"};
}

DensityOperator extract_resource(const HybridState& omega) {
    const FockVector& om = omega.ket();
    FockVector h = fix_mode(fix_mode(om, "HA", 1), "VA", 0);  // C component with A = H
    FockVector v = fix_mode(fix_mode(om, "HA", 0), "VA", 1);  // C component with A = V
    const double total = h.squared_norm() + v.squared_norm();
    if (total <= 0.0)
        throw ZeroProbability("single-photon component of mode A vanishes");
    const long dc = h.dim();
    ModeRegister out_reg = concat(ModeRegister{{"A", 1}}, h.reg());
    VectorXcd amps(2 * dc);
    amps.segment(0, dc) = h.amps();
    amps.segment(dc, dc) = v.amps();
    amps /= amps.norm();
    return FockVector(out_reg, amps).to_density();
}

std::pair<DensityOperator, double> remote_state_prep(const HybridState& omega,
                                                     const PolarizationProjector& proj) {
    auto [cond, prob] = project_polarization(omega.ket(), proj);
    if (prob <= 0.0) throw ZeroProbability("projection has zero probability");
    return {cond.normalized().to_density(), prob};
}

namespace {

FockVector teleport_ket(const HybridState& omega, cplx a, cplx b, int pol_cutoff) {
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    // Source photon a|H> + b|V> in dual-rail mode B.
    ModeRegister breg{{"HB", pol_cutoff}, {"VB", pol_cutoff}};
    FockVector chi = FockVector::zero(breg);
    chi.amps()(breg.flatten({1, 0})) = a;
    chi.amps()(breg.flatten({0, 1})) = b;
    FockVector joint = tensor(omega.ket(), chi);
    auto [out, prob] = project_bell_psi_minus(joint, "HA", "VA", "HB", "VB");
    (void)prob;
    return out;
}

}  // namespace

std::pair<DensityOperator, double> teleport_ideal(const HybridState& omega, cplx a,
                                                  cplx b) {
    FockVector out = teleport_ket(omega, a, b, 2);
    const double prob = out.squared_norm();
    if (prob <= 0.0) throw ZeroProbability("Bell projection has zero probability");
    return {out.normalized().to_density(), prob};
}

DensityOperator teleport_realistic(const HybridState& omega, cplx a, cplx b,
                                   const ProtocolParams& params) {
    FockVector good = teleport_ket(omega, a, b, 2);
    const double p_good = good.squared_norm();
    FockVector good_h = teleport_ket(omega, 1.0, 0.0, 2);
    const double p_dB = params.ratio_pdb_pgood_at_H * good_h.squared_norm();
    if (p_good + p_dB <= 0.0)
        throw ZeroProbability("teleportation has zero total probability");

    FockVector contaminant =
        cat_state(params.gamma_plus, CatParity::plus, params.cutoff_cv, "C");
    MatrixXcd m = contaminant.to_density().matrix() * (p_dB / (p_good + p_dB));
    if (p_good > 0.0) {
        FockVector g = good.normalized();
        m += g.to_density().matrix() * (p_good / (p_good + p_dB));
    }
    return DensityOperator(contaminant.reg(), std::move(m));
}

std::pair<HybridState, double> entanglement_swap(const HybridState& omega,
                                                 const DensityOperator& bell_pair,
                                                 const ProtocolParams& params) {
    (void)params;
    // Decompose the (generally mixed) pair into its eigenensemble, run the
    // pure-state projection on each component, and reassemble.
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(bell_pair.matrix());
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();

    DensityOperator out;
    MatrixXcd acc;
    ModeRegister out_reg;
    double prob = 0.0;
    bool first = true;
    for (long i = 0; i < evals.size(); ++i) {
        if (evals(i) < 1e-14) continue;
        FockVector comp(bell_pair.reg(), evecs.col(i));
        FockVector joint = tensor(omega.ket(), comp);
        auto [proj, p] = project_bell_psi_minus(joint, "HA", "VA", "HB", "VB");
        prob += evals(i) * p;
        DensityOperator d = proj.to_density();
        if (first) {
            out_reg = d.reg();
            acc = MatrixXcd::Zero(d.dim(), d.dim());
            first = false;
        }
        acc += evals(i) * d.matrix();
    }
    if (prob <= 0.0) throw ZeroProbability("entanglement swap has zero probability");
    DensityOperator swapped(out_reg, acc / prob);
    // Remaining modes are (C, HD, VD); compress D's rails to a qubit and
    // present the state over ("D", "C").
    DensityOperator compressed = compress_dual_rail(swapped, "HD", "VD", "D");
    return {HybridState{std::move(compressed), "entanglement_swap"}, prob};
}

DensityOperator compress_dual_rail(const DensityOperator& rho,
                                   const std::string& h_rail,
                                   const std::string& v_rail,
                                   const std::string& qubit_label, double tol) {
    // Conditional blocks <pol| rho |pol'> over the one-photon rail subspace.
    auto bra = [&](int h, int v) {
        return std::vector<BraTerm>{BraTerm{1.0, {{h_rail, h}, {v_rail, v}}}};
    };
    DensityOperator hh = project_modes(rho, bra(1, 0));
    DensityOperator vv = project_modes(rho, bra(0, 1));
    const double kept = hh.trace() + vv.trace();
    if (std::abs(kept - rho.trace()) > tol * std::max(1.0, rho.trace()))
        throw DimensionMismatch("state has weight outside the one-photon rail subspace");

    // Cross block hv = <10| rho |01> from two superposition slices:
    //   sum  = (<10|+<01|) rho (|10>+|01>) = hh + vv + hv + vh
    //   isum = (<10|-i<01|) rho (|10>+i|01>) = hh + vv + i hv - i vh
    std::vector<BraTerm> both = {BraTerm{1.0, {{h_rail, 1}, {v_rail, 0}}},
                                 BraTerm{1.0, {{h_rail, 0}, {v_rail, 1}}}};
    std::vector<BraTerm> ibra = {BraTerm{1.0, {{h_rail, 1}, {v_rail, 0}}},
                                 BraTerm{cplx(0.0, 1.0), {{h_rail, 0}, {v_rail, 1}}}};
    DensityOperator sum = project_modes(rho, both);
    DensityOperator isum = project_modes(rho, ibra);
    MatrixXcd s = sum.matrix() - hh.matrix() - vv.matrix();   // hv + vh
    MatrixXcd t = isum.matrix() - hh.matrix() - vv.matrix();  // i(hv - vh)
    MatrixXcd hv = 0.5 * (s - cplx(0.0, 1.0) * t);

    const long dc = hh.dim();
    ModeRegister out_reg = concat(ModeRegister{{qubit_label, 1}}, hh.reg());
    MatrixXcd m = MatrixXcd::Zero(2 * dc, 2 * dc);
    m.block(0, 0, dc, dc) = hh.matrix();
    m.block(dc, dc, dc, dc) = vv.matrix();
    m.block(0, dc, dc, dc) = hv;
    m.block(dc, 0, dc, dc) = hv.adjoint();
    return DensityOperator(std::move(out_reg), std::move(m));
}

}  // namespace polarcat
