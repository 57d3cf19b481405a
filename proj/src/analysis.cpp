// SPDX-License-Identifier: Apache-2.0

#include "polarcat/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace polarcat {

// ---------------------------------------------------------------------------
// Fidelity

namespace {

MatrixXcd matrix_sqrt_psd(const MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityOperator& rho1, const DensityOperator& rho2) {
    if (rho1.dim() != rho2.dim())
        throw DimensionMismatch("fidelity between states of different dimension");
    const MatrixXcd s = matrix_sqrt_psd(rho1.matrix());
    MatrixXcd m = s * rho2.matrix() * s;
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    // Eigenvalues that are pure roundoff would contribute sqrt(noise) each;
    // clip below the solver's resolution.
    const double thr = 1e-13 * std::max(es.eigenvalues().maxCoeff(), 0.0);
    double tr = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > thr) tr += std::sqrt(es.eigenvalues()(i));
    return std::min(tr * tr, 1.0 + 1e-12);
}

double fidelity(const FockVector& a, const FockVector& b) {
    return std::norm(overlap(a, b));
}

double fidelity(const DensityOperator& rho, const FockVector& psi) {
    if (rho.dim() != psi.dim())
        throw DimensionMismatch("fidelity between states of different dimension");
    return (psi.amps().adjoint() * rho.matrix() * psi.amps())(0).real();
}

CatFit best_cat_fit(const FockVector& state, CatParity parity, double gamma_min,
                    double gamma_max) {
    const int cutoff = state.reg().mode(0).cutoff;
    auto score = [&](double g) {
        // Loose truncation bound here: a poorly-supported candidate just fits
        // badly, it should not abort the scan.
        return fidelity(state, cat_state(g, parity, cutoff, state.reg().mode(0).label,
                                         1e-2));
    };
    const int n_coarse = 300;
    double best_g = gamma_min, best_f = -1.0;
    for (int i = 0; i <= n_coarse; ++i) {
        const double g = gamma_min + (gamma_max - gamma_min) * i / n_coarse;
        if (parity == CatParity::minus && g <= 0.0) continue;
        const double f = score(g);
        if (f > best_f) {
            best_f = f;
            best_g = g;
        }
    }
    // Golden-section refinement around the coarse optimum.
    const double step = (gamma_max - gamma_min) / n_coarse;
    double lo = std::max(gamma_min, best_g - step);
    double hi = std::min(gamma_max, best_g + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = score(c), fd = score(d);
    while (hi - lo > 1e-8) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = score(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = score(d);
        }
    }
    const double g = 0.5 * (lo + hi);
    return CatFit{g, score(g)};
}

// ---------------------------------------------------------------------------
// Conditional tomograms

const char* pol_name(Pol p) {
    switch (p) {
        case Pol::H: return "H";
        case Pol::V: return "V";
        case Pol::D: return "D";
        case Pol::A: return "A";
        case Pol::L: return "L";
        case Pol::R: return "R";
    }
    return "?";
}

std::pair<cplx, cplx> pol_coefficients(Pol p) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (p) {
        case Pol::H: return {1.0, 0.0};
        case Pol::V: return {0.0, 1.0};
        case Pol::D: return {s, s};
        case Pol::A: return {s, -s};
        case Pol::L: return {s, cplx(0.0, -s)};
        case Pol::R: return {s, cplx(0.0, s)};
    }
    throw DimensionMismatch("bad polarization label");
}

const std::pair<DensityOperator, double>& ConditionalTomogramSet::at(Pol p) const {
    auto it = entries.find(p);
    if (it == entries.end())
        throw MissingProjection(std::string("missing conditional for ") + pol_name(p));
    return it->second;
}

namespace {

/// Complete bases must see the same total probability (within 5%); checks
/// every present pair and nonnegativity.
void validate_tomogram_set(const ConditionalTomogramSet& set) {
    for (const auto& [pol, entry] : set.entries)
        if (entry.second < 0.0)
            throw DimensionMismatch(std::string("negative probability for ") +
                                    pol_name(pol));
    std::vector<double> totals;
    for (auto basis : {std::pair{Pol::H, Pol::V}, {Pol::D, Pol::A}, {Pol::L, Pol::R}})
        if (set.has(basis.first) && set.has(basis.second))
            totals.push_back(set.at(basis.first).second + set.at(basis.second).second);
    for (std::size_t i = 1; i < totals.size(); ++i) {
        const double ref = std::max(totals[0], 1e-300);
        if (std::abs(totals[i] - totals[0]) > 0.05 * ref)
            throw DimensionMismatch("conditional-basis probability totals disagree");
    }
}

}  // namespace

ConditionalTomogramSet exact_conditionals(const DensityOperator& two_mode) {
    if (two_mode.reg().n_modes() != 2 || two_mode.reg().mode(0).cutoff != 1)
        throw DimensionMismatch("expected a (qubit x CV) two-mode state");
    const std::string q = two_mode.reg().mode(0).label;
    ConditionalTomogramSet set;
    for (Pol p : {Pol::H, Pol::V, Pol::D, Pol::A, Pol::L, Pol::R}) {
        auto [a, b] = pol_coefficients(p);
        std::vector<BraTerm> bras = {BraTerm{a, {{q, 0}}}, BraTerm{b, {{q, 1}}}};
        DensityOperator cond = project_modes(two_mode, bras);
        const double prob = cond.trace();
        if (prob > 0.0) cond.normalize();
        set.entries.emplace(p, std::make_pair(std::move(cond), prob));
    }
    return set;
}

AssemblyResult assemble_two_mode(const ConditionalTomogramSet& set) {
    for (Pol p : {Pol::H, Pol::V, Pol::D, Pol::A, Pol::L, Pol::R}) set.at(p);
    validate_tomogram_set(set);

    auto weighted = [&](Pol p, Pol partner) {
        const auto& [rho, prob] = set.at(p);
        const double total = prob + set.at(partner).second;
        if (total <= 0.0)
            throw MissingProjection(std::string("zero total probability in basis of ") +
                                    pol_name(p));
        return MatrixXcd(rho.matrix() * (prob / total));
    };

    const MatrixXcd hh = weighted(Pol::H, Pol::V);
    const MatrixXcd vv = weighted(Pol::V, Pol::H);
    const MatrixXcd dd = weighted(Pol::D, Pol::A);
    const MatrixXcd aa = weighted(Pol::A, Pol::D);
    const MatrixXcd ll = weighted(Pol::L, Pol::R);
    const MatrixXcd rr = weighted(Pol::R, Pol::L);
    const MatrixXcd hv =
        0.5 * (dd - aa + cplx(0.0, 1.0) * ll - cplx(0.0, 1.0) * rr);

    const long dc = hh.rows();
    const ModeRegister creg = set.at(Pol::H).first.reg();
    ModeRegister out_reg = concat(ModeRegister{{"A", 1}}, creg);
    MatrixXcd m(2 * dc, 2 * dc);
    m.block(0, 0, dc, dc) = hh;
    m.block(dc, dc, dc, dc) = vv;
    m.block(0, dc, dc, dc) = hv;
    m.block(dc, 0, dc, dc) = hv.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();

    AssemblyResult result;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-6) {
        VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
        result.clipped_mass = (clipped - es.eigenvalues()).sum();
        m = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    }
    DensityOperator rho(out_reg, m);
    rho.normalize();
    result.rho = std::move(rho);
    return result;
}

// ---------------------------------------------------------------------------
// Entanglement bound

EntanglementBound entanglement_bound(const ConditionalTomogramSet& set,
                                     double gamma_plus, double gamma_minus) {
    for (Pol p : {Pol::H, Pol::V, Pol::D, Pol::A}) set.at(p);
    validate_tomogram_set(set);

    const ModeRegister creg = set.at(Pol::H).first.reg();
    const int cutoff = creg.mode(0).cutoff;
    const std::string label = creg.mode(0).label;
    // Basis cats truncated to the tomogram cutoff stay valid (normalized,
    // opposite parity) projectors, so a loose discard bound is fine here.
    const FockVector tp = cat_state(gamma_plus, CatParity::plus, cutoff, label, 1e-3);
    const FockVector tm = cat_state(gamma_minus, CatParity::minus, cutoff, label, 1e-3);

    EntanglementBound out;
    out.raw_overlap << 1.0, std::abs(overlap(tp, tm)), std::abs(overlap(tm, tp)), 1.0;

    FockVector td = tp, ta = tp;
    td.amps() = (tp.amps() + tm.amps()) / std::sqrt(2.0);
    ta.amps() = (tp.amps() - tm.amps()) / std::sqrt(2.0);

    auto q = [&](Pol p, Pol partner) {
        const double prob = set.at(p).second;
        const double total = prob + set.at(partner).second;
        if (total <= 0.0)
            throw MissingProjection(std::string("zero total probability in basis of ") +
                                    pol_name(p));
        return prob / total;
    };
    auto diag = [&](Pol p, Pol partner, const FockVector& cat_vec) {
        return q(p, partner) * fidelity(set.at(p).first, cat_vec);
    };

    const double d_plus = diag(Pol::H, Pol::V, tp);   // rho_{H Theta+, H Theta+}
    const double d_minus = diag(Pol::V, Pol::H, tm);  // rho_{V Theta-, V Theta-}
    const double combo = diag(Pol::D, Pol::A, td) + diag(Pol::A, Pol::D, ta) -
                         diag(Pol::D, Pol::A, ta) - diag(Pol::A, Pol::D, td);
    const double residual =
        2.0 * std::sqrt(diag(Pol::H, Pol::V, tm) * diag(Pol::V, Pol::H, tp));

    out.f_lb = 0.5 * (d_plus + d_minus - combo - residual);
    if (out.f_lb > 1.0 + 1e-6) throw NonPhysicalBound(out.f_lb);
    out.certified = out.f_lb > 0.5;
    return out;
}

double max_entangled_fidelity(const DensityOperator& two_mode) {
    if (two_mode.reg().n_modes() != 2 || two_mode.reg().mode(0).cutoff != 1)
        throw DimensionMismatch("expected a (qubit x CV) two-mode state");
    const long dc = two_mode.dim() / 2;
    const MatrixXcd hh = two_mode.matrix().block(0, 0, dc, dc);
    const MatrixXcd vv = two_mode.matrix().block(dc, dc, dc, dc);
    const MatrixXcd hv = two_mode.matrix().block(0, dc, dc, dc);

    Eigen::SelfAdjointEigenSolver<MatrixXcd> eh(hh), ev(vv);
    const VectorXcd psi_h = eh.eigenvectors().col(dc - 1);  // largest eigenvalue last
    const VectorXcd psi_v = ev.eigenvectors().col(dc - 1);
    const double p_h = (psi_h.adjoint() * hh * psi_h)(0).real();
    const double p_v = (psi_v.adjoint() * vv * psi_v)(0).real();
    const cplx cross = (psi_h.adjoint() * hv * psi_v)(0);
    return 0.5 * (p_h + p_v) + std::abs(cross);
}

// ---------------------------------------------------------------------------
// Bloch-sphere mean

BlochScan mean_bloch_fidelity(const ProtocolParams& params, int n_grid,
                              double phi_origin) {
    if (n_grid < 100) throw DimensionMismatch("Bloch grid needs n_grid >= 100");
    // Everything happens inside the orthonormal {Theta+(g+), Theta-(g-)} span,
    // so the scan is exact 2x2 algebra.
    const double k = params.beta_over_alpha * params.beta_over_alpha;
    const double ratio = params.ratio_pdb_pgood_at_H;
    const double p_db = ratio * k;  // p_good in units |alpha|^2/2, input H

    const int n_theta = std::max(2, int(std::lround(std::sqrt(n_grid / 2.0))));
    const int n_phi = (n_grid + n_theta - 1) / n_theta;

    BlochScan scan;
    scan.map.reserve(std::size_t(n_theta) * n_phi);
    double acc = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double cos_theta = -1.0 + 2.0 * (i + 0.5) / n_theta;
        const double theta = std::acos(cos_theta);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = phi_origin + 2.0 * std::numbers::pi * (j + 0.5) / n_phi;
            const cplx a = std::cos(theta / 2.0);
            const cplx b = std::polar(std::sin(theta / 2.0), phi);
            // model output: N(a beta |Th-> - b alpha |Th+>) mixed with |Th+>
            const double u = std::norm(a);
            const double p_good = u * k + (1.0 - u);
            const double w = p_db / (p_good + p_db);
            // target: N(a |Th-> - b |Th+>); overlap with the model state
            const cplx tgt_m = a, tgt_p = -b;
            const cplx phi_m = a * params.beta_over_alpha, phi_p = -b;
            const cplx ov = (std::conj(tgt_m) * phi_m + std::conj(tgt_p) * phi_p) /
                            std::sqrt(p_good);
            const double f = (1.0 - w) * std::norm(ov) + w * std::norm(tgt_p);
            acc += f;
            scan.min = std::min(scan.min, f);
            scan.max = std::max(scan.max, f);
            scan.map.push_back({theta, phi, f});
        }
    }
    scan.mean = acc / double(scan.map.size());
    scan.beats_classical = scan.mean > 2.0 / 3.0;
    return scan;
}

// ---------------------------------------------------------------------------
// Rates

Rates rates(const RateParams& params) {
    const double r2 = params.R_rep * params.R_rep;
    Rates out;
    out.p_db = 1.5 * params.eta_spcm * params.R_B * params.R_B / r2;
    out.p_good = params.eta_spcm * params.R_B *
                 (std::norm(params.b) * params.R_alpha +
                  std::norm(params.a) * params.R_beta) /
                 r2;
    out.triple_rate_hz = params.R_rep * (out.p_good + out.p_db);
    return out;
}

}  // namespace polarcat
